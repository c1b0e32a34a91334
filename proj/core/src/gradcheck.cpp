#include "vckit/gradcheck.hpp"

#include "vckit/errors.hpp"

#include <algorithm>
#include <cmath>

namespace vckit {

double grad_check(const std::function<Tensor(const Tensor &)> &f, const Tensor &x, double eps) {
    if (eps <= 0.0)
        throw ParamError("grad_check: eps must be positive");

    Tensor probe = Tensor::from_data(x.shape(), x.values(), true);
    Tensor out = f(probe);
    if (out.size() != 1)
        throw ParamError("grad_check: function must return a scalar");
    out.backward();
    const std::vector<double> analytic = probe.grad();

    std::vector<double> data = x.values();
    double worst = 0.0;
    for (size_t i = 0; i < data.size(); ++i) {
        const double keep = data[i];
        data[i] = keep + eps;
        const double hi = f(Tensor::from_data(x.shape(), data)).item();
        data[i] = keep - eps;
        const double lo = f(Tensor::from_data(x.shape(), data)).item();
        data[i] = keep;
        const double fd = (hi - lo) / (2.0 * eps);
        const double denom = std::max({1e-8, std::fabs(fd), std::fabs(analytic[i])});
        worst = std::max(worst, std::fabs(fd - analytic[i]) / denom);
    }
    return worst;
}

} // namespace vckit
