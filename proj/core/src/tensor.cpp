#include "vckit/tensor.hpp"

#include "vckit/errors.hpp"
#include "vckit/fft.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <unordered_set>

namespace vckit {

using detail::TensorNode;

namespace {

size_t shape_size(const std::vector<int> &shape) {
    size_t n = 1;
    for (int d : shape) {
        if (d <= 0)
            throw ParamError("tensor dimensions must be positive");
        n *= static_cast<size_t>(d);
    }
    return n;
}

std::shared_ptr<TensorNode> make_leaf(std::vector<int> shape, std::vector<double> value,
                                      bool requires_grad) {
    auto node = std::make_shared<TensorNode>();
    node->shape = std::move(shape);
    node->value = std::move(value);
    node->requires_grad = requires_grad;
    return node;
}

// Records the op only if a parent participates in differentiation.
Tensor make_op(std::vector<int> shape, std::vector<double> value,
               std::vector<std::shared_ptr<TensorNode>> parents,
               std::function<void(TensorNode &)> backward_fn) {
    auto node = std::make_shared<TensorNode>();
    node->shape = std::move(shape);
    node->value = std::move(value);
    bool needs = false;
    for (const auto &p : parents)
        needs = needs || p->requires_grad;
    node->requires_grad = needs;
    if (needs) {
        node->parents = std::move(parents);
        node->backward_fn = std::move(backward_fn);
    }
    return Tensor(std::move(node));
}

void check_defined(const Tensor &t) {
    if (!t.defined())
        throw ParamError("operation on an undefined tensor");
}

enum class Broadcast { same, scalar, channel };

Broadcast broadcast_kind(const TensorNode &a, const TensorNode &b) {
    if (a.shape == b.shape)
        return Broadcast::same;
    if (b.size() == 1)
        return Broadcast::scalar;
    if (a.shape.size() == 2 && b.shape.size() == 1 && b.shape[0] == a.shape[1])
        return Broadcast::channel;
    throw ParamError("shape mismatch: only equal shapes, scalar, or per-channel "
                     "broadcasts are supported");
}

} // namespace

Tensor Tensor::zeros(std::vector<int> shape, bool requires_grad) {
    size_t n = shape_size(shape);
    return Tensor(make_leaf(std::move(shape), std::vector<double>(n, 0.0), requires_grad));
}

Tensor Tensor::from_data(std::vector<int> shape, std::vector<double> data, bool requires_grad) {
    if (shape_size(shape) != data.size())
        throw ParamError("tensor data length does not match shape");
    return Tensor(make_leaf(std::move(shape), std::move(data), requires_grad));
}

Tensor Tensor::scalar(double v, bool requires_grad) {
    return Tensor(make_leaf({1}, {v}, requires_grad));
}

const std::vector<int> &Tensor::shape() const {
    check_defined(*this);
    return node_->shape;
}

size_t Tensor::size() const {
    check_defined(*this);
    return node_->value.size();
}

const std::vector<double> &Tensor::values() const {
    check_defined(*this);
    return node_->value;
}

std::vector<double> &Tensor::mutable_values() {
    check_defined(*this);
    return node_->value;
}

const std::vector<double> &Tensor::grad() const {
    check_defined(*this);
    node_->ensure_grad();
    return node_->grad;
}

bool Tensor::requires_grad() const {
    check_defined(*this);
    return node_->requires_grad;
}

double Tensor::item() const {
    check_defined(*this);
    if (node_->value.size() != 1)
        throw ParamError("item() requires a single-element tensor");
    return node_->value[0];
}

void Tensor::zero_grad() const {
    check_defined(*this);
    node_->grad.assign(node_->value.size(), 0.0);
}

void Tensor::backward() const {
    check_defined(*this);
    if (node_->value.size() != 1)
        throw ParamError("backward() requires a scalar tensor");

    // iterative post-order DFS for a deterministic topological order
    std::vector<TensorNode *> order;
    std::unordered_set<TensorNode *> visited;
    std::vector<std::pair<TensorNode *, size_t>> stack;
    stack.emplace_back(node_.get(), 0);
    visited.insert(node_.get());
    while (!stack.empty()) {
        auto &[node, idx] = stack.back();
        if (idx < node->parents.size()) {
            TensorNode *parent = node->parents[idx].get();
            ++idx;
            if (parent->requires_grad && !visited.count(parent)) {
                visited.insert(parent);
                stack.emplace_back(parent, 0);
            }
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }

    for (TensorNode *n : order)
        n->ensure_grad();
    node_->grad[0] = 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if ((*it)->backward_fn)
            (*it)->backward_fn(**it);
    }
}

// ---------------------------------------------------------------- elementwise

namespace {

Tensor binary_op(const Tensor &a, const Tensor &b, double (*fwd)(double, double),
                 void (*bwd)(double ga_in, double x, double y, double &ga, double &gb)) {
    check_defined(a);
    check_defined(b);
    auto an = a.node();
    auto bn = b.node();
    const Broadcast kind = broadcast_kind(*an, *bn);
    const size_t n = an->size();
    const int cols = kind == Broadcast::channel ? an->shape[1] : 1;

    std::vector<double> out(n);
    for (size_t i = 0; i < n; ++i) {
        const size_t bi = kind == Broadcast::same ? i
                          : kind == Broadcast::scalar ? 0
                                                      : i % static_cast<size_t>(cols);
        out[i] = fwd(an->value[i], bn->value[bi]);
    }
    auto *ap = an.get();
    auto *bp = bn.get();
    return make_op(an->shape, std::move(out), {an, bn}, [ap, bp, kind, cols, bwd](TensorNode &self) {
        ap->ensure_grad();
        bp->ensure_grad();
        const size_t n = self.size();
        for (size_t i = 0; i < n; ++i) {
            const size_t bi = kind == Broadcast::same ? i
                              : kind == Broadcast::scalar ? 0
                                                          : i % static_cast<size_t>(cols);
            double ga = 0.0, gb = 0.0;
            bwd(self.grad[i], ap->value[i], bp->value[bi], ga, gb);
            ap->grad[i] += ga;
            bp->grad[bi] += gb;
        }
    });
}

} // namespace

Tensor add(const Tensor &a, const Tensor &b) {
    return binary_op(
        a, b, [](double x, double y) { return x + y; },
        [](double g, double, double, double &ga, double &gb) {
            ga = g;
            gb = g;
        });
}

Tensor sub(const Tensor &a, const Tensor &b) {
    return binary_op(
        a, b, [](double x, double y) { return x - y; },
        [](double g, double, double, double &ga, double &gb) {
            ga = g;
            gb = -g;
        });
}

Tensor mul(const Tensor &a, const Tensor &b) {
    return binary_op(
        a, b, [](double x, double y) { return x * y; },
        [](double g, double x, double y, double &ga, double &gb) {
            ga = g * y;
            gb = g * x;
        });
}

Tensor div(const Tensor &a, const Tensor &b) {
    check_defined(b);
    if (b.node()->shape.size() == 1 && b.node()->shape[0] != 1 && a.shape() != b.shape())
        throw ParamError("div supports equal shapes or a scalar divisor");
    return binary_op(
        a, b, [](double x, double y) { return x / y; },
        [](double g, double x, double y, double &ga, double &gb) {
            ga = g / y;
            gb = -g * x / (y * y);
        });
}

namespace {

Tensor unary_op(const Tensor &a, double (*fwd)(double), double (*dfn)(double x, double y)) {
    check_defined(a);
    auto an = a.node();
    std::vector<double> out(an->size());
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = fwd(an->value[i]);
    auto *ap = an.get();
    return make_op(an->shape, std::move(out), {an}, [ap, dfn](TensorNode &self) {
        ap->ensure_grad();
        for (size_t i = 0; i < self.size(); ++i)
            ap->grad[i] += self.grad[i] * dfn(ap->value[i], self.value[i]);
    });
}

} // namespace

Tensor add_scalar(const Tensor &a, double c) {
    check_defined(a);
    auto an = a.node();
    std::vector<double> out = an->value;
    for (double &v : out)
        v += c;
    auto *ap = an.get();
    return make_op(an->shape, std::move(out), {an}, [ap](TensorNode &self) {
        ap->ensure_grad();
        for (size_t i = 0; i < self.size(); ++i)
            ap->grad[i] += self.grad[i];
    });
}

Tensor mul_scalar(const Tensor &a, double c) {
    check_defined(a);
    auto an = a.node();
    std::vector<double> out = an->value;
    for (double &v : out)
        v *= c;
    auto *ap = an.get();
    return make_op(an->shape, std::move(out), {an}, [ap, c](TensorNode &self) {
        ap->ensure_grad();
        for (size_t i = 0; i < self.size(); ++i)
            ap->grad[i] += self.grad[i] * c;
    });
}

Tensor relu(const Tensor &a) {
    return unary_op(
        a, [](double x) { return x > 0.0 ? x : 0.0; },
        [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor leaky_relu(const Tensor &a, double alpha) {
    check_defined(a);
    auto an = a.node();
    std::vector<double> out(an->size());
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = an->value[i] > 0.0 ? an->value[i] : alpha * an->value[i];
    auto *ap = an.get();
    return make_op(an->shape, std::move(out), {an}, [ap, alpha](TensorNode &self) {
        ap->ensure_grad();
        for (size_t i = 0; i < self.size(); ++i)
            ap->grad[i] += self.grad[i] * (ap->value[i] > 0.0 ? 1.0 : alpha);
    });
}

Tensor tanh_t(const Tensor &a) {
    return unary_op(
        a, [](double x) { return std::tanh(x); },
        [](double, double y) { return 1.0 - y * y; });
}

Tensor abs_t(const Tensor &a) {
    return unary_op(
        a, [](double x) { return std::fabs(x); },
        [](double x, double) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

Tensor square(const Tensor &a) {
    return unary_op(
        a, [](double x) { return x * x; }, [](double x, double) { return 2.0 * x; });
}

Tensor sqrt_t(const Tensor &a) {
    return unary_op(
        a, [](double x) { return std::sqrt(x); },
        [](double, double y) { return 0.5 / std::max(y, 1e-12); });
}

Tensor log_t(const Tensor &a) {
    return unary_op(
        a, [](double x) { return std::log(x); }, [](double x, double) { return 1.0 / x; });
}

Tensor exp_t(const Tensor &a) {
    return unary_op(
        a, [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

// ------------------------------------------------------------------- shape

Tensor reshape(const Tensor &a, std::vector<int> shape) {
    check_defined(a);
    if (shape_size(shape) != a.size())
        throw ParamError("reshape must preserve the element count");
    auto an = a.node();
    auto *ap = an.get();
    return make_op(std::move(shape), an->value, {an}, [ap](TensorNode &self) {
        ap->ensure_grad();
        for (size_t i = 0; i < self.size(); ++i)
            ap->grad[i] += self.grad[i];
    });
}

Tensor take_rows(const Tensor &a, int n) {
    check_defined(a);
    auto an = a.node();
    if (an->shape.empty() || n <= 0 || n > an->shape[0])
        throw ParamError("take_rows: row count out of range");
    size_t row_elems = an->size() / static_cast<size_t>(an->shape[0]);
    std::vector<int> shape = an->shape;
    shape[0] = n;
    std::vector<double> out(an->value.begin(),
                            an->value.begin() + static_cast<long>(row_elems * n));
    auto *ap = an.get();
    return make_op(std::move(shape), std::move(out), {an}, [ap](TensorNode &self) {
        ap->ensure_grad();
        for (size_t i = 0; i < self.size(); ++i)
            ap->grad[i] += self.grad[i];
    });
}

Tensor concat_cols(const Tensor &a, const Tensor &b) {
    check_defined(a);
    check_defined(b);
    auto an = a.node();
    auto bn = b.node();
    if (an->shape.size() != 2 || bn->shape.size() != 2 || an->shape[0] != bn->shape[0])
        throw ParamError("concat_cols requires matrices with equal row counts");
    const int T = an->shape[0], ca = an->shape[1], cb = bn->shape[1];
    std::vector<double> out(static_cast<size_t>(T) * (ca + cb));
    for (int t = 0; t < T; ++t) {
        std::copy_n(an->value.begin() + static_cast<long>(t) * ca, ca,
                    out.begin() + static_cast<long>(t) * (ca + cb));
        std::copy_n(bn->value.begin() + static_cast<long>(t) * cb, cb,
                    out.begin() + static_cast<long>(t) * (ca + cb) + ca);
    }
    auto *ap = an.get();
    auto *bp = bn.get();
    return make_op({T, ca + cb}, std::move(out), {an, bn}, [ap, bp, T, ca, cb](TensorNode &self) {
        ap->ensure_grad();
        bp->ensure_grad();
        for (int t = 0; t < T; ++t) {
            for (int c = 0; c < ca; ++c)
                ap->grad[static_cast<size_t>(t) * ca + c] +=
                    self.grad[static_cast<size_t>(t) * (ca + cb) + c];
            for (int c = 0; c < cb; ++c)
                bp->grad[static_cast<size_t>(t) * cb + c] +=
                    self.grad[static_cast<size_t>(t) * (ca + cb) + ca + c];
        }
    });
}

Tensor select_col(const Tensor &a, int col) {
    check_defined(a);
    auto an = a.node();
    if (an->shape.size() != 2 || col < 0 || col >= an->shape[1])
        throw ParamError("select_col: bad column");
    const int T = an->shape[0], C = an->shape[1];
    std::vector<double> out(static_cast<size_t>(T));
    for (int t = 0; t < T; ++t)
        out[static_cast<size_t>(t)] = an->value[static_cast<size_t>(t) * C + col];
    auto *ap = an.get();
    return make_op({T}, std::move(out), {an}, [ap, col, C](TensorNode &self) {
        ap->ensure_grad();
        for (size_t t = 0; t < self.size(); ++t)
            ap->grad[t * C + static_cast<size_t>(col)] += self.grad[t];
    });
}

Tensor stack_cols(const std::vector<Tensor> &cols) {
    if (cols.empty())
        throw ParamError("stack_cols needs at least one column");
    const int T = cols[0].dim(0);
    const int k = static_cast<int>(cols.size());
    std::vector<std::shared_ptr<TensorNode>> parents;
    for (const auto &c : cols) {
        check_defined(c);
        if (c.rank() != 1 || c.dim(0) != T)
            throw ParamError("stack_cols requires rank-1 tensors of equal length");
        parents.push_back(c.node());
    }
    std::vector<double> out(static_cast<size_t>(T) * k);
    for (int j = 0; j < k; ++j)
        for (int t = 0; t < T; ++t)
            out[static_cast<size_t>(t) * k + j] = parents[static_cast<size_t>(j)]->value[static_cast<size_t>(t)];
    std::vector<TensorNode *> raw;
    for (auto &p : parents)
        raw.push_back(p.get());
    return make_op({T, k}, std::move(out), parents, [raw, T, k](TensorNode &self) {
        for (int j = 0; j < k; ++j) {
            raw[static_cast<size_t>(j)]->ensure_grad();
            for (int t = 0; t < T; ++t)
                raw[static_cast<size_t>(j)]->grad[static_cast<size_t>(t)] +=
                    self.grad[static_cast<size_t>(t) * k + j];
        }
    });
}

Tensor avg_pool_rows(const Tensor &a, int k) {
    check_defined(a);
    auto an = a.node();
    if (an->shape.empty() || k <= 0 || an->shape[0] % k != 0)
        throw ParamError("avg_pool_rows: row count must be a multiple of k");
    const int rows = an->shape[0] / k;
    const size_t row_elems = an->size() / static_cast<size_t>(an->shape[0]);
    std::vector<int> shape = an->shape;
    shape[0] = rows;
    std::vector<double> out(static_cast<size_t>(rows) * row_elems, 0.0);
    for (int r = 0; r < rows; ++r)
        for (int j = 0; j < k; ++j)
            for (size_t e = 0; e < row_elems; ++e)
                out[static_cast<size_t>(r) * row_elems + e] +=
                    an->value[(static_cast<size_t>(r) * k + static_cast<size_t>(j)) * row_elems + e] / k;
    auto *ap = an.get();
    return make_op(std::move(shape), std::move(out), {an}, [ap, rows, k, row_elems](TensorNode &self) {
        ap->ensure_grad();
        for (int r = 0; r < rows; ++r)
            for (int j = 0; j < k; ++j)
                for (size_t e = 0; e < row_elems; ++e)
                    ap->grad[(static_cast<size_t>(r) * k + static_cast<size_t>(j)) * row_elems + e] +=
                        self.grad[static_cast<size_t>(r) * row_elems + e] / k;
    });
}

// --------------------------------------------------------------- reductions

Tensor sum_all(const Tensor &a) {
    check_defined(a);
    auto an = a.node();
    double s = 0.0;
    for (double v : an->value)
        s += v;
    auto *ap = an.get();
    return make_op({1}, {s}, {an}, [ap](TensorNode &self) {
        ap->ensure_grad();
        for (double &g : ap->grad)
            g += self.grad[0];
    });
}

Tensor mean_all(const Tensor &a) {
    check_defined(a);
    auto an = a.node();
    double s = 0.0;
    for (double v : an->value)
        s += v;
    const double inv = 1.0 / static_cast<double>(an->size());
    auto *ap = an.get();
    return make_op({1}, {s * inv}, {an}, [ap, inv](TensorNode &self) {
        ap->ensure_grad();
        for (double &g : ap->grad)
            g += self.grad[0] * inv;
    });
}

Tensor row_sums(const Tensor &a) {
    check_defined(a);
    auto an = a.node();
    if (an->shape.size() != 2)
        throw ParamError("row_sums requires a matrix");
    const int T = an->shape[0], C = an->shape[1];
    std::vector<double> out(static_cast<size_t>(T), 0.0);
    for (int t = 0; t < T; ++t)
        for (int c = 0; c < C; ++c)
            out[static_cast<size_t>(t)] += an->value[static_cast<size_t>(t) * C + c];
    auto *ap = an.get();
    return make_op({T}, std::move(out), {an}, [ap, C](TensorNode &self) {
        ap->ensure_grad();
        for (size_t t = 0; t < self.size(); ++t)
            for (int c = 0; c < C; ++c)
                ap->grad[t * static_cast<size_t>(C) + static_cast<size_t>(c)] += self.grad[t];
    });
}

// ------------------------------------------------------- linear algebra / nets

Tensor matmul(const Tensor &a, const Tensor &b) {
    check_defined(a);
    check_defined(b);
    auto an = a.node();
    auto bn = b.node();
    if (an->shape.size() != 2 || bn->shape.size() != 2 || an->shape[1] != bn->shape[0])
        throw ParamError("matmul: inner dimensions must agree");
    const int m = an->shape[0], k = an->shape[1], n = bn->shape[1];
    std::vector<double> out(static_cast<size_t>(m) * n, 0.0);
    for (int i = 0; i < m; ++i)
        for (int p = 0; p < k; ++p) {
            const double av = an->value[static_cast<size_t>(i) * k + p];
            if (av == 0.0)
                continue;
            for (int j = 0; j < n; ++j)
                out[static_cast<size_t>(i) * n + j] += av * bn->value[static_cast<size_t>(p) * n + j];
        }
    auto *ap = an.get();
    auto *bp = bn.get();
    return make_op({m, n}, std::move(out), {an, bn}, [ap, bp, m, k, n](TensorNode &self) {
        ap->ensure_grad();
        bp->ensure_grad();
        // ga = g b^T, gb = a^T g
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) {
                const double g = self.grad[static_cast<size_t>(i) * n + j];
                if (g == 0.0)
                    continue;
                for (int p = 0; p < k; ++p) {
                    ap->grad[static_cast<size_t>(i) * k + p] +=
                        g * bp->value[static_cast<size_t>(p) * n + j];
                    bp->grad[static_cast<size_t>(p) * n + j] +=
                        g * ap->value[static_cast<size_t>(i) * k + p];
                }
            }
    });
}

Tensor mul_cols(const Tensor &a, const Tensor &v) {
    check_defined(a);
    check_defined(v);
    auto an = a.node();
    auto vn = v.node();
    if (an->shape.size() != 2 || vn->shape.size() != 1 || vn->shape[0] != an->shape[0])
        throw ParamError("mul_cols: expected [T,C] and [T]");
    const int T = an->shape[0], C = an->shape[1];
    std::vector<double> out(an->size());
    for (int t = 0; t < T; ++t)
        for (int c = 0; c < C; ++c)
            out[static_cast<size_t>(t) * C + c] =
                an->value[static_cast<size_t>(t) * C + c] * vn->value[static_cast<size_t>(t)];
    auto *ap = an.get();
    auto *vp = vn.get();
    return make_op({T, C}, std::move(out), {an, vn}, [ap, vp, T, C](TensorNode &self) {
        ap->ensure_grad();
        vp->ensure_grad();
        for (int t = 0; t < T; ++t) {
            double acc = 0.0;
            for (int c = 0; c < C; ++c) {
                const size_t i = static_cast<size_t>(t) * C + c;
                ap->grad[i] += self.grad[i] * vp->value[static_cast<size_t>(t)];
                acc += self.grad[i] * ap->value[i];
            }
            vp->grad[static_cast<size_t>(t)] += acc;
        }
    });
}

Tensor softmax_lastdim(const Tensor &a) {
    check_defined(a);
    auto an = a.node();
    if (an->shape.empty())
        throw ParamError("softmax needs at least rank 1");
    const int C = an->shape.back();
    const size_t rows = an->size() / static_cast<size_t>(C);
    std::vector<double> out(an->size());
    for (size_t r = 0; r < rows; ++r) {
        const double *x = an->value.data() + r * static_cast<size_t>(C);
        double *y = out.data() + r * static_cast<size_t>(C);
        double mx = x[0];
        for (int c = 1; c < C; ++c)
            mx = std::max(mx, x[c]);
        double sum = 0.0;
        for (int c = 0; c < C; ++c) {
            y[c] = std::exp(x[c] - mx);
            sum += y[c];
        }
        for (int c = 0; c < C; ++c)
            y[c] /= sum;
    }
    auto *ap = an.get();
    return make_op(an->shape, std::move(out), {an}, [ap, C, rows](TensorNode &self) {
        ap->ensure_grad();
        for (size_t r = 0; r < rows; ++r) {
            const double *y = self.value.data() + r * static_cast<size_t>(C);
            const double *g = self.grad.data() + r * static_cast<size_t>(C);
            double dot = 0.0;
            for (int c = 0; c < C; ++c)
                dot += g[c] * y[c];
            for (int c = 0; c < C; ++c)
                ap->grad[r * static_cast<size_t>(C) + static_cast<size_t>(c)] +=
                    y[c] * (g[c] - dot);
        }
    });
}

Tensor layer_norm_lastdim(const Tensor &a, double eps) {
    check_defined(a);
    auto an = a.node();
    if (an->shape.empty())
        throw ParamError("layer_norm needs at least rank 1");
    const int C = an->shape.back();
    const size_t rows = an->size() / static_cast<size_t>(C);
    std::vector<double> out(an->size());
    auto inv_std = std::make_shared<std::vector<double>>(rows);
    for (size_t r = 0; r < rows; ++r) {
        const double *x = an->value.data() + r * static_cast<size_t>(C);
        double *y = out.data() + r * static_cast<size_t>(C);
        double mean = 0.0;
        for (int c = 0; c < C; ++c)
            mean += x[c];
        mean /= C;
        double var = 0.0;
        for (int c = 0; c < C; ++c)
            var += (x[c] - mean) * (x[c] - mean);
        var /= C;
        const double inv = 1.0 / std::sqrt(var + eps);
        (*inv_std)[r] = inv;
        for (int c = 0; c < C; ++c)
            y[c] = (x[c] - mean) * inv;
    }
    auto *ap = an.get();
    return make_op(an->shape, std::move(out), {an}, [ap, C, rows, inv_std](TensorNode &self) {
        ap->ensure_grad();
        for (size_t r = 0; r < rows; ++r) {
            const double *xhat = self.value.data() + r * static_cast<size_t>(C);
            const double *g = self.grad.data() + r * static_cast<size_t>(C);
            double g_mean = 0.0, gx_mean = 0.0;
            for (int c = 0; c < C; ++c) {
                g_mean += g[c];
                gx_mean += g[c] * xhat[c];
            }
            g_mean /= C;
            gx_mean /= C;
            const double inv = (*inv_std)[r];
            for (int c = 0; c < C; ++c)
                ap->grad[r * static_cast<size_t>(C) + static_cast<size_t>(c)] +=
                    inv * (g[c] - g_mean - xhat[c] * gx_mean);
        }
    });
}

Tensor conv1d(const Tensor &x, const Tensor &w, const Tensor &b, int stride) {
    check_defined(x);
    check_defined(w);
    check_defined(b);
    auto xn = x.node();
    auto wn = w.node();
    auto bn = b.node();
    if (xn->shape.size() != 2 || wn->shape.size() != 3 || bn->shape.size() != 1)
        throw ParamError("conv1d: expected x [T,Cin], w [Cout,K,Cin], b [Cout]");
    const int T = xn->shape[0], cin = xn->shape[1];
    const int cout = wn->shape[0], K = wn->shape[1];
    if (wn->shape[2] != cin || bn->shape[0] != cout)
        throw ParamError("conv1d: channel dimensions do not match");
    if (stride <= 0)
        throw ParamError("conv1d: stride must be positive");

    const int out_t = (T + stride - 1) / stride;
    const int pad_total = std::max(0, (out_t - 1) * stride + K - T);
    const int pad_left = pad_total / 2;

    std::vector<double> out(static_cast<size_t>(out_t) * cout);
    for (int t = 0; t < out_t; ++t) {
        for (int co = 0; co < cout; ++co)
            out[static_cast<size_t>(t) * cout + co] = bn->value[static_cast<size_t>(co)];
        for (int k = 0; k < K; ++k) {
            const int s = t * stride + k - pad_left;
            if (s < 0 || s >= T)
                continue;
            const double *xrow = xn->value.data() + static_cast<size_t>(s) * cin;
            for (int co = 0; co < cout; ++co) {
                const double *wrow =
                    wn->value.data() + (static_cast<size_t>(co) * K + static_cast<size_t>(k)) * cin;
                double acc = 0.0;
                for (int ci = 0; ci < cin; ++ci)
                    acc += xrow[ci] * wrow[ci];
                out[static_cast<size_t>(t) * cout + co] += acc;
            }
        }
    }

    auto *xp = xn.get();
    auto *wp = wn.get();
    auto *bp = bn.get();
    return make_op({out_t, cout}, std::move(out), {xn, wn, bn},
                   [xp, wp, bp, T, cin, cout, K, stride, pad_left, out_t](TensorNode &self) {
                       xp->ensure_grad();
                       wp->ensure_grad();
                       bp->ensure_grad();
                       for (int t = 0; t < out_t; ++t) {
                           const double *g = self.grad.data() + static_cast<size_t>(t) * cout;
                           for (int co = 0; co < cout; ++co)
                               bp->grad[static_cast<size_t>(co)] += g[co];
                           for (int k = 0; k < K; ++k) {
                               const int s = t * stride + k - pad_left;
                               if (s < 0 || s >= T)
                                   continue;
                               const double *xrow = xp->value.data() + static_cast<size_t>(s) * cin;
                               double *gxrow = xp->grad.data() + static_cast<size_t>(s) * cin;
                               for (int co = 0; co < cout; ++co) {
                                   const double gv = g[co];
                                   if (gv == 0.0)
                                       continue;
                                   const size_t woff =
                                       (static_cast<size_t>(co) * K + static_cast<size_t>(k)) * cin;
                                   for (int ci = 0; ci < cin; ++ci) {
                                       gxrow[ci] += gv * wp->value[woff + static_cast<size_t>(ci)];
                                       wp->grad[woff + static_cast<size_t>(ci)] += gv * xrow[ci];
                                   }
                               }
                           }
                       }
                   });
}

Tensor conv1d_transpose(const Tensor &x, const Tensor &w, const Tensor &b, int stride) {
    check_defined(x);
    check_defined(w);
    check_defined(b);
    auto xn = x.node();
    auto wn = w.node();
    auto bn = b.node();
    if (xn->shape.size() != 2 || wn->shape.size() != 3 || bn->shape.size() != 1)
        throw ParamError("conv1d_transpose: expected x [T,Cin], w [Cout,K,Cin], b [Cout]");
    const int T = xn->shape[0], cin = xn->shape[1];
    const int cout = wn->shape[0], K = wn->shape[1];
    if (wn->shape[2] != cin || bn->shape[0] != cout)
        throw ParamError("conv1d_transpose: channel dimensions do not match");
    if (stride <= 0 || K < stride)
        throw ParamError("conv1d_transpose: need stride > 0 and kernel >= stride");

    const int out_t = T * stride;
    const int crop = (K - stride) / 2;

    std::vector<double> out(static_cast<size_t>(out_t) * cout);
    for (int t = 0; t < out_t; ++t)
        for (int co = 0; co < cout; ++co)
            out[static_cast<size_t>(t) * cout + co] = bn->value[static_cast<size_t>(co)];
    for (int t = 0; t < T; ++t) {
        const double *xrow = xn->value.data() + static_cast<size_t>(t) * cin;
        for (int k = 0; k < K; ++k) {
            const int o = t * stride + k - crop;
            if (o < 0 || o >= out_t)
                continue;
            for (int co = 0; co < cout; ++co) {
                const double *wrow =
                    wn->value.data() + (static_cast<size_t>(co) * K + static_cast<size_t>(k)) * cin;
                double acc = 0.0;
                for (int ci = 0; ci < cin; ++ci)
                    acc += xrow[ci] * wrow[ci];
                out[static_cast<size_t>(o) * cout + co] += acc;
            }
        }
    }

    auto *xp = xn.get();
    auto *wp = wn.get();
    auto *bp = bn.get();
    return make_op({out_t, cout}, std::move(out), {xn, wn, bn},
                   [xp, wp, bp, T, cin, cout, K, stride, crop, out_t](TensorNode &self) {
                       xp->ensure_grad();
                       wp->ensure_grad();
                       bp->ensure_grad();
                       for (int t = 0; t < out_t; ++t) {
                           const double *g = self.grad.data() + static_cast<size_t>(t) * cout;
                           for (int co = 0; co < cout; ++co)
                               bp->grad[static_cast<size_t>(co)] += g[co];
                       }
                       for (int t = 0; t < T; ++t) {
                           const double *xrow = xp->value.data() + static_cast<size_t>(t) * cin;
                           double *gxrow = xp->grad.data() + static_cast<size_t>(t) * cin;
                           for (int k = 0; k < K; ++k) {
                               const int o = t * stride + k - crop;
                               if (o < 0 || o >= out_t)
                                   continue;
                               const double *g = self.grad.data() + static_cast<size_t>(o) * cout;
                               for (int co = 0; co < cout; ++co) {
                                   const double gv = g[co];
                                   if (gv == 0.0)
                                       continue;
                                   const size_t woff =
                                       (static_cast<size_t>(co) * K + static_cast<size_t>(k)) * cin;
                                   for (int ci = 0; ci < cin; ++ci) {
                                       gxrow[ci] += gv * wp->value[woff + static_cast<size_t>(ci)];
                                       wp->grad[woff + static_cast<size_t>(ci)] += gv * xrow[ci];
                                   }
                               }
                           }
                       }
                   });
}

Tensor stft_magnitude(const Tensor &x, int fft_size, int hop, int win) {
    check_defined(x);
    auto xn = x.node();
    if (xn->shape.size() != 1)
        throw ParamError("stft_magnitude expects a rank-1 signal");
    if (hop <= 0 || win <= 0 || win > fft_size || (fft_size & (fft_size - 1)) != 0)
        throw ParamError("stft_magnitude: need hop > 0, win <= fft, fft a power of two");
    const int N = xn->shape[0];
    if (N < win)
        throw ParamError("stft_magnitude: signal shorter than the window");
    const int frames = 1 + (N - win) / hop;
    const int bins = fft_size / 2 + 1;
    constexpr double kEps = 1e-12;

    std::vector<double> window(static_cast<size_t>(win));
    for (int i = 0; i < win; ++i)
        window[static_cast<size_t>(i)] =
            0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / win));

    std::vector<double> out(static_cast<size_t>(frames) * bins);
    auto spectra = std::make_shared<std::vector<std::complex<double>>>(
        static_cast<size_t>(frames) * bins);
    std::vector<std::complex<double>> buf(static_cast<size_t>(fft_size));
    for (int f = 0; f < frames; ++f) {
        std::fill(buf.begin(), buf.end(), std::complex<double>(0.0, 0.0));
        const int start = f * hop;
        for (int i = 0; i < win; ++i)
            buf[static_cast<size_t>(i)] =
                xn->value[static_cast<size_t>(start + i)] * window[static_cast<size_t>(i)];
        fft_inplace(buf, false);
        for (int k = 0; k < bins; ++k) {
            const auto z = buf[static_cast<size_t>(k)];
            (*spectra)[static_cast<size_t>(f) * bins + k] = z;
            out[static_cast<size_t>(f) * bins + k] =
                std::sqrt(z.real() * z.real() + z.imag() * z.imag() + kEps);
        }
    }

    auto *xp = xn.get();
    return make_op({frames, bins}, std::move(out), {xn},
                   [xp, spectra, window, frames, bins, fft_size, hop, win](TensorNode &self) {
                       xp->ensure_grad();
                       std::vector<std::complex<double>> c(static_cast<size_t>(fft_size));
                       for (int f = 0; f < frames; ++f) {
                           std::fill(c.begin(), c.end(), std::complex<double>(0.0, 0.0));
                           for (int k = 0; k < bins; ++k) {
                               const size_t i = static_cast<size_t>(f) * bins + k;
                               const double m = self.value[i];
                               c[static_cast<size_t>(k)] = self.grad[i] / m * (*spectra)[i];
                           }
                           // adjoint of the onesided DFT: inverse transform of the
                           // zero-extended bin gradients, real part, times window
                           fft_inplace(c, true);
                           const int start = f * hop;
                           for (int i = 0; i < win; ++i)
                               xp->grad[static_cast<size_t>(start + i)] +=
                                   window[static_cast<size_t>(i)] * c[static_cast<size_t>(i)].real();
                       }
                   });
}

} // namespace vckit
