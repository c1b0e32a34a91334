#pragma once

#include "vckit/tensor.hpp"

#include <functional>

namespace vckit {

// Central-difference verification of the reverse pass. `f` must build a
// fresh scalar graph from its argument on every call. Returns the max
// relative error over coordinates, with a 1e-8 denominator floor.
double grad_check(const std::function<Tensor(const Tensor &)> &f, const Tensor &x,
                  double eps = 1e-5);

} // namespace vckit
