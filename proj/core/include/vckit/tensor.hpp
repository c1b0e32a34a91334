#pragma once

#include <functional>
#include <memory>
#include <vector>

namespace vckit {

namespace detail {

struct TensorNode {
    std::vector<int> shape;
    std::vector<double> value;
    std::vector<double> grad;
    bool requires_grad = false;
    std::vector<std::shared_ptr<TensorNode>> parents;
    // pulls this node's grad and accumulates into the parents' grads
    std::function<void(TensorNode &)> backward_fn;

    size_t size() const { return value.size(); }
    void ensure_grad() {
        if (grad.size() != value.size())
            grad.assign(value.size(), 0.0);
    }
};

} // namespace detail

// Dense 64-bit tensor with recorded operations for reverse-mode
// differentiation. Value-semantic handle to a shared graph node;
// graphs are single-owner during construction and backward.
class Tensor {
  public:
    Tensor() = default;

    static Tensor zeros(std::vector<int> shape, bool requires_grad = false);
    static Tensor from_data(std::vector<int> shape, std::vector<double> data,
                            bool requires_grad = false);
    static Tensor scalar(double v, bool requires_grad = false);

    bool defined() const { return node_ != nullptr; }
    const std::vector<int> &shape() const;
    int dim(int i) const { return shape()[static_cast<size_t>(i)]; }
    int rank() const { return static_cast<int>(shape().size()); }
    size_t size() const;

    const std::vector<double> &values() const;
    std::vector<double> &mutable_values(); // leaf edits (e.g. optimizer steps)
    const std::vector<double> &grad() const;
    bool requires_grad() const;

    double item() const; // single-element tensors only

    // Reverse pass from a scalar: populates grad on every reachable
    // node that requires it; fan-out accumulates additively.
    void backward() const;
    void zero_grad() const;

    std::shared_ptr<detail::TensorNode> node() const { return node_; }
    explicit Tensor(std::shared_ptr<detail::TensorNode> n) : node_(std::move(n)) {}

  private:
    std::shared_ptr<detail::TensorNode> node_;
};

// ---- elementwise / broadcast ----
// add/sub/mul accept equal shapes, a scalar right operand, or a
// per-channel vector [C] against a matrix [T,C]. div accepts equal
// shapes or a scalar divisor. No other implicit broadcasting.
Tensor add(const Tensor &a, const Tensor &b);
Tensor sub(const Tensor &a, const Tensor &b);
Tensor mul(const Tensor &a, const Tensor &b);
Tensor div(const Tensor &a, const Tensor &b);
Tensor add_scalar(const Tensor &a, double c);
Tensor mul_scalar(const Tensor &a, double c);

Tensor relu(const Tensor &a);
Tensor leaky_relu(const Tensor &a, double alpha = 0.1);
Tensor tanh_t(const Tensor &a);
Tensor abs_t(const Tensor &a);
Tensor square(const Tensor &a);
Tensor sqrt_t(const Tensor &a);
Tensor log_t(const Tensor &a);
Tensor exp_t(const Tensor &a);

// ---- shape ----
Tensor reshape(const Tensor &a, std::vector<int> shape);
Tensor take_rows(const Tensor &a, int n);          // first n rows
Tensor concat_cols(const Tensor &a, const Tensor &b);
Tensor select_col(const Tensor &a, int col);       // [T,C] -> [T]
Tensor stack_cols(const std::vector<Tensor> &cols); // k x [T] -> [T,k]
Tensor avg_pool_rows(const Tensor &a, int k);      // rows averaged in groups of k

// ---- reductions ----
Tensor sum_all(const Tensor &a);
Tensor mean_all(const Tensor &a);
Tensor row_sums(const Tensor &a); // [T,C] -> [T]

// ---- linear algebra / nets ----
Tensor matmul(const Tensor &a, const Tensor &b);
Tensor mul_cols(const Tensor &a, const Tensor &v); // [T,C] x [T] broadcast over C
Tensor softmax_lastdim(const Tensor &a);
Tensor layer_norm_lastdim(const Tensor &a, double eps = 1e-5);

// x [T,Cin], w [Cout,K,Cin], b [Cout]; zero "same" padding, output
// length ceil(T/stride).
Tensor conv1d(const Tensor &x, const Tensor &w, const Tensor &b, int stride);

// Transposed counterpart; output length is exactly T*stride (requires
// K >= stride; the (K-stride)/2 leading samples of the full overlap-add
// are cropped).
Tensor conv1d_transpose(const Tensor &x, const Tensor &w, const Tensor &b, int stride);

// |STFT| of a rank-1 signal: Hann window of length `win`, zero-padded
// to fft_size, frames = 1 + (N - win)/hop, bins = fft_size/2 + 1.
// Magnitude is sqrt(re^2 + im^2 + 1e-12) so the backward is defined at 0.
Tensor stft_magnitude(const Tensor &x, int fft_size, int hop, int win);

} // namespace vckit
