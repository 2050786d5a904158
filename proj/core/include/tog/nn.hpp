#pragma once

#include <cstdint>
#include <vector>

#include "tog/autodiff.hpp"
#include "tog/random.hpp"
#include "tog/tensor.hpp"

namespace tog::nn {

enum class Mode { Train, Eval };

using Mask = std::vector<std::uint8_t>;

Value add(const Value& a, const Value& b);
Value sub(const Value& a, const Value& b);
Value mul(const Value& a, const Value& b);
Value scale(const Value& a, double c);

// (m,k) x (k,n) -> (m,n)
Value matmul(const Value& a, const Value& b);
// (m,k) x (n,k)^T -> (m,n)
Value matmul_nt(const Value& a, const Value& b);
// Broadcast row add: x (m,n) + r (n) per row.
Value add_row(const Value& x, const Value& r);
// Broadcast row multiply: x (m,n) * r (n) per row.
Value mul_row(const Value& x, const Value& r);
// x (m,k) -> x.w + b with w (k,n), b (n).
Value linear(const Value& x, const Value& w, const Value& b);

Value relu(const Value& x);
Value sigmoid(const Value& x);
// Row-wise softmax with max subtraction.
Value softmax_rows(const Value& x);
// Row-wise normalization with learned gain/bias, eps inside the sqrt.
Value layer_norm(const Value& x, const Value& gain, const Value& bias, double eps = 1e-5);
// Inverted-scaling dropout; identity in eval mode.
Value dropout(const Value& x, double p, Rng& rng, Mode mode);

// Mean binary cross entropy over a rank-1 score vector against 0/1 labels;
// probabilities are clamped to [1e-7, 1 - 1e-7].
Value bce_loss(const Value& scores, const Tensor& labels);

// Mean over rows with mask true -> rank-1 (cols).
Value masked_mean_rows(const Value& x, const Mask& mask);
// Zero out rows where keep is false.
Value zero_rows(const Value& x, const Mask& keep);

Value concat_cols(const std::vector<Value>& parts);
// Parts of shape (d) or (1,d) stacked into (n,d).
Value stack_rows(const std::vector<Value>& parts);
Value gather_rows(const Value& x, const std::vector<std::size_t>& idx);
// offsets has k+1 entries, offsets[k] == rows(x); per segment, per column max.
// Ties route the gradient to the lowest row index.
Value segment_max(const Value& x, const std::vector<std::size_t>& offsets);
Value slice_cols(const Value& x, std::size_t c0, std::size_t c1);
Value reshape(const Value& x, std::vector<std::size_t> shape);

Value sum(const Value& x);
Value mean_all(const Value& x);

// Batch normalization over the batch dimension of (B,d) with running
// statistics; eval mode reads them and never updates.
struct BatchNorm1d {
  Value gain;
  Value bias;
  Tensor running_mean;
  Tensor running_var;
  double momentum = 0.1;
  double eps = 1e-5;

  explicit BatchNorm1d(std::size_t width);
  Value forward(const Value& x, Mode mode);
};

struct Linear {
  Value w;
  Value b;

  Linear() = default;
  Linear(std::size_t in, std::size_t out, Rng& rng);
  Value forward(const Value& x) const { return linear(x, w, b); }
};

struct LayerNorm {
  Value gain;
  Value bias;

  LayerNorm() = default;
  explicit LayerNorm(std::size_t width);
  Value forward(const Value& x) const { return layer_norm(x, gain, bias); }
};

// Xavier-uniform init over [-sqrt(6/(in+out)), +sqrt(6/(in+out))].
Tensor xavier_uniform(std::size_t in, std::size_t out, Rng& rng);

}  // namespace tog::nn
