#include "tog/tensor.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace tog {

namespace {

std::size_t shape_size(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape) : shape_(std::move(shape)), data_(shape_size(shape_), 0.0) {}

Tensor::Tensor(std::initializer_list<std::size_t> shape) : Tensor(std::vector<std::size_t>(shape)) {}

Tensor Tensor::full(std::vector<std::size_t> shape, double value) {
  Tensor t(std::move(shape));
  t.fill(value);
  return t;
}

Tensor Tensor::scalar(double value) {
  Tensor t(std::vector<std::size_t>{});
  t.data_.assign(1, value);
  return t;
}

Tensor Tensor::row(std::vector<double> values) {
  Tensor t({values.size()});
  t.data_ = std::move(values);
  return t;
}

Tensor Tensor::from_rows(std::vector<std::vector<double>> rows) {
  if (rows.empty()) throw ShapeMismatch("from_rows: no rows");
  const std::size_t c = rows.front().size();
  Tensor t({rows.size(), c});
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != c) throw ShapeMismatch("from_rows: ragged rows");
    for (double v : r) t.data_[i++] = v;
  }
  return t;
}

std::size_t Tensor::rows() const {
  if (rank() == 2) return shape_[0];
  return 1;
}

std::size_t Tensor::cols() const {
  if (rank() == 2) return shape_[1];
  if (rank() == 1) return shape_[0];
  return size();
}

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool Tensor::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Tensor Tensor::reshaped(std::vector<std::size_t> shape) const {
  if (shape_size(shape) != size()) throw ShapeMismatch("reshape: element count mismatch");
  Tensor t = *this;
  t.shape_ = std::move(shape);
  return t;
}

std::string shape_string(const Tensor& t) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < t.shape().size(); ++i) {
    if (i) os << ",";
    os << t.shape()[i];
  }
  os << ")";
  return os.str();
}

}  // namespace tog
