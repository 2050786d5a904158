#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "tog/tensor.hpp"

namespace tog::nn {

// Reverse-mode autodiff over a dynamically built tape. Each op allocates a
// node holding its forward result and a closure that scatters the node's
// gradient into its parents. Graphs are DAGs; nodes only reference parents,
// so releasing the root frees the whole graph.
class Value;

struct Node {
  Tensor data;
  Tensor grad;
  bool requires_grad = false;
  bool grad_ready = false;
  std::uint64_t id = 0;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backprop;
};

class Value {
 public:
  Value() = default;
  explicit Value(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  bool defined() const { return node_ != nullptr; }

  Tensor& data() { return node_->data; }
  const Tensor& data() const { return node_->data; }
  const Tensor& grad() const { return node_->grad; }
  bool requires_grad() const { return node_->requires_grad; }

  const std::vector<std::size_t>& shape() const { return node_->data.shape(); }
  std::size_t size() const { return node_->data.size(); }
  std::size_t rows() const { return node_->data.rows(); }
  std::size_t cols() const { return node_->data.cols(); }

  double scalar() const;

  void zero_grad();

  std::shared_ptr<Node> node() const { return node_; }

 private:
  std::shared_ptr<Node> node_;
};

// Leaf without gradient tracking.
Value constant(Tensor data);
// Leaf with gradient tracking (trainable).
Value parameter(Tensor data);

// Internal op helper: validates finiteness of the forward result, wires
// parents, and sets requires_grad from them.
Value make_op(const char* name, Tensor data, std::vector<Value> parents, std::function<void(Node&)> backprop);

// Accumulates gradients of every reachable node that requires them. The root
// must hold exactly one element; its gradient seed is 1.
void backward(const Value& root);

}  // namespace tog::nn
