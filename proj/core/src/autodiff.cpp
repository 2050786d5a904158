#include "tog/autodiff.hpp"

#include <atomic>
#include <string>
#include <unordered_set>

#include "tog/errors.hpp"

namespace tog::nn {

namespace {

std::atomic<std::uint64_t> node_counter{0};

std::shared_ptr<Node> new_node(Tensor data, bool requires_grad) {
  auto n = std::make_shared<Node>();
  n->data = std::move(data);
  n->requires_grad = requires_grad;
  n->id = node_counter.fetch_add(1, std::memory_order_relaxed);
  return n;
}

}  // namespace

double Value::scalar() const {
  if (size() != 1) throw ShapeMismatch("scalar(): tensor has " + std::to_string(size()) + " elements");
  return node_->data[0];
}

void Value::zero_grad() {
  node_->grad = Tensor();
  node_->grad_ready = false;
}

Value constant(Tensor data) { return Value(new_node(std::move(data), false)); }

Value parameter(Tensor data) { return Value(new_node(std::move(data), true)); }

Value make_op(const char* name, Tensor data, std::vector<Value> parents, std::function<void(Node&)> backprop) {
  if (!data.all_finite()) throw NumericError(std::string(name) + ": non-finite value in forward result");
  bool req = false;
  for (const auto& p : parents) req = req || p.requires_grad();
  auto n = new_node(std::move(data), req);
  if (req) {
    n->parents.reserve(parents.size());
    for (auto& p : parents) n->parents.push_back(p.node());
    n->backprop = std::move(backprop);
  }
  return Value(n);
}

void backward(const Value& root) {
  if (!root.defined()) throw InvalidInput("backward: undefined root");
  if (root.size() != 1) throw ShapeMismatch("backward: root must hold one element");

  // Iterative post-order DFS; processing the order in reverse visits every
  // node after all of its consumers.
  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, std::size_t>> stack;
  stack.emplace_back(root.node().get(), 0);
  seen.insert(root.node().get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* parent = node->parents[next++].get();
      if (parent->requires_grad && seen.insert(parent).second) {
        stack.emplace_back(parent, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  for (Node* n : order) {
    n->grad = Tensor::zeros(n->data.shape());
    n->grad_ready = true;
  }
  root.node()->grad[0] = 1.0;

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->backprop) n->backprop(*n);
  }
}

}  // namespace tog::nn
