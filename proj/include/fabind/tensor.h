//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_TENSOR_H_
#define FABIND_TENSOR_H_

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fabind {

// Non-finite values or a numerically invalid state. Carries enough context to
// name the offending operation.
class NumericalError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace ad {

struct Node;
using NodePtr = std::shared_ptr<Node>;

// One value in the computation graph. Interior nodes keep their parents and a
// closure that pushes this node's gradient into them; the closure is dropped
// after backward() so a graph can only be differentiated once.
struct Node {
  int rows = 0;
  int cols = 0;
  std::vector<double> value;
  std::vector<double> grad;
  bool requires_grad = false;
  bool consumed = false;
  const char *op = "leaf";
  std::vector<NodePtr> parents;
  std::function<void(Node &)> backward;

  void ensure_grad() {
    if (grad.empty())
      grad.assign(value.size(), 0.0);
  }
};

// Dense row-major 2-D tensor of doubles with reverse-mode differentiation.
// Copies share the underlying node.
class Tensor {
public:
  Tensor() = default;
  explicit Tensor(NodePtr node): node_(std::move(node)) { }

  static Tensor zeros(int rows, int cols, bool requires_grad = false);
  static Tensor from(int rows, int cols, std::vector<double> values,
                     bool requires_grad = false);
  static Tensor scalar(double v, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  int rows() const { return node_->rows; }
  int cols() const { return node_->cols; }
  std::size_t size() const { return node_->value.size(); }

  std::span<const double> values() const { return node_->value; }
  // Writable storage; only meaningful for leaves (parameters, inputs).
  std::span<double> mutable_values() { return node_->value; }
  double operator()(int r, int c) const {
    return node_->value[static_cast<std::size_t>(r) * node_->cols + c];
  }
  double item() const;

  bool requires_grad() const { return node_->requires_grad; }
  // Gradient accumulated by backward(); zeros if none has reached this node.
  std::vector<double> grad() const;
  void zero_grad() { node_->grad.clear(); }

  // Fresh leaf holding a copy of the values, cut from the graph.
  Tensor detach() const;

  // Reverse accumulation from a 1x1 root into every reachable node that
  // requires a gradient.
  void backward();

  const NodePtr &node() const { return node_; }

private:
  NodePtr node_;
};

bool grad_enabled();

// Disables graph recording in the current thread for its lifetime.
class NoGradGuard {
public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard &) = delete;
  NoGradGuard &operator=(const NoGradGuard &) = delete;

private:
  bool previous_;
};

// Builds the result node of a primitive. Throws NumericalError if any value is
// not finite. The backward closure is kept only if some parent needs a grad.
Tensor make_result(const char *op, int rows, int cols,
                   std::vector<double> values, std::vector<NodePtr> parents,
                   std::function<void(Node &)> backward);

}  // namespace ad

using ad::Tensor;

}  // namespace fabind

#endif  // FABIND_TENSOR_H_
