//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/tensor.h"

#include <cmath>
#include <unordered_set>

namespace fabind::ad {
namespace {

thread_local bool g_grad_enabled = true;

}  // namespace

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard(): previous_(g_grad_enabled) {
  g_grad_enabled = false;
}

NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

Tensor Tensor::zeros(int rows, int cols, bool requires_grad) {
  return from(rows, cols,
              std::vector<double>(static_cast<std::size_t>(rows) * cols, 0.0),
              requires_grad);
}

Tensor Tensor::from(int rows, int cols, std::vector<double> values,
                    bool requires_grad) {
  if (rows < 0 || cols < 0
      || values.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("Tensor::from: size does not match shape");
  auto node = std::make_shared<Node>();
  node->rows = rows;
  node->cols = cols;
  node->value = std::move(values);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::scalar(double v, bool requires_grad) {
  return from(1, 1, { v }, requires_grad);
}

double Tensor::item() const {
  if (size() != 1)
    throw std::invalid_argument("item() on a non-scalar tensor");
  return node_->value[0];
}

std::vector<double> Tensor::grad() const {
  if (node_->grad.empty())
    return std::vector<double>(node_->value.size(), 0.0);
  return node_->grad;
}

Tensor Tensor::detach() const {
  return from(rows(), cols(), node_->value, false);
}

void Tensor::backward() {
  if (rows() != 1 || cols() != 1)
    throw std::invalid_argument("backward() needs a scalar root, got "
                                + std::to_string(rows()) + "x"
                                + std::to_string(cols()));
  if (node_->consumed)
    throw std::logic_error("backward() called twice on the same graph");
  if (!node_->requires_grad)
    return;
  const bool interior = static_cast<bool>(node_->backward);

  // Iterative post-order DFS gives a topological order.
  std::vector<Node *> order;
  std::unordered_set<Node *> seen;
  std::vector<std::pair<Node *, std::size_t>> stack;
  stack.emplace_back(node_.get(), 0);
  seen.insert(node_.get());
  while (!stack.empty()) {
    auto &[n, next] = stack.back();
    if (next < n->parents.size()) {
      Node *p = n->parents[next++].get();
      if (p->requires_grad && !seen.contains(p)) {
        seen.insert(p);
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(n);
      stack.pop_back();
    }
  }

  node_->ensure_grad();
  node_->grad[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node *n = *it;
    if (n->backward && !n->grad.empty())
      n->backward(*n);
  }
  for (Node *n: order) {
    if (!n->backward)
      continue;
    n->backward = nullptr;
    n->parents.clear();
    n->consumed = true;
  }
  node_->consumed = interior;
}

Tensor make_result(const char *op, int rows, int cols,
                   std::vector<double> values, std::vector<NodePtr> parents,
                   std::function<void(Node &)> backward) {
  for (double v: values)
    if (!std::isfinite(v))
      throw NumericalError(std::string("non-finite value produced by ") + op);

  auto node = std::make_shared<Node>();
  node->rows = rows;
  node->cols = cols;
  node->value = std::move(values);
  node->op = op;

  bool needs = false;
  if (g_grad_enabled)
    for (const auto &p: parents)
      needs = needs || p->requires_grad;
  if (needs) {
    node->requires_grad = true;
    node->parents = std::move(parents);
    node->backward = std::move(backward);
  }
  return Tensor(std::move(node));
}

}  // namespace fabind::ad
