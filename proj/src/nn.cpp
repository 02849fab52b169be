//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/nn.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fabind/ops.h"

namespace fabind::nn {

Tensor ParamStore::add(const std::string &name, Tensor t) {
  if (contains(name))
    throw std::logic_error("parameter registered twice: " + name);
  entries_.emplace_back(name, t);
  return t;
}

Tensor ParamStore::create(const std::string &name, int rows, int cols,
                          int fan_in, Rng &rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(std::max(fan_in, 1)));
  std::vector<double> v(static_cast<std::size_t>(rows) * cols);
  for (double &x: v)
    x = rng.uniform(-bound, bound);
  return add(name, Tensor::from(rows, cols, std::move(v), true));
}

Tensor ParamStore::create_zeros(const std::string &name, int rows, int cols) {
  return add(name, Tensor::zeros(rows, cols, true));
}

Tensor ParamStore::get(const std::string &name) const {
  for (const auto &[n, t]: entries_)
    if (n == name)
      return t;
  throw std::out_of_range("unknown parameter: " + name);
}

bool ParamStore::contains(const std::string &name) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto &e) { return e.first == name; });
}

std::size_t ParamStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto &e: entries_)
    n += e.second.size();
  return n;
}

void ParamStore::zero_grad() {
  for (auto &e: entries_)
    e.second.zero_grad();
}

Tensor Linear::operator()(const Tensor &x) const {
  Tensor y = ops::matmul(x, weight);
  return bias.defined() ? ops::add(y, bias) : y;
}

Linear make_linear(ParamStore &store, const std::string &name, int in, int out,
                   bool bias, Rng &rng) {
  Linear l;
  l.weight = store.create(name + ".weight", in, out, in, rng);
  if (bias)
    l.bias = store.create(name + ".bias", 1, out, in, rng);
  return l;
}

Tensor Mlp::operator()(const Tensor &x) const {
  Tensor h = x;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    h = layers[i](h);
    if (i + 1 < layers.size())
      h = activation == Activation::kRelu ? ops::relu(h) : ops::softplus(h);
  }
  return h;
}

Tensor Mlp::from_first(const Tensor &pre) const {
  Tensor h = pre;
  for (std::size_t i = 1; i < layers.size(); ++i) {
    h = activation == Activation::kRelu ? ops::relu(h) : ops::softplus(h);
    h = layers[i](h);
  }
  return h;
}

Mlp make_mlp(ParamStore &store, const std::string &name,
             const std::vector<int> &widths, Activation activation, Rng &rng) {
  if (widths.size() < 2)
    throw std::invalid_argument("MLP needs at least input and output widths");
  Mlp m;
  m.activation = activation;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i)
    m.layers.push_back(make_linear(store, name + "." + std::to_string(i),
                                   widths[i], widths[i + 1], true, rng));
  return m;
}

void fill_zero(Tensor &t) {
  auto v = t.mutable_values();
  std::fill(v.begin(), v.end(), 0.0);
}

}  // namespace fabind::nn
