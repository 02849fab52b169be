//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fabind/losses.h"
#include "fabind/ops.h"

namespace fabind::gradcheck {
namespace {

Tensor random_tensor(Rng &rng, int rows, int cols, double lo, double hi,
                     bool requires_grad = true) {
  std::vector<double> v(static_cast<std::size_t>(rows) * cols);
  for (double &x: v)
    x = rng.uniform(lo, hi);
  return Tensor::from(rows, cols, std::move(v), requires_grad);
}

// Contract a tensor against fixed random weights into a scalar.
std::function<Tensor(const Tensor &)> contraction(Rng &rng, int rows, int cols) {
  Tensor w = random_tensor(rng, rows, cols, -1.0, 1.0, false);
  return [w](const Tensor &t) { return ops::sum(ops::mul(t, w)); };
}

Case unary_case(Rng &rng, std::string name, double lo, double hi,
                Tensor (*f)(const Tensor &)) {
  Tensor x = random_tensor(rng, 3, 4, lo, hi);
  auto c = contraction(rng, 3, 4);
  return { std::move(name), { x }, [=] { return c(f(x)); } };
}

}  // namespace

double max_relative_error(const std::function<Tensor()> &loss,
                          const std::vector<Tensor> &inputs,
                          const Options &options) {
  for (auto t: inputs)
    t.zero_grad();
  loss().backward();
  std::vector<std::vector<double>> analytic;
  for (const auto &t: inputs)
    analytic.push_back(t.grad());

  double global = 0.0;
  for (const auto &g: analytic)
    for (double v: g)
      global = std::max(global, std::abs(v));

  ad::NoGradGuard no_grad;
  Rng probe_rng(options.probe_seed);
  double worst = 0.0;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    Tensor t = inputs[k];
    std::vector<int> probes(t.size());
    std::iota(probes.begin(), probes.end(), 0);
    if (options.max_probes_per_input > 0
        && static_cast<int>(probes.size()) > options.max_probes_per_input) {
      for (int i = 0; i < options.max_probes_per_input; ++i)
        std::swap(probes[i],
                  probes[probe_rng.uniform_int(i, static_cast<int>(probes.size()) - 1)]);
      probes.resize(options.max_probes_per_input);
    }
    double diff = 0, scale_a = 0, scale_n = 0;
    for (int i: probes) {
      auto v = t.mutable_values();
      const double orig = v[i];
      v[i] = orig + options.step;
      const double fp = loss().item();
      v[i] = orig - options.step;
      const double fm = loss().item();
      v[i] = orig;
      const double numeric = (fp - fm) / (2 * options.step);
      diff = std::max(diff, std::abs(numeric - analytic[k][i]));
      scale_a = std::max(scale_a, std::abs(analytic[k][i]));
      scale_n = std::max(scale_n, std::abs(numeric));
    }
    const double denom = options.global_scale ? std::max(global, scale_n)
                                              : std::max(scale_a, scale_n);
    if (denom > 0)
      worst = std::max(worst, diff / denom);
  }
  for (auto t: inputs)
    t.zero_grad();
  return worst;
}

std::vector<Case> primitive_cases(Rng &rng) {
  std::vector<Case> cases;

  {
    Tensor a = random_tensor(rng, 3, 4, -1, 1), b = random_tensor(rng, 1, 4, -1, 1);
    auto c = contraction(rng, 3, 4);
    cases.push_back({ "add (row broadcast)", { a, b }, [=] { return c(ops::add(a, b)); } });
  }
  {
    Tensor a = random_tensor(rng, 3, 4, -1, 1), b = random_tensor(rng, 3, 1, -1, 1);
    auto c = contraction(rng, 3, 4);
    cases.push_back({ "sub (column broadcast)", { a, b }, [=] { return c(ops::sub(a, b)); } });
  }
  {
    Tensor a = random_tensor(rng, 3, 4, -1, 1), b = random_tensor(rng, 3, 1, -1, 1);
    auto c = contraction(rng, 3, 4);
    cases.push_back({ "mul (column broadcast)", { a, b }, [=] { return c(ops::mul(a, b)); } });
  }
  {
    Tensor a = random_tensor(rng, 3, 5, -1, 1), b = random_tensor(rng, 5, 2, -1, 1);
    auto c = contraction(rng, 3, 2);
    cases.push_back({ "matmul", { a, b }, [=] { return c(ops::matmul(a, b)); } });
  }
  {
    Tensor a = random_tensor(rng, 3, 5, -1, 1), b = random_tensor(rng, 4, 5, -1, 1);
    auto c = contraction(rng, 3, 4);
    cases.push_back({ "matmul_nt", { a, b }, [=] { return c(ops::matmul_nt(a, b)); } });
  }
  {
    Tensor a = random_tensor(rng, 3, 4, -1, 1);
    auto c = contraction(rng, 4, 3);
    cases.push_back({ "transpose", { a }, [=] { return c(ops::transpose(a)); } });
  }
  {
    Tensor a = random_tensor(rng, 3, 4, -1, 1);
    auto c = contraction(rng, 3, 4);
    cases.push_back({ "scale/add_scalar", { a }, [=] {
                       return c(ops::add_scalar(ops::scale(a, -1.7), 0.3));
                     } });
  }
  cases.push_back(unary_case(rng, "relu", -1, 1, &ops::relu));
  cases.push_back(unary_case(rng, "softplus", -3, 3, &ops::softplus));
  cases.push_back(unary_case(rng, "sigmoid", -3, 3, &ops::sigmoid));
  cases.push_back(unary_case(rng, "exp", -2, 2, &ops::exp));
  cases.push_back(unary_case(rng, "log", 0.2, 3, &ops::log));
  cases.push_back(unary_case(rng, "sqrt", 0.2, 3, &ops::sqrt));
  cases.push_back(unary_case(rng, "square", -2, 2, &ops::square));
  {
    Tensor a = random_tensor(rng, 3, 4, -3, 3);
    auto c = contraction(rng, 3, 4);
    cases.push_back({ "clamp", { a }, [=] { return c(ops::clamp(a, -1.5, 1.5)); } });
  }
  {
    Tensor a = random_tensor(rng, 3, 4, -1, 1);
    cases.push_back({ "sum/mean", { a }, [=] {
                       return ops::add(ops::sum(ops::square(a)),
                                       ops::mean(ops::exp(a)));
                     } });
  }
  {
    Tensor a = random_tensor(rng, 3, 4, -1, 1);
    auto c = contraction(rng, 3, 1);
    cases.push_back({ "row_sum", { a }, [=] { return c(ops::row_sum(a)); } });
  }
  {
    Tensor a = random_tensor(rng, 3, 4, -1, 1);
    auto c = contraction(rng, 1, 4);
    cases.push_back({ "mean_rows", { a }, [=] { return c(ops::mean_rows(a)); } });
  }
  {
    Tensor a = random_tensor(rng, 4, 3, -1, 1);
    std::vector<int> idx = { 3, 0, 0, 2, 1 };
    auto c = contraction(rng, 5, 3);
    cases.push_back({ "gather_rows", { a }, [=] { return c(ops::gather_rows(a, idx)); } });
  }
  {
    Tensor a = random_tensor(rng, 5, 3, -1, 1);
    std::vector<int> idx = { 1, 0, 1, 3, 1 };
    auto c = contraction(rng, 4, 3);
    cases.push_back({ "scatter_add_rows", { a }, [=] {
                       return c(ops::scatter_add_rows(a, idx, 4));
                     } });
  }
  {
    Tensor a = random_tensor(rng, 3, 4, -2, 2);
    auto c = contraction(rng, 3, 4);
    cases.push_back({ "softmax_rows", { a }, [=] { return c(ops::softmax_rows(a)); } });
  }
  {
    Tensor a = random_tensor(rng, 6, 1, -2, 2);
    std::vector<int> seg = { 0, 2, 0, 2, 2, 1 };
    auto c = contraction(rng, 6, 1);
    cases.push_back({ "segment_softmax", { a }, [=] {
                       return c(ops::segment_softmax(a, seg, 3));
                     } });
  }
  {
    Tensor a = random_tensor(rng, 3, 2, -1, 1), b = random_tensor(rng, 3, 3, -1, 1);
    auto c = contraction(rng, 3, 5);
    cases.push_back({ "concat_cols/slice_cols", { a, b }, [=] {
                       Tensor cat = ops::concat_cols({ a, b });
                       return ops::add(c(cat),
                                       ops::sum(ops::square(ops::slice_cols(cat, 1, 3))));
                     } });
  }
  {
    Tensor a = random_tensor(rng, 2, 3, -1, 1), b = random_tensor(rng, 3, 3, -1, 1);
    auto c = contraction(rng, 5, 3);
    cases.push_back({ "concat_rows/slice_rows", { a, b }, [=] {
                       Tensor cat = ops::concat_rows({ a, b });
                       return ops::add(c(cat),
                                       ops::sum(ops::square(ops::slice_rows(cat, 1, 3))));
                     } });
  }
  {
    Tensor a = random_tensor(rng, 3, 4, -1, 1);
    auto c = contraction(rng, 2, 6);
    cases.push_back({ "reshape", { a }, [=] { return c(ops::reshape(a, 2, 6)); } });
  }
  {
    Tensor a = random_tensor(rng, 3, 2, -1, 1), b = random_tensor(rng, 4, 3, -1, 1);
    Tensor w = random_tensor(rng, 6, 5, -1, 1), bias = random_tensor(rng, 1, 5, -1, 1);
    auto c = contraction(rng, 12, 5);
    cases.push_back({ "outer_product_linear", { a, b, w, bias }, [=] {
                       return c(ops::outer_product_linear(a, b, w, bias));
                     } });
  }
  {
    Tensor a = random_tensor(rng, 4, 3, -2, 2), b = random_tensor(rng, 4, 3, -2, 2);
    cases.push_back({ "huber", { a, b }, [=] { return losses::huber(a, b); } });
  }
  {
    Tensor p = random_tensor(rng, 6, 1, 0.05, 0.95);
    Tensor y = Tensor::from(6, 1, { 1, 0, 0, 1, 1, 0 });
    cases.push_back({ "bce", { p }, [=] { return losses::bce(p, y); } });
  }
  return cases;
}

Case broken_case(Rng &rng) {
  Tensor x = random_tensor(rng, 3, 4, -2, 2);
  auto c = contraction(rng, 3, 4);
  auto broken_square = [](const Tensor &a) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = a.values()[i] * a.values()[i];
    // Derivative off by a factor of two.
    return ad::make_result("broken_square", a.rows(), a.cols(), std::move(out),
                           { a.node() }, [](ad::Node &self) {
                             ad::Node &p = *self.parents[0];
                             p.ensure_grad();
                             for (std::size_t i = 0; i < p.value.size(); ++i)
                               p.grad[i] += self.grad[i] * p.value[i];
                           });
  };
  return { "broken_square (injected fault)", { x }, [=] { return c(broken_square(x)); } };
}

}  // namespace fabind::gradcheck
