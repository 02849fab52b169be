//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/ops.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fabind/kernels.h"

namespace fabind::ops {
namespace {

using ad::make_result;
using ad::Node;
using ad::NodePtr;

[[noreturn]] void shape_error(const char *op, const Tensor &a, const Tensor &b) {
  throw std::invalid_argument(std::string(op) + ": incompatible shapes "
                              + std::to_string(a.rows()) + "x"
                              + std::to_string(a.cols()) + " and "
                              + std::to_string(b.rows()) + "x"
                              + std::to_string(b.cols()));
}

int broadcast_dim(int x, int y, const char *op, const Tensor &a,
                  const Tensor &b) {
  if (x == y || y == 1)
    return x;
  if (x == 1)
    return y;
  shape_error(op, a, b);
}

// Offset of element (r, c) of an operand broadcast to the output shape.
inline std::size_t bidx(const Node &n, int r, int c) {
  return static_cast<std::size_t>(n.rows == 1 ? 0 : r) * n.cols
         + (n.cols == 1 ? 0 : c);
}

enum class BinOp { kAdd, kSub, kMul };

Tensor binary(const Tensor &a, const Tensor &b, BinOp kind, const char *name) {
  const int rows = broadcast_dim(a.rows(), b.rows(), name, a, b);
  const int cols = broadcast_dim(a.cols(), b.cols(), name, a, b);
  const Node &na = *a.node();
  const Node &nb = *b.node();
  std::vector<double> out(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const double x = na.value[bidx(na, r, c)];
      const double y = nb.value[bidx(nb, r, c)];
      double v = 0;
      switch (kind) {
      case BinOp::kAdd:
        v = x + y;
        break;
      case BinOp::kSub:
        v = x - y;
        break;
      case BinOp::kMul:
        v = x * y;
        break;
      }
      out[static_cast<std::size_t>(r) * cols + c] = v;
    }

  return make_result(
      name, rows, cols, std::move(out), { a.node(), b.node() },
      [kind](Node &self) {
        Node &pa = *self.parents[0];
        Node &pb = *self.parents[1];
        if (pa.requires_grad)
          pa.ensure_grad();
        if (pb.requires_grad)
          pb.ensure_grad();
        for (int r = 0; r < self.rows; ++r)
          for (int c = 0; c < self.cols; ++c) {
            const double g = self.grad[static_cast<std::size_t>(r) * self.cols
                                       + c];
            const std::size_t ia = bidx(pa, r, c);
            const std::size_t ib = bidx(pb, r, c);
            switch (kind) {
            case BinOp::kAdd:
              if (pa.requires_grad)
                pa.grad[ia] += g;
              if (pb.requires_grad)
                pb.grad[ib] += g;
              break;
            case BinOp::kSub:
              if (pa.requires_grad)
                pa.grad[ia] += g;
              if (pb.requires_grad)
                pb.grad[ib] -= g;
              break;
            case BinOp::kMul:
              if (pa.requires_grad)
                pa.grad[ia] += g * pb.value[ib];
              if (pb.requires_grad)
                pb.grad[ib] += g * pa.value[ia];
              break;
            }
          }
      });
}

// Elementwise map with derivative expressed through (input, output).
template <class F, class D>
Tensor unary(const Tensor &a, const char *name, F f, D df) {
  const auto &in = a.node()->value;
  std::vector<double> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i)
    out[i] = f(in[i]);
  return make_result(name, a.rows(), a.cols(), std::move(out), { a.node() },
                     [df](Node &self) {
                       Node &p = *self.parents[0];
                       p.ensure_grad();
                       for (std::size_t i = 0; i < self.value.size(); ++i)
                         p.grad[i] += self.grad[i]
                                      * df(p.value[i], self.value[i]);
                     });
}

double stable_sigmoid(double x) {
  if (x >= 0)
    return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Tensor add(const Tensor &a, const Tensor &b) {
  return binary(a, b, BinOp::kAdd, "add");
}

Tensor sub(const Tensor &a, const Tensor &b) {
  return binary(a, b, BinOp::kSub, "sub");
}

Tensor mul(const Tensor &a, const Tensor &b) {
  return binary(a, b, BinOp::kMul, "mul");
}

Tensor scale(const Tensor &a, double s) {
  return unary(
      a, "scale", [s](double x) { return s * x; },
      [s](double, double) { return s; });
}

Tensor add_scalar(const Tensor &a, double s) {
  return unary(
      a, "add_scalar", [s](double x) { return x + s; },
      [](double, double) { return 1.0; });
}

Tensor matmul(const Tensor &a, const Tensor &b) {
  if (a.cols() != b.rows())
    shape_error("matmul", a, b);
  const int m = a.rows(), k = a.cols(), n = b.cols();
  std::vector<double> out(static_cast<std::size_t>(m) * n);
  kernels::matmul(a.values(), b.values(), out, m, k, n);
  return make_result("matmul", m, n, std::move(out), { a.node(), b.node() },
                     [m, k, n](Node &self) {
                       Node &pa = *self.parents[0];
                       Node &pb = *self.parents[1];
                       if (pa.requires_grad) {
                         pa.ensure_grad();
                         kernels::matmul_nt(self.grad, pb.value, pa.grad, m, n,
                                            k, true);
                       }
                       if (pb.requires_grad) {
                         pb.ensure_grad();
                         kernels::matmul_tn(pa.value, self.grad, pb.grad, k, m,
                                            n, true);
                       }
                     });
}

Tensor matmul_nt(const Tensor &a, const Tensor &b) {
  if (a.cols() != b.cols())
    shape_error("matmul_nt", a, b);
  const int m = a.rows(), k = a.cols(), n = b.rows();
  std::vector<double> out(static_cast<std::size_t>(m) * n);
  kernels::matmul_nt(a.values(), b.values(), out, m, k, n);
  return make_result("matmul_nt", m, n, std::move(out), { a.node(), b.node() },
                     [m, k, n](Node &self) {
                       Node &pa = *self.parents[0];
                       Node &pb = *self.parents[1];
                       // dA = G B, dB = G^T A
                       if (pa.requires_grad) {
                         pa.ensure_grad();
                         kernels::matmul(self.grad, pb.value, pa.grad, m, n, k,
                                         true);
                       }
                       if (pb.requires_grad) {
                         pb.ensure_grad();
                         kernels::matmul_tn(self.grad, pa.value, pb.grad, n, m,
                                            k, true);
                       }
                     });
}

Tensor transpose(const Tensor &a) {
  const int r = a.rows(), c = a.cols();
  std::vector<double> out(a.size());
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      out[static_cast<std::size_t>(j) * r + i] = a(i, j);
  return make_result("transpose", c, r, std::move(out), { a.node() },
                     [r, c](Node &self) {
                       Node &p = *self.parents[0];
                       p.ensure_grad();
                       for (int i = 0; i < r; ++i)
                         for (int j = 0; j < c; ++j)
                           p.grad[static_cast<std::size_t>(i) * c + j] +=
                               self.grad[static_cast<std::size_t>(j) * r + i];
                     });
}

Tensor relu(const Tensor &a) {
  return unary(
      a, "relu", [](double x) { return x > 0 ? x : 0.0; },
      [](double x, double) { return x > 0 ? 1.0 : 0.0; });
}

Tensor softplus(const Tensor &a) {
  return unary(
      a, "softplus",
      [](double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); },
      [](double x, double) { return stable_sigmoid(x); });
}

Tensor sigmoid(const Tensor &a) {
  return unary(
      a, "sigmoid", [](double x) { return stable_sigmoid(x); },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor exp(const Tensor &a) {
  return unary(
      a, "exp", [](double x) { return std::exp(x); },
      [](double, double y) { return y; });
}

Tensor log(const Tensor &a) {
  return unary(
      a, "log", [](double x) { return std::log(x); },
      [](double x, double) { return 1.0 / x; });
}

Tensor sqrt(const Tensor &a) {
  return unary(
      a, "sqrt", [](double x) { return std::sqrt(x); },
      [](double, double y) { return y > 0 ? 0.5 / y : 0.0; });
}

Tensor square(const Tensor &a) {
  return unary(
      a, "square", [](double x) { return x * x; },
      [](double x, double) { return 2.0 * x; });
}

Tensor clamp(const Tensor &a, double lo, double hi) {
  return unary(
      a, "clamp", [lo, hi](double x) { return std::clamp(x, lo, hi); },
      [lo, hi](double x, double) { return (x >= lo && x <= hi) ? 1.0 : 0.0; });
}

Tensor sum(const Tensor &a) {
  double s = 0;
  for (double v: a.values())
    s += v;
  return make_result("sum", 1, 1, { s }, { a.node() }, [](Node &self) {
    Node &p = *self.parents[0];
    p.ensure_grad();
    for (double &g: p.grad)
      g += self.grad[0];
  });
}

Tensor mean(const Tensor &a) {
  if (a.size() == 0)
    throw std::invalid_argument("mean of an empty tensor");
  return scale(sum(a), 1.0 / static_cast<double>(a.size()));
}

Tensor row_sum(const Tensor &a) {
  const int r = a.rows(), c = a.cols();
  std::vector<double> out(r, 0.0);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      out[i] += a(i, j);
  return make_result("row_sum", r, 1, std::move(out), { a.node() },
                     [c](Node &self) {
                       Node &p = *self.parents[0];
                       p.ensure_grad();
                       for (int i = 0; i < self.rows; ++i)
                         for (int j = 0; j < c; ++j)
                           p.grad[static_cast<std::size_t>(i) * c + j] +=
                               self.grad[i];
                     });
}

Tensor mean_rows(const Tensor &a) {
  const int r = a.rows(), c = a.cols();
  if (r == 0)
    throw std::invalid_argument("mean_rows of a tensor with no rows");
  std::vector<double> out(c, 0.0);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      out[j] += a(i, j);
  for (double &v: out)
    v /= r;
  return make_result("mean_rows", 1, c, std::move(out), { a.node() },
                     [r, c](Node &self) {
                       Node &p = *self.parents[0];
                       p.ensure_grad();
                       for (int i = 0; i < r; ++i)
                         for (int j = 0; j < c; ++j)
                           p.grad[static_cast<std::size_t>(i) * c + j] +=
                               self.grad[j] / r;
                     });
}

Tensor gather_rows(const Tensor &a, std::span<const int> index) {
  const int c = a.cols();
  const int n = static_cast<int>(index.size());
  std::vector<double> out(static_cast<std::size_t>(n) * c);
  for (int r = 0; r < n; ++r) {
    if (index[r] < 0 || index[r] >= a.rows())
      throw std::out_of_range("gather_rows: index out of range");
    std::copy_n(a.values().begin() + static_cast<long>(index[r]) * c, c,
                out.begin() + static_cast<long>(r) * c);
  }
  std::vector<int> idx(index.begin(), index.end());
  return make_result("gather_rows", n, c, std::move(out), { a.node() },
                     [idx = std::move(idx), c](Node &self) {
                       Node &p = *self.parents[0];
                       p.ensure_grad();
                       for (std::size_t r = 0; r < idx.size(); ++r)
                         for (int j = 0; j < c; ++j)
                           p.grad[static_cast<std::size_t>(idx[r]) * c + j] +=
                               self.grad[r * c + j];
                     });
}

Tensor scatter_add_rows(const Tensor &a, std::span<const int> index,
                        int num_rows) {
  if (static_cast<int>(index.size()) != a.rows())
    throw std::invalid_argument("scatter_add_rows: index length != rows");
  const int c = a.cols();
  std::vector<double> out(static_cast<std::size_t>(num_rows) * c, 0.0);
  for (int r = 0; r < a.rows(); ++r) {
    if (index[r] < 0 || index[r] >= num_rows)
      throw std::out_of_range("scatter_add_rows: index out of range");
    for (int j = 0; j < c; ++j)
      out[static_cast<std::size_t>(index[r]) * c + j] += a(r, j);
  }
  std::vector<int> idx(index.begin(), index.end());
  return make_result("scatter_add_rows", num_rows, c, std::move(out),
                     { a.node() }, [idx = std::move(idx), c](Node &self) {
                       Node &p = *self.parents[0];
                       p.ensure_grad();
                       for (std::size_t r = 0; r < idx.size(); ++r)
                         for (int j = 0; j < c; ++j)
                           p.grad[r * c + j] +=
                               self.grad[static_cast<std::size_t>(idx[r]) * c
                                         + j];
                     });
}

Tensor softmax_rows(const Tensor &a) {
  const int r = a.rows(), c = a.cols();
  std::vector<double> out(a.size());
  for (int i = 0; i < r; ++i) {
    double mx = -INFINITY;
    for (int j = 0; j < c; ++j)
      mx = std::max(mx, a(i, j));
    double z = 0;
    for (int j = 0; j < c; ++j) {
      const double e = std::exp(a(i, j) - mx);
      out[static_cast<std::size_t>(i) * c + j] = e;
      z += e;
    }
    for (int j = 0; j < c; ++j)
      out[static_cast<std::size_t>(i) * c + j] /= z;
  }
  return make_result("softmax_rows", r, c, std::move(out), { a.node() },
                     [r, c](Node &self) {
                       Node &p = *self.parents[0];
                       p.ensure_grad();
                       for (int i = 0; i < r; ++i) {
                         const std::size_t o = static_cast<std::size_t>(i) * c;
                         double dot = 0;
                         for (int j = 0; j < c; ++j)
                           dot += self.grad[o + j] * self.value[o + j];
                         for (int j = 0; j < c; ++j)
                           p.grad[o + j] +=
                               self.value[o + j] * (self.grad[o + j] - dot);
                       }
                     });
}

Tensor segment_softmax(const Tensor &logits, std::span<const int> segment,
                       int num_segments) {
  if (logits.cols() != 1 || static_cast<int>(segment.size()) != logits.rows())
    throw std::invalid_argument("segment_softmax: expects an r x 1 column");
  const int r = logits.rows();
  std::vector<double> mx(num_segments, -INFINITY), z(num_segments, 0.0);
  for (int i = 0; i < r; ++i)
    mx[segment[i]] = std::max(mx[segment[i]], logits(i, 0));
  std::vector<double> out(r);
  for (int i = 0; i < r; ++i) {
    out[i] = std::exp(logits(i, 0) - mx[segment[i]]);
    z[segment[i]] += out[i];
  }
  for (int i = 0; i < r; ++i)
    out[i] /= z[segment[i]];
  std::vector<int> seg(segment.begin(), segment.end());
  return make_result("segment_softmax", r, 1, std::move(out),
                     { logits.node() },
                     [seg = std::move(seg), num_segments](Node &self) {
                       Node &p = *self.parents[0];
                       p.ensure_grad();
                       std::vector<double> dot(num_segments, 0.0);
                       for (std::size_t i = 0; i < seg.size(); ++i)
                         dot[seg[i]] += self.grad[i] * self.value[i];
                       for (std::size_t i = 0; i < seg.size(); ++i)
                         p.grad[i] += self.value[i] * (self.grad[i] - dot[seg[i]]);
                     });
}

Tensor concat_cols(const std::vector<Tensor> &parts) {
  if (parts.empty())
    throw std::invalid_argument("concat_cols: no inputs");
  const int r = parts[0].rows();
  int c = 0;
  std::vector<NodePtr> parents;
  std::vector<int> offsets;
  for (const auto &t: parts) {
    if (t.rows() != r)
      shape_error("concat_cols", parts[0], t);
    offsets.push_back(c);
    c += t.cols();
    parents.push_back(t.node());
  }
  std::vector<double> out(static_cast<std::size_t>(r) * c);
  for (std::size_t k = 0; k < parts.size(); ++k)
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < parts[k].cols(); ++j)
        out[static_cast<std::size_t>(i) * c + offsets[k] + j] = parts[k](i, j);
  return make_result("concat_cols", r, c, std::move(out), std::move(parents),
                     [offsets = std::move(offsets)](Node &self) {
                       for (std::size_t k = 0; k < self.parents.size(); ++k) {
                         Node &p = *self.parents[k];
                         if (!p.requires_grad)
                           continue;
                         p.ensure_grad();
                         for (int i = 0; i < p.rows; ++i)
                           for (int j = 0; j < p.cols; ++j)
                             p.grad[static_cast<std::size_t>(i) * p.cols + j] +=
                                 self.grad[static_cast<std::size_t>(i)
                                               * self.cols
                                           + offsets[k] + j];
                       }
                     });
}

Tensor concat_rows(const std::vector<Tensor> &parts) {
  if (parts.empty())
    throw std::invalid_argument("concat_rows: no inputs");
  const int c = parts[0].cols();
  int r = 0;
  std::vector<NodePtr> parents;
  std::vector<double> out;
  for (const auto &t: parts) {
    if (t.cols() != c)
      shape_error("concat_rows", parts[0], t);
    r += t.rows();
    out.insert(out.end(), t.values().begin(), t.values().end());
    parents.push_back(t.node());
  }
  return make_result("concat_rows", r, c, std::move(out), std::move(parents),
                     [](Node &self) {
                       std::size_t offset = 0;
                       for (auto &pp: self.parents) {
                         Node &p = *pp;
                         if (p.requires_grad) {
                           p.ensure_grad();
                           for (std::size_t i = 0; i < p.value.size(); ++i)
                             p.grad[i] += self.grad[offset + i];
                         }
                         offset += p.value.size();
                       }
                     });
}

Tensor slice_cols(const Tensor &a, int start, int count) {
  if (start < 0 || count < 0 || start + count > a.cols())
    throw std::out_of_range("slice_cols: range outside tensor");
  const int r = a.rows(), c = a.cols();
  std::vector<double> out(static_cast<std::size_t>(r) * count);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < count; ++j)
      out[static_cast<std::size_t>(i) * count + j] = a(i, start + j);
  return make_result("slice_cols", r, count, std::move(out), { a.node() },
                     [start, count, c](Node &self) {
                       Node &p = *self.parents[0];
                       p.ensure_grad();
                       for (int i = 0; i < self.rows; ++i)
                         for (int j = 0; j < count; ++j)
                           p.grad[static_cast<std::size_t>(i) * c + start + j] +=
                               self.grad[static_cast<std::size_t>(i) * count + j];
                     });
}

Tensor slice_rows(const Tensor &a, int start, int count) {
  if (start < 0 || count < 0 || start + count > a.rows())
    throw std::out_of_range("slice_rows: range outside tensor");
  const int c = a.cols();
  const auto first = a.values().begin() + static_cast<long>(start) * c;
  std::vector<double> out(first, first + static_cast<long>(count) * c);
  return make_result("slice_rows", count, c, std::move(out), { a.node() },
                     [start, c](Node &self) {
                       Node &p = *self.parents[0];
                       p.ensure_grad();
                       const std::size_t o = static_cast<std::size_t>(start) * c;
                       for (std::size_t i = 0; i < self.grad.size(); ++i)
                         p.grad[o + i] += self.grad[i];
                     });
}

Tensor reshape(const Tensor &a, int rows, int cols) {
  if (static_cast<std::size_t>(rows) * cols != a.size())
    throw std::invalid_argument("reshape: element count mismatch");
  std::vector<double> out(a.values().begin(), a.values().end());
  return make_result("reshape", rows, cols, std::move(out), { a.node() },
                     [](Node &self) {
                       Node &p = *self.parents[0];
                       p.ensure_grad();
                       for (std::size_t i = 0; i < self.grad.size(); ++i)
                         p.grad[i] += self.grad[i];
                     });
}

Tensor outer_product_linear(const Tensor &a, const Tensor &b, const Tensor &w,
                            const Tensor &bias) {
  const int n = a.rows(), p = a.cols(), m = b.rows(), q = b.cols();
  const int dz = w.cols();
  if (w.rows() != p * q || bias.rows() != 1 || bias.cols() != dz)
    throw std::invalid_argument("outer_product_linear: weight shape mismatch");

  // W viewed as p x (q*dz); T_i = a_i W is the q x dz slab for atom i.
  std::vector<double> t(static_cast<std::size_t>(n) * q * dz);
  kernels::matmul(a.values(), w.values(), t, n, p, q * dz);
  std::vector<double> out(static_cast<std::size_t>(n) * m * dz);
  const std::size_t slab = static_cast<std::size_t>(q) * dz;
  const std::size_t block = static_cast<std::size_t>(m) * dz;
  for (int i = 0; i < n; ++i) {
    std::span<double> dst(out.data() + i * block, block);
    kernels::matmul(b.values(), std::span<const double>(t.data() + i * slab, slab),
                    dst, m, q, dz);
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < dz; ++k)
        dst[static_cast<std::size_t>(j) * dz + k] += bias(0, k);
  }

  return make_result(
      "outer_product_linear", n * m, dz, std::move(out),
      { a.node(), b.node(), w.node(), bias.node() },
      [n, p, m, q, dz, slab, block, t = std::move(t)](Node &self) {
        Node &na = *self.parents[0];
        Node &nb = *self.parents[1];
        Node &nw = *self.parents[2];
        Node &nbias = *self.parents[3];
        if (nbias.requires_grad) {
          nbias.ensure_grad();
          for (std::size_t r = 0; r < static_cast<std::size_t>(n) * m; ++r)
            for (int k = 0; k < dz; ++k)
              nbias.grad[k] += self.grad[r * dz + k];
        }
        if (nb.requires_grad)
          nb.ensure_grad();
        std::vector<double> dt(static_cast<std::size_t>(n) * slab, 0.0);
        for (int i = 0; i < n; ++i) {
          std::span<const double> gi(self.grad.data() + i * block, block);
          if (nb.requires_grad)
            kernels::matmul_nt(gi, std::span<const double>(t.data() + i * slab, slab),
                               nb.grad, m, dz, q, true);
          kernels::matmul_tn(nb.value, gi,
                             std::span<double>(dt.data() + i * slab, slab), q,
                             m, dz, false);
        }
        if (na.requires_grad) {
          na.ensure_grad();
          kernels::matmul_nt(dt, nw.value, na.grad, n, q * dz, p, true);
        }
        if (nw.requires_grad) {
          nw.ensure_grad();
          kernels::matmul_tn(na.value, dt, nw.grad, p, n, q * dz, true);
        }
      });
}

}  // namespace fabind::ops
