//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_OPS_H_
#define FABIND_OPS_H_

#include <span>
#include <vector>

#include "fabind/tensor.h"

// Differentiable primitives over 2-D tensors. Each one is checked against
// central finite differences in tests/test_ops.cpp.
namespace fabind::ops {

// Elementwise with broadcasting: each operand dimension must equal the output
// dimension or be 1.
Tensor add(const Tensor &a, const Tensor &b);
Tensor sub(const Tensor &a, const Tensor &b);
Tensor mul(const Tensor &a, const Tensor &b);

Tensor scale(const Tensor &a, double s);
Tensor add_scalar(const Tensor &a, double s);

Tensor matmul(const Tensor &a, const Tensor &b);     // A B
Tensor matmul_nt(const Tensor &a, const Tensor &b);  // A B^T
Tensor transpose(const Tensor &a);

Tensor relu(const Tensor &a);
Tensor softplus(const Tensor &a);
Tensor sigmoid(const Tensor &a);
Tensor exp(const Tensor &a);
Tensor log(const Tensor &a);
Tensor sqrt(const Tensor &a);
Tensor square(const Tensor &a);
// Hard clamp; the gradient is zero outside [lo, hi].
Tensor clamp(const Tensor &a, double lo, double hi);

Tensor sum(const Tensor &a);        // 1x1
Tensor mean(const Tensor &a);       // 1x1
Tensor row_sum(const Tensor &a);    // r x 1
Tensor mean_rows(const Tensor &a);  // 1 x c, average over rows

Tensor gather_rows(const Tensor &a, std::span<const int> index);
// out[index[r]] += a[r]; out has num_rows rows.
Tensor scatter_add_rows(const Tensor &a, std::span<const int> index,
                        int num_rows);

// Softmax along each row.
Tensor softmax_rows(const Tensor &a);
// Softmax of an r x 1 column within groups: entries sharing segment[r] are
// normalized together.
Tensor segment_softmax(const Tensor &logits, std::span<const int> segment,
                       int num_segments);

Tensor concat_cols(const std::vector<Tensor> &parts);
Tensor concat_rows(const std::vector<Tensor> &parts);
Tensor slice_cols(const Tensor &a, int start, int count);
Tensor slice_rows(const Tensor &a, int start, int count);
Tensor reshape(const Tensor &a, int rows, int cols);

// Outer-product pair embedding. For a (n x p), b (m x q), w (p*q x dz) and
// bias (1 x dz) returns the (n*m) x dz grid with row i*m + j equal to
// vec(a_i b_j^T) w + bias, vec taken row-major.
Tensor outer_product_linear(const Tensor &a, const Tensor &b, const Tensor &w,
                            const Tensor &bias);

}  // namespace fabind::ops

#endif  // FABIND_OPS_H_
