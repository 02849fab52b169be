//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_NN_H_
#define FABIND_NN_H_

#include <string>
#include <utility>
#include <vector>

#include "fabind/rng.h"
#include "fabind/tensor.h"

namespace fabind::nn {

// Owns every trainable tensor under a unique dotted name. Registration order
// is the serialization order.
class ParamStore {
public:
  // Fan-in scaled uniform init on [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  Tensor create(const std::string &name, int rows, int cols, int fan_in,
                Rng &rng);
  Tensor create_zeros(const std::string &name, int rows, int cols);

  const std::vector<std::pair<std::string, Tensor>> &entries() const {
    return entries_;
  }
  Tensor get(const std::string &name) const;
  bool contains(const std::string &name) const;
  std::size_t size() const { return entries_.size(); }
  std::size_t scalar_count() const;

  void zero_grad();

private:
  Tensor add(const std::string &name, Tensor t);

  std::vector<std::pair<std::string, Tensor>> entries_;
};

enum class Activation { kRelu, kSoftplus };

struct Linear {
  Tensor weight;  // in x out
  Tensor bias;    // 1 x out, undefined when bias-free

  Tensor operator()(const Tensor &x) const;
  int in_dim() const { return weight.rows(); }
  int out_dim() const { return weight.cols(); }
};

Linear make_linear(ParamStore &store, const std::string &name, int in, int out,
                   bool bias, Rng &rng);

// Stack of Linear layers with the activation between them and a linear
// output.
struct Mlp {
  std::vector<Linear> layers;
  Activation activation = Activation::kRelu;

  Tensor operator()(const Tensor &x) const;
  // Rest of the stack given the first layer's pre-activation.
  Tensor from_first(const Tensor &pre) const;
  const Linear &output() const { return layers.back(); }
};

Mlp make_mlp(ParamStore &store, const std::string &name,
             const std::vector<int> &widths, Activation activation, Rng &rng);

// Overwrites a tensor's storage with zeros (used to switch off a branch).
void fill_zero(Tensor &t);

}  // namespace fabind::nn

#endif  // FABIND_NN_H_
