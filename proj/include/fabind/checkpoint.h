//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_CHECKPOINT_H_
#define FABIND_CHECKPOINT_H_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fabind/nn.h"
#include "fabind/optimizer.h"

// Binary checkpoint container. All integers are unsigned little-endian, all
// reals IEEE-754 binary64 little-endian. Layout, in order:
//
//   offset 0   5 bytes   magic "FABK1"
//   offset 5   u32       metadata entry count M
//              M x { u32 key length, key bytes, u32 value length, value bytes }
//              u64       parameter count P
//              P x { u32 name length, name bytes, u64 rows, u64 cols,
//                    rows*cols f64 values }
//              u8        1 if optimizer state follows, else 0
//              [ i64 step, f64 lr, f64 beta1, f64 beta2, f64 eps,
//                f64 weight_decay, f64 max_grad_norm,
//                P x { rows*cols f64 first moment, rows*cols f64 second
//                      moment } ]
//
// Metadata holds the model configuration and the trainer RNG state as text.
namespace fabind::checkpoint {

inline constexpr char kMagic[] = "FABK1";

class FormatError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct NamedArray {
  std::string name;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::vector<double> values;

  bool operator==(const NamedArray &) const = default;
};

struct OptimizerSnapshot {
  std::int64_t step = 0;
  AdamWConfig config;
  std::vector<std::vector<double>> first;
  std::vector<std::vector<double>> second;

  bool operator==(const OptimizerSnapshot &) const = default;
};

struct Checkpoint {
  std::map<std::string, std::string> metadata;
  std::vector<NamedArray> params;
  bool has_optimizer = false;
  OptimizerSnapshot optimizer;

  bool operator==(const Checkpoint &) const = default;
};

std::string encode(const Checkpoint &ckpt);
Checkpoint decode(const std::string &bytes);

void write_file(const std::string &path, const Checkpoint &ckpt);
Checkpoint read_file(const std::string &path);

Checkpoint capture(const nn::ParamStore &store, const AdamW *optimizer,
                   std::map<std::string, std::string> metadata);
// Copies values into an existing store (names and shapes must match exactly)
// and, when given, restores the optimizer moments and step counter.
void restore(const Checkpoint &ckpt, nn::ParamStore &store, AdamW *optimizer);

}  // namespace fabind::checkpoint

#endif  // FABIND_CHECKPOINT_H_
