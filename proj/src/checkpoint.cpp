//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace fabind::checkpoint {
namespace {

class Writer {
public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void i64(std::int64_t v) { put(static_cast<std::uint64_t>(v), 8); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void str(const std::string &s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_ += s;
  }
  void raw(const char *p, std::size_t n) { out_.append(p, n); }
  std::string take() { return std::move(out_); }

private:
  void put(std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i)
      out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::string out_;
};

class Reader {
public:
  explicit Reader(const std::string &in): in_(in) { }

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  std::int64_t i64() { return static_cast<std::int64_t>(get(8)); }
  double f64() { return std::bit_cast<double>(get(8)); }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == in_.size(); }
  std::size_t position() const { return pos_; }

private:
  void need(std::size_t n) const {
    if (pos_ + n > in_.size())
      throw FormatError("checkpoint truncated at byte "
                        + std::to_string(pos_));
  }
  std::uint64_t get(int bytes) {
    need(bytes);
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in_[pos_ + i]))
           << (8 * i);
    pos_ += bytes;
    return v;
  }

  const std::string &in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode(const Checkpoint &ckpt) {
  Writer w;
  w.raw(kMagic, 5);
  w.u32(static_cast<std::uint32_t>(ckpt.metadata.size()));
  for (const auto &[k, v]: ckpt.metadata) {
    w.str(k);
    w.str(v);
  }
  w.u64(ckpt.params.size());
  for (const auto &p: ckpt.params) {
    if (p.values.size() != p.rows * p.cols)
      throw FormatError("parameter " + p.name + " has inconsistent shape");
    w.str(p.name);
    w.u64(p.rows);
    w.u64(p.cols);
    for (double v: p.values)
      w.f64(v);
  }
  w.u8(ckpt.has_optimizer ? 1 : 0);
  if (ckpt.has_optimizer) {
    const auto &o = ckpt.optimizer;
    if (o.first.size() != ckpt.params.size()
        || o.second.size() != ckpt.params.size())
      throw FormatError("optimizer moments do not match parameter table");
    w.i64(o.step);
    w.f64(o.config.lr);
    w.f64(o.config.beta1);
    w.f64(o.config.beta2);
    w.f64(o.config.eps);
    w.f64(o.config.weight_decay);
    w.f64(o.config.max_grad_norm);
    for (std::size_t k = 0; k < ckpt.params.size(); ++k) {
      for (double v: o.first[k])
        w.f64(v);
      for (double v: o.second[k])
        w.f64(v);
    }
  }
  return w.take();
}

Checkpoint decode(const std::string &bytes) {
  Reader r(bytes);
  if (r.bytes(5) != std::string(kMagic, 5))
    throw FormatError("not a checkpoint: bad magic");
  Checkpoint c;
  const std::uint32_t nmeta = r.u32();
  for (std::uint32_t i = 0; i < nmeta; ++i) {
    std::string k = r.str();
    c.metadata[k] = r.str();
  }
  const std::uint64_t np = r.u64();
  for (std::uint64_t i = 0; i < np; ++i) {
    NamedArray a;
    a.name = r.str();
    a.rows = r.u64();
    a.cols = r.u64();
    if (a.rows * a.cols > bytes.size() / 8)
      throw FormatError("parameter " + a.name + " larger than the file");
    a.values.resize(a.rows * a.cols);
    for (double &v: a.values)
      v = r.f64();
    c.params.push_back(std::move(a));
  }
  c.has_optimizer = r.u8() != 0;
  if (c.has_optimizer) {
    auto &o = c.optimizer;
    o.step = r.i64();
    o.config.lr = r.f64();
    o.config.beta1 = r.f64();
    o.config.beta2 = r.f64();
    o.config.eps = r.f64();
    o.config.weight_decay = r.f64();
    o.config.max_grad_norm = r.f64();
    for (const auto &p: c.params) {
      auto &m = o.first.emplace_back(p.values.size());
      for (double &v: m)
        v = r.f64();
      auto &s = o.second.emplace_back(p.values.size());
      for (double &v: s)
        v = r.f64();
    }
  }
  if (!r.done())
    throw FormatError("trailing bytes after checkpoint at offset "
                      + std::to_string(r.position()));
  return c;
}

void write_file(const std::string &path, const Checkpoint &ckpt) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw std::runtime_error("cannot open checkpoint for writing: " + path);
  const std::string bytes = encode(ckpt);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os)
    throw std::runtime_error("failed writing checkpoint: " + path);
}

Checkpoint read_file(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw std::runtime_error("cannot open checkpoint: " + path);
  std::string bytes((std::istreambuf_iterator<char>(is)),
                    std::istreambuf_iterator<char>());
  return decode(bytes);
}

Checkpoint capture(const nn::ParamStore &store, const AdamW *optimizer,
                   std::map<std::string, std::string> metadata) {
  Checkpoint c;
  c.metadata = std::move(metadata);
  for (const auto &[name, t]: store.entries())
    c.params.push_back({ name, static_cast<std::uint64_t>(t.rows()),
                         static_cast<std::uint64_t>(t.cols()),
                         { t.values().begin(), t.values().end() } });
  if (optimizer != nullptr) {
    c.has_optimizer = true;
    c.optimizer.step = optimizer->step_count();
    c.optimizer.config = optimizer->config();
    c.optimizer.first = optimizer->first_moments();
    c.optimizer.second = optimizer->second_moments();
  }
  return c;
}

void restore(const Checkpoint &ckpt, nn::ParamStore &store, AdamW *optimizer) {
  const auto &entries = store.entries();
  if (entries.size() != ckpt.params.size())
    throw FormatError("checkpoint has " + std::to_string(ckpt.params.size())
                      + " parameters, model expects "
                      + std::to_string(entries.size()));
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto &src = ckpt.params[k];
    Tensor dst = entries[k].second;
    if (src.name != entries[k].first
        || src.rows != static_cast<std::uint64_t>(dst.rows())
        || src.cols != static_cast<std::uint64_t>(dst.cols()))
      throw FormatError("checkpoint parameter " + src.name
                        + " does not match model parameter "
                        + entries[k].first);
    std::copy(src.values.begin(), src.values.end(),
              dst.mutable_values().begin());
  }
  if (optimizer != nullptr) {
    if (!ckpt.has_optimizer)
      throw FormatError("checkpoint carries no optimizer state");
    optimizer->first_moments() = ckpt.optimizer.first;
    optimizer->second_moments() = ckpt.optimizer.second;
    optimizer->set_step_count(ckpt.optimizer.step);
  }
}

}  // namespace fabind::checkpoint
