#pragma once

// Flat parameter storage shared by every trainable network. Segments name
// contiguous weight blocks (layer, weight-vector) so checkpoints and
// gradients can be addressed symbolically.

#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pisn/tape.hpp"

namespace pisn {

struct ParamSegment {
  std::string name;
  std::size_t offset = 0;
  std::size_t length = 0;
};

class ParamLayout {
 public:
  std::size_t add(std::string name, std::size_t length) {
    const std::size_t offset = total_;
    segments_.push_back(ParamSegment{std::move(name), offset, length});
    total_ += length;
    return offset;
  }

  // Appends another layout's segments under a prefix.
  void append(const std::string& prefix, const ParamLayout& other) {
    for (const ParamSegment& s : other.segments_) add(prefix + s.name, s.length);
  }

  const std::vector<ParamSegment>& segments() const { return segments_; }
  std::size_t total() const { return total_; }

  const ParamSegment& find(const std::string& name) const {
    for (const ParamSegment& s : segments_)
      if (s.name == name) return s;
    throw std::invalid_argument("unknown parameter segment: " + name);
  }

  // Segments are disjoint and cover [0, total) by construction; validate
  // checks the bookkeeping anyway.
  bool valid() const {
    std::size_t expect = 0;
    for (const ParamSegment& s : segments_) {
      if (s.offset != expect) return false;
      expect += s.length;
    }
    return expect == total_;
  }

 private:
  std::vector<ParamSegment> segments_;
  std::size_t total_ = 0;
};

struct ParamVector {
  ParamLayout layout;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }

  std::span<double> segment(const std::string& name) {
    const ParamSegment& s = layout.find(name);
    return std::span<double>(values.data() + s.offset, s.length);
  }
  std::span<const double> segment(const std::string& name) const {
    const ParamSegment& s = layout.find(name);
    return std::span<const double>(values.data() + s.offset, s.length);
  }
};

inline ParamVector make_params(ParamLayout layout) {
  ParamVector p;
  p.values.assign(layout.total(), 0.0);
  p.layout = std::move(layout);
  return p;
}

// Registers every value as a tape leaf. Leaves occupy entries 0..n-1 of a
// freshly cleared tape, which gradient() below relies on.
inline std::vector<Rvar> lift(Tape& tape, std::span<const double> values) {
  std::vector<Rvar> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(tape.leaf(v));
  return out;
}

// Mixed lift: entries with trainable[i] == false become constants, so no
// adjoint ever reaches them and frozen stages stay bit-exact.
inline std::vector<Rvar> lift_masked(Tape& tape, std::span<const double> values,
                                     std::span<const std::uint8_t> trainable,
                                     std::vector<std::uint32_t>& leaf_to_param) {
  std::vector<Rvar> out;
  out.reserve(values.size());
  leaf_to_param.clear();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (trainable[i]) {
      out.push_back(tape.leaf(values[i]));
      leaf_to_param.push_back(static_cast<std::uint32_t>(i));
    } else {
      out.push_back(Rvar{values[i]});
    }
  }
  return out;
}

// Gradient of a recorded scalar with respect to the first n_leaves tape
// entries. Throws AutodiffError when the sweep produces NaN/Inf, identifying
// the offending record entry.
inline void gradient(const Tape& tape, Rvar loss, std::size_t n_leaves,
                     std::vector<double>& adjoint_buffer, std::span<double> grad) {
  if (!std::isfinite(loss.v))
    throw AutodiffError("loss is not finite before reverse sweep", loss.idx);
  if (loss.idx < 0) {  // loss independent of every parameter
    for (double& g : grad) g = 0.0;
    return;
  }
  tape.reverse(loss.idx, adjoint_buffer);
  bool finite = true;
  for (std::size_t i = 0; i < n_leaves; ++i) {
    grad[i] = adjoint_buffer[i];
    finite = finite && std::isfinite(grad[i]);
  }
  if (!finite) {
    const std::int64_t entry = tape.first_nonfinite_entry();
    throw AutodiffError(
        "non-finite adjoint during reverse sweep (first bad record entry " +
            std::to_string(entry) + ")",
        entry);
  }
}

// Convenience form matching the loss-gradient contract: same layout as the
// parameters, one adjoint per entry.
inline ParamVector param_grad(const Tape& tape, Rvar loss, const ParamVector& params) {
  ParamVector g = make_params(params.layout);
  std::vector<double> adjoint;
  gradient(tape, loss, params.size(), adjoint, g.values);
  return g;
}

}  // namespace pisn
