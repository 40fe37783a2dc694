#pragma once

// Reverse-mode automatic differentiation on a flat tape. Every recorded
// operation stores its operand indices together with the local partial
// derivatives, so the reverse sweep is a single backward pass with no
// re-evaluation. Dot products are recorded as one n-ary entry to keep the
// tape short in the dense-layer hot path.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pisn {

// Scalar tracked for reverse-mode differentiation. idx < 0 marks a constant
// that never propagates adjoints.
struct Rvar {
  double v = 0.0;
  std::int32_t idx = -1;

  constexpr Rvar() = default;
  constexpr Rvar(double value) : v(value), idx(-1) {}
  constexpr Rvar(double value, std::int32_t i) : v(value), idx(i) {}
};

struct AutodiffError : std::runtime_error {
  std::int64_t entry;
  AutodiffError(const std::string& what, std::int64_t e)
      : std::runtime_error(what), entry(e) {}
};

class Tape {
 public:
  // Unary entries leave b == kNone. An entry with a == kNary stores its
  // operands in the args array; b then indexes spans_.
  static constexpr std::int32_t kNone = -1;
  static constexpr std::int32_t kNary = -2;

  struct Entry {
    std::int32_t a = kNone;
    std::int32_t b = kNone;
    double da = 0.0;
    double db = 0.0;
  };
  struct Arg {
    std::int32_t idx;
    double partial;
  };

  std::size_t size() const { return entries_.size(); }
  std::size_t arg_count() const { return args_.size(); }

  void clear() {
    entries_.clear();
    spans_.clear();
    args_.clear();
  }

  void reserve(std::size_t entries, std::size_t args) {
    entries_.reserve(entries);
    args_.reserve(args);
  }

  // Leaves are independent variables: adjoints accumulate into them but
  // nothing propagates further.
  Rvar leaf(double value) {
    entries_.push_back(Entry{});
    return Rvar{value, static_cast<std::int32_t>(entries_.size() - 1)};
  }

  std::int32_t push_unary(std::int32_t a, double da) {
    entries_.push_back(Entry{a, kNone, da, 0.0});
    return static_cast<std::int32_t>(entries_.size() - 1);
  }

  std::int32_t push_binary(std::int32_t a, std::int32_t b, double da, double db) {
    entries_.push_back(Entry{a, b, da, db});
    return static_cast<std::int32_t>(entries_.size() - 1);
  }

  // Streaming builder for n-ary entries (dot products). Arguments pushed
  // between dot_begin and dot_end become one entry; if none were pushed the
  // result is a constant and no entry is recorded.
  void dot_begin() { pending_ = static_cast<std::uint32_t>(args_.size()); }

  void dot_arg(std::int32_t idx, double partial) {
    args_.push_back(Arg{idx, partial});
  }

  bool dot_empty() const { return args_.size() == pending_; }

  std::int32_t dot_end() {
    assert(!dot_empty());
    const std::uint32_t count = static_cast<std::uint32_t>(args_.size()) - pending_;
    spans_.push_back(SpanRec{pending_, count});
    entries_.push_back(
        Entry{kNary, static_cast<std::int32_t>(spans_.size() - 1), 0.0, 0.0});
    return static_cast<std::int32_t>(entries_.size() - 1);
  }

  // Adjoints of every entry with respect to the seed. The sweep starts at
  // the seed: later entries cannot influence it.
  void reverse(std::int32_t seed, std::vector<double>& adjoint) const {
    assert(seed >= 0 && seed < static_cast<std::int32_t>(entries_.size()));
    adjoint.assign(entries_.size(), 0.0);
    adjoint[seed] = 1.0;
    for (std::int32_t i = seed; i >= 0; --i) {
      const double w = adjoint[i];
      if (w == 0.0) continue;
      const Entry& e = entries_[i];
      if (e.a >= 0) {
        adjoint[e.a] += e.da * w;
        if (e.b >= 0) adjoint[e.b] += e.db * w;
      } else if (e.a == kNary) {
        const SpanRec s = spans_[e.b];
        const Arg* arg = args_.data() + s.begin;
        for (std::uint32_t k = 0; k < s.count; ++k)
          adjoint[arg[k].idx] += arg[k].partial * w;
      }
    }
  }

  // Locates the first entry whose stored partials are not finite. Used to
  // produce a diagnostic once a gradient has been seen to be NaN/Inf.
  std::int64_t first_nonfinite_entry() const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const Entry& e = entries_[i];
      if (e.a == kNary) {
        const SpanRec s = spans_[e.b];
        for (std::uint32_t k = 0; k < s.count; ++k)
          if (!std::isfinite(args_[s.begin + k].partial))
            return static_cast<std::int64_t>(i);
      } else if (!std::isfinite(e.da) || (e.b >= 0 && !std::isfinite(e.db))) {
        return static_cast<std::int64_t>(i);
      }
    }
    return -1;
  }

 private:
  struct SpanRec {
    std::uint32_t begin;
    std::uint32_t count;
  };

  std::vector<Entry> entries_;
  std::vector<SpanRec> spans_;
  std::vector<Arg> args_;
  std::uint32_t pending_ = 0;
};

namespace detail {

inline thread_local Tape* g_tape = nullptr;

inline Tape& tape() {
  assert(g_tape && "Rvar arithmetic requires an active TapeScope");
  return *g_tape;
}

}  // namespace detail

// Makes a tape the recording target for Rvar arithmetic on this thread.
class TapeScope {
 public:
  explicit TapeScope(Tape& t) : prev_(detail::g_tape) { detail::g_tape = &t; }
  ~TapeScope() { detail::g_tape = prev_; }
  TapeScope(const TapeScope&) = delete;
  TapeScope& operator=(const TapeScope&) = delete;

 private:
  Tape* prev_;
};

// ---- arithmetic -----------------------------------------------------------

inline Rvar operator+(Rvar x, Rvar y) {
  const double v = x.v + y.v;
  if (x.idx < 0 && y.idx < 0) return Rvar{v};
  return Rvar{v, detail::tape().push_binary(x.idx, y.idx, 1.0, 1.0)};
}

inline Rvar operator-(Rvar x, Rvar y) {
  const double v = x.v - y.v;
  if (x.idx < 0 && y.idx < 0) return Rvar{v};
  return Rvar{v, detail::tape().push_binary(x.idx, y.idx, 1.0, -1.0)};
}

inline Rvar operator-(Rvar x) {
  if (x.idx < 0) return Rvar{-x.v};
  return Rvar{-x.v, detail::tape().push_unary(x.idx, -1.0)};
}

inline Rvar operator*(Rvar x, Rvar y) {
  const double v = x.v * y.v;
  if (x.idx < 0 && y.idx < 0) return Rvar{v};
  return Rvar{v, detail::tape().push_binary(x.idx, y.idx, y.v, x.v)};
}

inline Rvar operator+(Rvar x, double c) { return x + Rvar{c}; }
inline Rvar operator+(double c, Rvar x) { return Rvar{c} + x; }
inline Rvar operator-(Rvar x, double c) { return x - Rvar{c}; }
inline Rvar operator-(double c, Rvar x) { return Rvar{c} - x; }
inline Rvar operator*(Rvar x, double c) { return x * Rvar{c}; }
inline Rvar operator*(double c, Rvar x) { return Rvar{c} * x; }

inline Rvar& operator+=(Rvar& x, Rvar y) { return x = x + y; }
inline Rvar& operator-=(Rvar& x, Rvar y) { return x = x - y; }
inline Rvar& operator*=(Rvar& x, Rvar y) { return x = x * y; }

inline Rvar sin(Rvar x) {
  const double v = std::sin(x.v);
  if (x.idx < 0) return Rvar{v};
  return Rvar{v, detail::tape().push_unary(x.idx, std::cos(x.v))};
}

inline Rvar cos(Rvar x) {
  const double v = std::cos(x.v);
  if (x.idx < 0) return Rvar{v};
  return Rvar{v, detail::tape().push_unary(x.idx, -std::sin(x.v))};
}

inline Rvar exp(Rvar x) {
  const double v = std::exp(x.v);
  if (x.idx < 0) return Rvar{v};
  return Rvar{v, detail::tape().push_unary(x.idx, v)};
}

inline Rvar tanh(Rvar x) {
  const double v = std::tanh(x.v);
  if (x.idx < 0) return Rvar{v};
  return Rvar{v, detail::tape().push_unary(x.idx, 1.0 - v * v)};
}

// Fused dot product: sum_i x[i]*y[i] recorded as a single tape entry.
inline Rvar dot(std::span<const Rvar> x, std::span<const Rvar> y) {
  assert(x.size() == y.size());
  Tape& t = detail::tape();
  t.dot_begin();
  double v = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    v += x[i].v * y[i].v;
    if (x[i].idx >= 0) t.dot_arg(x[i].idx, y[i].v);
    if (y[i].idx >= 0) t.dot_arg(y[i].idx, x[i].v);
  }
  if (t.dot_empty()) return Rvar{v};
  return Rvar{v, t.dot_end()};
}

// Affine form used by dense layers: weights w (length n+1, last entry is the
// bias acting on an implicit constant 1) applied to activations h (length n).
inline Rvar affine(std::span<const Rvar> w, std::span<const Rvar> h) {
  assert(w.size() == h.size() + 1);
  Tape& t = detail::tape();
  t.dot_begin();
  const std::size_t n = h.size();
  double v = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v += w[i].v * h[i].v;
    if (w[i].idx >= 0) t.dot_arg(w[i].idx, h[i].v);
    if (h[i].idx >= 0) t.dot_arg(h[i].idx, w[i].v);
  }
  v += w[n].v;
  if (w[n].idx >= 0) t.dot_arg(w[n].idx, 1.0);
  if (t.dot_empty()) return Rvar{v};
  return Rvar{v, t.dot_end()};
}

inline double affine(std::span<const double> w, std::span<const double> h) {
  assert(w.size() == h.size() + 1);
  double v = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) v += w[i] * h[i];
  return v + w[h.size()];
}

}  // namespace pisn
