#pragma once

// Second-order forward-mode values. A Jet carries a value together with its
// gradient and Hessian with respect to up to three input variables (x, y, t).
// The Hessian is stored packed upper-triangular, so symmetry holds exactly.
//
// The scalar type T is double for plain evaluation or Rvar when parameter
// gradients are being recorded; nesting the two gives derivatives of the
// input-derivatives with respect to network parameters.

#include <array>
#include <cmath>
#include <span>

#include "pisn/tape.hpp"

namespace pisn {

inline constexpr int kMaxInputs = 3;
inline constexpr int kSecondSize = 6;  // packed upper triangle of a 3x3

// (i, j) with i <= j -> packed index: (0,0) (0,1) (0,2) (1,1) (1,2) (2,2)
constexpr int second_index(int i, int j) {
  if (i > j) {
    const int k = i;
    i = j;
    j = k;
  }
  return i * kMaxInputs - i * (i + 1) / 2 + j;
}

template <class T>
struct Jet {
  T v{};
  std::array<T, kMaxInputs> g{};
  std::array<T, kSecondSize> h{};

  T& first(int i) { return g[i]; }
  const T& first(int i) const { return g[i]; }
  T& second(int i, int j) { return h[second_index(i, j)]; }
  const T& second(int i, int j) const { return h[second_index(i, j)]; }

  // Component view: 0 = value, 1..3 = gradient, 4..9 = packed Hessian.
  static constexpr int kComponents = 1 + kMaxInputs + kSecondSize;
  T& comp(int c) { return c == 0 ? v : (c <= kMaxInputs ? g[c - 1] : h[c - 1 - kMaxInputs]); }
  const T& comp(int c) const {
    return c == 0 ? v : (c <= kMaxInputs ? g[c - 1] : h[c - 1 - kMaxInputs]);
  }
};

template <class T>
Jet<T> jet_constant(T value) {
  Jet<T> j;
  j.v = value;
  return j;
}

// Seeds an input variable: unit first derivative in slot `var`, zero Hessian.
template <class T>
Jet<T> jet_variable(T value, int var) {
  Jet<T> j;
  j.v = value;
  j.g[var] = T{1.0};
  return j;
}

// ---- arithmetic -----------------------------------------------------------

template <class T>
Jet<T> operator+(const Jet<T>& a, const Jet<T>& b) {
  Jet<T> r;
  r.v = a.v + b.v;
  for (int i = 0; i < kMaxInputs; ++i) r.g[i] = a.g[i] + b.g[i];
  for (int i = 0; i < kSecondSize; ++i) r.h[i] = a.h[i] + b.h[i];
  return r;
}

template <class T>
Jet<T> operator-(const Jet<T>& a, const Jet<T>& b) {
  Jet<T> r;
  r.v = a.v - b.v;
  for (int i = 0; i < kMaxInputs; ++i) r.g[i] = a.g[i] - b.g[i];
  for (int i = 0; i < kSecondSize; ++i) r.h[i] = a.h[i] - b.h[i];
  return r;
}

template <class T>
Jet<T> operator-(const Jet<T>& a) {
  Jet<T> r;
  r.v = -a.v;
  for (int i = 0; i < kMaxInputs; ++i) r.g[i] = -a.g[i];
  for (int i = 0; i < kSecondSize; ++i) r.h[i] = -a.h[i];
  return r;
}

template <class T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
  Jet<T> r;
  r.v = a.v * b.v;
  for (int i = 0; i < kMaxInputs; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
  for (int i = 0; i <= 2; ++i)
    for (int j = i; j <= 2; ++j) {
      const int k = second_index(i, j);
      r.h[k] = a.h[k] * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] + a.v * b.h[k];
    }
  return r;
}

template <class T, class C>
Jet<T> scale(const Jet<T>& a, C c) {
  Jet<T> r;
  r.v = a.v * c;
  for (int i = 0; i < kMaxInputs; ++i) r.g[i] = a.g[i] * c;
  for (int i = 0; i < kSecondSize; ++i) r.h[i] = a.h[i] * c;
  return r;
}

template <class T>
Jet<T> operator*(const Jet<T>& a, double c) { return scale(a, c); }
template <class T>
Jet<T> operator*(double c, const Jet<T>& a) { return scale(a, c); }
template <class T>
Jet<T> operator+(const Jet<T>& a, double c) {
  Jet<T> r = a;
  r.v = a.v + c;
  return r;
}
template <class T>
Jet<T> operator+(double c, const Jet<T>& a) { return a + c; }
template <class T>
Jet<T> operator-(const Jet<T>& a, double c) { return a + (-c); }
template <class T>
Jet<T> operator-(double c, const Jet<T>& a) { return (-a) + c; }

// f(u) with f' and f'' evaluated at u.v.
template <class T>
Jet<T> jet_chain(const Jet<T>& u, T f, T fp, T fpp) {
  Jet<T> r;
  r.v = f;
  for (int i = 0; i < kMaxInputs; ++i) r.g[i] = fp * u.g[i];
  for (int i = 0; i <= 2; ++i)
    for (int j = i; j <= 2; ++j) {
      const int k = second_index(i, j);
      r.h[k] = fpp * (u.g[i] * u.g[j]) + fp * u.h[k];
    }
  return r;
}

template <class T>
Jet<T> sin(const Jet<T>& u) {
  using std::cos;
  using std::sin;
  T s = sin(u.v);
  T c = cos(u.v);
  return jet_chain(u, s, c, -s);
}

template <class T>
Jet<T> cos(const Jet<T>& u) {
  using std::cos;
  using std::sin;
  T c = cos(u.v);
  T s = sin(u.v);
  return jet_chain(u, c, -s, -c);
}

template <class T>
Jet<T> exp(const Jet<T>& u) {
  using std::exp;
  T e = exp(u.v);
  return jet_chain(u, e, e, e);
}

template <class T>
Jet<T> tanh(const Jet<T>& u) {
  using std::tanh;
  T y = tanh(u.v);
  T d = 1.0 - y * y;
  T dd = -2.0 * (y * d);
  return jet_chain(u, y, d, dd);
}

// Affine form over jets: weights w (length h.size()+1, trailing bias) applied
// componentwise. For Rvar scalars each component becomes one fused tape entry.
inline Jet<Rvar> jet_affine(std::span<const Rvar> w, std::span<const Jet<Rvar>> h) {
  assert(w.size() == h.size() + 1);
  Tape& t = detail::tape();
  const std::size_t n = h.size();
  Jet<Rvar> r;
  for (int c = 0; c < Jet<Rvar>::kComponents; ++c) {
    t.dot_begin();
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Rvar& hc = h[i].comp(c);
      v += w[i].v * hc.v;
      if (w[i].idx >= 0 && hc.v != 0.0) t.dot_arg(w[i].idx, hc.v);
      if (hc.idx >= 0) t.dot_arg(hc.idx, w[i].v);
    }
    if (c == 0) {
      v += w[n].v;
      if (w[n].idx >= 0) t.dot_arg(w[n].idx, 1.0);
    }
    r.comp(c) = t.dot_empty() ? Rvar{v} : Rvar{v, t.dot_end()};
  }
  return r;
}

inline Jet<double> jet_affine(std::span<const double> w, std::span<const Jet<double>> h) {
  assert(w.size() == h.size() + 1);
  const std::size_t n = h.size();
  Jet<double> r;
  for (int c = 0; c < Jet<double>::kComponents; ++c) {
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) v += w[i] * h[i].comp(c);
    if (c == 0) v += w[n];
    r.comp(c) = v;
  }
  return r;
}

// Evaluates f (a composition of jet primitives over the seeded inputs) and
// returns its value, gradient and Hessian at the given point.
template <class F>
Jet<double> jet_eval(F&& f, std::span<const double> point) {
  std::array<Jet<double>, kMaxInputs> vars;
  for (std::size_t i = 0; i < point.size(); ++i)
    vars[i] = jet_variable(point[i], static_cast<int>(i));
  return f(std::span<const Jet<double>>(vars.data(), point.size()));
}

}  // namespace pisn
