#pragma once

// Catalog of the benchmark PDE problems: governing residual operators,
// domain geometry, initial/boundary data and closed-form solution oracles.
// The solution oracles are evaluated through jets, so they provide exact
// derivatives for residual checks.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pisn/grammar.hpp"
#include "pisn/jet.hpp"

namespace pisn {

// Dual-instantiated residual operator: the same formula evaluated over plain
// jets and over tape-recorded jets.
struct ResidualFn {
  std::function<void(std::span<const Jet<double>>, std::span<const double>,
                     std::span<double>)>
      d;
  std::function<void(std::span<const Jet<Rvar>>, std::span<const double>, std::span<Rvar>)>
      r;

  void operator()(std::span<const Jet<double>> u, std::span<const double> pt,
                  std::span<double> out) const {
    d(u, pt, out);
  }
  void operator()(std::span<const Jet<Rvar>> u, std::span<const double> pt,
                  std::span<Rvar> out) const {
    r(u, pt, out);
  }
};

template <class F>
ResidualFn make_residual(F f) {
  ResidualFn fn;
  fn.d = f;
  fn.r = f;
  return fn;
}

// Writes one target value per output at the given point.
using TargetFn = std::function<void(std::span<const double>, std::span<double>)>;
// Exact solution with derivatives, one jet per output.
using ExactFn = std::function<void(std::span<const double>, std::span<Jet<double>>)>;

struct CollocationCounts {
  int interior = 0;
  int idc = 0;
  int inc = 0;
  int bc = 0;
};

struct PDEProblem {
  std::string name;
  Grammar grammar;
  int n_outputs = 1;
  int n_equations = 1;
  std::vector<std::string> output_names{"u"};
  std::array<double, 3> lo{};  // extents per compact coordinate
  std::array<double, 3> hi{};
  bool has_time = false;  // last compact coordinate is time
  bool has_idc = false, has_inc = false, has_bc = false;

  std::string task_name;  // empty when unparameterized
  double task_value = 0.0;
  std::array<double, 2> task_range{0.0, 0.0};
  bool task_out_of_range = false;  // set instead of rejecting (telegraph only)

  ResidualFn residual;
  ExactFn exact;
  TargetFn idc_target, inc_target, bc_target;

  CollocationCounts default_counts;

  int n_dims() const { return grammar.n_inputs(); }
  int time_index() const { return grammar.n_inputs() - 1; }

  void exact_values(std::span<const double> pt, std::span<double> out) const {
    std::vector<Jet<double>> jets(n_outputs);
    exact(pt, jets);
    for (int k = 0; k < n_outputs; ++k) out[k] = jets[k].v;
  }
};

// The Kovasznay eigenvalue: the unique value for which the closed-form
// velocity/pressure fields satisfy the steady Navier-Stokes system.
inline double kovasznay_lambda(double re) {
  return re / 2.0 - std::sqrt(re * re / 4.0 + 4.0 * std::numbers::pi * std::numbers::pi);
}

namespace detail {

// 1/(1+e^z) expressed through tanh so large |z| saturates instead of
// overflowing.
template <class T>
Jet<T> logistic(const Jet<T>& z) {
  return 0.5 - 0.5 * tanh(scale(z, 0.5));
}

inline void require_range(const std::string& name, double v, double lo, double hi) {
  if (!(v >= lo && v <= hi))
    throw std::out_of_range(name + " out of range [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]: " + std::to_string(v));
}

// Derives a target function from the exact solution.
inline TargetFn exact_target(const PDEProblem& p) {
  const ExactFn exact = p.exact;
  const int n = p.n_outputs;
  return [exact, n](std::span<const double> pt, std::span<double> out) {
    std::vector<Jet<double>> jets(n);
    exact(pt, jets);
    for (int k = 0; k < n; ++k) out[k] = jets[k].v;
  };
}

}  // namespace detail

inline const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {
      "wave", "heat", "fp1", "fp2", "fp3", "kovasznay",
      "burgers2d-coupled", "burgers2d-conservation", "telegraph1", "telegraph2"};
  return names;
}

inline PDEProblem catalog_get(const std::string& name, double task = std::nan("")) {
  using std::numbers::pi;
  const bool has_task = !std::isnan(task);

  PDEProblem p;
  p.name = name;

  auto no_task_allowed = [&] {
    if (has_task)
      throw std::invalid_argument(name + " takes no task parameter");
  };
  auto need_task = [&](const char* tname, double lo, double hi) {
    if (!has_task)
      throw std::invalid_argument(name + " requires task parameter " + tname +
                                  " in [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
    p.task_name = tname;
    p.task_value = task;
    p.task_range = {lo, hi};
  };

  if (name == "wave") {
    no_task_allowed();
    p.grammar = Grammar::xt();
    p.has_time = true;
    p.lo = {0.0, 0.0, 0.0};
    p.hi = {pi, 1.0, 0.0};
    p.has_idc = p.has_inc = p.has_bc = true;
    p.residual = make_residual([](auto u, std::span<const double>, auto out) {
      out[0] = u[0].second(1, 1) - u[0].second(0, 0);
    });
    p.exact = [](std::span<const double> pt, std::span<Jet<double>> out) {
      auto x = jet_variable(pt[0], 0);
      auto t = jet_variable(pt[1], 1);
      out[0] = sin(x) * sin(t);
    };
    p.idc_target = [](std::span<const double>, std::span<double> out) { out[0] = 0.0; };
    p.inc_target = [](std::span<const double> pt, std::span<double> out) {
      out[0] = std::sin(pt[0]);
    };
    p.bc_target = [](std::span<const double>, std::span<double> out) { out[0] = 0.0; };
    p.default_counts = {1000, 100, 100, 100};
  } else if (name == "heat") {
    no_task_allowed();
    p.grammar = Grammar::xt();
    p.has_time = true;
    p.lo = {0.0, 0.0, 0.0};
    p.hi = {pi, 1.0, 0.0};
    p.has_idc = p.has_bc = true;
    p.residual = make_residual([](auto u, std::span<const double>, auto out) {
      out[0] = u[0].first(1) - u[0].second(0, 0);
    });
    p.exact = [](std::span<const double> pt, std::span<Jet<double>> out) {
      auto x = jet_variable(pt[0], 0);
      auto t = jet_variable(pt[1], 1);
      out[0] = sin(x) * exp(-t);
    };
    p.idc_target = [](std::span<const double> pt, std::span<double> out) {
      out[0] = std::sin(pt[0]);
    };
    p.bc_target = [](std::span<const double>, std::span<double> out) { out[0] = 0.0; };
    p.default_counts = {1000, 100, 0, 100};
  } else if (name == "fp1") {
    // u_t = u_x + u_xx (Fokker-Planck with drift -1, diffusion 1)
    no_task_allowed();
    p.grammar = Grammar::xt();
    p.has_time = true;
    p.lo = {0.0, 0.0, 0.0};
    p.hi = {1.0, 1.0, 0.0};
    p.has_idc = true;
    p.residual = make_residual([](auto u, std::span<const double>, auto out) {
      out[0] = u[0].first(1) - u[0].first(0) - u[0].second(0, 0);
    });
    p.exact = [](std::span<const double> pt, std::span<Jet<double>> out) {
      auto x = jet_variable(pt[0], 0);
      auto t = jet_variable(pt[1], 1);
      out[0] = x + t;
    };
    p.idc_target = [](std::span<const double> pt, std::span<double> out) { out[0] = pt[0]; };
    p.default_counts = {1000, 200, 0, 0};
  } else if (name == "fp2") {
    // Fokker-Planck with drift x and diffusion x^2/2:
    //   u_t = -(x u)_x + (x^2 u / 2)_xx, expanded to jet slots.
    no_task_allowed();
    p.grammar = Grammar::xt();
    p.has_time = true;
    p.lo = {0.0, 0.0, 0.0};
    p.hi = {1.0, 1.0, 0.0};
    p.has_idc = true;
    p.residual = make_residual([](auto u, std::span<const double> pt, auto out) {
      const double x = pt[0];
      out[0] = u[0].first(1) - x * u[0].first(0) - 0.5 * x * x * u[0].second(0, 0);
    });
    p.exact = [](std::span<const double> pt, std::span<Jet<double>> out) {
      auto x = jet_variable(pt[0], 0);
      auto t = jet_variable(pt[1], 1);
      out[0] = x * exp(t);
    };
    p.idc_target = [](std::span<const double> pt, std::span<double> out) { out[0] = pt[0]; };
    p.default_counts = {1000, 200, 0, 0};
  } else if (name == "fp3") {
    // Backward Kolmogorov form: u_t = (x+1) u_x + x^2 e^t u_xx.
    no_task_allowed();
    p.grammar = Grammar::xt();
    p.has_time = true;
    p.lo = {0.0, 0.0, 0.0};
    p.hi = {1.0, 1.0, 0.0};
    p.has_idc = true;
    p.residual = make_residual([](auto u, std::span<const double> pt, auto out) {
      const double x = pt[0];
      const double t = pt[1];
      out[0] = u[0].first(1) - (x + 1.0) * u[0].first(0) -
               x * x * std::exp(t) * u[0].second(0, 0);
    });
    p.exact = [](std::span<const double> pt, std::span<Jet<double>> out) {
      auto x = jet_variable(pt[0], 0);
      auto t = jet_variable(pt[1], 1);
      out[0] = (x + 1.0) * exp(t);
    };
    p.idc_target = [](std::span<const double> pt, std::span<double> out) {
      out[0] = pt[0] + 1.0;
    };
    p.default_counts = {1000, 200, 0, 0};
  } else if (name == "kovasznay") {
    need_task("Re", 100.0, 1000.0);
    detail::require_range("Re", task, 100.0, 1000.0);
    p.grammar = Grammar::xy();
    p.n_outputs = 3;
    p.n_equations = 3;
    p.output_names = {"u", "v", "p"};
    p.lo = {-0.5, -0.5, 0.0};
    p.hi = {1.0, 1.5, 0.0};
    p.has_bc = true;
    const double inv_re = 1.0 / task;
    p.residual = make_residual([inv_re](auto u, std::span<const double>, auto out) {
      const auto& U = u[0];
      const auto& V = u[1];
      const auto& P = u[2];
      out[0] = U.first(0) + V.first(1);
      out[1] = U.v * U.first(0) + V.v * U.first(1) + P.first(0) -
               inv_re * (U.second(0, 0) + U.second(1, 1));
      out[2] = U.v * V.first(0) + V.v * V.first(1) + P.first(1) -
               inv_re * (V.second(0, 0) + V.second(1, 1));
    });
    const double lam = kovasznay_lambda(task);
    p.exact = [lam](std::span<const double> pt, std::span<Jet<double>> out) {
      using std::numbers::pi;
      auto x = jet_variable(pt[0], 0);
      auto y = jet_variable(pt[1], 1);
      auto ex = exp(scale(x, lam));
      out[0] = 1.0 - ex * cos(scale(y, 2.0 * pi));
      out[1] = scale(ex * sin(scale(y, 2.0 * pi)), lam / (2.0 * pi));
      out[2] = scale(1.0 - exp(scale(x, 2.0 * lam)), 0.5);
    };
    p.bc_target = detail::exact_target(p);
    p.default_counts = {2601, 0, 0, 320};
  } else if (name == "burgers2d-coupled") {
    need_task("nu", 1e-3, 1e-2);
    detail::require_range("nu", task, 1e-3, 1e-2);
    p.grammar = Grammar::xyt();
    p.has_time = true;
    p.n_outputs = 2;
    p.n_equations = 2;
    p.output_names = {"u", "v"};
    p.lo = {0.0, 0.0, 0.0};
    p.hi = {1.0, 1.0, 1.0};
    p.has_idc = p.has_bc = true;
    const double nu = task;
    p.residual = make_residual([nu](auto u, std::span<const double>, auto out) {
      const auto& U = u[0];
      const auto& V = u[1];
      out[0] = U.first(2) + U.v * U.first(0) + V.v * U.first(1) -
               nu * (U.second(0, 0) + U.second(1, 1));
      out[1] = V.first(2) + U.v * V.first(0) + V.v * V.first(1) -
               nu * (V.second(0, 0) + V.second(1, 1));
    });
    p.exact = [nu](std::span<const double> pt, std::span<Jet<double>> out) {
      auto x = jet_variable(pt[0], 0);
      auto y = jet_variable(pt[1], 1);
      auto t = jet_variable(pt[2], 2);
      auto z = scale(scale(y, 4.0) - scale(x, 4.0) - t, 1.0 / (32.0 * nu));
      auto s = detail::logistic(z);  // 1/(1+e^z)
      out[0] = 0.75 - scale(s, 0.25);
      out[1] = 0.75 + scale(s, 0.25);
    };
    p.idc_target = detail::exact_target(p);
    p.bc_target = detail::exact_target(p);
    p.default_counts = {2601, 400, 0, 320};
  } else if (name == "burgers2d-conservation") {
    // Conservation form u_t + p_x + q_y = nu (u_xx + u_yy) with inviscid
    // fluxes p = q = u^2/2.
    need_task("nu", 5e-3, 5e-2);
    detail::require_range("nu", task, 5e-3, 5e-2);
    p.grammar = Grammar::xyt();
    p.has_time = true;
    p.lo = {0.0, 0.0, 0.0};
    p.hi = {1.0, 1.0, 1.0};
    p.has_idc = p.has_bc = true;
    const double nu = task;
    p.residual = make_residual([nu](auto u, std::span<const double>, auto out) {
      const auto& U = u[0];
      out[0] = U.first(2) + U.v * U.first(0) + U.v * U.first(1) -
               nu * (U.second(0, 0) + U.second(1, 1));
    });
    p.exact = [nu](std::span<const double> pt, std::span<Jet<double>> out) {
      auto x = jet_variable(pt[0], 0);
      auto y = jet_variable(pt[1], 1);
      auto t = jet_variable(pt[2], 2);
      auto w = scale(x + y - t, 1.0 / (2.0 * nu));
      out[0] = detail::logistic(w);
    };
    p.idc_target = detail::exact_target(p);
    p.bc_target = detail::exact_target(p);
    p.default_counts = {2601, 400, 0, 320};
  } else if (name == "telegraph1") {
    // u_xx = u_tt + 2 u_t + u, initial data parameterized by A.
    need_task("A", 0.5, 5.0);
    if (!(task >= 0.5 && task <= 5.0)) p.task_out_of_range = true;
    p.grammar = Grammar::xt();
    p.has_time = true;
    p.lo = {0.0, 0.0, 0.0};
    p.hi = {1.0, 1.0, 0.0};
    p.has_idc = p.has_inc = p.has_bc = true;
    p.residual = make_residual([](auto u, std::span<const double>, auto out) {
      out[0] = u[0].second(0, 0) - u[0].second(1, 1) - 2.0 * u[0].first(1) - u[0].v;
    });
    const double a = task;
    p.exact = [a](std::span<const double> pt, std::span<Jet<double>> out) {
      auto x = jet_variable(pt[0], 0);
      auto t = jet_variable(pt[1], 1);
      out[0] = exp(scale(x, a) - scale(t, a + 1.0));
    };
    p.idc_target = [a](std::span<const double> pt, std::span<double> out) {
      out[0] = std::exp(a * pt[0]);
    };
    p.inc_target = [a](std::span<const double> pt, std::span<double> out) {
      out[0] = -(a + 1.0) * std::exp(a * pt[0]);
    };
    p.bc_target = detail::exact_target(p);
    p.default_counts = {2601, 40, 40, 40};
  } else if (name == "telegraph2") {
    // u_xx = u_tt + 2A u_t + A^2 u.
    need_task("A", 0.2, 3.2);
    if (!(task >= 0.2 && task <= 3.2)) p.task_out_of_range = true;
    p.grammar = Grammar::xt();
    p.has_time = true;
    p.lo = {0.0, 0.0, 0.0};
    p.hi = {1.0, 1.0, 0.0};
    p.has_idc = p.has_inc = p.has_bc = true;
    const double a = task;
    p.residual = make_residual([a](auto u, std::span<const double>, auto out) {
      out[0] = u[0].second(0, 0) - u[0].second(1, 1) - 2.0 * a * u[0].first(1) -
               a * a * u[0].v;
    });
    p.exact = [a](std::span<const double> pt, std::span<Jet<double>> out) {
      auto x = jet_variable(pt[0], 0);
      auto t = jet_variable(pt[1], 1);
      out[0] = exp(scale(x, a)) + exp(scale(t, -a));
    };
    p.idc_target = [a](std::span<const double> pt, std::span<double> out) {
      out[0] = 1.0 + std::exp(a * pt[0]);
    };
    p.inc_target = [a](std::span<const double>, std::span<double> out) { out[0] = -a; };
    p.bc_target = detail::exact_target(p);
    p.default_counts = {2601, 40, 40, 40};
  } else {
    throw std::invalid_argument("unknown problem: " + name);
  }
  return p;
}

}  // namespace pisn
