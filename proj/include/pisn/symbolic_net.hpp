#pragma once

// Multilayer symbolic network: each layer evaluates the grammar relaxation
//
//   h^1   = [sin(W0_1.x), exp(W0_2.x), W0_3.x + W0_4.x, (W0_5.x)*(W0_6.x), inputs...]
//   h^j+1 = [sin(Wj_1.h), exp(Wj_2.h), Wj_3.h + Wj_4.h, (Wj_5.h)*(Wj_6.h), inputs...]
//   out   = Wd . h^d
//
// where every weight vector acts on the state augmented with a trailing
// constant 1 (the input is [x, y, t, 1]; hidden states get the same
// treatment so each line carries a scalar offset). depth counts the hidden
// layers, so the parameter count grows linearly with it.

#include <cassert>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pisn/grammar.hpp"
#include "pisn/jet.hpp"
#include "pisn/param.hpp"
#include "pisn/rng.hpp"

namespace pisn {

class SymbolicNet {
 public:
  SymbolicNet(Grammar grammar, int depth) : grammar_(grammar), depth_(depth) {
    if (depth < 1) throw std::invalid_argument("symbolic network depth must be >= 1");
    n_in_ = grammar.n_inputs();
  }

  const Grammar& grammar() const { return grammar_; }
  int depth() const { return depth_; }
  int n_inputs() const { return n_in_; }

  // Width of the state vector [4 operator outputs, inputs...]; weight blocks
  // act on it augmented with the constant, hence +1.
  int state_width() const { return kNumOperators + n_in_; }
  int first_block_len() const { return n_in_ + 1; }
  int hidden_block_len() const { return state_width() + 1; }

  std::size_t param_count() const {
    return static_cast<std::size_t>(kBlocksPerLayer) * first_block_len() +
           static_cast<std::size_t>(depth_ - 1) * kBlocksPerLayer * hidden_block_len() +
           hidden_block_len();
  }

  ParamLayout layout() const {
    ParamLayout l;
    for (int k = 1; k <= kBlocksPerLayer; ++k)
      l.add("l0.w" + std::to_string(k), first_block_len());
    for (int j = 1; j < depth_; ++j)
      for (int k = 1; k <= kBlocksPerLayer; ++k)
        l.add("l" + std::to_string(j) + ".w" + std::to_string(k), hidden_block_len());
    l.add("out", hidden_block_len());
    return l;
  }

  // Weights drawn i.i.d. uniform in [-0.5, 0.5]; reproducible under seed.
  ParamVector init(std::uint64_t seed) const {
    ParamVector p = make_params(layout());
    Rng rng(seed);
    for (double& w : p.values) w = rng.uniform(-0.5, 0.5);
    return p;
  }

  template <class T>
  Jet<T> forward(std::span<const T> params, std::span<const double> point) const {
    assert(params.size() == param_count());
    assert(point.size() == static_cast<std::size_t>(n_in_));

    std::array<Jet<T>, 3> inputs;
    for (int i = 0; i < n_in_; ++i) inputs[i] = jet_variable(T{point[i]}, i);
    const std::span<const Jet<T>> in_span(inputs.data(), n_in_);

    std::array<Jet<T>, kNumOperators + 3> state;
    std::array<Jet<T>, kBlocksPerLayer> pre;
    const std::span<const Jet<T>> state_span(state.data(), state_width());

    const T* w = params.data();
    // first layer acts on the raw inputs
    for (int k = 0; k < kBlocksPerLayer; ++k) {
      pre[k] = jet_affine(std::span<const T>(w, first_block_len()), in_span);
      w += first_block_len();
    }
    apply_rules(pre, inputs, state);

    for (int j = 1; j < depth_; ++j) {
      for (int k = 0; k < kBlocksPerLayer; ++k) {
        pre[k] = jet_affine(std::span<const T>(w, hidden_block_len()), state_span);
        w += hidden_block_len();
      }
      apply_rules(pre, inputs, state);
    }

    Jet<T> out = jet_affine(std::span<const T>(w, hidden_block_len()), state_span);
    w += hidden_block_len();
    assert(w == params.data() + params.size());
    return out;
  }

 private:
  template <class T>
  void apply_rules(const std::array<Jet<T>, kBlocksPerLayer>& pre,
                   const std::array<Jet<T>, 3>& inputs,
                   std::array<Jet<T>, kNumOperators + 3>& state) const {
    state[0] = sin(pre[0]);
    state[1] = exp(pre[1]);
    state[2] = pre[2] + pre[3];
    state[3] = pre[4] * pre[5];
    for (int i = 0; i < n_in_; ++i) state[kNumOperators + i] = inputs[i];
  }

  Grammar grammar_;
  int depth_;
  int n_in_;
};

}  // namespace pisn
