#pragma once

// Plain tanh multilayer perceptron. Serves as the PINN baseline, as the
// residual operator added on top of a symbolic network, and as the target
// network generated by hypernetworks. tanh is smooth, so second-order jets
// stay exact; the output layer is linear.
//
// Parameters are stored one segment per layer, each neuron contiguous as
// [w_1..w_fanin, b].

#include <cassert>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pisn/jet.hpp"
#include "pisn/param.hpp"
#include "pisn/rng.hpp"

namespace pisn {

class MlpNet {
 public:
  // sizes: input width, hidden widths..., output width
  explicit MlpNet(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.size() < 2) throw std::invalid_argument("mlp needs input and output sizes");
    for (int s : sizes_)
      if (s < 1) throw std::invalid_argument("mlp layer sizes must be positive");
  }

  const std::vector<int>& sizes() const { return sizes_; }
  int n_inputs() const { return sizes_.front(); }
  int n_outputs() const { return sizes_.back(); }

  std::size_t param_count() const {
    std::size_t n = 0;
    for (std::size_t l = 1; l < sizes_.size(); ++l)
      n += static_cast<std::size_t>(sizes_[l]) * (sizes_[l - 1] + 1);
    return n;
  }

  ParamLayout layout() const {
    ParamLayout layout;
    for (std::size_t l = 1; l < sizes_.size(); ++l)
      layout.add("layer" + std::to_string(l),
                 static_cast<std::size_t>(sizes_[l]) * (sizes_[l - 1] + 1));
    return layout;
  }

  // Uniform weights scaled by 1/sqrt(fan_in); biases start at zero.
  ParamVector init(std::uint64_t seed) const {
    ParamVector p = make_params(layout());
    Rng rng(seed);
    std::size_t at = 0;
    for (std::size_t l = 1; l < sizes_.size(); ++l) {
      const int fan_in = sizes_[l - 1];
      const double s = 1.0 / std::sqrt(static_cast<double>(fan_in));
      for (int j = 0; j < sizes_[l]; ++j) {
        for (int i = 0; i < fan_in; ++i) p.values[at++] = rng.uniform(-s, s);
        p.values[at++] = 0.0;  // bias
      }
    }
    assert(at == p.size());
    return p;
  }

  template <class T>
  void forward(std::span<const T> params, std::span<const double> point,
               std::span<Jet<T>> out) const {
    assert(params.size() == param_count());
    assert(point.size() == static_cast<std::size_t>(n_inputs()));
    assert(out.size() == static_cast<std::size_t>(n_outputs()));

    const int max_w = max_width();
    std::vector<Jet<T>> buf(2 * max_w);
    Jet<T>* cur = buf.data();
    Jet<T>* nxt = buf.data() + max_w;

    for (int i = 0; i < sizes_[0]; ++i) cur[i] = jet_variable(T{point[i]}, i);

    const T* w = params.data();
    for (std::size_t l = 1; l < sizes_.size(); ++l) {
      const int fan_in = sizes_[l - 1];
      const bool last = l + 1 == sizes_.size();
      const std::span<const Jet<T>> prev(cur, fan_in);
      for (int j = 0; j < sizes_[l]; ++j) {
        Jet<T> pre = jet_affine(std::span<const T>(w, fan_in + 1), prev);
        w += fan_in + 1;
        if (last)
          out[j] = pre;
        else
          nxt[j] = tanh(pre);
      }
      std::swap(cur, nxt);
    }
    assert(w == params.data() + params.size());
  }

  // Value-only forward for scalar pipelines (hypernetworks, data fitting)
  // where no input derivatives are needed.
  template <class T>
  void forward_scalar(std::span<const T> params, std::span<const T> in,
                      std::span<T> out) const {
    using std::tanh;
    assert(params.size() == param_count());
    assert(in.size() == static_cast<std::size_t>(n_inputs()));
    assert(out.size() == static_cast<std::size_t>(n_outputs()));

    const int max_w = max_width();
    std::vector<T> buf(2 * max_w);
    T* cur = buf.data();
    T* nxt = buf.data() + max_w;
    for (int i = 0; i < sizes_[0]; ++i) cur[i] = in[i];

    const T* w = params.data();
    for (std::size_t l = 1; l < sizes_.size(); ++l) {
      const int fan_in = sizes_[l - 1];
      const bool last = l + 1 == sizes_.size();
      const std::span<const T> prev(cur, fan_in);
      for (int j = 0; j < sizes_[l]; ++j) {
        T pre = affine(std::span<const T>(w, fan_in + 1), prev);
        w += fan_in + 1;
        if (last)
          out[j] = pre;
        else
          nxt[j] = tanh(pre);
      }
      std::swap(cur, nxt);
    }
  }

 private:
  int max_width() const {
    int m = 0;
    for (int s : sizes_) m = std::max(m, s);
    return m;
  }

  std::vector<int> sizes_;
};

}  // namespace pisn
