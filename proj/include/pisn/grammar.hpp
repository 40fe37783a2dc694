#pragma once

// The expression grammar behind the symbolic network:
//
//   a ::= sin a1 | exp a1 | Add a1 a2 | Multiply a1 a2 | x | y | t | c
//
// Its continuous relaxation weights all production rules at once. The rule
// order is fixed and every weight vector indexes it the same way:
//
//   operators:  w1 sin, w2 exp, w3 Add (one weight on a1+a2),
//               w4 Multiply, then w5..w7 the active input terminals in
//               x, y, t order, and w8 the constant terminal.
//
// Problems with fewer inputs drop the inactive terminals entirely rather
// than zero-masking them.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace pisn {

inline constexpr int kNumOperators = 4;  // sin, exp, add, multiply
// add and multiply each consume two sub-expressions, sin and exp one:
// 1 + 1 + 2 + 2 weight blocks per layer.
inline constexpr int kBlocksPerLayer = 6;

struct Grammar {
  std::array<bool, 3> active{true, true, true};  // x, y, t

  static Grammar xy() { return Grammar{{true, true, false}}; }
  static Grammar xt() { return Grammar{{true, false, true}}; }
  static Grammar xyt() { return Grammar{{true, true, true}}; }

  int n_inputs() const {
    int n = 0;
    for (bool a : active) n += a ? 1 : 0;
    return n;
  }

  // Names of the active inputs in canonical x, y, t order; position in this
  // list is the compact coordinate/derivative index used everywhere else.
  std::vector<std::string> input_names() const {
    static const char* all[3] = {"x", "y", "t"};
    std::vector<std::string> names;
    for (int i = 0; i < 3; ++i)
      if (active[i]) names.emplace_back(all[i]);
    if (names.empty()) throw std::invalid_argument("grammar needs at least one input");
    return names;
  }

  bool operator==(const Grammar&) const = default;
};

}  // namespace pisn
