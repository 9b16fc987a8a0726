#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "adcal/rational.hpp"

namespace adcal {

// Feasibility of multiplicative difference constraints over positive unknowns
// x_1..x_n, with x_0 = 1 fixed and x_v <= x_0 implied for every v.
//
// Each constraint reads x_v <= w * x_u or x_v < w * x_u. In log space these are
// difference constraints, so the system is infeasible iff the constraint graph
// has a "negative" cycle: one whose weight product is below 1, or exactly 1
// while containing a strict edge. Weights are compared lexicographically as
// (product, -strict count), which decides strictness without any epsilon.
//
// The closure is kept incrementally (one O(n^2) pass per added edge), so a
// depth-first search can copy the object per level and prune on the spot.
class RatioConstraints {
 public:
  explicit RatioConstraints(std::size_t variables);

  std::size_t variables() const { return size_ - 1; }
  bool feasible() const { return feasible_; }

  // x_v <= w * x_u (strict: <). Returns feasible().
  bool add_upper(std::size_t v, const Rational& w, std::size_t u, bool strict);
  // x_v == w * x_u.
  bool add_equal(std::size_t v, const Rational& w, std::size_t u);
  // x_v == value. A non-positive value or one above 1 is infeasible.
  bool pin(std::size_t v, const Rational& value);

  // A point satisfying every constraint; index 0 holds the unit. Requires
  // feasible(). Values lie in (0, 1].
  std::vector<Rational> witness() const;

 private:
  struct Bound {
    Rational factor;
    int strict = 0;
  };
  struct Edge {
    std::size_t from;
    std::size_t to;
    Rational factor;
    bool strict;
  };

  std::optional<Bound>& at(std::size_t from, std::size_t to) {
    return closure_[from * size_ + to];
  }
  const std::optional<Bound>& at(std::size_t from, std::size_t to) const {
    return closure_[from * size_ + to];
  }
  static bool tighter(const Bound& a, const Bound& b);

  std::size_t size_;
  std::vector<std::optional<Bound>> closure_;
  std::vector<Edge> edges_;
  bool feasible_ = true;
};

}  // namespace adcal
