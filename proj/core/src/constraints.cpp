#include "adcal/constraints.hpp"

#include <algorithm>
#include <stdexcept>

#include "adcal/errors.hpp"

namespace adcal {

RatioConstraints::RatioConstraints(std::size_t variables)
    : size_(variables + 1), closure_(size_ * size_) {
  for (std::size_t v = 0; v < size_; ++v) at(v, v) = Bound{Rational(1), 0};
  for (std::size_t v = 1; v < size_; ++v) add_upper(v, Rational(1), 0, false);
}

bool RatioConstraints::tighter(const Bound& a, const Bound& b) {
  const auto c = a.factor <=> b.factor;
  if (c != 0) return c < 0;
  return a.strict > b.strict;
}

bool RatioConstraints::add_upper(std::size_t v, const Rational& w, std::size_t u,
                                 bool strict) {
  if (u >= size_ || v >= size_) throw InvalidArgument("constraint variable out of range");
  if (w.sign() <= 0) throw InvalidArgument("constraint factor must be positive");
  if (!feasible_) return false;
  edges_.push_back({u, v, w, strict});

  const Bound edge{w, strict ? 1 : 0};
  if (const auto& back = at(v, u)) {
    const Rational cycle = back->factor * w;
    const int cycle_strict = back->strict + edge.strict;
    if (cycle < Rational(1) || (cycle == Rational(1) && cycle_strict > 0)) {
      feasible_ = false;
      return false;
    }
  }

  // Shortest paths through the new edge use it at most once, so a single
  // pass restores the closure.
  std::vector<std::optional<Bound>> into_u(size_);
  std::vector<std::optional<Bound>> from_v(size_);
  for (std::size_t a = 0; a < size_; ++a) into_u[a] = at(a, u);
  for (std::size_t b = 0; b < size_; ++b) from_v[b] = at(v, b);
  for (std::size_t a = 0; a < size_; ++a) {
    if (!into_u[a]) continue;
    const Rational head = into_u[a]->factor * edge.factor;
    const int head_strict = into_u[a]->strict + edge.strict;
    for (std::size_t b = 0; b < size_; ++b) {
      if (!from_v[b]) continue;
      Bound candidate{head * from_v[b]->factor, head_strict + from_v[b]->strict};
      auto& cur = at(a, b);
      if (!cur || tighter(candidate, *cur)) cur = std::move(candidate);
    }
  }
  return true;
}

bool RatioConstraints::add_equal(std::size_t v, const Rational& w, std::size_t u) {
  if (!add_upper(v, w, u, false)) return false;
  return add_upper(u, w.inverse(), v, false);
}

bool RatioConstraints::pin(std::size_t v, const Rational& value) {
  if (value.sign() <= 0) {
    feasible_ = false;
    return false;
  }
  return add_equal(v, value, 0);
}

std::vector<Rational> RatioConstraints::witness() const {
  if (!feasible_) throw std::logic_error("witness() on an infeasible system");

  // x_v = P_v * delta^{s_v} where (P_v, s_v) is the tightest bound from the
  // unit node and delta = 1/(1+eta). Edges tight in the product are satisfied
  // by the strict-count ordering; for slack edges eta is small enough that
  // (1+eta)^{s_u - s_v} stays below the slack ratio R, via
  // (1+eta)^m <= exp(m*eta) <= 1 + 2*m*eta for m*eta <= 1.
  const long long n = static_cast<long long>(size_);
  Rational eta(1, n);
  for (const auto& e : edges_) {
    const Bound& pu = *at(0, e.from);
    const Bound& pv = *at(0, e.to);
    const Rational reach = pu.factor * e.factor;
    if (pv.factor < reach && pu.strict > pv.strict) {
      const Rational ratio = reach / pv.factor;
      eta = std::min(eta, (ratio - Rational(1)) / Rational(4 * n));
    }
  }
  const Rational delta = (Rational(1) + eta).inverse();

  std::vector<Rational> x(size_);
  for (std::size_t v = 0; v < size_; ++v) {
    const Bound& b = *at(0, v);
    Rational value = b.factor;
    for (int k = 0; k < b.strict; ++k) value *= delta;
    x[v] = value;
  }

  for (const auto& e : edges_) {
    const Rational rhs = e.factor * x[e.from];
    if (e.strict ? !(x[e.to] < rhs) : !(x[e.to] <= rhs)) {
      throw std::logic_error("ratio-constraint witness violates an edge");
    }
  }
  return x;
}

}  // namespace adcal
