#pragma once

// Set-theoretic Yang-Baxter maps and the correspondence with Rump right
// quasigroups: R(x, y) = (y (x/y), x/y).

#include <string>
#include <utility>
#include <vector>

#include "ybh/algebra.hpp"

namespace ybh {

/// R : X x X -> X x X stored as its two component tables R1, R2.
class YBMap {
 public:
  YBMap(std::size_t size, std::vector<Element> r1, std::vector<Element> r2)
      : size_(size), r1_(std::move(r1)), r2_(std::move(r2)) {
    if (size_ == 0) throw ParseError("solution must act on a non-empty set");
    if (r1_.size() != size_ * size_ || r2_.size() != size_ * size_) throw ParseError("solution tables are not m x m");
    for (std::size_t i = 0; i < r1_.size(); ++i)
      if (r1_[i] >= size_ || r2_[i] >= size_) throw ParseError("solution table entry out of range");
  }

  /// The flip (x, y) -> (y, x).
  static YBMap swap(std::size_t size) {
    std::vector<Element> r1(size * size), r2(size * size);
    for (Element x = 0; x < size; ++x)
      for (Element y = 0; y < size; ++y) {
        r1[x * size + y] = y;
        r2[x * size + y] = x;
      }
    return YBMap(size, std::move(r1), std::move(r2));
  }

  std::size_t size() const { return size_; }
  Element r1(Element x, Element y) const { return r1_[x * size_ + y]; }
  Element r2(Element x, Element y) const { return r2_[x * size_ + y]; }
  std::pair<Element, Element> operator()(Element x, Element y) const { return {r1(x, y), r2(x, y)}; }

  /// Replace (t[i], t[i+1]) by R(t[i], t[i+1]).
  void apply_at(std::span<Element> t, std::size_t i) const {
    const auto idx = t[i] * size_ + t[i + 1];
    t[i] = r1_[idx];
    t[i + 1] = r2_[idx];
  }

  friend bool operator==(const YBMap&, const YBMap&) = default;

 private:
  std::size_t size_;
  std::vector<Element> r1_, r2_;
};

struct SolutionReport {
  bool ybe = false;
  bool involutive = false;
  bool left_nondegenerate = false;
  bool right_nondegenerate = false;
  bool bijective = false;
};

/// R(x, y) = (y (x/y), x/y); requires a Rump right quasigroup.
inline YBMap from_rump(const FiniteMagma& magma) {
  if (!is_rump(magma)) throw StructureError("magma '" + magma.name() + "' is not a Rump right quasigroup");
  const auto m = magma.size();
  std::vector<Element> r1(m * m), r2(m * m);
  for (Element x = 0; x < m; ++x)
    for (Element y = 0; y < m; ++y) {
      const Element q = magma.right_divide(x, y);
      r1[x * m + y] = magma(y, q);
      r2[x * m + y] = q;
    }
  return YBMap(m, std::move(r1), std::move(r2));
}

/// x * y = R2(-, y)^{-1}(x); requires R2(-, y) bijective for every y.
inline FiniteMagma to_rump(const YBMap& solution, std::string name = {}) {
  const auto m = solution.size();
  std::vector<Element> table(m * m);
  std::vector<char> hit(m);
  for (Element y = 0; y < m; ++y) {
    std::fill(hit.begin(), hit.end(), 0);
    for (Element z = 0; z < m; ++z) {
      const Element x = solution.r2(z, y);
      if (hit[x]) throw StructureError("solution is not right non-degenerate");
      hit[x] = 1;
      table[x * m + y] = z;
    }
  }
  return FiniteMagma(m, std::move(table), std::move(name));
}

/// Exhaustive check; never throws on a bad solution, only reports.
inline SolutionReport verify(const YBMap& R) {
  const auto m = R.size();
  SolutionReport rep;

  rep.ybe = true;
  for (Element x = 0; x < m && rep.ybe; ++x)
    for (Element y = 0; y < m && rep.ybe; ++y)
      for (Element z = 0; z < m && rep.ybe; ++z) {
        // (R x Id)(Id x R)(R x Id), rightmost first.
        Element lhs[3] = {x, y, z};
        R.apply_at(lhs, 0);
        R.apply_at(lhs, 1);
        R.apply_at(lhs, 0);
        Element rhs[3] = {x, y, z};
        R.apply_at(rhs, 1);
        R.apply_at(rhs, 0);
        R.apply_at(rhs, 1);
        rep.ybe = lhs[0] == rhs[0] && lhs[1] == rhs[1] && lhs[2] == rhs[2];
      }

  rep.involutive = true;
  std::vector<char> seen(m * m, 0);
  rep.bijective = true;
  for (Element x = 0; x < m; ++x)
    for (Element y = 0; y < m; ++y) {
      const auto [a, b] = R(x, y);
      const auto [c, d] = R(a, b);
      rep.involutive = rep.involutive && c == x && d == y;
      auto& s = seen[a * m + b];
      if (s) rep.bijective = false;
      s = 1;
    }

  std::vector<Element> line(m);
  rep.left_nondegenerate = true;
  for (Element x = 0; x < m && rep.left_nondegenerate; ++x) {
    for (Element y = 0; y < m; ++y) line[y] = R.r1(x, y);
    rep.left_nondegenerate = detail::is_bijection(line, m);
  }
  rep.right_nondegenerate = true;
  for (Element y = 0; y < m && rep.right_nondegenerate; ++y) {
    for (Element x = 0; x < m; ++x) line[x] = R.r2(x, y);
    rep.right_nondegenerate = detail::is_bijection(line, m);
  }
  return rep;
}

namespace detail {

inline std::string pair_text(Element x, Element y) {
  return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
}

}  // namespace detail

/// (xx)(y/(xx)) = (x((y/(xx))/x))^2 and (xx)/(y(x/y)) = (x/y)(x/y) for all x, y.
/// The product form (xx)(y(x/y)) of the second one already fails on C_4.
inline Check check_square_identities(const FiniteMagma& magma) {
  if (!is_rump(magma)) throw StructureError("square identities are stated for Rump right quasigroups");
  Check c{"square_identities"};
  const auto m = magma.size();
  for (Element x = 0; x < m && c.passed; ++x)
    for (Element y = 0; y < m; ++y) {
      const Element xx = magma.square(x);
      const Element w = magma.right_divide(y, xx);
      const bool first = magma(xx, w) == magma.square(magma(x, magma.right_divide(w, x)));
      const Element q = magma.right_divide(x, y);
      const bool second = magma.right_divide(xx, magma(y, q)) == magma.square(q);
      if (!first || !second) {
        c.passed = false;
        c.counterexample = detail::pair_text(x, y);
        break;
      }
    }
  return c;
}

/// For every x, y = xx is the only solution of x(y/x) = y.
inline Check check_square_fixed_points(const FiniteMagma& magma) {
  if (!is_rump(magma)) throw StructureError("fixed-point scan is stated for Rump right quasigroups");
  Check c{"square_fixed_points"};
  const auto m = magma.size();
  for (Element x = 0; x < m && c.passed; ++x)
    for (Element y = 0; y < m; ++y) {
      const bool solves = magma(x, magma.right_divide(y, x)) == y;
      if (solves != (y == magma.square(x))) {
        c.passed = false;
        c.counterexample = detail::pair_text(x, y);
        break;
      }
    }
  return c;
}

/// For Rump magmas: finite => uniquely 2-divisible, uniquely 2-divisible =>
/// Delta-bijective, and the solution is left non-degenerate iff the magma is
/// uniquely 2-divisible. Vacuous on non-Rump input.
inline Check check_divisibility_implications(const FiniteMagma& magma) {
  Check c{"divisibility_implications"};
  const auto rep = structure_report(magma);
  if (rep.rump && !rep.uniquely_2_divisible) c.counterexample = "Rump but not uniquely 2-divisible";
  else if (rep.rump && rep.uniquely_2_divisible && !rep.delta_bijective) c.counterexample = "uniquely 2-divisible but not Delta-bijective";
  else if (rep.rump && verify(from_rump(magma)).left_nondegenerate != rep.uniquely_2_divisible)
    c.counterexample = "left non-degeneracy differs from unique 2-divisibility";
  c.passed = c.counterexample.empty();
  return c;
}

}  // namespace ybh
