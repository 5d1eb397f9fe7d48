#pragma once

// Reference computations for the tests. None of these share code with the
// library's algorithms: invariant factors come from determinantal divisors,
// the degree-3 boundary from its closed six-term expansion, and the
// published homology groups are typed in by hand.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <type_traits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ybh/algebra.hpp"

namespace oracle {

using BigInt = boost::multiprecision::cpp_int;
using Dense = std::vector<std::vector<long long>>;

template <class T>
T abs_value(const T& v) {
  return v < 0 ? T(-v) : v;
}

template <class T>
T gcd_value(T a, T b) {
  a = abs_value(a);
  b = abs_value(b);
  while (b != 0) {
    T r = a % b;
    a = b;
    b = r;
  }
  return a;
}

/// Determinant by fraction-free (Bareiss) elimination.
template <class T>
T determinant(std::vector<std::vector<T>> a) {
  const std::size_t n = a.size();
  T prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a[p][k] == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

inline void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

/// Rank and all invariant factors (1s included) via d_k = gcd of all k x k
/// minors, s_k = d_k / d_{k-1}. T is the arithmetic used for the minors.
template <class T = BigInt, class Entry>
std::pair<std::size_t, std::vector<BigInt>> all_invariant_factors(const std::vector<std::vector<Entry>>& a) {
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<T> d{1};
  for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    subsets(rows, k, rs);
    subsets(cols, k, cs);
    T g = 0;
    for (const auto& r : rs)
      for (const auto& c : cs) {
        std::vector<std::vector<T>> m(k, std::vector<T>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) m[i][j] = T(a[r[i]][c[j]]);
        g = gcd_value(g, determinant(std::move(m)));
      }
    if (g == 0) break;
    d.push_back(g);
  }
  std::vector<BigInt> factors;
  for (std::size_t k = 1; k < d.size(); ++k) {
    const T s = d[k] / d[k - 1];
    if constexpr (std::is_same_v<T, BigInt>) factors.push_back(s);
    else factors.push_back(BigInt(static_cast<long long>(s)));
  }
  return {d.size() - 1, factors};
}

/// Rank and invariant factors > 1.
template <class T = BigInt, class Entry>
std::pair<std::size_t, std::vector<BigInt>> invariant_factors(const std::vector<std::vector<Entry>>& a) {
  auto [rank, all] = all_invariant_factors<T>(a);
  std::vector<BigInt> factors;
  for (auto& s : all)
    if (s > 1) factors.push_back(s);
  return {rank, factors};
}

/// Smith form over Z/m read off the integer invariant factors: slot i
/// becomes gcd(s_i, m); slots divisible by m vanish.
inline std::pair<std::size_t, std::vector<BigInt>> invariant_factors_mod(const std::vector<BigInt>& all, std::uint64_t m) {
  std::size_t rank = 0;
  std::vector<BigInt> factors;
  for (const auto& s : all) {
    const BigInt g = boost::multiprecision::gcd(s, BigInt(m));
    if (g == m) continue;
    ++rank;
    if (g > 1) factors.push_back(g);
  }
  return {rank, factors};
}

/// The boundary of (x, y, z) written out term by term:
///   (y,z) - (y(x/y), z((x/y)/z)) - (x/y, z) + (x, z(y/z)) + (x/(z(y/z)), y/z) - (x,y)
/// as (coefficient, pair) terms with pairs 0-based.
inline std::vector<std::tuple<int, std::uint32_t, std::uint32_t>> six_term_boundary(const ybh::FiniteMagma& m,
                                                                                    std::uint32_t x, std::uint32_t y,
                                                                                    std::uint32_t z) {
  const auto div = [&](std::uint32_t a, std::uint32_t b) { return m.right_divide(a, b); };
  const auto xy = div(x, y);
  const auto yz = div(y, z);
  return {
      {+1, y, z},
      {-1, m(y, xy), m(z, div(xy, z))},
      {-1, xy, z},
      {+1, x, m(z, yz)},
      {+1, div(x, m(z, yz)), yz},
      {-1, x, y},
  };
}

/// One row of the published homology table: groups for n = 1..5 (X16: 1..3).
struct TableRow {
  std::string magma;
  std::string theory;
  std::vector<std::string> groups;
};

inline const std::vector<TableRow>& published_homology() {
  static const std::vector<TableRow> rows = {
      {"cyclic:4", "yb", {"Z + Z_4", "Z^4", "Z^16 + Z_4", "Z^64", "Z^256 + Z_4"}},
      {"cyclic:4", "d", {"0", "Z", "Z^7", "Z^37", "Z^175"}},
      {"cyclic:4", "nyb", {"Z + Z_4", "Z^3", "Z^9 + Z_4", "Z^27", "Z^81 + Z_4"}},
      {"dihedral:4", "yb", {"Z^2 + Z_2", "Z^6 + Z_2", "Z^20 + Z_2^3 + Z_4", "Z^72 + Z_2^7 + Z_4", "Z^272 + Z_2^17 + Z_4^2"}},
      {"dihedral:4", "d", {"0", "Z^2", "Z^10 + Z_2^2", "Z^44 + Z_2^6", "Z^190 + Z_2^16"}},
      {"dihedral:4", "nyb", {"Z^2 + Z_2", "Z^4 + Z_2", "Z^10 + Z_2 + Z_4", "Z^28 + Z_2 + Z_4", "Z^82 + Z_2 + Z_4^2"}},
      {"x4", "yb", {"Z + Z_2", "Z^3 + Z_2", "Z^10 + Z_2^2", "Z^36 + Z_2^3 + Z_4", "Z^136 + Z_2^5"}},
      {"x4", "d", {"0", "Z", "Z^5", "Z^22 + Z_2", "Z^95 + Z_2^2"}},
      {"x4", "nyb", {"Z + Z_2", "Z^2 + Z_2", "Z^5 + Z_2^2", "Z^14 + Z_2^2 + Z_4", "Z^41 + Z_2^3"}},
      {"x16", "yb", {"Z + Z_2^3", "Z^10 + Z_2^6 + Z_4^3", "Z^136 + Z_2^30 + Z_4"}},
      {"x16", "d", {"0", "Z", "Z^19"}},
      {"x16", "nyb", {"Z + Z_2^3", "Z^9 + Z_2^6 + Z_4^3", "Z^117 + Z_2^30 + Z_4"}},
  };
  return rows;
}

/// Published Cayley tables, 1-based rows.
inline const std::vector<std::vector<long long>>& table_x4() {
  static const std::vector<std::vector<long long>> t = {{1, 3, 2, 4}, {2, 4, 1, 3}, {4, 2, 3, 1}, {3, 1, 4, 2}};
  return t;
}

inline const std::vector<std::vector<long long>>& table_x16() {
  static const std::vector<std::vector<long long>> t = {
      {1, 5, 9, 13, 2, 6, 10, 14, 3, 7, 11, 15, 4, 8, 12, 16},
      {9, 13, 1, 5, 10, 14, 2, 6, 11, 15, 3, 7, 12, 16, 4, 8},
      {13, 9, 5, 1, 14, 10, 6, 2, 15, 11, 7, 3, 16, 12, 8, 4},
      {5, 1, 13, 9, 6, 2, 14, 10, 7, 3, 15, 11, 8, 4, 16, 12},
      {4, 8, 12, 16, 3, 7, 11, 15, 2, 6, 10, 14, 1, 5, 9, 13},
      {12, 16, 4, 8, 11, 15, 3, 7, 10, 14, 2, 6, 9, 13, 1, 5},
      {16, 12, 8, 4, 15, 11, 7, 3, 14, 10, 6, 2, 13, 9, 5, 1},
      {8, 4, 16, 12, 7, 3, 15, 11, 6, 2, 14, 10, 5, 1, 13, 9},
      {2, 6, 10, 14, 1, 5, 9, 13, 4, 8, 12, 16, 3, 7, 11, 15},
      {10, 14, 2, 6, 9, 13, 1, 5, 12, 16, 4, 8, 11, 15, 3, 7},
      {14, 10, 6, 2, 13, 9, 5, 1, 16, 12, 8, 4, 15, 11, 7, 3},
      {6, 2, 14, 10, 5, 1, 13, 9, 8, 4, 16, 12, 7, 3, 15, 11},
      {3, 7, 11, 15, 4, 8, 12, 16, 1, 5, 9, 13, 2, 6, 10, 14},
      {11, 15, 3, 7, 12, 16, 4, 8, 9, 13, 1, 5, 10, 14, 2, 6},
      {15, 11, 7, 3, 16, 12, 8, 4, 13, 9, 5, 1, 14, 10, 6, 2},
      {7, 3, 15, 11, 8, 4, 16, 12, 5, 1, 13, 9, 6, 2, 14, 10},
  };
  return t;
}

/// Every builtin that is a Rump right quasigroup, small enough for
/// exhaustive scans.
inline std::vector<std::string> builtin_rump_specs() {
  return {"cyclic:2", "cyclic:3", "cyclic:4", "cyclic:5", "cyclic:6", "dihedral:2", "dihedral:4", "alexander:4:3",
          "alexander:8:5", "alexander:9:4", "trivial:1", "trivial:3", "x4", "x16"};
}

}  // namespace oracle
