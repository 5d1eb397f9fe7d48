#pragma once

// Smith normal form over the integers and over Z/m.
//
// Sparse matrices are first reduced by elimination on unit pivots (+-1 over
// Z, residues prime to m over Z/m), chosen by a lazy Markowitz rule to keep
// fill-in low. The leftover block has no unit entries. Small leftovers get a
// dense Euclidean SNF. For large ones the rank over Q is certified by ranks
// mod several primes against a Hadamard bound, and the torsion comes from an
// SNF mod 2g, where g is a gcd of nonzero maximal minors. Integer arithmetic
// starts in checked int64 and restarts in arbitrary precision on overflow.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <queue>
#include <random>
#include <cmath>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ybh/sparse_matrix.hpp"

namespace ybh {

using Integer = boost::multiprecision::cpp_int;

/// Rank and invariant factors > 1 in divisibility order. Over Z/m the rank
/// counts diagonal slots that are nonzero mod m and the factors are the
/// proper divisors of m among them.
struct SmithForm {
  std::size_t rank = 0;
  std::vector<Integer> factors;

  friend bool operator==(const SmithForm&, const SmithForm&) = default;
};

/// How smith_normal_form treats the block left after unit elimination.
enum class SmithStrategy { Auto, Dense, Modular };

namespace detail {

/// Residual blocks with more entries than this go the modular route under Auto.
inline constexpr std::size_t kDenseResidualLimit = std::size_t{1} << 16;

struct Overflow {};

inline std::int64_t mul_sub(std::int64_t a, std::int64_t q, std::int64_t b) {
  std::int64_t p = 0, r = 0;
  if (__builtin_mul_overflow(q, b, &p) || __builtin_sub_overflow(a, p, &r)) throw Overflow{};
  return r;
}
inline Integer mul_sub(const Integer& a, const Integer& q, const Integer& b) { return a - q * b; }

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
  return r;
}
inline Integer checked_add(const Integer& a, const Integer& b) { return a + b; }

inline std::int64_t checked_div(std::int64_t a, std::int64_t b) {
  if (b == -1 && a == INT64_MIN) throw Overflow{};
  return a / b;
}
inline Integer checked_div(const Integer& a, const Integer& b) { return a / b; }

inline std::int64_t magnitude_key(std::int64_t a) { return a < 0 ? (a == INT64_MIN ? INT64_MAX : -a) : a; }
inline Integer magnitude_key(const Integer& a) { return boost::multiprecision::abs(a); }

inline Integer to_integer_value(std::int64_t v) { return Integer(v); }
inline Integer to_integer_value(std::uint64_t v) { return Integer(v); }
inline Integer to_integer_value(const Integer& v) { return v; }

/// Replace a multiset of diagonal entries by the canonical invariant factor
/// chain (pairwise gcd/lcm), keeping only entries > 1.
inline std::vector<Integer> canonical_factors(std::vector<Integer> d) {
  for (auto& x : d) x = boost::multiprecision::abs(x);
  std::erase_if(d, [](const Integer& x) { return x == 0; });
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      const Integer g = boost::multiprecision::gcd(d[i], d[j]);
      if (g == d[i]) continue;
      const Integer l = d[i] / g * d[j];
      d[i] = g;
      d[j] = l;
    }
  std::erase_if(d, [](const Integer& x) { return x == 1; });
  std::sort(d.begin(), d.end());
  return d;
}

/// Dense Euclidean SNF: pivot on the entry of least magnitude, clear its row
/// and column by division with remainder, enforce divisibility of the rest.
/// Returns the (unsorted) nonzero diagonal.
template <class T>
std::vector<T> dense_diagonal(std::vector<std::vector<T>> a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::vector<T> diag;
  auto swap_cols = [&](std::size_t j1, std::size_t j2) {
    if (j1 == j2) return;
    for (auto& row : a) std::swap(row[j1], row[j2]);
  };
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    // least-magnitude nonzero pivot
    std::size_t pi = rows, pj = cols;
    T best{};
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a[i][j] != 0 && (pi == rows || magnitude_key(a[i][j]) < best)) {
          best = magnitude_key(a[i][j]);
          pi = i;
          pj = j;
        }
    if (pi == rows) break;
    std::swap(a[t], a[pi]);
    swap_cols(t, pj);

    while (true) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        while (a[i][t] != 0) {
          const T q = checked_div(a[i][t], a[t][t]);
          if (q != 0)
            for (std::size_t j = t; j < cols; ++j) a[i][j] = mul_sub(a[i][j], q, a[t][j]);
          if (a[i][t] != 0) std::swap(a[t], a[i]);
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        while (a[t][j] != 0) {
          const T q = checked_div(a[t][j], a[t][t]);
          if (q != 0)
            for (std::size_t i = t; i < rows; ++i) a[i][j] = mul_sub(a[i][j], q, a[i][t]);
          if (a[t][j] != 0) {
            swap_cols(t, j);
            dirty = true;
          }
        }
      }
      if (dirty) continue;  // a column swap may have refilled column t
      // divisibility: every remaining entry must be a multiple of the pivot
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            bad = i;
            break;
          }
      if (bad == rows) break;
      for (std::size_t j = t; j < cols; ++j) a[t][j] = checked_add(a[t][j], a[bad][j]);
    }
    diag.push_back(a[t][t]);
  }
  return diag;
}

}  // namespace detail

/// SNF of a dense integer matrix (row-major).
inline SmithForm dense_smith_normal_form(const std::vector<std::vector<Integer>>& a) {
  std::vector<Integer> diag;
  bool small = true;
  for (const auto& row : a)
    for (const auto& v : row)
      if (boost::multiprecision::abs(v) > Integer(std::int64_t{1} << 40)) small = false;
  if (small) {
    try {
      std::vector<std::vector<std::int64_t>> b(a.size());
      for (std::size_t i = 0; i < a.size(); ++i)
        for (const auto& v : a[i]) b[i].push_back(static_cast<std::int64_t>(v));
      for (auto v : detail::dense_diagonal(std::move(b))) diag.emplace_back(v);
      small = true;
    } catch (const detail::Overflow&) {
      small = false;
      diag.clear();
    }
  }
  if (!small) diag = detail::dense_diagonal(a);
  SmithForm out;
  out.rank = diag.size();
  out.factors = detail::canonical_factors(std::move(diag));
  return out;
}

namespace detail {

/// Z with values in checked int64.
struct Int64Ring {
  using value_type = std::int64_t;
  value_type normalize(std::int64_t v) const { return v; }
  bool is_unit(value_type v) const { return v == 1 || v == -1; }
  value_type unit_inverse(value_type v) const { return v; }
  value_type mul(value_type a, value_type b) const {
    value_type r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
    return r;
  }
  value_type sub_mul(value_type a, value_type c, value_type b) const { return mul_sub(a, c, b); }
};

/// Z with arbitrary precision.
struct BigIntRing {
  using value_type = Integer;
  value_type normalize(std::int64_t v) const { return Integer(v); }
  value_type normalize(const Integer& v) const { return v; }
  bool is_unit(const value_type& v) const { return v == 1 || v == -1; }
  value_type unit_inverse(const value_type& v) const { return v; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type sub_mul(const value_type& a, const value_type& c, const value_type& b) const { return a - c * b; }
};

/// Z/m, m >= 2, residues in [0, m).
struct ModRing {
  using value_type = std::uint64_t;
  std::uint64_t m;

  value_type normalize(std::int64_t v) const {
    const auto mm = static_cast<std::int64_t>(m);
    std::int64_t r = v % mm;
    return static_cast<value_type>(r < 0 ? r + mm : r);
  }
  bool is_unit(value_type v) const { return std::gcd(v, m) == 1; }
  value_type unit_inverse(value_type v) const {
    // extended Euclid on (v, m)
    std::int64_t r0 = static_cast<std::int64_t>(m), r1 = static_cast<std::int64_t>(v), s0 = 0, s1 = 1;
    while (r1 != 0) {
      const std::int64_t q = r0 / r1;
      std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
      std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
    }
    return normalize(s0);
  }
  value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>(static_cast<unsigned __int128>(a) * b % m);
  }
  value_type sub_mul(value_type a, value_type c, value_type b) const {
    const value_type p = mul(c, b);
    return a >= p ? a - p : a + (m - p);
  }
};

/// Sparse elimination on unit pivots with a lazy Markowitz choice: take the
/// column of least cost, pivot on its unit entry in the lightest row, clear
/// that row from every other column, drop pivot row and column. Columns whose
/// entries are all non-units wait until an update changes them.
template <class Ring>
class UnitPivotEliminator {
 public:
  using V = typename Ring::value_type;
  using Vec = std::vector<SparseEntry<V>>;

  UnitPivotEliminator(Ring ring, std::size_t rows, std::vector<Vec> columns)
      : ring_(ring),
        cols_(std::move(columns)),
        col_alive_(cols_.size(), 1),
        stamp_(cols_.size(), 0),
        row_alive_(rows, 1),
        row_count_(rows, 0),
        row_list_(rows),
        seen_(cols_.size(), 0) {
    for (std::uint32_t j = 0; j < cols_.size(); ++j)
      for (const auto& e : cols_[j]) {
        ++row_count_[e.row];
        row_list_[e.row].push_back(j);
      }
    for (std::uint32_t j = 0; j < cols_.size(); ++j) schedule(j);
  }

  void run() {
    while (!heap_.empty()) {
      const auto [cost, j, stamp] = heap_.top();
      heap_.pop();
      if (!col_alive_[j] || stamp != stamp_[j]) continue;
      const auto [fresh, row] = best_pivot(j);
      if (row < 0) continue;
      if (fresh > cost && !heap_.empty() && fresh > std::get<0>(heap_.top())) {
        heap_.push({fresh, j, stamp});
        continue;
      }
      eliminate(j, static_cast<std::uint32_t>(row));
    }
  }

  std::size_t pivot_count() const { return pivots_; }

  /// Columns left after elimination, restricted to surviving rows.
  std::vector<Vec> take_residual() {
    std::vector<Vec> out;
    for (std::size_t j = 0; j < cols_.size(); ++j)
      if (col_alive_[j] && !cols_[j].empty()) out.push_back(std::move(cols_[j]));
    return out;
  }

 private:
  using Item = std::tuple<std::uint64_t, std::uint32_t, std::uint32_t>;

  std::pair<std::uint64_t, std::int64_t> best_pivot(std::uint32_t j) const {
    std::int64_t row = -1;
    for (const auto& e : cols_[j])
      if (ring_.is_unit(e.value) && (row < 0 || row_count_[e.row] < row_count_[static_cast<std::size_t>(row)]))
        row = e.row;
    if (row < 0) return {0, -1};
    const std::uint64_t cost = (cols_[j].size() - 1) * std::uint64_t{row_count_[static_cast<std::size_t>(row)] - 1};
    return {cost, row};
  }

  void schedule(std::uint32_t j) {
    ++stamp_[j];
    if (cols_[j].empty()) {
      col_alive_[j] = 0;
      return;
    }
    const auto [cost, row] = best_pivot(j);
    if (row >= 0) heap_.push({cost, j, stamp_[j]});
  }

  void eliminate(std::uint32_t c, std::uint32_t r) {
    ++pivots_;
    ++epoch_;
    const Vec pivot = std::move(cols_[c]);
    cols_[c].clear();
    col_alive_[c] = 0;
    V inv{};
    for (const auto& e : pivot) {
      --row_count_[e.row];
      if (e.row == r) inv = ring_.unit_inverse(e.value);
    }
    seen_[c] = epoch_;
    // Columns that currently have an entry in row r.
    std::vector<std::uint32_t> targets;
    for (auto j : row_list_[r]) {
      if (seen_[j] == epoch_ || !col_alive_[j]) continue;
      seen_[j] = epoch_;
      targets.push_back(j);
    }
    std::vector<std::uint32_t>().swap(row_list_[r]);
    for (auto j : targets) {
      auto& col = cols_[j];
      const auto it = std::lower_bound(col.begin(), col.end(), r, [](const auto& e, std::uint32_t x) { return e.row < x; });
      if (it == col.end() || it->row != r) continue;
      const V f = ring_.mul(it->value, inv);
      Vec merged;
      merged.reserve(col.size() + pivot.size());
      auto a = col.begin();
      auto b = pivot.begin();
      while (a != col.end() || b != pivot.end()) {
        if (b == pivot.end() || (a != col.end() && a->row < b->row)) {
          merged.push_back(*a++);
        } else if (a == col.end() || b->row < a->row) {
          const V v = ring_.sub_mul(V{}, f, b->value);
          if (v != V{}) {
            merged.push_back({b->row, v});
            ++row_count_[b->row];
            row_list_[b->row].push_back(j);
          }
          ++b;
        } else {
          const V v = ring_.sub_mul(a->value, f, b->value);
          if (v != V{}) merged.push_back({a->row, v});
          else --row_count_[a->row];
          ++a;
          ++b;
        }
      }
      col = std::move(merged);
      schedule(j);
    }
    row_alive_[r] = 0;
  }

  Ring ring_;
  std::vector<Vec> cols_;
  std::vector<char> col_alive_;
  std::vector<std::uint32_t> stamp_;
  std::vector<char> row_alive_;
  std::vector<std::uint32_t> row_count_;
  std::vector<std::vector<std::uint32_t>> row_list_;
  std::vector<std::uint64_t> seen_;
  std::uint64_t epoch_ = 0;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap_;
  std::size_t pivots_ = 0;
};

/// Columns of a (possibly transposed) matrix as ring vectors, sparsest first,
/// with exact duplicates and negated duplicates removed.
template <class Ring, class T>
std::vector<std::vector<SparseEntry<typename Ring::value_type>>> stream_columns(const Ring& ring,
                                                                                const SparseMatrix<T>& a) {
  using V = typename Ring::value_type;
  std::vector<std::vector<SparseEntry<V>>> cols;
  cols.reserve(a.cols());
  std::unordered_map<std::size_t, std::vector<std::size_t>> seen;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const auto col = a.column(j);
    if (col.empty()) continue;
    std::vector<SparseEntry<V>> v;
    v.reserve(col.size());
    const bool flip = col.front().value < 0;
    for (const auto& e : col) {
      V x = ring.normalize(flip ? -e.value : e.value);
      if (x != V{}) v.push_back({e.row, x});
    }
    if (v.empty()) continue;
    std::size_t h = v.size();
    for (const auto& e : v) h = h * 1000003u ^ (std::hash<std::uint64_t>{}(e.row) + static_cast<std::size_t>(static_cast<std::int64_t>(e.value)));
    auto& bucket = seen[h];
    bool dup = false;
    for (auto k : bucket)
      if (cols[k] == v) {
        dup = true;
        break;
      }
    if (dup) continue;
    bucket.push_back(cols.size());
    cols.push_back(std::move(v));
  }
  std::stable_sort(cols.begin(), cols.end(), [](const auto& x, const auto& y) { return x.size() < y.size(); });
  return cols;
}

template <class Ring, class T>
std::pair<std::size_t, std::vector<std::vector<SparseEntry<typename Ring::value_type>>>> eliminate_units(
    const Ring& ring, const SparseMatrix<T>& a) {
  UnitPivotEliminator<Ring> elim(ring, a.rows(), stream_columns(ring, a));
  elim.run();
  auto residual = elim.take_residual();
  return {elim.pivot_count(), std::move(residual)};
}

}  // namespace detail

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  for (a %= m; e; e >>= 1, a = mul_mod(a, a, m))
    if (e & 1) r = mul_mod(r, a, m);
  return r;
}

/// Deterministic Miller-Rabin for 64-bit n.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
    if (n % q == 0) return n == q;
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s && composite; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

/// The k largest primes below 2^62, descending.
inline std::vector<std::uint64_t> large_primes(std::size_t k) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = (std::uint64_t{1} << 62) - 1; out.size() < k; n -= 2)
    if (is_prime_u64(n)) out.push_back(n);
  return out;
}

inline std::uint64_t residue(std::int64_t v, std::uint64_t p) {
  const auto r = v % static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(p) : r);
}
inline std::uint64_t residue(const Integer& v, std::uint64_t p) {
  Integer r = v % p;
  if (r < 0) r += p;
  return static_cast<std::uint64_t>(r);
}

inline double log2_abs(std::int64_t v) { return std::log2(std::fabs(static_cast<double>(v))); }
inline double log2_abs(const Integer& v) {
  const auto bits = boost::multiprecision::msb(boost::multiprecision::abs(v));
  return static_cast<double>(bits + 1);
}

/// Columns with rows renumbered 0..rows-1 over the rows they touch.
template <class V>
std::size_t compress_rows(std::vector<std::vector<SparseEntry<V>>>& cols) {
  std::vector<std::uint32_t> rows;
  for (const auto& c : cols)
    for (const auto& e : c) rows.push_back(e.row);
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  for (auto& c : cols)
    for (auto& e : c)
      e.row = static_cast<std::uint32_t>(std::lower_bound(rows.begin(), rows.end(), e.row) - rows.begin());
  return rows.size();
}

struct RankProfile {
  std::size_t rank = 0;
  std::vector<std::uint32_t> rows, cols;  // a nonsingular minor mod p
};

/// Rank mod a prime p of columns over `rows` rows, by dense forward
/// elimination one column at a time in the given order.
template <class V>
RankProfile rank_profile_mod(const std::vector<std::vector<SparseEntry<V>>>& cols, std::size_t rows, std::uint64_t p,
                             const std::vector<std::size_t>& order, std::size_t row_offset = 0) {
  RankProfile prof;
  std::vector<std::vector<std::uint64_t>> basis;
  std::vector<std::uint64_t> v(rows);
  for (auto j : order) {
    std::fill(v.begin(), v.end(), 0);
    for (const auto& e : cols[j]) v[e.row] = residue(e.value, p);
    for (std::size_t t = 0; t < basis.size(); ++t) {
      const auto c = v[prof.rows[t]];
      if (c == 0) continue;
      const auto& b = basis[t];
      for (std::size_t i = 0; i < rows; ++i)
        if (b[i] != 0) {
          const auto x = mul_mod(c, b[i], p);
          v[i] = v[i] >= x ? v[i] - x : v[i] + (p - x);
        }
    }
    // first nonzero at or after row_offset, cyclically
    std::size_t r = rows;
    for (std::size_t s = 0; s < rows; ++s) {
      const std::size_t i = (s + row_offset) % rows;
      if (v[i] != 0) {
        r = i;
        break;
      }
    }
    if (r == rows) continue;
    const auto inv = pow_mod(v[r], p - 2, p);
    for (auto& x : v) x = mul_mod(x, inv, p);
    prof.rows.push_back(static_cast<std::uint32_t>(r));
    prof.cols.push_back(static_cast<std::uint32_t>(j));
    basis.push_back(v);
    ++prof.rank;
  }
  return prof;
}

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Integer bareiss_determinant(std::vector<std::vector<Integer>> a) {
  const std::size_t n = a.size();
  Integer prev = 1, sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a[piv][k] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      std::swap(a[piv], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

template <class V>
Integer minor_determinant(const std::vector<std::vector<SparseEntry<V>>>& cols, const RankProfile& prof) {
  const std::size_t n = prof.rank;
  std::vector<std::vector<Integer>> m(n, std::vector<Integer>(n));
  for (std::size_t c = 0; c < n; ++c)
    for (const auto& e : cols[prof.cols[c]]) {
      const auto it = std::find(prof.rows.begin(), prof.rows.end(), e.row);
      if (it != prof.rows.end()) m[static_cast<std::size_t>(it - prof.rows.begin())][c] = to_integer_value(e.value);
    }
  return bareiss_determinant(std::move(m));
}

struct CertifiedRank {
  std::size_t rank = 0;
  /// Positive multiple of the product of the nonzero invariant factors.
  Integer divisor_bound;
};

/// Exact rank over Q: mod-p ranks for primes whose product exceeds the
/// Hadamard bound of every (r+1)-minor prove that no larger minor survives;
/// a minor nonzero mod p proves rank >= r. Also returns the gcd of a few
/// nonzero r-minors, which the product of the invariant factors divides.
template <class V>
CertifiedRank certified_rank(const std::vector<std::vector<SparseEntry<V>>>& cols, std::size_t rows) {
  std::vector<double> norms;
  for (const auto& c : cols) {
    double sq = 0, scale = 0;
    for (const auto& e : c) scale = std::max(scale, log2_abs(e.value));
    for (const auto& e : c) sq += std::exp2(2 * (log2_abs(e.value) - scale));
    norms.push_back(scale + 0.5 * std::log2(sq));
  }
  std::sort(norms.begin(), norms.end(), std::greater<>());

  CertifiedRank out;
  std::vector<std::size_t> order(cols.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(0x5eed);
  double certified_bits = 0;
  std::size_t rank = 0, minors = 0, stable = 0;
  Integer g = 0;
  for (std::size_t k = 0;; ++k) {
    static thread_local std::vector<std::uint64_t> primes;
    if (primes.size() <= k) primes = large_primes(2 * k + 8);
    const auto p = primes[k];
    std::size_t offset = 0;
    if (k > 0) {
      std::shuffle(order.begin(), order.end(), rng);
      offset = static_cast<std::size_t>(rng() % rows);
    }
    const auto prof = rank_profile_mod(cols, rows, p, order, offset);
    if (prof.rank > rank) {
      // a larger nonsingular minor: restart the certificate
      rank = prof.rank;
      certified_bits = 0;
      g = 0;
      minors = stable = 0;
    }
    if (prof.rank == rank) {
      if (minors < 8 && stable < 2) {
        const auto before = g;
        g = boost::multiprecision::gcd(g, boost::multiprecision::abs(minor_determinant(cols, prof)));
        ++minors;
        stable = g == before ? stable + 1 : 0;
      }
      certified_bits += std::log2(static_cast<double>(p));
    }
    double needed = 1;
    for (std::size_t i = 0; i <= rank && i < norms.size(); ++i) needed += norms[i];
    if (rank == cols.size() || rank == rows || certified_bits > needed) break;
  }
  out.rank = rank;
  out.divisor_bound = rank == 0 ? Integer(1) : g;
  return out;
}

}  // namespace detail

namespace detail {

/// Diagonalize a dense matrix of residues mod m by Euclidean row and column
/// steps (division with remainder on representatives in [0, m)) and return
/// the SNF over Z/m: slots nonzero mod m, and the proper divisors among them.
inline SmithForm dense_smith_mod(std::vector<std::vector<std::uint64_t>> a, std::size_t cols, std::uint64_t m) {
  const std::size_t rows = a.size();
  auto row_sub = [&](std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src, std::uint64_t q,
                     std::size_t from) {
    for (std::size_t j = from; j < cols; ++j)
      if (src[j] != 0) {
        const auto t = mul_mod(q, src[j], m);
        dst[j] = dst[j] >= t ? dst[j] - t : dst[j] + (m - t);
      }
  };
  auto col_sub = [&](std::size_t dst, std::size_t src, std::uint64_t q, std::size_t from) {
    for (std::size_t i = from; i < rows; ++i)
      if (a[i][src] != 0) {
        const auto t = mul_mod(q, a[i][src], m);
        a[i][dst] = a[i][dst] >= t ? a[i][dst] - t : a[i][dst] + (m - t);
      }
  };
  auto swap_cols = [&](std::size_t j1, std::size_t j2) {
    if (j1 != j2)
      for (auto& row : a) std::swap(row[j1], row[j2]);
  };
  std::vector<Integer> gcds;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a[i][j] != 0 && (pi == rows || std::gcd(a[i][j], m) < std::gcd(a[pi][pj], m))) {
          pi = i;
          pj = j;
        }
    if (pi == rows) break;
    std::swap(a[t], a[pi]);
    swap_cols(t, pj);
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i)
        while (a[i][t] != 0) {
          row_sub(a[i], a[t], a[i][t] / a[t][t], t);
          if (a[i][t] != 0) std::swap(a[t], a[i]);
        }
      for (std::size_t j = t + 1; j < cols; ++j)
        while (a[t][j] != 0) {
          col_sub(j, t, a[t][j] / a[t][t], t);
          if (a[t][j] != 0) {
            swap_cols(t, j);
            dirty = true;
          }
        }
    }
    gcds.emplace_back(std::gcd(a[t][t], m));
  }
  // Cokernel is the sum of Z/gcd(d_t, m); recover the invariant factor chain
  // over Z/m, padding with units so the slot count is kept.
  const std::size_t slots = gcds.size();
  auto chain = canonical_factors(std::move(gcds));
  SmithForm out;
  out.rank = slots;
  for (auto& f : chain) {
    if (f == Integer(m)) --out.rank;
    else out.factors.push_back(std::move(f));
  }
  return out;
}

/// SNF over Z/m of columns with residue entries.
inline SmithForm smith_mod_columns(std::size_t rows, std::vector<std::vector<SparseEntry<std::uint64_t>>> cols,
                                   std::uint64_t m) {
  const ModRing ring{m};
  const auto reduced = SparseMatrix<std::uint64_t>::from_columns(rows, std::move(cols));
  UnitPivotEliminator<ModRing> elim(ring, reduced.rows(), stream_columns(ring, reduced));
  elim.run();
  auto residual = elim.take_residual();
  SmithForm out;
  out.rank = elim.pivot_count();
  if (residual.empty()) return out;
  const auto n = compress_rows(residual);
  const std::size_t k = residual.size();
  if (n * k > (std::size_t{1} << 28)) throw ResourceLimitError("dense residual too large");
  // rows x cols with the shorter side as columns
  const bool transpose = k > n;
  std::vector<std::vector<std::uint64_t>> d(transpose ? k : n, std::vector<std::uint64_t>(transpose ? n : k, 0));
  for (std::size_t j = 0; j < k; ++j)
    for (const auto& e : residual[j]) (transpose ? d[j][e.row] : d[e.row][j]) = e.value;
  auto dense = dense_smith_mod(std::move(d), transpose ? n : k, m);
  out.rank += dense.rank;
  out.factors = std::move(dense.factors);
  return out;
}

template <class V>
SmithForm finish_residual(std::size_t pivots, std::vector<std::vector<SparseEntry<V>>> residual, SmithStrategy strategy) {
  SmithForm out;
  out.rank = pivots;
  if (residual.empty()) return out;
  const auto rows = compress_rows(residual);
  const bool modular =
      strategy == SmithStrategy::Modular || (strategy == SmithStrategy::Auto && rows * residual.size() > kDenseResidualLimit);
  if (modular) {
    const auto cert = certified_rank(residual, rows);
    if (cert.divisor_bound <= Integer(std::uint64_t{1} << 60)) {
      // Nonzero invariant factors divide the bound, so they stay proper divisors of m.
      const auto m = static_cast<std::uint64_t>(cert.divisor_bound) * 2;
      std::vector<std::vector<SparseEntry<std::uint64_t>>> cols(residual.size());
      for (std::size_t j = 0; j < residual.size(); ++j)
        for (const auto& e : residual[j])
          if (const auto r = residue(e.value, m); r != 0) cols[j].push_back({e.row, r});
      auto local = smith_mod_columns(rows, std::move(cols), m);
      if (local.rank != cert.rank) throw Error("modular Smith form disagrees with the certified rank");
      out.rank += local.rank;
      out.factors = std::move(local.factors);
      return out;
    }
  }
  std::vector<std::vector<Integer>> d(rows, std::vector<Integer>(residual.size()));
  for (std::size_t j = 0; j < residual.size(); ++j)
    for (const auto& e : residual[j]) d[e.row][j] = to_integer_value(e.value);
  auto dense = dense_smith_normal_form(d);
  out.rank += dense.rank;
  out.factors = std::move(dense.factors);
  return out;
}

}  // namespace detail

/// Smith normal form over Z. Exact: unit-pivot sparse elimination, then
/// the leftover block either by dense Euclidean SNF or, when large, by a
/// certified rank and an SNF modulo a multiple of the torsion.
template <class T>
SmithForm smith_normal_form(const SparseMatrix<T>& input, SmithStrategy strategy = SmithStrategy::Auto) {
  const SparseMatrix<T> a = input.cols() > input.rows() ? input.transpose() : input;
  if constexpr (std::is_same_v<T, std::int64_t>) {
    try {
      auto [pivots, residual] = detail::eliminate_units(detail::Int64Ring{}, a);
      return detail::finish_residual(pivots, std::move(residual), strategy);
    } catch (const detail::Overflow&) {
      // retry below in arbitrary precision
    }
  }
  std::vector<std::vector<SparseEntry<Integer>>> cols(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (const auto& e : a.column(j)) cols[j].push_back({e.row, Integer(e.value)});
  const auto big = SparseMatrix<Integer>::from_columns(a.rows(), std::move(cols));
  auto [pivots, residual] = detail::eliminate_units(detail::BigIntRing{}, big);
  return detail::finish_residual(pivots, std::move(residual), strategy);
}

/// Smith normal form over Z/m (m >= 2): rank counts diagonal slots nonzero
/// mod m, factors are the proper divisors of m among them. For prime m the
/// rank is the rank over F_m.
template <class T>
SmithForm smith_normal_form_mod(const SparseMatrix<T>& input, std::uint64_t m) {
  if (m < 2) throw Error("modulus must be >= 2");
  if (m > (std::uint64_t{1} << 62)) throw Error("modulus too large");
  const SparseMatrix<T> a = input.cols() > input.rows() ? input.transpose() : input;
  std::vector<std::vector<SparseEntry<std::uint64_t>>> cols(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (const auto& e : a.column(j))
      if (const auto v = detail::residue(e.value, m); v != 0) cols[j].push_back({e.row, v});
  return detail::smith_mod_columns(a.rows(), std::move(cols), m);
}

/// Rank over the prime field F_p.
template <class T>
std::size_t rank_mod_p(const SparseMatrix<T>& a, std::uint64_t p) {
  return smith_normal_form_mod(a, p).rank;
}

}  // namespace ybh
