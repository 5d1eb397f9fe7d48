#pragma once

// Homology and cohomology of the Yang-Baxter complexes over Z and Z/m.

#include <fstream>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "ybh/complex.hpp"
#include "ybh/smith.hpp"

namespace ybh {

/// Z^free_rank + Z_{d_1} + ... + Z_{d_k}, d_1 | d_2 | ... | d_k, d_i > 1.
struct AbelianGroupInvariants {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;

  /// Canonicalize an arbitrary list of cyclic orders (1s and 0s allowed;
  /// a 0 contributes a free summand).
  static AbelianGroupInvariants from_cyclic_orders(std::size_t free_rank, std::vector<Integer> orders) {
    AbelianGroupInvariants g{free_rank, {}};
    std::vector<Integer> finite;
    for (auto& o : orders) {
      if (o == 0) ++g.free_rank;
      else finite.push_back(std::move(o));
    }
    g.torsion = detail::canonical_factors(std::move(finite));
    return g;
  }

  bool trivial() const { return free_rank == 0 && torsion.empty(); }

  friend AbelianGroupInvariants operator+(const AbelianGroupInvariants& a, const AbelianGroupInvariants& b) {
    auto orders = a.torsion;
    orders.insert(orders.end(), b.torsion.begin(), b.torsion.end());
    return from_cyclic_orders(a.free_rank + b.free_rank, std::move(orders));
  }

  friend bool operator==(const AbelianGroupInvariants&, const AbelianGroupInvariants&) = default;
};

/// `Z^r + Z_2^a + Z_4^b`; exponent 1 omitted; `0` for the trivial group.
inline std::string to_string(const AbelianGroupInvariants& g) {
  if (g.trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << " + ";
    first = false;
  };
  if (g.free_rank > 0) {
    sep();
    os << 'Z';
    if (g.free_rank > 1) os << '^' << g.free_rank;
  }
  for (std::size_t i = 0; i < g.torsion.size();) {
    std::size_t j = i;
    while (j < g.torsion.size() && g.torsion[j] == g.torsion[i]) ++j;
    sep();
    os << "Z_" << g.torsion[i];
    if (j - i > 1) os << '^' << (j - i);
    i = j;
  }
  return os.str();
}

/// Inverse of to_string; also accepts summands in any order.
inline AbelianGroupInvariants parse_group(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s == "0") return {};
  if (s.empty()) throw ParseError("empty group string");
  std::size_t free_rank = 0;
  std::vector<Integer> orders;
  std::size_t pos = 0;
  auto read_uint = [&](std::size_t& p) {
    const std::size_t start = p;
    while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
    if (p == start) throw ParseError("expected a number in group string '" + std::string(text) + "'");
    return Integer(s.substr(start, p - start));
  };
  while (pos < s.size()) {
    if (s[pos] != 'Z') throw ParseError("bad group string '" + std::string(text) + "'");
    ++pos;
    Integer order = 0;
    if (pos < s.size() && s[pos] == '_') {
      ++pos;
      order = read_uint(pos);
      if (order < 2) throw ParseError("cyclic order must be >= 2");
    }
    std::size_t exponent = 1;
    if (pos < s.size() && s[pos] == '^') {
      ++pos;
      exponent = static_cast<std::size_t>(read_uint(pos));
    }
    if (order == 0) free_rank += exponent;
    else orders.insert(orders.end(), exponent, order);
    if (pos < s.size()) {
      if (s[pos] != '+') throw ParseError("bad group string '" + std::string(text) + "'");
      ++pos;
      if (pos == s.size()) throw ParseError("dangling '+' in group string");
    }
  }
  return AbelianGroupInvariants::from_cyclic_orders(free_rank, std::move(orders));
}

/// phi : C_2 -> Z_m as an m x m table; phi(x x, x) is 0 when normalized.
struct CocycleTable {
  std::uint64_t modulus = 2;
  std::size_t size = 0;
  std::vector<std::uint64_t> values;  // row-major, values[x * size + y]

  std::uint64_t operator()(Element x, Element y) const { return values[x * size + y]; }

  static CocycleTable zero(std::size_t size, std::uint64_t modulus) {
    return CocycleTable{modulus, size, std::vector<std::uint64_t>(size * size, 0)};
  }

  friend bool operator==(const CocycleTable&, const CocycleTable&) = default;
};

/// phi(x, y) = (x * y as integers, representatives 0..m-1) mod k.
inline CocycleTable product_mod_cocycle(std::size_t size, std::uint64_t k) {
  auto phi = CocycleTable::zero(size, k);
  for (std::size_t x = 0; x < size; ++x)
    for (std::size_t y = 0; y < size; ++y) phi.values[x * size + y] = (x * y) % k;
  return phi;
}

/// Cocycle file: `mod m` then `x y v` lines (0-based); omitted pairs are 0.
inline CocycleTable read_cocycle(std::istream& in, std::size_t size) {
  std::string line, word;
  std::uint64_t modulus = 0;
  std::vector<std::tuple<long long, long long, long long>> entries;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    if (!(ls >> word)) continue;
    if (modulus == 0) {
      long long m = 0;
      if (word != "mod" || !(ls >> m) || m < 2) throw ParseError("cocycle file must start with 'mod m', m >= 2");
      modulus = static_cast<std::uint64_t>(m);
      continue;
    }
    long long x = 0, y = 0, v = 0;
    std::istringstream entry(line);
    if (!(entry >> x >> y >> v)) throw ParseError("bad cocycle line '" + line + "'");
    entries.emplace_back(x, y, v);
  }
  if (modulus == 0) throw ParseError("empty cocycle file");
  auto phi = CocycleTable::zero(size, modulus);
  for (auto [x, y, v] : entries) {
    if (x < 0 || y < 0 || static_cast<std::size_t>(x) >= size || static_cast<std::size_t>(y) >= size)
      throw ParseError("cocycle entry out of range");
    if (v < 0 || static_cast<std::uint64_t>(v) >= modulus) throw ParseError("cocycle value out of range 0..m-1");
    phi.values[x * size + y] = static_cast<std::uint64_t>(v);
  }
  return phi;
}

/// `builtin:product-mod:k`, `file:PATH` or a plain path.
inline CocycleTable load_cocycle(std::string_view spec, std::size_t size) {
  constexpr std::string_view product = "builtin:product-mod:";
  if (spec.starts_with(product)) {
    const std::string k(spec.substr(product.size()));
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(k, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != k.size() || v < 2) throw ParseError("bad cocycle spec '" + std::string(spec) + "'");
    return product_mod_cocycle(size, v);
  }
  if (spec.starts_with("builtin:")) throw ParseError("unknown builtin cocycle '" + std::string(spec) + "'");
  const std::string path(spec.starts_with("file:") ? spec.substr(5) : spec);
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open cocycle file '" + path + "'");
  return read_cocycle(in, size);
}

inline void write_cocycle(std::ostream& out, const CocycleTable& phi) {
  out << "mod " << phi.modulus << '\n';
  for (std::size_t x = 0; x < phi.size; ++x)
    for (std::size_t y = 0; y < phi.size; ++y)
      if (phi(x, y) != 0) out << x << ' ' << y << ' ' << phi(x, y) << '\n';
}

/// Why phi fails to be a normalized 2-cocycle, or nullopt if it is one.
inline std::optional<std::string> cocycle_defect(const ChainComplex& cx, const CocycleTable& phi) {
  if (!cx.is_rump()) return "solution does not come from a Rump right quasigroup";
  const auto& magma = *cx.magma();
  const auto m = magma.size();
  if (phi.size != m) return "cocycle table size does not match the magma";
  for (Element x = 0; x < m; ++x)
    if (phi(magma.square(x), x) != 0) return "not normalized at " + format_tuple(std::vector<Element>{magma.square(x), x});
  const auto& pairs = cx.basis(2);
  Element t[3];
  for (t[0] = 0; t[0] < m; ++t[0])
    for (t[1] = 0; t[1] < m; ++t[1])
      for (t[2] = 0; t[2] < m; ++t[2]) {
        if (is_degenerate_tuple(magma, t)) continue;
        std::uint64_t total = 0;
        for (const auto& e : cx.boundary_of(t)) {
          if (pairs.degenerate(e.row)) continue;
          const auto v = phi.values[e.row] % phi.modulus;
          const auto c = static_cast<std::uint64_t>(((e.value % static_cast<std::int64_t>(phi.modulus)) +
                                                     static_cast<std::int64_t>(phi.modulus)) %
                                                    static_cast<std::int64_t>(phi.modulus));
          total = (total + c * v) % phi.modulus;
        }
        if (total != 0) return "coboundary nonzero on " + format_tuple(t);
      }
  return std::nullopt;
}

struct HomologyOptions {
  /// Refuse boundary matrices with more columns than this unless force.
  std::size_t column_cap = std::size_t{1} << 20;
  bool force = false;
};

/// Homology calculator over one chain complex with cached Smith forms.
class HomologyCalculator {
 public:
  explicit HomologyCalculator(const ChainComplex& cx, HomologyOptions options = {}) : cx_(cx), options_(options) {}

  const ChainComplex& complex() const { return cx_; }

  /// Smith form of boundary d_n in the theory; modulus 0 means Z.
  SmithForm smith(std::size_t n, Theory theory, std::uint64_t modulus) const {
    const Key key{n, theory, modulus};
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    check_cap(n);
    SmithForm form;
    if (n >= 1) {
      const auto d = cx_.boundary(n, theory);
      form = modulus == 0 ? smith_normal_form(d) : smith_normal_form_mod(d, modulus);
    }
    std::lock_guard lock(mutex_);
    cache_.emplace(key, form);
    return form;
  }

  /// H_n over Z (modulus 0) or with Z/m coefficients.
  AbelianGroupInvariants homology(std::size_t n, Theory theory, std::uint64_t modulus = 0) const {
    if (n == 0) throw StructureError("homology is reported for degrees n >= 1");
    if (modulus == 1) throw StructureError("modulus must be 0 or >= 2");
    const std::size_t cn = cx_.chain_rank(n, theory);
    const auto out = smith(n, theory, modulus);
    const auto in = smith(n + 1, theory, modulus);
    if (out.rank + in.rank > cn) throw Error("rank bookkeeping violated: boundary does not square to zero");
    const std::size_t free = cn - out.rank - in.rank;
    if (modulus == 0) return AbelianGroupInvariants{free, in.factors};
    std::vector<Integer> orders(free, Integer(modulus));
    orders.insert(orders.end(), in.factors.begin(), in.factors.end());
    orders.insert(orders.end(), out.factors.begin(), out.factors.end());
    return AbelianGroupInvariants::from_cyclic_orders(0, std::move(orders));
  }

  void check_cap(std::size_t n) const {
    const auto cols = checked_pow(cx_.carrier_size(), n);
    if (!options_.force && cols > options_.column_cap)
      throw ResourceLimitError("boundary d_" + std::to_string(n) + " has " + std::to_string(cols) +
                               " columns, above the cap of " + std::to_string(options_.column_cap) +
                               " (use --force)");
  }

 private:
  using Key = std::tuple<std::size_t, Theory, std::uint64_t>;
  const ChainComplex& cx_;
  HomologyOptions options_;
  mutable std::mutex mutex_;
  mutable std::map<Key, SmithForm> cache_;
};

inline AbelianGroupInvariants homology(const YBMap& R, std::size_t n, Theory theory, std::uint64_t modulus = 0,
                                       HomologyOptions options = {}) {
  const ChainComplex cx(R);
  return HomologyCalculator(cx, options).homology(n, theory, modulus);
}

struct CohomologyResult {
  AbelianGroupInvariants group;
  /// Generators of the n-cocycles, as value vectors over the theory's basis
  /// of n-tuples (ascending tuple rank).
  std::vector<std::vector<std::uint64_t>> cocycles;
};

namespace detail {

/// Generators of { phi : phi A = 0 mod m } for a dense rows x cols matrix A
/// with entries in [0, m): P A Q = diag by Euclidean steps on residues,
/// tracking the row transform P.
inline std::vector<std::vector<std::uint64_t>> left_kernel_mod(std::vector<std::vector<std::uint64_t>> a,
                                                                std::size_t cols, std::uint64_t m) {
  const std::size_t rows = a.size();
  std::vector<std::vector<std::uint64_t>> p(rows, std::vector<std::uint64_t>(rows, 0));
  for (std::size_t i = 0; i < rows; ++i) p[i][i] = 1;
  auto mulmod = [m](std::uint64_t x, std::uint64_t y) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % m);
  };
  auto row_sub = [&](std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src, std::uint64_t q,
                     std::size_t from) {
    for (std::size_t j = from; j < dst.size(); ++j) {
      const auto t = mulmod(q, src[j]);
      dst[j] = dst[j] >= t ? dst[j] - t : dst[j] + m - t;
    }
  };
  auto col_sub = [&](std::size_t dst, std::size_t src, std::uint64_t q, std::size_t from) {
    for (std::size_t i = from; i < rows; ++i) {
      const auto t = mulmod(q, a[i][src]);
      a[i][dst] = a[i][dst] >= t ? a[i][dst] - t : a[i][dst] + m - t;
    }
  };
  std::vector<std::uint64_t> diag;
  const std::size_t slots = std::min(rows, cols);
  std::size_t t = 0;
  for (; t < slots; ++t) {
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a[i][j] != 0 && (pi == rows || a[i][j] < a[pi][pj])) {
          pi = i;
          pj = j;
        }
    if (pi == rows) break;
    std::swap(a[t], a[pi]);
    std::swap(p[t], p[pi]);
    if (pj != t)
      for (auto& row : a) std::swap(row[t], row[pj]);
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i)
        while (a[i][t] != 0) {
          const auto q = a[i][t] / a[t][t];
          row_sub(a[i], a[t], q, t);
          row_sub(p[i], p[t], q, 0);
          if (a[i][t] != 0) {
            std::swap(a[t], a[i]);
            std::swap(p[t], p[i]);
          }
        }
      for (std::size_t j = t + 1; j < cols; ++j)
        while (a[t][j] != 0) {
          const auto q = a[t][j] / a[t][t];
          col_sub(j, t, q, t);
          if (a[t][j] != 0) {
            for (auto& row : a) std::swap(row[t], row[j]);
            dirty = true;
          }
        }
    }
    diag.push_back(a[t][t]);
  }
  std::vector<std::vector<std::uint64_t>> gens;
  for (std::size_t i = 0; i < rows; ++i) {
    std::uint64_t scale = 1;
    if (i < diag.size()) scale = m / std::gcd(diag[i], m);
    if (scale == m) continue;
    std::vector<std::uint64_t> g(rows);
    for (std::size_t j = 0; j < rows; ++j) g[j] = mulmod(scale, p[i][j]);
    if (std::any_of(g.begin(), g.end(), [](auto v) { return v != 0; })) gens.push_back(std::move(g));
  }
  return gens;
}

}  // namespace detail

/// H^n with Z/m coefficients and generators of the n-cocycles.
inline CohomologyResult cohomology(const HomologyCalculator& calc, std::size_t n, Theory theory, std::uint64_t modulus) {
  if (modulus < 2) throw StructureError("cohomology needs a modulus m >= 2");
  const auto& cx = calc.complex();
  CohomologyResult res;
  // Hom(-, Z_m) of a free complex: H^n has the same invariants as H_n(-; Z_m).
  res.group = calc.homology(n, theory, modulus);
  calc.check_cap(n + 1);
  const auto d = cx.boundary(n + 1, theory);
  if (d.rows() > 4096 || d.rows() * d.cols() > (std::size_t{1} << 26))
    throw ResourceLimitError("cocycle generators: boundary too large for dense elimination");
  std::vector<std::vector<std::uint64_t>> a(d.rows(), std::vector<std::uint64_t>(d.cols(), 0));
  const auto mm = static_cast<std::int64_t>(modulus);
  for (std::size_t j = 0; j < d.cols(); ++j)
    for (const auto& e : d.column(j)) a[e.row][j] = static_cast<std::uint64_t>(((e.value % mm) + mm) % mm);
  res.cocycles = detail::left_kernel_mod(std::move(a), d.cols(), modulus);
  return res;
}

/// A degree-2 cocycle vector (theory basis order) as a full m x m table.
inline CocycleTable cocycle_table(const ChainComplex& cx, Theory theory, const std::vector<std::uint64_t>& values,
                                  std::uint64_t modulus) {
  const auto& b = cx.basis(2);
  auto phi = CocycleTable::zero(cx.carrier_size(), modulus);
  for (std::size_t j = 0; j < values.size(); ++j) phi.values[b.global(theory, j)] = values[j];
  return phi;
}

/// phi . d_{n+1} == 0 mod m for a cochain over the theory's basis.
inline bool is_cocycle_vector(const ChainComplex& cx, std::size_t n, Theory theory,
                              const std::vector<std::uint64_t>& values, std::uint64_t modulus) {
  const auto d = cx.boundary(n + 1, theory);
  if (values.size() != d.rows()) return false;
  const auto mm = static_cast<std::int64_t>(modulus);
  for (std::size_t j = 0; j < d.cols(); ++j) {
    std::int64_t s = 0;
    for (const auto& e : d.column(j)) s = (s + (e.value % mm + mm) % mm * static_cast<std::int64_t>(values[e.row])) % mm;
    if (s != 0) return false;
  }
  return true;
}

struct SplittingRow {
  std::size_t degree = 0;
  AbelianGroupInvariants yb, deg, nyb;
  bool splits = false;
};

struct SplittingReport {
  std::vector<SplittingRow> rows;
  /// Splitting is a theorem for cyclic racks; for other magmas it is evidence only.
  bool theorem_backed = false;
  bool all_split() const {
    for (const auto& r : rows)
      if (!r.splits) return false;
    return true;
  }
};

/// H^YB_n, H^D_n and H^NYB_n over Z for n = 1..n_max and whether
/// H^YB = H^NYB + H^D as abelian groups.
inline SplittingReport splitting_report(const HomologyCalculator& calc, std::size_t n_max, unsigned jobs = 1) {
  const auto& cx = calc.complex();
  if (!cx.is_rump()) throw StructureError("splitting report needs a Rump right quasigroup");
  SplittingReport rep;
  rep.theorem_backed = is_cyclic_rack(*cx.magma());
  // Warm the Smith-form cache; the three theories are independent.
  if (jobs > 1) {
    std::vector<std::future<void>> tasks;
    for (auto theory : {Theory::YB, Theory::DEG, Theory::NYB})
      tasks.push_back(std::async(std::launch::async, [&calc, theory, n_max] {
        for (std::size_t n = 1; n <= n_max + 1; ++n) calc.smith(n, theory, 0);
      }));
    for (auto& t : tasks) t.get();
  }
  for (std::size_t n = 1; n <= n_max; ++n) {
    SplittingRow row;
    row.degree = n;
    row.yb = calc.homology(n, Theory::YB);
    row.deg = calc.homology(n, Theory::DEG);
    row.nyb = calc.homology(n, Theory::NYB);
    row.splits = row.yb == row.nyb + row.deg;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

inline SplittingReport splitting_report(const FiniteMagma& magma, std::size_t n_max, HomologyOptions options = {}) {
  const ChainComplex cx(from_rump(magma));
  return splitting_report(HomologyCalculator(cx, options), n_max);
}

}  // namespace ybh
