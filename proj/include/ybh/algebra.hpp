#pragma once

// Finite magmas, Rump right quasigroups and their structural predicates.

#include <algorithm>
#include <fstream>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ybh/common.hpp"
#include "ybh/finite_field.hpp"

namespace ybh {

/// A finite magma on {0, ..., m-1} given by its Cayley table.
///
/// Immutable after construction. When every right translation r_y : x -> x*y
/// is a permutation, the right-division table x/y = r_y^{-1}(x) is built once.
class FiniteMagma {
 public:
  FiniteMagma(std::size_t size, std::vector<Element> table, std::string name = {})
      : size_(size), table_(std::move(table)), name_(std::move(name)) {
    if (size_ == 0) throw ParseError("magma must have at least one element");
    if (table_.size() != size_ * size_) throw ParseError("Cayley table is not square");
    for (Element v : table_)
      if (v >= size_) throw ParseError("Cayley table entry out of range");
    build_division();
  }

  std::size_t size() const { return size_; }
  const std::string& name() const { return name_; }
  std::span<const Element> table() const { return table_; }

  Element operator()(Element x, Element y) const { return table_[x * size_ + y]; }
  Element square(Element x) const { return (*this)(x, x); }

  bool is_right_quasigroup() const { return !rdiv_.empty(); }

  /// x / y: the unique z with z * y = x.
  Element right_divide(Element x, Element y) const {
    if (rdiv_.empty()) throw StructureError("magma is not a right quasigroup; right division undefined");
    return rdiv_[x * size_ + y];
  }

  friend bool operator==(const FiniteMagma& a, const FiniteMagma& b) {
    return a.size_ == b.size_ && a.table_ == b.table_;
  }

 private:
  void build_division() {
    std::vector<Element> rdiv(size_ * size_, 0);
    std::vector<char> hit(size_);
    for (Element y = 0; y < size_; ++y) {
      std::fill(hit.begin(), hit.end(), 0);
      for (Element z = 0; z < size_; ++z) {
        const Element x = (*this)(z, y);
        if (hit[x]) return;
        hit[x] = 1;
        rdiv[x * size_ + y] = z;
      }
    }
    rdiv_ = std::move(rdiv);
  }

  std::size_t size_;
  std::vector<Element> table_;
  std::vector<Element> rdiv_;
  std::string name_;
};

struct StructureReport {
  bool right_quasigroup = false;
  bool left_quasigroup = false;
  bool latin = false;
  bool rump = false;
  bool rack = false;
  bool quandle = false;
  bool uniquely_2_divisible = false;
  bool delta_bijective = false;
};

/// Build a magma from rows of 1-based entries (file convention).
inline FiniteMagma magma_from_table(const std::vector<std::vector<long long>>& rows, std::string name = {}) {
  const std::size_t m = rows.size();
  if (m == 0) throw ParseError("empty Cayley table");
  std::vector<Element> table;
  table.reserve(m * m);
  for (const auto& row : rows) {
    if (row.size() != m) throw ParseError("Cayley table is not square");
    for (long long v : row) {
      if (v < 1 || static_cast<unsigned long long>(v) > m)
        throw ParseError("Cayley table entry " + std::to_string(v) + " out of range 1.." + std::to_string(m));
      table.push_back(static_cast<Element>(v - 1));
    }
  }
  return FiniteMagma(m, std::move(table), std::move(name));
}

/// Parse the Cayley-table file format: first token m, then m*m 1-based
/// entries row by row. '#' starts a comment.
inline FiniteMagma read_cayley_table(std::istream& in, std::string name = {}) {
  std::vector<long long> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used != tok.size()) throw ParseError("bad token '" + tok + "' in Cayley table");
        tokens.push_back(v);
      } catch (const std::logic_error&) {
        throw ParseError("bad token '" + tok + "' in Cayley table");
      }
    }
  }
  if (tokens.empty()) throw ParseError("empty Cayley table file");
  const long long m = tokens.front();
  if (m < 1) throw ParseError("Cayley table order must be positive");
  if (tokens.size() != 1 + static_cast<std::size_t>(m * m))
    throw ParseError("Cayley table must contain exactly " + std::to_string(m * m) + " entries");
  std::vector<std::vector<long long>> rows(static_cast<std::size_t>(m));
  for (long long x = 0; x < m; ++x)
    rows[x].assign(tokens.begin() + 1 + x * m, tokens.begin() + 1 + (x + 1) * m);
  return magma_from_table(rows, std::move(name));
}

inline FiniteMagma read_cayley_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open Cayley table file '" + path + "'");
  return read_cayley_table(in, "file:" + path);
}

inline void write_cayley_table(std::ostream& out, const FiniteMagma& magma) {
  const auto m = magma.size();
  out << m << '\n';
  for (Element x = 0; x < m; ++x) {
    for (Element y = 0; y < m; ++y) out << (y ? " " : "") << magma(x, y) + 1;
    out << '\n';
  }
}

/// A k x k matrix over F_q, row-major.
using FieldMatrix = std::vector<std::vector<FieldElement>>;

/// Aff(F_q^k, phi, psi, c): x * y = phi(x) + psi(y) + c. The vector
/// (a_1, ..., a_k) has 0-based index sum d(a_i) q^{k-i}, with d the digit map
/// of GaloisField.
inline FiniteMagma affine_magma(unsigned q, const FieldMatrix& phi, const FieldMatrix& psi,
                                const std::vector<FieldElement>& c, std::string name = {}) {
  const GaloisField field(q);
  const std::size_t k = c.size();
  if (k == 0) throw StructureError("affine magma needs dimension >= 1");
  auto check_square = [k](const FieldMatrix& a, const char* what) {
    if (a.size() != k) throw StructureError(std::string(what) + " has wrong dimension");
    for (const auto& row : a)
      if (row.size() != k) throw StructureError(std::string(what) + " is not square");
  };
  check_square(phi, "phi");
  check_square(psi, "psi");
  for (const auto& e : c) field.digit(e);
  for (const auto* mat : {&phi, &psi})
    for (const auto& row : *mat)
      for (const auto& e : row) field.digit(e);

  const std::size_t m = checked_pow(q, k);
  if (m > 4096) throw ResourceLimitError("affine magma too large");

  auto decode = [&](std::size_t index) {
    std::vector<FieldElement> v(k);
    for (std::size_t i = k; i-- > 0;) {
      v[i] = field.element(static_cast<unsigned>(index % q));
      index /= q;
    }
    return v;
  };
  auto encode = [&](const std::vector<FieldElement>& v) {
    std::size_t index = 0;
    for (const auto& e : v) index = index * q + field.digit(e);
    return static_cast<Element>(index);
  };
  auto apply = [&](const FieldMatrix& a, const std::vector<FieldElement>& v) {
    std::vector<FieldElement> out(k, field.zero());
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) out[i] = out[i] + a[i][j] * v[j];
    return out;
  };

  std::vector<std::vector<FieldElement>> vectors(m);
  for (std::size_t i = 0; i < m; ++i) vectors[i] = decode(i);
  std::vector<Element> table(m * m);
  for (std::size_t x = 0; x < m; ++x) {
    const auto px = apply(phi, vectors[x]);
    for (std::size_t y = 0; y < m; ++y) {
      auto v = apply(psi, vectors[y]);
      for (std::size_t i = 0; i < k; ++i) v[i] = v[i] + px[i] + c[i];
      table[x * m + y] = encode(v);
    }
  }
  return FiniteMagma(m, std::move(table), std::move(name));
}

namespace detail {

inline FiniteMagma magma_from_rule(std::size_t n, std::string name, auto&& rule) {
  if (n == 0) throw ParseError("magma order must be positive");
  std::vector<Element> table(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) table[x * n + y] = static_cast<Element>(rule(x, y));
  return FiniteMagma(n, std::move(table), std::move(name));
}

inline std::size_t parse_count(std::string_view text, std::string_view what) {
  std::size_t value = 0;
  const std::string s(text);
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size() || v < 1) throw ParseError("");
    value = static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ParseError("invalid " + std::string(what) + " '" + s + "'");
  }
  if (value > 4096) throw ResourceLimitError(std::string(what) + " too large");
  return value;
}

inline std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace detail

/// Cyclic rack C_n: x * y = x + 1 mod n.
inline FiniteMagma cyclic_rack(std::size_t n) {
  return detail::magma_from_rule(n, "cyclic:" + std::to_string(n), [n](std::size_t x, std::size_t) { return (x + 1) % n; });
}

/// Dihedral quandle R_n: x * y = 2y - x mod n.
inline FiniteMagma dihedral_quandle(std::size_t n) {
  return detail::magma_from_rule(n, "dihedral:" + std::to_string(n),
                                 [n](std::size_t x, std::size_t y) { return (2 * y + n - x % n) % n; });
}

/// Alexander quandle on Z_n: x * y = t x + (1 - t) y mod n, t a unit.
inline FiniteMagma alexander_quandle(std::size_t n, std::size_t t) {
  t %= n;
  if (std::gcd(t, n) != 1) throw StructureError("alexander: t=" + std::to_string(t) + " is not a unit mod " + std::to_string(n));
  const std::size_t one_minus_t = (1 + n - t) % n;
  return detail::magma_from_rule(n, "alexander:" + std::to_string(n) + ":" + std::to_string(t),
                                 [=](std::size_t x, std::size_t y) { return (t * x + one_minus_t * y) % n; });
}

/// Projection magma x * y = x.
inline FiniteMagma trivial_magma(std::size_t n) {
  return detail::magma_from_rule(n, "trivial:" + std::to_string(n), [](std::size_t x, std::size_t) { return x; });
}

/// Aff(F_2^2, [[1,0],[1,1]], [[0,1],[1,0]], 0), order 4.
inline FiniteMagma affine_x4() {
  const GaloisField f(2);
  const auto o = f.zero(), i = f.one();
  return affine_magma(2, {{i, o}, {i, i}}, {{o, i}, {i, o}}, {o, o}, "x4");
}

/// Aff(F_4^2, [[0,u],[u^2,0]], [[0,1],[1,0]], 0), order 16, u^2 = u + 1.
inline FiniteMagma affine_x16() {
  const GaloisField f(4);
  const auto o = f.zero(), i = f.one(), u = f.generator(), u2 = f.power_of_generator(2);
  return affine_magma(4, {{o, u}, {u2, o}}, {{o, i}, {i, o}}, {o, o}, "x16");
}

/// Resolve a magma spec: cyclic:n, dihedral:n, alexander:n:t, trivial:n, x4,
/// x16 or file:PATH.
inline FiniteMagma builtin_magma(std::string_view spec) {
  if (spec.starts_with("file:")) return read_cayley_table_file(std::string(spec.substr(5)));
  const auto parts = detail::split(spec, ':');
  const auto kind = parts.front();
  if (kind == "x4" && parts.size() == 1) return affine_x4();
  if (kind == "x16" && parts.size() == 1) return affine_x16();
  if (parts.size() == 2) {
    const auto n = detail::parse_count(parts[1], "order");
    if (kind == "cyclic") return cyclic_rack(n);
    if (kind == "dihedral") return dihedral_quandle(n);
    if (kind == "trivial") return trivial_magma(n);
  }
  if (kind == "alexander" && parts.size() == 3) {
    const auto n = detail::parse_count(parts[1], "order");
    const auto t = detail::parse_count(parts[2], "parameter t");
    return alexander_quandle(n, t);
  }
  throw ParseError("unknown magma spec '" + std::string(spec) +
                   "' (expected cyclic:n, dihedral:n, alexander:n:t, trivial:n, x4, x16 or file:PATH)");
}

/// (zx)(yx) = (zy)(xy) for all x, y, z, on a right quasigroup.
inline bool is_rump(const FiniteMagma& magma) {
  if (!magma.is_right_quasigroup()) return false;
  const auto m = magma.size();
  for (Element x = 0; x < m; ++x)
    for (Element y = 0; y < m; ++y) {
      const Element yx = magma(y, x), xy = magma(x, y);
      for (Element z = 0; z < m; ++z)
        if (magma(magma(z, x), yx) != magma(magma(z, y), xy)) return false;
    }
  return true;
}

namespace detail {

inline bool is_bijection(std::span<const Element> image, std::size_t universe) {
  std::vector<char> seen(universe, 0);
  for (Element v : image) {
    if (v >= universe || seen[v]) return false;
    seen[v] = 1;
  }
  return image.size() == universe;
}

}  // namespace detail

inline StructureReport structure_report(const FiniteMagma& magma) {
  const auto m = magma.size();
  StructureReport r;
  r.right_quasigroup = magma.is_right_quasigroup();
  r.left_quasigroup = true;
  for (Element x = 0; x < m && r.left_quasigroup; ++x)
    r.left_quasigroup = detail::is_bijection(magma.table().subspan(x * m, m), m);
  r.latin = r.right_quasigroup && r.left_quasigroup;
  r.rump = is_rump(magma);

  bool distributive = true;
  for (Element a = 0; a < m && distributive; ++a)
    for (Element b = 0; b < m && distributive; ++b)
      for (Element c = 0; c < m && distributive; ++c)
        distributive = magma(magma(a, b), c) == magma(magma(a, c), magma(b, c));
  r.rack = r.right_quasigroup && distributive;
  bool idempotent = true;
  for (Element a = 0; a < m; ++a) idempotent = idempotent && magma.square(a) == a;
  r.quandle = r.rack && idempotent;

  std::vector<Element> squares(m);
  for (Element x = 0; x < m; ++x) squares[x] = magma.square(x);
  r.uniquely_2_divisible = detail::is_bijection(squares, m);

  std::vector<Element> delta(m * m);
  for (Element x = 0; x < m; ++x)
    for (Element y = 0; y < m; ++y) delta[x * m + y] = static_cast<Element>(magma(x, y) * m + magma(y, x));
  r.delta_bijective = detail::is_bijection(delta, m * m);
  return r;
}

}  // namespace ybh
