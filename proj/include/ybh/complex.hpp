#pragma once

// The set-theoretic Yang-Baxter chain complex of a solution R, its degenerate
// subcomplex (Rump case) and the normalized quotient, as sparse integer
// matrices over tuple bases.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ybh/algebra.hpp"
#include "ybh/solution.hpp"
#include "ybh/sparse_matrix.hpp"

namespace ybh {

enum class Theory { YB, DEG, NYB };

inline std::string_view to_string(Theory t) {
  switch (t) {
    case Theory::YB: return "yb";
    case Theory::DEG: return "d";
    case Theory::NYB: return "nyb";
  }
  return "?";
}

inline Theory parse_theory(std::string_view s) {
  if (s == "yb" || s == "YB") return Theory::YB;
  if (s == "d" || s == "D" || s == "deg" || s == "DEG") return Theory::DEG;
  if (s == "nyb" || s == "NYB") return Theory::NYB;
  throw ParseError("unknown theory '" + std::string(s) + "' (expected yb, d or nyb)");
}

/// n-tuples over {0..m-1}, ranked big-endian, with per-tuple degeneracy bits
/// when squares are known: t is degenerate iff t_i = t_{i+1} t_{i+1} for some i.
class TupleBasis {
 public:
  TupleBasis(std::size_t m, std::size_t n, const std::vector<Element>* squares)
      : m_(m), n_(n), size_(checked_pow(m, n)) {
    if (size_ > (std::size_t{1} << 31)) throw ResourceLimitError("tuple basis too large");
    if (squares == nullptr) return;
    degenerate_.assign(size_, 0);
    local_.assign(size_, 0);
    std::vector<Element> t(n);
    for (std::size_t g = 0; g < size_; ++g) {
      unrank(g, t);
      bool deg = false;
      for (std::size_t i = 0; i + 1 < n && !deg; ++i) deg = t[i] == (*squares)[t[i + 1]];
      degenerate_[g] = deg;
      auto& list = deg ? degenerate_list_ : nondegenerate_list_;
      local_[g] = static_cast<std::uint32_t>(list.size());
      list.push_back(static_cast<std::uint32_t>(g));
    }
  }

  std::size_t m() const { return m_; }
  std::size_t degree() const { return n_; }
  std::size_t size() const { return size_; }
  bool has_degeneracy() const { return !degenerate_.empty(); }

  std::size_t rank(std::span<const Element> t) const {
    std::size_t r = 0;
    for (Element x : t) r = r * m_ + x;
    return r;
  }

  void unrank(std::size_t r, std::span<Element> t) const {
    for (std::size_t i = n_; i-- > 0;) {
      t[i] = static_cast<Element>(r % m_);
      r /= m_;
    }
  }

  bool degenerate(std::size_t g) const { return degenerate_[g] != 0; }

  /// Number of basis tuples of the chain group in the given theory.
  std::size_t count(Theory theory) const {
    switch (theory) {
      case Theory::YB: return size_;
      case Theory::DEG: return degenerate_list_.size();
      case Theory::NYB: return nondegenerate_list_.size();
    }
    return 0;
  }

  /// Global tuple rank of the j-th basis element of the theory.
  std::size_t global(Theory theory, std::size_t j) const {
    switch (theory) {
      case Theory::YB: return j;
      case Theory::DEG: return degenerate_list_[j];
      case Theory::NYB: return nondegenerate_list_[j];
    }
    return j;
  }

  /// Index within the theory's basis, or nullopt if g is not in it.
  std::optional<std::size_t> local(Theory theory, std::size_t g) const {
    if (theory == Theory::YB) return g;
    const bool deg = degenerate(g);
    if ((theory == Theory::DEG) != deg) return std::nullopt;
    return local_[g];
  }

 private:
  std::size_t m_, n_, size_;
  std::vector<char> degenerate_;
  std::vector<std::uint32_t> local_;
  std::vector<std::uint32_t> degenerate_list_, nondegenerate_list_;
};

namespace detail {

inline void check_face_index(std::size_t i, std::size_t n) {
  if (n == 0 || i < 1 || i > n)
    throw StructureError("face index " + std::to_string(i) + " out of range 1.." + std::to_string(n));
}

// Writes d^l_i(t) into out (size n-1); scratch has size n.
inline void face_l_into(const YBMap& R, std::size_t i, std::span<const Element> t, std::span<Element> scratch,
                        std::span<Element> out) {
  std::copy(t.begin(), t.end(), scratch.begin());
  for (std::size_t p = i - 1; p >= 1; --p) R.apply_at(scratch, p - 1);
  std::copy(scratch.begin() + 1, scratch.end(), out.begin());
}

inline void face_r_into(const YBMap& R, std::size_t i, std::span<const Element> t, std::span<Element> scratch,
                        std::span<Element> out) {
  const std::size_t n = t.size();
  std::copy(t.begin(), t.end(), scratch.begin());
  for (std::size_t p = i; p < n; ++p) R.apply_at(scratch, p - 1);
  std::copy(scratch.begin(), scratch.end() - 1, out.begin());
}

}  // namespace detail

/// Left face d^l_i (1-based i): push the i-th strand to the front through
/// R at (i-1, i), ..., (1, 2), then drop the first coordinate.
inline std::vector<Element> face_l(const YBMap& R, std::size_t i, std::span<const Element> t) {
  detail::check_face_index(i, t.size());
  std::vector<Element> scratch(t.size()), out(t.size() - 1);
  detail::face_l_into(R, i, t, scratch, out);
  return out;
}

/// Right face d^r_i: push the i-th strand to the back through R at
/// (i, i+1), ..., (n-1, n), then drop the last coordinate.
inline std::vector<Element> face_r(const YBMap& R, std::size_t i, std::span<const Element> t) {
  detail::check_face_index(i, t.size());
  std::vector<Element> scratch(t.size()), out(t.size() - 1);
  detail::face_r_into(R, i, t, scratch, out);
  return out;
}

/// Sparse integer chain: (tuple rank, coefficient), sorted by rank, no zeros.
using Chain = std::vector<SparseEntry<std::int64_t>>;

/// Chain-level operations on the Yang-Baxter complex of one solution.
/// Tuple bases are built lazily and shared between threads.
class ChainComplex {
 public:
  explicit ChainComplex(YBMap solution, unsigned jobs = 1) : R_(std::move(solution)), jobs_(jobs) {
    const auto rep = verify(R_);
    if (rep.right_nondegenerate) {
      auto magma = to_rump(R_);
      if (ybh::is_rump(magma) && from_rump(magma) == R_) {
        squares_.resize(R_.size());
        for (Element x = 0; x < R_.size(); ++x) squares_[x] = magma.square(x);
        magma_ = std::move(magma);
      }
    }
  }

  const YBMap& solution() const { return R_; }
  std::size_t carrier_size() const { return R_.size(); }
  /// True iff the solution comes from a Rump right quasigroup (degeneracies defined).
  bool is_rump() const { return magma_.has_value(); }
  const std::optional<FiniteMagma>& magma() const { return magma_; }
  unsigned jobs() const { return jobs_; }

  const TupleBasis& basis(std::size_t n) const {
    std::lock_guard lock(mutex_);
    auto& slot = bases_[n];
    if (!slot) slot = std::make_shared<TupleBasis>(R_.size(), n, magma_ ? &squares_ : nullptr);
    return *slot;
  }

  /// Rank of C_n in the theory; C_0 = 0 and C_1^D = 0.
  std::size_t chain_rank(std::size_t n, Theory theory) const {
    if (n == 0) return 0;
    require_theory(theory);
    return basis(n).count(theory);
  }

  /// YB boundary of one basis tuple as a chain on (n-1)-tuples.
  Chain boundary_of(std::span<const Element> t) const {
    const std::size_t n = t.size();
    Chain out;
    if (n <= 1) return out;
    std::vector<Element> scratch(n), face(n - 1);
    out.reserve(2 * n);
    const auto rank = [&] {
      std::size_t r = 0;
      for (Element x : face) r = r * R_.size() + x;
      return static_cast<std::uint32_t>(r);
    };
    for (std::size_t i = 1; i <= n; ++i) {
      const std::int64_t sign = (i % 2 == 1) ? 1 : -1;
      detail::face_l_into(R_, i, t, scratch, face);
      out.push_back({rank(), sign});
      detail::face_r_into(R_, i, t, scratch, face);
      out.push_back({rank(), -sign});
    }
    normalize_entries(out);
    return out;
  }

  /// The boundary map C_n -> C_{n-1} in the given theory, columns and rows
  /// indexed by the theory's basis order (ascending tuple rank).
  SparseIntMatrix boundary(std::size_t n, Theory theory) const {
    if (n == 0) throw StructureError("boundary degree must be >= 1");
    require_theory(theory);
    const auto& src = basis(n);
    const std::size_t cols = src.count(theory);
    if (n == 1) return SparseIntMatrix(0, cols);
    const auto& dst = basis(n - 1);
    const std::size_t rows = chain_rank(n - 1, theory);

    const unsigned workers = std::max(1u, jobs_);
    std::vector<SparseIntMatrix> blocks(workers);
    parallel_ranges(cols, workers, [&](std::size_t begin, std::size_t end, unsigned w) {
      std::vector<std::vector<SparseEntry<std::int64_t>>> columns(end - begin);
      std::vector<Element> t(n);
      for (std::size_t j = begin; j < end; ++j) {
        const std::size_t g = src.global(theory, j);
        src.unrank(g, t);
        auto& col = columns[j - begin];
        for (const auto& e : boundary_of(t)) {
          const auto row = dst.local(theory, e.row);
          if (!row) {
            if (theory == Theory::DEG) throw StructureError("degenerate chains are not closed under the boundary");
            continue;  // quotient: degenerate targets vanish
          }
          col.push_back({static_cast<std::uint32_t>(*row), e.value});
        }
      }
      blocks[w] = SparseIntMatrix::from_columns(rows, std::move(columns));
    });
    std::erase_if(blocks, [](const SparseIntMatrix& b) { return b.cols() == 0 && b.rows() == 0; });
    return SparseIntMatrix::concat_columns(rows, std::move(blocks));
  }

 private:
  void require_theory(Theory theory) const {
    if (theory != Theory::YB && !is_rump())
      throw StructureError("degenerate and normalized theories need a solution coming from a Rump right quasigroup");
  }

  YBMap R_;
  unsigned jobs_;
  std::optional<FiniteMagma> magma_;
  std::vector<Element> squares_;
  mutable std::mutex mutex_;
  mutable std::map<std::size_t, std::shared_ptr<TupleBasis>> bases_;
};

inline SparseIntMatrix boundary_matrix(const YBMap& R, std::size_t n, Theory theory) {
  return ChainComplex(R).boundary(n, theory);
}

/// t has an adjacent pair (a a, a).
inline bool is_degenerate_tuple(const FiniteMagma& magma, std::span<const Element> t) {
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    if (t[i] == magma.square(t[i + 1])) return true;
  return false;
}

/// A formal integer combination of n-tuples; tuples are distinct.
struct SignedTupleSum {
  std::size_t degree = 0;
  std::vector<std::pair<std::int64_t, std::vector<Element>>> terms;

  friend bool operator==(const SignedTupleSum&, const SignedTupleSum&) = default;
};

inline void normalize(SignedTupleSum& s) {
  std::map<std::vector<Element>, std::int64_t> acc;
  for (auto& [c, t] : s.terms) acc[t] += c;
  s.terms.clear();
  for (auto& [t, c] : acc)
    if (c != 0) s.terms.emplace_back(c, t);
}

/// kappa(x_1..x_n) = (x_1 - x_2 x_2) (x)(x_2 - x_3 x_3) (x) ... (x)(x_{n-1} - x_n x_n) (x) x_n.
inline SignedTupleSum kappa(const FiniteMagma& magma, std::span<const Element> t) {
  const std::size_t n = t.size();
  SignedTupleSum out{n, {}};
  if (n == 0) return out;
  const std::size_t subsets = std::size_t{1} << (n - 1);
  for (std::size_t s = 0; s < subsets; ++s) {
    std::vector<Element> term(t.begin(), t.end());
    std::int64_t sign = 1;
    for (std::size_t j = 0; j + 1 < n; ++j)
      if (s >> j & 1) {
        term[j] = magma.square(t[j + 1]);
        sign = -sign;
      }
    out.terms.emplace_back(sign, std::move(term));
  }
  normalize(out);
  return out;
}

/// kappa extended linearly.
inline SignedTupleSum kappa(const FiniteMagma& magma, const SignedTupleSum& chain) {
  SignedTupleSum out{chain.degree, {}};
  for (const auto& [c, t] : chain.terms)
    for (auto& [c2, t2] : kappa(magma, t).terms) out.terms.emplace_back(c * c2, std::move(t2));
  normalize(out);
  return out;
}

/// x * y = f(x) for an m-cycle f (isomorphic to the cyclic rack C_m).
inline bool is_cyclic_rack(const FiniteMagma& magma) {
  const auto m = magma.size();
  for (Element x = 0; x < m; ++x)
    for (Element y = 1; y < m; ++y)
      if (magma(x, y) != magma(x, 0)) return false;
  Element x = 0;
  for (std::size_t k = 1; k <= m; ++k) {
    x = magma(x, 0);
    if (x == 0) return k == m;
  }
  return false;
}

inline std::string format_tuple(std::span<const Element> t) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
  os << ')';
  return os.str();
}

struct ComplexReport {
  std::vector<Check> checks;
  bool passed() const {
    for (const auto& c : checks)
      if (c.asserted && !c.passed) return false;
    return true;
  }
};

namespace detail {

/// A * B for sparse matrices, returns the first nonzero column of the product or nullopt.
inline std::optional<std::size_t> first_nonzero_product_column(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  std::vector<std::int64_t> acc(a.rows(), 0);
  std::vector<std::uint32_t> touched;
  for (std::size_t j = 0; j < b.cols(); ++j) {
    touched.clear();
    for (const auto& e : b.column(j))
      for (const auto& f : a.column(e.row)) {
        acc[f.row] += e.value * f.value;
        touched.push_back(f.row);
      }
    bool zero = true;
    for (auto r : touched) {
      if (acc[r] != 0) zero = false;
      acc[r] = 0;
    }
    if (!zero) return j;
  }
  return std::nullopt;
}

inline Chain chain_from_sum(const TupleBasis& basis, const SignedTupleSum& s) {
  Chain c;
  for (const auto& [coef, t] : s.terms) c.push_back({static_cast<std::uint32_t>(basis.rank(t)), coef});
  normalize_entries(c);
  return c;
}

inline SignedTupleSum sum_from_chain(const TupleBasis& basis, const Chain& c) {
  SignedTupleSum s{basis.degree(), {}};
  std::vector<Element> t(basis.degree());
  for (const auto& e : c) {
    basis.unrank(e.row, t);
    s.terms.emplace_back(e.value, t);
  }
  return s;
}

}  // namespace detail

/// Verify the chain complex structure up to degree n_max: d d = 0 for every
/// available theory, closure of the degenerate subcomplex, and the kappa
/// chain-map identity (asserted for cyclic racks, reported otherwise).
inline ComplexReport verify_complex(const ChainComplex& cx, std::size_t n_max) {
  if (n_max < 2) throw StructureError("verify_complex needs n_max >= 2");
  ComplexReport report;
  std::vector<Theory> theories{Theory::YB};
  if (cx.is_rump()) {
    theories.push_back(Theory::DEG);
    theories.push_back(Theory::NYB);
  }

  for (auto theory : theories) {
    for (std::size_t n = 2; n <= n_max; ++n) {
      Check c{"boundary_squared_zero[" + std::string(to_string(theory)) + "]", n};
      const auto outer = cx.boundary(n - 1, theory);
      const auto inner = cx.boundary(n, theory);
      if (auto j = detail::first_nonzero_product_column(outer, inner)) {
        c.passed = false;
        std::vector<Element> t(n);
        cx.basis(n).unrank(cx.basis(n).global(theory, *j), t);
        c.counterexample = format_tuple(t);
      }
      report.checks.push_back(std::move(c));
    }
  }
  if (!cx.is_rump()) return report;

  const auto& magma = *cx.magma();
  for (std::size_t n = 2; n <= n_max; ++n) {
    Check c{"degenerate_closure", n};
    const auto& src = cx.basis(n);
    const auto& dst = cx.basis(n - 1);
    std::vector<Element> t(n);
    for (std::size_t j = 0; j < src.count(Theory::DEG) && c.passed; ++j) {
      src.unrank(src.global(Theory::DEG, j), t);
      for (const auto& e : cx.boundary_of(t))
        if (!dst.degenerate(e.row)) {
          c.passed = false;
          c.counterexample = format_tuple(t);
          break;
        }
    }
    report.checks.push_back(std::move(c));
  }

  const bool cyclic = is_cyclic_rack(magma);
  for (std::size_t n = 2; n <= n_max; ++n) {
    Check c{"kappa_chain_map", n, cyclic};
    const auto& src = cx.basis(n);
    const auto& dst = cx.basis(n - 1);
    std::vector<Element> t(n);
    for (std::size_t g = 0; g < src.size() && c.passed; ++g) {
      src.unrank(g, t);
      // d(kappa(t))
      Chain lhs;
      for (const auto& [coef, term] : kappa(magma, t).terms)
        for (const auto& e : cx.boundary_of(term)) lhs.push_back({e.row, coef * e.value});
      normalize_entries(lhs);
      // kappa(d(t))
      const auto rhs = detail::chain_from_sum(dst, kappa(magma, detail::sum_from_chain(dst, cx.boundary_of(t))));
      if (lhs != rhs) {
        c.passed = false;
        c.counterexample = format_tuple(t);
      }
    }
    report.checks.push_back(std::move(c));
  }
  return report;
}

inline ComplexReport verify_complex(const YBMap& R, std::size_t n_max) { return verify_complex(ChainComplex(R), n_max); }

}  // namespace ybh
