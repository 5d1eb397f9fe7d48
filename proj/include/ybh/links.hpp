#pragma once

// Braid closures colored by a Rump right quasigroup and the 2-cocycle
// state-sum invariant Phi(L) in the group ring Z[Z_m].

#include <cctype>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ybh/homology.hpp"

namespace ybh {

/// Letters e = +i (sigma_i) or -i (sigma_i^{-1}), read top to bottom.
struct BraidWord {
  std::size_t strands = 1;
  std::vector<int> letters;

  friend bool operator==(const BraidWord&, const BraidWord&) = default;
};

inline std::string to_string(const BraidWord& b) {
  std::ostringstream os;
  for (std::size_t i = 0; i < b.letters.size(); ++i) os << (i ? " " : "") << b.letters[i];
  return os.str();
}

/// Whitespace-separated nonzero integers; strands defaults to 1 + max |e|.
inline BraidWord parse_braid(std::string_view text, std::optional<std::size_t> strands = std::nullopt) {
  BraidWord b;
  std::istringstream in{std::string(text)};
  std::string tok;
  std::size_t widest = 0;
  while (in >> tok) {
    std::size_t used = 0;
    long long e = 0;
    try {
      e = std::stoll(tok, &used);
    } catch (const std::exception&) {
      throw ParseError("bad braid letter '" + tok + "'");
    }
    if (used != tok.size()) throw ParseError("bad braid letter '" + tok + "'");
    if (e == 0) throw ParseError("braid letter 0 is not a generator");
    if (e > 4096 || e < -4096) throw ParseError("braid letter '" + tok + "' out of range");
    widest = std::max<std::size_t>(widest, static_cast<std::size_t>(e < 0 ? -e : e));
    b.letters.push_back(static_cast<int>(e));
  }
  if (strands) {
    if (*strands == 0) throw ParseError("a braid needs at least one strand");
    if (widest >= *strands)
      throw ParseError("letter " + std::to_string(widest) + " needs at least " + std::to_string(widest + 1) + " strands");
    b.strands = *strands;
  } else {
    b.strands = widest + 1;
  }
  return b;
}

/// w^{-1}: reversed word with inverted letters.
inline BraidWord inverse(const BraidWord& b) {
  BraidWord r{b.strands, {}};
  for (auto it = b.letters.rbegin(); it != b.letters.rend(); ++it) r.letters.push_back(-*it);
  return r;
}

inline BraidWord concat(const BraidWord& a, const BraidWord& b) {
  BraidWord r{std::max(a.strands, b.strands), a.letters};
  r.letters.insert(r.letters.end(), b.letters.begin(), b.letters.end());
  return r;
}

struct WeightTerm {
  int sign;
  Element x, y;

  friend bool operator==(const WeightTerm&, const WeightTerm&) = default;
};

struct Propagation {
  std::vector<Element> bottom;
  std::vector<WeightTerm> terms;
};

/// Push the colors `top` down through the braid. A positive crossing at
/// (a, b) records (+1, (a, b)); a negative one records (-1, R(a, b)); both
/// replace (a, b) by R(a, b).
inline Propagation propagate(const YBMap& R, const BraidWord& b, std::span<const Element> top) {
  if (top.size() != b.strands) throw StructureError("top coloring has the wrong number of strands");
  Propagation p{{top.begin(), top.end()}, {}};
  p.terms.reserve(b.letters.size());
  for (int e : b.letters) {
    const std::size_t i = static_cast<std::size_t>(e < 0 ? -e : e) - 1;
    if (i + 1 >= b.strands) throw StructureError("braid letter exceeds the strand count");
    const Element a0 = p.bottom[i], b0 = p.bottom[i + 1];
    R.apply_at(p.bottom, i);
    if (e > 0) p.terms.push_back({+1, a0, b0});
    else p.terms.push_back({-1, p.bottom[i], p.bottom[i + 1]});
  }
  return p;
}

inline Propagation propagate(const FiniteMagma& magma, const BraidWord& b, std::span<const Element> top) {
  return propagate(from_rump(magma), b, top);
}

/// Multiset of Z_m values: counts[v] colorings have Boltzmann weight v.
struct GroupRingElement {
  std::uint64_t modulus = 2;
  std::map<std::uint64_t, std::uint64_t> counts;

  std::uint64_t total() const {
    std::uint64_t s = 0;
    for (const auto& [v, c] : counts) s += c;
    return s;
  }

  friend bool operator==(const GroupRingElement&, const GroupRingElement&) = default;
};

/// `8(0)+8(1)`, ascending values, zero counts omitted; `0` if empty.
inline std::string to_string(const GroupRingElement& g) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : g.counts) {
    if (c == 0) continue;
    os << (first ? "" : "+") << c << '(' << v << ')';
    first = false;
  }
  return first ? "0" : os.str();
}

inline GroupRingElement parse_group_ring_element(std::string_view text, std::uint64_t modulus) {
  GroupRingElement g{modulus, {}};
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s == "0") return g;
  std::size_t pos = 0;
  auto number = [&] {
    const std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start || pos - start > 18) throw ParseError("bad group ring element '" + std::string(text) + "'");
    return std::stoull(s.substr(start, pos - start));
  };
  auto expect = [&](char c) {
    if (pos >= s.size() || s[pos] != c) throw ParseError("bad group ring element '" + std::string(text) + "'");
    ++pos;
  };
  while (true) {
    const auto c = number();
    expect('(');
    const auto v = number();
    expect(')');
    if (v >= modulus) throw ParseError("group ring value out of range 0..m-1");
    g.counts[v] += c;
    if (pos == s.size()) break;
    expect('+');
  }
  std::erase_if(g.counts, [](const auto& kv) { return kv.second == 0; });
  return g;
}

struct InvariantOptions {
  /// Refuse phi unless it is a normalized 2-cocycle.
  bool verify_cocycle = true;
  /// Enumerate more than 2^20 top colorings.
  bool force = false;
  unsigned jobs = 1;
};

inline constexpr std::size_t kColoringCap = std::size_t{1} << 20;

namespace detail {

inline std::size_t coloring_space(std::size_t m, const BraidWord& b, bool force) {
  const auto space = checked_pow(m, b.strands);
  if (space == std::numeric_limits<std::size_t>::max() || (!force && space > kColoringCap))
    throw ResourceLimitError("braid has " + std::to_string(m) + "^" + std::to_string(b.strands) +
                             " candidate colorings, above the cap of 2^20 (use --force)");
  return space;
}

// Calls fn(top, propagation) for every valid coloring, split over workers.
template <class Fn>
void for_each_coloring(const YBMap& R, const BraidWord& b, bool force, unsigned jobs, Fn&& fn) {
  const auto m = R.size();
  const auto space = coloring_space(m, b, force);
  parallel_ranges(space, std::max(1u, jobs), [&](std::size_t begin, std::size_t end, unsigned w) {
    std::vector<Element> top(b.strands);
    for (std::size_t r = begin; r < end; ++r) {
      std::size_t x = r;
      for (std::size_t i = b.strands; i-- > 0;) {
        top[i] = static_cast<Element>(x % m);
        x /= m;
      }
      auto p = propagate(R, b, top);
      if (p.bottom == top) fn(w, top, p);
    }
  });
}

}  // namespace detail

/// All top colorings fixed by propagation through the braid, in ascending order.
inline std::vector<std::vector<Element>> colorings(const FiniteMagma& magma, const BraidWord& b, bool force = false) {
  const auto R = from_rump(magma);
  std::vector<std::vector<Element>> out;
  detail::for_each_coloring(R, b, force, 1, [&](unsigned, const std::vector<Element>& top, const Propagation&) {
    out.push_back(top);
  });
  return out;
}

/// Sum over colorings of sum_tau sign * phi(x, y) in Z_m, tallied. Throws
/// StructureError if phi is not a normalized 2-cocycle (unless disabled).
inline GroupRingElement invariant(const FiniteMagma& magma, const CocycleTable& phi, const BraidWord& b,
                                  InvariantOptions options = {}) {
  const auto R = from_rump(magma);
  if (phi.size != magma.size()) throw StructureError("cocycle table size does not match the magma");
  if (options.verify_cocycle) {
    if (auto why = cocycle_defect(ChainComplex(R), phi)) throw StructureError("not a normalized 2-cocycle: " + *why);
  }
  const auto m = phi.modulus;
  const unsigned workers = std::max(1u, options.jobs);
  std::vector<std::map<std::uint64_t, std::uint64_t>> tallies(workers);
  detail::for_each_coloring(R, b, options.force, workers,
                            [&](unsigned w, const std::vector<Element>&, const Propagation& p) {
                              std::uint64_t s = 0;
                              for (const auto& t : p.terms) {
                                const auto v = phi(t.x, t.y) % m;
                                s = t.sign > 0 ? (s + v) % m : (s + m - v) % m;
                              }
                              ++tallies[w][s];
                            });
  GroupRingElement g{m, {}};
  for (const auto& t : tallies)
    for (const auto& [v, c] : t) g.counts[v] += c;
  return g;
}

struct MarkovReport {
  bool passed = true;
  GroupRingElement reference;
  std::size_t moves_checked = 0;
  /// "move: braid -> Phi" lines for every move that changed Phi.
  std::vector<std::string> counterexamples;
};

/// Compare Phi(b) with Phi of `trials` random conjugates u w u^{-1} and of
/// the stabilizations w sigma_k^{+-1} on k+1 strands. phi is used as given.
inline MarkovReport markov_check(const FiniteMagma& magma, const CocycleTable& phi, const BraidWord& b,
                                 std::size_t trials, std::uint64_t seed = 1, InvariantOptions options = {}) {
  options.verify_cocycle = false;
  MarkovReport rep;
  rep.reference = invariant(magma, phi, b, options);
  auto compare = [&](const std::string& move, const BraidWord& w) {
    const auto g = invariant(magma, phi, w, options);
    ++rep.moves_checked;
    if (g != rep.reference) {
      rep.passed = false;
      rep.counterexamples.push_back(move + ": [" + to_string(w) + "] on " + std::to_string(w.strands) +
                                    " strands -> " + to_string(g) + " (expected " + to_string(rep.reference) + ")");
    }
  };

  std::mt19937_64 rng(seed);
  if (b.strands >= 2) {
    std::uniform_int_distribution<int> gen(1, static_cast<int>(b.strands) - 1), len(1, 3), sign(0, 1);
    for (std::size_t t = 0; t < trials; ++t) {
      BraidWord u{b.strands, {}};
      for (int l = len(rng); l > 0; --l) u.letters.push_back(sign(rng) ? gen(rng) : -gen(rng));
      compare("conjugation", concat(concat(u, b), inverse(u)));
    }
  }
  for (int s : {+1, -1}) {
    BraidWord w{b.strands + 1, b.letters};
    w.letters.push_back(s * static_cast<int>(b.strands));
    compare(s > 0 ? "positive stabilization" : "negative stabilization", w);
  }
  return rep;
}

}  // namespace ybh
