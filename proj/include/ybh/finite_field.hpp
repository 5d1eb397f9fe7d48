#pragma once

// Small finite fields F_q, q <= 9, in polynomial representation over a fixed
// primitive polynomial per (p, k).

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ybh/common.hpp"

namespace ybh {

/// An element of F_{p^k}: coordinates c_0 + c_1 u + ... + c_{k-1} u^{k-1}.
struct FieldElement {
  std::uint8_t p = 2;
  std::uint8_t k = 1;
  std::array<std::uint8_t, 3> coords{};

  friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

namespace detail {

struct FieldSpec {
  unsigned q, p, k;
  // Reduction rule u^k = sum reduction[i] u^i.
  std::array<std::uint8_t, 3> reduction;
};

// u^2 = u + 1 over F_2; u^3 = u + 1 over F_2; u^2 = u + 1 over F_3.
inline constexpr std::array<FieldSpec, 7> kFieldSpecs{{
    {2, 2, 1, {0, 0, 0}},
    {3, 3, 1, {0, 0, 0}},
    {4, 2, 2, {1, 1, 0}},
    {5, 5, 1, {0, 0, 0}},
    {7, 7, 1, {0, 0, 0}},
    {8, 2, 3, {1, 1, 0}},
    {9, 3, 2, {1, 1, 0}},
}};

inline const FieldSpec* find_field_spec(unsigned p, unsigned k) {
  for (const auto& s : kFieldSpecs)
    if (s.p == p && s.k == k) return &s;
  return nullptr;
}

inline const FieldSpec& require_field_spec(unsigned p, unsigned k) {
  const auto* s = find_field_spec(p, k);
  if (s == nullptr)
    throw StructureError("unsupported finite field of characteristic " + std::to_string(p) +
                         " and degree " + std::to_string(k));
  return *s;
}

inline void check_compatible(const FieldElement& a, const FieldElement& b) {
  if (a.p != b.p || a.k != b.k) throw StructureError("field elements from different fields");
}

}  // namespace detail

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  detail::check_compatible(a, b);
  FieldElement out{a.p, a.k, {}};
  for (unsigned i = 0; i < a.k; ++i) out.coords[i] = static_cast<std::uint8_t>((a.coords[i] + b.coords[i]) % a.p);
  return out;
}

inline FieldElement operator-(const FieldElement& a) {
  FieldElement out{a.p, a.k, {}};
  for (unsigned i = 0; i < a.k; ++i) out.coords[i] = static_cast<std::uint8_t>((a.p - a.coords[i]) % a.p);
  return out;
}

inline FieldElement operator-(const FieldElement& a, const FieldElement& b) { return a + (-b); }

inline FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  detail::check_compatible(a, b);
  const auto& spec = detail::require_field_spec(a.p, a.k);
  const unsigned p = a.p, k = a.k;
  std::array<unsigned, 5> prod{};
  for (unsigned i = 0; i < k; ++i)
    for (unsigned j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + a.coords[i] * b.coords[j]) % p;
  // Fold degrees >= k using u^k = reduction(u), highest first.
  for (unsigned d = 2 * k - 2; d >= k && d < prod.size(); --d) {
    const unsigned c = prod[d];
    if (c == 0) continue;
    prod[d] = 0;
    for (unsigned i = 0; i < k; ++i) prod[d - k + i] = (prod[d - k + i] + c * spec.reduction[i]) % p;
  }
  FieldElement out{a.p, a.k, {}};
  for (unsigned i = 0; i < k; ++i) out.coords[i] = static_cast<std::uint8_t>(prod[i]);
  return out;
}

/// The field F_q with the element <-> digit convention used for Cayley-table
/// indexing: for prime q the digit is the residue, otherwise 0 -> 0 and
/// u^j -> j + 1 for the primitive element u.
class GaloisField {
 public:
  explicit GaloisField(unsigned q) {
    const detail::FieldSpec* spec = nullptr;
    for (const auto& s : detail::kFieldSpecs)
      if (s.q == q) spec = &s;
    if (spec == nullptr) throw StructureError("unsupported field order q=" + std::to_string(q) + " (need q <= 9)");
    q_ = spec->q;
    p_ = spec->p;
    k_ = spec->k;
    by_digit_.resize(q_);
    if (k_ == 1) {
      for (unsigned d = 0; d < q_; ++d) by_digit_[d] = FieldElement{static_cast<std::uint8_t>(p_), 1, {static_cast<std::uint8_t>(d), 0, 0}};
    } else {
      by_digit_[0] = zero();
      FieldElement power = one();
      for (unsigned d = 1; d < q_; ++d) {
        by_digit_[d] = power;
        power = power * generator();
      }
      if (power != one()) throw StructureError("fixed polynomial is not primitive");
    }
  }

  unsigned order() const { return q_; }
  unsigned characteristic() const { return p_; }
  unsigned degree() const { return k_; }

  FieldElement zero() const { return FieldElement{static_cast<std::uint8_t>(p_), static_cast<std::uint8_t>(k_), {}}; }
  FieldElement one() const {
    auto e = zero();
    e.coords[0] = 1;
    return e;
  }
  /// Primitive element u: the class of x for extension fields, the smallest
  /// primitive root for prime fields.
  FieldElement generator() const {
    auto e = zero();
    if (k_ > 1) {
      e.coords[1] = 1;
      return e;
    }
    for (unsigned g = 1; g < p_; ++g) {
      unsigned x = 1, ord = 0;
      do {
        x = x * g % p_;
        ++ord;
      } while (x != 1);
      if (ord == p_ - 1) {
        e.coords[0] = static_cast<std::uint8_t>(g);
        return e;
      }
    }
    return one();
  }

  FieldElement element(unsigned digit) const { return by_digit_.at(digit); }

  unsigned digit(const FieldElement& e) const {
    for (unsigned d = 0; d < q_; ++d)
      if (by_digit_[d] == e) return d;
    throw StructureError("element does not belong to this field");
  }

  /// u^j; j may exceed q - 2.
  FieldElement power_of_generator(unsigned j) const {
    FieldElement out = one();
    for (unsigned i = 0; i < j; ++i) out = out * generator();
    return out;
  }

  const std::vector<FieldElement>& elements() const { return by_digit_; }

 private:
  unsigned q_ = 0, p_ = 0, k_ = 0;
  std::vector<FieldElement> by_digit_;
};

}  // namespace ybh
