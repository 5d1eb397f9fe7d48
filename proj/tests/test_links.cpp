#include <catch_amalgamated.hpp>

#include <random>

#include "ybh/homology.hpp"
#include "ybh/json.hpp"
#include "ybh/links.hpp"

using namespace ybh;

namespace {

BraidWord power_of_sigma1(std::size_t e) { return BraidWord{2, std::vector<int>(e, 1)}; }

GroupRingElement R2(std::string_view s, std::uint64_t m = 2) { return parse_group_ring_element(s, m); }

CocycleTable first_coordinate_mod2(std::size_t m) {
  auto phi = CocycleTable::zero(m, 2);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y) phi.values[x * m + y] = x % 2;
  return phi;
}

BraidWord random_braid(std::mt19937_64& rng, std::size_t max_strands, std::size_t max_length) {
  const std::size_t k = 1 + rng() % max_strands;
  BraidWord b{k, {}};
  if (k == 1) return b;
  const std::size_t len = rng() % (max_length + 1);
  for (std::size_t i = 0; i < len; ++i) {
    const int g = 1 + static_cast<int>(rng() % (k - 1));
    b.letters.push_back(rng() % 2 ? g : -g);
  }
  return b;
}

}  // namespace

TEST_CASE("braid words", "[links][io]") {
  const auto b = parse_braid("1 -2 3");
  CHECK(b.strands == 4);
  CHECK(b.letters == std::vector<int>{1, -2, 3});
  CHECK(to_string(b) == "1 -2 3");
  CHECK(parse_braid("", 3) == BraidWord{3, {}});
  CHECK(parse_braid("").strands == 1);
  CHECK(parse_braid("1", 5).strands == 5);
  CHECK(inverse(b) == BraidWord{4, {-3, 2, -1}});
  CHECK(concat(parse_braid("1"), parse_braid("2")) == BraidWord{3, {1, 2}});
  for (const char* bad : {"0", "1 x", "1.5", "2a", "99999"}) CHECK_THROWS_AS(parse_braid(bad), ParseError);
  CHECK_THROWS_AS(parse_braid("2", 2), ParseError);
  CHECK_THROWS_AS(parse_braid("", 0), ParseError);
}

TEST_CASE("propagation through single crossings", "[links]") {
  // C_4: R(x, y) = (y + 1, x - 1).
  const auto c4 = cyclic_rack(4);
  const std::vector<Element> top{0, 2};
  const auto pos = propagate(c4, parse_braid("1"), top);
  CHECK(pos.bottom == std::vector<Element>{3, 3});
  REQUIRE(pos.terms.size() == 1);
  CHECK(pos.terms[0] == WeightTerm{+1, 0, 2});
  const auto neg = propagate(c4, parse_braid("-1"), top);
  CHECK(neg.bottom == std::vector<Element>{3, 3});
  CHECK(neg.terms[0] == WeightTerm{-1, 3, 3});
  CHECK_THROWS_AS(propagate(c4, parse_braid("1"), std::vector<Element>{0}), StructureError);
}

TEST_CASE("a word followed by its inverse propagates to the identity", "[links][property]") {
  std::mt19937_64 rng(5);
  for (const auto& a : {cyclic_rack(4), affine_x4(), dihedral_quandle(4)}) {
    const auto R = from_rump(a);
    for (int trial = 0; trial < 50; ++trial) {
      const auto b = random_braid(rng, 4, 8);
      std::vector<Element> top(b.strands);
      for (auto& x : top) x = static_cast<Element>(rng() % a.size());
      const auto down = propagate(R, b, top);
      CHECK(propagate(R, inverse(b), down.bottom).bottom == top);
      CHECK(propagate(R, concat(b, inverse(b)), top).bottom == top);
    }
  }
}

TEST_CASE("colorings of small closures", "[links]") {
  const auto c4 = cyclic_rack(4);
  CHECK(colorings(c4, parse_braid("", 1)).size() == 4);
  CHECK(colorings(c4, parse_braid("", 2)).size() == 16);
  // Involutive R: sigma_1^2 fixes every coloring.
  CHECK(colorings(c4, parse_braid("1 1")).size() == 16);
  // sigma_1 alone: (a, b) -> (b + 1, a - 1) must fix (a, b), so a = b + 1.
  const auto unknot = colorings(c4, parse_braid("1"));
  REQUIRE(unknot.size() == 4);
  for (const auto& t : unknot) CHECK(t[0] == (t[1] + 1) % 4);
}

TEST_CASE("coloring enumeration cap", "[links]") {
  const auto c4 = cyclic_rack(4);
  CHECK_THROWS_AS(colorings(c4, parse_braid("", 11)), ResourceLimitError);
  CHECK_NOTHROW(colorings(c4, parse_braid("", 10)));
}

TEST_CASE("state sum on closures of sigma_1 powers over C4", "[links]") {
  const auto c4 = cyclic_rack(4);
  const auto phi = product_mod_cocycle(4, 2);
  for (std::size_t n = 1; n <= 3; ++n) {
    INFO("n=" << n);
    CHECK(invariant(c4, phi, power_of_sigma1(2 * (2 * n - 1))) == R2("8(0)+8(1)"));
  }
  CHECK(invariant(c4, phi, parse_braid("", 2)) == R2("16(0)"));
  CHECK(invariant(c4, phi, parse_braid("", 1)) == R2("4(0)"));
  CHECK(invariant(c4, phi, parse_braid("1")) == R2("4(0)"));
  CHECK(invariant(c4, phi, parse_braid("-1 -1")) == R2("8(0)+8(1)"));
}

TEST_CASE("the zero cocycle counts colorings", "[links]") {
  std::mt19937_64 rng(8);
  const auto x4 = affine_x4();
  const auto zero = CocycleTable::zero(4, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto b = random_braid(rng, 4, 8);
    const auto g = invariant(x4, zero, b);
    CHECK(g.counts.size() <= 1);
    CHECK(g.total() == colorings(x4, b).size());
  }
}

TEST_CASE("inserting sigma_i sigma_i^-1 changes nothing, even for a non-cocycle", "[links][property]") {
  std::mt19937_64 rng(13);
  const auto c4 = cyclic_rack(4);
  const auto phi = first_coordinate_mod2(4);
  InvariantOptions raw;
  raw.verify_cocycle = false;
  for (int trial = 0; trial < 30; ++trial) {
    auto b = random_braid(rng, 4, 6);
    if (b.strands < 2) continue;
    const auto before = invariant(c4, phi, b, raw);
    const int g = 1 + static_cast<int>(rng() % (b.strands - 1));
    const std::size_t at = rng() % (b.letters.size() + 1);
    b.letters.insert(b.letters.begin() + static_cast<std::ptrdiff_t>(at), {g, -g});
    CHECK(invariant(c4, phi, b, raw) == before);
  }
}

TEST_CASE("Markov moves preserve the state sum of verified cocycles", "[links][property]") {
  std::mt19937_64 rng(21);
  const auto c4 = cyclic_rack(4);
  const auto phi = product_mod_cocycle(4, 2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto b = random_braid(rng, 4, 8);
    const auto rep = markov_check(c4, phi, b, 5, 100 + trial);
    INFO(to_string(b));
    CHECK(rep.passed);
    CHECK(rep.moves_checked == (b.strands >= 2 ? 7u : 2u));
  }
  // Every generator of the normalized cocycles of X4 mod 2.
  const auto x4 = affine_x4();
  const ChainComplex cx(from_rump(x4));
  const auto res = cohomology(HomologyCalculator(cx), 2, Theory::NYB, 2);
  for (const auto& v : res.cocycles) {
    const auto psi = cocycle_table(cx, Theory::NYB, v, 2);
    for (int trial = 0; trial < 3; ++trial) CHECK(markov_check(x4, psi, random_braid(rng, 3, 6), 5, trial).passed);
  }
}

TEST_CASE("a non-normalized cochain is caught by stabilization", "[links]") {
  const auto c4 = cyclic_rack(4);
  const auto phi = first_coordinate_mod2(4);
  CHECK_THROWS_AS(invariant(c4, phi, parse_braid("1 1")), StructureError);
  // Unknot: stabilizing adds phi(b + 1, b) = (b + 1) mod 2 on each of 4 colorings.
  const auto rep = markov_check(c4, phi, parse_braid("", 1), 5);
  CHECK_FALSE(rep.passed);
  CHECK(rep.reference == R2("4(0)"));
  REQUIRE(rep.counterexamples.size() == 2);
  CHECK(rep.counterexamples.front().find("stabilization") != std::string::npos);
  CHECK(rep.counterexamples.front().find("2(0)+2(1)") != std::string::npos);
}

TEST_CASE("cocycle size must match the magma", "[links]") {
  CHECK_THROWS_AS(invariant(cyclic_rack(4), product_mod_cocycle(3, 2), parse_braid("1")), StructureError);
  CHECK_THROWS_AS(invariant(dihedral_quandle(3), product_mod_cocycle(3, 2), parse_braid("1")), StructureError);
}

TEST_CASE("group ring elements", "[links][io]") {
  const auto g = R2("8(0)+8(1)");
  CHECK(g.total() == 16);
  CHECK(to_string(g) == "8(0)+8(1)");
  CHECK(to_string(R2("0")) == "0");
  CHECK(R2("3(1) + 2(1) + 0(0)") == R2("5(1)"));
  CHECK(to_string(R2("4(2)+1(0)", 3)) == "1(0)+4(2)");
  for (const char* bad : {"", "8", "8(0", "8(2)", "(0)", "8(0)+", "8(0)x"}) CHECK_THROWS_AS(R2(bad), ParseError);

  const auto j = to_json(g);
  CHECK(j == nlohmann::json{{"0", 8}, {"1", 8}});
  CHECK(group_ring_element_from_json(j, 2) == g);
  CHECK_THROWS_AS(group_ring_element_from_json(nlohmann::json{{"2", 1}}, 2), ParseError);
  CHECK_THROWS_AS(group_ring_element_from_json(nlohmann::json{{"0", -1}}, 2), ParseError);
  CHECK_THROWS_AS(group_ring_element_from_json(nlohmann::json::array(), 2), ParseError);
}

TEST_CASE("parallel enumeration gives the same tally", "[links]") {
  const auto x4 = affine_x4();
  const ChainComplex cx(from_rump(x4));
  const auto res = cohomology(HomologyCalculator(cx), 2, Theory::NYB, 2);
  REQUIRE_FALSE(res.cocycles.empty());
  const auto psi = cocycle_table(cx, Theory::NYB, res.cocycles.front(), 2);
  const auto b = parse_braid("1 -2 3 1 2 -3 1 2");
  InvariantOptions par;
  par.jobs = 3;
  CHECK(invariant(x4, psi, b, par) == invariant(x4, psi, b));
}
