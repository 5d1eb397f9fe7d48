#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "ybh/algebra.hpp"
#include "ybh/solution.hpp"

using namespace ybh;

namespace {

// Relabel a magma by a permutation: (p x) * (p y) = p (x * y).
FiniteMagma relabel(const FiniteMagma& a, const std::vector<Element>& p) {
  const auto m = a.size();
  std::vector<Element> t(m * m);
  for (Element x = 0; x < m; ++x)
    for (Element y = 0; y < m; ++y) t[p[x] * m + p[y]] = p[a(x, y)];
  return FiniteMagma(m, std::move(t));
}

FiniteMagma product(const FiniteMagma& a, const FiniteMagma& b) {
  const auto m = a.size(), n = b.size();
  std::vector<Element> t(m * n * m * n);
  for (Element x1 = 0; x1 < m; ++x1)
    for (Element x2 = 0; x2 < n; ++x2)
      for (Element y1 = 0; y1 < m; ++y1)
        for (Element y2 = 0; y2 < n; ++y2)
          t[(x1 * n + x2) * (m * n) + y1 * n + y2] = static_cast<Element>(a(x1, y1) * n + b(x2, y2));
  return FiniteMagma(m * n, std::move(t));
}

// Rump identity straight from the definition, no division table involved.
bool rump_by_definition(const FiniteMagma& a) {
  const auto m = a.size();
  for (Element y = 0; y < m; ++y) {
    std::vector<int> seen(m, 0);
    for (Element x = 0; x < m; ++x)
      if (seen[a(x, y)]++) return false;
  }
  for (Element x = 0; x < m; ++x)
    for (Element y = 0; y < m; ++y)
      for (Element z = 0; z < m; ++z)
        if (a(a(z, x), a(y, x)) != a(a(z, y), a(x, y))) return false;
  return true;
}

std::vector<FiniteMagma> random_rump_magmas(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::vector<std::string> small = {"cyclic:2", "cyclic:3", "cyclic:4", "dihedral:4", "alexander:4:3", "trivial:2", "x4"};
  std::uniform_int_distribution<std::size_t> pick(0, small.size() - 1);
  std::vector<FiniteMagma> out;
  while (out.size() < count) {
    auto a = builtin_magma(small[pick(rng)]);
    if (rng() % 2) {
      auto b = builtin_magma(small[pick(rng)]);
      if (a.size() * b.size() <= 16) a = product(a, b);
    }
    std::vector<Element> p(a.size());
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    out.push_back(relabel(a, p));
  }
  return out;
}

}  // namespace

TEST_CASE("finite fields satisfy the field axioms", "[field]") {
  for (unsigned q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
    const GaloisField f(q);
    const auto& els = f.elements();
    REQUIRE(els.size() == q);
    for (const auto& a : els) {
      CHECK(a + f.zero() == a);
      CHECK(a * f.one() == a);
      CHECK(a + (-a) == f.zero());
      if (a != f.zero()) {
        int inverses = 0;
        for (const auto& b : els) inverses += (a * b == f.one());
        CHECK(inverses == 1);
      }
      for (const auto& b : els) {
        CHECK(a * b == b * a);
        for (const auto& c : els) CHECK(a * (b + c) == a * b + a * c);
      }
    }
    CHECK(f.power_of_generator(q - 1) == f.one());
    for (unsigned j = 1; j + 1 < q; ++j) CHECK(f.power_of_generator(j) != f.one());
  }
}

TEST_CASE("F_4 generator satisfies u^2 = u + 1", "[field]") {
  const GaloisField f(4);
  const auto u = f.generator();
  CHECK(u * u == u + f.one());
  CHECK(f.digit(f.element(3)) == 3);
  CHECK_THROWS_AS(GaloisField(6), StructureError);
}

TEST_CASE("affine builtins reproduce the published Cayley tables", "[algebra]") {
  CHECK(affine_x4() == magma_from_table(oracle::table_x4()));
  CHECK(affine_x16() == magma_from_table(oracle::table_x16()));
}

TEST_CASE("builtin rules", "[algebra]") {
  const auto c = builtin_magma("cyclic:5");
  for (Element x = 0; x < 5; ++x)
    for (Element y = 0; y < 5; ++y) CHECK(c(x, y) == (x + 1) % 5);
  const auto d = builtin_magma("dihedral:6");
  CHECK(d(1, 4) == 1);
  CHECK(d(5, 0) == 1);
  const auto a = builtin_magma("alexander:9:4");
  CHECK(a(2, 5) == (4 * 2 + 6 * 5) % 9);
  const auto t = builtin_magma("trivial:3");
  CHECK(t(2, 0) == 2);
  CHECK_THROWS_AS(builtin_magma("alexander:6:2"), StructureError);
  CHECK_THROWS_AS(builtin_magma("cyclic:0"), ParseError);
  CHECK_THROWS_AS(builtin_magma("cyclic:x"), ParseError);
  CHECK_THROWS_AS(builtin_magma("tetrahedral:4"), ParseError);
}

TEST_CASE("right division inverts right multiplication", "[algebra]") {
  for (const auto& spec : oracle::builtin_rump_specs()) {
    const auto a = builtin_magma(spec);
    for (Element x = 0; x < a.size(); ++x)
      for (Element y = 0; y < a.size(); ++y) {
        CHECK(a(a.right_divide(x, y), y) == x);
        CHECK(a.right_divide(a(x, y), y) == x);
      }
  }
  // 0-based X4: 3 * 0 = 2 and 3 * 1 = 0.
  const auto x4 = affine_x4();
  CHECK(x4.right_divide(2, 0) == 3);
  CHECK(x4.right_divide(0, 1) == 3);
}

TEST_CASE("right division is refused on a non-quasigroup", "[algebra]") {
  const FiniteMagma a(2, {0, 0, 0, 0});
  CHECK_FALSE(a.is_right_quasigroup());
  CHECK_THROWS_AS(a.right_divide(0, 0), StructureError);
  CHECK_FALSE(is_rump(a));
}

TEST_CASE("structure report on known examples", "[algebra]") {
  const auto c4 = structure_report(builtin_magma("cyclic:4"));
  CHECK(c4.rump);
  CHECK(c4.rack);
  CHECK_FALSE(c4.quandle);
  CHECK_FALSE(c4.left_quasigroup);
  CHECK(c4.uniquely_2_divisible);

  const auto r3 = structure_report(builtin_magma("dihedral:3"));
  CHECK(r3.quandle);
  CHECK(r3.latin);
  CHECK_FALSE(r3.rump);

  const auto r4 = structure_report(builtin_magma("dihedral:4"));
  CHECK(r4.rump);
  CHECK(r4.quandle);

  const auto x4 = structure_report(affine_x4());
  CHECK(x4.rump);
  CHECK_FALSE(x4.rack);

  const auto x16 = structure_report(affine_x16());
  CHECK(x16.rump);
  CHECK(x16.uniquely_2_divisible);
  CHECK(x16.delta_bijective);
}

TEST_CASE("is_rump agrees with the definition", "[algebra]") {
  for (const auto& spec : {"cyclic:3", "dihedral:3", "dihedral:4", "dihedral:5", "alexander:5:2", "alexander:8:3",
                           "alexander:8:5", "trivial:4", "x4"}) {
    const auto a = builtin_magma(spec);
    CHECK(is_rump(a) == rump_by_definition(a));
  }
  for (const auto& a : random_rump_magmas(30, 7)) CHECK(is_rump(a));
}

TEST_CASE("finite Rump magmas are uniquely 2-divisible and Delta-bijective", "[algebra][property]") {
  std::size_t rump_seen = 0;
  auto check = [&](const FiniteMagma& a) {
    const auto r = structure_report(a);
    if (!r.rump) return;
    ++rump_seen;
    CHECK(r.uniquely_2_divisible);
    CHECK(r.delta_bijective);
  };
  for (const auto& spec : oracle::builtin_rump_specs()) check(builtin_magma(spec));
  for (const auto& a : random_rump_magmas(60, 11)) check(a);
  for (std::size_t n = 2; n <= 12; ++n)
    for (std::size_t t = 1; t < n; ++t)
      if (std::gcd(t, n) == 1) check(alexander_quandle(n, t));
  CHECK(rump_seen > 80);
}

TEST_CASE("exhaustive: every Rump right quasigroup of order <= 4", "[algebra][property]") {
  // Each column of the table is a permutation of {0..m-1}.
  for (std::size_t m = 1; m <= 4; ++m) {
    std::vector<std::vector<Element>> perms;
    std::vector<Element> p(m);
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::size_t total = 1, rump = 0, left_nondeg = 0;
    for (std::size_t i = 0; i < m; ++i) total *= perms.size();
    std::vector<Element> table(m * m);
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t c = code;
      for (std::size_t y = 0; y < m; ++y, c /= perms.size())
        for (std::size_t x = 0; x < m; ++x) table[x * m + y] = perms[c % perms.size()][x];
      const FiniteMagma a(m, table);
      if (!is_rump(a)) continue;
      ++rump;
      const auto r = structure_report(a);
      CHECK(r.uniquely_2_divisible);
      CHECK(r.delta_bijective);
      CHECK(check_square_fixed_points(a).passed);
      CHECK(check_square_identities(a).passed);
      left_nondeg += r.uniquely_2_divisible;
    }
    INFO("m=" << m);
    CHECK(rump > 0);
    CHECK(left_nondeg == rump);
  }
}

TEST_CASE("Delta-bijectivity needs the Rump hypothesis", "[algebra]") {
  // Dihedral 3 squares bijectively but Delta has determinant -3.
  const auto r = structure_report(dihedral_quandle(3));
  CHECK(r.uniquely_2_divisible);
  CHECK_FALSE(r.delta_bijective);
}

TEST_CASE("Alexander quandle is Rump iff (1-t)^2 = 0 mod n", "[algebra][property]") {
  for (std::size_t n = 2; n <= 12; ++n)
    for (std::size_t t = 1; t < n; ++t) {
      if (std::gcd(t, n) != 1) continue;
      const std::size_t s = (1 + n - t) % n;
      INFO("n=" << n << " t=" << t);
      CHECK(is_rump(alexander_quandle(n, t)) == (s * s % n == 0));
    }
}

TEST_CASE("dihedral quandle is Rump iff n divides 4", "[algebra][property]") {
  for (std::size_t n = 2; n <= 12; ++n) {
    INFO("n=" << n);
    CHECK(is_rump(dihedral_quandle(n)) == (4 % n == 0));
  }
}

TEST_CASE("Cayley tables round-trip through the file format", "[algebra][io]") {
  for (const auto& spec : oracle::builtin_rump_specs()) {
    const auto a = builtin_magma(spec);
    std::stringstream ss;
    write_cayley_table(ss, a);
    CHECK(read_cayley_table(ss) == a);
  }
  std::istringstream commented("# X4\n4\n1 3 2 4 # row 1\n2 4 1 3\n4 2 3 1\n3 1 4 2\n");
  CHECK(read_cayley_table(commented) == affine_x4());
}

TEST_CASE("malformed Cayley tables are rejected", "[algebra][io]") {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_cayley_table(in);
  };
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("2\n1 2\n2"), ParseError);
  CHECK_THROWS_AS(parse("2\n1 2\n2 3"), ParseError);
  CHECK_THROWS_AS(parse("2\n1 2\n2 0"), ParseError);
  CHECK_THROWS_AS(parse("2\n1 2\n2 x"), ParseError);
  CHECK_THROWS_AS(parse("0"), ParseError);
  CHECK_THROWS_AS(read_cayley_table_file("/nonexistent/table.txt"), ParseError);
  CHECK_THROWS_AS(magma_from_table({{1, 2}, {1}}), ParseError);
}
