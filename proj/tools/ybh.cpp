// ybh: structure checks, Yang-Baxter (co)homology and cocycle link invariants
// of finite Rump right quasigroups.
//
// Exit codes: 0 pass, 1 mathematical failure, 2 usage or I/O error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ybh/ybh.hpp"

namespace {

using nlohmann::json;
using namespace ybh;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

const char* const kCapsHelp =
    "Resource caps (lifted by --force): a boundary matrix d_n has m^n columns and\n"
    "H_n needs d_(n+1), so homology is refused when m^(n+1) > 2^20. That allows\n"
    "n <= 19 for m = 2, n <= 9 for m = 4, n <= 5 for m = 8, n <= 4 for m = 16.\n"
    "Coloring enumeration is refused when m^k > 2^20 for a k-strand braid.\n"
    "Typical times: m = 4 through n = 5 well under a second; m = 16 at n = 2\n"
    "under a second, at n = 3 a few minutes.";

struct Options {
  std::string magma;
  std::vector<std::string> theories;
  std::optional<std::size_t> degree;
  std::size_t max_degree = 0;
  std::uint64_t modulus = 0;
  std::string cocycle;
  std::string braid;
  std::optional<std::size_t> strands;
  bool json = false;
  bool force = false;
  bool unsafe = false;
  unsigned jobs = 1;
};

std::vector<Theory> selected_theories(const Options& o) {
  std::vector<Theory> out;
  if (o.theories.empty()) return {Theory::YB, Theory::DEG, Theory::NYB};
  for (const auto& t : o.theories) out.push_back(parse_theory(t));
  return out;
}

std::string upper(std::string_view s) {
  std::string r(s);
  for (auto& c : r) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return r;
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

json check_json(const Check& c) {
  json j{{"name", c.name}, {"passed", c.passed}, {"asserted", c.asserted}};
  if (c.degree) j["degree"] = c.degree;
  if (!c.counterexample.empty()) j["counterexample"] = c.counterexample;
  return j;
}

int cmd_check(const Options& o) {
  const auto magma = builtin_magma(o.magma);
  const auto s = structure_report(magma);
  json j{{"magma", magma.name()},
         {"order", magma.size()},
         {"structure",
          {{"right_quasigroup", s.right_quasigroup},
           {"left_quasigroup", s.left_quasigroup},
           {"latin", s.latin},
           {"rump", s.rump},
           {"rack", s.rack},
           {"quandle", s.quandle},
           {"uniquely_2_divisible", s.uniquely_2_divisible},
           {"delta_bijective", s.delta_bijective}}}};
  bool ok = s.rump;
  if (s.rump) {
    const auto r = verify(from_rump(magma));
    j["solution"] = {{"ybe", r.ybe},
                     {"involutive", r.involutive},
                     {"left_nondegenerate", r.left_nondegenerate},
                     {"right_nondegenerate", r.right_nondegenerate},
                     {"bijective", r.bijective}};
    ok = r.ybe && r.involutive;
  } else {
    j["solution"] = nullptr;
  }
  j["passed"] = ok;
  if (o.json) {
    print(j);
  } else {
    std::cout << "magma " << magma.name() << " (order " << magma.size() << ")\n";
    for (const auto& [k, v] : j["structure"].items()) std::cout << "  " << k << '=' << (v.get<bool>() ? "true" : "false") << '\n';
    if (s.rump) {
      std::cout << "solution R(x,y) = (y(x/y), x/y)\n";
      for (const auto& [k, v] : j["solution"].items())
        std::cout << "  " << k << '=' << (v.get<bool>() ? "true" : "false") << '\n';
    } else {
      std::cout << "solution: none (not a Rump right quasigroup)\n";
    }
  }
  return ok ? kPass : kFail;
}

std::vector<std::size_t> selected_degrees(const Options& o, std::size_t fallback_max) {
  if (o.degree) return {*o.degree};
  std::vector<std::size_t> out;
  for (std::size_t n = 1; n <= (o.max_degree ? o.max_degree : fallback_max); ++n) out.push_back(n);
  return out;
}

int cmd_homology(const Options& o) {
  const auto magma = builtin_magma(o.magma);
  const auto theories = selected_theories(o);
  const auto degrees = selected_degrees(o, 3);
  const ChainComplex cx(from_rump(magma), o.jobs);
  const HomologyCalculator calc(cx, {std::size_t{1} << 20, o.force});
  for (auto n : degrees) {
    if (n == 0) throw ParseError("degrees start at 1");
    calc.check_cap(n + 1);
  }

  json groups = json::object();
  std::vector<std::vector<std::string>> table(degrees.size());
  for (std::size_t d = 0; d < degrees.size(); ++d)
    for (auto t : theories) {
      const auto g = calc.homology(degrees[d], t, o.modulus);
      groups[std::string(to_string(t))][std::to_string(degrees[d])] = to_json(g);
      table[d].push_back(to_string(g));
    }
  if (o.json) {
    print({{"magma", magma.name()},
           {"coefficients", o.modulus ? "Z_" + std::to_string(o.modulus) : std::string("Z")},
           {"groups", groups}});
    return kPass;
  }
  if (degrees.size() == 1 && theories.size() == 1) {
    std::cout << table[0][0] << '\n';
    return kPass;
  }
  std::vector<std::size_t> width(theories.size(), 0);
  for (std::size_t k = 0; k < theories.size(); ++k) {
    width[k] = upper(to_string(theories[k])).size() + 5;
    for (const auto& row : table) width[k] = std::max(width[k], row[k].size());
  }
  std::cout << magma.name() << (o.modulus ? " with Z_" + std::to_string(o.modulus) + " coefficients" : "") << '\n';
  std::cout << "n ";
  for (std::size_t k = 0; k < theories.size(); ++k) {
    const auto head = "H_n^" + upper(to_string(theories[k]));
    std::cout << " | " << head << std::string(width[k] - head.size(), ' ');
  }
  std::cout << '\n';
  for (std::size_t d = 0; d < degrees.size(); ++d) {
    std::cout << degrees[d] << (degrees[d] < 10 ? " " : "");
    for (std::size_t k = 0; k < theories.size(); ++k)
      std::cout << " | " << table[d][k] << std::string(width[k] - table[d][k].size(), ' ');
    std::cout << '\n';
  }
  return kPass;
}

int cmd_cocycles(const Options& o) {
  const auto magma = builtin_magma(o.magma);
  const auto theories = o.theories.empty() ? std::vector<Theory>{Theory::NYB} : selected_theories(o);
  if (theories.size() != 1) throw ParseError("cocycles takes a single --theory");
  const auto theory = theories.front();
  const std::size_t n = o.degree.value_or(2);
  if (n == 0) throw ParseError("degrees start at 1");
  const std::uint64_t m = o.modulus ? o.modulus : 2;
  const ChainComplex cx(from_rump(magma), o.jobs);
  const HomologyCalculator calc(cx, {std::size_t{1} << 20, o.force});
  calc.check_cap(n + 1);
  const auto res = cohomology(calc, n, theory, m);
  const auto& basis = cx.basis(n);

  json gens = json::array();
  for (const auto& g : res.cocycles) {
    json entries = json::array();
    std::vector<Element> t(n);
    for (std::size_t j = 0; j < g.size(); ++j)
      if (g[j] != 0) {
        basis.unrank(basis.global(theory, j), t);
        json e = t;
        e.push_back(g[j]);
        entries.push_back(e);
      }
    gens.push_back(entries);
  }
  const auto label = "H^" + std::to_string(n) + "_" + upper(to_string(theory)) + "(" + magma.name() + "; Z_" +
                     std::to_string(m) + ")";
  if (o.json) {
    print({{"magma", magma.name()},
           {"degree", n},
           {"theory", to_string(theory)},
           {"modulus", m},
           {"group", to_json(res.group)},
           {"cocycle_generators", gens}});
    return kPass;
  }
  std::cout << label << " = " << to_string(res.group) << '\n';
  std::cout << res.cocycles.size() << " cocycle generator(s); entries are 0-based tuples then value\n";
  for (std::size_t k = 0; k < res.cocycles.size(); ++k) {
    std::cout << "# generator " << k + 1 << '\n';
    if (n == 2) {
      write_cocycle(std::cout, cocycle_table(cx, theory, res.cocycles[k], m));
      continue;
    }
    for (const auto& e : gens[k]) {
      for (std::size_t i = 0; i < e.size(); ++i) std::cout << (i ? " " : "") << e[i].get<std::uint64_t>();
      std::cout << '\n';
    }
  }
  return kPass;
}

int cmd_invariant(const Options& o) {
  const auto magma = builtin_magma(o.magma);
  if (o.cocycle.empty()) throw ParseError("--cocycle is required");
  const auto phi = load_cocycle(o.cocycle, magma.size());
  const auto braid = parse_braid(o.braid, o.strands);
  InvariantOptions opts;
  opts.verify_cocycle = !o.unsafe;
  opts.force = o.force;
  opts.jobs = o.jobs;
  const auto g = invariant(magma, phi, braid, opts);
  if (o.json) {
    print({{"magma", magma.name()},
           {"braid", to_string(braid)},
           {"strands", braid.strands},
           {"modulus", phi.modulus},
           {"colorings", g.total()},
           {"invariant", to_json(g)}});
  } else {
    std::cout << to_string(g) << '\n';
  }
  return kPass;
}

int cmd_verify(const Options& o) {
  const auto magma = builtin_magma(o.magma);
  const std::size_t n_max = o.max_degree ? o.max_degree : 3;
  if (n_max < 2) throw ParseError("--max-degree must be at least 2");
  std::vector<Check> checks;
  const auto s = structure_report(magma);
  checks.push_back(Check{"is_rump", 0, true, s.rump, s.rump ? "" : "Rump identity or right division fails"});
  json report{{"magma", magma.name()}, {"max_degree", n_max}};

  if (s.rump) {
    const auto R = from_rump(magma);
    const auto sol = verify(R);
    checks.push_back(Check{"solution", 0, true, sol.ybe && sol.involutive && sol.right_nondegenerate,
                           sol.ybe ? (sol.involutive ? "" : "not involutive") : "Yang-Baxter equation fails"});
    checks.push_back(Check{"roundtrip", 0, true, to_rump(R) == magma, ""});
    checks.push_back(check_divisibility_implications(magma));
    checks.push_back(check_square_identities(magma));
    checks.push_back(check_square_fixed_points(magma));

    const ChainComplex cx(R, o.jobs);
    const HomologyCalculator calc(cx, {std::size_t{1} << 20, o.force});
    calc.check_cap(n_max + 1);
    for (auto& c : verify_complex(cx, n_max).checks) checks.push_back(std::move(c));

    const auto split = splitting_report(calc, n_max, o.jobs);
    json rows = json::array();
    for (const auto& r : split.rows) {
      checks.push_back(Check{"splitting", r.degree, split.theorem_backed, r.splits,
                             r.splits ? "" : to_string(r.yb) + " vs " + to_string(r.nyb) + " + " + to_string(r.deg)});
      rows.push_back({{"degree", r.degree}, {"yb", to_string(r.yb)}, {"d", to_string(r.deg)}, {"nyb", to_string(r.nyb)}});
    }
    report["homology"] = rows;

    // Markov moves with every generator of the normalized 2-cocycles mod 2.
    const auto co = cohomology(calc, 2, Theory::NYB, 2);
    Check markov{"markov_invariance"};
    std::mt19937_64 rng(7);
    const std::size_t max_strands = magma.size() <= 4 ? 3 : 2;
    for (std::size_t g = 0; g < co.cocycles.size() && markov.passed; ++g) {
      const auto phi = cocycle_table(cx, Theory::NYB, co.cocycles[g], 2);
      if (auto why = cocycle_defect(cx, phi)) {
        markov.passed = false;
        markov.counterexample = "generator " + std::to_string(g + 1) + ": " + *why;
        break;
      }
      for (int trial = 0; trial < 3 && markov.passed; ++trial) {
        BraidWord b{2 + rng() % (max_strands - 1), {}};
        for (std::size_t l = 1 + rng() % 5; l > 0; --l) {
          const int i = 1 + static_cast<int>(rng() % (b.strands - 1));
          b.letters.push_back(rng() % 2 ? i : -i);
        }
        const auto rep = markov_check(magma, phi, b, 3, rng(), {false, o.force, o.jobs});
        if (!rep.passed) {
          markov.passed = false;
          markov.counterexample = rep.counterexamples.front();
        }
      }
    }
    checks.push_back(markov);
  }

  bool ok = true;
  json list = json::array();
  for (const auto& c : checks) {
    if (c.asserted && !c.passed) ok = false;
    list.push_back(check_json(c));
  }
  report["checks"] = list;
  report["passed"] = ok;
  if (o.json) {
    print(report);
  } else {
    for (const auto& c : checks) {
      std::cout << (c.passed ? "PASS" : (c.asserted ? "FAIL" : "NOTE")) << "  " << c.name;
      if (c.degree) std::cout << " n=" << c.degree;
      if (!c.asserted) std::cout << " (evidence only)";
      if (!c.counterexample.empty()) std::cout << "  " << c.counterexample;
      std::cout << '\n';
    }
    std::cout << (ok ? "all checks passed" : "verification FAILED") << '\n';
  }
  return ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Yang-Baxter homology of finite Rump right quasigroups and cocycle invariants of braid closures"};
  app.footer(std::string("\nMagma specs: cyclic:n, dihedral:n, alexander:n:t, trivial:n, x4, x16, file:PATH\n"
                         "(Cayley table file: first line m, then m rows of 1-based products).\n\n") +
             kCapsHelp + "\n\nExit codes: 0 pass, 1 mathematical failure, 2 usage or I/O error.");
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--magma", o.magma, "magma spec")->required();
    sub->add_flag("--json", o.json, "JSON output");
    sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::Range(1u, 256u));
  };
  auto* check = app.add_subcommand("check", "structure and solution reports");
  common(check);
  auto* homology = app.add_subcommand("homology", "integral or mod-m homology groups");
  common(homology);
  homology->add_option("--theory", o.theories, "yb, d or nyb (repeatable; default all)");
  homology->add_option("--degree", o.degree, "single degree n >= 1");
  homology->add_option("--max-degree", o.max_degree, "degrees 1..N (default 3)");
  homology->add_option("--mod", o.modulus, "coefficients Z_m (default Z)")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 62));
  homology->add_flag("--force", o.force, "lift the resource cap");
  auto* cocycles = app.add_subcommand("cocycles", "cohomology mod m and cocycle generators");
  common(cocycles);
  cocycles->add_option("--theory", o.theories, "yb, d or nyb (default nyb)");
  cocycles->add_option("--degree", o.degree, "degree (default 2)");
  cocycles->add_option("--mod", o.modulus, "modulus m (default 2)")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 62));
  cocycles->add_flag("--force", o.force, "lift the resource cap");
  auto* inv = app.add_subcommand("invariant", "state-sum invariant of a braid closure");
  common(inv);
  inv->add_option("--cocycle", o.cocycle, "builtin:product-mod:k, file:PATH or PATH")->required();
  inv->add_option("--braid", o.braid, "letters i / -i for sigma_i / sigma_i^-1, top to bottom");
  inv->add_option("--strands", o.strands, "strand count (default 1 + max |letter|)");
  inv->add_flag("--unsafe", o.unsafe, "skip the cocycle check");
  inv->add_flag("--force", o.force, "lift the coloring cap");
  auto* ver = app.add_subcommand("verify", "run the verification suite");
  common(ver);
  ver->add_option("--max-degree", o.max_degree, "highest degree checked (default 3)");
  ver->add_flag("--force", o.force, "lift the resource cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (check->parsed()) return cmd_check(o);
    if (homology->parsed()) return cmd_homology(o);
    if (cocycles->parsed()) return cmd_cocycles(o);
    if (inv->parsed()) return cmd_invariant(o);
    if (ver->parsed()) return cmd_verify(o);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const StructureError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
