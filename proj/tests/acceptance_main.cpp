// Acceptance suite: one line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "support/generators.hpp"
#include "wordsolve/json_io.hpp"
#include "wordsolve/nilpotent.hpp"
#include "wordsolve/obstruction.hpp"
#include "wordsolve/unitary.hpp"
#include "wordsolve/words.hpp"

using namespace wordsolve;

namespace {

struct Criterion {
  std::string name;
  double budget_seconds;  // 0: no budget stated
  std::function<bool(std::string&)> run;
};

bool check(bool ok, std::string& detail, const std::string& msg) {
  if (!ok && detail.empty()) detail = msg;
  return ok;
}

// C1 ------------------------------------------------------------------------

bool c1_heisenberg(std::string& detail) {
  SplitMix64 rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    ContentWord u = testgen::random_content(rng, 2, 30);
    ContentWord v = testgen::random_content(rng, 2, 30);
    if (!check(heisenberg_eval(multiply(u, v)) ==
                   heisenberg_eval(u) * heisenberg_eval(v),
               detail, "homomorphism failed at trial " + std::to_string(trial)))
      return false;
  }
  for (int trial = 0; trial < 200; ++trial) {
    auto terms = testgen::random_commutator_terms(rng);
    std::int64_t expected = 0;
    for (const auto& t : terms) expected += t.n * t.m * t.l;
    HeisenbergElement h = heisenberg_eval(commutator_basis_word(terms));
    if (!check(h.a == 0 && h.c == 0 && h.b == expected, detail,
               "b formula failed at trial " + std::to_string(trial)))
      return false;
  }
  return true;
}

// C2 ------------------------------------------------------------------------

bool c2_hopf(std::string& detail) {
  for (std::uint32_t p : {3u, 5u}) {
    HopfCheckReport adopted = hopf_axiom_check(p, CoproductConvention::Adopted);
    if (!check(adopted.all_axioms_pass(), detail,
               "adopted convention fails at p=" + std::to_string(p)))
      return false;
    if (!check(!adopted.degenerate_all_primitive, detail,
               "adopted convention degenerate at p=" + std::to_string(p)))
      return false;
    HopfCheckReport literal = hopf_axiom_check(p, CoproductConvention::PrintedLiteral);
    if (!check(literal.degenerate_all_primitive, detail,
               "printed convention not degenerate at p=" + std::to_string(p)))
      return false;
  }
  return true;
}

// C3 ------------------------------------------------------------------------

bool c3_power_maps(std::string& detail) {
  for (std::uint32_t p : {3u, 5u}) {
    RingDescriptor pu = RingDescriptor::pu(p);
    std::vector<RingHom> mu;
    for (std::int64_t n = 0; n <= 7; ++n) mu.push_back(power_map_pullback(n, pu));
    for (std::int64_t n = 0; n <= 7; ++n)
      for (int id : pu.odd_generator_ids()) {
        AlgebraElement rest =
            mu[static_cast<std::size_t>(n)].images.at(id) -
            AlgebraElement::generator(pu, id).scaled(fp_of(n, p));
        for (const auto& [m, c] : rest.terms())
          if (!check(m.f[0].e + static_cast<std::uint32_t>(
                                    std::popcount(m.f[0].mask)) >= 2,
                     detail,
                     "linear part wrong: p=" + std::to_string(p) +
                         " n=" + std::to_string(n) + " y" + std::to_string(id)))
            return false;
      }
    for (std::int64_t n = 0; n <= 7; ++n)
      for (std::int64_t m = 0; n + m <= 7; ++m) {
        RingHom conv = convolve(mu[static_cast<std::size_t>(n)],
                                mu[static_cast<std::size_t>(m)]);
        for (const auto& [id, img] : mu[static_cast<std::size_t>(n + m)].images)
          if (!check(conv.images.at(id) == img, detail,
                     "convolution law fails: p=" + std::to_string(p) + " " +
                         std::to_string(n) + "+" + std::to_string(m)))
            return false;
      }
  }
  return true;
}

// C4 ------------------------------------------------------------------------

bool c4_obstruction(std::string& detail) {
  for (std::uint32_t p : {3u, 5u}) {
    auto t0 = std::chrono::steady_clock::now();
    TopClassObstruction obs = top_class_obstruction(p);
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                         .count();
    double budget = p == 3 ? 1.0 : 60.0;
    if (!check(elapsed < budget, detail,
               "p=" + std::to_string(p) + " exceeded per-prime budget"))
      return false;
    if (!check(!obs.in_J, detail, "top class in J at p=" + std::to_string(p)))
      return false;
    Monomial expected;
    expected.f[0].e = p - 1;
    expected.f[1].mask = ((1u << p) - 1u) & ~1u;
    if (!check(obs.top_monomial == expected, detail,
               "wrong leading monomial at p=" + std::to_string(p)))
      return false;
    if (!check(obs.degree == static_cast<int>(p * p - 1), detail,
               "wrong degree at p=" + std::to_string(p)))
      return false;
    if (!check(obs.sign == 1, detail, "unexpected sign at p=" + std::to_string(p)))
      return false;
  }
  return true;
}

// C5 ------------------------------------------------------------------------

bool c5_cross_module(std::string& detail) {
  SplitMix64 rng(105);
  for (int trial = 0; trial < 50; ++trial) {
    auto terms = testgen::random_commutator_terms(rng);
    std::int64_t b = heisenberg_eval(commutator_basis_word(terms)).b;
    for (std::uint32_t p : {3u, 5u})
      for (int i = 2; i <= static_cast<int>(p); ++i) {
        WordPullbackCoefficient c = word_pullback_coefficient(terms, i, p);
        if (!check(c.coefficient == fp_of(b, p), detail,
                   "mismatch at trial " + std::to_string(trial) +
                       " p=" + std::to_string(p) + " i=" + std::to_string(i)))
          return false;
        if (!check(c.units.powers == std::map<int, int>{{i, 1}}, detail,
                   "unexpected unit product"))
          return false;
      }
  }
  return true;
}

// C6 ------------------------------------------------------------------------

// Four interleaving patterns, all with content [x1,x2].
const std::vector<std::pair<std::string, int>>& word_shapes() {
  static const std::vector<std::pair<std::string, int>> shapes = {
      {"g1 x1 g2 x2 g3 x1^-1 g4 x2^-1 g5", 5},
      {"g1 x1 x2 g2 x1^-1 x2^-1", 2},
      {"x1 g1 x2 x1^-1 g2 x2^-1 g3", 3},
      {"g1 x1 g2 x2 x1^-1 g3 x2^-1", 3},
  };
  return shapes;
}

Word commutator_content_word(int k, int* coeff_count) {
  const auto& [text, count] = word_shapes()[static_cast<std::size_t>(k) % 4];
  *coeff_count = count;
  std::set<std::string> names;
  for (int j = 0; j < count; ++j) names.insert("g" + std::to_string(j + 1));
  return parse_word(text, 2, names);
}

CoefficientAssignment word_coeffs(int dim, int count, std::uint64_t word_seed) {
  CoefficientAssignment coeffs;
  for (int j = 0; j < count; ++j)
    coeffs.emplace("g" + std::to_string(j + 1),
                   haar_random(dim, derive_seed(word_seed, static_cast<std::uint64_t>(j))));
  return coeffs;
}

bool c6_solvability(std::string& detail) {
  {
    // the shapes really do have content [x1,x2]
    ContentWord comm = commutator_basis_word({{1, 1, 1}});
    for (int k = 0; k < 4; ++k) {
      int count = 0;
      if (!(content(commutator_content_word(k, &count)) == comm)) {
        detail = "word shape " + std::to_string(k) + " has the wrong content";
        return false;
      }
    }
  }
  for (int p : {2, 3, 5}) {
    int misses = 0;
    std::vector<int> missed;
    for (int k = 0; k < 20; ++k) {
      std::uint64_t word_seed = derive_seed(9000 + static_cast<std::uint64_t>(p),
                                            static_cast<std::uint64_t>(k));
      int count = 0;
      Word w = commutator_content_word(k, &count);
      CoefficientAssignment coeffs = word_coeffs(p, count, word_seed);
      SolveConfig cfg;
      cfg.seed = derive_seed(word_seed, 999);
      auto sol = solve(w, coeffs, Matrix::Identity(p, p), cfg);
      if (!sol || sol->residual > 1e-8) {
        ++misses;
        missed.push_back(k);
      }
    }
    if (misses > 1) {
      detail = "p=" + std::to_string(p) + ": " + std::to_string(misses) +
               " of 20 words missed the budget";
      return false;
    }
    if (misses == 1) {
      int k = missed[0];
      std::uint64_t word_seed = derive_seed(9000 + static_cast<std::uint64_t>(p),
                                            static_cast<std::uint64_t>(k));
      int count = 0;
      Word w = commutator_content_word(k, &count);
      CoefficientAssignment coeffs = word_coeffs(p, count, word_seed);
      SolveConfig cfg;
      cfg.seed = derive_seed(word_seed, 999);
      cfg.max_iters = 10000;
      cfg.restarts = 100;
      auto sol = solve(w, coeffs, Matrix::Identity(p, p), cfg);
      if (!sol || sol->residual > 1e-8) {
        detail = "p=" + std::to_string(p) + " word " + std::to_string(k) +
                 " failed even with the doubled budget";
        return false;
      }
    }
  }
  return true;
}

// C7 ------------------------------------------------------------------------

bool c7_gradients(std::string& detail) {
  SplitMix64 rng(107);
  CoefficientAssignment coeffs;
  for (int j = 0; j < 3; ++j)
    coeffs.emplace("g" + std::to_string(j + 1),
                   haar_random(3, 7000 + static_cast<std::uint64_t>(j)));
  const double h = 1e-6;
  int done = 0, attempts = 0;
  while (done < 100 && attempts < 400) {
    ++attempts;
    Word w = testgen::random_word(rng, 2, 14, {"g1", "g2", "g3"});
    std::vector<Matrix> vars = {
        haar_random(3, derive_seed(7100, static_cast<std::uint64_t>(attempts))).matrix(),
        haar_random(3, derive_seed(7200, static_cast<std::uint64_t>(attempts))).matrix()};
    Matrix target =
        haar_random(3, derive_seed(7300, static_cast<std::uint64_t>(attempts))).matrix();
    WordGradient wg = residual_and_gradient(w, vars, coeffs, target);

    std::vector<Matrix> omega;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      Matrix g(3, 3);
      for (int cc = 0; cc < 3; ++cc)
        for (int rr = 0; rr < 3; ++rr) g(rr, cc) = rng.next_complex_gaussian();
      omega.push_back(tangent_project(g));
    }
    double analytic = 0.0;
    for (std::size_t i = 0; i < vars.size(); ++i)
      analytic += (wg.euclidean[i].adjoint() * vars[i] * omega[i]).trace().real();
    auto shifted = [&](double t) {
      std::vector<Matrix> moved(vars.size());
      for (std::size_t i = 0; i < vars.size(); ++i)
        moved[i] = vars[i] * (t * omega[i]).exp();
      return residual_and_gradient(w, moved, coeffs, target).f;
    };
    double numeric = (shifted(h) - shifted(-h)) / (2.0 * h);
    double scale = std::max(std::abs(numeric), std::abs(analytic));
    if (scale < 1e-8) continue;  // degenerate direction; draw another case
    ++done;
    if (std::abs(numeric - analytic) / scale > 1e-5) {
      detail = "case " + std::to_string(done) + ": relative error " +
               std::to_string(std::abs(numeric - analytic) / scale);
      return false;
    }
  }
  if (done < 100) {
    detail = "could not generate 100 informative cases";
    return false;
  }
  return true;
}

// C8 ------------------------------------------------------------------------

bool c8_surjectivity(std::string& detail) {
  Word comm = parse_word("x1 x2 x1^-1 x2^-1", 2, {});
  SolveConfig cfg;
  cfg.seed = 108;
  ScanReport rep = surjectivity_scan(comm, {}, 2, 100, cfg);
  if (!check(rep.success_rate == 1.0, detail,
             "commutator scan rate " + std::to_string(rep.success_rate)))
    return false;
  if (!check(rep.worst_residual <= 1e-8, detail, "commutator scan residual too large"))
    return false;

  Word c3word = parse_word("h1 x3 x2 x1 x2^-1 x1^-1 x3^-1 h2 x1 x2 x1^-1 x2^-1 h3", 3,
                           {"h1", "h2", "h3"});
  if (!(content(c3word) == iterated_commutator(3))) {
    detail = "fixture word does not have content c_3";
    return false;
  }
  CoefficientAssignment coeffs;
  for (int j = 0; j < 3; ++j)
    coeffs.emplace("h" + std::to_string(j + 1),
                   haar_random(2, 8000 + static_cast<std::uint64_t>(j)));
  SolveConfig cfg3;
  cfg3.seed = 109;
  ScanReport rep3 = surjectivity_scan(c3word, coeffs, 2, 20, cfg3);
  if (!check(rep3.success_rate == 1.0, detail,
             "c3 scan rate " + std::to_string(rep3.success_rate)))
    return false;
  return check(rep3.worst_residual <= 1e-8, detail, "c3 scan residual too large");
}

// C9 ------------------------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open fixture " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

bool c9_golden(std::string& detail) {
  const std::string dir = WORDSOLVE_FIXTURE_DIR;
  for (int k = 1; k <= 10; ++k) {
    char num[3];
    std::snprintf(num, sizeof num, "%02d", k);
    std::string base = dir + "/word" + num;
    Json input = Json::parse(read_file(base + ".json"));
    WordFile wf = word_file_from_json(input);
    ClassificationReport rep = classify(parse_word_file(wf));
    std::string produced = dump_report(to_json(rep));
    std::string expected = read_file(base + ".expected.json");
    if (produced != expected) {
      detail = "word" + std::string(num) + " differs from its fixture";
      return false;
    }
  }
  return true;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"heisenberg-correctness", 5.0, c1_heisenberg},
      {"hopf-axioms-and-convention", 10.0, c2_hopf},
      {"power-map-linearity-and-convolution", 30.0, c3_power_maps},
      {"top-class-obstruction", 61.0, c4_obstruction},
      {"cross-module-coefficient-oracle", 0.0, c5_cross_module},
      {"numerical-solvability", 900.0, c6_solvability},
      {"gradient-correctness", 0.0, c7_gradients},
      {"surjectivity-scans", 0.0, c8_surjectivity},
      {"golden-classification-table", 0.0, c9_golden},
  };

  bool all_ok = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const Criterion& c = criteria[k];
    std::string detail;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && c.budget_seconds > 0 && elapsed >= c.budget_seconds) {
      ok = false;
      detail = "runtime " + std::to_string(elapsed) + "s exceeds budget";
    }
    std::printf("C%zu %s: %s (%.2fs)%s%s\n", k + 1, c.name.c_str(),
                ok ? "PASS" : "FAIL", elapsed, detail.empty() ? "" : " -- ",
                detail.c_str());
    std::fflush(stdout);
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}
