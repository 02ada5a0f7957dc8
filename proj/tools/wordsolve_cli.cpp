// Command-line front end: parse -> classify -> (optionally) verify the
// cohomological obstruction -> (optionally) solve numerically. All output is
// a single JSON report on stdout.
//
// Exit codes: 0 ok/solved, 2 not-found, 3 parse, 4 bad-matrix,
// 5 math-property-failure, 6 unsupported-p, 7 criterion-refused.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "wordsolve/json_io.hpp"
#include "wordsolve/nilpotent.hpp"
#include "wordsolve/obstruction.hpp"
#include "wordsolve/unitary.hpp"
#include "wordsolve/words.hpp"

namespace {

using namespace wordsolve;

constexpr int kExitSolved = 0;
constexpr int kExitNotFound = 2;
constexpr int kExitParse = 3;
constexpr int kExitBadMatrix = 4;
constexpr int kExitMathProperty = 5;
constexpr int kExitUnsupportedPrime = 6;
constexpr int kExitCriterionRefused = 7;

struct CriterionRefused {
  std::string reason;
};

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file '" + path + "'", 0);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("invalid JSON in '" + path + "': " + e.what(), 0);
  }
  return j;
}

Json pipeline_header(const std::string& command, std::optional<std::uint64_t> seed) {
  Json j;
  j["schema"] = "wordsolve.pipeline_report.v1";
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  return j;
}

int resolve_dim(const WordFile& wf, int flag_dim) {
  int file_dim = word_file_dim(wf);
  if (flag_dim > 0 && file_dim > 0 && flag_dim != file_dim)
    throw InvalidMatrixError("--dim disagrees with the coefficient matrices");
  int dim = flag_dim > 0 ? flag_dim : file_dim;
  if (dim < 2) throw ParseError("dimension not determined; pass --dim", 0);
  return dim;
}

Matrix resolve_target(const std::string& spec, int dim, UnitaryMode mode) {
  if (spec == "identity") return Matrix::Identity(dim, dim);
  if (spec.rfind("haar:", 0) == 0)
    return haar_random(dim, haar_literal_seed(Json(spec)), mode).matrix();
  Matrix m = matrix_from_json(load_json_file(spec));
  if (m.rows() != dim) throw InvalidMatrixError("target has the wrong dimension");
  if (unitarity_defect(m) > 1e-6)
    throw InvalidMatrixError("target is not unitary within tolerance");
  if (mode == UnitaryMode::SpecialUnitary &&
      std::abs(m.determinant() - std::complex<double>(1.0)) > 1e-6)
    throw InvalidMatrixError("target does not have determinant 1");
  return m;
}

std::vector<CommutatorTerm> parse_terms(const std::string& text) {
  std::vector<CommutatorTerm> terms;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    if (group.empty()) continue;
    std::stringstream fields(group);
    std::string field;
    std::vector<std::int64_t> values;
    while (std::getline(fields, field, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stoll(field, &used));
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw ParseError("malformed --terms entry '" + field + "'", 0);
      }
    }
    if (values.size() != 3)
      throw ParseError("--terms groups must be n,m,l triples", 0);
    terms.push_back(CommutatorTerm{values[0], values[1], values[2]});
  }
  if (terms.empty()) throw ParseError("--terms is empty", 0);
  return terms;
}

/// Obstruction summary for a classified word at the prime dim: the top-class
/// verdict plus the leading coefficient b mod p of the word pullback.
Json obstruction_summary(const ClassificationReport& rep, std::uint32_t p,
                         bool units_pinned) {
  TopClassObstruction obs = top_class_obstruction(p);
  Json j;
  j["p"] = p;
  j["in_J"] = obs.in_J;
  if (rep.n == 2 && rep.heisenberg)
    j["coefficient"] = fp_of(rep.heisenberg->b, p);
  else
    j["coefficient"] = nullptr;
  j["units_pinned"] = units_pinned;
  if (obs.in_J)
    throw MathPropertyError("top class lies in J; this contradicts the theory");
  return j;
}

int cmd_analyze(const std::string& wordfile_path) {
  Json input = load_json_file(wordfile_path);
  WordFile wf = word_file_from_json(input);
  Word w = parse_word_file(wf);
  int dim = word_file_dim(wf);
  if (dim > 0)
    materialize_coefficients(wf, dim, UnitaryMode::Unitary);  // validates matrices
  ClassificationReport rep = classify(w);

  Json out = pipeline_header("analyze", std::nullopt);
  out["classification"] = to_json(rep);
  out["cohomology"] = nullptr;
  out["solve"] = nullptr;
  std::cout << dump_report(out);
  return kExitSolved;
}

int cmd_cohomology(std::uint32_t p, const std::string& task, std::int64_t n,
                   const std::string& terms_text, bool pin_units,
                   const std::string& wordfile_path) {
  require_supported_prime(p);
  Json out;
  out["schema"] = "wordsolve.cohomology_report.v1";
  out["tool_version"] = kToolVersion;
  out["p"] = p;
  out["task"] = task;
  int exit_code = kExitSolved;

  if (task == "hopf-check") {
    HopfCheckReport adopted = hopf_axiom_check(p, CoproductConvention::Adopted);
    HopfCheckReport literal = hopf_axiom_check(p, CoproductConvention::PrintedLiteral);
    out["adopted"] = to_json(adopted);
    out["printed_literal"] = to_json(literal);
    if (!adopted.all_axioms_pass() || adopted.degenerate_all_primitive ||
        !literal.degenerate_all_primitive)
      exit_code = kExitMathProperty;
  } else if (task == "power-map") {
    RingDescriptor pu = RingDescriptor::pu(p);
    RingHom mu = power_map_pullback(n, pu);
    out["n"] = n;
    Json images;
    images["y"] = render(mu.images.at(0));
    for (int id : pu.odd_generator_ids())
      images["y" + std::to_string(id)] = render(mu.images.at(id));
    out["images"] = std::move(images);
    bool linear_ok = true;
    for (int id : pu.odd_generator_ids()) {
      AlgebraElement rest =
          mu.images.at(id) - AlgebraElement::generator(pu, id).scaled(fp_of(n, p));
      for (const auto& [m, c] : rest.terms())
        if (m.f[0].e + static_cast<std::uint32_t>(std::popcount(m.f[0].mask)) < 2)
          linear_ok = false;
    }
    out["linear_part_ok"] = linear_ok;
    if (!linear_ok) exit_code = kExitMathProperty;
  } else if (task == "top-class") {
    TopClassObstruction obs = top_class_obstruction(p);
    out["result"] = to_json(obs, p);
    if (!wordfile_path.empty()) {
      WordFile wf = word_file_from_json(load_json_file(wordfile_path));
      ClassificationReport rep = classify(parse_word_file(wf));
      Json word_summary;
      word_summary["classification"] = to_json(rep);
      word_summary["coefficient"] =
          rep.heisenberg ? Json(fp_of(rep.heisenberg->b, p)) : Json(nullptr);
      out["word"] = std::move(word_summary);
    }
    if (obs.in_J) exit_code = kExitMathProperty;
  } else if (task == "word-coeff") {
    if (terms_text.empty())
      throw ParseError("word-coeff requires --terms n1,m1,l1;n2,m2,l2;...", 0);
    std::vector<CommutatorTerm> terms = parse_terms(terms_text);
    std::int64_t b = heisenberg_eval(commutator_basis_word(terms)).b;
    Json terms_json = Json::array();
    for (const auto& t : terms) terms_json.push_back(Json::array({t.n, t.m, t.l}));
    out["terms"] = std::move(terms_json);
    out["b"] = b;
    Json results = Json::array();
    bool consistent = true;
    for (int i = 2; i <= static_cast<int>(p); ++i) {
      bool pin = pin_units && i < static_cast<int>(p);
      WordPullbackCoefficient c = word_pullback_coefficient(terms, i, p, pin);
      Json rj;
      rj["i"] = i;
      rj["coefficient"] = c.coefficient;
      rj["units"] = c.units.render();
      rj["pinned"] = pin;
      if (!pin && c.coefficient != fp_of(b, p)) consistent = false;
      results.push_back(std::move(rj));
    }
    out["results"] = std::move(results);
    out["matches_heisenberg"] = consistent;
    if (!consistent) exit_code = kExitMathProperty;
  } else {
    throw ParseError("unknown task '" + task + "'", 0);
  }

  std::cout << dump_report(out);
  return exit_code;
}

int cmd_solve(const std::string& wordfile_path, int flag_dim,
              const std::string& target_spec, SolveConfig cfg, bool require_thm14,
              bool verify_obstruction, const std::string& group) {
  Json input = load_json_file(wordfile_path);
  WordFile wf = word_file_from_json(input);
  Word w = parse_word_file(wf);
  if (w.variable_count() < 1)
    throw ParseError("the word must have at least one variable", 0);
  cfg.mode = group == "u" ? UnitaryMode::Unitary : UnitaryMode::SpecialUnitary;
  int dim = resolve_dim(wf, flag_dim);
  ClassificationReport rep = classify(w);

  if (require_thm14) {
    if (!is_prime(dim))
      throw CriterionRefused{"--require-thm14 needs a prime dimension, got " +
                             std::to_string(dim)};
    if (rep.restricted || !rep.thm14_primes)
      throw CriterionRefused{"the solvability criterion covers two-variable words only"};
    if (!rep.thm14_primes->contains(dim))
      throw CriterionRefused{"the criterion is silent for p = " + std::to_string(dim) +
                             " on this content"};
  }

  Json out = pipeline_header("solve", cfg.seed);
  out["classification"] = to_json(rep);
  out["cohomology"] =
      verify_obstruction
          ? obstruction_summary(rep, static_cast<std::uint32_t>(dim), false)
          : Json(nullptr);

  CoefficientAssignment coeffs = materialize_coefficients(wf, dim, cfg.mode);
  Matrix target = resolve_target(target_spec, dim, cfg.mode);
  std::optional<Solution> sol = solve(w, coeffs, target, cfg);
  out["solve"] = solution_to_json(sol);
  std::cout << dump_report(out);
  return sol ? kExitSolved : kExitNotFound;
}

int cmd_scan(const std::string& wordfile_path, int flag_dim, int num_targets,
             SolveConfig cfg, const std::string& group) {
  Json input = load_json_file(wordfile_path);
  WordFile wf = word_file_from_json(input);
  Word w = parse_word_file(wf);
  cfg.mode = group == "u" ? UnitaryMode::Unitary : UnitaryMode::SpecialUnitary;
  int dim = resolve_dim(wf, flag_dim);
  CoefficientAssignment coeffs = materialize_coefficients(wf, dim, cfg.mode);

  ScanReport rep = surjectivity_scan(w, coeffs, dim, num_targets, cfg);

  Json out;
  out["schema"] = "wordsolve.scan_report.v1";
  out["tool_version"] = kToolVersion;
  out["command"] = "scan";
  out["seed"] = cfg.seed;
  out["dim"] = dim;
  out["word"] = render(w);
  Json body = to_json(rep);
  for (auto& [key, value] : body.items()) out[key] = value;
  std::cout << dump_report(out);
  return kExitSolved;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"classify and numerically solve word equations on SU(p)"};
  app.require_subcommand(1);

  std::string wordfile;
  std::string target_spec = "identity";
  std::string group = "su";
  std::string task;
  std::string terms_text;
  std::uint32_t p = 3;
  std::int64_t power_n = 2;
  int dim = 0;
  int num_targets = 10;
  bool require_thm14 = false;
  bool verify_obstruction = false;
  bool pin_units = false;
  SolveConfig cfg;

  CLI::App* analyze = app.add_subcommand("analyze", "classify a word file");
  analyze->add_option("wordfile", wordfile, "word file (JSON)")->required();

  CLI::App* coh = app.add_subcommand("cohomology", "symbolic mod-p checks");
  coh->add_option("--p", p, "odd prime in {3,5,7}")->required();
  coh->add_option("--task", task, "hopf-check|power-map|top-class|word-coeff")
      ->required();
  coh->add_option("--n", power_n, "power-map exponent");
  coh->add_option("--terms", terms_text, "word-coeff terms n1,m1,l1;n2,m2,l2;...");
  coh->add_flag("--pin-units", pin_units, "pin a_i = -(i-1) mod p for i < p");
  coh->add_option("wordfile", wordfile, "optional word file for top-class");

  auto add_solver_flags = [&](CLI::App* cmd) {
    cmd->add_option("--dim", dim, "matrix dimension");
    cmd->add_option("--seed", cfg.seed, "base RNG seed");
    cmd->add_option("--tol", cfg.tol, "residual tolerance (Frobenius)");
    cmd->add_option("--max-iters", cfg.max_iters, "iterations per restart");
    cmd->add_option("--restarts", cfg.restarts, "number of restarts");
    cmd->add_option("--initial-step", cfg.initial_step, "line-search initial step");
    cmd->add_option("--shrink", cfg.shrink, "backtracking shrink factor");
    cmd->add_option("--armijo-c", cfg.armijo_c, "Armijo constant");
    cmd->add_option("--reproject-period", cfg.reproject_period,
                    "iterations between reprojections");
    cmd->add_option("--threads", cfg.threads,
                    "parallel restarts (0: WORDSOLVE_THREADS or hardware)");
    cmd->add_option("--group", group, "su|u")->check(CLI::IsMember({"su", "u"}));
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "solve w(vars) = target");
  solve_cmd->add_option("wordfile", wordfile, "word file (JSON)")->required();
  solve_cmd->add_option("--target", target_spec, "identity | haar:<seed> | <file>");
  solve_cmd->add_flag("--require-thm14", require_thm14,
                      "refuse unless the criterion admits the prime dim");
  solve_cmd->add_flag("--verify-obstruction", verify_obstruction,
                      "include the top-class obstruction summary");
  add_solver_flags(solve_cmd);

  CLI::App* scan_cmd = app.add_subcommand("scan", "solve against Haar targets");
  scan_cmd->add_option("wordfile", wordfile, "word file (JSON)")->required();
  scan_cmd->add_option("--targets", num_targets, "number of Haar targets");
  add_solver_flags(scan_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (app.got_subcommand(analyze)) return cmd_analyze(wordfile);
    if (app.got_subcommand(coh))
      return cmd_cohomology(p, task, power_n, terms_text, pin_units, wordfile);
    if (app.got_subcommand(solve_cmd))
      return cmd_solve(wordfile, dim, target_spec, cfg, require_thm14,
                       verify_obstruction, group);
    if (app.got_subcommand(scan_cmd))
      return cmd_scan(wordfile, dim, num_targets, cfg, group);
  } catch (const CriterionRefused& e) {
    std::cerr << "refused: " << e.reason << "\n";
    return kExitCriterionRefused;
  } catch (const UnsupportedPrimeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnsupportedPrime;
  } catch (const MathPropertyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMathProperty;
  } catch (const InvalidMatrixError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadMatrix;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitParse;
}
