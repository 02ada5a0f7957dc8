#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wordsolve/nilpotent.hpp"
#include "wordsolve/obstruction.hpp"
#include "wordsolve/unitary.hpp"
#include "wordsolve/words.hpp"

namespace wordsolve {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

/// Serialized reports end with a newline; dump(2) keys stay in insertion
/// order, which pins the byte layout of the golden fixtures.
inline std::string dump_report(const Json& j) { return j.dump(2) + "\n"; }

// ---- matrices ----------------------------------------------------------------

/// Rows of [re, im] pairs; doubles round-trip via shortest representation.
inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty())
    throw ParseError("matrix must be a non-empty array of rows", 0);
  const std::size_t n = j.size();
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Json& row = j[i];
    if (!row.is_array() || row.size() != n)
      throw ParseError("matrix rows must all have the matrix dimension", i);
    for (std::size_t k = 0; k < n; ++k) {
      const Json& entry = row[k];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
          !entry[1].is_number())
        throw ParseError("matrix entries must be [re, im] pairs", i);
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = {
          entry[0].get<double>(), entry[1].get<double>()};
    }
  }
  return m;
}

// ---- classification ----------------------------------------------------------

inline Json to_json(const HeisenbergElement& h) {
  return Json{{"a", h.a}, {"b", h.b}, {"c", h.c}};
}

inline const char* prime_set_kind_name(PrimeSetKind kind) {
  switch (kind) {
    case PrimeSetKind::AllPrimes: return "ALL_PRIMES";
    case PrimeSetKind::AllPrimesNotDividing: return "ALL_PRIMES_NOT_DIVIDING";
    case PrimeSetKind::None: return "NONE";
  }
  return "NONE";
}

inline Json to_json(const PrimeSet& ps) {
  Json j;
  j["kind"] = prime_set_kind_name(ps.kind);
  if (ps.kind == PrimeSetKind::AllPrimesNotDividing) {
    j["b"] = ps.b;
    j["exceptions"] = ps.exceptions;
  } else {
    j["b"] = nullptr;
    j["exceptions"] = nullptr;
  }
  return j;
}

inline Json to_json(const ClassificationReport& r) {
  Json j;
  j["schema"] = "wordsolve.classification_report.v1";
  j["n"] = r.n;
  j["content"] = r.content;
  j["exponent_sums"] = r.exponent_sums;
  j["restricted"] = r.restricted;
  j["heisenberg"] = r.heisenberg ? to_json(*r.heisenberg) : Json(nullptr);
  j["in_derived"] = r.in_derived ? Json(*r.in_derived) : Json(nullptr);
  j["in_gamma3"] = r.in_gamma3 ? Json(*r.in_gamma3) : Json(nullptr);
  j["thm11_applies"] = r.thm11_applies ? Json(*r.thm11_applies) : Json(nullptr);
  j["thm14_primes"] = r.thm14_primes ? to_json(*r.thm14_primes) : Json(nullptr);
  j["cn_match"] = r.cn_match ? Json(*r.cn_match) : Json(nullptr);
  j["notes"] = r.notes;
  return j;
}

// ---- solver reports ----------------------------------------------------------

inline Json solution_to_json(const std::optional<Solution>& sol) {
  Json j;
  if (!sol) {
    j["status"] = "not_found";
    return j;
  }
  j["status"] = "solved";
  j["residual"] = sol->residual;
  j["restart_index"] = sol->restart_index;
  j["iterations"] = sol->iterations;
  Json assignment;
  for (std::size_t i = 0; i < sol->assignment.size(); ++i)
    assignment["x" + std::to_string(i + 1)] = matrix_to_json(sol->assignment[i].matrix());
  j["assignment"] = std::move(assignment);
  return j;
}

inline Json to_json(const ScanReport& rep) {
  Json j;
  j["num_targets"] = rep.num_targets;
  j["successes"] = rep.successes;
  j["success_rate"] = rep.success_rate;
  j["worst_residual"] = rep.successes > 0 ? Json(rep.worst_residual) : Json(nullptr);
  Json targets = Json::array();
  for (std::size_t t = 0; t < rep.targets.size(); ++t) {
    const TargetResult& tr = rep.targets[t];
    Json tj;
    tj["index"] = t;
    tj["target_seed"] = tr.target_seed;
    tj["solved"] = tr.solved;
    tj["residual"] = tr.solved ? Json(tr.residual) : Json(nullptr);
    tj["restart_index"] = tr.solved ? Json(tr.restart_index) : Json(nullptr);
    tj["iterations"] = tr.iterations;
    targets.push_back(std::move(tj));
  }
  j["targets"] = std::move(targets);
  return j;
}

// ---- cohomology reports --------------------------------------------------------

inline Json to_json(const HopfCheckReport& rep) {
  Json j;
  j["p"] = rep.p;
  j["convention"] =
      rep.convention == CoproductConvention::Adopted ? "adopted" : "printed_literal";
  j["coassociative"] = rep.coassociative;
  j["counit_ok"] = rep.counit_ok;
  j["algebra_map_ok"] = rep.algebra_map_ok;
  j["antipode_ok"] = rep.antipode_ok;
  j["degenerate_all_primitive"] = rep.degenerate_all_primitive;
  j["failures"] = rep.failures;
  return j;
}

inline Json to_json(const TopClassObstruction& obs, std::uint32_t p) {
  RingDescriptor sq = RingDescriptor::pu_square(p);
  Json j;
  j["in_J"] = obs.in_J;
  j["sign"] = obs.sign;
  j["monomial"] = pretty_monomial(sq, obs.top_monomial);
  j["monomial_canonical"] = render_monomial(sq, obs.top_monomial);
  j["units"] = obs.units.render();
  j["degree"] = obs.degree;
  j["j_span_size"] = obs.j_span_size;
  return j;
}

// ---- word files ----------------------------------------------------------------

/// Input description of an equation: variable count, coefficient values
/// (explicit matrices or `haar:<seed>` literals), and the word text.
struct WordFile {
  int variables = 0;
  std::map<std::string, Json> coefficients;
  std::string word_text;
};

inline WordFile word_file_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("word file must be a JSON object", 0);
  WordFile wf;
  if (!j.contains("variables") || !j["variables"].is_number_integer())
    throw ParseError("word file needs an integer 'variables' field", 0);
  wf.variables = j["variables"].get<int>();
  if (wf.variables < 1) throw ParseError("'variables' must be >= 1", 0);
  if (!j.contains("word") || !j["word"].is_string())
    throw ParseError("word file needs a string 'word' field", 0);
  wf.word_text = j["word"].get<std::string>();
  if (j.contains("coefficients")) {
    if (!j["coefficients"].is_object())
      throw ParseError("'coefficients' must be an object", 0);
    for (const auto& [name, value] : j["coefficients"].items())
      wf.coefficients.emplace(name, value);
  }
  return wf;
}

inline std::set<std::string> coefficient_names(const WordFile& wf) {
  std::set<std::string> names;
  for (const auto& [name, value] : wf.coefficients) names.insert(name);
  return names;
}

inline Word parse_word_file(const WordFile& wf) {
  return parse_word(wf.word_text, wf.variables, coefficient_names(wf));
}

inline bool is_haar_literal(const Json& value) {
  return value.is_string() && value.get<std::string>().rfind("haar:", 0) == 0;
}

inline std::uint64_t haar_literal_seed(const Json& value) {
  std::string s = value.get<std::string>().substr(5);
  if (s.empty()) throw ParseError("malformed haar literal", 0);
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ParseError("malformed haar literal seed '" + s + "'", 0);
  return std::stoull(s);
}

/// Dimension pinned by the explicit matrices, or 0 when the file leaves it
/// free (haar literals only / no coefficients).
inline int word_file_dim(const WordFile& wf) {
  int dim = 0;
  for (const auto& [name, value] : wf.coefficients) {
    if (is_haar_literal(value)) continue;
    if (!value.is_array())
      throw ParseError("coefficient '" + name + "' must be a matrix or haar literal", 0);
    int d = static_cast<int>(value.size());
    if (dim != 0 && d != dim)
      throw InvalidMatrixError("coefficient matrices disagree on the dimension");
    dim = d;
  }
  return dim;
}

/// Turn the file's coefficient entries into group elements, validating
/// unitarity (and the determinant in SU mode) within `tol`.
inline CoefficientAssignment materialize_coefficients(const WordFile& wf, int dim,
                                                      UnitaryMode mode,
                                                      double tol = 1e-6) {
  CoefficientAssignment coeffs;
  for (const auto& [name, value] : wf.coefficients) {
    if (is_haar_literal(value)) {
      coeffs.emplace(name, haar_random(dim, haar_literal_seed(value), mode));
      continue;
    }
    Matrix m = matrix_from_json(value);
    if (m.rows() != dim)
      throw InvalidMatrixError("coefficient '" + name + "' has the wrong dimension");
    if (unitarity_defect(m) > tol)
      throw InvalidMatrixError("coefficient '" + name +
                               "' is not unitary within tolerance");
    if (mode == UnitaryMode::SpecialUnitary &&
        std::abs(m.determinant() - std::complex<double>(1.0)) > tol)
      throw InvalidMatrixError("coefficient '" + name +
                               "' does not have determinant 1");
    coeffs.emplace(name, SpecialUnitaryMatrix::project(m, mode));
  }
  return coeffs;
}

}  // namespace wordsolve
