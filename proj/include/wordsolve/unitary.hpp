#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "wordsolve/rng.hpp"
#include "wordsolve/words.hpp"

namespace wordsolve {

using Matrix = Eigen::MatrixXcd;

class InvalidMatrixError : public Error {
public:
  using Error::Error;
};

enum class UnitaryMode { SpecialUnitary, Unitary };

inline double unitarity_defect(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
}

namespace detail {

/// QR-based unitarization: Householder Q with the R diagonal rotated to
/// positive reals, then (in SU mode) the determinant phase folded into the
/// first column.
inline Matrix unitarize(const Matrix& a, UnitaryMode mode) {
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    std::complex<double> d = r(j, j);
    double ad = std::abs(d);
    std::complex<double> phase = ad > 0 ? d / ad : 1.0;
    q.col(j) *= phase;
  }
  if (mode == UnitaryMode::SpecialUnitary) {
    std::complex<double> det = q.determinant();
    q.col(0) /= det;
  }
  return q;
}

inline Matrix gaussian_matrix(SplitMix64& rng, int dim) {
  Matrix a(dim, dim);
  for (int j = 0; j < dim; ++j)  // column-major fill order
    for (int i = 0; i < dim; ++i) a(i, j) = rng.next_complex_gaussian();
  return a;
}

}  // namespace detail

/// A p x p matrix with U^H U = I (and det U = 1 in SU mode) within 1e-9,
/// validated at construction.
class SpecialUnitaryMatrix {
public:
  static constexpr double kConstructionTol = 1e-9;

  explicit SpecialUnitaryMatrix(Matrix m, UnitaryMode mode = UnitaryMode::SpecialUnitary)
      : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 1)
      throw InvalidMatrixError("matrix must be square");
    if (unitarity_defect(m_) > kConstructionTol)
      throw InvalidMatrixError("matrix is not unitary within tolerance");
    if (mode == UnitaryMode::SpecialUnitary &&
        std::abs(m_.determinant() - std::complex<double>(1.0)) > kConstructionTol)
      throw InvalidMatrixError("matrix determinant is not 1 within tolerance");
  }

  static SpecialUnitaryMatrix identity(int dim) {
    return SpecialUnitaryMatrix(Matrix::Identity(dim, dim));
  }

  /// Project an arbitrary full-rank matrix onto the group.
  static SpecialUnitaryMatrix project(const Matrix& a,
                                      UnitaryMode mode = UnitaryMode::SpecialUnitary) {
    return SpecialUnitaryMatrix(detail::unitarize(a, mode), mode);
  }

  const Matrix& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

  bool operator==(const SpecialUnitaryMatrix& other) const { return m_ == other.m_; }

private:
  Matrix m_;
};

/// Draw from the Haar measure using an already-positioned stream.
inline Matrix haar_from_stream(SplitMix64& rng, int dim,
                               UnitaryMode mode = UnitaryMode::SpecialUnitary) {
  return detail::unitarize(detail::gaussian_matrix(rng, dim), mode);
}

/// Haar-random element of SU(dim) (or U(dim)); bitwise deterministic per seed.
inline SpecialUnitaryMatrix haar_random(int dim, std::uint64_t seed,
                                        UnitaryMode mode = UnitaryMode::SpecialUnitary) {
  if (dim < 2) throw std::invalid_argument("haar_random requires dim >= 2");
  SplitMix64 rng(seed);
  return SpecialUnitaryMatrix(haar_from_stream(rng, dim, mode), mode);
}

using CoefficientAssignment = std::map<std::string, SpecialUnitaryMatrix>;

namespace detail {

inline const Matrix& coefficient_matrix(const CoefficientAssignment& coeffs,
                                        const std::string& symbol) {
  auto it = coeffs.find(symbol);
  if (it == coeffs.end()) throw Error("unresolved coefficient symbol '" + symbol + "'");
  return it->second.matrix();
}

inline Matrix token_value(const Token& t, const std::vector<Matrix>& vars,
                          const CoefficientAssignment& coeffs) {
  if (const auto* vp = std::get_if<VariablePower>(&t)) {
    if (static_cast<std::size_t>(vp->index) > vars.size())
      throw Error("unresolved variable x" + std::to_string(vp->index));
    const Matrix& v = vars[static_cast<std::size_t>(vp->index - 1)];
    Matrix base = vp->exponent >= 0 ? v : Matrix(v.adjoint());
    std::int64_t reps = vp->exponent >= 0 ? vp->exponent : -vp->exponent;
    Matrix out = Matrix::Identity(v.rows(), v.cols());
    for (std::int64_t k = 0; k < reps; ++k) out = out * base;
    return out;
  }
  const auto& cr = std::get<CoefficientRef>(t);
  const Matrix& g = coefficient_matrix(coeffs, cr.symbol);
  return cr.inverted ? Matrix(g.adjoint()) : g;
}

}  // namespace detail

/// Evaluate the word map: left-to-right product of token values. Negative
/// variable exponents use the conjugate transpose; the empty word is I.
inline Matrix evaluate(const Word& w, const std::vector<Matrix>& vars,
                       const CoefficientAssignment& coeffs) {
  if (static_cast<int>(vars.size()) > w.variable_count())
    throw std::invalid_argument("more variable matrices than variables");
  Eigen::Index dim = 0;
  for (const Matrix& v : vars) {
    if (dim == 0) dim = v.rows();
    if (v.rows() != dim || v.cols() != dim)
      throw std::invalid_argument("dimension mismatch among variables");
  }
  for (const auto& [name, g] : coeffs) {
    if (dim == 0) dim = g.matrix().rows();
    if (g.matrix().rows() != dim)
      throw std::invalid_argument("dimension mismatch among coefficients");
  }
  if (dim == 0) throw std::invalid_argument("cannot infer dimension");

  Matrix acc = Matrix::Identity(dim, dim);
  for (const Token& t : w.tokens()) acc = acc * detail::token_value(t, vars, coeffs);
  return acc;
}

/// Projection onto the tangent directions: skew-Hermitian part, made
/// traceless in SU mode.
inline Matrix tangent_project(const Matrix& x, UnitaryMode mode = UnitaryMode::SpecialUnitary) {
  Matrix skew = 0.5 * (x - x.adjoint());
  if (mode == UnitaryMode::SpecialUnitary) {
    std::complex<double> tr = skew.trace() / static_cast<double>(skew.rows());
    skew -= tr * Matrix::Identity(skew.rows(), skew.cols());
  }
  return skew;
}

struct WordGradient {
  double f = 0.0;                    // squared Frobenius residual
  std::vector<Matrix> euclidean;     // d f / d conj(v), so that df = Re tr(G^H dv)
  std::vector<Matrix> riemannian;    // v * P(v^H G)
};

/// Objective f = |w(vars) - target|_F^2 with gradients accumulated over every
/// occurrence of each variable via prefix/suffix products; inverse
/// occurrences use d(v^-1) = -v^-1 dv v^-1.
inline WordGradient residual_and_gradient(const Word& w, const std::vector<Matrix>& vars,
                                          const CoefficientAssignment& coeffs,
                                          const Matrix& target,
                                          UnitaryMode mode = UnitaryMode::SpecialUnitary) {
  const Eigen::Index dim = target.rows();
  const std::size_t ntok = w.tokens().size();

  std::vector<Matrix> values(ntok);
  for (std::size_t k = 0; k < ntok; ++k)
    values[k] = detail::token_value(w.tokens()[k], vars, coeffs);

  std::vector<Matrix> prefix(ntok + 1), suffix(ntok + 1);
  prefix[0] = Matrix::Identity(dim, dim);
  for (std::size_t k = 0; k < ntok; ++k) prefix[k + 1] = prefix[k] * values[k];
  suffix[ntok] = Matrix::Identity(dim, dim);
  for (std::size_t k = ntok; k > 0; --k) suffix[k - 1] = values[k - 1] * suffix[k];

  Matrix err = prefix[ntok] - target;

  WordGradient out;
  out.f = err.squaredNorm();
  out.euclidean.assign(vars.size(), Matrix::Zero(dim, dim));

  // powers of v and v^H per variable, up to the largest |exponent|
  std::vector<std::int64_t> maxpow(vars.size(), 0);
  for (const Token& t : w.tokens())
    if (const auto* vp = std::get_if<VariablePower>(&t)) {
      std::int64_t a = vp->exponent >= 0 ? vp->exponent : -vp->exponent;
      auto& mp = maxpow[static_cast<std::size_t>(vp->index - 1)];
      mp = std::max(mp, a);
    }
  std::vector<std::vector<Matrix>> vpow(vars.size()), vhpow(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    vpow[i].push_back(Matrix::Identity(dim, dim));
    vhpow[i].push_back(Matrix::Identity(dim, dim));
    for (std::int64_t k = 1; k <= maxpow[i]; ++k) {
      vpow[i].push_back(vpow[i].back() * vars[i]);
      vhpow[i].push_back(vhpow[i].back() * vars[i].adjoint());
    }
  }

  for (std::size_t k = 0; k < ntok; ++k) {
    const auto* vp = std::get_if<VariablePower>(&w.tokens()[k]);
    if (!vp) continue;
    std::size_t vi = static_cast<std::size_t>(vp->index - 1);
    std::int64_t s = vp->exponent;
    if (s > 0) {
      for (std::int64_t j = 0; j < s; ++j) {
        Matrix a = prefix[k] * vpow[vi][static_cast<std::size_t>(j)];
        Matrix b = vpow[vi][static_cast<std::size_t>(s - 1 - j)] * suffix[k + 1];
        out.euclidean[vi] += 2.0 * (a.adjoint() * err * b.adjoint());
      }
    } else {
      std::int64_t t = -s;
      for (std::int64_t j = 0; j < t; ++j) {
        Matrix a = prefix[k] * vhpow[vi][static_cast<std::size_t>(j + 1)];
        Matrix b = vhpow[vi][static_cast<std::size_t>(t - j)] * suffix[k + 1];
        out.euclidean[vi] -= 2.0 * (a.adjoint() * err * b.adjoint());
      }
    }
  }

  out.riemannian.resize(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i)
    out.riemannian[i] = vars[i] * tangent_project(vars[i].adjoint() * out.euclidean[i], mode);
  return out;
}

struct SolveConfig {
  double tol = 1e-8;            // Frobenius residual threshold
  int max_iters = 5000;         // per restart
  int restarts = 50;
  std::uint64_t seed = 0;
  double initial_step = 1.0;
  double shrink = 0.5;
  double armijo_c = 1e-4;
  int reproject_period = 100;
  UnitaryMode mode = UnitaryMode::SpecialUnitary;
  int threads = 0;  // 0: WORDSOLVE_THREADS env var, else hardware concurrency
};

struct Solution {
  std::vector<SpecialUnitaryMatrix> assignment;  // one per variable
  double residual = 0.0;
  int restart_index = -1;
  long long iterations = 0;
};

/// Aggregated instrumentation across restarts, for invariant monitoring.
struct SolveDiagnostics {
  double max_unitarity_drift = 0.0;  // worst |v^H v - I| seen before reprojection
  bool objective_monotone = true;    // across accepted Armijo steps
  long long total_iterations = 0;
};

namespace detail {

/// Exact exponential of a (traceless) skew-Hermitian matrix via the
/// eigendecomposition of -i * Omega.
struct SkewExponential {
  Eigen::SelfAdjointEigenSolver<Matrix> eig;

  explicit SkewExponential(const Matrix& omega)
      : eig(Matrix(std::complex<double>(0, -1) * omega)) {}

  Matrix step(double eta) const {
    const auto& values = eig.eigenvalues();
    Eigen::VectorXcd phases(values.size());
    for (Eigen::Index k = 0; k < values.size(); ++k)
      phases(k) = std::exp(std::complex<double>(0, eta * values(k)));
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
  }
};

struct RestartResult {
  bool solved = false;
  std::vector<Matrix> vars;
  double residual = 0.0;
  long long iterations = 0;
};

inline RestartResult run_restart(const Word& w, const CoefficientAssignment& coeffs,
                                 const Matrix& target, const SolveConfig& cfg,
                                 int restart_index, SolveDiagnostics* diag,
                                 std::mutex* diag_mutex) {
  const int dim = static_cast<int>(target.rows());
  const int nvars = w.variable_count();

  SplitMix64 rng(cfg.seed + static_cast<std::uint64_t>(restart_index));
  std::vector<Matrix> vars;
  vars.reserve(static_cast<std::size_t>(nvars));
  for (int i = 0; i < nvars; ++i) vars.push_back(haar_from_stream(rng, dim, cfg.mode));

  double local_drift = 0.0;
  bool local_monotone = true;

  RestartResult result;
  WordGradient g = residual_and_gradient(w, vars, coeffs, target, cfg.mode);
  long long iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    if (std::sqrt(g.f) <= cfg.tol) break;

    std::vector<Matrix> omegas(static_cast<std::size_t>(nvars));
    double grad_sq = 0.0;
    for (int i = 0; i < nvars; ++i) {
      omegas[static_cast<std::size_t>(i)] =
          tangent_project(vars[static_cast<std::size_t>(i)].adjoint() *
                              g.euclidean[static_cast<std::size_t>(i)],
                          cfg.mode);
      grad_sq += omegas[static_cast<std::size_t>(i)].squaredNorm();
    }
    if (grad_sq < 1e-30) break;  // first-order stationary, give up this restart

    std::vector<SkewExponential> exps;
    exps.reserve(static_cast<std::size_t>(nvars));
    for (int i = 0; i < nvars; ++i) exps.emplace_back(omegas[static_cast<std::size_t>(i)]);

    double eta = cfg.initial_step;
    bool accepted = false;
    std::vector<Matrix> trial(static_cast<std::size_t>(nvars));
    WordGradient gtrial;
    while (eta > 1e-18) {
      for (int i = 0; i < nvars; ++i)
        trial[static_cast<std::size_t>(i)] =
            vars[static_cast<std::size_t>(i)] * exps[static_cast<std::size_t>(i)].step(-eta);
      gtrial = residual_and_gradient(w, trial, coeffs, target, cfg.mode);
      if (gtrial.f <= g.f - cfg.armijo_c * eta * grad_sq) {
        accepted = true;
        break;
      }
      eta *= cfg.shrink;
    }
    if (!accepted) break;
    if (gtrial.f > g.f) local_monotone = false;

    vars = std::move(trial);
    g = std::move(gtrial);

    if ((iter + 1) % cfg.reproject_period == 0) {
      for (int i = 0; i < nvars; ++i) {
        local_drift = std::max(local_drift, unitarity_defect(vars[static_cast<std::size_t>(i)]));
        vars[static_cast<std::size_t>(i)] = unitarize(vars[static_cast<std::size_t>(i)], cfg.mode);
      }
      g = residual_and_gradient(w, vars, coeffs, target, cfg.mode);
    }
  }

  result.vars = std::move(vars);
  result.residual = std::sqrt(residual_and_gradient(w, result.vars, coeffs, target, cfg.mode).f);
  result.solved = result.residual <= cfg.tol;
  result.iterations = iter;

  if (diag) {
    std::lock_guard<std::mutex> lock(*diag_mutex);
    diag->max_unitarity_drift = std::max(diag->max_unitarity_drift, local_drift);
    diag->objective_monotone = diag->objective_monotone && local_monotone;
    diag->total_iterations += iter;
  }
  return result;
}

inline int resolve_thread_count(const SolveConfig& cfg) {
  int threads = cfg.threads;
  if (threads <= 0) {
    if (const char* env = std::getenv("WORDSOLVE_THREADS")) threads = std::atoi(env);
  }
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 0) threads = 1;
  return std::min(threads, cfg.restarts);
}

}  // namespace detail

/// Riemannian descent with random restarts. Returns the solution of the
/// lowest-numbered successful restart (deterministic under any restart
/// parallelism); no value means the budget was exhausted, never that no
/// solution exists.
inline std::optional<Solution> solve(const Word& w, const CoefficientAssignment& coeffs,
                                     const Matrix& target, const SolveConfig& cfg,
                                     SolveDiagnostics* diag = nullptr) {
  if (w.variable_count() < 1)
    throw std::invalid_argument("solve requires at least one variable");
  if (target.rows() != target.cols() || target.rows() < 2)
    throw std::invalid_argument("target must be square of dimension >= 2");
  if (cfg.tol <= 0 || cfg.max_iters < 1 || cfg.restarts < 1 || cfg.initial_step <= 0 ||
      cfg.shrink <= 0 || cfg.shrink >= 1 || cfg.armijo_c <= 0 ||
      cfg.reproject_period < 1)
    throw std::invalid_argument("invalid solver configuration");

  const int threads = detail::resolve_thread_count(cfg);
  std::mutex mutex;
  std::atomic<int> next{0};
  std::atomic<int> best{cfg.restarts};
  std::map<int, detail::RestartResult> successes;
  std::exception_ptr failure;

  auto worker = [&]() {
    try {
      for (;;) {
        int r = next.fetch_add(1);
        if (r >= cfg.restarts || r > best.load()) return;
        detail::RestartResult res =
            detail::run_restart(w, coeffs, target, cfg, r, diag, &mutex);
        std::lock_guard<std::mutex> lock(mutex);
        if (res.solved) {
          int cur = best.load();
          while (r < cur && !best.compare_exchange_weak(cur, r)) {
          }
          successes.emplace(r, std::move(res));
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(mutex);
      if (!failure) failure = std::current_exception();
      best.store(-1);  // stop dispatching further restarts
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  int winner = best.load();
  if (winner >= cfg.restarts) return std::nullopt;
  detail::RestartResult& res = successes.at(winner);

  Solution sol;
  sol.assignment.reserve(res.vars.size());
  for (const Matrix& v : res.vars) sol.assignment.emplace_back(v, cfg.mode);
  // recompute the residual from the returned assignment
  std::vector<Matrix> mats;
  mats.reserve(res.vars.size());
  for (const auto& v : sol.assignment) mats.push_back(v.matrix());
  sol.residual = std::sqrt(residual_and_gradient(w, mats, coeffs, target, cfg.mode).f);
  sol.restart_index = winner;
  sol.iterations = res.iterations;
  return sol;
}

struct TargetResult {
  std::uint64_t target_seed = 0;
  bool solved = false;
  double residual = 0.0;
  int restart_index = -1;
  long long iterations = 0;
};

struct ScanReport {
  int num_targets = 0;
  int successes = 0;
  double success_rate = 0.0;
  double worst_residual = 0.0;  // over solved targets
  std::vector<TargetResult> targets;
};

/// Solve against Haar-random targets; target t uses the derived seeds
/// (seed, 2t+1) for the target draw and (seed, 2t+2) for its solver stream.
inline ScanReport surjectivity_scan(const Word& w, const CoefficientAssignment& coeffs,
                                    int dim, int num_targets, const SolveConfig& cfg) {
  if (num_targets < 1) throw std::invalid_argument("num_targets must be >= 1");
  ScanReport rep;
  rep.num_targets = num_targets;
  for (int t = 0; t < num_targets; ++t) {
    TargetResult tr;
    tr.target_seed = derive_seed(cfg.seed, 2 * static_cast<std::uint64_t>(t) + 1);
    Matrix target = haar_random(dim, tr.target_seed, cfg.mode).matrix();
    SolveConfig sub = cfg;
    sub.seed = derive_seed(cfg.seed, 2 * static_cast<std::uint64_t>(t) + 2);
    std::optional<Solution> sol = solve(w, coeffs, target, sub);
    if (sol) {
      tr.solved = true;
      tr.residual = sol->residual;
      tr.restart_index = sol->restart_index;
      tr.iterations = sol->iterations;
      ++rep.successes;
      rep.worst_residual = std::max(rep.worst_residual, tr.residual);
    } else {
      tr.solved = false;
      tr.residual = std::numeric_limits<double>::infinity();
    }
    rep.targets.push_back(tr);
  }
  rep.success_rate = static_cast<double>(rep.successes) / num_targets;
  return rep;
}

}  // namespace wordsolve
