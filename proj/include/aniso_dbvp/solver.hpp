#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aniso_dbvp/hypothesis.hpp"
#include "aniso_dbvp/problem.hpp"

namespace adbvp {

struct SolverOptions {
  double tol = 1e-10;         ///< residual_inf threshold for convergence
  int max_iter = 200;         ///< Newton iterations
  int descent_max_iter = 5000;
  double descent_tol = 1e-6;  ///< grad_inf at which descent hands over to Newton
  double penalty_mu0 = 1.0;
  int penalty_stages = 12;
};

enum class SignClass { zero, nonnegative, positive, sign_changing };
const char* to_string(SignClass s);

struct Localization {
  double r1 = 0.0;
  double r2 = 0.0;
  bool inside = false;
};

struct SolveResult {
  GridFunction u = GridFunction::zero(1);
  double I_value = 0.0;
  double residual_inf = 0.0;
  double grad_inf = 0.0;
  double Phi_value = 0.0;
  int iterations = 0;
  bool converged = false;
  /// "converged", "no-convergence", "left-shell", "bad-shell"
  std::string status;
  std::vector<double> residual_history;
  std::optional<Localization> localization;
  SignClass sign_class = SignClass::zero;
  double norm_minus = 0.0;
  double sup_norm = 0.0;
};

/// Entries with |u(k)| <= 1e-14 sup|u| count as zero.
SignClass classify_sign(const GridFunction& u);

SolveResult solve_newton(const ProblemInstance& inst, double lambda, const GridFunction& init,
                         const SolverOptions& opts = {});

/// Gradient descent (Armijo 1e-4, shrink 0.5) polished by solve_newton.
SolveResult minimize_energy(const ProblemInstance& inst, double lambda, const GridFunction& init,
                            const SolverOptions& opts = {});

/// Minimizer inside r1 < Phi(u) < r2 started from vbar(d).
SolveResult localized_solve(const ProblemInstance& inst, double lambda, double r1, double r2, double d,
                            const SolverOptions& opts = {});

struct SweepOptions {
  bool log_spacing = true;
  double d = 0.0;                ///< start profile vbar(d)
  double infinite_upper_cap = 1e3;  ///< upper used when the interval is unbounded: lower * cap
  unsigned threads = 0;         ///< 0 = hardware concurrency
};

struct SweepPoint {
  double lambda = 0.0;
  SolveResult result;
  bool warm_started = false;
  std::string error;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double success_fraction = 0.0;
  bool upper_capped = false;
};

/// Lambdas strictly inside (lower, upper), offset 1e-9 relative from each end.
std::vector<double> sweep_lambdas(const OpenInterval& interval, int n, bool log_spacing,
                                  double infinite_upper_cap = 1e3);

/// Throws Error(empty_interval) when lower >= upper.
SweepResult sweep_lambda(const ProblemInstance& inst, const OpenInterval& interval, int n,
                         const SolverOptions& opts = {}, const SweepOptions& sweep = {});

struct MultiStartOptions {
  double d = 0.0;
  unsigned threads = 0;
};

/// Distinct converged critical points, sorted by I value.
std::vector<SolveResult> multi_start(const ProblemInstance& inst, double lambda, int n_starts, std::uint64_t seed,
                                     const SolverOptions& opts = {}, const MultiStartOptions& ms = {});

}  // namespace adbvp
