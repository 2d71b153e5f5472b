#include "aniso_dbvp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "aniso_dbvp/error.hpp"
#include "aniso_dbvp/functional.hpp"
#include "parallel.hpp"

namespace adbvp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Vec = std::vector<double>;

GridFunction grid(const Vec& x) { return GridFunction::from_interior(x); }

Vec interior_of(const GridFunction& u) { return Vec(u.interior().begin(), u.interior().end()); }

double norm2(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool all_finite(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

Vec axpy(const Vec& x, double t, const Vec& d) {
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + t * d[i];
  return y;
}

// Thomas algorithm for J x = b; empty result when a pivot vanishes.
std::optional<Vec> thomas(const Tridiagonal& J, const Vec& b) {
  const std::size_t n = b.size();
  Vec c(n), d(n);
  double scale = 0.0;
  for (double v : J.diag) scale = std::max(scale, std::fabs(v));
  for (double v : J.sub) scale = std::max(scale, std::fabs(v));
  if (!(scale > 0.0) || !std::isfinite(scale)) return std::nullopt;
  const double eps = 1e-14 * scale;
  double piv = J.diag[0];
  if (!(std::fabs(piv) > eps)) return std::nullopt;
  c[0] = n > 1 ? J.sup[0] / piv : 0.0;
  d[0] = b[0] / piv;
  for (std::size_t i = 1; i < n; ++i) {
    piv = J.diag[i] - J.sub[i - 1] * c[i - 1];
    if (!(std::fabs(piv) > eps)) return std::nullopt;
    c[i] = i + 1 < n ? J.sup[i] / piv : 0.0;
    d[i] = (b[i] - J.sub[i - 1] * d[i - 1]) / piv;
  }
  Vec x(n);
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  if (!all_finite(x)) return std::nullopt;
  return x;
}

// J^T r for the tridiagonal J (sub[i] sits at row i+1, column i).
Vec transpose_apply(const Tridiagonal& J, const Vec& r) {
  const std::size_t n = r.size();
  Vec g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = J.diag[i] * r[i];
    if (i + 1 < n) g[i] += J.sub[i] * r[i + 1];
    if (i > 0) g[i] += J.sup[i - 1] * r[i - 1];
  }
  return g;
}

SolveResult finish(const ProblemInstance& inst, double lambda, const Vec& x, int iterations, Vec history,
                   double tol) {
  SolveResult res;
  res.u = grid(x);
  const auto r = residual(inst, res.u, lambda);
  res.residual_inf = inf_norm(r);
  res.grad_inf = inf_norm(grad_I(inst, res.u, lambda));
  res.Phi_value = Phi(inst, res.u);
  res.I_value = res.Phi_value - lambda * Psi(inst, res.u);
  res.iterations = iterations;
  res.converged = std::isfinite(res.residual_inf) && res.residual_inf <= tol;
  res.status = res.converged ? "converged" : "no-convergence";
  res.residual_history = std::move(history);
  res.sign_class = classify_sign(res.u);
  res.norm_minus = norm_minus(inst, res.u);
  res.sup_norm = sup_norm(res.u);
  return res;
}

struct Objective {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
};

struct DescentOutcome {
  Vec x;
  int iterations = 0;
};

// Steepest descent with Barzilai-Borwein trial steps and Armijo backtracking.
DescentOutcome descend(const Objective& obj, Vec x, int max_iter, double gtol) {
  double fx = obj.value(x);
  Vec g = obj.gradient(x);
  double alpha = 1.0 / std::max(1.0, inf_norm(g));
  int it = 0;
  for (; it < max_iter; ++it) {
    if (!all_finite(g) || inf_norm(g) <= gtol) break;
    const double gg = dot(g, g);
    bool accepted = false;
    Vec xn;
    double fn = 0.0;
    for (int ls = 0; ls < 200 && alpha > 0.0; ++ls) {
      xn = axpy(x, -alpha, g);
      fn = obj.value(xn);
      if (std::isfinite(fn) && fn <= fx - 1e-4 * alpha * gg) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted || xn == x) break;
    Vec gn = obj.gradient(xn);
    Vec s(x.size()), y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      s[i] = xn[i] - x[i];
      y[i] = gn[i] - g[i];
    }
    const double sy = dot(s, y);
    alpha = sy > 0.0 ? dot(s, s) / sy : 2.0 * alpha;
    if (!std::isfinite(alpha) || alpha <= 0.0) alpha = 1.0 / std::max(1.0, inf_norm(gn));
    x = std::move(xn);
    fx = fn;
    g = std::move(gn);
  }
  return {std::move(x), it};
}

Objective energy_objective(const ProblemInstance& inst, double lambda) {
  return {[&inst, lambda](const Vec& x) { return I_lambda(inst, grid(x), lambda); },
          [&inst, lambda](const Vec& x) { return grad_I(inst, grid(x), lambda); }};
}

// One accepted step of ||r||_2 along d, or nullopt.
std::optional<Vec> line_search(const ProblemInstance& inst, double lambda, const Vec& x, const Vec& d, double rnorm) {
  for (double t = 1.0; t >= 1e-12; t *= 0.5) {
    Vec xn = axpy(x, t, d);
    if (!all_finite(xn)) continue;
    const Vec rn = residual(inst, grid(xn), lambda);
    const double nn = norm2(rn);
    if (std::isfinite(nn) && nn <= (1.0 - 1e-4 * t) * rnorm) return xn;
  }
  return std::nullopt;
}

}  // namespace

const char* to_string(SignClass s) {
  switch (s) {
    case SignClass::zero: return "zero";
    case SignClass::nonnegative: return "nonnegative";
    case SignClass::positive: return "positive";
    case SignClass::sign_changing: return "sign-changing";
  }
  return "?";
}

SignClass classify_sign(const GridFunction& u) {
  const double m = sup_norm(u);
  if (m == 0.0) return SignClass::zero;
  const double eps = 1e-14 * m;
  bool neg = false, pos = false, zero = false;
  for (int k = 1; k <= u.T(); ++k) {
    if (u[k] > eps) pos = true;
    else if (u[k] < -eps) neg = true;
    else zero = true;
  }
  if (pos && neg) return SignClass::sign_changing;
  if (neg) return SignClass::sign_changing;  // nonpositive profiles are not a class of their own
  return zero ? SignClass::nonnegative : SignClass::positive;
}

SolveResult solve_newton(const ProblemInstance& inst, double lambda, const GridFunction& init,
                         const SolverOptions& opts) {
  if (init.T() != inst.T()) throw Error(Errc::invalid_argument, "initial guess size does not match T");
  Vec x = interior_of(init);
  Vec history;
  int it = 0;
  for (;; ++it) {
    const Vec r = residual(inst, grid(x), lambda);
    const double rinf = inf_norm(r);
    history.push_back(rinf);
    if (!std::isfinite(rinf) || rinf <= opts.tol || it >= opts.max_iter) break;
    const double rnorm = norm2(r);
    const Tridiagonal J = residual_jacobian(inst, grid(x), lambda);
    Vec minus_r(r.size());
    std::transform(r.begin(), r.end(), minus_r.begin(), [](double v) { return -v; });

    std::optional<Vec> next;
    if (auto d = thomas(J, minus_r)) next = line_search(inst, lambda, x, *d, rnorm);
    if (!next) {
      // Gradient fallback: steepest descent of ||r||^2/2, then of I_lambda itself.
      Vec d = transpose_apply(J, minus_r);
      const double dn = inf_norm(d);
      if (dn > 0.0 && std::isfinite(dn)) {
        const double scale = rnorm / (dn * dn);
        for (double& v : d) v *= scale;
        next = line_search(inst, lambda, x, d, rnorm);
      }
    }
    if (!next) next = line_search(inst, lambda, x, minus_r, rnorm);
    if (!next) break;
    x = std::move(*next);
  }
  return finish(inst, lambda, x, it, std::move(history), opts.tol);
}

SolveResult minimize_energy(const ProblemInstance& inst, double lambda, const GridFunction& init,
                            const SolverOptions& opts) {
  if (init.T() != inst.T()) throw Error(Errc::invalid_argument, "initial guess size does not match T");
  Vec x = interior_of(init);
  int total = 0;
  double gtol = opts.descent_tol;
  std::optional<SolveResult> climbed;
  SolveResult base;
  for (int round = 0; round < 3; ++round, gtol *= 1e-3) {
    const DescentOutcome dsc = descend(energy_objective(inst, lambda), x, opts.descent_max_iter, gtol);
    total += dsc.iterations;
    x = dsc.x;
    base = finish(inst, lambda, x, total, {}, opts.tol);
    if (base.converged) return base;
    SolveResult polished = solve_newton(inst, lambda, base.u, opts);
    total += polished.iterations;
    polished.iterations = total;
    // Newton may slide to a different critical point; keep it only if it does not climb.
    const double slack = 1e-12 * (1.0 + std::fabs(base.I_value));
    if (polished.converged && polished.I_value <= base.I_value + slack) return polished;
    if (polished.converged && !climbed) climbed = std::move(polished);
    else if (!polished.converged) base.residual_history = std::move(polished.residual_history);
  }
  if (climbed) return *climbed;
  base.iterations = total;
  return base;
}

SolveResult localized_solve(const ProblemInstance& inst, double lambda, double r1, double r2, double d,
                            const SolverOptions& opts) {
  const GridFunction vbar = build_test_function(inst, d);
  const double phi_v = Phi(inst, vbar);
  Localization loc{r1, r2, false};
  if (!(r1 < phi_v && phi_v < r2)) {
    SolveResult res = finish(inst, lambda, interior_of(vbar), 0, {}, opts.tol);
    res.converged = false;
    res.status = "bad-shell";
    res.localization = loc;
    return res;
  }
  auto inside = [&](double phi) { return r1 < phi && phi < r2; };
  if (r1 <= 0.0 && r2 == kInf) {
    SolveResult res = minimize_energy(inst, lambda, vbar, opts);
    res.localization = Localization{r1, r2, inside(res.Phi_value)};
    return res;
  }

  Vec x = interior_of(vbar);
  SolveResult last;
  int total = 0;
  for (int stage = 0; stage < opts.penalty_stages; ++stage) {
    const double mu = opts.penalty_mu0 * std::pow(10.0, stage);
    Objective obj{
        [&, mu](const Vec& v) {
          const GridFunction u = grid(v);
          const double phi = Phi(inst, u);
          const double hi = std::max(0.0, phi - r2), lo = std::max(0.0, r1 - phi);
          return phi - lambda * Psi(inst, u) + mu * (hi * hi + lo * lo);
        },
        [&, mu](const Vec& v) {
          const GridFunction u = grid(v);
          Vec g = grad_I(inst, u, lambda);
          const double phi = Phi(inst, u);
          const double coef = 2.0 * mu * (std::max(0.0, phi - r2) - std::max(0.0, r1 - phi));
          if (coef != 0.0) {
            const Vec gp = grad_Phi(inst, u);
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += coef * gp[i];
          }
          return g;
        }};
    const DescentOutcome dsc = descend(obj, x, opts.descent_max_iter, opts.descent_tol);
    total += dsc.iterations;
    x = dsc.x;
    SolveResult polished = solve_newton(inst, lambda, grid(x), opts);
    total += polished.iterations;
    polished.iterations = total;
    polished.localization = Localization{r1, r2, inside(polished.Phi_value)};
    if (polished.converged && polished.localization->inside) return polished;
    last = std::move(polished);
  }
  last.converged = false;
  last.status = last.localization && last.localization->inside ? "no-convergence" : "left-shell";
  return last;
}

std::vector<double> sweep_lambdas(const OpenInterval& interval, int n, bool log_spacing, double infinite_upper_cap) {
  if (n < 1) throw Error(Errc::invalid_argument, "sweep needs n >= 1");
  if (!(interval.lower < interval.upper))
    throw Error(Errc::empty_interval, "empty-interval: lower >= upper");
  double lo = interval.lower, hi = interval.upper;
  if (!std::isfinite(hi)) hi = lo > 0.0 ? lo * infinite_upper_cap : infinite_upper_cap;
  lo = lo > 0.0 ? lo * (1.0 + 1e-9) : lo + 1e-9 * (hi - lo);
  hi = hi * (1.0 - 1e-9);
  const bool use_log = log_spacing && lo > 0.0;
  std::vector<double> out;
  if (n == 1) {
    out.push_back(use_log ? std::sqrt(lo * hi) : 0.5 * (lo + hi));
    return out;
  }
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / (n - 1);
    out.push_back(use_log ? std::exp(std::log(lo) + s * (std::log(hi) - std::log(lo))) : lo + s * (hi - lo));
  }
  return out;
}

SweepResult sweep_lambda(const ProblemInstance& inst, const OpenInterval& interval, int n, const SolverOptions& opts,
                         const SweepOptions& sweep) {
  SweepResult out;
  out.upper_capped = !std::isfinite(interval.upper);
  const auto lambdas = sweep_lambdas(interval, n, sweep.log_spacing, sweep.infinite_upper_cap);
  const GridFunction vbar = build_test_function(inst, sweep.d);
  std::function<SweepPoint(std::size_t)> first = [&](std::size_t i) {
    SweepPoint pt;
    pt.lambda = lambdas[i];
    try {
      pt.result = minimize_energy(inst, pt.lambda, vbar, opts);
    } catch (const std::exception& e) {
      pt.error = e.what();
      pt.result.status = "error";
    }
    return pt;
  };
  out.points = detail::parallel_map<SweepPoint>(lambdas.size(), sweep.threads, first);

  for (std::size_t i = 1; i < out.points.size(); ++i) {
    auto& pt = out.points[i];
    const auto& prev = out.points[i - 1];
    if (pt.result.converged || !prev.result.converged) continue;
    try {
      SolveResult warm = minimize_energy(inst, pt.lambda, prev.result.u, opts);
      if (warm.converged) {
        pt.result = std::move(warm);
        pt.warm_started = true;
        pt.error.clear();
      }
    } catch (const std::exception& e) {
      if (pt.error.empty()) pt.error = e.what();
    }
  }
  const auto ok = std::count_if(out.points.begin(), out.points.end(), [](const auto& p) { return p.result.converged; });
  out.success_fraction = static_cast<double>(ok) / static_cast<double>(out.points.size());
  return out;
}

std::vector<SolveResult> multi_start(const ProblemInstance& inst, double lambda, int n_starts, std::uint64_t seed,
                                     const SolverOptions& opts, const MultiStartOptions& ms) {
  const int T = inst.T();
  std::vector<GridFunction> starts;
  starts.push_back(GridFunction::zero(T));
  if (ms.d > 0.0) starts.push_back(build_test_function(inst, ms.d));
  const int n_random = std::max(0, n_starts - static_cast<int>(starts.size()));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int pairs = (n_random + 1) / 2;
  for (int i = 0; i < pairs && static_cast<int>(starts.size()) < n_starts; ++i) {
    Vec v(static_cast<std::size_t>(T));
    for (double& x : v) x = unit(rng);
    const double m = inf_norm(v);
    if (m == 0.0) v[0] = 1.0;
    const double s = pairs > 1 ? std::pow(10.0, -6.0 + 7.0 * i / (pairs - 1)) : 1.0;
    for (double& x : v) x *= s / (m == 0.0 ? 1.0 : m);
    starts.push_back(grid(v));
    if (static_cast<int>(starts.size()) < n_starts) {
      for (double& x : v) x = -x;
      starts.push_back(grid(v));
    }
  }
  std::function<std::optional<SolveResult>(std::size_t)> run = [&](std::size_t i) -> std::optional<SolveResult> {
    try {
      SolveResult r = solve_newton(inst, lambda, starts[i], opts);
      if (!r.converged) r = minimize_energy(inst, lambda, starts[i], opts);
      if (r.converged) return r;
    } catch (const std::exception&) {
    }
    return std::nullopt;
  };
  auto found = detail::parallel_map<std::optional<SolveResult>>(starts.size(), ms.threads, run);

  std::vector<SolveResult> distinct;
  for (auto& r : found) {
    if (!r) continue;
    const bool dup = std::any_of(distinct.begin(), distinct.end(), [&](const SolveResult& o) {
      double dist = 0.0;
      for (int k = 1; k <= T; ++k) dist = std::max(dist, std::fabs(o.u[k] - r->u[k]));
      return dist <= std::max(1e-6, 1e-6 * std::max(o.norm_minus, r->norm_minus));
    });
    if (!dup) distinct.push_back(std::move(*r));
  }
  std::stable_sort(distinct.begin(), distinct.end(),
                   [](const SolveResult& a, const SolveResult& b) { return a.I_value < b.I_value; });
  return distinct;
}

}  // namespace adbvp
