#include "aniso_dbvp/functional.hpp"

#include <algorithm>
#include <cmath>

#include "aniso_dbvp/error.hpp"

namespace adbvp {

namespace {

void require_same_grid(const ProblemInstance& inst, const GridFunction& u) {
  if (u.T() != inst.T()) throw Error(Errc::invalid_argument, "grid function size does not match T");
}

double min_p(const ProblemInstance& inst) {
  const auto& p = inst.p_values();
  return *std::min_element(p.begin(), p.end());
}

double max_p(const ProblemInstance& inst) {
  const auto& p = inst.p_values();
  return *std::max_element(p.begin(), p.end());
}

// sum_{k=1}^{T+1} w(k-1)|du(k-1)|^e + q(k)|u(k)|^e
double uniform_exponent_sum(const ProblemInstance& inst, const GridFunction& u, double e) {
  double s = 0.0;
  for (int k = 1; k <= inst.T() + 1; ++k) {
    s += inst.w(k - 1) * abs_pow(u[k] - u[k - 1], e);
    s += inst.q(k) * abs_pow(u[k], e);
  }
  return s;
}

std::vector<double> fluxes(const ProblemInstance& inst, const GridFunction& u) {
  std::vector<double> flux(static_cast<std::size_t>(inst.T()) + 1);
  for (int j = 0; j <= inst.T(); ++j)
    flux[static_cast<std::size_t>(j)] = inst.w(j) * phi_p(u[j + 1] - u[j], inst.p(j));
  return flux;
}

}  // namespace

double abs_pow(double x, double p) {
  if (p == 0.0) return 1.0;
  const double a = std::fabs(x);
  if (a < 1e-300) return 0.0;
  return std::pow(a, p);
}

double phi_p(double x, double p) {
  if (x == 0.0) return 0.0;
  const double m = abs_pow(x, p - 1.0);
  return x > 0.0 ? m : -m;
}

double norm_minus(const ProblemInstance& inst, const GridFunction& u) {
  require_same_grid(inst, u);
  const double pm = min_p(inst);
  return std::pow(uniform_exponent_sum(inst, u, pm), 1.0 / pm);
}

double norm_plus(const ProblemInstance& inst, const GridFunction& u) {
  require_same_grid(inst, u);
  const double pp = max_p(inst);
  return std::pow(uniform_exponent_sum(inst, u, pp), 1.0 / pp);
}

double sup_norm(const GridFunction& u) {
  double m = 0.0;
  for (int k = 1; k <= u.T(); ++k) m = std::max(m, std::fabs(u[k]));
  return m;
}

double modular_phi(const ProblemInstance& inst, const GridFunction& u) {
  require_same_grid(inst, u);
  double s = 0.0;
  for (int k = 1; k <= inst.T() + 1; ++k) {
    s += inst.w(k - 1) * abs_pow(u[k] - u[k - 1], inst.p(k - 1));
    s += inst.q(k) * abs_pow(u[k], inst.p(k));
  }
  return s;
}

double Phi(const ProblemInstance& inst, const GridFunction& u) {
  require_same_grid(inst, u);
  double s = 0.0;
  for (int k = 1; k <= inst.T() + 1; ++k) {
    s += inst.w(k - 1) / inst.p(k - 1) * abs_pow(u[k] - u[k - 1], inst.p(k - 1));
    s += inst.q(k) / inst.p(k) * abs_pow(u[k], inst.p(k));
  }
  return s;
}

double Psi(const ProblemInstance& inst, const GridFunction& u) {
  require_same_grid(inst, u);
  double s = 0.0;
  for (int k = 1; k <= inst.T(); ++k) s += inst.F(k, u[k]);
  return s;
}

double I_lambda(const ProblemInstance& inst, const GridFunction& u, double lambda) {
  return Phi(inst, u) - lambda * Psi(inst, u);
}

EnergyBreakdown energy(const ProblemInstance& inst, const GridFunction& u, double lambda) {
  EnergyBreakdown e;
  e.phi_value = modular_phi(inst, u);
  e.Phi_value = Phi(inst, u);
  e.Psi_value = Psi(inst, u);
  e.I_value = e.Phi_value - lambda * e.Psi_value;
  e.per_k_flux = fluxes(inst, u);
  const double lo = e.phi_value / max_p(inst), hi = e.phi_value / min_p(inst);
  const double slack = 1e-12 * e.phi_value;
  if (e.Phi_value < lo - slack || e.Phi_value > hi + slack)
    throw Error(Errc::invalid_argument, "energy sandwich phi/p+ <= Phi <= phi/p- violated");
  return e;
}

std::vector<double> residual(const ProblemInstance& inst, const GridFunction& u, double lambda) {
  require_same_grid(inst, u);
  const auto flux = fluxes(inst, u);
  std::vector<double> r(static_cast<std::size_t>(inst.T()));
  for (int k = 1; k <= inst.T(); ++k) {
    // -Delta(flux(k-1)) = flux(k-1) - flux(k)
    const double div = flux[static_cast<std::size_t>(k)] - flux[static_cast<std::size_t>(k - 1)];
    r[static_cast<std::size_t>(k - 1)] =
        -div + inst.q(k) * phi_p(u[k], inst.p(k)) - lambda * inst.f(k, u[k]);
  }
  return r;
}

namespace {

// Scatter form of I'(u)(e_k): every flux term w(j) phi(du(j)) du_test(j) is
// distributed to the two unknowns the forward difference touches.
std::vector<double> pairing_gradient(const ProblemInstance& inst, const GridFunction& u, double lambda,
                                     bool include_source) {
  require_same_grid(inst, u);
  const int T = inst.T();
  std::vector<double> g(static_cast<std::size_t>(T), 0.0);
  for (int j = 0; j <= T; ++j) {
    const double fl = inst.w(j) * phi_p(u[j + 1] - u[j], inst.p(j));
    // d/dv of fl * (v(j+1) - v(j))
    if (j + 1 <= T) g[static_cast<std::size_t>(j)] += fl;
    if (j >= 1) g[static_cast<std::size_t>(j - 1)] -= fl;
  }
  for (int k = 1; k <= T; ++k) {
    double gk = inst.q(k) * phi_p(u[k], inst.p(k));
    if (include_source) gk -= lambda * inst.f(k, u[k]);
    g[static_cast<std::size_t>(k - 1)] += gk;
  }
  return g;
}

}  // namespace

std::vector<double> grad_I(const ProblemInstance& inst, const GridFunction& u, double lambda) {
  return pairing_gradient(inst, u, lambda, true);
}

std::vector<double> grad_Phi(const ProblemInstance& inst, const GridFunction& u) {
  return pairing_gradient(inst, u, 0.0, false);
}

double directional_derivative(const ProblemInstance& inst, const GridFunction& u, const GridFunction& v,
                              double lambda) {
  require_same_grid(inst, v);
  const auto g = grad_I(inst, u, lambda);
  double s = 0.0;
  for (int k = 1; k <= inst.T(); ++k) s += g[static_cast<std::size_t>(k - 1)] * v[k];
  return s;
}

Tridiagonal residual_jacobian(const ProblemInstance& inst, const GridFunction& u, double lambda) {
  require_same_grid(inst, u);
  const int T = inst.T();
  const auto n = static_cast<std::size_t>(T);
  // d flux(j) / d du(j) = w(j) (p(j)-1) |du(j)|^{p(j)-2}
  std::vector<double> dflux(n + 1);
  for (int j = 0; j <= T; ++j)
    dflux[static_cast<std::size_t>(j)] = inst.w(j) * (inst.p(j) - 1.0) * abs_pow(u[j + 1] - u[j], inst.p(j) - 2.0);

  Tridiagonal J{std::vector<double>(n > 0 ? n - 1 : 0), std::vector<double>(n), std::vector<double>(n > 0 ? n - 1 : 0)};
  for (int k = 1; k <= T; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    J.diag[i] = dflux[i] + dflux[i + 1] + inst.q(k) * (inst.p(k) - 1.0) * abs_pow(u[k], inst.p(k) - 2.0) -
                lambda * inst.nonlinearity().df(k, u[k]);
    if (k < T) {
      J.sup[i] = -dflux[i + 1];
      J.sub[i] = -dflux[i + 1];
    }
  }
  return J;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace adbvp
