#pragma once

#include <vector>

#include "aniso_dbvp/problem.hpp"

namespace adbvp {

/// |x|^p with the |x| < 1e-300 shortcut to 0 (and |x|^0 = 1).
double abs_pow(double x, double p);
/// |x|^{p-2} x, continuously extended by 0 at x = 0 (p >= 2).
double phi_p(double x, double p);

struct EnergyBreakdown {
  double phi_value = 0.0;  ///< modular: sum w|du|^p + q|u|^p
  double Phi_value = 0.0;
  double Psi_value = 0.0;
  double I_value = 0.0;
  std::vector<double> per_k_flux;  ///< w(k-1) phi_{p(k-1)}(du(k-1)), k = 1..T+1
};

double norm_minus(const ProblemInstance& inst, const GridFunction& u);
double norm_plus(const ProblemInstance& inst, const GridFunction& u);
double sup_norm(const GridFunction& u);
double modular_phi(const ProblemInstance& inst, const GridFunction& u);

double Phi(const ProblemInstance& inst, const GridFunction& u);
double Psi(const ProblemInstance& inst, const GridFunction& u);
double I_lambda(const ProblemInstance& inst, const GridFunction& u, double lambda);

/// Full breakdown; throws Error(invalid_argument) if the sandwich
/// phi/p+ <= Phi <= phi/p- is broken beyond rounding.
EnergyBreakdown energy(const ProblemInstance& inst, const GridFunction& u, double lambda);

/// Euler-Lagrange residual in divergence form, components k = 1..T.
std::vector<double> residual(const ProblemInstance& inst, const GridFunction& u, double lambda);

/// Gradient of I_lambda from the pairing I'(u)(e_k), components k = 1..T.
std::vector<double> grad_I(const ProblemInstance& inst, const GridFunction& u, double lambda);

/// Gradient of Phi alone (lambda = 0 pairing).
std::vector<double> grad_Phi(const ProblemInstance& inst, const GridFunction& u);

/// I'(u)(v).
double directional_derivative(const ProblemInstance& inst, const GridFunction& u,
                              const GridFunction& v, double lambda);

/// Tridiagonal Jacobian of the residual: sub[k] couples rows k+1,k, diag[k], sup[k] rows k,k+1
/// (zero-based over the T interior unknowns).
struct Tridiagonal {
  std::vector<double> sub, diag, sup;
};
Tridiagonal residual_jacobian(const ProblemInstance& inst, const GridFunction& u, double lambda);

double inf_norm(const std::vector<double>& v);

}  // namespace adbvp
