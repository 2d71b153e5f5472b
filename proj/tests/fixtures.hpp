#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "aniso_dbvp/problem.hpp"

namespace fixtures {

using adbvp::GrowthCertificate;
using adbvp::Nonlinearity;
using adbvp::ProblemInstance;

inline ProblemInstance exp_weights_instance() {
  const int T = 10;
  std::vector<double> w, q, p;
  for (int k = 0; k <= T; ++k) w.push_back(std::exp(k * (10.0 - k) * (10.0 - k)));
  for (int k = 1; k <= T + 1; ++k) q.push_back(std::pow(2.0, k));
  for (int k = 0; k <= T + 1; ++k) p.push_back(2.0 * k / 11.0 + 3.0);
  auto f = [](int k, double x) { return std::exp((k + 2.0) * (k - 13.0)) * x / std::pow(x * x + 1e-11, 2); };
  auto F = [](int k, double t) { return 1e11 / 2.0 * std::exp((k + 2.0) * (k - 13.0)) * t * t / (t * t + 1e-11); };
  auto df = [](int k, double x) {
    return std::exp((k + 2.0) * (k - 13.0)) * (1e-11 - 3.0 * x * x) / std::pow(x * x + 1e-11, 3);
  };
  Nonlinearity nl(f, F, df);
  nl.growth = GrowthCertificate{1.2e-5, std::vector<double>(T, 2.0)};
  return ProblemInstance(T, w, q, p, nl, 1.0);
}

inline adbvp::SeparableForm atan_form(int T) {
  adbvp::SeparableForm s;
  s.beta.assign(T, 1.0);
  s.g = [](double x) { return 1.0 / (std::pow(400.0 * x, 2) + 1.0); };
  s.G = [](double t) { return std::atan(400.0 * t) / 400.0; };
  s.dg = [](double x) { return -320000.0 * x / std::pow(std::pow(400.0 * x, 2) + 1.0, 2); };
  return s;
}

inline ProblemInstance linear_exponent_instance() {
  const int T = 10;
  std::vector<double> p;
  for (int k = 0; k <= T + 1; ++k) p.push_back(k + 3.0);
  Nonlinearity nl = Nonlinearity::separable(atan_form(T));
  nl.growth = GrowthCertificate{0.0039, std::vector<double>(T, 2.0)};
  return ProblemInstance(T, std::vector<double>(T + 1, 1.0), std::vector<double>(T + 1, 1.0), p, nl, 1.0);
}

/// T=2, p = 2, w = q = 1, f = 1: the minimizer solves a 2x2 linear system, u = (1/2, 1/2).
inline ProblemInstance linear_t2() {
  Nonlinearity nl([](int, double) { return 1.0; }, [](int, double t) { return t; }, [](int, double) { return 0.0; });
  return ProblemInstance(2, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, {2.0, 2.0, 2.0, 2.0}, nl);
}

/// T=2 with f = b(k)/(1+x^2): F <= b pi/2, so Phi(u) <= lambda * sum b pi/2 at any minimizer.
struct SmallCase {
  ProblemInstance inst;
  double lambda;
  double box_radius;
};

inline SmallCase random_t2(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> weight(1.0, 2.0), expo(2.0, 3.0), lam(0.1, 2.0), amp(0.5, 1.5);
  std::vector<double> w{weight(rng), weight(rng), weight(rng)};
  std::vector<double> q{weight(rng), weight(rng), weight(rng)};
  std::vector<double> p{expo(rng), expo(rng), expo(rng), expo(rng)};
  std::vector<double> b{amp(rng), amp(rng)};
  const double lambda = lam(rng);
  Nonlinearity nl([b](int k, double x) { return b[k - 1] / (1.0 + x * x); },
                  [b](int k, double t) { return b[k - 1] * std::atan(t); },
                  [b](int k, double x) { return -2.0 * b[k - 1] * x / std::pow(1.0 + x * x, 2); });
  // q(k)|u(k)|^p(k)/p(k) <= Phi(u) <= lambda T max(b) pi/2 bounds each coordinate.
  double radius = 0.0;
  const double budget = lambda * 2.0 * std::max(b[0], b[1]) * M_PI / 2.0;
  for (int k = 1; k <= 2; ++k) radius = std::max(radius, std::pow(p[k] * budget / q[k - 1], 1.0 / p[k]));
  return {ProblemInstance(2, w, q, p, nl), lambda, 1.05 * radius};
}

}  // namespace fixtures
