#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "aniso_dbvp/hypothesis.hpp"
#include "aniso_dbvp/problem.hpp"

namespace adbvp {

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerificationVerdict {
  std::vector<Check> checks;
  bool overall = false;
  std::vector<std::string> counterexamples;

  const Check* find(const std::string& name) const;
};

struct BruteForceResult {
  GridFunction u = GridFunction::zero(1);
  double I_value = 0.0;
  double step = 0.0;         ///< coarse grid step
  double refined_step = 0.0;
};

/// Exhaustive grid minimum of I_lambda over [-R, R]^T, refined once at step/10.
/// Throws Error(instance_too_large) for T > 3.
BruteForceResult brute_force_min(const ProblemInstance& inst, double lambda, double box_radius, int grid_n = 201);

/// 2 max(1, upper norm bound of the report), or 2 without one.
double default_box_radius(const std::optional<CertificationReport>& report);

/// Checks boundary, residual <= 1e-8, nontriviality, report bounds and sign.
VerificationVerdict verify_solution(const ProblemInstance& inst, double lambda, std::span<const double> values,
                                    const std::optional<CertificationReport>& report = std::nullopt);

struct PropertyCase {
  ProblemInstance inst;
  GridFunction u;
};

using InstanceGenerator = std::function<PropertyCase(std::mt19937_64&, int case_index)>;

/// T in [2,12], w and q log-uniform in [1, 1e12] (or all ones), p in [2,8],
/// u entries at mixed scales 1e-6..1e3; case 0 is u = 0.
PropertyCase default_property_case(std::mt19937_64& rng, int case_index);

/// One check per inequality; value is the violation count.
VerificationVerdict property_suite(const InstanceGenerator& gen, int n_cases, std::uint64_t seed);

struct CoercivityOptions {
  int n_rays = 16;
  double max_scale = 1e6;
  int samples_per_decade = 10;
  std::uint64_t seed = 0;
};

/// I_lambda(s v) against the explicit coercivity lower bound along random rays.
VerificationVerdict coercivity_probe(const ProblemInstance& inst, double lambda, const GrowthCertificate& gc,
                                     const CoercivityOptions& opts = {});

}  // namespace adbvp
