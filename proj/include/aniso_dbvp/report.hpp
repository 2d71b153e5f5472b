#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "aniso_dbvp/hypothesis.hpp"
#include "aniso_dbvp/oracle.hpp"
#include "aniso_dbvp/solver.hpp"

namespace adbvp {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Finite values as numbers; inf, -inf and nan as strings.
Json encode_number(double x);
double decode_number(const Json& j);

Json to_json(const DerivedConstants& dc);
Json to_json(const CertificationReport& rep);
Json to_json(const SolveResult& res);
Json to_json(const SweepResult& sweep);
Json to_json(const VerificationVerdict& v);
Json to_json(const GrowthCheck& g);
Json to_json(const std::vector<Violation>& violations);

CertificationReport certification_from_json(const Json& j);
SolveResult solve_result_from_json(const Json& j);

/// Flat rows: lambda,converged,I,residual_inf,sup_norm,norm_minus.
std::string sweep_csv(const SweepResult& sweep);
std::string solutions_csv(double lambda, const std::vector<SolveResult>& results);

}  // namespace adbvp
