#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aniso_dbvp/problem.hpp"

namespace adbvp {

struct DerivedConstants {
  double p_minus = 0.0, p_plus = 0.0;
  double w_minus = 0.0, w_plus = 0.0;
  double q_minus = 0.0, q_plus = 0.0;
  double A = 0.0;   ///< w(0) + w(T) + sum_{k=1}^T q(k)
  double K = 0.0;   ///< (2T+2)^{(1-p+)/p+} max{w+,q+}^{(p- - p+)/(p+ p-)}
  double K0 = 0.0;  ///< ((2T+2) max{w+,q+})^{(p- - p+)/(p+ p-)}
  double C1 = 0.0;  ///< (T+1)(w+ + q+)
  double log_K = 0.0;
};

DerivedConstants derived_constants(const ProblemInstance& inst);

struct OpenInterval {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
};

/// One checked hypothesis. For inequalities `lhs < rhs`, margin = rhs - lhs.
struct ConditionResult {
  std::string name;
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  std::string detail;
};

enum class TheoremId { T1_1, T3_2, T3_4, T3_5, T3_8, C3_9 };

const char* to_string(TheoremId id);
std::optional<TheoremId> theorem_from_string(const std::string& s);

/// Verdict and admissible lambda-interval of one existence theorem.
///
/// `interval` is present exactly when every condition holds; `status` is then
/// "certified", otherwise "hypothesis-failed" or "empty-interval".
struct CertificationReport {
  TheoremId theorem = TheoremId::T3_2;
  std::string status;
  std::map<std::string, double> inputs;      ///< c, c1, c2, c3, d, c0 as applicable
  std::vector<ConditionResult> conditions;
  std::optional<OpenInterval> interval;
  std::optional<OpenInterval> norm_bounds;   ///< bounds on ||u0|| (T3.2 family)
  std::optional<double> sup_norm_bound;      ///< ||u0||_inf < c (T3.4 family)
  std::optional<OpenInterval> shell;         ///< (r1, r2) with r1 < Phi(u0) < r2
  std::optional<double> dhat;                ///< T3.8 family
  std::map<std::string, double> quantities;  ///< intermediate values (a_d, sums, r, ...)

  bool certified() const { return interval.has_value(); }
  std::vector<std::string> failed_conditions() const;
};

struct BallMaxOptions {
  int grid_points = 4096;
};

/// max over |xi| <= c of F(k, xi): dense grid plus golden-section refinement of
/// bracketed maxima; never below max(F(k,-c), F(k,0), F(k,c)). For separable
/// forms with g >= 0 on the grid the value G(c) beta(k) is used (cross-checked).
double max_F_on_ball(const ProblemInstance& inst, int k, double c, const BallMaxOptions& opts = {});

/// Sum over k of max_F_on_ball.
double sum_max_F_on_ball(const ProblemInstance& inst, double c, const BallMaxOptions& opts = {});

double sum_F(const ProblemInstance& inst, double d);

/// a_d(c); throws Error(degenerate_denominator) when |denominator| < 1e-300.
double a_d(const ProblemInstance& inst, const DerivedConstants& dc, double d, double c,
           const BallMaxOptions& opts = {});

/// The three strict inequalities K c1/A^{1/p+} < d < (p- K^{p+}/(p+ A))^{1/p-} c2^{p+/p-} < (p-/(p+ A))^{1/p-}.
std::vector<ConditionResult> check_in2(const DerivedConstants& dc, double c1, double d, double c2);

/// w(0)d^{p(0)}/p(0) + w(T)d^{p(T)}/p(T) + sum q(k)d^{p(k)}/p(k).
double dhat(const ProblemInstance& inst, double d);

struct CertifyOptions {
  GrowthOptions growth;
  BallMaxOptions ball;
};

CertificationReport certify_t2(const ProblemInstance& inst, const GrowthCertificate& gc, double c1, double c2,
                               double d, const CertifyOptions& opts = {});
CertificationReport certify_t3(const ProblemInstance& inst, const GrowthCertificate& gc, double c, double d,
                               const CertifyOptions& opts = {});
/// Throws Error(not_separable) when the nonlinearity has no separable form.
CertificationReport certify_t3_separable(const ProblemInstance& inst, const GrowthCertificate& gc, double c,
                                         double d, const CertifyOptions& opts = {});
/// Special case p(k) = k+3, w = q = beta = 1, g >= 0, alpha = 2.
CertificationReport certify_t1_1(const ProblemInstance& inst, const GrowthCertificate& gc, double c, double d,
                                 const CertifyOptions& opts = {});
CertificationReport certify_t4(const ProblemInstance& inst, const GrowthCertificate& gc, double c3, double d,
                               const CertifyOptions& opts = {});
CertificationReport certify_c10(const ProblemInstance& inst, const GrowthCertificate& gc, double c3, double d,
                                const CertifyOptions& opts = {});

}  // namespace adbvp
