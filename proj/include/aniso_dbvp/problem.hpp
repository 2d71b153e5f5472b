#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace adbvp {

using PointFn = std::function<double(int k, double x)>;
using ScalarFn = std::function<double(double x)>;

/// Sub-critical growth certificate F(k,t) <= c0 (1 + |t|^alpha(k)).
struct GrowthCertificate {
  double c0 = 0.0;
  std::vector<double> alpha;  ///< alpha(k) for k = 1..T, stored at [k-1]

  double alpha_plus() const;
  double alpha_minus() const;
};

/// f(k,x) = beta(k) g(x), with G the primitive of g.
struct SeparableForm {
  std::vector<double> beta;       ///< beta(k) for k = 1..T, stored at [k-1]
  ScalarFn g;
  ScalarFn G;                     ///< optional closed-form primitive of g
  ScalarFn dg;                    ///< optional derivative of g
};

/// Right-hand side f together with its primitive F(k,t) = int_0^t f(k,s) ds.
///
/// When a closed-form primitive is registered it is authoritative; otherwise F
/// is computed by adaptive Gauss-Kronrod quadrature (abs 1e-12, rel 1e-10).
class Nonlinearity {
 public:
  Nonlinearity() = default;
  explicit Nonlinearity(PointFn f, PointFn F = {}, PointFn df = {});
  static Nonlinearity separable(SeparableForm form);

  double f(int k, double x) const;
  /// Primitive; throws Error(f_quadrature_failed) when quadrature cannot meet tolerance.
  double F(int k, double t) const;
  /// Primitive by quadrature only, ignoring any closed form.
  double F_quadrature(int k, double t) const;
  /// The registered closed form evaluated as-is (no shortcut at t = 0).
  double F_closed(int k, double t) const;
  /// Integral of f(k,.) over [a,b] by quadrature.
  double integrate(int k, double a, double b) const;
  /// d f / d x, analytic when registered, otherwise central difference.
  double df(int k, double x) const;

  bool has_closed_form() const;
  bool has_derivative() const;
  const std::optional<SeparableForm>& separable_form() const { return separable_; }

  std::optional<GrowthCertificate> growth;

 private:
  PointFn f_;
  PointFn F_;
  PointFn df_;
  std::optional<SeparableForm> separable_;
};

double eval_F(const Nonlinearity& nl, int k, double t);

/// int_a^b f by adaptive quadrature; throws Error(f_quadrature_failed).
double integrate_scalar(const ScalarFn& f, double a, double b);
/// int_0^t f by adaptive quadrature over decade-split segments.
double primitive_scalar(const ScalarFn& f, double t);

/// Data of the discrete Dirichlet problem on [0, T+1].
class ProblemInstance {
 public:
  /// w: k = 0..T (size T+1); q: k = 1..T+1 (size T+1); p: k = 0..T+1 (size T+2).
  /// Throws Error(invalid_argument) on T < 1 or size mismatch; value
  /// constraints are reported by validate_instance instead.
  ProblemInstance(int T, std::vector<double> w, std::vector<double> q, std::vector<double> p,
                  Nonlinearity nonlinearity, std::optional<double> lambda = std::nullopt);

  int T() const noexcept { return T_; }
  double w(int k) const { return w_[static_cast<std::size_t>(k)]; }
  double q(int k) const { return q_[static_cast<std::size_t>(k - 1)]; }
  double p(int k) const { return p_[static_cast<std::size_t>(k)]; }

  const std::vector<double>& w_values() const noexcept { return w_; }
  const std::vector<double>& q_values() const noexcept { return q_; }
  const std::vector<double>& p_values() const noexcept { return p_; }

  const Nonlinearity& nonlinearity() const noexcept { return nl_; }
  std::optional<double> lambda() const noexcept { return lambda_; }

  double f(int k, double x) const { return nl_.f(k, x); }
  double F(int k, double t) const { return nl_.F(k, t); }

 private:
  int T_;
  std::vector<double> w_;
  std::vector<double> q_;
  std::vector<double> p_;
  Nonlinearity nl_;
  std::optional<double> lambda_;
};

/// An element of W: values on [0, T+1] vanishing at both ends.
class GridFunction {
 public:
  /// Throws Error(invalid_argument) unless size >= 3 and both ends are exactly 0.
  explicit GridFunction(std::vector<double> values);
  static GridFunction zero(int T);
  static GridFunction from_interior(std::span<const double> interior);

  int T() const noexcept { return static_cast<int>(values_.size()) - 2; }
  double operator[](int k) const { return values_[static_cast<std::size_t>(k)]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> interior() const noexcept {
    return std::span<const double>(values_).subspan(1, values_.size() - 2);
  }

  friend bool operator==(const GridFunction&, const GridFunction&) = default;

 private:
  std::vector<double> values_;
};

struct Violation {
  std::string field;  ///< "w", "q", "p", "T", "growth", "separable", "f"
  int index = -1;
  double value = 0.0;
  std::string message;
};

/// Standing assumptions: T >= 2, w >= 1, q >= 1, p >= 2, f finite on a probe
/// grid, separable form consistent with f, F(k,0) = 0.
std::vector<Violation> validate_instance(const ProblemInstance& inst);

/// GrowthCertificate invariants: c0 > 0, alpha(k) >= 2, alpha_plus < p-.
std::vector<Violation> validate_certificate(const ProblemInstance& inst, const GrowthCertificate& gc);

enum class GrowthVerdict { holds, violated, unverifiable };

struct GrowthOptions {
  double t_min = 1e-12;
  double t_max = 1e12;
  int n_points = 100000;
};

struct GrowthCheck {
  GrowthVerdict verdict = GrowthVerdict::unverifiable;
  int witness_k = 0;
  double witness_t = 0.0;
  double excess = 0.0;  ///< F - c0(1+|t|^alpha) at the witness, or the largest value seen
  std::string detail;
};

GrowthCheck check_growth(const ProblemInstance& inst, const GrowthCertificate& gc,
                         const GrowthOptions& opts = {});

/// The constant profile d on [1,T], zero at 0 and T+1.
GridFunction build_test_function(const ProblemInstance& inst, double d);

const char* to_string(GrowthVerdict v);

}  // namespace adbvp
