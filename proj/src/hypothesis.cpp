#include "aniso_dbvp/hypothesis.hpp"

#include <algorithm>
#include <cmath>

#include "aniso_dbvp/error.hpp"
#include "aniso_dbvp/functional.hpp"
#include "format.hpp"

namespace adbvp {

using detail::fmt_num;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// x^e for x >= 0 through logs, so that tiny bases such as c K ~ 1e-19 keep
// full relative precision; 0^e = 0 for e > 0.
double pow_pos(double x, double e) {
  if (x == 0.0) return e == 0.0 ? 1.0 : 0.0;
  return std::exp(e * std::log(x));
}

ConditionResult less_than(std::string name, double lhs, double rhs, std::string detail) {
  ConditionResult c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = rhs - lhs;
  c.holds = lhs < rhs;
  c.detail = std::move(detail);
  return c;
}

ConditionResult flag(std::string name, bool holds, std::string detail, double value = 0.0) {
  ConditionResult c;
  c.name = std::move(name);
  c.holds = holds;
  c.lhs = value;
  c.detail = std::move(detail);
  return c;
}

// Dense grid over [-c, c] with golden-section refinement of interior local maxima.
// `values` holds F on the grid t_i = c (i - m)/m, i = 0..2m.
double refine_grid_max(const ScalarFn& F, double c, const std::vector<double>& values, int m) {
  const int n = 2 * m + 1;
  double best = *std::max_element(values.begin(), values.end());
  std::vector<int> candidates;
  for (int i = 1; i + 1 < n; ++i) {
    const double v = values[static_cast<std::size_t>(i)];
    const double l = values[static_cast<std::size_t>(i - 1)], r = values[static_cast<std::size_t>(i + 1)];
    if (v >= l && v >= r && (v > l || v > r)) candidates.push_back(i);
  }
  std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    return values[static_cast<std::size_t>(a)] > values[static_cast<std::size_t>(b)];
  });
  if (candidates.size() > 32) candidates.resize(32);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i : candidates) {
    double a = c * (i - 1 - m) / m, b = c * (i + 1 - m) / m;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = F(x1), f2 = F(x2);
    for (int it = 0; it < 80; ++it) {
      if (f1 < f2) {
        a = x1; x1 = x2; f1 = f2; x2 = a + gr * (b - a); f2 = F(x2);
      } else {
        b = x2; x2 = x1; f2 = f1; x1 = b - gr * (b - a); f1 = F(x1);
      }
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

// F on the symmetric grid, either from a closed form or accumulated outward
// from 0 by quadrature of the integrand.
std::vector<double> primitive_on_grid(const ScalarFn& F, const ScalarFn& f, bool closed, double c, int m) {
  const int n = 2 * m + 1;
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  auto t_at = [&](int i) { return c * (i - m) / m; };
  if (closed) {
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = (i == m) ? 0.0 : F(t_at(i));
    return v;
  }
  for (int i = m + 1; i < n; ++i)
    v[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i - 1)] + integrate_scalar(f, t_at(i - 1), t_at(i));
  for (int i = m - 1; i >= 0; --i)
    v[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i + 1)] + integrate_scalar(f, t_at(i + 1), t_at(i));
  return v;
}

double ball_max(const ScalarFn& F, const ScalarFn& f, bool closed, double c, int grid_points,
                bool monotone_shortcut) {
  if (!(c >= 0.0)) throw Error(Errc::invalid_argument, "ball radius c must be >= 0");
  if (c == 0.0) return 0.0;
  const int m = std::max(grid_points / 2, 2);
  const auto values = primitive_on_grid(F, f, closed, c, m);
  const double grid_best = *std::max_element(values.begin(), values.end());
  if (monotone_shortcut) {
    // A non-negative integrand makes the primitive non-decreasing: max is F(c).
    const double top = values.back();
    if (grid_best <= top + 1e-12 * std::fabs(top)) return top;
  }
  return refine_grid_max(F, c, values, m);
}

bool nonnegative_on_grid(const ScalarFn& g, double c, int grid_points) {
  const int m = std::max(grid_points / 2, 2);
  for (int i = -m; i <= m; ++i)
    if (!(g(c * i / m) >= 0.0)) return false;
  return true;
}

// G(t) for a separable form.
double G_value(const SeparableForm& sep, double t) {
  if (t == 0.0) return 0.0;
  if (sep.G) return sep.G(t);
  return primitive_scalar(sep.g, t);
}

double max_G_on_ball(const SeparableForm& sep, double c, const BallMaxOptions& opts) {
  ScalarFn G = [&sep](double t) { return G_value(sep, t); };
  const bool shortcut = nonnegative_on_grid(sep.g, c, opts.grid_points);
  return ball_max(G, sep.g, static_cast<bool>(sep.G), c, opts.grid_points, shortcut);
}

void growth_conditions(const ProblemInstance& inst, const GrowthCertificate& gc, const CertifyOptions& opts,
                       CertificationReport& rep) {
  const auto violations = validate_certificate(inst, gc);
  std::string msg;
  for (const auto& v : violations) msg += (msg.empty() ? "" : "; ") + v.message;
  rep.conditions.push_back(flag("certificate", violations.empty(), violations.empty() ? "c0 > 0, alpha >= 2, alpha+ < p-" : msg,
                                gc.alpha_plus()));
  rep.inputs["c0"] = gc.c0;
  if (!violations.empty()) return;
  const GrowthCheck g = check_growth(inst, gc, opts.growth);
  ConditionResult c = flag("F1", g.verdict == GrowthVerdict::holds,
                           std::string(to_string(g.verdict)) + ": " + g.detail, g.excess);
  if (g.verdict != GrowthVerdict::holds) {
    c.detail += " (witness k=" + std::to_string(g.witness_k) + " t=" + fmt_num(g.witness_t) + ")";
    c.rhs = g.witness_t;
  }
  rep.conditions.push_back(std::move(c));
}

void finish(CertificationReport& rep, std::optional<OpenInterval> interval) {
  const bool all = std::all_of(rep.conditions.begin(), rep.conditions.end(), [](const auto& c) { return c.holds; });
  if (all && interval && interval->lower < interval->upper) {
    rep.interval = interval;
    rep.status = "certified";
  } else if (all && interval) {
    rep.status = "empty-interval";
  } else {
    rep.status = "hypothesis-failed";
  }
}

void record_constants(const DerivedConstants& dc, CertificationReport& rep) {
  rep.quantities["A"] = dc.A;
  rep.quantities["K"] = dc.K;
  rep.quantities["K0"] = dc.K0;
  rep.quantities["p_minus"] = dc.p_minus;
  rep.quantities["p_plus"] = dc.p_plus;
}

}  // namespace

const char* to_string(TheoremId id) {
  switch (id) {
    case TheoremId::T1_1: return "T1.1";
    case TheoremId::T3_2: return "T3.2";
    case TheoremId::T3_4: return "T3.4";
    case TheoremId::T3_5: return "T3.5";
    case TheoremId::T3_8: return "T3.8";
    case TheoremId::C3_9: return "C3.9";
  }
  return "?";
}

std::optional<TheoremId> theorem_from_string(const std::string& s) {
  for (auto id : {TheoremId::T1_1, TheoremId::T3_2, TheoremId::T3_4, TheoremId::T3_5, TheoremId::T3_8, TheoremId::C3_9})
    if (s == to_string(id)) return id;
  return std::nullopt;
}

std::vector<std::string> CertificationReport::failed_conditions() const {
  std::vector<std::string> out;
  for (const auto& c : conditions)
    if (!c.holds) out.push_back(c.name);
  return out;
}

DerivedConstants derived_constants(const ProblemInstance& inst) {
  DerivedConstants dc;
  const int T = inst.T();
  const auto& w = inst.w_values();
  const auto& q = inst.q_values();
  const auto& p = inst.p_values();
  std::tie(dc.w_minus, dc.w_plus) = [&] { auto [a, b] = std::minmax_element(w.begin(), w.end()); return std::pair(*a, *b); }();
  std::tie(dc.q_minus, dc.q_plus) = [&] { auto [a, b] = std::minmax_element(q.begin(), q.end()); return std::pair(*a, *b); }();
  std::tie(dc.p_minus, dc.p_plus) = [&] { auto [a, b] = std::minmax_element(p.begin(), p.end()); return std::pair(*a, *b); }();

  dc.A = inst.w(0) + inst.w(T);
  for (int k = 1; k <= T; ++k) dc.A += inst.q(k);

  const double pm = dc.p_minus, pp = dc.p_plus;
  const double log_n = std::log(2.0 * T + 2.0);
  const double log_max = std::log(std::max(dc.w_plus, dc.q_plus));
  const double e = (pm - pp) / (pp * pm);
  dc.log_K = (1.0 - pp) / pp * log_n + e * log_max;
  dc.K = std::exp(dc.log_K);
  dc.K0 = std::exp(e * (log_n + log_max));
  dc.C1 = (T + 1.0) * (dc.w_plus + dc.q_plus);
  return dc;
}

double max_F_on_ball(const ProblemInstance& inst, int k, double c, const BallMaxOptions& opts) {
  const Nonlinearity& nl = inst.nonlinearity();
  ScalarFn F = [&nl, k](double t) { return nl.F(k, t); };
  ScalarFn f = [&nl, k](double x) { return nl.f(k, x); };
  bool shortcut = false;
  if (const auto& sep = nl.separable_form(); sep && sep->beta[static_cast<std::size_t>(k - 1)] >= 0.0)
    shortcut = nonnegative_on_grid(sep->g, c, opts.grid_points);
  return ball_max(F, f, nl.has_closed_form(), c, opts.grid_points, shortcut);
}

double sum_max_F_on_ball(const ProblemInstance& inst, double c, const BallMaxOptions& opts) {
  double s = 0.0;
  for (int k = 1; k <= inst.T(); ++k) s += max_F_on_ball(inst, k, c, opts);
  return s;
}

double sum_F(const ProblemInstance& inst, double d) {
  double s = 0.0;
  for (int k = 1; k <= inst.T(); ++k) s += inst.F(k, d);
  return s;
}

double a_d(const ProblemInstance& inst, const DerivedConstants& dc, double d, double c, const BallMaxOptions& opts) {
  const double den = pow_pos(c * dc.K, dc.p_plus) / dc.p_plus - pow_pos(d, dc.p_minus) * dc.A / dc.p_minus;
  if (std::fabs(den) < 1e-300)
    throw Error(Errc::degenerate_denominator,
                "degenerate-denominator: (cK)^{p+}/p+ = d^{p-}A/p- at c=" + fmt_num(c) + " d=" + fmt_num(d));
  const double num = sum_max_F_on_ball(inst, c, opts) - sum_F(inst, d);
  return num / den;
}

std::vector<ConditionResult> check_in2(const DerivedConstants& dc, double c1, double d, double c2) {
  const double pm = dc.p_minus, pp = dc.p_plus;
  const double left = std::exp(dc.log_K - std::log(dc.A) / pp) * c1;
  // (p- K^{p+} / (p+ A))^{1/p-} c2^{p+/p-}, in logs
  const double middle = c2 > 0.0 ? std::exp((std::log(pm / (pp * dc.A)) + pp * dc.log_K + pp * std::log(c2)) / pm) : 0.0;
  const double right = std::pow(pm / (pp * dc.A), 1.0 / pm);
  return {less_than("in2", left, d, "K c1 / A^{1/p+} < d"),
          less_than("in2", d, middle, "d < (p- K^{p+}/(p+ A))^{1/p-} c2^{p+/p-}"),
          less_than("in2", middle, right, "(p- K^{p+}/(p+ A))^{1/p-} c2^{p+/p-} < (p-/(p+ A))^{1/p-}")};
}

double dhat(const ProblemInstance& inst, double d) {
  const int T = inst.T();
  double s = inst.w(0) * abs_pow(d, inst.p(0)) / inst.p(0) + inst.w(T) * abs_pow(d, inst.p(T)) / inst.p(T);
  for (int k = 1; k <= T; ++k) s += inst.q(k) * abs_pow(d, inst.p(k)) / inst.p(k);
  return s;
}

CertificationReport certify_t2(const ProblemInstance& inst, const GrowthCertificate& gc, double c1, double c2,
                               double d, const CertifyOptions& opts) {
  CertificationReport rep;
  rep.theorem = TheoremId::T3_2;
  rep.inputs = {{"c1", c1}, {"c2", c2}, {"d", d}};
  const DerivedConstants dc = derived_constants(inst);
  record_constants(dc, rep);
  growth_conditions(inst, gc, opts, rep);
  rep.conditions.push_back(flag("positivity", c1 >= 0.0 && c2 > 0.0 && d > 0.0, "c1 >= 0, c2 > 0, d > 0"));
  for (auto& c : check_in2(dc, c1, d, c2)) rep.conditions.push_back(std::move(c));

  const double pm = dc.p_minus, pp = dc.p_plus;
  const double r1 = pow_pos(c1 * dc.K, pp) / pp, r2 = pow_pos(c2 * dc.K, pp) / pp;
  rep.quantities["r1"] = r1;
  rep.quantities["r2"] = r2;
  rep.quantities["Phi_vbar"] = dhat(inst, d);
  rep.shell = OpenInterval{r1, r2};
  rep.norm_bounds = OpenInterval{std::pow(pm / pp, 1.0 / pm) * pow_pos(c1 * dc.K, pp / pm),
                                 c2 * std::pow(2.0 * inst.T() + 2.0, (1.0 - pm) / pm)};

  std::optional<OpenInterval> interval;
  try {
    const double sF = sum_F(inst, d);
    const double sM1 = sum_max_F_on_ball(inst, c1, opts.ball), sM2 = sum_max_F_on_ball(inst, c2, opts.ball);
    rep.quantities["sum_F_d"] = sF;
    rep.quantities["sum_max_F_c1"] = sM1;
    rep.quantities["sum_max_F_c2"] = sM2;
    const double ad1 = a_d(inst, dc, d, c1, opts.ball);
    const double ad2 = a_d(inst, dc, d, c2, opts.ball);
    rep.quantities["a_d_c1"] = ad1;
    rep.quantities["a_d_c2"] = ad2;
    rep.conditions.push_back(less_than("F2", ad2, ad1, "a_d(c2) < a_d(c1)"));
    rep.conditions.push_back(less_than("a_d(c1)>0", 0.0, ad1, "lower endpoint 1/a_d(c1) finite and positive"));
    interval = OpenInterval{1.0 / ad1, ad2 > 0.0 ? 1.0 / ad2 : kInf};
  } catch (const Error& e) {
    rep.conditions.push_back(flag("a_d", false, e.what()));
  }
  finish(rep, interval);
  return rep;
}

namespace {

// Shared body of the c1 = 0, c2 = c specialisations.
struct SideTerms {
  double R = 0.0;  // (cK)^{p+}/p+
  double D = 0.0;  // d^{p-} A / p-
};

SideTerms t3_side_conditions(const DerivedConstants& dc, double c, double d, CertificationReport& rep) {
  const double pm = dc.p_minus, pp = dc.p_plus;
  rep.conditions.push_back(flag("positivity", c > 0.0 && d > 0.0, "c > 0, d > 0"));
  const double cKpp = pow_pos(c * dc.K, pp);
  rep.conditions.push_back(less_than("side", dc.A * pp * pow_pos(d, pm), cKpp * pm, "A p+ d^{p-} < K^{p+} p- c^{p+}"));
  rep.conditions.push_back(less_than("side", cKpp * pm, pm, "K^{p+} p- c^{p+} < p-"));
  SideTerms s{cKpp / pp, pow_pos(d, pm) * dc.A / pm};
  rep.quantities["r"] = s.R;
  return s;
}

void t3_bounds(const ProblemInstance& inst, const DerivedConstants& dc, double c, const SideTerms& s,
               CertificationReport& rep) {
  rep.norm_bounds = OpenInterval{0.0, c * std::pow(2.0 * inst.T() + 2.0, (1.0 - dc.p_minus) / dc.p_minus)};
  rep.sup_norm_bound = c;
  rep.shell = OpenInterval{0.0, s.R};
}

}  // namespace

CertificationReport certify_t3(const ProblemInstance& inst, const GrowthCertificate& gc, double c, double d,
                               const CertifyOptions& opts) {
  CertificationReport rep;
  rep.theorem = TheoremId::T3_4;
  rep.inputs = {{"c", c}, {"d", d}};
  const DerivedConstants dc = derived_constants(inst);
  record_constants(dc, rep);
  growth_conditions(inst, gc, opts, rep);
  const SideTerms s = t3_side_conditions(dc, c, d, rep);
  t3_bounds(inst, dc, c, s, rep);
  rep.quantities["Phi_vbar"] = dhat(inst, d);

  std::optional<OpenInterval> interval;
  try {
    const double sF = sum_F(inst, d);
    const double sM = sum_max_F_on_ball(inst, c, opts.ball);
    rep.quantities["sum_F_d"] = sF;
    rep.quantities["sum_max_F_c"] = sM;
    rep.conditions.push_back(less_than("sum_F(d)>0", 0.0, sF, "sum_k F(k,d) > 0"));
    rep.conditions.push_back(less_than("F3", sM, s.R / s.D * sF,
                                       "sum max_{|xi|<=c} F < p-(cK)^{p+}/(p+ d^{p-} A) sum F(k,d)"));
    if (s.R != s.D) {
      const double adc = (sM - sF) / (s.R - s.D);
      rep.quantities["a_d_c"] = adc;
      rep.quantities["a_d_0"] = sF / s.D;
    }
    const double top = sM - sF;
    interval = OpenInterval{s.D / sF, top > 0.0 ? (s.R - s.D) / top : kInf};
  } catch (const Error& e) {
    rep.conditions.push_back(flag("F3", false, e.what()));
  }
  finish(rep, interval);
  return rep;
}

CertificationReport certify_t3_separable(const ProblemInstance& inst, const GrowthCertificate& gc, double c, double d,
                                         const CertifyOptions& opts) {
  const auto& sep = inst.nonlinearity().separable_form();
  if (!sep) throw Error(Errc::not_separable, "not-separable: nonlinearity has no beta(k) g(x) form");
  CertificationReport rep;
  rep.theorem = TheoremId::T3_5;
  rep.inputs = {{"c", c}, {"d", d}};
  const DerivedConstants dc = derived_constants(inst);
  record_constants(dc, rep);
  growth_conditions(inst, gc, opts, rep);
  const SideTerms s = t3_side_conditions(dc, c, d, rep);
  t3_bounds(inst, dc, c, s, rep);
  rep.quantities["Phi_vbar"] = dhat(inst, d);

  double beta_sum = 0.0;
  for (double b : sep->beta) beta_sum += b;
  rep.quantities["sum_beta"] = beta_sum;

  std::optional<OpenInterval> interval;
  try {
    const double Gd = G_value(*sep, d);
    const double Gmax = max_G_on_ball(*sep, c, opts.ball);
    rep.quantities["G_d"] = Gd;
    rep.quantities["max_G_c"] = Gmax;
    rep.conditions.push_back(less_than("G(d)sum_beta>0", 0.0, Gd * beta_sum, "G(d) sum beta(k) > 0"));
    rep.conditions.push_back(less_than("F4", Gmax, s.R / s.D * Gd, "max_{|xi|<=c} G < p-(cK)^{p+}/(p+ d^{p-} A) G(d)"));
    const double top = (Gmax - Gd) * beta_sum;
    interval = OpenInterval{s.D / (Gd * beta_sum), top > 0.0 ? (s.R - s.D) / top : kInf};
  } catch (const Error& e) {
    rep.conditions.push_back(flag("F4", false, e.what()));
  }
  finish(rep, interval);
  return rep;
}

CertificationReport certify_t1_1(const ProblemInstance& inst, const GrowthCertificate& gc, double c, double d,
                                 const CertifyOptions& opts) {
  CertificationReport rep;
  rep.theorem = TheoremId::T1_1;
  rep.inputs = {{"c", c}, {"d", d}};
  const int T = inst.T();
  const DerivedConstants dc = derived_constants(inst);
  record_constants(dc, rep);

  // The specialisation this theorem is stated for.
  bool shape = true;
  std::string why;
  for (int k = 0; k <= T + 1; ++k)
    if (std::fabs(inst.p(k) - (k + 3.0)) > 1e-12 * (k + 3.0)) { shape = false; why = "p(k) != k+3"; }
  for (int k = 0; k <= T; ++k)
    if (inst.w(k) != 1.0) { shape = false; why = "w != 1"; }
  for (int k = 1; k <= T + 1; ++k)
    if (inst.q(k) != 1.0) { shape = false; why = "q != 1"; }
  const auto& sep = inst.nonlinearity().separable_form();
  if (!sep) {
    shape = false;
    why = "nonlinearity not of the form g(u)";
  } else {
    for (double b : sep->beta)
      if (b != 1.0) { shape = false; why = "beta != 1"; }
    std::vector<double> probe{0.0};
    for (int e = -12; e <= 12; ++e) { probe.push_back(std::pow(10.0, e)); probe.push_back(-std::pow(10.0, e)); }
    for (double x : probe)
      if (!(sep->g(x) >= 0.0)) { shape = false; why = "g negative at x=" + fmt_num(x); }
    if (!nonnegative_on_grid(sep->g, std::max(c, d), opts.ball.grid_points)) { shape = false; why = "g negative on [-c,c]"; }
  }
  for (double a : gc.alpha)
    if (a != 2.0) { shape = false; why = "alpha != 2"; }
  rep.conditions.push_back(flag("shape", shape, shape ? "p(k)=k+3, w=q=beta=1, g>=0, alpha=2" : why));
  growth_conditions(inst, gc, opts, rep);
  rep.conditions.push_back(flag("positivity", c > 0.0 && d > 0.0, "c > 0, d > 0"));

  // (2T+2)^{T+3} is carried as its logarithm.
  const double L = (T + 3.0) * std::log(2.0 * T + 2.0);
  const double c_pow = pow_pos(c, T + 4.0);
  const double middle = 3.0 * std::exp(std::log(c_pow) - L) / ((T + 2.0) * (T + 4.0));
  const double right = 3.0 / ((T + 2.0) * (T + 4.0));
  rep.quantities["middle"] = middle;
  rep.conditions.push_back(less_than("side", d * d * d, middle, "d^3 < 3 c^{T+4}/((T+2)(T+4)(2T+2)^{T+3})"));
  rep.conditions.push_back(less_than("side", middle, right, "3 c^{T+4}/((T+2)(T+4)(2T+2)^{T+3}) < 3/((T+2)(T+4))"));
  rep.norm_bounds = OpenInterval{0.0, c * std::pow(2.0 * T + 2.0, (1.0 - dc.p_minus) / dc.p_minus)};
  rep.sup_norm_bound = c;
  rep.shell = OpenInterval{0.0, pow_pos(c * dc.K, dc.p_plus) / dc.p_plus};
  rep.quantities["Phi_vbar"] = dhat(inst, d);

  std::optional<OpenInterval> interval;
  if (sep) {
    try {
      const double Gc = G_value(*sep, c), Gd = G_value(*sep, d);
      rep.quantities["G_c"] = Gc;
      rep.quantities["G_d"] = Gd;
      const double lhs = Gc / c_pow;
      const double rhs = 3.0 * std::exp(-L) / ((T + 4.0) * (T + 2.0)) * Gd / (d * d * d);
      rep.conditions.push_back(less_than("G-ratio", lhs, rhs, "G(c)/c^{T+4} < 3/((T+4)(T+2)(2T+2)^{T+3}) G(d)/d^3"));
      const double lower = d * d * d * (T + 2.0) / (3.0 * T * Gd);
      const double num = 3.0 * c_pow * std::exp(-L) - d * d * d * (T + 4.0) * (T + 2.0);
      const double den = 3.0 * T * (T + 4.0) * (Gc - Gd);
      interval = OpenInterval{lower, den > 0.0 ? num / den : kInf};
    } catch (const Error& e) {
      rep.conditions.push_back(flag("G-ratio", false, e.what()));
    }
  }
  finish(rep, interval);
  return rep;
}

namespace {

struct T4Terms {
  double r = 0.0;
  double bound_sum = 0.0;  // T c0 (1 + max{c3^{alpha+}, c3^{alpha-}})
  double lower = 0.0;
};

T4Terms t4_body(const ProblemInstance& inst, const GrowthCertificate& gc, double c3, double d,
                const CertifyOptions& opts, CertificationReport& rep) {
  const DerivedConstants dc = derived_constants(inst);
  record_constants(dc, rep);
  growth_conditions(inst, gc, opts, rep);
  rep.conditions.push_back(flag("positivity", c3 > 0.0 && d > 0.0, "c3 > 0, d > 0"));
  const double pp = dc.p_plus;
  const double root_A = std::pow(dc.A, 1.0 / pp);
  rep.conditions.push_back(less_than("F5-side", d, 1.0 / root_A, "d < 1/A^{1/p+}"));
  rep.conditions.push_back(less_than("F5-side", c3 * dc.K / root_A, d, "c3 K/A^{1/p+} < d"));

  T4Terms t;
  const double c3Kpp = pow_pos(c3 * dc.K, pp);
  t.r = c3Kpp / pp;
  t.bound_sum = inst.T() * gc.c0 * (1.0 + std::max(std::pow(c3, gc.alpha_plus()), std::pow(c3, gc.alpha_minus())));
  const double dh = dhat(inst, d);
  rep.dhat = dh;
  rep.quantities["r"] = t.r;
  rep.quantities["Phi_vbar"] = dh;
  const double sF = sum_F(inst, d);
  rep.quantities["sum_F_d"] = sF;
  rep.conditions.push_back(less_than("sum_F(d)>0", 0.0, sF, "sum_k F(k,d) > 0"));
  const double lhs = pp / c3Kpp * t.bound_sum;
  const double rhs = sF / dh;
  rep.quantities["F5_lhs"] = lhs;
  rep.quantities["F5_rhs"] = rhs;
  rep.conditions.push_back(
      less_than("F5", lhs, rhs, "p+/(c3 K)^{p+} T c0 (1 + max{c3^{alpha+}, c3^{alpha-}}) < dhat^{-1} sum F(k,d)"));
  t.lower = dh / sF;

  // I_lambda along the ray s vbar(1) must eventually increase; the certificate
  // (alpha+ < p-) guarantees it, this samples it at lambda = 2 x lower endpoint.
  if (sF > 0.0 && std::isfinite(t.lower) && gc.alpha_plus() < dc.p_minus) {
    const double lam = 2.0 * t.lower;
    const GridFunction dir = build_test_function(inst, 1.0);
    double prev = -kInf;
    bool increasing = true;
    for (int j = 0; j <= 10; ++j) {
      const double s = std::pow(10.0, 5.0 + j / 10.0);
      std::vector<double> v(dir.values().begin(), dir.values().end());
      for (double& x : v) x *= s;
      const double I = I_lambda(inst, GridFunction(std::move(v)), lam);
      if (!(I > prev)) increasing = false;
      prev = I;
    }
    rep.conditions.push_back(flag("coercivity-numeric", increasing,
                                  "I_lambda(s vbar(1)) increasing for s in [1e5, 1e6] at lambda = 2 x lower", lam));
  }
  return t;
}

}  // namespace

CertificationReport certify_t4(const ProblemInstance& inst, const GrowthCertificate& gc, double c3, double d,
                               const CertifyOptions& opts) {
  CertificationReport rep;
  rep.theorem = TheoremId::T3_8;
  rep.inputs = {{"c3", c3}, {"d", d}};
  const T4Terms t = t4_body(inst, gc, c3, d, opts, rep);
  finish(rep, OpenInterval{t.lower, kInf});
  return rep;
}

CertificationReport certify_c10(const ProblemInstance& inst, const GrowthCertificate& gc, double c3, double d,
                                const CertifyOptions& opts) {
  CertificationReport rep;
  rep.theorem = TheoremId::C3_9;
  rep.inputs = {{"c3", c3}, {"d", d}};
  const T4Terms t = t4_body(inst, gc, c3, d, opts, rep);
  const double upper = t.r / t.bound_sum;
  rep.quantities["upper"] = upper;
  rep.quantities["lower"] = t.lower;
  finish(rep, OpenInterval{t.lower, upper});
  return rep;
}

}  // namespace adbvp
