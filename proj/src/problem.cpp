#include "aniso_dbvp/problem.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "aniso_dbvp/error.hpp"
#include "format.hpp"

namespace adbvp {

using detail::fmt_num;

namespace {

constexpr double kQuadAbsTol = 1e-12;
constexpr double kQuadRelTol = 1e-10;
constexpr unsigned kQuadMaxDepth = 15;

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

template <class Fn>
QuadResult gk_integrate(const Fn& fn, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  QuadResult r;
  if (a == b) return r;
  // Integrate over [-1, 1]: Boost 1.74 reports the error estimate of the
  // reference interval unscaled, which is only correct when (b - a)/2 = 1.
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  auto g = [&](double s) { return half * fn(mid + half * s); };
  r.value = gauss_kronrod<double, 15>::integrate(g, -1.0, 1.0, kQuadMaxDepth, kQuadRelTol, &r.error);
  return r;
}

[[noreturn]] void quadrature_failed(int k, double t, double err) {
  throw Error(Errc::f_quadrature_failed, "F-quadrature-failed: k=" + std::to_string(k) + " t=" +
                                             fmt_num(t) + " error estimate=" + fmt_num(err));
}

// int_0^t fn, split at decades t, t/10, ..., so that features at very different
// scales near the origin each get their own adaptive pass.
template <class Fn>
QuadResult primitive_by_quadrature(const Fn& fn, double t) {
  QuadResult total;
  if (t == 0.0) return total;
  const double at = std::fabs(t);
  const int decades = std::clamp(static_cast<int>(std::ceil(std::log10(at))) + 16, 1, 48);
  double hi = t;
  for (int j = 0; j < decades; ++j) {
    const double lo = (j + 1 == decades) ? 0.0 : hi / 10.0;
    QuadResult part = gk_integrate(fn, lo, hi);
    total.value += part.value;
    total.error += part.error;
    hi = lo;
  }
  return total;
}

}  // namespace

double GrowthCertificate::alpha_plus() const {
  return alpha.empty() ? 0.0 : *std::max_element(alpha.begin(), alpha.end());
}

double GrowthCertificate::alpha_minus() const {
  return alpha.empty() ? 0.0 : *std::min_element(alpha.begin(), alpha.end());
}

Nonlinearity::Nonlinearity(PointFn f, PointFn F, PointFn df)
    : f_(std::move(f)), F_(std::move(F)), df_(std::move(df)) {
  if (!f_) throw Error(Errc::invalid_argument, "nonlinearity requires f");
}

Nonlinearity Nonlinearity::separable(SeparableForm form) {
  if (!form.g) throw Error(Errc::invalid_argument, "separable nonlinearity requires g");
  Nonlinearity nl;
  const auto beta = form.beta;
  const auto g = form.g;
  nl.f_ = [beta, g](int k, double x) { return beta.at(static_cast<std::size_t>(k - 1)) * g(x); };
  if (form.G) {
    const auto G = form.G;
    nl.F_ = [beta, G](int k, double t) { return beta.at(static_cast<std::size_t>(k - 1)) * G(t); };
  }
  if (form.dg) {
    const auto dg = form.dg;
    nl.df_ = [beta, dg](int k, double x) { return beta.at(static_cast<std::size_t>(k - 1)) * dg(x); };
  }
  nl.separable_ = std::move(form);
  return nl;
}

double Nonlinearity::f(int k, double x) const { return f_(k, x); }

double Nonlinearity::F(int k, double t) const {
  if (t == 0.0) return 0.0;
  if (F_) return F_(k, t);
  return F_quadrature(k, t);
}

double Nonlinearity::F_quadrature(int k, double t) const {
  if (t == 0.0) return 0.0;
  auto fn = [this, k](double x) { return f_(k, x); };
  const QuadResult r = primitive_by_quadrature(fn, t);
  if (!std::isfinite(r.value) || r.error > std::max(kQuadAbsTol, kQuadRelTol * std::fabs(r.value)))
    quadrature_failed(k, t, r.error);
  return r.value;
}

double Nonlinearity::F_closed(int k, double t) const {
  if (!F_) throw Error(Errc::invalid_argument, "no closed-form primitive registered");
  return F_(k, t);
}

double Nonlinearity::integrate(int k, double a, double b) const {
  auto fn = [this, k](double x) { return f_(k, x); };
  const QuadResult r = gk_integrate(fn, a, b);
  if (!std::isfinite(r.value) || r.error > std::max(kQuadAbsTol, kQuadRelTol * std::fabs(r.value)))
    quadrature_failed(k, b, r.error);
  return r.value;
}

double Nonlinearity::df(int k, double x) const {
  if (df_) return df_(k, x);
  const double h = 1e-7 * std::max(1.0, std::fabs(x));
  return (f_(k, x + h) - f_(k, x - h)) / (2.0 * h);
}

bool Nonlinearity::has_closed_form() const { return static_cast<bool>(F_); }
bool Nonlinearity::has_derivative() const { return static_cast<bool>(df_); }

double eval_F(const Nonlinearity& nl, int k, double t) { return nl.F(k, t); }

double integrate_scalar(const ScalarFn& f, double a, double b) {
  const QuadResult r = gk_integrate(f, a, b);
  if (!std::isfinite(r.value) || r.error > std::max(kQuadAbsTol, kQuadRelTol * std::fabs(r.value)))
    quadrature_failed(0, b, r.error);
  return r.value;
}

double primitive_scalar(const ScalarFn& f, double t) {
  const QuadResult r = primitive_by_quadrature(f, t);
  if (!std::isfinite(r.value) || r.error > std::max(kQuadAbsTol, kQuadRelTol * std::fabs(r.value)))
    quadrature_failed(0, t, r.error);
  return r.value;
}

ProblemInstance::ProblemInstance(int T, std::vector<double> w, std::vector<double> q,
                                 std::vector<double> p, Nonlinearity nonlinearity,
                                 std::optional<double> lambda)
    : T_(T), w_(std::move(w)), q_(std::move(q)), p_(std::move(p)), nl_(std::move(nonlinearity)),
      lambda_(lambda) {
  if (T_ < 1) throw Error(Errc::invalid_argument, "T must be a positive integer");
  const auto n = static_cast<std::size_t>(T_);
  if (w_.size() != n + 1) throw Error(Errc::invalid_argument, "w must have T+1 entries (k = 0..T)");
  if (q_.size() != n + 1) throw Error(Errc::invalid_argument, "q must have T+1 entries (k = 1..T+1)");
  if (p_.size() != n + 2) throw Error(Errc::invalid_argument, "p must have T+2 entries (k = 0..T+1)");
  if (const auto& sep = nl_.separable_form(); sep && sep->beta.size() != n)
    throw Error(Errc::invalid_argument, "beta must have T entries (k = 1..T)");
  if (nl_.growth && nl_.growth->alpha.size() != n)
    throw Error(Errc::invalid_argument, "growth alpha must have T entries (k = 1..T)");
}

GridFunction::GridFunction(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 3) throw Error(Errc::invalid_argument, "grid function needs at least 3 entries");
  if (values_.front() != 0.0 || values_.back() != 0.0)
    throw Error(Errc::invalid_argument, "grid function must vanish at k = 0 and k = T+1");
}

GridFunction GridFunction::zero(int T) {
  return GridFunction(std::vector<double>(static_cast<std::size_t>(T) + 2, 0.0));
}

GridFunction GridFunction::from_interior(std::span<const double> interior) {
  std::vector<double> v(interior.size() + 2, 0.0);
  std::copy(interior.begin(), interior.end(), v.begin() + 1);
  return GridFunction(std::move(v));
}

std::vector<Violation> validate_instance(const ProblemInstance& inst) {
  std::vector<Violation> out;
  const int T = inst.T();
  if (T < 2) out.push_back({"T", T, static_cast<double>(T), "T=" + std::to_string(T) + " < 2"});
  for (int k = 0; k <= T; ++k) {
    const double v = inst.w(k);
    if (!(v >= 1.0)) out.push_back({"w", k, v, "w(" + std::to_string(k) + ")=" + fmt_num(v) + " < 1"});
  }
  for (int k = 1; k <= T + 1; ++k) {
    const double v = inst.q(k);
    if (!(v >= 1.0)) out.push_back({"q", k, v, "q(" + std::to_string(k) + ")=" + fmt_num(v) + " < 1"});
  }
  for (int k = 0; k <= T + 1; ++k) {
    const double v = inst.p(k);
    if (!(v >= 2.0)) out.push_back({"p", k, v, "p(" + std::to_string(k) + ")=" + fmt_num(v) + " < 2"});
  }

  const Nonlinearity& nl = inst.nonlinearity();
  const auto& sep = nl.separable_form();
  std::vector<double> probe{0.0};
  for (int e = -6; e <= 6; ++e) {
    probe.push_back(std::pow(10.0, e));
    probe.push_back(-std::pow(10.0, e));
  }
  for (int k = 1; k <= T; ++k) {
    for (double x : probe) {
      const double fx = nl.f(k, x);
      if (!std::isfinite(fx)) {
        out.push_back({"f", k, x, "f(" + std::to_string(k) + "," + fmt_num(x) + ") is not finite"});
        break;
      }
      if (sep) {
        const double bg = sep->beta[static_cast<std::size_t>(k - 1)] * sep->g(x);
        if (std::fabs(fx - bg) > 1e-12 * std::max(std::fabs(fx), std::fabs(bg))) {
          out.push_back({"separable", k, x,
                         "f(" + std::to_string(k) + "," + fmt_num(x) + ") != beta(k) g(x)"});
          break;
        }
      }
    }
    if (sep && !(sep->beta[static_cast<std::size_t>(k - 1)] >= 0.0)) {
      const double b = sep->beta[static_cast<std::size_t>(k - 1)];
      out.push_back({"separable", k, b, "beta(" + std::to_string(k) + ")=" + fmt_num(b) + " < 0"});
    }
    if (nl.has_closed_form()) {
      const double F0 = nl.F_closed(k, 0.0);
      if (F0 != 0.0)
        out.push_back({"F", k, F0, "F(" + std::to_string(k) + ",0)=" + fmt_num(F0) + " != 0"});
    }
  }
  if (nl.growth) {
    for (auto& v : validate_certificate(inst, *nl.growth)) out.push_back(std::move(v));
  }
  return out;
}

std::vector<Violation> validate_certificate(const ProblemInstance& inst, const GrowthCertificate& gc) {
  std::vector<Violation> out;
  if (!(gc.c0 > 0.0)) out.push_back({"growth", -1, gc.c0, "c0=" + fmt_num(gc.c0) + " <= 0"});
  if (gc.alpha.size() != static_cast<std::size_t>(inst.T())) {
    out.push_back({"growth", -1, static_cast<double>(gc.alpha.size()), "alpha must have T entries"});
    return out;
  }
  for (std::size_t i = 0; i < gc.alpha.size(); ++i) {
    if (!(gc.alpha[i] >= 2.0))
      out.push_back({"growth", static_cast<int>(i + 1), gc.alpha[i],
                     "alpha(" + std::to_string(i + 1) + ")=" + fmt_num(gc.alpha[i]) + " < 2"});
  }
  const auto& p = inst.p_values();
  const double p_minus = *std::min_element(p.begin(), p.end());
  if (!(gc.alpha_plus() < p_minus))
    out.push_back({"growth", -1, gc.alpha_plus(),
                   "alpha+=" + fmt_num(gc.alpha_plus()) + " >= p-=" + fmt_num(p_minus)});
  return out;
}

namespace {

struct SideScan {
  bool violated = false;
  bool nonfinite = false;
  int k = 0;
  double t = 0.0;
  double excess = -std::numeric_limits<double>::infinity();
};

// Bisection on the crossing of F - bound between a (<= 0) and b (> 0);
// returns a point with positive excess.
template <class Excess>
double refine_crossing(const Excess& h, double a, double b) {
  for (int it = 0; it < 200 && a != b; ++it) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    if (h(m) > 0.0) b = m;
    else a = m;
  }
  return b;
}

template <class Excess>
double golden_max(const Excess& h, double a, double b) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double h1 = h(x1), h2 = h(x2);
  for (int it = 0; it < 100; ++it) {
    if (h1 < h2) {
      a = x1; x1 = x2; h1 = h2; x2 = a + r * (b - a); h2 = h(x2);
    } else {
      b = x2; x2 = x1; h2 = h1; x1 = b - r * (b - a); h1 = h(x1);
    }
  }
  return h1 > h2 ? x1 : x2;
}

}  // namespace

GrowthCheck check_growth(const ProblemInstance& inst, const GrowthCertificate& gc, const GrowthOptions& opts) {
  GrowthCheck out;
  const int T = inst.T();
  const Nonlinearity& nl = inst.nonlinearity();
  const auto& sep = nl.separable_form();
  const int n = std::max(opts.n_points, 8);
  const double lmin = std::log(opts.t_min), lmax = std::log(opts.t_max);

  std::vector<double> mag(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) mag[static_cast<std::size_t>(i)] = std::exp(lmin + (lmax - lmin) * i / (n - 1));

  auto bound = [&](int k, double t) {
    return gc.c0 * (1.0 + std::pow(std::fabs(t), gc.alpha[static_cast<std::size_t>(k - 1)]));
  };

  std::string undominated;
  double worst = -std::numeric_limits<double>::infinity();

  for (int sign : {1, -1}) {
    // F(k, t_i) for all k along the signed grid. Separable forms share G(t);
    // without a closed form F is accumulated segment by segment.
    std::vector<std::vector<double>> Fk(static_cast<std::size_t>(T), std::vector<double>(static_cast<std::size_t>(n)));
    if (sep) {
      std::vector<double> G(static_cast<std::size_t>(n));
      if (sep->G) {
        for (int i = 0; i < n; ++i) G[static_cast<std::size_t>(i)] = sep->G(sign * mag[static_cast<std::size_t>(i)]);
      } else {
        Nonlinearity unit = Nonlinearity::separable({std::vector<double>(static_cast<std::size_t>(T), 1.0), sep->g, {}, {}});
        G[0] = unit.F_quadrature(1, sign * mag[0]);
        for (int i = 1; i < n; ++i)
          G[static_cast<std::size_t>(i)] = G[static_cast<std::size_t>(i - 1)] +
                                           unit.integrate(1, sign * mag[static_cast<std::size_t>(i - 1)], sign * mag[static_cast<std::size_t>(i)]);
      }
      for (int k = 1; k <= T; ++k) {
        const double b = sep->beta[static_cast<std::size_t>(k - 1)];
        for (int i = 0; i < n; ++i) Fk[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i)] = b * G[static_cast<std::size_t>(i)];
      }
    } else {
      for (int k = 1; k <= T; ++k) {
        auto& row = Fk[static_cast<std::size_t>(k - 1)];
        if (nl.has_closed_form()) {
          for (int i = 0; i < n; ++i) row[static_cast<std::size_t>(i)] = nl.F(k, sign * mag[static_cast<std::size_t>(i)]);
        } else {
          row[0] = nl.F_quadrature(k, sign * mag[0]);
          for (int i = 1; i < n; ++i)
            row[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(i - 1)] +
                                               nl.integrate(k, sign * mag[static_cast<std::size_t>(i - 1)], sign * mag[static_cast<std::size_t>(i)]);
        }
      }
    }

    for (int k = 1; k <= T; ++k) {
      const auto& row = Fk[static_cast<std::size_t>(k - 1)];
      auto excess_at = [&](double t) { return nl.F(k, t) - bound(k, t); };
      for (int i = 0; i < n; ++i) {
        const double t = sign * mag[static_cast<std::size_t>(i)];
        const double h = row[static_cast<std::size_t>(i)] - bound(k, t);
        if (!std::isfinite(h)) {
          out.verdict = GrowthVerdict::unverifiable;
          out.witness_k = k;
          out.witness_t = t;
          out.excess = h;
          out.detail = "F or bound not finite on the probe grid";
          return out;
        }
        worst = std::max(worst, h);
        if (h > 0.0) {
          double wt = t;
          if (i > 0 && nl.has_closed_form()) wt = refine_crossing(excess_at, sign * mag[static_cast<std::size_t>(i - 1)], t);
          out.verdict = GrowthVerdict::violated;
          out.witness_k = k;
          out.witness_t = wt;
          out.excess = nl.has_closed_form() ? excess_at(wt) : h;
          out.detail = "F(k,t) exceeds c0(1+|t|^alpha(k))";
          return out;
        }
      }
      // Narrow excursions between grid points: refine near-critical local maxima
      // of F / bound.
      if (nl.has_closed_form()) {
        auto ratio = [&](double lt) {
          const double t = sign * std::exp(lt);
          return nl.F(k, t) / bound(k, t);
        };
        int refined = 0;
        for (int i = 1; i + 1 < n && refined < 64; ++i) {
          const double t = sign * mag[static_cast<std::size_t>(i)];
          const double r0 = row[static_cast<std::size_t>(i)] / bound(k, t);
          if (r0 < 1.0 - 1e-3) continue;
          const double rl = row[static_cast<std::size_t>(i - 1)] / bound(k, sign * mag[static_cast<std::size_t>(i - 1)]);
          const double rr = row[static_cast<std::size_t>(i + 1)] / bound(k, sign * mag[static_cast<std::size_t>(i + 1)]);
          if (r0 < rl || r0 < rr) continue;
          ++refined;
          const double lt = golden_max(ratio, std::log(mag[static_cast<std::size_t>(i - 1)]), std::log(mag[static_cast<std::size_t>(i + 1)]));
          const double tt = sign * std::exp(lt);
          const double h = excess_at(tt);
          if (h > 0.0) {
            out.verdict = GrowthVerdict::violated;
            out.witness_k = k;
            out.witness_t = tt;
            out.excess = h;
            out.detail = "F(k,t) exceeds c0(1+|t|^alpha(k)) between grid points";
            return out;
          }
        }
      }
      // Asymptotic dominance at the large end of the probe range: estimate the
      // log-log slope of F over the last decade and compare with alpha(k).
      const int ib = n - 1;
      const int ia = std::max(0, n - 1 - static_cast<int>(std::ceil((n - 1) / ((lmax - lmin) / std::log(10.0)))));
      const double Fa = row[static_cast<std::size_t>(ia)], Fb = row[static_cast<std::size_t>(ib)];
      bool dominated = Fb <= 0.0;
      if (!dominated && Fa > 0.0) {
        const double slope = std::log(Fb / Fa) / std::log(mag[static_cast<std::size_t>(ib)] / mag[static_cast<std::size_t>(ia)]);
        dominated = slope <= gc.alpha[static_cast<std::size_t>(k - 1)] + 1e-6;
      }
      if (!dominated && undominated.empty())
        undominated = "growth of F(" + std::to_string(k) + ",.) at |t|=" + fmt_num(opts.t_max) +
                      " not dominated by |t|^alpha(k)";
    }
  }
  out.excess = worst;
  if (undominated.empty()) {
    out.verdict = GrowthVerdict::holds;
    out.detail = "F <= c0(1+|t|^alpha) on the probe grid and dominated at its extremes";
  } else {
    out.verdict = GrowthVerdict::unverifiable;
    out.detail = undominated;
  }
  return out;
}

GridFunction build_test_function(const ProblemInstance& inst, double d) {
  if (!(d >= 0.0)) throw Error(Errc::invalid_argument, "test function level d must be >= 0");
  std::vector<double> v(static_cast<std::size_t>(inst.T()) + 2, d);
  v.front() = 0.0;
  v.back() = 0.0;
  return GridFunction(std::move(v));
}

const char* to_string(GrowthVerdict v) {
  switch (v) {
    case GrowthVerdict::holds: return "holds";
    case GrowthVerdict::violated: return "violated";
    case GrowthVerdict::unverifiable: return "unverifiable-beyond-probe-range";
  }
  return "unknown";
}

}  // namespace adbvp
