#include "aniso_dbvp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aniso_dbvp/error.hpp"
#include "aniso_dbvp/functional.hpp"
#include "aniso_dbvp/solver.hpp"
#include "format.hpp"

namespace adbvp {

using detail::fmt_num;

namespace {

// Lexicographic sweep over an axis-aligned grid; first strict minimum wins.
struct GridScan {
  std::vector<double> best;
  double best_I = std::numeric_limits<double>::infinity();
};

GridScan scan(const ProblemInstance& inst, double lambda, const std::vector<double>& lo, double step, int n) {
  const int T = inst.T();
  GridScan out;
  std::vector<int> idx(static_cast<std::size_t>(T), 0);
  std::vector<double> v(static_cast<std::size_t>(T) + 2, 0.0);
  for (;;) {
    for (int i = 0; i < T; ++i) v[static_cast<std::size_t>(i + 1)] = lo[static_cast<std::size_t>(i)] + step * idx[static_cast<std::size_t>(i)];
    const double I = I_lambda(inst, GridFunction(v), lambda);
    if (I < out.best_I) {
      out.best_I = I;
      out.best.assign(v.begin() + 1, v.end() - 1);
    }
    int i = T - 1;
    while (i >= 0 && ++idx[static_cast<std::size_t>(i)] == n) idx[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
  }
  return out;
}

Check make_check(std::string name, bool pass, double value, double tol, std::string detail = {}) {
  return Check{std::move(name), pass, value, tol, std::move(detail)};
}

void conclude(VerificationVerdict& v) {
  v.overall = std::all_of(v.checks.begin(), v.checks.end(), [](const Check& c) { return c.pass; });
}

}  // namespace

const Check* VerificationVerdict::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

BruteForceResult brute_force_min(const ProblemInstance& inst, double lambda, double box_radius, int grid_n) {
  if (inst.T() > 3) throw Error(Errc::instance_too_large, "instance-too-large: brute force needs T <= 3");
  if (grid_n < 2) throw Error(Errc::invalid_argument, "grid_n must be >= 2");
  if (!(box_radius > 0.0)) throw Error(Errc::invalid_argument, "box radius must be > 0");
  const auto T = static_cast<std::size_t>(inst.T());
  const double h = 2.0 * box_radius / (grid_n - 1);
  const GridScan coarse = scan(inst, lambda, std::vector<double>(T, -box_radius), h, grid_n);

  const double hf = h / 10.0;
  std::vector<double> lo(T);
  for (std::size_t i = 0; i < T; ++i) lo[i] = coarse.best[i] - h;
  const GridScan fine = scan(inst, lambda, lo, hf, 21);

  const GridScan& pick = fine.best_I <= coarse.best_I ? fine : coarse;
  BruteForceResult r;
  r.u = GridFunction::from_interior(pick.best);
  r.I_value = pick.best_I;
  r.step = h;
  r.refined_step = hf;
  return r;
}

double default_box_radius(const std::optional<CertificationReport>& report) {
  if (report && report->norm_bounds && std::isfinite(report->norm_bounds->upper))
    return 2.0 * std::max(1.0, report->norm_bounds->upper);
  return 2.0;
}

VerificationVerdict verify_solution(const ProblemInstance& inst, double lambda, std::span<const double> values,
                                    const std::optional<CertificationReport>& report) {
  VerificationVerdict v;
  const int T = inst.T();
  if (values.size() != static_cast<std::size_t>(T) + 2)
    throw Error(Errc::invalid_argument, "solution must have T+2 entries");
  const double b0 = values.front(), b1 = values.back();
  v.checks.push_back(make_check("boundary", b0 == 0.0 && b1 == 0.0, std::max(std::fabs(b0), std::fabs(b1)), 0.0,
                                "u(0) = u(T+1) = 0"));
  std::vector<double> inner(values.begin(), values.end());
  inner.front() = inner.back() = 0.0;
  const GridFunction u(std::move(inner));

  const double rinf = inf_norm(residual(inst, u, lambda));
  v.checks.push_back(make_check("residual", rinf <= 1e-8, rinf, 1e-8, "residual_inf <= 1e-8"));
  const double sn = sup_norm(u);
  v.checks.push_back(make_check("nontrivial", sn > 1e-12, sn, 1e-12, "sup_norm > 1e-12"));

  if (report) {
    const double nm = norm_minus(inst, u);
    if (report->norm_bounds) {
      const auto& nb = *report->norm_bounds;
      v.checks.push_back(make_check("norm-bounds", nb.lower < nm && nm < nb.upper, nm, 0.0,
                                    fmt_num(nb.lower) + " < ||u|| < " + fmt_num(nb.upper)));
    }
    if (report->sup_norm_bound)
      v.checks.push_back(make_check("sup-norm", sn < *report->sup_norm_bound, sn, *report->sup_norm_bound,
                                    "||u||_inf < " + fmt_num(*report->sup_norm_bound)));
    if (report->shell) {
      const double phi = Phi(inst, u);
      v.checks.push_back(make_check("shell", report->shell->lower < phi && phi < report->shell->upper, phi, 0.0,
                                    fmt_num(report->shell->lower) + " < Phi(u) < " + fmt_num(report->shell->upper)));
    }
  }
  const SignClass sc = classify_sign(u);
  v.checks.push_back(make_check("sign", true, static_cast<double>(sc), 0.0, to_string(sc)));
  conclude(v);
  return v;
}

PropertyCase default_property_case(std::mt19937_64& rng, int case_index) {
  std::uniform_int_distribution<int> Tdist(2, 12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int T = Tdist(rng);
  const bool flat = unit(rng) < 0.2;
  auto weight = [&] { return flat ? 1.0 : std::pow(10.0, 12.0 * unit(rng)); };
  std::vector<double> w(static_cast<std::size_t>(T) + 1), q(static_cast<std::size_t>(T) + 1),
      p(static_cast<std::size_t>(T) + 2);
  for (double& x : w) x = weight();
  for (double& x : q) x = weight();
  const bool constant_p = unit(rng) < 0.1;
  const double p0 = 2.0 + 6.0 * unit(rng);
  for (double& x : p) x = constant_p ? p0 : 2.0 + 6.0 * unit(rng);
  Nonlinearity nl([](int, double x) { return 1.0 / (1.0 + x * x); }, [](int, double t) { return std::atan(t); },
                  [](int, double x) { return -2.0 * x / ((1.0 + x * x) * (1.0 + x * x)); });
  ProblemInstance inst(T, std::move(w), std::move(q), std::move(p), std::move(nl));

  std::vector<double> u(static_cast<std::size_t>(T));
  if (case_index != 0) {
    const double scale = std::pow(10.0, -6.0 + 9.0 * unit(rng));
    const bool mixed = unit(rng) < 0.3;
    for (double& x : u) {
      const double s = mixed ? std::pow(10.0, -6.0 + 9.0 * unit(rng)) : scale;
      x = unit(rng) < 0.1 ? 0.0 : s * (2.0 * unit(rng) - 1.0);
    }
  }
  return PropertyCase{std::move(inst), GridFunction::from_interior(u)};
}

VerificationVerdict property_suite(const InstanceGenerator& gen, int n_cases, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  struct Tally {
    std::string name;
    int violations = 0;
    int applicable = 0;
  };
  std::vector<Tally> tallies{{"norm-equiv-lower"}, {"norm-equiv-upper"}, {"modular-small"}, {"modular-large"},
                             {"sup-norm-bound"}, {"Phi-sandwich"}, {"shell-chain"}};
  VerificationVerdict v;
  constexpr double rel = 1e-12;
  auto le = [](double a, double b) { return a <= b + rel * std::max(std::fabs(a), std::fabs(b)) + 1e-300; };

  for (int i = 0; i < n_cases; ++i) {
    const PropertyCase pc = gen(rng, i);
    const auto& inst = pc.inst;
    const auto& u = pc.u;
    const DerivedConstants dc = derived_constants(inst);
    const double pm = dc.p_minus, pp = dc.p_plus;
    const double nm = norm_minus(inst, u), np = norm_plus(inst, u), phi = modular_phi(inst, u), Ph = Phi(inst, u);
    const double sn = sup_norm(u);
    const int T = inst.T();

    auto record = [&](std::size_t which, bool ok, const std::string& what) {
      ++tallies[which].applicable;
      if (ok) return;
      ++tallies[which].violations;
      if (v.counterexamples.size() < 20)
        v.counterexamples.push_back(tallies[which].name + " case " + std::to_string(i) + " T=" + std::to_string(T) +
                                    " p-=" + fmt_num(pm) + " p+=" + fmt_num(pp) + ": " + what);
    };

    const double up_factor = std::pow(2.0, (pp - pm) / (pp * pm)) * dc.K0;
    record(0, le(dc.K0 * nm, np), fmt_num(dc.K0 * nm) + " > " + fmt_num(np));
    record(1, le(np, up_factor * nm), fmt_num(np) + " > " + fmt_num(up_factor * nm));
    if (nm < 1.0) {
      const double a = std::pow(np, pp), b = std::pow(nm, pm);
      record(2, le(a, phi) && le(phi, b), fmt_num(a) + " <= " + fmt_num(phi) + " <= " + fmt_num(b));
    } else {
      const double a = std::pow(nm, pm) - dc.C1, b = std::pow(np, pp) + dc.C1;
      record(3, le(a, phi) && le(phi, b), fmt_num(a) + " <= " + fmt_num(phi) + " <= " + fmt_num(b));
    }
    const double sup_bound = std::pow(2.0 * T + 2.0, (pm - 1.0) / pm) * nm;
    record(4, le(sn, sup_bound), fmt_num(sn) + " > " + fmt_num(sup_bound));
    record(5, le(phi / pp, Ph) && le(Ph, phi / pm),
           fmt_num(phi / pp) + " <= " + fmt_num(Ph) + " <= " + fmt_num(phi / pm));
    if (phi < 1.0) {
      // r p+ placed halfway between phi(u) and 1
      const double rp = 0.5 * (phi + 1.0);
      const double a = std::pow(dc.K0, pp) * std::pow(nm, pp), b = std::pow(np, pp);
      record(6, le(a, b) && le(b, phi) && phi < rp,
             fmt_num(a) + " <= " + fmt_num(b) + " <= " + fmt_num(phi) + " < " + fmt_num(rp));
    }
  }
  for (const auto& t : tallies)
    v.checks.push_back(make_check(t.name, t.violations == 0, t.violations, rel,
                                  std::to_string(t.violations) + " violations in " + std::to_string(t.applicable) +
                                      " applicable cases"));
  conclude(v);
  return v;
}

VerificationVerdict coercivity_probe(const ProblemInstance& inst, double lambda, const GrowthCertificate& gc,
                                     const CoercivityOptions& opts) {
  VerificationVerdict v;
  const auto violations = validate_certificate(inst, gc);
  if (!violations.empty()) {
    std::string msg;
    for (const auto& x : violations) msg += (msg.empty() ? "" : "; ") + x.message;
    v.checks.push_back(make_check("certificate", false, gc.alpha_plus(), 0.0, "probe rejected: " + msg));
    conclude(v);
    return v;
  }
  const DerivedConstants dc = derived_constants(inst);
  const int T = inst.T();
  const double pm = dc.p_minus, pp = dc.p_plus, ap = gc.alpha_plus();
  const double coef = lambda * T * gc.c0 * std::pow(2.0 * T + 2.0, (pm - 1.0) * ap / pm);

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int decades = static_cast<int>(std::ceil(std::log10(std::max(opts.max_scale, 1.0))));
  const int n_samples = std::max(1, decades * opts.samples_per_decade) + 1;

  int dominated = 0, total = 0, increasing_rays = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int ray = 0; ray < opts.n_rays; ++ray) {
    std::vector<double> dir(static_cast<std::size_t>(T) + 2, 0.0);
    for (int k = 1; k <= T; ++k) dir[static_cast<std::size_t>(k)] = unit(rng);
    // Smallest nonzero |v(k)|, |dv(k)| scaled to 1.
    double m = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= T + 1; ++k) {
      const double a = std::fabs(dir[static_cast<std::size_t>(k)]);
      if (a > 0.0) m = std::min(m, a);
      if (k <= T) {
        const double d = std::fabs(dir[static_cast<std::size_t>(k + 1)] - dir[static_cast<std::size_t>(k)]);
        if (d > 0.0) m = std::min(m, d);
      }
    }
    for (double& x : dir) x /= m;

    std::vector<double> Is;
    std::vector<double> scales;
    for (int j = 0; j < n_samples; ++j) {
      const double s = n_samples > 1 ? std::pow(opts.max_scale, static_cast<double>(j) / (n_samples - 1)) : 1.0;
      std::vector<double> vals(dir);
      for (double& x : vals) x *= s;
      const GridFunction u(std::move(vals));
      const double I = I_lambda(inst, u, lambda);
      const double nm = norm_minus(inst, u);
      const double bound = std::pow(nm, pm) / pp - coef * std::pow(nm, ap) - lambda * T * gc.c0;
      ++total;
      const double margin = I - bound;
      worst_margin = std::min(worst_margin, margin / std::max(1.0, std::fabs(bound)));
      if (margin >= -1e-12 * std::max(std::fabs(I), std::fabs(bound))) ++dominated;
      else if (v.counterexamples.size() < 20)
        v.counterexamples.push_back("ray " + std::to_string(ray) + " s=" + fmt_num(s) + ": I=" + fmt_num(I) +
                                    " < bound " + fmt_num(bound));
      Is.push_back(I);
      scales.push_back(s);
    }
    bool inc = true;
    for (std::size_t j = 1; j < Is.size(); ++j)
      if (scales[j] >= opts.max_scale / 10.0 * (1.0 - 1e-12) && !(Is[j] > Is[j - 1])) inc = false;
    if (inc) ++increasing_rays;
  }
  v.checks.push_back(make_check("dominates-bound", dominated == total, total - dominated, 1e-12,
                                std::to_string(dominated) + "/" + std::to_string(total) +
                                    " samples above the bound; worst relative margin " + fmt_num(worst_margin)));
  v.checks.push_back(make_check("increasing-last-decade", increasing_rays == opts.n_rays, opts.n_rays - increasing_rays,
                                0.0, std::to_string(increasing_rays) + "/" + std::to_string(opts.n_rays) + " rays"));
  conclude(v);
  return v;
}

}  // namespace adbvp
