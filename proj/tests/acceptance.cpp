// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Chains and weights are read from the bundled configs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "rwpoly/rwpoly.hpp"

using namespace rwpoly;
using Real = quad;
namespace fs = std::filesystem;

namespace {

const fs::path config_dir = RWPOLY_CONFIG_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;
};

ExperimentConfig config(const std::string& name) { return read_experiment(config_dir / (name + ".ini")); }

ChainSpec<Real> chain(const std::string& name) {
  const auto cfg = config(name);
  return chain_from_section<Real>(*cfg.chain(), cfg.document.origin);
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

double d(const Real& x) { return static_cast<double>(x); }

// Closed-form recurrence of the Jacobi weight (1-x)^a (1+x)^b.
double jacobi_b(int k, double a, double b) {
  const double s = 2 * k + a + b;
  if (k == 0) return (b - a) / (a + b + 2);
  return (b * b - a * a) / (s * (s + 2));
}

double jacobi_a(int k, double a, double b) {  // couples k-1 and k
  const double s = 2 * k + a + b;
  return std::sqrt(4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1) * (s - 1)));
}

struct WeightRun {
  ChainRecovery<Real> recovery;
  RecurrenceCoefficients<Real> rc;
  ConjectureReport<Real> report;
  ExperimentConfig cfg;
};

WeightRun weight_pipeline(const std::string& name) {
  WeightRun w;
  w.cfg = config(name);
  const auto spec = weight_from_section<Real>(*w.cfg.weight(), w.cfg.document.origin);
  const std::size_t depth = std::max({w.cfg.truncation, w.cfg.horizon, std::size_t{2000}}) + 100;
  const auto m = discretize_weight(spec, w.cfg.option_size("nodes", 8 * depth));
  w.rc = stieltjes_recurrence(m, depth);
  w.recovery = chain_from_recurrence(w.rc, spec.label);
  if (!w.recovery.ok()) throw Error(ErrorCode::not_random_walk_measure, "recovery of '" + name + "' failed");
  ConjectureOptions<Real> opt;
  opt.truncation = w.cfg.truncation;
  opt.horizon = w.cfg.horizon;
  w.report = theorem_main_verdict(*w.recovery.chain, std::optional<WeightSpec<Real>>(spec), opt);
  return w;
}

ConjectureReport<Real> chain_report(const std::string& name) {
  const auto cfg = config(name);
  ConjectureOptions<Real> opt;
  opt.truncation = cfg.truncation;
  opt.horizon = cfg.horizon;
  return theorem_main_verdict(chain_from_section<Real>(*cfg.chain(), cfg.document.origin),
                              std::optional<WeightSpec<Real>>(), opt);
}

bool decreasing_tail(const std::vector<Real>& v) {
  for (std::size_t k = v.size() - v.size() / 4; k < v.size(); ++k) {
    if (!(v[k] < v[k - 1])) return false;
  }
  return true;
}

// Reports shared between criteria.
std::optional<WeightRun> run_D, run_E;
std::optional<ConjectureReport<Real>> rep_B;

// ---------------------------------------------------------------------------

Outcome criterion_1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  const std::vector<Real> pts = {Real(-0.95), Real(-0.4), Real(0.1), Real(0.55), Real(0.9), Real(1)};
  for (const char* name : {"A", "B", "C", "S"}) {
    const auto c = chain(name);
    for (std::size_t n = 1; n <= 50; ++n) {
      for (std::size_t a = 0; a < pts.size(); ++a) {
        for (std::size_t b = a + 1; b < pts.size(); ++b) {
          worst = std::max(worst, d(cd_identity_residual(c, n, pts[a], pts[b])));
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.pass = worst <= 1e-10 && secs < 30;
  o.detail = "max CD residual " + num(worst) + " over A,B,C,S, n<=50, 15 point pairs; " + num(secs) + " s";
  return o;
}

Outcome criterion_2() {
  Outcome o;
  double worst = 0;
  const auto A = chain("A"), S = chain("S");
  for (std::size_t n = 1; n <= 200; ++n) {
    const Real nn = Real(static_cast<long long>(n));
    const Real ra = 1 / (2 * nn - 1);
    const Real rs = 6 / (nn * (nn + 1) * (2 * nn + 1));
    worst = std::max(worst, d(abs(christoffel(A, n, Real(1)) / ra - 1)));
    worst = std::max(worst, d(abs(christoffel(S, n, Real(1)) / rs - 1)));
  }
  o.pass = worst <= 1e-10;
  o.detail = "max relative error " + num(worst) + " for A: 1/(2n-1), S: 6/(n(n+1)(2n+1)), n<=200";
  return o;
}

Outcome criterion_3() {
  Outcome o;
  double worst = 0;
  struct Spot {
    const char* chain;
    std::size_t i, j, n;
  };
  const std::vector<Spot> spots = {{"A", 0, 0, 10}, {"A", 1, 3, 12}, {"A", 2, 1, 7},  {"B", 0, 0, 8},
                                   {"B", 3, 5, 15}, {"B", 4, 2, 9},  {"C", 0, 0, 12}, {"C", 2, 5, 9},
                                   {"C", 5, 3, 20}, {"S", 0, 2, 10}, {"S", 3, 3, 14}, {"S", 6, 1, 11}};
  double worst_z = 0;
  std::size_t within = 0;
  for (const char* name : {"A", "B", "C", "S"}) {
    const auto c = chain(name);
    const auto grid = transition_grid(c, quadrature_from_chain(c, 400), 10, 10, 100);
    for (const auto& q : grid) worst = std::max(worst, d(abs(q.value_spectral - q.value_matrix)));
    for (const auto& s : spots) {
      if (std::string(s.chain) != name) continue;
      const auto mc = monte_carlo_transition(c, s.i, s.j, s.n, 1000000, 20240917 + s.i * 131 + s.j * 17 + s.n);
      const auto exact = transition_probability(c, s.i, s.j, s.n, 400);
      const double z = std::abs(mc.estimate - d(exact.value_matrix)) / mc.std_error;
      worst_z = std::max(worst_z, z);
      if (z <= 4) ++within;
    }
  }
  o.pass = worst <= 1e-8 && within == spots.size();
  o.detail = "max |spectral - matrix| " + num(worst) + " (i,j<=10, n<=100, N=400); Monte Carlo " +
             std::to_string(within) + "/12 within 4 SE, max z " + num(worst_z);
  return o;
}

Outcome criterion_4() {
  Outcome o;
  double worst = 0, worst_chain = 0;
  for (const char* name : {"A", "B", "C", "S"}) {
    const auto c = chain(name);
    const auto rc = stieltjes_recurrence(quadrature_from_chain(c, 400), 30);
    const auto src = recurrence_from_chain(c, 30);
    for (std::size_t k = 0; k < 30; ++k) worst = std::max(worst, d(abs(rc.b[k] - src.b[k])));
    for (std::size_t k = 0; k + 1 < 30; ++k) worst = std::max(worst, d(abs(rc.a[k] - src.a[k])));
    const auto rec = chain_from_recurrence(rc, name);
    if (!rec.ok()) return {false, std::string("recovery failed for ") + name};
    for (std::size_t j = 0; j < 30; ++j) {
      const auto x = c.at(j), y = rec.chain->at(j);
      worst_chain = std::max({worst_chain, d(abs(x.p - y.p)), d(abs(x.q - y.q)), d(abs(x.r - y.r))});
    }
  }
  o.pass = worst <= 1e-8 && worst_chain <= 1e-8;
  o.detail = "max recurrence mismatch " + num(worst) + ", max (p,q,r) mismatch " + num(worst_chain) +
             " over 30 indices, A,B,C,S";
  return o;
}

Outcome criterion_5() {
  // The ordering is compared up to a few units in the last place: the
  // eigenvalue solver and the bisection both stop at working precision.
  Outcome o;
  std::ostringstream os;
  double worst_gap = 0, widest = 0;
  for (const char* name : {"A", "C", "S"}) {
    const auto e = support_edges(chain(name), 2000, Real(1) / Real(100000000));
    const double ulps = d(std::numeric_limits<Real>::epsilon());
    const double top_gap = d(e.eta_eigen - e.eta_bisection) / ulps;
    const double bottom_gap = d(e.zeta_bisection - e.zeta_eigen) / ulps;
    worst_gap = std::max({worst_gap, top_gap, bottom_gap});
    widest = std::max(widest, d(std::max(e.eta_bisection, e.eta_hat) - e.eta_eigen));
    if (std::string(name) == "C") {
      const double err = d(abs(e.eta_hat - 2 * sqrt(Real(21) / 100)));
      os << "; C eta error " << num(err);
      o.pass = o.pass && err <= 1e-6;
    }
  }
  const bool ordered = worst_gap <= 4;
  o.pass = o.pass && ordered && widest <= 1e-4;
  o.detail = std::string("bisection >= eigen ") + (ordered ? "holds" : "VIOLATED") + " (worst inversion " + num(worst_gap) +
             " eps); widest bracket " + num(widest) + " at N=2000" + os.str();
  return o;
}

Outcome criterion_6() {
  Outcome o;
  const auto rep = chain_report("A");
  double worst_c = 0, worst_r = 0;
  for (const auto& c : rep.Cn) worst_c = std::max(worst_c, d(abs(c - 1)));
  for (const auto& r : rep.rho_ratio) worst_r = std::max(worst_r, d(abs(r - 1)));
  o.pass = rep.branch == Branch::i && worst_c <= 1e-10 && worst_r <= 1e-10 && rep.verdict == ConjectureVerdict::consistent &&
           rep.Cn.size() == 2 * 400;
  o.detail = "branch " + to_string(rep.branch) + ", max |C_n - 1| " + num(worst_c) + " for n<=" +
             std::to_string(rep.Cn.size() - 1) + ", max |ratio - 1| " + num(worst_r) + ", verdict " + to_string(rep.verdict);
  return o;
}

Outcome criterion_7() {
  Outcome o;
  rep_B = chain_report("B");
  const auto& rep = *rep_B;
  o.pass = rep.branch == Branch::ii && rep.lim_Cn.is_finite() && abs(rep.lim_Cn.value) <= Real(1e-6) &&
           rep.lim_rho_ratio.is_finite() && abs(rep.lim_rho_ratio.value) <= Real(1e-6) &&
           rep.verdict == ConjectureVerdict::consistent && rep.r_sum->verdict == Verdict::diverges;
  o.detail = "branch " + to_string(rep.branch) + ", lim C_n " + num(d(rep.lim_Cn.value)) + ", lim ratio " +
             num(d(rep.lim_rho_ratio.value)) + ", r-sum " + to_string(rep.r_sum->verdict) + ", verdict " +
             to_string(rep.verdict);
  return o;
}

Outcome criterion_8() {
  Outcome o;
  run_D = weight_pipeline("D");
  const auto& rep = run_D->report;
  double oracle = 0;
  for (int k = 0; k < 200; ++k) oracle = std::max(oracle, std::abs(d(run_D->rc.b[k]) - jacobi_b(k, 0.5, 1.5)));
  for (int k = 1; k < 200; ++k) oracle = std::max(oracle, std::abs(d(run_D->rc.a[k - 1]) - jacobi_a(k, 0.5, 1.5)));
  const auto cw = prediction_Cw(*rep.exponents);
  const bool small = rep.lim_Cn.is_finite() && rep.lim_rho_ratio.is_finite() && abs(rep.lim_Cn.value) <= Real(0.02) &&
                     abs(rep.lim_rho_ratio.value) <= Real(0.02);
  const bool tails = decreasing_tail(rep.Cn) && decreasing_tail(rep.rho_ratio);
  o.pass = small && tails && rep.predicted && *rep.predicted == 0 && cw.value == 0 && oracle <= 1e-10 &&
           rep.verdict == ConjectureVerdict::consistent;
  o.detail = "lim C_n " + num(d(rep.lim_Cn.value)) + ", lim ratio " + num(d(rep.lim_rho_ratio.value)) +
             ", tails " + (tails ? "decreasing" : "NOT decreasing") + ", branch " + to_string(rep.branch) +
             " predicts " + num(d(rep.predicted.value_or(Real(-1)))) + " (edge rule " + cw.rule + " predicts " +
             num(d(cw.value)) + "), Jacobi oracle " + num(oracle) + ", verdict " + to_string(rep.verdict);
  return o;
}

Outcome criterion_9() {
  Outcome o;
  run_E = weight_pipeline("E");
  const auto& rep = run_E->report;
  const Real third = Real(1) / 3;
  const bool close = rep.lim_Cn.is_finite() && rep.lim_rho_ratio.is_finite() &&
                     abs(rep.lim_Cn.value - third) <= Real(0.05) && abs(rep.lim_rho_ratio.value - third) <= Real(0.05);
  o.pass = close && run_E->cfg.horizon >= 2000 && run_E->cfg.truncation >= 2000 &&
           rep.verdict == ConjectureVerdict::consistent;
  o.detail = "lim C_n " + num(d(rep.lim_Cn.value)) + ", lim ratio " + num(d(rep.lim_rho_ratio.value)) + " (target 1/3), N=" +
             std::to_string(run_E->cfg.truncation) + ", n_max=" + std::to_string(run_E->cfg.horizon) + ", branch " +
             to_string(rep.branch) + ", " + std::to_string(run_E->recovery.snapped) + " r_k snapped to 0, verdict " +
             to_string(rep.verdict);
  return o;
}

Outcome criterion_10() {
  Outcome o;
  std::ostringstream os, skipped;
  std::size_t checked = 0;
  auto check = [&](const std::string& name, const ConjectureReport<Real>& rep) {
    if (rep.periodic) {
      skipped << ' ' << name;
      return;
    }
    ++checked;
    const bool ok = rep.supC_holds && rep.lim_rho_ratio.is_finite();
    o.pass = o.pass && ok;
    os << name << (ok ? " ok" : " FAIL") << " (" << num(d(rep.supC_max_tail)) << " vs " << num(d(rep.lim_rho_ratio.value))
       << "); ";
  };
  for (const char* name : {"A", "C", "S"}) check(name, chain_report(name));
  check("B", *rep_B);
  for (const char* name : {"K", "constant-killing", "R2"}) check(name, chain_report(name));
  check("D", run_D->report);
  check("E", run_E->report);
  o.pass = o.pass && checked >= 5;
  o.detail = "max C_n tail vs lim ratio + 1e-3: " + os.str() + "periodic, skipped:" + skipped.str();
  return o;
}

Outcome criterion_11() {
  Outcome o;
  const auto cfg = config("semicircle-dt");
  const auto S = chain_from_section<Real>(*cfg.chain(), cfg.document.origin);
  const auto spec = weight_from_section<Real>(*cfg.weight(), cfg.document.origin);
  const auto dt = danka_totik_check(S, edge_exponents(spec), spec.eta, cfg.horizon);
  double worst = 0;
  for (std::size_t n = 500; n <= dt.top.size(); ++n) worst = std::max(worst, std::abs(d(dt.top[n - 1]) / 3 - 1));
  o.pass = worst <= 0.01 && dt.top.size() >= 500;
  o.detail = "max |n^3 rho_n(1)/3 - 1| " + num(worst) + " for 500<=n<=" + std::to_string(dt.top.size()) +
             "; printed constant " + format_real(dt.paper_constant_top) + ", calibration factor " +
             format_real(dt.calibration_factor) + " (reported, not asserted)";
  return o;
}

Outcome criterion_12() {
  Outcome o;
  const auto ck = absorption_probabilities(chain("constant-killing"), 20, 799);
  bool ones = ck.route == "divergence";
  for (const auto& t : ck.tau) ones = ones && t == 1;
  const auto cfg = config("K");
  const auto K = chain_from_section<Real>(*cfg.chain(), cfg.document.origin);
  const auto a = absorption_probabilities(K, 0, cfg.horizon);
  const auto mc = monte_carlo_absorption(K, 0, 1000000, 20240917, 100000, cfg.option_size("escape_level", 60));
  const double z = std::abs(mc.estimate - d(a.tau[0])) / mc.std_error;
  o.pass = ones && z <= 4;
  o.detail = std::string("constant-killing tau_j ") + (ones ? "== 1 for j<=20 (divergence route)" : "NOT all 1") +
             "; K tau_0 " + num(d(a.tau[0])) + " vs Monte Carlo " + num(mc.estimate) + " +- " + num(mc.std_error) + " (z " +
             num(z) + ")";
  return o;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::function<Outcome()>> criteria = {criterion_1, criterion_2,  criterion_3,  criterion_4,
                                                          criterion_5, criterion_6,  criterion_7,  criterion_8,
                                                          criterion_9, criterion_10, criterion_11, criterion_12};
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s criterion %zu: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", k + 1, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool fast = total < 1800;
  if (!fast) ++failures;
  std::printf("%s criterion 13: whole suite %.1f s (limit 1800 s)\n", fast ? "PASS" : "FAIL", total);
  return failures == 0 ? 0 : 1;
}
