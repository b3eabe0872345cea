// rwlab: batch runner for the rwpoly pipelines.
//
//   rwlab <subcommand> --config FILE [--precision D] [--out DIR] [--seed S]
//         [--truncation N] [--horizon N_MAX]
//
// Exit status: 0 success, 2 conjecture verdict "inconsistent", 3 input
// error, 4 numerical failure. Diagnostics are JSON lines on stderr.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rwpoly/rwpoly.hpp"

namespace fs = std::filesystem;
using namespace rwpoly;

namespace {

struct Settings {
  fs::path config;
  fs::path out = "rwlab-out";
  std::optional<int> precision;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> truncation;
  std::optional<std::size_t> horizon;
};

struct Run {
  std::string subcommand;
  ExperimentConfig cfg;
  fs::path out;
  int status = 0;
};

void diagnostic(const std::string& level, const std::string& subcommand, const std::string& code,
                const std::string& message) {
  nlohmann::json j;
  j["level"] = level;
  j["subcommand"] = subcommand;
  j["code"] = code;
  j["message"] = message;
  std::cerr << j.dump() << '\n';
}

/// Writes through a temporary file so a reader never sees a partial output.
void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw Error(ErrorCode::invalid_argument, "cannot write '" + tmp.string() + "'");
    os << content;
  }
  fs::rename(tmp, path);
}

void emit(Run& run, const std::string& name, const std::string& content, bool echo) {
  write_atomic(run.out / name, content);
  if (echo) {
    std::cout << content;
  } else {
    std::cout << "wrote " << (run.out / name).string() << '\n';
  }
}

template <class Real>
Real option_real(const ExperimentConfig& cfg, const std::string& key, const Real& fallback) {
  const std::string v = cfg.option(key, "");
  return v.empty() ? fallback : parse_number<Real>(v);
}

std::vector<std::size_t> option_list(const ExperimentConfig& cfg, const std::string& key, const std::string& fallback) {
  std::vector<std::size_t> out;
  std::stringstream ss(cfg.option(key, fallback));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoul(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::parse_error, "option '" + key + "' must be a list of nonnegative integers");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Chain acquisition

template <class Real>
struct Recovered {
  ChainRecovery<Real> recovery;
  std::size_t nodes = 0;
  std::size_t depth = 0;
};

template <class Real>
std::size_t recovery_depth(const ExperimentConfig& cfg) {
  return std::max({cfg.truncation, cfg.horizon, cfg.option_size("series_terms", 2000)}) + 100;
}

template <class Real>
Recovered<Real> recover_from_weight(const ExperimentConfig& cfg, const WeightSpec<Real>& spec) {
  Recovered<Real> out;
  out.depth = cfg.option_size("recover_depth", recovery_depth<Real>(cfg));
  out.nodes = cfg.option_size("nodes", std::max<std::size_t>(8 * out.depth, 4000));
  const auto m = discretize_weight(spec, out.nodes);
  const auto rc = stieltjes_recurrence(m, out.depth);
  out.recovery = chain_from_recurrence(rc, spec.label);
  return out;
}

template <class Real>
ChainSpec<Real> require_recovered(const Recovered<Real>& r, const std::string& label) {
  if (!r.recovery.ok()) {
    const auto& f = *r.recovery.failure;
    throw Error(ErrorCode::not_random_walk_measure, "weight '" + label + "' is not a random walk measure: recovery fails at index " +
                                                        std::to_string(f.index) + " (" + f.reason + ")");
  }
  return *r.recovery.chain;
}

template <class Real>
std::optional<WeightSpec<Real>> load_weight(const ExperimentConfig& cfg) {
  if (!cfg.weight()) return std::nullopt;
  return weight_from_section<Real>(*cfg.weight(), cfg.document.origin);
}

template <class Real>
ChainSpec<Real> load_chain(Run& run) {
  const auto& cfg = run.cfg;
  if (cfg.chain()) return chain_from_section<Real>(*cfg.chain(), cfg.document.origin);
  const auto spec = *load_weight<Real>(cfg);
  auto rec = recover_from_weight(cfg, spec);
  if (rec.recovery.snapped > 0) {
    diagnostic("warning", run.subcommand, "snapped",
               std::to_string(rec.recovery.snapped) + " diagonal entries below 1e-13 taken as r_k = 0");
  }
  return require_recovered(rec, spec.label);
}

template <class Real>
Real edge_eta(Run& run, const ChainSpec<Real>& chain) {
  const std::string given = run.cfg.option("eta", "");
  if (!given.empty()) return parse_number<Real>(given);
  if (const auto w = load_weight<Real>(run.cfg)) return w->eta;
  return support_edges(chain, run.cfg.truncation, Real(1) / Real(100000000)).eta_hat;
}

// ---------------------------------------------------------------------------
// Subcommands

template <class Real>
void cmd_chain_info(Run& run) {
  const auto chain = load_chain<Real>(run);
  const std::size_t terms = std::min(run.cfg.option_size("series_terms", 2000), chain.horizon() - 2);
  const auto c = classify(chain, terms);
  std::ostringstream os;
  os << "label = " << chain.label() << '\n';
  os << "prefix_size = " << chain.prefix_size() << '\n';
  os << "has_tail = " << (chain.has_tail() ? "true" : "false") << '\n';
  os << "periodic = " << (c.periodic ? "true" : "false") << '\n';
  os << "killing = " << (c.killing ? "true" : "false") << '\n';
  os << "recurrence = " << to_string(c.recurrence) << '\n';
  detail::write_verdict(os, "L", c.L);
  if (c.aperiodicity) detail::write_verdict(os, "aperiodicity_sum", *c.aperiodicity);
  detail::write_verdict(os, "rj_over_pj_sum", c.rj_pj);
  detail::write_verdict(os, "killing_sum", c.killing_sum);
  const auto pi = potential_coefficients(chain, std::min<std::size_t>(10, chain.horizon() - 1));
  for (std::size_t j = 0; j < pi.values.size(); ++j) os << "pi_" << j << " = " << format_real(pi.values[j]) << '\n';
  emit(run, "chain-info.txt", os.str(), true);
}

template <class Real>
void cmd_polys(Run& run) {
  const auto chain = load_chain<Real>(run);
  const Real x = option_real<Real>(run.cfg, "x", Real(1));
  const auto tr = eval_Q(chain, run.cfg.horizon, x);
  std::ostringstream os;
  write_csv(os, tr);
  emit(run, "polys.csv", os.str(), false);
}

template <class Real>
void cmd_edges(Run& run) {
  const auto chain = load_chain<Real>(run);
  const Real tol = option_real<Real>(run.cfg, "edge_tolerance", Real(1) / Real(100000000));
  const auto e = support_edges(chain, run.cfg.truncation, tol);
  std::ostringstream os;
  os << "label = " << chain.label() << '\n';
  os << "truncation = " << e.truncation_size << '\n';
  os << "eta_hat = " << format_real(e.eta_hat) << '\n';
  os << "zeta_hat = " << format_real(e.zeta_hat) << '\n';
  os << "method = " << to_string(e.method) << '\n';
  os << "discrepancy = " << format_real(e.discrepancy) << '\n';
  os << "eta_eigen = " << format_real(e.eta_eigen) << '\n';
  os << "eta_bisection = " << format_real(e.eta_bisection) << '\n';
  os << "zeta_eigen = " << format_real(e.zeta_eigen) << '\n';
  os << "zeta_bisection = " << format_real(e.zeta_bisection) << '\n';
  os << "eta_shift = " << format_real(e.eta_shift) << '\n';
  os << "zeta_shift = " << format_real(e.zeta_shift) << '\n';
  emit(run, "edges.txt", os.str(), true);
}

template <class Real>
void cmd_measure(Run& run) {
  DiscreteMeasure<Real> m;
  if (run.cfg.chain()) {
    m = quadrature_from_chain(load_chain<Real>(run), run.cfg.truncation);
  } else {
    const auto spec = *load_weight<Real>(run.cfg);
    m = discretize_weight(spec, run.cfg.option_size("nodes", 4000));
  }
  std::ostringstream os;
  write_csv(os, m);
  emit(run, "measure.csv", os.str(), false);
}

template <class Real>
void cmd_cn(Run& run) {
  const auto chain = load_chain<Real>(run);
  const std::size_t N = run.cfg.truncation;
  const std::size_t n_max = std::min(run.cfg.horizon, 2 * N - 1);
  if (n_max < run.cfg.horizon) {
    diagnostic("warning", run.subcommand, "horizon_capped",
               "C_n is exact for the Gauss rule only up to n = 2N-1 = " + std::to_string(n_max));
  }
  const auto cn = Cn_sequence(quadrature_from_chain(chain, N), n_max);
  std::ostringstream os;
  os << "n,C_n\n";
  for (std::size_t n = 0; n < cn.size(); ++n) os << n << ',' << format_real(cn[n]) << '\n';
  emit(run, "cn.csv", os.str(), false);
}

template <class Real>
void cmd_christoffel(Run& run) {
  const auto chain = load_chain<Real>(run);
  const Real eta = edge_eta(run, chain);
  const std::size_t n_max = run.cfg.horizon;
  const auto lp = log_christoffel_sequence(chain, n_max, eta);
  const auto lm = log_christoffel_sequence(chain, n_max, Real(-eta));
  const auto ratios = christoffel_ratio_sequence(chain, n_max, eta);
  std::ostringstream os;
  os << "n,rho_eta,rho_minus_eta,ratio\n";
  using std::exp;
  for (std::size_t n = 1; n <= n_max; ++n) {
    os << n << ',' << format_real(Real(exp(lp[n - 1]))) << ',' << format_real(Real(exp(lm[n - 1]))) << ','
       << format_real(ratios.ratio[n - 1]) << '\n';
  }
  emit(run, "christoffel.csv", os.str(), false);
}

template <class Real>
void cmd_normalize(Run& run) {
  const auto chain = load_chain<Real>(run);
  const Real eta = edge_eta(run, chain);
  const auto nc = normalize(chain, eta, run.cfg.option_size("depth", run.cfg.horizon));
  std::ostringstream os;
  write_normalized(os, nc);
  emit(run, "normalized.ini", os.str(), false);
}

template <class Real>
void cmd_recover(Run& run) {
  const auto spec = load_weight<Real>(run.cfg);
  if (!spec) throw Error(ErrorCode::invalid_argument, "recover needs a [weight] section");
  const auto rec = recover_from_weight(run.cfg, *spec);
  std::ostringstream info;
  info << "label = " << spec->label << '\n';
  info << "nodes = " << rec.nodes << '\n';
  info << "depth = " << rec.depth << '\n';
  info << "verified_through = " << rec.recovery.verified_through << '\n';
  info << "snapped = " << rec.recovery.snapped << '\n';
  if (rec.recovery.failure) {
    info << "failure.index = " << rec.recovery.failure->index << '\n';
    info << "failure.reason = " << rec.recovery.failure->reason << '\n';
  }
  write_atomic(run.out / "recover.txt", info.str());
  const auto chain = require_recovered(rec, spec->label);
  std::ostringstream os;
  os << "; provenance: recovered from weight '" << spec->label << "' with " << rec.nodes << " nodes, " << rec.depth
     << " coefficients, " << rec.recovery.snapped << " diagonal entries snapped to 0\n";
  write_chain(os, chain);
  emit(run, "recovered.ini", os.str(), false);
  std::cout << info.str();
}

template <class Real>
void cmd_srlp(Run& run) {
  const auto chain = load_chain<Real>(run);
  const Real eta = edge_eta(run, chain);
  const auto idx = option_list(run.cfg, "indices", "1,1,0,0");
  if (idx.size() != 4) throw Error(ErrorCode::parse_error, "option 'indices' takes four entries i,j,k,l");
  const auto cmp = srlp_predicted_limit(chain, idx[0], idx[1], idx[2], idx[3], eta, run.cfg.horizon);
  std::ostringstream os;
  os << "n,empirical,predicted\n";
  for (std::size_t n = 0; n < cmp.empirical.size(); ++n) {
    os << n << ',' << format_real(cmp.empirical[n]) << ',' << format_real(cmp.predicted) << '\n';
  }
  emit(run, "srlp.csv", os.str(), false);
  std::ostringstream summary;
  summary << "indices = " << idx[0] << ',' << idx[1] << ',' << idx[2] << ',' << idx[3] << '\n';
  summary << "eta = " << format_real(eta) << '\n';
  summary << "predicted = " << format_real(cmp.predicted) << '\n';
  summary << "empirical_last = " << format_real(cmp.empirical.back()) << '\n';
  emit(run, "srlp.txt", summary.str(), true);
}

template <class Real>
ConjectureOptions<Real> conjecture_options(const ExperimentConfig& cfg) {
  ConjectureOptions<Real> opt;
  opt.truncation = cfg.truncation;
  opt.horizon = cfg.horizon;
  opt.series_terms = cfg.option_size("series_terms", opt.series_terms);
  opt.condition_a_terms = cfg.option_size("condition_a_terms", opt.condition_a_terms);
  return opt;
}

template <class Real>
void cmd_conjecture(Run& run) {
  const auto chain = load_chain<Real>(run);
  const auto spec = load_weight<Real>(run.cfg);
  const auto rep = theorem_main_verdict(chain, spec, conjecture_options<Real>(run.cfg));
  std::ostringstream seq;
  write_sequences_csv(seq, rep);
  write_atomic(run.out / "conjecture.csv", seq.str());
  std::ostringstream os;
  write_report(os, rep);
  emit(run, "conjecture.txt", os.str(), true);
  if (rep.verdict == ConjectureVerdict::inconsistent) {
    diagnostic("error", run.subcommand, "inconsistent", rep.verdict_reason);
    run.status = 2;
  } else if (rep.verdict == ConjectureVerdict::inconclusive) {
    diagnostic("warning", run.subcommand, "inconclusive", rep.verdict_reason);
  }
  if (!rep.supC_holds) diagnostic("warning", run.subcommand, "supC", "C_n tail exceeds the rho-ratio limit + 1e-3");
}

template <class Real>
void cmd_dt_check(Run& run) {
  const auto chain = load_chain<Real>(run);
  const auto spec = load_weight<Real>(run.cfg);
  EdgeExponents<Real> ex;
  Real eta;
  if (spec) {
    ex = edge_exponents(*spec);
    eta = spec->eta;
  } else {
    for (const char* key : {"alpha", "beta", "w_eta", "w_minus_eta"}) {
      if (run.cfg.option(key, "").empty()) {
        throw Error(ErrorCode::invalid_argument, std::string("dt-check without a [weight] needs option '") + key + "'");
      }
    }
    ex.alpha = option_real<Real>(run.cfg, "alpha", Real(0));
    ex.beta = option_real<Real>(run.cfg, "beta", Real(0));
    ex.w_at_eta = option_real<Real>(run.cfg, "w_eta", Real(0));
    ex.w_at_minus_eta = option_real<Real>(run.cfg, "w_minus_eta", Real(0));
    eta = edge_eta(run, chain);
  }
  const auto dt = danka_totik_check(chain, ex, eta, run.cfg.horizon);
  std::ostringstream csv;
  write_csv(csv, dt);
  write_atomic(run.out / "dt-check.csv", csv.str());
  std::ostringstream os;
  os << "label = " << chain.label() << '\n';
  os << "eta = " << format_real(eta) << '\n';
  os << "alpha = " << format_real(ex.alpha) << '\n';
  os << "beta = " << format_real(ex.beta) << '\n';
  detail::write_limit(os, "top_limit", dt.top_limit);
  detail::write_limit(os, "bottom_limit", dt.bottom_limit);
  os << "paper_constant_top = " << format_real(dt.paper_constant_top) << '\n';
  os << "paper_constant_bottom = " << format_real(dt.paper_constant_bottom) << '\n';
  os << "semicircle_paper_constant = " << format_real(dt.semicircle_paper_constant) << '\n';
  os << "calibration_factor = " << format_real(dt.calibration_factor) << '\n';
  os << "calibrated_constant_top = " << format_real(Real(dt.paper_constant_top * dt.calibration_factor)) << '\n';
  os << "calibrated_constant_bottom = " << format_real(Real(dt.paper_constant_bottom * dt.calibration_factor)) << '\n';
  emit(run, "dt-check.txt", os.str(), true);
}

template <class Real>
void cmd_absorb(Run& run) {
  const auto chain = load_chain<Real>(run);
  const std::size_t j_max = run.cfg.option_size("j_max", 10);
  const auto a = absorption_probabilities(chain, j_max, run.cfg.horizon);
  std::ostringstream os;
  os << "j,tau,tau_uncertainty\n";
  for (std::size_t j = 0; j < a.tau.size(); ++j) {
    os << j << ',' << format_real(a.tau[j]) << ',' << format_real(a.tau_uncertainty[j]) << '\n';
  }
  write_atomic(run.out / "absorb.csv", os.str());
  std::ostringstream info;
  info << "label = " << chain.label() << '\n';
  info << "route = " << a.route << '\n';
  info << "q_infinity = " << format_real(a.q_infinity) << '\n';
  if (a.route != "no-killing") detail::write_verdict(info, "killing_sum", a.killing);
  if (a.limit) detail::write_limit(info, "q_limit", *a.limit);
  info << "tau_0 = " << format_real(a.tau[0]) << '\n';
  emit(run, "absorb.txt", info.str(), true);
}

template <class Real>
void cmd_mc(Run& run) {
  const auto chain = load_chain<Real>(run);
  const std::size_t samples = run.cfg.option_size("samples", 100000);
  const std::size_t i_max = run.cfg.option_size("i_max", 3), j_max = run.cfg.option_size("j_max", 3);
  const auto steps = option_list(run.cfg, "steps", "5,10,20");
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_top = *std::max_element(steps.begin(), steps.end());
  const auto m = quadrature_from_chain(chain, run.cfg.truncation);
  auto grid = transition_grid(chain, m, i_max, j_max, n_top);
  std::vector<TransitionQuery<Real>> picked;
  double worst = 0;
  for (auto& q : grid) {
    if (std::find(steps.begin(), steps.end(), q.n) == steps.end()) continue;
    q.value_mc = monte_carlo_transition(chain, q.i, q.j, q.n, samples, run.cfg.seed + q.i * 1000003 + q.j * 1009 + q.n,
                                        threads);
    if (q.value_mc->std_error > 0) {
      worst = std::max(worst, std::abs(q.value_mc->estimate - static_cast<double>(q.value_matrix)) / q.value_mc->std_error);
    }
    picked.push_back(q);
  }
  std::ostringstream os;
  write_csv(os, picked);
  write_atomic(run.out / "mc.csv", os.str());
  std::ostringstream info;
  info << "label = " << chain.label() << '\n';
  info << "samples = " << samples << '\n';
  info << "seed = " << run.cfg.seed << '\n';
  info << "max_z_transition = " << format_real(worst) << '\n';
  if (chain.has_killing()) {
    const std::size_t j_abs = run.cfg.option_size("absorb_from", 0);
    const std::size_t escape = run.cfg.option_size("escape_level", 60);
    const std::size_t max_steps = run.cfg.option_size("max_steps", 100000);
    const auto a = absorption_probabilities(chain, j_abs, run.cfg.horizon);
    const auto mc = monte_carlo_absorption(chain, j_abs, samples, run.cfg.seed, max_steps, escape, threads);
    const double tau = static_cast<double>(a.tau[j_abs]);
    info << "absorb_from = " << j_abs << '\n';
    info << "tau = " << format_real(a.tau[j_abs]) << '\n';
    info << "tau_mc = " << format_real(mc.estimate) << '\n';
    info << "tau_mc_std_error = " << format_real(mc.std_error) << '\n';
    info << "tau_z = " << format_real(mc.std_error > 0 ? std::abs(mc.estimate - tau) / mc.std_error : 0.0) << '\n';
  }
  emit(run, "mc.txt", info.str(), true);
}

using Handler = std::function<void(Run&)>;

Handler dispatch(const std::string& name) {
  // Each entry instantiates the subcommand for every backend.
  static const std::map<std::string, std::function<void(Run&, int)>> table = {
#define RWLAB_ENTRY(NAME, FN)                                                      \
  {NAME, [](Run& run, int digits) {                                               \
     with_precision(digits, [&]<class Real>() { FN<Real>(run); return 0; });       \
   }}
      RWLAB_ENTRY("chain-info", cmd_chain_info),   RWLAB_ENTRY("polys", cmd_polys),
      RWLAB_ENTRY("edges", cmd_edges),             RWLAB_ENTRY("measure", cmd_measure),
      RWLAB_ENTRY("cn", cmd_cn),                   RWLAB_ENTRY("christoffel", cmd_christoffel),
      RWLAB_ENTRY("normalize", cmd_normalize),     RWLAB_ENTRY("recover", cmd_recover),
      RWLAB_ENTRY("srlp", cmd_srlp),               RWLAB_ENTRY("conjecture", cmd_conjecture),
      RWLAB_ENTRY("dt-check", cmd_dt_check),       RWLAB_ENTRY("absorb", cmd_absorb),
      RWLAB_ENTRY("mc", cmd_mc),
#undef RWLAB_ENTRY
  };
  const auto it = table.find(name);
  return [fn = it->second](Run& run) { fn(run, run.cfg.precision); };
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse_error:
    case ErrorCode::malformed_chain:
    case ErrorCode::invalid_argument:
    case ErrorCode::not_random_walk_measure:
    case ErrorCode::spec_inconsistent:
    case ErrorCode::chain_has_killing:
    case ErrorCode::truncation_too_small:
    case ErrorCode::nonpositive_q:
      return 3;
    default:
      return 4;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rwlab: random walk polynomial experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings s;
  app.add_option("--config", s.config, "Config file ([chain], [weight], [experiment] sections)")->required();
  app.add_option("--precision", s.precision, "Working precision in decimal digits (>= 15)");
  app.add_option("--out", s.out, "Output directory")->capture_default_str();
  app.add_option("--seed", s.seed, "Monte Carlo seed");
  app.add_option("--truncation", s.truncation, "Truncation N (Gauss rule size, edge estimates)");
  app.add_option("--horizon", s.horizon, "Largest n for the sequences");
  const std::vector<std::pair<std::string, std::string>> subcommands = {
      {"chain-info", "Periodicity, killing and the classification sums"},
      {"polys", "Sign and log10 magnitude of Q_n(x) and p_n(x)"},
      {"edges", "Support edges by eigenvalue, positivity bisection and extrapolation"},
      {"measure", "Gauss rule of the chain or discretization of the weight"},
      {"cn", "C_n: negative-side over positive-side moments of the spectral measure"},
      {"christoffel", "rho_n(eta), rho_n(-eta) and their ratio"},
      {"normalize", "Normalized chain at eta, written as a chain file"},
      {"recover", "Chain recovered from the weight's recurrence coefficients"},
      {"srlp", "P_ij(n) / P_kl(n) against its predicted limit"},
      {"conjecture", "Branch, predicted limit and verdict of the main theorem"},
      {"dt-check", "Edge asymptotics of rho_n against the printed constants"},
      {"absorb", "Absorption probabilities tau_j of a killed chain"},
      {"mc", "Monte Carlo transition or absorption estimates"}};
  for (const auto& [name, help] : subcommands) app.add_subcommand(name, help);
  app.require_subcommand(1);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    diagnostic("error", "", "usage", e.what());
    return 3;
  }

  Run run;
  run.subcommand = app.get_subcommands().front()->get_name();
  try {
    if (!fs::exists(s.config)) throw Error(ErrorCode::parse_error, "config '" + s.config.string() + "' does not exist");
    run.cfg = read_experiment(s.config);
    if (s.precision) run.cfg.precision = *s.precision;
    if (s.seed) run.cfg.seed = *s.seed;
    if (s.truncation) run.cfg.truncation = *s.truncation;
    if (s.horizon) run.cfg.horizon = *s.horizon;
    run.cfg.validate();
    run.out = s.out;
    fs::create_directories(run.out);
    dispatch(run.subcommand)(run);
  } catch (const Error& e) {
    diagnostic("error", run.subcommand, std::string(to_string(e.code())), e.what());
    return exit_code(e.code());
  } catch (const std::exception& e) {
    diagnostic("error", run.subcommand, "internal", e.what());
    return 4;
  }
  return run.status;
}
