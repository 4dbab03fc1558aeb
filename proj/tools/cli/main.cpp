// pecert: randomness-certification toolkit front end.
//
//   fit        project empirical trial frequencies onto a constraint set
//   rates      log2-prob rate and net rate across a power grid
//   certify    split-mode or adaptive certification of a trial file
//   breakeven  smallest expansion-positive trial count for a source
//   biassweep  gain rate across a settings-bias grid
//   extract    protocol Q/P: certify, then extract output bits
//   simulate   draw trials from a distribution into a trial file
//   reproduce  recompute the embedded-dataset numbers against stored values
//
// Options may also come from a key=value file (--config); flags win.
// Every report embeds the config hash, the seed, and the RNG name.
// Exit codes: 0 ok, 2 parse/config error, 3 solver failure, 4 reproduction
// mismatch.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <future>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "pecert/bellmodel.hpp"
#include "pecert/certify.hpp"
#include "pecert/datasets.hpp"
#include "pecert/extract.hpp"
#include "pecert/io.hpp"
#include "pecert/mlfit.hpp"
#include "pecert/pefopt.hpp"
#include "pecert/rng.hpp"
#include "pecert/simulate.hpp"

using namespace pecert;

namespace {

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

PolytopeKind parse_kind(const std::string& name) {
  if (name == "LR") return PolytopeKind::LR;
  if (name == "NS") return PolytopeKind::NS;
  if (name == "Q") return PolytopeKind::Q;
  throw std::invalid_argument("unknown model kind: " + name);
}

// --dataset takes an embedded name, --dist a distribution file; exactly one.
ConditionalDistribution load_source(const std::string& dataset, const std::string& dist_path) {
  if (dataset.empty() == dist_path.empty())
    throw std::invalid_argument("give exactly one of --dataset and --dist");
  return dataset.empty() ? read_distribution(dist_path) : embedded_dataset(dataset);
}

SettingsDistribution average_settings(const Model& model) {
  SettingsDistribution avg{};
  for (const SettingsDistribution& s : model.settings_points)
    for (int z = 0; z < kSettings; ++z) avg.p[z] += s.p[z] / model.settings_points.size();
  return avg;
}

using Items = std::vector<std::pair<std::string, std::string>>;

Items report_head(const std::string& command, std::uint64_t config_hash,
                  const std::string& seed) {
  return {{"command", command},
          {"config_hash", hex64(config_hash)},
          {"rng", kRngAlgorithm},
          {"seed", seed}};
}

void emit(const std::string& path, const Items& items) {
  write_report(path, items);
  for (const auto& [k, v] : items) std::printf("%s = %s\n", k.c_str(), v.c_str());
}

// ---- fit ----------------------------------------------------------------

struct FitArgs {
  std::string trials, counts, model = "Q", out = "fit_report.txt", nu_out;
  double tol = 1e-8;
  std::uint64_t max_iter = 1000000;
};

void run_fit(const FitArgs& a, std::uint64_t config_hash) {
  if (a.trials.empty() == a.counts.empty())
    throw std::invalid_argument("give exactly one of --trials and --counts");
  FrequencyTable table = a.counts.empty()
                             ? FrequencyTable::from_trials(read_trials(a.trials))
                             : read_counts(a.counts);
  MlOptions opts;
  opts.tol = a.tol;
  opts.max_iter = a.max_iter;
  MlFit fit = ml_project(table, parse_kind(a.model), opts);
  if (!a.nu_out.empty()) write_distribution(a.nu_out, fit.nu);

  Items items = report_head("fit", config_hash, "-");
  items.emplace_back("model", a.model);
  items.emplace_back("n_trials", std::to_string(table.total()));
  items.emplace_back("objective", fmt(fit.objective));
  items.emplace_back("kkt_gap", fmt(fit.kkt_gap));
  items.emplace_back("iterations", std::to_string(fit.iterations));
  if (!a.nu_out.empty()) items.emplace_back("nu_out", a.nu_out);
  emit(a.out, items);
}

// ---- rates --------------------------------------------------------------

struct RatesArgs {
  std::string dataset, dist, model = "Q", out = "rates";
  double bias = 0.0, eps_h = 1e-6;
  std::uint64_t n = 100000;
  std::vector<double> betas = {1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2};
};

void run_rates(const RatesArgs& a, std::uint64_t config_hash) {
  ConditionalDistribution cond = load_source(a.dataset, a.dist);
  Model model = make_model(parse_kind(a.model), a.bias);
  JointDistribution rho = JointDistribution::combine(cond, uniform_settings());
  double kappa = std::log2(1.0 / a.eps_h);

  std::vector<std::future<double>> futs;
  futs.reserve(a.betas.size());
  for (double beta : a.betas)
    futs.push_back(std::async(std::launch::async, [&model, &rho, beta] {
      return log_prob_rate(optimize_pef(model, rho, beta), rho);
    }));

  std::FILE* fr = std::fopen((a.out + "_rate.tsv").c_str(), "w");
  std::FILE* fn = std::fopen((a.out + "_net.tsv").c_str(), "w");
  if (!fr || !fn) throw IoError(a.out, "cannot open output files");
  for (std::size_t i = 0; i < a.betas.size(); ++i) {
    double rate = futs[i].get();
    double net = rate - kappa / (a.betas[i] * static_cast<double>(a.n));
    std::fprintf(fr, "%.10g\t%.12g\n", a.betas[i], rate);
    std::fprintf(fn, "%.10g\t%.12g\n", a.betas[i], net);
  }
  std::fclose(fr);
  std::fclose(fn);

  Items items = report_head("rates", config_hash, "-");
  items.emplace_back("model", a.model);
  items.emplace_back("bias", fmt(a.bias));
  items.emplace_back("eps_h", fmt(a.eps_h));
  items.emplace_back("n", std::to_string(a.n));
  items.emplace_back("grid_points", std::to_string(a.betas.size()));
  items.emplace_back("rate_curve", a.out + "_rate.tsv");
  items.emplace_back("net_curve", a.out + "_net.tsv");
  emit(a.out + "_report.txt", items);
}

// ---- certify ------------------------------------------------------------

struct CertifyArgs {
  std::string trials, model = "Q", estimator = "final", out = "certify_report.txt", pef_out;
  double beta = 5e-3, eps_h = 1e-6, split = 0.5;
  bool adaptive = false;
  std::uint64_t warmup = 10000, refresh = 50000;
  double threshold_q = 0.0;  // 0 disables the early-stop target
};

void run_certify(const CertifyArgs& a, std::uint64_t config_hash) {
  if (a.estimator != "final" && a.estimator != "running-max")
    throw std::invalid_argument("estimator must be final or running-max");
  std::vector<TrialRecord> trials = read_trials(a.trials);
  Model model = make_model(parse_kind(a.model));

  Items items = report_head("certify", config_hash, "-");
  items.emplace_back("model", a.model);
  items.emplace_back("beta", fmt(a.beta));
  items.emplace_back("eps_h", fmt(a.eps_h));
  items.emplace_back("estimator", a.estimator);

  CertReport rep;
  CertState state;
  if (a.adaptive) {
    AdaptiveOptions opts;
    opts.warmup = a.warmup;
    opts.refresh = a.refresh;
    AdaptiveReport ar = adaptive_run(trials, model, a.beta, a.eps_h, opts);
    rep = ar.report;
    state = ar.state;
    items.emplace_back("mode", "adaptive");
    items.emplace_back("segments", std::to_string(ar.schedule.size()));
  } else {
    if (!(a.split > 0.0 && a.split < 1.0))
      throw std::invalid_argument("split fraction must be in (0,1)");
    auto n_train = static_cast<std::size_t>(a.split * static_cast<double>(trials.size()));
    if (n_train == 0 || n_train >= trials.size())
      throw std::invalid_argument("split leaves an empty training or analysis part");
    std::vector<TrialRecord> train(trials.begin(), trials.begin() + n_train);
    std::vector<TrialRecord> analysis(trials.begin() + n_train, trials.end());
    MlFit fit = ml_project(FrequencyTable::from_trials(train), parse_kind(a.model));
    JointDistribution rho = JointDistribution::combine(fit.nu, average_settings(model));
    Pef pef = optimize_pef(model, rho, a.beta);
    if (!a.pef_out.empty()) write_pef(a.pef_out, pef);
    std::optional<double> threshold;
    if (a.threshold_q > 0.0) threshold = a.threshold_q;
    state = new_session(a.beta, a.eps_h, analysis.size(), threshold);
    for (const TrialRecord& t : analysis) {
      accumulate(state, t, pef);
      if (state.frozen) break;
    }
    rep = report(state);
    items.emplace_back("mode", "split");
    items.emplace_back("split", fmt(a.split));
    items.emplace_back("n_train", std::to_string(train.size()));
    items.emplace_back("n_analysis", std::to_string(analysis.size()));
    if (!a.pef_out.empty()) items.emplace_back("pef_out", a.pef_out);
  }
  items.emplace_back("n_scored", std::to_string(state.n));
  items.emplace_back("log2_t", fmt(state.log2_t));
  items.emplace_back("net_log2_prob", fmt(rep.net_log2_prob));
  items.emplace_back("sigma_h", fmt(rep.sigma_h));
  bool final = a.estimator == "final";
  items.emplace_back("u", fmt(final ? rep.u_final : rep.u_running_max));
  items.emplace_back("log2_u", fmt(final ? rep.log2_u_final : rep.log2_u_running_max));
  items.emplace_back("frozen", state.frozen ? "1" : "0");
  items.emplace_back("failed", state.failed ? "1" : "0");
  emit(a.out, items);
}

// ---- breakeven ----------------------------------------------------------

struct BreakEvenArgs {
  std::string dataset, dist, model = "Q", out = "breakeven_report.txt";
  double eps_h = 1e-6;
  int z0 = 3;
};

void run_breakeven(const BreakEvenArgs& a, std::uint64_t config_hash) {
  ConditionalDistribution cond = load_source(a.dataset, a.dist);
  BreakEvenResult r = break_even(make_model(parse_kind(a.model)), cond,
                                 std::log2(1.0 / a.eps_h), a.z0);
  Items items = report_head("breakeven", config_hash, "-");
  items.emplace_back("model", a.model);
  items.emplace_back("eps_h", fmt(a.eps_h));
  items.emplace_back("z0", std::to_string(a.z0));
  items.emplace_back("n_c", fmt(r.n_c));
  items.emplace_back("beta", fmt(r.beta));
  items.emplace_back("r", fmt(r.r));
  items.emplace_back("sigma", fmt(r.sigma));
  items.emplace_back("objective", fmt(r.objective));
  emit(a.out, items);
}

// ---- biassweep ----------------------------------------------------------

struct BiasSweepArgs {
  std::string dataset, dist, model = "Q", out = "biassweep";
  double bias_max = 0.05, bias_step = 0.01;
};

void run_biassweep(const BiasSweepArgs& a, std::uint64_t config_hash) {
  if (!(a.bias_step > 0.0)) throw std::invalid_argument("bias step must be positive");
  ConditionalDistribution cond = load_source(a.dataset, a.dist);
  PolytopeKind kind = parse_kind(a.model);
  JointDistribution rho = JointDistribution::combine(cond, uniform_settings());

  std::vector<double> grid;
  for (double b = 0.0; b <= a.bias_max + 1e-12; b += a.bias_step) grid.push_back(b);
  std::vector<std::future<double>> futs;
  futs.reserve(grid.size());
  for (double b : grid)
    futs.push_back(std::async(std::launch::async, [kind, &rho, b] {
      return min_conditional_entropy(make_model(kind, b), rho);
    }));

  std::FILE* f = std::fopen((a.out + ".tsv").c_str(), "w");
  if (!f) throw IoError(a.out + ".tsv", "cannot open output file");
  for (std::size_t i = 0; i < grid.size(); ++i)
    std::fprintf(f, "%.10g\t%.12g\n", grid[i], futs[i].get());
  std::fclose(f);

  Items items = report_head("biassweep", config_hash, "-");
  items.emplace_back("model", a.model);
  items.emplace_back("grid_points", std::to_string(grid.size()));
  items.emplace_back("curve", a.out + ".tsv");
  emit(a.out + "_report.txt", items);
}

// ---- extract ------------------------------------------------------------

struct ExtractArgs {
  std::string trials, pef, protocol = "q", banked_file;
  std::string out = "extract_report.txt", bits_out = "extract_bits.txt";
  std::uint64_t sigma_h = 0, seed = 1, banked_seed = 0;
  double eps_h = 1e-3, eps_x = 2.3283064365386963e-10;  // 2^-32
};

void run_extract(const ExtractArgs& a, std::uint64_t config_hash) {
  std::vector<TrialRecord> trials = read_trials(a.trials);
  Pef pef = read_pef(a.pef);
  SeededBitSource seed_source(a.seed);

  ProtocolResult r;
  if (a.protocol == "q") {
    r = run_protocol_q(trials, pef, a.sigma_h, a.eps_h, a.eps_x, seed_source);
  } else if (a.protocol == "p") {
    std::unique_ptr<BitSource> banked;
    if (!a.banked_file.empty())
      banked = std::make_unique<FileBitSource>(a.banked_file);
    else
      banked = std::make_unique<SeededBitSource>(a.banked_seed ? a.banked_seed : a.seed + 1);
    r = run_protocol_p(trials, pef, a.sigma_h, a.eps_h, a.eps_x, seed_source, *banked);
  } else {
    throw std::invalid_argument("protocol must be q or p");
  }
  if (!r.output.empty()) write_bits(a.bits_out, r.output);

  Items items = report_head("extract", config_hash, std::to_string(a.seed));
  items.emplace_back("protocol", a.protocol);
  items.emplace_back("pass", r.pass ? "1" : "0");
  items.emplace_back("sigma_h", std::to_string(r.sigma_h));
  items.emplace_back("sigma", std::to_string(r.sigma));
  items.emplace_back("k_banked", std::to_string(r.k_banked));
  items.emplace_back("net_log2_prob", fmt(r.net_log2_prob));
  items.emplace_back("eps_h", fmt(r.eps_h));
  items.emplace_back("eps_x", fmt(r.eps_x));
  items.emplace_back("output_bits", std::to_string(r.output.size()));
  if (!r.output.empty()) items.emplace_back("bits_out", a.bits_out);
  items.emplace_back("seed_provenance", r.seed_provenance);
  emit(a.out, items);
}

// ---- simulate -----------------------------------------------------------

struct SimulateArgs {
  std::string dataset, dist, mode = "uniform", out = "trials.txt";
  std::string drift_dataset, drift_dist;
  std::uint64_t n = 0, drift_n = 0, seed = 1;
  double r = 0.01;
  int z0 = 3, block_k = 1;
  bool pad = false;
};

void run_simulate(const SimulateArgs& a, std::uint64_t config_hash) {
  if (a.n == 0) throw std::invalid_argument("need --n > 0");
  ConditionalDistribution cond = load_source(a.dataset, a.dist);

  std::vector<TrialRecord> trials;
  if (a.mode == "uniform") {
    trials = sample_trials(cond, uniform_settings(), a.n, a.seed);
  } else if (a.mode == "spotcheck" || a.mode == "blockwise") {
    SpotCheckConfig cfg;
    cfg.r = a.r;
    cfg.z0 = a.z0;
    cfg.block_k = a.block_k;
    SpotCheckMode m = a.mode == "spotcheck" ? SpotCheckMode::Iid : SpotCheckMode::Blockwise;
    trials = sample_spotcheck_trials(cond, cfg, m, a.n, a.seed, a.pad);
  } else {
    throw std::invalid_argument("mode must be uniform, spotcheck, or blockwise");
  }
  // optional second segment: two-segment drifting source
  if (!a.drift_dataset.empty() || !a.drift_dist.empty()) {
    if (a.drift_n == 0) throw std::invalid_argument("need --drift-n > 0 with a drift source");
    ConditionalDistribution cond2 = load_source(a.drift_dataset, a.drift_dist);
    std::vector<TrialRecord> tail = sample_trials(cond2, uniform_settings(), a.drift_n, a.seed + 1);
    trials.insert(trials.end(), tail.begin(), tail.end());
  }
  write_trials(a.out, trials);

  Items items = report_head("simulate", config_hash, std::to_string(a.seed));
  items.emplace_back("mode", a.mode);
  items.emplace_back("n", std::to_string(trials.size()));
  items.emplace_back("trials_out", a.out);
  emit(a.out + ".report.txt", items);
}

// ---- reproduce ----------------------------------------------------------

struct Repro {
  int mismatches = 0;

  void row(bool ok, const std::string& what) {
    std::printf("%-4s %s\n", ok ? "ok" : "MISMATCH", what.c_str());
    if (!ok) ++mismatches;
  }
  void value(double got, double want, double tol, const std::string& what) {
    char buf[240];
    std::snprintf(buf, sizeof buf, "%s: got %.15g, want %.15g", what.c_str(), got, want);
    row(std::fabs(got - want) <= tol, buf);
  }
  void relval(double got, double want, double rtol, const std::string& what) {
    char buf[240];
    std::snprintf(buf, sizeof buf, "%s: got %.10g, want %.10g", what.c_str(), got, want);
    row(std::fabs(got - want) <= rtol * std::fabs(want), buf);
  }
};

BitString bits_of(const std::string& s) {
  BitString b;
  for (char ch : s) b.push_back(ch == '1');
  return b;
}

int run_reproduce() {
  Repro rp;
  SettingsDistribution uni = uniform_settings();
  Model q = make_model(PolytopeKind::Q);
  Model ns = make_model(PolytopeKind::NS);

  // embedded tables: spot values, non-signaling, constraint-set membership
  ConditionalDistribution atoms = embedded_dataset("atoms");
  ConditionalDistribution xor3 = embedded_dataset("xor3");
  ConditionalDistribution ions = embedded_dataset("ions");
  rp.value(atoms.at(0, 0), 0.114583230563265, 1e-15, "atoms p(00|00)");
  rp.value(xor3.at(0, 0), 0.999596756631154, 1e-15, "xor3 p(00|00)");
  rp.value(ions.at(3, 0), 0.077378395334667, 1e-15, "ions p(00|11)");
  const std::pair<const char*, const ConditionalDistribution*> tables[] = {
      {"atoms", &atoms}, {"xor3", &xor3}, {"ions", &ions}};
  for (const auto& [name, cond] : tables) {
    rp.row(nonsignaling_check(*cond, 1e-9).pass, std::string(name) + " non-signaling at 1e-9");
    bool member = true;
    double gain = 0.0;
    try {
      gain = min_conditional_entropy(q, JointDistribution::combine(*cond, uni));
    } catch (const std::exception&) {
      member = false;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s inside the quantum set (gain %.9f)", name, gain);
    rp.row(member, buf);
  }

  // asymptotic gains by both routes
  JointDistribution rho = JointDistribution::combine(atoms, uni);
  rp.value(asymptotic_gain_rate(ns, rho, GainMethod::Lp), 0.087811314310, 1e-6, "NS gain, LP");
  rp.value(asymptotic_gain_rate(ns, rho, GainMethod::BetaSweep), 0.087811453245, 1e-6,
           "NS gain, sweep");
  rp.value(asymptotic_gain_rate(q, rho, GainMethod::Lp), 0.190828676031, 1e-6, "Q gain, LP");
  rp.value(asymptotic_gain_rate(q, rho, GainMethod::BetaSweep), 0.190829693867, 1e-6,
           "Q gain, sweep");

  // optimized rates at beta = 1e-3
  rp.value(log_prob_rate(optimize_pef(q, rho, 1e-3), rho), 0.186234803635, 2e-6,
           "Q rate at beta 1e-3");
  rp.value(log_prob_rate(optimize_pef(ns, rho, 1e-3), rho), 0.086864005493, 2e-6,
           "NS rate at beta 1e-3");

  // Bell-function landmarks
  double qmax = -1e300;
  for (const JointDistribution& v : q.vertices)
    qmax = std::max(qmax, bell_value(bell_function_chsh(), v));
  rp.value(qmax, tsirelson_bound(), 1e-12, "max CHSH over quantum-set vertices");
  std::vector<ConditionalDistribution> nspts = conditional_extreme_points(PolytopeKind::NS);
  double prmax = -1e300, lrmax = -1e300;
  for (std::size_t i = 16; i < nspts.size(); ++i)
    prmax = std::max(prmax, bell_value(bell_function_chsh(),
                                       JointDistribution::combine(nspts[i], uni)));
  for (int i = 0; i < 16; ++i)
    lrmax = std::max(lrmax, bell_value(bell_function_chsh(),
                                       JointDistribution::combine(nspts[i], uni)));
  rp.row(prmax == 0.25, "best PR box CHSH value exactly 1/4");
  rp.row(lrmax <= 0.0, "deterministic CHSH values never positive");

  // bias grid, quantum set
  const double bias_want[6] = {0.190828676031, 0.151764820852, 0.111804178680,
                               0.070933269056, 0.031305888311, 0.0};
  for (int i = 0; i <= 5; ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "Q gain at bias %.2f", 0.01 * i);
    rp.value(min_conditional_entropy(make_model(PolytopeKind::Q, 0.01 * i), rho), bias_want[i],
             1e-6, buf);
  }

  // estimator mean and its entropy equivalent
  std::array<double, kCells> unit;
  unit.fill(1.0);
  MaxProbEstimator est = optimize_maxprob_estimator(ns, rho, unit);
  rp.value(est.b_bar, 0.043905657155, 1e-9, "estimator mean at atoms");
  rp.value(-std::log2(1.0 - est.b_bar), 0.064775111368303, 1e-9, "-log2(1 - b_bar)");

  rp.value(conditional_entropy_bits(rho), 1.772970871269, 1e-9, "H(C|Z) at atoms");

  // ML projection of the CHSH-aligned PR box onto the quantum set
  FrequencyTable pr_counts;
  for (int z = 0; z < kSettings; ++z)
    for (int c = 0; c < kOutcomes; ++c) {
      auto n = static_cast<std::uint64_t>(std::llround(nspts[20].at(z, c) * double(1 << 20)));
      if (n) pr_counts.add(z & 1, z >> 1, c & 1, c >> 1, n);
    }
  rp.value(ml_project(pr_counts, PolytopeKind::Q).objective, -0.158347183820375, 1e-6,
           "PR-box projection objective");

  // spot-check at r = 1 reduces to the plain optimized rate
  rp.value(optimized_spotcheck_rate(q.cond_points, atoms, 1.0, 1e-3), 0.186234803635, 2e-5,
           "spot-check rate at r = 1");

  // extractor golden vectors and parameter calculators
  rp.row(toeplitz_extract(bits_of("10"), bits_of("10"), 1) == bits_of("1"), "extract golden 1");
  BitString d2 = bits_of("1100001101010101011100011011000001011111001010011000101011100100");
  BitString s2 =
      bits_of("1010110101110100101110010011101000010100001000000110000101100100101111101011011");
  rp.row(toeplitz_extract(d2, s2, 16) == bits_of("0011000111100010"), "extract golden 2");
  BitString d3 = bits_of(
      "00111111101101111110011111100100011011111100110110010001100100011110001110100011011100010000"
      "01110111");
  BitString s3 = bits_of(
      "01110101001001000101011101000111010011111001000100101001100100111001011010101000011110010111"
      "100101000111001010111111111101100110010");
  rp.row(toeplitz_extract(d3, s3, 32) == bits_of("10101011011111110010101001011011"),
         "extract golden 3");
  ExtractorParams ep = toeplitz_params(200, 100.0, std::pow(2.0, -10));
  rp.row(ep.sigma == 80 && ep.l == 279, "hash sizing at (200, 100, 2^-10)");
  TmpsParams tp = tmps_params(256, std::pow(2.0, -10), 1000000);
  rp.value(tp.sigma_h, 334.0, 1e-12, "reference-construction entropy at sigma 256");
  rp.value(var_frb_bound(0.5, 0.0, 1e-3, 0.01), 0.00019218120556728055, 1e-12,
           "variance bound (0.5, 0, 1e-3, 0.01)");
  ChainSoundness cs = chain_soundness(0.001, 0.001, 0.001);
  rp.value(cs.basic, 0.004, 1e-15, "chained soundness, basic");

  // break-even table rows (eps_h = 1e-6)
  BreakEvenResult be_ns = break_even(ns, atoms, std::log2(1e6));
  rp.relval(be_ns.sigma, 0.060561, 5e-3, "break-even NS sigma");
  rp.relval(be_ns.n_c, 5177642.0, 1e-2, "break-even NS n_c");
  BreakEvenResult be_q = break_even(q, atoms, std::log2(1e6));
  rp.relval(be_q.sigma, 0.108035, 5e-3, "break-even Q sigma");
  rp.relval(be_q.n_c, 2667562.0, 1e-2, "break-even Q n_c");

  std::printf("REPRODUCE %s (%d mismatches)\n", rp.mismatches ? "FAIL" : "PASS", rp.mismatches);
  return rp.mismatches ? 4 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"randomness certification from Bell-test trial data"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file (flags take precedence)");

  FitArgs fit;
  CLI::App* c_fit = app.add_subcommand("fit", "project trial frequencies onto a constraint set");
  c_fit->add_option("--trials", fit.trials, "trial file, lines x,y,a,b[,t]");
  c_fit->add_option("--counts", fit.counts, "count file, lines x,y,a,b,count");
  c_fit->add_option("--model", fit.model, "LR, NS, or Q")->capture_default_str();
  c_fit->add_option("--tol", fit.tol, "stationarity gap target")->capture_default_str();
  c_fit->add_option("--max-iter", fit.max_iter)->capture_default_str();
  c_fit->add_option("--nu-out", fit.nu_out, "write the fitted distribution here");
  c_fit->add_option("--out", fit.out, "report path")->capture_default_str();

  RatesArgs rates;
  CLI::App* c_rates = app.add_subcommand("rates", "rate and net-rate curves over a power grid");
  c_rates->add_option("--dataset", rates.dataset, "embedded source: atoms, xor3, ions");
  c_rates->add_option("--dist", rates.dist, "distribution file");
  c_rates->add_option("--model", rates.model)->capture_default_str();
  c_rates->add_option("--bias", rates.bias, "settings-bias allowance")->capture_default_str();
  c_rates->add_option("--beta", rates.betas, "power grid")->capture_default_str();
  c_rates->add_option("--eps-h", rates.eps_h)->capture_default_str();
  c_rates->add_option("--n", rates.n, "trial count for the net rate")->capture_default_str();
  c_rates->add_option("--out", rates.out, "output prefix")->capture_default_str();

  CertifyArgs cert;
  CLI::App* c_cert = app.add_subcommand("certify", "certify a trial file");
  c_cert->add_option("--trials", cert.trials)->required();
  c_cert->add_option("--model", cert.model)->capture_default_str();
  c_cert->add_option("--beta", cert.beta)->capture_default_str();
  c_cert->add_option("--eps-h", cert.eps_h)->capture_default_str();
  c_cert->add_option("--split", cert.split, "training fraction (split mode)")
      ->capture_default_str();
  c_cert->add_flag("--adaptive", cert.adaptive, "periodic refit instead of a single split");
  c_cert->add_option("--warmup", cert.warmup, "adaptive: trials before the first fit")
      ->capture_default_str();
  c_cert->add_option("--refresh", cert.refresh, "adaptive: refit cadence")->capture_default_str();
  c_cert->add_option("--estimator", cert.estimator, "final or running-max")
      ->capture_default_str();
  c_cert->add_option("--threshold-q", cert.threshold_q, "early-stop target on the estimate");
  c_cert->add_option("--pef-out", cert.pef_out, "split mode: write the trained factor here");
  c_cert->add_option("--out", cert.out)->capture_default_str();

  BreakEvenArgs bre;
  CLI::App* c_bre = app.add_subcommand("breakeven", "smallest expansion-positive trial count");
  c_bre->add_option("--dataset", bre.dataset);
  c_bre->add_option("--dist", bre.dist);
  c_bre->add_option("--model", bre.model)->capture_default_str();
  c_bre->add_option("--eps-h", bre.eps_h)->capture_default_str();
  c_bre->add_option("--z0", bre.z0, "default setting of the spot-check")->capture_default_str();
  c_bre->add_option("--out", bre.out)->capture_default_str();

  BiasSweepArgs bias;
  CLI::App* c_bias = app.add_subcommand("biassweep", "gain rate across a settings-bias grid");
  c_bias->add_option("--dataset", bias.dataset);
  c_bias->add_option("--dist", bias.dist);
  c_bias->add_option("--model", bias.model)->capture_default_str();
  c_bias->add_option("--bias-max", bias.bias_max)->capture_default_str();
  c_bias->add_option("--bias-step", bias.bias_step)->capture_default_str();
  c_bias->add_option("--out", bias.out, "output prefix")->capture_default_str();

  ExtractArgs ext;
  CLI::App* c_ext = app.add_subcommand("extract", "run protocol Q or P end to end");
  c_ext->add_option("--trials", ext.trials)->required();
  c_ext->add_option("--pef", ext.pef, "factor file")->required();
  c_ext->add_option("--protocol", ext.protocol, "q or p")->capture_default_str();
  c_ext->add_option("--sigma-h", ext.sigma_h, "certified entropy target")->required();
  c_ext->add_option("--eps-h", ext.eps_h)->capture_default_str();
  c_ext->add_option("--eps-x", ext.eps_x)->capture_default_str();
  c_ext->add_option("--seed", ext.seed, "extractor seed source")->capture_default_str();
  c_ext->add_option("--banked-seed", ext.banked_seed, "protocol P bank source (default seed+1)");
  c_ext->add_option("--banked-file", ext.banked_file, "protocol P bank bits from a file");
  c_ext->add_option("--bits-out", ext.bits_out)->capture_default_str();
  c_ext->add_option("--out", ext.out)->capture_default_str();

  SimulateArgs sim;
  CLI::App* c_sim = app.add_subcommand("simulate", "draw trials into a trial file");
  c_sim->add_option("--dataset", sim.dataset);
  c_sim->add_option("--dist", sim.dist);
  c_sim->add_option("--n", sim.n, "trial count")->required();
  c_sim->add_option("--seed", sim.seed)->capture_default_str();
  c_sim->add_option("--mode", sim.mode, "uniform, spotcheck, or blockwise")
      ->capture_default_str();
  c_sim->add_option("--r", sim.r, "spot-check test probability")->capture_default_str();
  c_sim->add_option("--z0", sim.z0)->capture_default_str();
  c_sim->add_option("--block-k", sim.block_k, "blockwise: block length 2^k")
      ->capture_default_str();
  c_sim->add_flag("--pad", sim.pad, "blockwise: pad skipped positions with default trials");
  c_sim->add_option("--drift-dataset", sim.drift_dataset, "second-segment source");
  c_sim->add_option("--drift-dist", sim.drift_dist);
  c_sim->add_option("--drift-n", sim.drift_n, "second-segment trial count");
  c_sim->add_option("--out", sim.out)->capture_default_str();

  CLI::App* c_rep =
      app.add_subcommand("reproduce", "recompute embedded-dataset numbers, exit 4 on mismatch");

  int rc = 0;
  try {
    app.parse(argc, argv);
    std::uint64_t config_hash = fnv1a64(app.config_to_str(true, false));
    if (*c_fit) run_fit(fit, config_hash);
    if (*c_rates) run_rates(rates, config_hash);
    if (*c_cert) run_certify(cert, config_hash);
    if (*c_bre) run_breakeven(bre, config_hash);
    if (*c_bias) run_biassweep(bias, config_hash);
    if (*c_ext) run_extract(ext, config_hash);
    if (*c_sim) run_simulate(sim, config_hash);
    if (*c_rep) rc = run_reproduce();
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return 3;
  }
  return rc;
}
