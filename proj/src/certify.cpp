#include "pecert/certify.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pecert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void accumulate_log2(CertState& state, double factor) {
  if (state.frozen) throw std::logic_error("accumulate: session is frozen");
  if (state.n >= state.n_max) throw std::logic_error("accumulate: session is full");
  if (factor < 0.0) throw std::invalid_argument("accumulate: negative factor");
  if (factor == 0.0) {
    state.log2_t = -kInf;
    state.failed = true;
  } else {
    state.log2_t += std::log2(factor);
  }
  state.log2_t_max = std::max(state.log2_t_max, state.log2_t);
  ++state.n;
  if (state.threshold_q && !state.failed) {
    double log2_u = -(state.log2_t + std::log2(state.eps_h)) / state.beta;
    if (log2_u <= std::log2(*state.threshold_q)) state.frozen = true;
  }
}

PolytopeKind kind_of(const Model& model) {
  if (model.kind.rfind("NS", 0) == 0) return PolytopeKind::NS;
  if (model.kind.rfind("LR", 0) == 0) return PolytopeKind::LR;
  if (model.kind.rfind("Q", 0) == 0) return PolytopeKind::Q;
  throw std::invalid_argument("adaptive_run: unrecognized model kind " + model.kind);
}

}  // namespace

CertState new_session(double beta, double eps_h, std::uint64_t n_max,
                      std::optional<double> threshold_q) {
  if (!(beta > 0.0)) throw std::invalid_argument("new_session: beta must be positive");
  if (!(eps_h > 0.0 && eps_h < 1.0))
    throw std::invalid_argument("new_session: eps_h must be in (0,1)");
  if (n_max < 1) throw std::invalid_argument("new_session: n_max must be >= 1");
  if (threshold_q && !(*threshold_q > 0.0))
    throw std::invalid_argument("new_session: threshold must be positive");
  CertState s;
  s.n_max = n_max;
  s.beta = beta;
  s.eps_h = eps_h;
  s.threshold_q = threshold_q;
  return s;
}

void accumulate(CertState& state, const TrialRecord& trial, const Pef& pef) {
  if (!trial.in_range()) throw std::invalid_argument("accumulate: trial out of range");
  accumulate_log2(state, pef.f[cell_index(z_index(trial.x, trial.y), c_index(trial.a, trial.b))]);
}

void accumulate(CertState& state, const TrialRecord& trial, const SpotCheckPef& pef) {
  if (!trial.in_range() || trial.t < 0)
    throw std::invalid_argument("accumulate: spot-check trial needs a test flag");
  accumulate_log2(
      state, pef.value(z_index(trial.x, trial.y), c_index(trial.a, trial.b), trial.t));
}

CertReport report(const CertState& state) {
  if (state.n == 0) throw std::invalid_argument("report: empty session");
  CertReport r;
  double log2_eps = std::log2(state.eps_h);
  r.log2_u_final = -(state.log2_t + log2_eps) / state.beta;
  r.log2_u_running_max = -(state.log2_t_max + log2_eps) / state.beta;
  r.u_final = std::exp2(r.log2_u_final);
  r.u_running_max = std::exp2(r.log2_u_running_max);
  r.net_log2_prob = -r.log2_u_final;
  r.sigma_h = std::max(0.0, r.net_log2_prob);
  return r;
}

double lr_pvalue_bound(const std::vector<TrialRecord>& trials,
                       const std::vector<std::array<double, kCells>>& factors,
                       const SettingsDistribution& settings) {
  if (factors.empty()) throw std::invalid_argument("lr_pvalue_bound: no factors");
  if (factors.size() != 1 && factors.size() != trials.size())
    throw std::invalid_argument("lr_pvalue_bound: need one factor, or one per trial");
  Model lr = assemble_model("LR", conditional_extreme_points(PolytopeKind::LR), {settings});
  for (const auto& f : factors) {
    Pef p;
    p.f = f;
    p.beta = 0.0;
    PefValidation val = validate_pef(p, lr);
    if (!val.valid)
      throw std::invalid_argument("lr_pvalue_bound: factor exceeds expectation 1 at an LR vertex");
  }
  double log2_t = 0.0;
  double log2_t_max = 0.0;  // empty prefix, T_0 = 1
  for (size_t i = 0; i < trials.size(); ++i) {
    const TrialRecord& tr = trials[i];
    if (!tr.in_range()) throw std::invalid_argument("lr_pvalue_bound: trial out of range");
    const auto& f = factors[factors.size() == 1 ? 0 : i];
    double v = f[cell_index(z_index(tr.x, tr.y), c_index(tr.a, tr.b))];
    log2_t = v > 0.0 ? log2_t + std::log2(v) : -kInf;
    log2_t_max = std::max(log2_t_max, log2_t);
  }
  return std::min(1.0, std::exp2(-log2_t_max));
}

AdaptiveReport adaptive_run(const std::vector<TrialRecord>& trials, const Model& model,
                            double beta, double eps_h, const AdaptiveOptions& opts) {
  if (opts.refresh < 1) throw std::invalid_argument("adaptive_run: refresh cadence must be >= 1");
  if (opts.warmup < 1) throw std::invalid_argument("adaptive_run: warmup must be >= 1");
  if (trials.empty()) throw std::invalid_argument("adaptive_run: no trials");
  PolytopeKind kind = kind_of(model);

  SettingsDistribution settings{};
  for (const auto& sp : model.settings_points)
    for (int z = 0; z < kSettings; ++z) settings.p[z] += sp.p[z] / model.settings_points.size();

  AdaptiveReport out;
  out.state = new_session(beta, eps_h, trials.size());
  Pef ones;
  ones.beta = beta;
  ones.f.fill(1.0);
  out.schedule.push_back({0, ones});

  FrequencyTable seen;
  for (std::uint64_t i = 0; i < trials.size(); ++i) {
    if (i >= opts.warmup && (i - opts.warmup) % opts.refresh == 0) {
      MlFit fit = ml_project(seen, kind, opts.fit);
      JointDistribution rho = JointDistribution::combine(fit.nu, settings);
      out.schedule.push_back({i, optimize_pef(model, rho, beta)});
    }
    accumulate(out.state, trials[i], out.schedule.back().pef);
    seen.add(trials[i].x, trials[i].y, trials[i].a, trials[i].b);
  }
  out.report = report(out.state);
  return out;
}

}  // namespace pecert
