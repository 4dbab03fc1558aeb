#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "pecert/bellmodel.hpp"
#include "pecert/mlfit.hpp"
#include "pecert/pefopt.hpp"
#include "pecert/trial.hpp"

namespace pecert {

// Sequential accumulation state. All probability bookkeeping is base-2
// logarithmic: the running product T_i would overflow any float across long
// runs. beta and eps_h are fixed at creation and never adapted.
struct CertState {
  double log2_t = 0.0;
  double log2_t_max = 0.0;  // max over all prefixes, empty prefix included
  std::uint64_t n = 0;
  std::uint64_t n_max = 0;
  double beta = 0.0;
  double eps_h = 0.0;
  std::optional<double> threshold_q;  // early-stop target on the estimate
  bool frozen = false;
  bool failed = false;  // a zero factor was hit; log2_t is -inf
};

CertState new_session(double beta, double eps_h, std::uint64_t n_max,
                      std::optional<double> threshold_q = std::nullopt);

// Multiplies in the factor value at the trial's cell. The factor passed for
// trial i+1 must be chosen from trials <= i only; that is the caller's
// contract and adaptive_run enforces it structurally.
void accumulate(CertState& state, const TrialRecord& trial, const Pef& pef);
void accumulate(CertState& state, const TrialRecord& trial, const SpotCheckPef& pef);

struct CertReport {
  double u_final = 0.0;        // (T_n eps_h)^(-1/beta)
  double u_running_max = 0.0;  // same with max_i T_i; never exceeds u_final
  double log2_u_final = 0.0;
  double log2_u_running_max = 0.0;
  double net_log2_prob = 0.0;  // (log2 T_n - log2(1/eps_h)) / beta
  double sigma_h = 0.0;        // max(0, net_log2_prob)
};

CertReport report(const CertState& state);

// p-value bound against the LR model: min(1, 1/max_i T_i). Each factor must
// have expectation <= 1 at every LR vertex under the given settings
// distribution (checked; power 0). factors holds either one shared entry or
// one per trial.
double lr_pvalue_bound(const std::vector<TrialRecord>& trials,
                       const std::vector<std::array<double, kCells>>& factors,
                       const SettingsDistribution& settings = uniform_settings());

struct PefSegment {
  std::uint64_t start = 0;  // first trial index the factor applies to
  Pef pef;
};

struct AdaptiveOptions {
  std::uint64_t refresh = 50000;  // re-fit cadence in trials
  std::uint64_t warmup = 10000;   // trials scored with F = 1 before the first fit
  MlOptions fit;
};

struct AdaptiveReport {
  CertReport report;
  CertState state;
  std::vector<PefSegment> schedule;  // segment 0 is the all-ones warmup factor
};

// Trial-by-trial run that periodically re-fits the source distribution on
// strictly past trials and re-optimizes the factor. beta and eps_h stay
// fixed throughout.
AdaptiveReport adaptive_run(const std::vector<TrialRecord>& trials, const Model& model,
                            double beta, double eps_h, const AdaptiveOptions& opts = {});

}  // namespace pecert
