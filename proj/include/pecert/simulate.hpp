#pragma once

#include <cstdint>
#include <vector>

#include "pecert/bellmodel.hpp"
#include "pecert/trial.hpp"

namespace pecert {

struct SpotCheckConfig {
  double r = 0.01;   // test probability (per trial in iid mode)
  int z0 = 3;        // default setting, z = x + 2y
  int block_k = 1;   // block exponent, blockwise mode only
};

enum class SpotCheckMode { Iid, Blockwise };

struct SettingsDraw {
  int z = 0;
  int t = 0;
  double r_cond = 0.0;  // conditional test probability at this position
};

// nu_r: probability r of a uniform test setting, else the default z0.
SettingsDistribution spotcheck_distribution(double r, int z0 = 3);

std::vector<TrialRecord> sample_trials(const ConditionalDistribution& cond,
                                       const SettingsDistribution& settings, std::uint64_t n,
                                       std::uint64_t seed);

// Iid mode draws nu_r with t marking the uniform draws. Blockwise mode runs
// blocks of 2^k positions; position l tests with conditional probability
// r_l = 1/(2^k - l + 1) (so exactly one test per block, unconditionally
// uniform over positions) and the block ends at its test trial. pad_blocks
// instead emits the skipped remainder as default trials, which makes the
// per-position marginal exactly nu_r at r = 2^-k.
std::vector<SettingsDraw> spotcheck_settings(const SpotCheckConfig& cfg, SpotCheckMode mode,
                                             std::uint64_t n, std::uint64_t seed,
                                             bool pad_blocks = false);

std::vector<TrialRecord> sample_spotcheck_trials(const ConditionalDistribution& cond,
                                                 const SpotCheckConfig& cfg, SpotCheckMode mode,
                                                 std::uint64_t n, std::uint64_t seed,
                                                 bool pad_blocks = false);

// S(r) = -(3r/4) log2(r/4) - (1-3r/4) log2(1-3r/4), the settings cost of nu_r.
double settings_entropy(double r);
double settings_entropy(const SettingsDistribution& settings);

struct BreakEvenResult {
  double n_c = 0.0;       // kappa / objective
  double beta = 0.0;
  double r = 0.0;
  double sigma = 0.0;     // log2-prob rate at the optimum
  double objective = 0.0; // beta * (sigma - S(r))
};

// Maximizes beta*(sigma(beta,r) - S(r)) over the spot-check-lifted model by
// nested golden-section search (log-spaced brackets r in [1e-5, 0.5], beta in
// [1e-8, 0.2]). kappa is log2(1/eps_h) in bits. Throws when no positive
// objective exists.
BreakEvenResult break_even(const Model& model, const ConditionalDistribution& rho_cond,
                           double kappa, int z0 = 3);

}  // namespace pecert
