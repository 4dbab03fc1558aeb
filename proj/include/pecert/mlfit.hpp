#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pecert/bellmodel.hpp"
#include "pecert/trial.hpp"

namespace pecert {

// Raw trial tallies N(abxy), canonical cell order.
struct FrequencyTable {
  std::array<std::uint64_t, kCells> counts{};

  std::uint64_t total() const;
  void add(int x, int y, int a, int b, std::uint64_t n = 1);
  static FrequencyTable from_trials(const std::vector<TrialRecord>& trials);

  // f(cz) = N(cz)/N. Throws if the table is empty.
  JointDistribution frequencies() const;
  // Empirical settings marginal f(z).
  SettingsDistribution settings_frequencies() const;
};

struct MlOptions {
  double tol = 1e-8;  // stationarity gap target (max vertex gradient - 1)
  std::uint64_t max_iter = 1000000;
};

struct MlFit {
  ConditionalDistribution nu;    // fitted settings-conditional distribution
  std::vector<double> weights;   // convex weights over the set's conditional vertices
  double objective = 0.0;        // sum f(cz) ln(nu(c|z)/f(c|z)), natural log, <= 0
  double kkt_gap = 0.0;
  std::uint64_t iterations = 0;
  SettingsDistribution settings_freq;  // recorded, not fitted
};

// Maximum-likelihood projection of empirical frequencies onto the chosen
// constraint set, via multiplicative (EM) updates on the vertex weights.
// Requires every setting observed at least once; throws on non-convergence.
MlFit ml_project(const FrequencyTable& freq, PolytopeKind kind, const MlOptions& opts = {});

}  // namespace pecert
