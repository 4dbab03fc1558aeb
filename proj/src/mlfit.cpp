#include "pecert/mlfit.hpp"

#include <cmath>
#include <stdexcept>

namespace pecert {

std::uint64_t FrequencyTable::total() const {
  std::uint64_t n = 0;
  for (std::uint64_t c : counts) n += c;
  return n;
}

void FrequencyTable::add(int x, int y, int a, int b, std::uint64_t n) {
  if (x < 0 || x > 1 || y < 0 || y > 1 || a < 0 || a > 1 || b < 0 || b > 1)
    throw std::invalid_argument("FrequencyTable::add: value out of range");
  counts[cell_index(z_index(x, y), c_index(a, b))] += n;
}

FrequencyTable FrequencyTable::from_trials(const std::vector<TrialRecord>& trials) {
  FrequencyTable t;
  for (const TrialRecord& tr : trials) t.add(tr.x, tr.y, tr.a, tr.b);
  return t;
}

JointDistribution FrequencyTable::frequencies() const {
  std::uint64_t n = total();
  if (n == 0) throw std::invalid_argument("FrequencyTable: no trials tallied");
  JointDistribution f;
  for (int e = 0; e < kCells; ++e)
    f.p[e] = static_cast<double>(counts[e]) / static_cast<double>(n);
  return f;
}

SettingsDistribution FrequencyTable::settings_frequencies() const {
  std::uint64_t n = total();
  if (n == 0) throw std::invalid_argument("FrequencyTable: no trials tallied");
  SettingsDistribution s;
  for (int z = 0; z < kSettings; ++z) {
    std::uint64_t nz = 0;
    for (int c = 0; c < kOutcomes; ++c) nz += counts[cell_index(z, c)];
    s.p[z] = static_cast<double>(nz) / static_cast<double>(n);
  }
  return s;
}

MlFit ml_project(const FrequencyTable& freq, PolytopeKind kind, const MlOptions& opts) {
  for (int z = 0; z < kSettings; ++z) {
    std::uint64_t nz = 0;
    for (int c = 0; c < kOutcomes; ++c) nz += freq.counts[cell_index(z, c)];
    if (nz == 0) throw std::invalid_argument("ml_project: setting pair never observed");
  }
  JointDistribution f = freq.frequencies();
  std::vector<ConditionalDistribution> verts = conditional_extreme_points(kind);
  const size_t k = verts.size();

  std::vector<double> mu(k, 1.0 / static_cast<double>(k));
  std::array<double, kCells> nu{};
  double gap = 0.0;
  std::uint64_t it = 0;
  for (; it < opts.max_iter; ++it) {
    nu.fill(0.0);
    for (size_t j = 0; j < k; ++j) {
      if (mu[j] == 0.0) continue;
      for (int e = 0; e < kCells; ++e) nu[e] += mu[j] * verts[j].p[e];
    }
    // gradient of sum f(cz) ln nu(c|z) wrt mu_j; weighted mean is always 1
    double gmax = 0.0;
    std::vector<double> g(k, 0.0);
    for (size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (int e = 0; e < kCells; ++e)
        if (f.p[e] > 0.0) s += f.p[e] * verts[j].p[e] / nu[e];
      g[j] = s;
      gmax = std::max(gmax, s);
    }
    gap = gmax - 1.0;
    if (gap <= opts.tol) break;
    double total = 0.0;
    for (size_t j = 0; j < k; ++j) {
      mu[j] *= g[j];
      total += mu[j];
    }
    for (size_t j = 0; j < k; ++j) mu[j] /= total;
  }
  if (gap > opts.tol)
    throw std::runtime_error("ml_project: no convergence within the iteration budget");

  MlFit fit;
  fit.weights = std::move(mu);
  fit.kkt_gap = gap;
  fit.iterations = it;
  fit.settings_freq = freq.settings_frequencies();
  for (int e = 0; e < kCells; ++e) fit.nu.p[e] = nu[e];
  double obj = 0.0;
  for (int z = 0; z < kSettings; ++z) {
    double fz = fit.settings_freq.p[z];
    if (fz <= 0.0) continue;
    for (int c = 0; c < kOutcomes; ++c) {
      double fcz = f.p[cell_index(z, c)];
      if (fcz > 0.0) obj += fcz * std::log(nu[cell_index(z, c)] * fz / fcz);
    }
  }
  fit.objective = obj;
  return fit;
}

}  // namespace pecert
