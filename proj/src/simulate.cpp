#include "pecert/simulate.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "pecert/pefopt.hpp"
#include "pecert/rng.hpp"

namespace pecert {

namespace {

int draw_index(const double* p, int k, double u) {
  double acc = 0.0;
  for (int i = 0; i < k - 1; ++i) {
    acc += p[i];
    if (u < acc) return i;
  }
  return k - 1;
}

// Unimodal maximizer on [lo, hi]; returns the bracket midpoint and its value.
template <typename Fn>
std::pair<double, double> golden_max(Fn fn, double lo, double hi, double rel_tol,
                                     int max_iter = 200) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = fn(x1), f2 = fn(x2);
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(hi - lo) < rel_tol * (std::abs(lo) + std::abs(hi)) / 2.0 + 1e-15) break;
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = fn(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = fn(x2);
    }
  }
  double mid = (lo + hi) / 2.0;
  return {mid, fn(mid)};
}

}  // namespace

SettingsDistribution spotcheck_distribution(double r, int z0) {
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("spotcheck_distribution: bad r");
  if (z0 < 0 || z0 >= kSettings) throw std::invalid_argument("spotcheck_distribution: bad z0");
  SettingsDistribution s;
  for (int z = 0; z < kSettings; ++z) s.p[z] = r / 4.0;
  s.p[z0] += 1.0 - r;
  return s;
}

std::vector<TrialRecord> sample_trials(const ConditionalDistribution& cond,
                                       const SettingsDistribution& settings, std::uint64_t n,
                                       std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_trials: n must be >= 1");
  if (!cond.rows_normalized(1e-9) || !settings.normalized(1e-9))
    throw std::invalid_argument("sample_trials: invalid distributions");
  SplitMix64 rng(seed);
  std::vector<TrialRecord> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    int z = draw_index(settings.p.data(), kSettings, rng.uniform());
    int c = draw_index(&cond.p[cell_index(z, 0)], kOutcomes, rng.uniform());
    out.push_back({static_cast<std::uint8_t>(z & 1), static_cast<std::uint8_t>(z >> 1),
                   static_cast<std::uint8_t>(c & 1), static_cast<std::uint8_t>(c >> 1), -1});
  }
  return out;
}

std::vector<SettingsDraw> spotcheck_settings(const SpotCheckConfig& cfg, SpotCheckMode mode,
                                             std::uint64_t n, std::uint64_t seed,
                                             bool pad_blocks) {
  if (!(cfg.r > 0.0 && cfg.r <= 1.0)) throw std::invalid_argument("spotcheck_settings: bad r");
  if (cfg.z0 < 0 || cfg.z0 >= kSettings) throw std::invalid_argument("spotcheck_settings: bad z0");
  SplitMix64 rng(seed);
  std::vector<SettingsDraw> out;
  out.reserve(n);
  if (mode == SpotCheckMode::Iid) {
    while (out.size() < n) {
      if (rng.uniform() < cfg.r)
        out.push_back({static_cast<int>(rng.below(4)), 1, cfg.r});
      else
        out.push_back({cfg.z0, 0, cfg.r});
    }
    return out;
  }
  if (cfg.block_k < 1) throw std::invalid_argument("spotcheck_settings: block exponent must be >= 1");
  const std::uint64_t len = 1ull << cfg.block_k;
  while (out.size() < n) {
    for (std::uint64_t l = 1; l <= len && out.size() < n; ++l) {
      double r_l = 1.0 / static_cast<double>(len - l + 1);
      if (rng.uniform() < r_l) {
        out.push_back({static_cast<int>(rng.below(4)), 1, r_l});
        if (pad_blocks)
          for (std::uint64_t rest = l + 1; rest <= len && out.size() < n; ++rest)
            out.push_back({cfg.z0, 0, 0.0});
        break;  // remaining positions in the block are not performed
      }
      out.push_back({cfg.z0, 0, r_l});
    }
  }
  return out;
}

std::vector<TrialRecord> sample_spotcheck_trials(const ConditionalDistribution& cond,
                                                 const SpotCheckConfig& cfg, SpotCheckMode mode,
                                                 std::uint64_t n, std::uint64_t seed,
                                                 bool pad_blocks) {
  if (!cond.rows_normalized(1e-9))
    throw std::invalid_argument("sample_spotcheck_trials: invalid conditional");
  std::vector<SettingsDraw> draws = spotcheck_settings(cfg, mode, n, seed, pad_blocks);
  SplitMix64 rng(seed ^ 0x9e3779b97f4a7c15ull);  // outcome stream, independent of settings
  std::vector<TrialRecord> out;
  out.reserve(draws.size());
  for (const SettingsDraw& d : draws) {
    int c = draw_index(&cond.p[cell_index(d.z, 0)], kOutcomes, rng.uniform());
    out.push_back({static_cast<std::uint8_t>(d.z & 1), static_cast<std::uint8_t>(d.z >> 1),
                   static_cast<std::uint8_t>(c & 1), static_cast<std::uint8_t>(c >> 1),
                   static_cast<std::int8_t>(d.t)});
  }
  return out;
}

double settings_entropy(double r) {
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("settings_entropy: r must be in (0,1]");
  double q = 1.0 - 0.75 * r;
  double s = -0.75 * r * std::log2(r / 4.0);
  if (q > 0.0) s -= q * std::log2(q);
  return s;
}

double settings_entropy(const SettingsDistribution& settings) {
  if (!settings.normalized(1e-9)) throw std::invalid_argument("settings_entropy: not normalized");
  double s = 0.0;
  for (double p : settings.p)
    if (p > 0.0) s -= p * std::log2(p);
  return s;
}

BreakEvenResult break_even(const Model& model, const ConditionalDistribution& rho_cond,
                           double kappa, int z0) {
  if (!(kappa > 0.0)) throw std::invalid_argument("break_even: kappa must be positive");
  if (!rho_cond.rows_normalized(1e-9)) throw std::invalid_argument("break_even: invalid rho");

  auto objective_at = [&](double r, double beta) {
    double sigma = optimized_spotcheck_rate(model.cond_points, rho_cond, r, beta, z0);
    return beta * (sigma - settings_entropy(r));
  };
  auto best_beta = [&](double r) {
    return golden_max([&](double lb) { return objective_at(r, std::exp(lb)); }, std::log(1e-8),
                      std::log(0.2), 1e-7);
  };

  auto [ln_r, obj_outer] = golden_max([&](double lr) { return best_beta(std::exp(lr)).second; },
                                      std::log(1e-5), std::log(0.5), 1e-7);
  (void)obj_outer;
  double r = std::exp(ln_r);
  double beta = std::exp(best_beta(r).first);

  BreakEvenResult res;
  res.r = r;
  res.beta = beta;
  res.sigma = optimized_spotcheck_rate(model.cond_points, rho_cond, r, beta, z0);
  res.objective = beta * (res.sigma - settings_entropy(r));
  if (!(res.objective > 0.0))
    throw std::runtime_error("break_even: no positive objective, expansion impossible");
  res.n_c = kappa / res.objective;
  return res;
}

}  // namespace pecert
