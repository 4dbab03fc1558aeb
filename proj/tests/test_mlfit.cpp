// Maximum-likelihood projection onto the conditional polytopes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "pecert/datasets.hpp"
#include "pecert/mlfit.hpp"
#include "pecert/pefopt.hpp"

using namespace pecert;

namespace {

// scale a conditional distribution (with uniform settings) to integer counts
FrequencyTable counts_from(const ConditionalDistribution& cond, std::uint64_t per_cell) {
  FrequencyTable t;
  for (int z = 0; z < kSettings; ++z)
    for (int c = 0; c < kOutcomes; ++c) {
      auto n = static_cast<std::uint64_t>(std::llround(cond.at(z, c) * double(per_cell)));
      if (n) t.add(z & 1, z >> 1, c & 1, c >> 1, n);
    }
  return t;
}

double objective_at(const ConditionalDistribution& nu, const FrequencyTable& freq) {
  JointDistribution f = freq.frequencies();
  SettingsDistribution fz = freq.settings_frequencies();
  double s = 0.0;
  for (int z = 0; z < kSettings; ++z)
    for (int c = 0; c < kOutcomes; ++c) {
      double fcz = f.p[cell_index(z, c)];
      if (fcz > 0.0) s += fcz * std::log(nu.at(z, c) * fz.p[z] / fcz);
    }
  return s;
}

}  // namespace

TEST_CASE("frequency table plumbing") {
  FrequencyTable t;
  t.add(1, 0, 1, 1, 3);
  t.add(0, 0, 0, 0);
  CHECK(t.total() == 4);
  CHECK(t.counts[cell_index(z_index(1, 0), c_index(1, 1))] == 3);

  std::vector<TrialRecord> trials = {{0, 1, 1, 0, -1}, {0, 1, 1, 0, -1}, {1, 1, 0, 0, 1}};
  FrequencyTable u = FrequencyTable::from_trials(trials);
  CHECK(u.total() == 3);
  CHECK(u.counts[cell_index(z_index(0, 1), c_index(1, 0))] == 2);

  JointDistribution f = u.frequencies();
  CHECK(f.p[cell_index(z_index(1, 1), 0)] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  SettingsDistribution fz = u.settings_frequencies();
  CHECK(fz.p[z_index(0, 1)] == doctest::Approx(2.0 / 3).epsilon(1e-15));

  CHECK_THROWS_AS(FrequencyTable{}.frequencies(), std::invalid_argument);
}

TEST_CASE("a distribution already in the set projects to itself") {
  ConditionalDistribution atoms = embedded_dataset("atoms");
  FrequencyTable t = counts_from(atoms, 100000000);
  MlFit fit = ml_project(t, PolytopeKind::Q);
  for (int e = 0; e < kCells; ++e) CHECK(std::fabs(fit.nu.p[e] - atoms.p[e]) < 1e-6);
  CHECK(fit.kkt_gap <= 1e-8);
  CHECK(fit.nu.rows_normalized(1e-12));
  // the rounding to integer counts costs a little likelihood, never gains
  CHECK(fit.objective <= 0.0);
  CHECK(fit.objective > -1e-9);
}

TEST_CASE("a deterministic point projects to itself") {
  ConditionalDistribution det = conditional_extreme_points(PolytopeKind::LR)[6];
  FrequencyTable t = counts_from(det, 1000);
  MlFit fit = ml_project(t, PolytopeKind::NS);
  for (int e = 0; e < kCells; ++e) CHECK(std::fabs(fit.nu.p[e] - det.p[e]) < 1e-7);
  // the optimum is exactly 0; the stop rule leaves a deficit of order the tol
  CHECK(fit.objective <= 0.0);
  CHECK(fit.objective > -1e-7);
}

TEST_CASE("PR box projected onto the Tsirelson set") {
  auto ns = conditional_extreme_points(PolytopeKind::NS);
  FrequencyTable t = counts_from(ns[16 + 4], 1 << 20);
  MlFit fit = ml_project(t, PolytopeKind::Q);
  // frozen optimum ln((2+sqrt 2)/4) of the symmetric solution
  CHECK(std::fabs(fit.objective - (-0.158347183820375)) < 1e-6);
  CHECK(fit.kkt_gap <= 1e-8);
  CHECK(std::fabs(objective_at(fit.nu, t) - fit.objective) < 1e-12);

  // the fit saturates its own Tsirelson inequality
  JointDistribution j = JointDistribution::combine(fit.nu, uniform_settings());
  CHECK(std::fabs(bell_value(bell_function_g(8), j) - tsirelson_bound()) < 1e-6);
}

TEST_CASE("objective dominates every vertex and stays nonpositive") {
  ConditionalDistribution ions = embedded_dataset("ions");
  // pull the frequencies off the set a bit so the projection is nontrivial
  FrequencyTable t = counts_from(ions, 4096);
  t.add(0, 0, 0, 0, 64);
  t.add(1, 1, 1, 1, 64);
  MlFit fit = ml_project(t, PolytopeKind::NS);
  CHECK(fit.objective <= 0.0);
  for (const auto& v : conditional_extreme_points(PolytopeKind::NS)) {
    bool support_ok = true;
    for (int e = 0; e < kCells; ++e)
      if (t.counts[e] > 0 && v.p[e] == 0.0) support_ok = false;
    if (support_ok) CHECK(objective_at(v, t) <= fit.objective + 1e-12);
  }
  // the recorded settings marginal is the empirical one, untouched by the fit
  SettingsDistribution fz = t.settings_frequencies();
  for (int z = 0; z < kSettings; ++z) CHECK(fit.settings_freq.p[z] == fz.p[z]);
}

TEST_CASE("idempotence of the projection") {
  ConditionalDistribution xor3 = embedded_dataset("xor3");
  FrequencyTable t = counts_from(xor3, 1 << 24);
  t.add(1, 1, 0, 0, 2000);  // push it off the Tsirelson set
  MlFit fit = ml_project(t, PolytopeKind::Q);
  FrequencyTable again = counts_from(fit.nu, 1 << 26);
  MlFit fit2 = ml_project(again, PolytopeKind::Q, {1e-10, 3000000});
  for (int e = 0; e < kCells; ++e) CHECK(std::fabs(fit2.nu.p[e] - fit.nu.p[e]) < 1e-5);
  CHECK(fit2.objective > -1e-7);
}

TEST_CASE("fit output is physical") {
  // an asymmetric signaling table: ml projection must land in the set
  FrequencyTable t;
  t.add(0, 0, 0, 0, 900);
  t.add(0, 0, 1, 1, 100);
  t.add(1, 0, 0, 0, 500);
  t.add(1, 0, 1, 0, 500);
  t.add(0, 1, 0, 1, 400);
  t.add(0, 1, 0, 0, 600);
  t.add(1, 1, 1, 1, 250);
  t.add(1, 1, 0, 0, 750);
  for (PolytopeKind kind : {PolytopeKind::NS, PolytopeKind::Q}) {
    MlFit fit = ml_project(t, kind);
    CHECK(fit.nu.rows_normalized(1e-12));
    CHECK(nonsignaling_check(fit.nu, 1e-9).pass);
    CHECK(fit.kkt_gap <= 1e-8);
    double wsum = 0.0;
    for (double w : fit.weights) {
      CHECK(w >= 0.0);
      wsum += w;
    }
    CHECK(std::fabs(wsum - 1.0) < 1e-9);
    if (kind == PolytopeKind::Q) {
      JointDistribution j = JointDistribution::combine(fit.nu, uniform_settings());
      for (unsigned m : pr_masks())
        CHECK(bell_value(bell_function_g(m), j) <= tsirelson_bound() + 1e-9);
    }
  }
}

TEST_CASE("unobserved settings are rejected") {
  FrequencyTable t;
  t.add(0, 0, 0, 0, 10);
  t.add(1, 0, 0, 0, 10);
  t.add(0, 1, 0, 0, 10);  // z = 11 never observed
  CHECK_THROWS_AS(ml_project(t, PolytopeKind::NS), std::invalid_argument);
}

TEST_CASE("iteration budget exhaustion is an error, not a shrug") {
  ConditionalDistribution atoms = embedded_dataset("atoms");
  FrequencyTable t = counts_from(atoms, 100000);
  t.add(1, 1, 0, 1, 40000);
  CHECK_THROWS_AS(ml_project(t, PolytopeKind::Q, {1e-14, 3}), std::runtime_error);
}
