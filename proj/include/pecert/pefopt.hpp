#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "pecert/bellmodel.hpp"

namespace pecert {

// Probability estimation factor: a nonnegative per-trial valuation F(abxy)
// with power beta. Validity against a model means, at every vertex nu,
//   sum_{cz} F(cz) nu(c|z)^beta nu(cz) <= 1.
struct Pef {
  std::array<double, kCells> f{};
  double beta = 0.0;
};

// Spot-checking variant over (abxy, t): test trials (t=1) carry the
// amplified values, non-test trials a constant slightly below 1.
struct SpotCheckPef {
  std::array<double, kCells> f_test{};
  double f_notest = 1.0;  // same for every cell with t=0
  double beta = 0.0;
  double r = 0.0;      // test probability
  double b_bar = 0.0;  // reference mean of the estimator B
  int z0 = 3;          // default setting on non-test trials

  double value(int z, int c, int t) const {
    return t ? f_test[cell_index(z, c)] : f_notest;
  }
};

struct PefValidation {
  bool valid = false;
  double margin = 0.0;  // max over vertices of constraint LHS - 1
  int worst_vertex = -1;
};

struct ExpansionParams {
  double d = 0.0;        // admissible beta/r ratio
  double d_prime = 0.0;  // rate-loss coefficient
  double g0 = 0.0;       // -ln(1 - b_bar), nats
  double c = 0.0;        // min(d, g0/(3 d'))
  double c_prime = 0.0;  // error/failure budget scale
  double v_coeff = 0.0;  // Var(net log-prob in nats) <= v_coeff * n^2
};

struct MaxProbEstimator {
  BellFunction b;
  double b_bar = 0.0;  // E_rho(B)
  double w = 0.0;      // -min(0, min B)
};

// Raised when 1 + lambda (F - 1) would go negative; carries the largest
// usable lambda so the caller can shrink it (or reduce beta) explicitly.
class PefNegativityError : public std::runtime_error {
 public:
  PefNegativityError(const std::string& msg, double lambda_max)
      : std::runtime_error(msg), max_feasible_lambda(lambda_max) {}
  double max_feasible_lambda;
};

// Generic concave core: maximize sum_k w_k ln f_k over f > 0 with
// rows . f <= 1, by a log-barrier interior-point method. The iterates are
// strictly feasible throughout; `dual` returns the multipliers at the
// final barrier parameter (duality gap <= (rows + k) * mu_final).
struct LogMixProblem {
  int k = 0;
  std::vector<std::vector<double>> rows;
  std::vector<double> w;
};

struct LogMixResult {
  std::vector<double> f;
  std::vector<double> dual;
};

LogMixResult maximize_log_mixture(const LogMixProblem& p, double mu_final = 1e-13);

// Maximizes E_rho(ln F) over valid PEFs at the given power. The returned
// factor is strictly feasible (negative margin); if numerical slack ever
// put a constraint above 1 it would be rescaled by the reciprocal of the
// largest left-hand side before returning.
Pef optimize_pef(const Model& model, const JointDistribution& rho, double beta);

PefValidation validate_pef(const Pef& pef, const Model& model);

// Validates against the spot-check lift of the conditional polytope:
// conditionals are duplicated across t and the settings distribution is
// nu_r(z,1) = r/4, nu_r(z0,0) = 1-r.
PefValidation validate_spotcheck_pef(const SpotCheckPef& pef,
                                     const std::vector<ConditionalDistribution>& cond_points);

// E_rho(log2 F)/beta in bits/trial, scaled by (1 - kappa/beta) when
// kappa > 0. F = 0 on a positive-probability cell reports -infinity.
double log_prob_rate(const Pef& pef, const JointDistribution& rho, double kappa = 0.0);

// F^gamma is a PEF with power gamma*beta and the same log-prob rate.
Pef power_reduce(const Pef& pef, double gamma);

// Entrywise weighted average; weights may sum to less than 1, with the
// remaining mass on the constant factor F = 1.
Pef convex_combine(const std::vector<Pef>& pefs, const std::vector<double>& weights);

double conditional_entropy_bits(const JointDistribution& dist);

// Convex-roof minimum of H(C|Z) over vertex decompositions of rho,
// solved as a finite LP. Throws if rho is not in the vertex hull.
double min_conditional_entropy(const Model& model, const JointDistribution& rho);

enum class GainMethod { Lp, BetaSweep };

// Supremum of PEF log-prob rates at rho. Lp delegates to the convex roof;
// BetaSweep optimizes at beta = 1e-2, 1e-3, 1e-4 and extrapolates
// linearly through the two smallest powers.
double asymptotic_gain_rate(const Model& model, const JointDistribution& rho, GainMethod method);

// Minimizes E_rho(Btilde) subject to E_nu(Btilde) >= gamma(dz) nu(d|z) at
// every vertex and cell, then returns B = 1 - Btilde with its mean. The
// model must carry a single settings vertex.
MaxProbEstimator optimize_maxprob_estimator(const Model& model, const JointDistribution& rho,
                                            const std::array<double, kCells>& gamma);

// The tangent-line factor at anchor alpha < 1, damped by lambda:
//   F = (1-alpha)^{-beta} (1 + beta (B - alpha)/(1 - alpha)),
//   F' = 1 + lambda (F - 1),
// multiplied entrywise by gamma(cz)^beta when weights are supplied. If a
// model is given, B is first checked against it: 1 - E_nu(B) must cover
// max_dz gamma(dz) nu(d|z) at every vertex. Throws PefNegativityError
// instead of clamping when F' has negative entries.
Pef pef_from_maxprob(const BellFunction& b, double alpha, double beta, double lambda,
                     const std::array<double, kCells>* gamma = nullptr,
                     const Model* model = nullptr);

// Spot-check factor from estimator mean b_bar: B_r = 0 on t=0 and B/r on
// t=1, F = (1-b_bar)^{-beta} (1 + beta (B_r - b_bar)/(1 - b_bar)).
// Requires 0 < r < 1/2 and beta <= d r with d = (1-b_bar)/(2w + b_bar).
SpotCheckPef spotcheck_pef(const BellFunction& b, double b_bar, double r, double beta, int z0 = 3);

ExpansionParams expansion_parameters(double b_bar, double v_bar, double w, double eps_h,
                                     double lambda_fail);

// Variance bound for ln F_{r,beta} at the lifted distribution (nats^2).
double var_frb_bound(double b_bar, double v_bar, double beta, double r);

// E_rho(log2 F)/beta, checked against the directly computed H(C|Z; rho).
double entropy_estimate(const Pef& pef, const JointDistribution& rho);

// Optimized log2-prob rate (bits per trial) over the spot-check lift:
// 16 test cells at settings weight r/4 plus the 4 default cells at 1-r.
double optimized_spotcheck_rate(const std::vector<ConditionalDistribution>& cond_points,
                                const ConditionalDistribution& rho_cond, double r, double beta,
                                int z0 = 3);

}  // namespace pecert
