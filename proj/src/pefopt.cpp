#include "pecert/pefopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pecert/simplex.hpp"

namespace pecert {

namespace {

constexpr double kLn2 = 0.693147180559945309;
constexpr double kFloor = 1e-300;  // flooring before logs in rate computations

// Solve h x = g for SPD h (in place, row-major), returning false if the
// factorization breaks down even after adding a small ridge.
bool spd_solve(std::vector<double>& h, std::vector<double>& g, int n) {
  double trace = 0.0;
  for (int i = 0; i < n; ++i) trace += h[static_cast<size_t>(i) * n + i];
  double ridge = 0.0;
  for (int attempt = 0; attempt < 4; ++attempt) {
    std::vector<double> l = h;
    if (ridge > 0.0)
      for (int i = 0; i < n; ++i) l[static_cast<size_t>(i) * n + i] += ridge;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      for (int j = 0; j <= i; ++j) {
        double s = l[static_cast<size_t>(i) * n + j];
        for (int k = 0; k < j; ++k)
          s -= l[static_cast<size_t>(i) * n + k] * l[static_cast<size_t>(j) * n + k];
        if (i == j) {
          if (s <= 0.0) {
            ok = false;
            break;
          }
          l[static_cast<size_t>(i) * n + i] = std::sqrt(s);
        } else {
          l[static_cast<size_t>(i) * n + j] = s / l[static_cast<size_t>(j) * n + j];
        }
      }
    }
    if (!ok) {
      ridge = ridge == 0.0 ? 1e-14 * std::max(trace, 1.0) : ridge * 100.0;
      continue;
    }
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) {
      double s = g[i];
      for (int k = 0; k < i; ++k) s -= l[static_cast<size_t>(i) * n + k] * x[k];
      x[i] = s / l[static_cast<size_t>(i) * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = x[i];
      for (int k = i + 1; k < n; ++k) s -= l[static_cast<size_t>(k) * n + i] * x[k];
      x[i] = s / l[static_cast<size_t>(i) * n + i];
    }
    g = x;
    return true;
  }
  return false;
}

std::vector<double> mat_vec(const std::vector<std::vector<double>>& rows,
                            const std::vector<double>& f) {
  std::vector<double> out(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    double s = 0.0;
    const auto& row = rows[i];
    for (size_t j = 0; j < row.size(); ++j) s += row[j] * f[j];
    out[i] = s;
  }
  return out;
}

// Constraint rows for a plain (non-lifted) model at the given power:
// row[e] = cond(z,c)^(1+beta) * settings(z).
LogMixProblem model_problem(const Model& model, const JointDistribution& rho, double beta) {
  LogMixProblem p;
  p.k = kCells;
  p.rows.reserve(model.vertices.size());
  for (const auto& c : model.cond_points)
    for (const auto& s : model.settings_points) {
      std::vector<double> row(kCells);
      for (int z = 0; z < kSettings; ++z)
        for (int cc = 0; cc < kOutcomes; ++cc)
          row[cell_index(z, cc)] = std::pow(c.at(z, cc), 1.0 + beta) * s.p[z];
      p.rows.push_back(std::move(row));
    }
  p.w.assign(rho.p.begin(), rho.p.end());
  return p;
}

LogMixProblem spotcheck_problem(const std::vector<ConditionalDistribution>& cond_points,
                                const ConditionalDistribution& rho_cond, double r, double beta,
                                int z0) {
  LogMixProblem p;
  p.k = kCells + kOutcomes;  // 16 test cells then the 4 default cells at z0
  for (const auto& cp : cond_points) {
    std::vector<double> row(p.k);
    for (int z = 0; z < kSettings; ++z)
      for (int c = 0; c < kOutcomes; ++c)
        row[cell_index(z, c)] = std::pow(cp.at(z, c), 1.0 + beta) * (r / 4.0);
    for (int c = 0; c < kOutcomes; ++c)
      row[kCells + c] = std::pow(cp.at(z0, c), 1.0 + beta) * (1.0 - r);
    p.rows.push_back(std::move(row));
  }
  p.w.resize(p.k);
  for (int e = 0; e < kCells; ++e) p.w[e] = rho_cond.p[e] * (r / 4.0);
  for (int c = 0; c < kOutcomes; ++c) p.w[kCells + c] = rho_cond.at(z0, c) * (1.0 - r);
  return p;
}

double rate_bits(const LogMixProblem& p, const std::vector<double>& f, double beta) {
  double s = 0.0;
  for (int j = 0; j < p.k; ++j)
    if (p.w[j] > 0.0 && f[j] > 0.0) s += p.w[j] * std::log(f[j]);
  return s / (beta * kLn2);
}

}  // namespace

LogMixResult maximize_log_mixture(const LogMixProblem& p, double mu_final) {
  const int k = p.k;
  const int v = static_cast<int>(p.rows.size());
  if (v == 0 || k == 0) throw std::invalid_argument("maximize_log_mixture: empty problem");

  double max_row_sum = 1.0;
  for (const auto& row : p.rows) {
    double s = 0.0;
    for (double x : row) s += x;
    max_row_sum = std::max(max_row_sum, s);
  }
  std::vector<double> f(k, 0.5 / max_row_sum);

  double mu = 1.0;
  std::vector<double> g(k), h;
  while (true) {
    for (int newton = 0; newton < 80; ++newton) {
      std::vector<double> af = mat_vec(p.rows, f);
      std::vector<double> slack(v);
      for (int i = 0; i < v; ++i) slack[i] = 1.0 - af[i];
      for (int j = 0; j < k; ++j) g[j] = (p.w[j] + mu) / f[j];
      for (int i = 0; i < v; ++i) {
        double coeff = mu / slack[i];
        for (int j = 0; j < k; ++j) g[j] -= p.rows[i][j] * coeff;
      }
      h.assign(static_cast<size_t>(k) * k, 0.0);
      for (int j = 0; j < k; ++j) h[static_cast<size_t>(j) * k + j] = (p.w[j] + mu) / (f[j] * f[j]);
      for (int i = 0; i < v; ++i) {
        double coeff = mu / (slack[i] * slack[i]);
        const auto& row = p.rows[i];
        for (int a = 0; a < k; ++a) {
          if (row[a] == 0.0) continue;
          double ra = coeff * row[a];
          for (int b = 0; b <= a; ++b) h[static_cast<size_t>(a) * k + b] += ra * row[b];
        }
      }
      for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
          h[static_cast<size_t>(a) * k + b] = h[static_cast<size_t>(b) * k + a];

      std::vector<double> d = g;
      if (!spd_solve(h, d, k)) break;
      double gd = 0.0;
      for (int j = 0; j < k; ++j) gd += g[j] * d[j];
      if (gd < 1e-22 * (1.0 + mu)) break;

      double alpha = 1.0;
      for (int j = 0; j < k; ++j)
        if (d[j] < 0.0) alpha = std::min(alpha, 0.99 * (-f[j] / d[j]));
      std::vector<double> ad = mat_vec(p.rows, d);
      for (int i = 0; i < v; ++i)
        if (ad[i] > 0.0) alpha = std::min(alpha, 0.99 * slack[i] / ad[i]);

      double phi0 = 0.0;
      for (int j = 0; j < k; ++j) phi0 += (p.w[j] + mu) * std::log(f[j]);
      for (int i = 0; i < v; ++i) phi0 += mu * std::log(slack[i]);
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        bool interior = true;
        double phin = 0.0;
        for (int j = 0; j < k; ++j) {
          double fn = f[j] + alpha * d[j];
          if (fn <= 0.0) {
            interior = false;
            break;
          }
          phin += (p.w[j] + mu) * std::log(fn);
        }
        if (interior)
          for (int i = 0; i < v; ++i) {
            double sn = slack[i] - alpha * ad[i];
            if (sn <= 0.0) {
              interior = false;
              break;
            }
            phin += mu * std::log(sn);
          }
        if (interior && phin >= phi0 + 0.25 * alpha * gd) {
          for (int j = 0; j < k; ++j) f[j] += alpha * d[j];
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) break;
    }
    if (mu <= mu_final) break;
    mu = std::max(mu * 0.1, mu_final);
  }

  LogMixResult res;
  res.f = f;
  std::vector<double> af = mat_vec(p.rows, f);
  res.dual.resize(v);
  for (int i = 0; i < v; ++i) res.dual[i] = mu / (1.0 - af[i]);
  return res;
}

Pef optimize_pef(const Model& model, const JointDistribution& rho, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("optimize_pef: beta must be positive");
  if (!rho.normalized(1e-9)) throw std::invalid_argument("optimize_pef: rho not normalized");
  LogMixProblem p = model_problem(model, rho, beta);
  LogMixResult res = maximize_log_mixture(p);
  // contract step: pull back inside the constraint set if roundoff ever
  // left a vertex expectation above 1 (the barrier keeps them below)
  double worst = 0.0;
  for (const auto& row : p.rows) {
    double s = 0.0;
    for (int j = 0; j < p.k; ++j) s += row[j] * res.f[j];
    worst = std::max(worst, s);
  }
  Pef out;
  out.beta = beta;
  double scale = worst > 1.0 ? 1.0 / worst : 1.0;
  for (int e = 0; e < kCells; ++e) out.f[e] = res.f[e] * scale;
  return out;
}

PefValidation validate_pef(const Pef& pef, const Model& model) {
  PefValidation val;
  double fmin = *std::min_element(pef.f.begin(), pef.f.end());
  val.margin = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < model.vertices.size(); ++i) {
    const JointDistribution& nu = model.vertices[i];
    ConditionalDistribution cond = nu.conditional();
    double s = 0.0;
    for (int e = 0; e < kCells; ++e)
      if (nu.p[e] > 0.0) s += pef.f[e] * std::pow(cond.p[e], pef.beta) * nu.p[e];
    if (s - 1.0 > val.margin) {
      val.margin = s - 1.0;
      val.worst_vertex = static_cast<int>(i);
    }
  }
  val.valid = fmin >= 0.0 && val.margin <= 1e-9;
  return val;
}

PefValidation validate_spotcheck_pef(const SpotCheckPef& pef,
                                     const std::vector<ConditionalDistribution>& cond_points) {
  PefValidation val;
  double fmin = std::min(pef.f_notest, *std::min_element(pef.f_test.begin(), pef.f_test.end()));
  val.margin = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < cond_points.size(); ++i) {
    const ConditionalDistribution& cp = cond_points[i];
    double s = 0.0;
    for (int z = 0; z < kSettings; ++z)
      for (int c = 0; c < kOutcomes; ++c) {
        double q = cp.at(z, c);
        if (q <= 0.0) continue;
        s += pef.f_test[cell_index(z, c)] * std::pow(q, pef.beta) * q * (pef.r / 4.0);
        if (z == pef.z0) s += pef.f_notest * std::pow(q, pef.beta) * q * (1.0 - pef.r);
      }
    if (s - 1.0 > val.margin) {
      val.margin = s - 1.0;
      val.worst_vertex = static_cast<int>(i);
    }
  }
  val.valid = fmin >= 0.0 && val.margin <= 1e-9;
  return val;
}

double log_prob_rate(const Pef& pef, const JointDistribution& rho, double kappa) {
  if (kappa < 0.0) throw std::invalid_argument("log_prob_rate: kappa must be >= 0");
  double s = 0.0;
  for (int e = 0; e < kCells; ++e) {
    if (rho.p[e] <= 0.0) continue;
    if (pef.f[e] == 0.0) return -std::numeric_limits<double>::infinity();
    s += rho.p[e] * std::log2(std::max(pef.f[e], kFloor));
  }
  double rate = s / pef.beta;
  return kappa > 0.0 ? (1.0 - kappa / pef.beta) * rate : rate;
}

Pef power_reduce(const Pef& pef, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("power_reduce: gamma must be in (0,1]");
  Pef out;
  out.beta = gamma * pef.beta;
  for (int e = 0; e < kCells; ++e) out.f[e] = std::pow(pef.f[e], gamma);
  return out;
}

Pef convex_combine(const std::vector<Pef>& pefs, const std::vector<double>& weights) {
  if (pefs.empty() || pefs.size() != weights.size())
    throw std::invalid_argument("convex_combine: need one weight per factor");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("convex_combine: negative weight");
    total += w;
  }
  if (total > 1.0 + 1e-12) throw std::invalid_argument("convex_combine: weights exceed 1");
  for (const Pef& p : pefs)
    if (p.beta != pefs[0].beta) throw std::invalid_argument("convex_combine: mixed powers");
  Pef out;
  out.beta = pefs[0].beta;
  double unit = std::max(0.0, 1.0 - total);  // remaining mass on F = 1
  for (int e = 0; e < kCells; ++e) {
    double s = unit;
    for (size_t i = 0; i < pefs.size(); ++i) s += weights[i] * pefs[i].f[e];
    out.f[e] = s;
  }
  return out;
}

double conditional_entropy_bits(const JointDistribution& dist) {
  SettingsDistribution s = dist.settings_marginal();
  double h = 0.0;
  for (int z = 0; z < kSettings; ++z) {
    if (s.p[z] <= 0.0) continue;
    for (int c = 0; c < kOutcomes; ++c) {
      double p = dist.p[cell_index(z, c)];
      if (p > 0.0) h -= p * std::log2(p / s.p[z]);
    }
  }
  return h;
}

double min_conditional_entropy(const Model& model, const JointDistribution& rho) {
  const int v = static_cast<int>(model.vertices.size());
  LpProblem lp;
  lp.m = kCells;
  lp.n = v;
  lp.a.resize(static_cast<size_t>(kCells) * v);
  lp.b.assign(rho.p.begin(), rho.p.end());
  lp.c.resize(v);
  for (int j = 0; j < v; ++j) {
    for (int e = 0; e < kCells; ++e) lp.a[static_cast<size_t>(e) * v + j] = model.vertices[j].p[e];
    lp.c[j] = conditional_entropy_bits(model.vertices[j]);
  }
  LpSolution sol = solve_lp(lp);
  if (sol.status == LpStatus::Infeasible)
    throw std::invalid_argument("min_conditional_entropy: rho outside the model hull");
  if (sol.status != LpStatus::Optimal)
    throw std::runtime_error("min_conditional_entropy: LP did not converge");
  return sol.objective;
}

double asymptotic_gain_rate(const Model& model, const JointDistribution& rho, GainMethod method) {
  if (method == GainMethod::Lp) return min_conditional_entropy(model, rho);
  double r2 = log_prob_rate(optimize_pef(model, rho, 1e-2), rho);
  double r3 = log_prob_rate(optimize_pef(model, rho, 1e-3), rho);
  double r4 = log_prob_rate(optimize_pef(model, rho, 1e-4), rho);
  (void)r2;  // part of the sweep contract; the extrapolation uses the two smallest powers
  return r4 + (r4 - r3) / 9.0;
}

MaxProbEstimator optimize_maxprob_estimator(const Model& model, const JointDistribution& rho,
                                            const std::array<double, kCells>& gamma) {
  if (model.settings_points.size() != 1)
    throw std::invalid_argument("optimize_maxprob_estimator: needs a fixed settings distribution");
  for (double g : gamma)
    if (!(g > 0.0)) throw std::invalid_argument("optimize_maxprob_estimator: gamma must be positive");

  // Solve the dual: max sum_i rhs_i mu_i with sum_i mu_i nu_i = rho, mu >= 0,
  // where rhs_i = max_dz gamma(dz) nu_i(d|z). Btilde is the equality duals.
  const int v = static_cast<int>(model.vertices.size());
  LpProblem lp;
  lp.m = kCells;
  lp.n = v;
  lp.a.resize(static_cast<size_t>(kCells) * v);
  lp.b.assign(rho.p.begin(), rho.p.end());
  lp.c.resize(v);
  for (int j = 0; j < v; ++j) {
    const JointDistribution& nu = model.vertices[j];
    ConditionalDistribution cond = nu.conditional();
    for (int e = 0; e < kCells; ++e) lp.a[static_cast<size_t>(e) * v + j] = nu.p[e];
    double rhs = 0.0;
    for (int e = 0; e < kCells; ++e) rhs = std::max(rhs, gamma[e] * cond.p[e]);
    lp.c[j] = -rhs;
  }
  LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal)
    throw std::runtime_error("optimize_maxprob_estimator: LP failed");

  MaxProbEstimator est;
  double mean = 0.0;
  for (int e = 0; e < kCells; ++e) {
    est.b.v[e] = 1.0 + sol.y[e];  // B = 1 - Btilde, Btilde = -y
    mean += est.b.v[e] * rho.p[e];
  }
  est.b_bar = mean;
  double bmin = *std::min_element(est.b.v.begin(), est.b.v.end());
  est.w = -std::min(0.0, bmin);

  // certify the max-prob bound at every vertex before handing B out
  for (int j = 0; j < v; ++j) {
    const JointDistribution& nu = model.vertices[j];
    ConditionalDistribution cond = nu.conditional();
    double eb = 0.0, rhs = 0.0;
    for (int e = 0; e < kCells; ++e) {
      eb += est.b.v[e] * nu.p[e];
      rhs = std::max(rhs, gamma[e] * cond.p[e]);
    }
    if (1.0 - eb < rhs - 1e-9)
      throw std::runtime_error("optimize_maxprob_estimator: bound certification failed");
  }
  return est;
}

Pef pef_from_maxprob(const BellFunction& b, double alpha, double beta, double lambda,
                     const std::array<double, kCells>* gamma, const Model* model) {
  if (!(alpha < 1.0)) throw std::invalid_argument("pef_from_maxprob: anchor must be < 1");
  if (!(beta > 0.0)) throw std::invalid_argument("pef_from_maxprob: beta must be positive");
  if (lambda < 0.0) throw std::invalid_argument("pef_from_maxprob: lambda must be >= 0");
  if (model) {
    for (const auto& nu : model->vertices) {
      ConditionalDistribution cond = nu.conditional();
      double eb = 0.0, rhs = 0.0;
      for (int e = 0; e < kCells; ++e) {
        eb += b.v[e] * nu.p[e];
        rhs = std::max(rhs, (gamma ? (*gamma)[e] : 1.0) * cond.p[e]);
      }
      if (1.0 - eb < rhs - 1e-9)
        throw std::invalid_argument("pef_from_maxprob: estimator fails the max-prob bound");
    }
  }
  Pef out;
  out.beta = beta;
  double base = std::pow(1.0 - alpha, -beta);
  double lambda_max = std::numeric_limits<double>::infinity();
  for (int e = 0; e < kCells; ++e) {
    double f = base * (1.0 + beta * (b.v[e] - alpha) / (1.0 - alpha));
    if (gamma) f *= std::pow((*gamma)[e], beta);
    double fp = 1.0 + lambda * (f - 1.0);
    if (f < 1.0) lambda_max = std::min(lambda_max, 1.0 / (1.0 - f));
    out.f[e] = fp;
  }
  double fmin = *std::min_element(out.f.begin(), out.f.end());
  if (fmin < 0.0)
    throw PefNegativityError(
        "pef_from_maxprob: negative entries; shrink lambda or reduce beta", lambda_max);
  return out;
}

SpotCheckPef spotcheck_pef(const BellFunction& b, double b_bar, double r, double beta, int z0) {
  if (!(r > 0.0 && r < 0.5)) throw std::invalid_argument("spotcheck_pef: r must be in (0, 1/2)");
  if (!(b_bar < 1.0)) throw std::invalid_argument("spotcheck_pef: b_bar must be < 1");
  if (z0 < 0 || z0 >= kSettings) throw std::invalid_argument("spotcheck_pef: bad default setting");
  double bmin = *std::min_element(b.v.begin(), b.v.end());
  double w = -std::min(0.0, bmin);
  double d = (1.0 - b_bar) / (2.0 * w + b_bar);
  if (!(beta > 0.0 && beta <= d * r))
    throw std::invalid_argument("spotcheck_pef: beta exceeds d*r");
  SpotCheckPef out;
  out.beta = beta;
  out.r = r;
  out.b_bar = b_bar;
  out.z0 = z0;
  double base = std::pow(1.0 - b_bar, -beta);
  out.f_notest = base * (1.0 - beta * b_bar / (1.0 - b_bar));
  for (int e = 0; e < kCells; ++e)
    out.f_test[e] = base * (1.0 + beta * (b.v[e] / r - b_bar) / (1.0 - b_bar));
  return out;
}

ExpansionParams expansion_parameters(double b_bar, double v_bar, double w, double eps_h,
                                     double lambda_fail) {
  if (!(b_bar > 0.0 && b_bar < 1.0))
    throw std::invalid_argument("expansion_parameters: b_bar must be in (0,1)");
  if (v_bar < 0.0 || w < 0.0) throw std::invalid_argument("expansion_parameters: bad moments");
  if (!(eps_h > 0.0 && eps_h < 1.0) || !(lambda_fail > 0.0))
    throw std::invalid_argument("expansion_parameters: bad error budgets");
  ExpansionParams ep;
  ep.d = (1.0 - b_bar) / (2.0 * w + b_bar);
  ep.d_prime = 2.0 * (v_bar + b_bar * b_bar) / ((1.0 - b_bar) * (1.0 - b_bar));
  ep.g0 = -std::log(1.0 - b_bar);
  ep.c = ep.d_prime > 0.0 ? std::min(ep.d, ep.g0 / (3.0 * ep.d_prime)) : ep.d;
  double budget = std::max(3.0 * std::log(1.0 / eps_h),
                           24.0 * kLn2 * kLn2 / (lambda_fail * lambda_fail));
  ep.c_prime = budget / (ep.c * ep.g0);
  ep.v_coeff = 2.0 * kLn2 * kLn2 * ep.d_prime / ep.c_prime;
  return ep;
}

double var_frb_bound(double b_bar, double v_bar, double beta, double r) {
  return 4.0 * kLn2 * kLn2 * (beta * beta / r) * (v_bar + b_bar * b_bar) /
         ((1.0 - b_bar) * (1.0 - b_bar));
}

double entropy_estimate(const Pef& pef, const JointDistribution& rho) {
  for (int e = 0; e < kCells; ++e)
    if (rho.p[e] > 0.0 && pef.f[e] <= 0.0)
      throw std::invalid_argument("entropy_estimate: factor vanishes on the support");
  double est = log_prob_rate(pef, rho);
  double h = conditional_entropy_bits(rho);
  if (est > h + 1e-9)
    throw std::logic_error("entropy_estimate: estimate exceeds the conditional entropy");
  return est;
}

double optimized_spotcheck_rate(const std::vector<ConditionalDistribution>& cond_points,
                                const ConditionalDistribution& rho_cond, double r, double beta,
                                int z0) {
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("optimized_spotcheck_rate: bad r");
  if (!(beta > 0.0)) throw std::invalid_argument("optimized_spotcheck_rate: bad beta");
  LogMixProblem p = spotcheck_problem(cond_points, rho_cond, r, beta, z0);
  LogMixResult res = maximize_log_mixture(p);
  return rate_bits(p, res.f, beta);
}

}  // namespace pecert
