#include "pecert/bellmodel.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace pecert {

bool ConditionalDistribution::rows_normalized(double tol) const {
  for (int z = 0; z < kSettings; ++z) {
    double s = 0.0;
    for (int c = 0; c < kOutcomes; ++c) {
      double v = at(z, c);
      if (v < 0.0 || v > 1.0) return false;
      s += v;
    }
    if (std::fabs(s - 1.0) > tol) return false;
  }
  return true;
}

bool SettingsDistribution::normalized(double tol) const {
  double s = 0.0;
  for (double v : p) {
    if (v < 0.0) return false;
    s += v;
  }
  return std::fabs(s - 1.0) <= tol;
}

JointDistribution JointDistribution::combine(const ConditionalDistribution& cond,
                                             const SettingsDistribution& settings) {
  JointDistribution j;
  for (int z = 0; z < kSettings; ++z)
    for (int c = 0; c < kOutcomes; ++c)
      j.p[cell_index(z, c)] = cond.at(z, c) * settings.p[z];
  return j;
}

SettingsDistribution JointDistribution::settings_marginal() const {
  SettingsDistribution s;
  for (int z = 0; z < kSettings; ++z)
    for (int c = 0; c < kOutcomes; ++c) s.p[z] += p[cell_index(z, c)];
  return s;
}

ConditionalDistribution JointDistribution::conditional() const {
  SettingsDistribution s = settings_marginal();
  ConditionalDistribution cond;
  for (int z = 0; z < kSettings; ++z)
    for (int c = 0; c < kOutcomes; ++c)
      cond.at(z, c) = s.p[z] > 0.0 ? p[cell_index(z, c)] / s.p[z] : 0.25;
  return cond;
}

bool JointDistribution::normalized(double tol) const {
  double s = 0.0;
  for (double v : p) {
    if (v < 0.0) return false;
    s += v;
  }
  return std::fabs(s - 1.0) <= tol;
}

const std::array<unsigned, 8>& pr_masks() {
  static const std::array<unsigned, 8> masks = {1, 2, 4, 7, 8, 11, 13, 14};
  return masks;
}

namespace {

std::vector<ConditionalDistribution> lr_extreme_points() {
  std::vector<ConditionalDistribution> pts;
  pts.reserve(16);
  for (int fa0 = 0; fa0 < 2; ++fa0)
    for (int fa1 = 0; fa1 < 2; ++fa1)
      for (int fb0 = 0; fb0 < 2; ++fb0)
        for (int fb1 = 0; fb1 < 2; ++fb1) {
          const int fa[2] = {fa0, fa1};
          const int fb[2] = {fb0, fb1};
          ConditionalDistribution t;
          for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
              t.at(z_index(x, y), c_index(fa[x], fb[y])) = 1.0;
          pts.push_back(t);
        }
  return pts;
}

ConditionalDistribution pr_point(unsigned mask) {
  ConditionalDistribution t;
  for (int z = 0; z < kSettings; ++z) {
    int g = (mask >> z) & 1;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        if (a == ((b ^ g) & 1)) t.at(z, c_index(a, b)) = 0.5;
  }
  return t;
}

double expect_uniform(const BellFunction& bell, const ConditionalDistribution& cond) {
  double s = 0.0;
  for (int e = 0; e < kCells; ++e) s += bell.v[e] * cond.p[e];
  return s / 4.0;
}

}  // namespace

std::vector<ConditionalDistribution> conditional_extreme_points(PolytopeKind kind) {
  std::vector<ConditionalDistribution> pts = lr_extreme_points();
  if (kind == PolytopeKind::LR) return pts;
  if (kind == PolytopeKind::NS) {
    for (unsigned mask : pr_masks()) pts.push_back(pr_point(mask));
    return pts;
  }
  // Q: Tsirelson-saturating mixtures over the LR points orthogonal to B_g
  const double q = std::sqrt(2.0) - 1.0;
  std::vector<ConditionalDistribution> lr = pts;
  for (unsigned mask : pr_masks()) {
    BellFunction bg = bell_function_g(mask);
    ConditionalDistribution prt = pr_point(mask);
    int partners = 0;
    for (int i = 0; i < 16; ++i) {
      if (std::fabs(expect_uniform(bg, lr[i])) > 1e-14) continue;
      ++partners;
      ConditionalDistribution mix;
      for (int e = 0; e < kCells; ++e) mix.p[e] = (1.0 - q) * lr[i].p[e] + q * prt.p[e];
      pts.push_back(mix);
    }
    if (partners != 8) throw std::logic_error("PR box has wrong partner count");
  }
  return pts;
}

std::vector<SettingsDistribution> bias_settings_polytope(double b) {
  if (!(b >= 0.0 && b < 1.0)) throw std::invalid_argument("settings bias must be in [0,1)");
  if (b == 0.0) return {uniform_settings()};
  std::vector<SettingsDistribution> pts;
  for (int u = 0; u < 2; ++u)
    for (int v = 0; v < 2; ++v) {
      SettingsDistribution s;
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          double px = (1.0 + ((u + x) % 2 == 0 ? b : -b)) / 2.0;
          double py = (1.0 + ((v + y) % 2 == 0 ? b : -b)) / 2.0;
          s.p[z_index(x, y)] = px * py;
        }
      pts.push_back(s);
    }
  return pts;
}

Model assemble_model(const std::string& kind,
                     const std::vector<ConditionalDistribution>& cond_points,
                     const std::vector<SettingsDistribution>& settings_points) {
  if (cond_points.empty() || settings_points.empty())
    throw std::invalid_argument("assemble_model: empty vertex list");
  for (const auto& c : cond_points)
    if (!c.rows_normalized()) throw std::invalid_argument("assemble_model: bad conditional");
  for (const auto& s : settings_points)
    if (!s.normalized()) throw std::invalid_argument("assemble_model: bad settings point");
  Model m;
  m.kind = kind;
  m.cond_points = cond_points;
  m.settings_points = settings_points;
  m.vertices.reserve(cond_points.size() * settings_points.size());
  for (const auto& c : cond_points)
    for (const auto& s : settings_points)
      m.vertices.push_back(JointDistribution::combine(c, s));
  return m;
}

Model make_model(PolytopeKind kind, double bias) {
  std::string tag = kind == PolytopeKind::LR ? "LR" : kind == PolytopeKind::NS ? "NS" : "Q";
  if (bias > 0.0) tag += "+bias(" + std::to_string(bias) + ")";
  return assemble_model(tag, conditional_extreme_points(kind), bias_settings_polytope(bias));
}

BellFunction bell_function_chsh() {
  BellFunction b;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      double s = (x == 1 && y == 1) ? 1.0 : -1.0;
      for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c)
          b.v[cell_index(z_index(x, y), c_index(a, c))] = s * std::abs(a - c);
    }
  return b;
}

BellFunction bell_function_g(unsigned mask) {
  if (mask >= 16 || std::popcount(mask) % 2 == 0)
    throw std::invalid_argument("bell_function_g: mask must have odd parity");
  int pg = std::popcount(mask) == 1 ? 0 : 1;
  BellFunction b;
  for (int z = 0; z < kSettings; ++z) {
    int g = (mask >> z) & 1;
    double sign = ((g + pg) % 2 == 0) ? -1.0 : 1.0;
    for (int a = 0; a < 2; ++a)
      for (int c = 0; c < 2; ++c) {
        double ind = (a != ((c ^ pg) & 1)) ? 1.0 : 0.0;
        b.v[cell_index(z, c_index(a, c))] = sign * ind;
      }
  }
  return b;
}

double bell_value(const BellFunction& b, const JointDistribution& dist) {
  double s = 0.0;
  for (int e = 0; e < kCells; ++e) s += b.v[e] * dist.p[e];
  return s;
}

NonsignalingResult nonsignaling_check(const ConditionalDistribution& cond, double tol) {
  double worst = 0.0;
  // station A: p(a|x) must not depend on y
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a) {
      double m[2];
      for (int y = 0; y < 2; ++y)
        m[y] = cond.at(z_index(x, y), c_index(a, 0)) + cond.at(z_index(x, y), c_index(a, 1));
      worst = std::max(worst, std::fabs(m[0] - m[1]));
    }
  // station B: p(b|y) must not depend on x
  for (int y = 0; y < 2; ++y)
    for (int b = 0; b < 2; ++b) {
      double m[2];
      for (int x = 0; x < 2; ++x)
        m[x] = cond.at(z_index(x, y), c_index(0, b)) + cond.at(z_index(x, y), c_index(1, b));
      worst = std::max(worst, std::fabs(m[0] - m[1]));
    }
  return {worst <= tol, worst};
}

}  // namespace pecert
