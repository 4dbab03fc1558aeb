#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace pecert {

// Index conventions used everywhere:
//   settings index z = x + 2y, so z runs over (x,y) = 00,10,01,11
//   outcome index  c = a + 2b, same pattern over (a,b)
//   joint cell     e = 4z + c
// Distribution files and the embedded tables use the same row/column order.

inline constexpr int kSettings = 4;
inline constexpr int kOutcomes = 4;
inline constexpr int kCells = 16;

inline int z_index(int x, int y) { return x + 2 * y; }
inline int c_index(int a, int b) { return a + 2 * b; }
inline int cell_index(int z, int c) { return 4 * z + c; }

struct ConditionalDistribution {
  std::array<double, kCells> p{};  // p[4z+c] = p(ab|xy)

  double at(int z, int c) const { return p[cell_index(z, c)]; }
  double& at(int z, int c) { return p[cell_index(z, c)]; }
  // each row sums to 1 within tol, entries in [0,1]
  bool rows_normalized(double tol = 1e-12) const;
};

struct SettingsDistribution {
  std::array<double, kSettings> p{};

  bool normalized(double tol = 1e-12) const;
};

inline SettingsDistribution uniform_settings() {
  return SettingsDistribution{{0.25, 0.25, 0.25, 0.25}};
}

struct JointDistribution {
  std::array<double, kCells> p{};  // p[4z+c] = p(abxy)

  static JointDistribution combine(const ConditionalDistribution& cond,
                                   const SettingsDistribution& settings);
  SettingsDistribution settings_marginal() const;
  // conditional rows; a zero-mass settings row comes back uniform
  ConditionalDistribution conditional() const;
  bool normalized(double tol = 1e-12) const;
};

enum class PolytopeKind { LR, NS, Q };

// Finite list of extreme joint distributions defining the constraint set.
struct Model {
  std::string kind;
  std::vector<ConditionalDistribution> cond_points;
  std::vector<SettingsDistribution> settings_points;
  std::vector<JointDistribution> vertices;  // cond-major Cartesian pairing
};

struct BellFunction {
  std::array<double, kCells> v{};

  double at(int z, int c) const { return v[cell_index(z, c)]; }
};

// LR: the 16 deterministic points, ordered lexicographically by
// (f_A(0), f_A(1), f_B(0), f_B(1)).
// NS: LR plus the 8 PR boxes, ordered by ascending mask m = sum_z g(z)<<z
// over the odd-parity g.
// Q: LR plus, per PR box g, the 8 mixtures (1-q) nu_LR + q nu_g with
// q = sqrt(2)-1 over the LR points where E(B_g) = 0, in (g, partner) order.
std::vector<ConditionalDistribution> conditional_extreme_points(PolytopeKind kind);

// 4 product extreme points nu(xy) = ((1 +- b)/2)((1 +- b)/2); b=0 gives the
// single uniform point. Throws std::invalid_argument outside [0,1).
std::vector<SettingsDistribution> bias_settings_polytope(double b);

Model assemble_model(const std::string& kind,
                     const std::vector<ConditionalDistribution>& cond_points,
                     const std::vector<SettingsDistribution>& settings_points);

// convenience: NS/Q/LR with the bias-b settings polytope
Model make_model(PolytopeKind kind, double bias = 0.0);

// B(xyab) = s(xy)|a-b| with s = -1,-1,-1,+1 over z = 00,10,01,11
BellFunction bell_function_chsh();
// B_g = -(-1)^{g(xy)+p(g)} [a != b xor p(g)], p(g)=0 iff |g^-1(1)|=1;
// mask bit z holds g(z). Throws unless the mask has odd parity.
BellFunction bell_function_g(unsigned mask);

double bell_value(const BellFunction& b, const JointDistribution& dist);

struct NonsignalingResult {
  bool pass;
  double max_violation;
};

// max deviation of either station's outcome marginal across remote settings
NonsignalingResult nonsignaling_check(const ConditionalDistribution& cond, double tol);

inline double tsirelson_bound() { return 0.25 * (std::sqrt(2.0) - 1.0); }

const std::array<unsigned, 8>& pr_masks();

}  // namespace pecert
