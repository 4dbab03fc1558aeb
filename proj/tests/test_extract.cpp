// Toeplitz extraction, parameter calculators, and the protocol drivers.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "pecert/extract.hpp"
#include "pecert/io.hpp"
#include "pecert/rng.hpp"

using namespace pecert;

namespace {

BitString bits_of(const std::string& s) {
  BitString b;
  for (char ch : s) b.push_back(ch == '1');
  return b;
}

std::string str_of(const BitString& b) {
  std::string s;
  for (auto v : b) s.push_back(static_cast<char>('0' + v));
  return s;
}

BitString bits_of_word(std::uint32_t w, int n) {
  BitString b(n);
  for (int i = 0; i < n; ++i) b[i] = (w >> i) & 1;
  return b;
}

// exhaustive TV distance of (output, seed) from uniform x seed, for an input
// uniform over the given set
double joint_tv(const std::vector<std::uint32_t>& inputs, int n, int m) {
  const int l = n + m - 1;
  const std::uint32_t seeds = 1u << l, outs = 1u << m;
  std::vector<double> mass(static_cast<std::size_t>(seeds) * outs, 0.0);
  const double w = 1.0 / (double(seeds) * double(inputs.size()));
  for (std::uint32_t s = 0; s < seeds; ++s) {
    BitString seed = bits_of_word(s, l);
    for (std::uint32_t d : inputs) {
      BitString out = toeplitz_extract(bits_of_word(d, n), seed, m);
      std::uint32_t o = 0;
      for (int j = 0; j < m; ++j) o |= std::uint32_t(out[j]) << j;
      mass[static_cast<std::size_t>(s) * outs + o] += w;
    }
  }
  const double u = 1.0 / (double(seeds) * double(outs));
  double tv = 0.0;
  for (double p : mass) tv += std::fabs(p - u);
  return tv / 2.0;
}

std::string tmp_path(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / "pecert_extract_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_CASE("extraction formula on fixed vectors") {
  CHECK(toeplitz_extract(bits_of("10"), bits_of("10"), 1) == bits_of("1"));

  BitString d2 = bits_of("1100001101010101011100011011000001011111001010011000101011100100");
  BitString s2 =
      bits_of("1010110101110100101110010011101000010100001000000110000101100100101111101011011");
  CHECK(str_of(toeplitz_extract(d2, s2, 16)) == "0011000111100010");

  BitString d3 = bits_of(
      "00111111101101111110011111100100011011111100110110010001100100011110001110100011011100010000"
      "01110111");
  BitString s3 = bits_of(
      "01110101001001000101011101000111010011111001000100101001100100111001011010101000011110010111"
      "100101000111001010111111111101100110010");
  CHECK(str_of(toeplitz_extract(d3, s3, 32)) == "10101011011111110010101001011011");
}

TEST_CASE("zero seed and zero input") {
  SplitMix64 rng(11);
  BitString d(100);
  for (auto& v : d) v = static_cast<std::uint8_t>(rng.bit());
  BitString zero_seed(100 + 17 - 1, 0);
  for (auto v : toeplitz_extract(d, zero_seed, 17)) CHECK(v == 0);
  BitString zero_d(64, 0), seed(64 + 8 - 1);
  for (auto& v : seed) v = static_cast<std::uint8_t>(rng.bit());
  for (auto v : toeplitz_extract(zero_d, seed, 8)) CHECK(v == 0);
}

TEST_CASE("length contract") {
  CHECK_THROWS_AS(toeplitz_extract(bits_of("10"), bits_of("100"), 1), std::invalid_argument);
  CHECK_THROWS_AS(toeplitz_extract(bits_of("10"), bits_of("1010"), 3), std::invalid_argument);
  CHECK_THROWS_AS(toeplitz_extract(bits_of("10"), bits_of(""), 0), std::invalid_argument);
}

TEST_CASE("linearity over XOR of inputs") {
  SplitMix64 rng(2024);
  const int n = 40, m = 13;
  for (int rep = 0; rep < 200; ++rep) {
    BitString d1(n), d2(n), dx(n), seed(n + m - 1);
    for (int i = 0; i < n; ++i) {
      d1[i] = static_cast<std::uint8_t>(rng.bit());
      d2[i] = static_cast<std::uint8_t>(rng.bit());
      dx[i] = d1[i] ^ d2[i];
    }
    for (auto& v : seed) v = static_cast<std::uint8_t>(rng.bit());
    BitString o1 = toeplitz_extract(d1, seed, m);
    BitString o2 = toeplitz_extract(d2, seed, m);
    BitString ox = toeplitz_extract(dx, seed, m);
    for (int j = 0; j < m; ++j) CHECK(ox[j] == (o1[j] ^ o2[j]));
  }
}

TEST_CASE("leftover hash at toy scale, uniform input") {
  // n=8, m=2: TV of (output, seed) from uniform is at most (1/2) sqrt(2^(m-n))
  std::vector<std::uint32_t> all;
  for (std::uint32_t d = 0; d < 256; ++d) all.push_back(d);
  double tv = joint_tv(all, 8, 2);
  CHECK(tv <= 0.5 * std::sqrt(std::exp2(2 - 8)) + 1e-12);
}

TEST_CASE("leftover hash at toy scale, flat low-entropy inputs") {
  // sigma_h = m + 2 log2(1/eps_x) with m=2, eps_x=1/2 gives sigma_h=4:
  // any 16-element input set must keep the joint TV within eps_x
  const int n = 6, m = 2;
  std::vector<std::vector<std::uint32_t>> sets;
  std::vector<std::uint32_t> lex;
  for (std::uint32_t d = 0; d < 16; ++d) lex.push_back(d);
  sets.push_back(lex);
  std::vector<std::uint32_t> subspace;  // bits 1 and 4 forced to zero
  for (std::uint32_t d = 0; d < 64; ++d)
    if ((d & 0x12) == 0) subspace.push_back(d);
  sets.push_back(subspace);
  SplitMix64 rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<std::uint32_t> pick;
    std::vector<std::uint32_t> pool;
    for (std::uint32_t d = 0; d < 64; ++d) pool.push_back(d);
    for (int k = 0; k < 16; ++k) {
      std::uint64_t i = rng.below(pool.size());
      pick.push_back(pool[i]);
      pool.erase(pool.begin() + static_cast<long>(i));
    }
    sets.push_back(pick);
  }
  for (const auto& s : sets) {
    REQUIRE(s.size() == 16);
    CHECK(joint_tv(s, n, m) <= 0.5);
  }
}

TEST_CASE("output sizing from input entropy") {
  ExtractorParams p = toeplitz_params(200, 100.0, std::exp2(-10));
  CHECK(p.sigma == 80);
  CHECK(p.l == 200 + 80 - 1);
  CHECK(p.sigma_h == 100.0);

  ExtractorParams big = toeplitz_params(1000000, 1000.0, std::exp2(-32));
  CHECK(big.sigma == 936);
  CHECK(big.l == 1000935);

  // all the entropy is eaten by the error term
  CHECK_THROWS_AS(toeplitz_params(100, 20.0, std::exp2(-10)), std::invalid_argument);
  CHECK_THROWS_AS(toeplitz_params(50, 60.0, std::exp2(-10)), std::invalid_argument);
  CHECK_THROWS_AS(toeplitz_params(50, 30.0, 0.0), std::invalid_argument);
}

TEST_CASE("reference construction parameter calculator") {
  TmpsParams t = tmps_params(256, std::exp2(-10), 1000000);
  CHECK(t.sigma_h == doctest::Approx(334.0).epsilon(1e-12));

  // smallest legal sigma exercises log2(sigma)=1
  TmpsParams s2 = tmps_params(2, 0.5, 16);
  CHECK(s2.sigma_h == doctest::Approx(2 + 4 + 4 + 6).epsilon(1e-12));
  CHECK(s2.l == 3600);  // 36 * 1 * (2 + 4 + 2 + 2)^2

  // independent re-evaluation of the seed length at the published scale
  TmpsParams big = tmps_params(256, std::exp2(-10), 182000000);
  double inner = std::log2(4.0 * 182000000.0 * 256.0 * 256.0 * std::exp2(20));
  CHECK(double(big.l) == doctest::Approx(std::ceil(36.0 * 8.0 * inner * inner)).epsilon(1e-12));

  CHECK_THROWS_AS(tmps_params(1, 0.5, 16), std::invalid_argument);
}

TEST_CASE("soundness composition") {
  ChainSoundness c = chain_soundness(0.001, 0.001, 0.001);
  CHECK(c.basic == doctest::Approx(0.004).epsilon(1e-15));
  CHECK(chain_soundness(0.25, 0.0, 0.0).basic == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(chain_soundness(0.001, 0.002, 0.003, 1.0).improved ==
        doctest::Approx(0.001 + 0.002 + 0.003).epsilon(1e-15));
  CHECK(chain_soundness(0.001, 0.002, 0.003, 0.5).improved ==
        doctest::Approx(0.001 + 0.005 / 0.5).epsilon(1e-15));
  CHECK_THROWS_AS(chain_soundness(0.0, 0.1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(chain_soundness(0.1, 0.1, 0.1, 1.5), std::invalid_argument);
}

TEST_CASE("bit sources") {
  SeededBitSource a(99), b(99);
  BitString ba = a.take(64), bb = b.take(64);
  CHECK(ba == bb);
  CHECK(a.provenance() == std::string(kRngAlgorithm) + ":99");

  std::string p = tmp_path("source.txt");
  write_bits(p, bits_of("1011001"));
  FileBitSource f(p);
  CHECK(f.provenance() == "file:" + p);
  CHECK(f.take(7) == bits_of("1011001"));
  CHECK_THROWS_AS(f.next(), std::runtime_error);

  std::ofstream(p) << "01x";
  CHECK_THROWS_AS(FileBitSource{p}, std::runtime_error);
}

namespace {

// n trials at a fixed cell with a factor of 4 there: log2 T = 2n at beta=1
std::vector<TrialRecord> flat_trials(std::uint64_t n) {
  return std::vector<TrialRecord>(n, TrialRecord{0, 0, 1, 0, -1});
}

Pef quad_pef() {
  Pef pef;
  pef.beta = 1.0;
  pef.f.fill(1.0);
  pef.f[cell_index(z_index(0, 0), c_index(1, 0))] = 4.0;
  return pef;
}

}  // namespace

TEST_CASE("generation with abort: pass, fail, and the boundary") {
  // 10 trials, each contributing log2 F = 2: net = (20 - 2)/1 = 18
  std::vector<TrialRecord> trials = flat_trials(10);
  Pef pef = quad_pef();

  SeededBitSource seed(7);
  ProtocolResult ok = run_protocol_q(trials, pef, 18, 1.0 / 4, 1.0 / 4, seed);
  CHECK(ok.pass);
  CHECK(ok.net_log2_prob == doctest::Approx(18.0).epsilon(1e-12));
  // sigma_in is a hair under 18; floor(sigma_in - 4) = 13
  CHECK(ok.sigma == 13);
  CHECK(ok.seed.size() == 20 + 13 - 1);
  CHECK(ok.output.size() == 13);
  CHECK(ok.seed_provenance == std::string(kRngAlgorithm) + ":7");

  // the extractor input is a,b per trial in order; replay the seed source
  BitString d;
  for (const auto& tr : trials) {
    d.push_back(tr.a);
    d.push_back(tr.b);
  }
  SeededBitSource replay(7);
  BitString expect_seed = replay.take(32);
  CHECK(ok.seed == expect_seed);
  CHECK(ok.output == toeplitz_extract(d, expect_seed, 13));

  SeededBitSource seed2(7);
  ProtocolResult fail = run_protocol_q(trials, pef, 19, 1.0 / 4, 1.0 / 4, seed2);
  CHECK_FALSE(fail.pass);
  CHECK(fail.output.empty());
  CHECK(fail.seed.empty());
  // a failed run must not consume seed bits
  CHECK(seed2.take(16) == SeededBitSource(7).take(16));
}

TEST_CASE("generation with abort: degenerate and invalid parameters") {
  std::vector<TrialRecord> trials = flat_trials(10);
  SeededBitSource seed(1);

  // unit factors certify nothing: net is -log2(1/eps_h)/beta < sigma_h
  Pef ones;
  ones.beta = 1.0;
  ones.f.fill(1.0);
  ProtocolResult r = run_protocol_q(trials, ones, 6, 0.5, 0.25, seed);
  CHECK_FALSE(r.pass);
  CHECK(r.output.empty());

  CHECK_THROWS_AS(run_protocol_q(trials, quad_pef(), 21, 0.25, 0.25, seed),
                  std::invalid_argument);  // sigma_h above the input size
  CHECK_THROWS_AS(run_protocol_q(trials, quad_pef(), 0, 0.25, 0.25, seed),
                  std::invalid_argument);
  // step 0: not enough entropy for a single output bit at this eps_x
  CHECK_THROWS_AS(run_protocol_q(trials, quad_pef(), 3, 0.25, 0.25, seed),
                  std::invalid_argument);
}

TEST_CASE("generation with abort is deterministic") {
  std::vector<TrialRecord> trials = flat_trials(12);
  SeededBitSource s1(123), s2(123);
  ProtocolResult r1 = run_protocol_q(trials, quad_pef(), 10, 1e-3, 0.25, s1);
  ProtocolResult r2 = run_protocol_q(trials, quad_pef(), 10, 1e-3, 0.25, s2);
  REQUIRE(r1.pass);
  CHECK(r1.output == r2.output);
  CHECK(r1.seed == r2.seed);
}

TEST_CASE("generation without abort: banked top-up") {
  Pef pef = quad_pef();
  // 51 trials: net = (102 - 2)/1 = 100 >= sigma_h = 80, so k = 0
  {
    SeededBitSource seed(2), bank(3);
    ProtocolResult r = run_protocol_p(flat_trials(51), pef, 80, 0.25, std::exp2(-8), seed, bank);
    CHECK(r.pass);
    CHECK(r.k_banked == 0);
    CHECK(r.sigma == 80 - 16);
    CHECK(r.output.size() == 64);
    // n_in = 102 + 80 is fixed up front
    CHECK(r.seed.size() == 182 + 64 - 1);
  }
  // 26 trials: net = 50, shortfall 30
  {
    SeededBitSource seed(2), bank(3);
    ProtocolResult r = run_protocol_p(flat_trials(26), pef, 80, 0.25, std::exp2(-8), seed, bank);
    CHECK(r.pass);
    CHECK(r.k_banked == 30);
    // reconstruct the padded extractor input
    BitString d;
    for (const auto& tr : flat_trials(26)) {
      d.push_back(tr.a);
      d.push_back(tr.b);
    }
    SeededBitSource bank2(3);
    BitString banked = bank2.take(30);
    d.insert(d.end(), banked.begin(), banked.end());
    d.resize(2 * 26 + 80, 0);
    SeededBitSource seed2(2);
    BitString sd = seed2.take(d.size() + 64 - 1);
    CHECK(r.output == toeplitz_extract(d, sd, 64));
  }
  // hopeless trials: everything comes from the bank
  {
    SeededBitSource seed(2), bank(3);
    Pef ones;
    ones.beta = 1.0;
    ones.f.fill(1.0);
    ProtocolResult r = run_protocol_p(flat_trials(26), ones, 40, 0.25, std::exp2(-8), seed, bank);
    CHECK(r.pass);
    CHECK(r.k_banked == 40);
    CHECK(r.output.size() == 40 - 16);
  }
}

TEST_CASE("generation without abort: banked source exhaustion is fatal") {
  std::string p = tmp_path("bank10.txt");
  write_bits(p, BitString(10, 1));
  FileBitSource bank(p);
  SeededBitSource seed(4);
  CHECK_THROWS_AS(
      run_protocol_p(flat_trials(26), quad_pef(), 80, 0.25, std::exp2(-8), seed, bank),
      std::runtime_error);
}

TEST_CASE("schedules must be coherent") {
  std::vector<TrialRecord> trials = flat_trials(8);
  SeededBitSource seed(5);
  Pef a = quad_pef();
  Pef b = quad_pef();
  b.beta = 0.5;
  std::vector<PefSegment> mixed = {{0, a}, {4, b}};
  CHECK_THROWS_WITH_AS(run_protocol_q(trials, mixed, 6, 0.25, 0.25, seed),
                       "protocol: schedule mixes powers", std::invalid_argument);
  CHECK_THROWS_WITH_AS(run_protocol_q(trials, std::vector<PefSegment>{}, 6, 0.25, 0.25, seed),
                       "protocol: empty factor schedule", std::invalid_argument);

  // two equal-power segments apply per trial index
  Pef c = quad_pef();
  c.f[cell_index(z_index(0, 0), c_index(1, 0))] = 2.0;  // log2 F = 1 from trial 4 on
  std::vector<PefSegment> sched = {{0, a}, {4, c}};
  ProtocolResult r = run_protocol_q(trials, sched, 6, 0.25, 0.25, seed);
  // net = (4*2 + 4*1 - 2)/1 = 10
  CHECK(r.net_log2_prob == doctest::Approx(10.0).epsilon(1e-12));
}
