#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pecert/certify.hpp"
#include "pecert/rng.hpp"
#include "pecert/trial.hpp"

namespace pecert {

// One value per bit, 0 or 1. Bit 0 is the first character in file form.
using BitString = std::vector<std::uint8_t>;

struct ExtractorParams {
  std::uint64_t n = 0;      // input bits
  std::uint64_t l = 0;      // seed bits
  double sigma_h = 0.0;     // input min-entropy
  std::uint64_t sigma = 0;  // output bits
  double eps_x = 0.0;
};

// output_j = XOR_i (seed[j+i] AND d[i]), j in [0,m), i in [0,n).
// Word-packed; requires seed length exactly n+m-1 and 1 <= m <= n.
BitString toeplitz_extract(const BitString& d, const BitString& seed, std::uint64_t m);

// Leftover-hash sizing: sigma = floor(sigma_h - 2 log2(1/eps_x)), seed n+sigma-1.
ExtractorParams toeplitz_params(std::uint64_t n, double sigma_h, double eps_x);

struct TmpsParams {
  double sigma_h = 0.0;
  std::uint64_t l = 0;
};

// Parameter calculator for the reference construction; no extraction here.
TmpsParams tmps_params(std::uint64_t sigma, double eps_x, std::uint64_t n);

struct ChainSoundness {
  double basic = 0.0;     // eps_x + 2 eps_h + delta
  double improved = 0.0;  // eps_x + (eps_h + delta)/kappa, conditional on passing
};

ChainSoundness chain_soundness(double eps_x, double eps_h, double delta, double kappa = 1.0);

class BitSource {
 public:
  virtual ~BitSource() = default;
  virtual std::uint8_t next() = 0;
  virtual std::string provenance() const = 0;
  BitString take(std::uint64_t n);
};

class SeededBitSource final : public BitSource {
 public:
  explicit SeededBitSource(std::uint64_t seed) : rng_(seed), seed_(seed) {}
  std::uint8_t next() override { return static_cast<std::uint8_t>(rng_.bit()); }
  std::string provenance() const override;

 private:
  SplitMix64 rng_;
  std::uint64_t seed_;
};

// Consumes ASCII '0'/'1' characters from a file (newlines skipped); throws
// once exhausted.
class FileBitSource final : public BitSource {
 public:
  explicit FileBitSource(const std::string& path);
  std::uint8_t next() override;
  std::string provenance() const override { return "file:" + path_; }

 private:
  BitString bits_;
  std::size_t pos_ = 0;
  std::string path_;
};

struct ProtocolResult {
  bool pass = false;
  BitString output;
  BitString seed;
  std::uint64_t k_banked = 0;
  std::uint64_t sigma = 0;
  std::uint64_t sigma_h = 0;
  double eps_h = 0.0;
  double eps_x = 0.0;
  double net_log2_prob = 0.0;
  std::string seed_provenance;
};

// Generation with abort: certifies the trials against the factor schedule,
// fails (empty outputs, no seed drawn) unless the net log2-prob reaches
// sigma_h, else extracts sigma bits from the outcome bits (a then b per
// trial). Extractor input entropy is -log2(2^-sigma_h + 2^-n_bits).
ProtocolResult run_protocol_q(const std::vector<TrialRecord>& trials,
                              const std::vector<PefSegment>& schedule, std::uint64_t sigma_h,
                              double eps_h, double eps_x, BitSource& seed_source);
ProtocolResult run_protocol_q(const std::vector<TrialRecord>& trials, const Pef& pef,
                              std::uint64_t sigma_h, double eps_h, double eps_x,
                              BitSource& seed_source);

// Generation without abort: tops up the shortfall k = ceil(sigma_h - net)
// from the banked source (clamped to [0, sigma_h]) and pads with zeros to a
// fixed input length n_bits + sigma_h at min-entropy sigma_h.
ProtocolResult run_protocol_p(const std::vector<TrialRecord>& trials,
                              const std::vector<PefSegment>& schedule, std::uint64_t sigma_h,
                              double eps_h, double eps_x, BitSource& seed_source,
                              BitSource& banked_source);
ProtocolResult run_protocol_p(const std::vector<TrialRecord>& trials, const Pef& pef,
                              std::uint64_t sigma_h, double eps_h, double eps_x,
                              BitSource& seed_source, BitSource& banked_source);

}  // namespace pecert
