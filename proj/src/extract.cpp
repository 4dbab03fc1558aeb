#include "pecert/extract.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace pecert {

namespace {

constexpr double kLn2 = 0.693147180559945309;

double schedule_net(const std::vector<TrialRecord>& trials,
                    const std::vector<PefSegment>& schedule, double eps_h) {
  if (schedule.empty()) throw std::invalid_argument("protocol: empty factor schedule");
  for (const PefSegment& seg : schedule)
    if (seg.pef.beta != schedule[0].pef.beta)
      throw std::invalid_argument("protocol: schedule mixes powers");
  if (trials.empty()) throw std::invalid_argument("protocol: no trials");
  CertState state = new_session(schedule[0].pef.beta, eps_h, trials.size());
  size_t seg = 0;
  for (std::uint64_t i = 0; i < trials.size(); ++i) {
    while (seg + 1 < schedule.size() && schedule[seg + 1].start <= i) ++seg;
    accumulate(state, trials[i], schedule[seg].pef);
  }
  return report(state).net_log2_prob;
}

BitString outcome_bits(const std::vector<TrialRecord>& trials) {
  BitString d;
  d.reserve(2 * trials.size());
  for (const TrialRecord& tr : trials) {
    d.push_back(tr.a);
    d.push_back(tr.b);
  }
  return d;
}

}  // namespace

BitString toeplitz_extract(const BitString& d, const BitString& seed, std::uint64_t m) {
  const std::uint64_t n = d.size();
  if (m < 1 || m > n) throw std::invalid_argument("toeplitz_extract: need 1 <= m <= n");
  if (seed.size() != n + m - 1)
    throw std::invalid_argument("toeplitz_extract: seed must hold n+m-1 bits");
  const std::uint64_t nw = (n + 63) / 64;
  std::vector<std::uint64_t> dw(nw, 0), sw((seed.size() + 63) / 64 + 1, 0);
  for (std::uint64_t i = 0; i < n; ++i)
    if (d[i] & 1) dw[i >> 6] |= 1ull << (i & 63);
  for (std::uint64_t i = 0; i < seed.size(); ++i)
    if (seed[i] & 1) sw[i >> 6] |= 1ull << (i & 63);
  BitString out(m);
  for (std::uint64_t j = 0; j < m; ++j) {
    const std::uint64_t q = j >> 6;
    const int rb = static_cast<int>(j & 63);
    std::uint64_t acc = 0;
    for (std::uint64_t w = 0; w < nw; ++w) {
      std::uint64_t s = sw[q + w] >> rb;
      if (rb) s |= sw[q + w + 1] << (64 - rb);
      acc ^= s & dw[w];
    }
    out[j] = static_cast<std::uint8_t>(std::popcount(acc) & 1);
  }
  return out;
}

ExtractorParams toeplitz_params(std::uint64_t n, double sigma_h, double eps_x) {
  if (!(eps_x > 0.0 && eps_x <= 1.0))
    throw std::invalid_argument("toeplitz_params: eps_x must be in (0,1]");
  if (!(sigma_h <= static_cast<double>(n)))
    throw std::invalid_argument("toeplitz_params: sigma_h exceeds the input length");
  double sigma = std::floor(sigma_h - 2.0 * std::log2(1.0 / eps_x));
  if (sigma < 1.0)
    throw std::invalid_argument("toeplitz_params: insufficient entropy for one output bit");
  ExtractorParams p;
  p.n = n;
  p.sigma_h = sigma_h;
  p.sigma = static_cast<std::uint64_t>(sigma);
  p.l = n + p.sigma - 1;
  p.eps_x = eps_x;
  return p;
}

TmpsParams tmps_params(std::uint64_t sigma, double eps_x, std::uint64_t n) {
  if (sigma < 2) throw std::invalid_argument("tmps_params: sigma must be >= 2");
  if (!(eps_x > 0.0 && eps_x <= 1.0))
    throw std::invalid_argument("tmps_params: eps_x must be in (0,1]");
  double log2_sigma = std::log2(static_cast<double>(sigma));
  double log2_inv_eps = std::log2(1.0 / eps_x);
  TmpsParams t;
  t.sigma_h = static_cast<double>(sigma) + 4.0 * log2_sigma + 4.0 * log2_inv_eps + 6.0;
  double inner = 2.0 + std::log2(static_cast<double>(n)) + 2.0 * log2_sigma + 2.0 * log2_inv_eps;
  t.l = static_cast<std::uint64_t>(std::ceil(36.0 * log2_sigma * inner * inner));
  return t;
}

ChainSoundness chain_soundness(double eps_x, double eps_h, double delta, double kappa) {
  if (!(eps_x > 0.0 && eps_x < 1.0) || eps_h < 0.0 || eps_h >= 1.0 || delta < 0.0 || delta >= 1.0)
    throw std::invalid_argument("chain_soundness: error terms must be in (0,1)");
  if (!(kappa > 0.0 && kappa <= 1.0))
    throw std::invalid_argument("chain_soundness: kappa must be in (0,1]");
  ChainSoundness c;
  c.basic = eps_x + 2.0 * eps_h + delta;
  c.improved = eps_x + (eps_h + delta) / kappa;
  return c;
}

BitString BitSource::take(std::uint64_t n) {
  BitString bits(n);
  for (std::uint64_t i = 0; i < n; ++i) bits[i] = next();
  return bits;
}

std::string SeededBitSource::provenance() const {
  return std::string(kRngAlgorithm) + ":" + std::to_string(seed_);
}

FileBitSource::FileBitSource(const std::string& path) : path_(path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("FileBitSource: cannot open " + path);
  char ch;
  while (in.get(ch)) {
    if (ch == '0' || ch == '1')
      bits_.push_back(static_cast<std::uint8_t>(ch - '0'));
    else if (ch != '\n' && ch != '\r' && ch != ' ' && ch != '\t')
      throw std::runtime_error("FileBitSource: non-bit character in " + path);
  }
}

std::uint8_t FileBitSource::next() {
  if (pos_ >= bits_.size()) throw std::runtime_error("FileBitSource: exhausted " + path_);
  return bits_[pos_++];
}

ProtocolResult run_protocol_q(const std::vector<TrialRecord>& trials,
                              const std::vector<PefSegment>& schedule, std::uint64_t sigma_h,
                              double eps_h, double eps_x, BitSource& seed_source) {
  const std::uint64_t n_bits = 2 * trials.size();
  if (sigma_h < 1 || sigma_h > n_bits)
    throw std::invalid_argument("run_protocol_q: sigma_h must be in [1, input bits]");
  // 2^-n_bits is the chance of guessing the outcomes outright; the extractor
  // only gets the combined entropy
  double sigma_in = static_cast<double>(sigma_h) -
                    std::log1p(std::exp2(static_cast<double>(sigma_h) -
                                         static_cast<double>(n_bits))) /
                        kLn2;
  ExtractorParams params = toeplitz_params(n_bits, sigma_in, eps_x);

  ProtocolResult res;
  res.sigma = params.sigma;
  res.sigma_h = sigma_h;
  res.eps_h = eps_h;
  res.eps_x = eps_x;
  res.seed_provenance = seed_source.provenance();
  res.net_log2_prob = schedule_net(trials, schedule, eps_h);
  res.pass = res.net_log2_prob >= static_cast<double>(sigma_h);
  if (!res.pass) return res;  // empty output and seed
  res.seed = seed_source.take(params.l);
  res.output = toeplitz_extract(outcome_bits(trials), res.seed, params.sigma);
  return res;
}

ProtocolResult run_protocol_q(const std::vector<TrialRecord>& trials, const Pef& pef,
                              std::uint64_t sigma_h, double eps_h, double eps_x,
                              BitSource& seed_source) {
  return run_protocol_q(trials, std::vector<PefSegment>{{0, pef}}, sigma_h, eps_h, eps_x,
                        seed_source);
}

ProtocolResult run_protocol_p(const std::vector<TrialRecord>& trials,
                              const std::vector<PefSegment>& schedule, std::uint64_t sigma_h,
                              double eps_h, double eps_x, BitSource& seed_source,
                              BitSource& banked_source) {
  if (sigma_h < 1) throw std::invalid_argument("run_protocol_p: sigma_h must be >= 1");
  const std::uint64_t n_in = 2 * trials.size() + sigma_h;  // fixed before the trials run
  ExtractorParams params = toeplitz_params(n_in, static_cast<double>(sigma_h), eps_x);

  ProtocolResult res;
  res.sigma = params.sigma;
  res.sigma_h = sigma_h;
  res.eps_h = eps_h;
  res.eps_x = eps_x;
  res.seed_provenance = seed_source.provenance();
  res.net_log2_prob = schedule_net(trials, schedule, eps_h);

  double shortfall = static_cast<double>(sigma_h) - std::max(0.0, res.net_log2_prob);
  std::uint64_t k = 0;
  if (shortfall > 0.0)
    k = std::min<std::uint64_t>(sigma_h, static_cast<std::uint64_t>(std::ceil(shortfall)));
  res.k_banked = k;

  BitString d = outcome_bits(trials);
  BitString banked = banked_source.take(k);
  d.insert(d.end(), banked.begin(), banked.end());
  d.resize(n_in, 0);  // zero padding keeps the extractor geometry fixed
  res.seed = seed_source.take(params.l);
  res.output = toeplitz_extract(d, res.seed, params.sigma);
  res.pass = true;
  return res;
}

ProtocolResult run_protocol_p(const std::vector<TrialRecord>& trials, const Pef& pef,
                              std::uint64_t sigma_h, double eps_h, double eps_x,
                              BitSource& seed_source, BitSource& banked_source) {
  return run_protocol_p(trials, std::vector<PefSegment>{{0, pef}}, sigma_h, eps_h, eps_x,
                        seed_source, banked_source);
}

}  // namespace pecert
