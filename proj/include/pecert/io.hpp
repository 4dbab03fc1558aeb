#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pecert/bellmodel.hpp"
#include "pecert/certify.hpp"
#include "pecert/extract.hpp"
#include "pecert/mlfit.hpp"
#include "pecert/pefopt.hpp"
#include "pecert/trial.hpp"

namespace pecert {

// File errors carry path and, where applicable, the 1-based line number.
class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what) {}
  IoError(const std::string& path, std::uint64_t line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what) {}
};

// Distribution files: 4 lines x 4 comma-separated probabilities, rows xy in
// (00,10,01,11), columns ab in the same order. '#' lines and blanks skipped.
ConditionalDistribution read_distribution(const std::string& path);
void write_distribution(const std::string& path, const ConditionalDistribution& cond);

// Trial files: one "x,y,a,b" or "x,y,a,b,t" line per trial, digits in {0,1}.
std::vector<TrialRecord> read_trials(const std::string& path);
void write_trials(const std::string& path, const std::vector<TrialRecord>& trials);

// Count files: lines "x,y,a,b,count"; duplicates accumulate.
FrequencyTable read_counts(const std::string& path);
void write_counts(const std::string& path, const FrequencyTable& counts);

// Factor files: 17 comma-separated values, the power followed by the 16
// entries in (x,y,a,b) lexicographic order.
Pef read_pef(const std::string& path);
void write_pef(const std::string& path, const Pef& pef);

// Session checkpoints: key=value decimal text (n, beta, eps_h, log2_t,
// log2_t_max, plus the optional session fields when present).
CertState read_checkpoint(const std::string& path);
void write_checkpoint(const std::string& path, const CertState& state);

// Bit files: ASCII '0'/'1', whitespace ignored.
BitString read_bits(const std::string& path);
void write_bits(const std::string& path, const BitString& bits);

// Key-value report, one "key = value" line each, UTF-8.
void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& items);

}  // namespace pecert
