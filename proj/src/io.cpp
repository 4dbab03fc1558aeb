#include "pecert/io.hpp"

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace pecert {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, const std::string& path, std::uint64_t line) {
  const char* begin = s.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') throw IoError(path, line, "expected a number, got '" + s + "'");
  return v;
}

int parse_bit(const std::string& s, const std::string& path, std::uint64_t line) {
  if (s == "0") return 0;
  if (s == "1") return 1;
  throw IoError(path, line, "expected 0 or 1, got '" + s + "'");
}

// Yields (line number, content) for nonblank non-comment lines.
template <typename Fn>
void for_each_data_line(const std::string& path, Fn fn) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open");
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos || line[i] == '#') continue;
    fn(lineno, line);
  }
}

// lexicographic (x,y,a,b) index of a canonical cell, and back
int lex_to_cell(int i) {
  int x = (i >> 3) & 1, y = (i >> 2) & 1, a = (i >> 1) & 1, b = i & 1;
  return cell_index(z_index(x, y), c_index(a, b));
}

}  // namespace

ConditionalDistribution read_distribution(const std::string& path) {
  ConditionalDistribution cond;
  int row = 0;
  for_each_data_line(path, [&](std::uint64_t lineno, const std::string& line) {
    if (row >= kSettings) throw IoError(path, lineno, "more than 4 distribution rows");
    std::vector<std::string> fields = split_commas(line);
    if (fields.size() != kOutcomes) throw IoError(path, lineno, "expected 4 comma-separated values");
    for (int c = 0; c < kOutcomes; ++c) {
      double v = parse_double(fields[c], path, lineno);
      if (v < 0.0 || v > 1.0) throw IoError(path, lineno, "probability outside [0,1]");
      cond.at(row, c) = v;
    }
    ++row;
  });
  if (row != kSettings) throw IoError(path, "expected 4 distribution rows, got " + std::to_string(row));
  if (!cond.rows_normalized(1e-9)) throw IoError(path, "rows do not sum to 1");
  return cond;
}

void write_distribution(const std::string& path, const ConditionalDistribution& cond) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot write");
  for (int z = 0; z < kSettings; ++z) {
    for (int c = 0; c < kOutcomes; ++c) out << (c ? "," : "") << fmt_double(cond.at(z, c));
    out << '\n';
  }
}

std::vector<TrialRecord> read_trials(const std::string& path) {
  std::vector<TrialRecord> trials;
  for_each_data_line(path, [&](std::uint64_t lineno, const std::string& line) {
    std::vector<std::string> fields = split_commas(line);
    if (fields.size() != 4 && fields.size() != 5)
      throw IoError(path, lineno, "expected x,y,a,b or x,y,a,b,t");
    TrialRecord tr;
    tr.x = static_cast<std::uint8_t>(parse_bit(fields[0], path, lineno));
    tr.y = static_cast<std::uint8_t>(parse_bit(fields[1], path, lineno));
    tr.a = static_cast<std::uint8_t>(parse_bit(fields[2], path, lineno));
    tr.b = static_cast<std::uint8_t>(parse_bit(fields[3], path, lineno));
    if (fields.size() == 5) tr.t = static_cast<std::int8_t>(parse_bit(fields[4], path, lineno));
    trials.push_back(tr);
  });
  return trials;
}

void write_trials(const std::string& path, const std::vector<TrialRecord>& trials) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot write");
  for (const TrialRecord& tr : trials) {
    out << int(tr.x) << ',' << int(tr.y) << ',' << int(tr.a) << ',' << int(tr.b);
    if (tr.t >= 0) out << ',' << int(tr.t);
    out << '\n';
  }
}

FrequencyTable read_counts(const std::string& path) {
  FrequencyTable table;
  for_each_data_line(path, [&](std::uint64_t lineno, const std::string& line) {
    std::vector<std::string> fields = split_commas(line);
    if (fields.size() != 5) throw IoError(path, lineno, "expected x,y,a,b,count");
    int x = parse_bit(fields[0], path, lineno), y = parse_bit(fields[1], path, lineno);
    int a = parse_bit(fields[2], path, lineno), b = parse_bit(fields[3], path, lineno);
    char* end = nullptr;
    unsigned long long n = std::strtoull(fields[4].c_str(), &end, 10);
    if (end == fields[4].c_str() || *end != '\0')
      throw IoError(path, lineno, "expected a count, got '" + fields[4] + "'");
    table.add(x, y, a, b, n);
  });
  return table;
}

void write_counts(const std::string& path, const FrequencyTable& counts) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot write");
  for (int i = 0; i < kCells; ++i) {
    int x = (i >> 3) & 1, y = (i >> 2) & 1, a = (i >> 1) & 1, b = i & 1;
    out << x << ',' << y << ',' << a << ',' << b << ',' << counts.counts[lex_to_cell(i)] << '\n';
  }
}

Pef read_pef(const std::string& path) {
  std::vector<double> values;
  for_each_data_line(path, [&](std::uint64_t lineno, const std::string& line) {
    for (const std::string& f : split_commas(line))
      if (!f.empty()) values.push_back(parse_double(f, path, lineno));
  });
  if (values.size() != 1 + kCells)
    throw IoError(path, "expected 17 values (power then 16 entries), got " +
                            std::to_string(values.size()));
  Pef pef;
  pef.beta = values[0];
  for (int i = 0; i < kCells; ++i) {
    double v = values[1 + i];
    if (v < 0.0) throw IoError(path, "negative factor entry");
    pef.f[lex_to_cell(i)] = v;
  }
  return pef;
}

void write_pef(const std::string& path, const Pef& pef) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot write");
  out << fmt_double(pef.beta);
  for (int i = 0; i < kCells; ++i) out << ',' << fmt_double(pef.f[lex_to_cell(i)]);
  out << '\n';
}

CertState read_checkpoint(const std::string& path) {
  CertState st;
  bool has_n = false, has_beta = false, has_eps = false, has_t = false, has_tmax = false;
  bool has_nmax = false;
  for_each_data_line(path, [&](std::uint64_t lineno, const std::string& line) {
    size_t eq = line.find('=');
    if (eq == std::string::npos) throw IoError(path, lineno, "expected key=value");
    std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
    size_t i = val.find_first_not_of(" \t");
    val = i == std::string::npos ? "" : val.substr(i);
    if (key == "n") {
      st.n = std::strtoull(val.c_str(), nullptr, 10);
      has_n = true;
    } else if (key == "n_max") {
      st.n_max = std::strtoull(val.c_str(), nullptr, 10);
      has_nmax = true;
    } else if (key == "beta") {
      st.beta = parse_double(val, path, lineno);
      has_beta = true;
    } else if (key == "eps_h") {
      st.eps_h = parse_double(val, path, lineno);
      has_eps = true;
    } else if (key == "log2_t") {
      st.log2_t = parse_double(val, path, lineno);
      has_t = true;
    } else if (key == "log2_t_max") {
      st.log2_t_max = parse_double(val, path, lineno);
      has_tmax = true;
    } else if (key == "threshold_q") {
      st.threshold_q = parse_double(val, path, lineno);
    } else if (key == "frozen") {
      st.frozen = val == "1";
    } else if (key == "failed") {
      st.failed = val == "1";
    } else {
      throw IoError(path, lineno, "unknown checkpoint key '" + key + "'");
    }
  });
  if (!(has_n && has_beta && has_eps && has_t && has_tmax))
    throw IoError(path, "checkpoint needs n, beta, eps_h, log2_t, log2_t_max");
  if (!has_nmax) st.n_max = std::numeric_limits<std::uint64_t>::max();
  if (st.log2_t_max < st.log2_t) throw IoError(path, "log2_t_max below log2_t");
  return st;
}

void write_checkpoint(const std::string& path, const CertState& state) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot write");
  out << "n=" << state.n << '\n';
  out << "beta=" << fmt_double(state.beta) << '\n';
  out << "eps_h=" << fmt_double(state.eps_h) << '\n';
  out << "log2_t=" << fmt_double(state.log2_t) << '\n';
  out << "log2_t_max=" << fmt_double(state.log2_t_max) << '\n';
  out << "n_max=" << state.n_max << '\n';
  if (state.threshold_q) out << "threshold_q=" << fmt_double(*state.threshold_q) << '\n';
  out << "frozen=" << (state.frozen ? 1 : 0) << '\n';
  out << "failed=" << (state.failed ? 1 : 0) << '\n';
}

BitString read_bits(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open");
  BitString bits;
  char ch;
  std::uint64_t lineno = 1;
  while (in.get(ch)) {
    if (ch == '0' || ch == '1')
      bits.push_back(static_cast<std::uint8_t>(ch - '0'));
    else if (ch == '\n')
      ++lineno;
    else if (!std::isspace(static_cast<unsigned char>(ch)))
      throw IoError(path, lineno, "non-bit character");
  }
  return bits;
}

void write_bits(const std::string& path, const BitString& bits) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot write");
  for (std::uint8_t b : bits) out << char('0' + (b & 1));
  out << '\n';
}

void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& items) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot write");
  for (const auto& [key, value] : items) out << key << " = " << value << '\n';
}

}  // namespace pecert
