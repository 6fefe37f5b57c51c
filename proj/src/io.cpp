// SPDX-License-Identifier: Apache-2.0
#include "emur/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "emur/errors.hpp"

namespace emur {

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_real(const std::string &text, double &out) {
  if (text.empty())
    return false;
  errno = 0;
  char *end = nullptr;
  out = std::strtod(text.c_str(), &end);
  return errno == 0 && end == text.c_str() + text.size() && std::isfinite(out);
}

bool parse_int(const std::string &text, long long &out) {
  if (text.empty())
    return false;
  errno = 0;
  char *end = nullptr;
  out = std::strtoll(text.c_str(), &end, 10);
  return errno == 0 && end == text.c_str() + text.size();
}

bool parse_u64(const std::string &text, std::uint64_t &out) {
  if (text.empty() || text.front() == '-' || text.front() == '+')
    return false;
  errno = 0;
  char *end = nullptr;
  out = std::strtoull(text.c_str(), &end, 10);
  return errno == 0 && end == text.c_str() + text.size();
}

std::vector<std::string> split_csv(const std::string &line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

} // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunConfig parse_config(std::istream &in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigurationError("line " + std::to_string(lineno) +
                               ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!kv.emplace(key, value).second)
      throw ConfigurationError(key + ": key given twice");
  }

  static const std::set<std::string> known{
      "mode",    "theta_steps", "t_meas_s",      "i_max_cps",
      "background_cps", "contrast", "seed",      "sys_angle_rad",
      "bootstrap_resamples", "poisson", "sequence", "rng"};
  for (const auto &[key, value] : kv)
    if (!known.count(key))
      throw ConfigurationError(key + ": unknown key");

  RunConfig c;
  const auto mode = kv.find("mode");
  if (mode == kv.end())
    throw ConfigurationError("mode: required key missing");
  if (mode->second == "noise")
    c.mode = Mode::Noise;
  else if (mode->second == "disturbance")
    c.mode = Mode::Disturbance;
  else
    throw ConfigurationError("mode: expected 'noise' or 'disturbance'");

  auto real = [&](const char *key, double &dst) {
    if (const auto it = kv.find(key); it != kv.end())
      if (!parse_real(it->second, dst))
        throw ConfigurationError(std::string(key) + ": not a number");
  };
  auto boolean = [&](const char *key, bool &dst) {
    if (const auto it = kv.find(key); it != kv.end()) {
      if (it->second == "true")
        dst = true;
      else if (it->second == "false")
        dst = false;
      else
        throw ConfigurationError(std::string(key) + ": expected true or false");
    }
  };

  long long steps = 17;
  if (const auto it = kv.find("theta_steps"); it != kv.end())
    if (!parse_int(it->second, steps) || steps < 1 || steps > 100000)
      throw ConfigurationError("theta_steps: expected an integer in [1, 100000]");
  c.theta_grid = quarter_grid(static_cast<int>(steps));

  real("t_meas_s", c.t_meas_s);
  real("i_max_cps", c.i_max_cps);
  real("background_cps", c.background_cps);
  real("contrast", c.contrast);
  real("sys_angle_rad", c.sys_angle_rad);
  boolean("poisson", c.poisson);

  if (const auto it = kv.find("seed"); it != kv.end())
    if (!parse_u64(it->second, c.seed))
      throw ConfigurationError("seed: expected an unsigned 64-bit integer");
  if (const auto it = kv.find("bootstrap_resamples"); it != kv.end()) {
    long long n = 0;
    if (!parse_int(it->second, n) || n < 0 || n > 100000000)
      throw ConfigurationError("bootstrap_resamples: expected an integer");
    c.bootstrap_resamples = static_cast<int>(n);
  }
  if (const auto it = kv.find("sequence"); it != kv.end()) {
    if (it->second == "random")
      c.sequence = SequenceSource::Generated;
    else if (it->second == "replay")
      c.sequence = SequenceSource::Replayed;
    else
      throw ConfigurationError("sequence: expected 'random' or 'replay'");
  }
  if (const auto it = kv.find("rng"); it != kv.end() && it->second != kRngAlgorithm)
    throw ConfigurationError("rng: unsupported generator '" + it->second +
                             "', this build provides '" + kRngAlgorithm + "'");

  c.validate();
  return c;
}

RunConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open config file '" + path + "'", 0);
  return parse_config(in);
}

void write_counts_csv(std::ostream &out, const std::vector<CountRecord> &records) {
  out << kCountsHeader << '\n';
  for (const auto &r : records) {
    out << format_double(r.theta) << ',' << r.input << ',' << r.channel.m << ',';
    if (r.channel.bprime)
      out << *r.channel.bprime;
    out << ',' << format_double(r.counts) << ',' << format_double(r.duration_s)
        << '\n';
  }
}

std::vector<CountRecord> read_counts_csv(std::istream &in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line))
    throw ParseError("empty counts file", 1);
  if (trim(line) != kCountsHeader)
    throw ParseError("expected header '" + std::string(kCountsHeader) + "'", 1);

  std::vector<CountRecord> records;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    const auto f = split_csv(line);
    if (f.size() != 6)
      throw ParseError("expected 6 fields, found " + std::to_string(f.size()), lineno);
    CountRecord r;
    long long input = 0;
    long long m = 0;
    if (!parse_real(f[0], r.theta))
      throw ParseError("bad theta_rad '" + f[0] + "'", lineno);
    if (!parse_int(f[1], input) || (input != 1 && input != -1))
      throw ParseError("input_label must be 1 or -1", lineno);
    if (!parse_int(f[2], m) || m < -1 || m > 1)
      throw ParseError("channel_m must be -1, 0 or 1", lineno);
    r.input = static_cast<int>(input);
    r.channel.m = static_cast<int>(m);
    if (!f[3].empty()) {
      long long bp = 0;
      if (!parse_int(f[3], bp) || (bp != 1 && bp != -1))
        throw ParseError("channel_bprime must be empty, 1 or -1", lineno);
      r.channel.bprime = static_cast<int>(bp);
    }
    if (!parse_real(f[4], r.counts) || r.counts < 0.0)
      throw ParseError("counts must be a non-negative number", lineno);
    if (!parse_real(f[5], r.duration_s) || r.duration_s <= 0.0)
      throw ParseError("duration_s must be positive", lineno);
    records.push_back(r);
  }
  return records;
}

std::vector<FrontierRow> frontier_rows(const Frontier &f) {
  std::vector<FrontierRow> rows;
  for (const auto &p : f.povm)
    rows.push_back({p.theta, "brute-force", p.noise, p.disturbance, p.g_sum,
                    p.buscemi_lhs});
  for (const auto &p : f.projective) {
    const double n = p.closed_noise;
    const double d = p.closed_disturbance;
    rows.push_back({p.theta, "closed-form", n, d, projective_lhs(n, d), n + d});
  }
  return rows;
}

void write_frontier_csv(std::ostream &out, const std::vector<FrontierRow> &rows) {
  out << kFrontierHeader << '\n';
  for (const auto &r : rows)
    out << format_double(r.theta) << ',' << r.source << ',' << format_double(r.noise)
        << ',' << format_double(r.disturbance) << ',' << format_double(r.g_sum) << ','
        << format_double(r.buscemi_lhs) << '\n';
}

void write_frontier_json(std::ostream &out, const std::vector<FrontierRow> &rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto &r : rows)
    j.push_back({{"theta_rad", r.theta},
                 {"source", r.source},
                 {"N_bits", r.noise},
                 {"D_bits", r.disturbance},
                 {"g_sum", r.g_sum},
                 {"buscemi_lhs", r.buscemi_lhs}});
  out << j.dump(2) << '\n';
}

std::vector<EstimateRow> estimate_rows(Mode mode,
                                       const std::vector<PointEstimate> &points) {
  std::vector<EstimateRow> rows;
  for (const auto &p : points)
    rows.push_back({p.theta, mode == Mode::Noise ? "N" : "D", p.estimate});
  return rows;
}

void write_estimates_csv(std::ostream &out, const std::vector<EstimateRow> &rows) {
  out << kEstimatesHeader << '\n';
  for (const auto &r : rows)
    out << format_double(r.theta) << ',' << r.quantity << ','
        << format_double(r.estimate.value) << ','
        << format_double(r.estimate.sigma_stat) << ','
        << format_double(r.estimate.sigma_sys) << '\n';
}

void write_estimates_json(std::ostream &out, const std::vector<EstimateRow> &rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto &r : rows)
    j.push_back({{"theta_rad", r.theta},
                 {"quantity", r.quantity},
                 {"value_bits", r.estimate.value},
                 {"sigma_stat_bits", r.estimate.sigma_stat},
                 {"sigma_sys_bits", r.estimate.sigma_sys}});
  out << j.dump(2) << '\n';
}

} // namespace emur
