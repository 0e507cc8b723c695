#include "sparsebayes/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sparsebayes::harness {

namespace {

std::string fmt(double v) {
  char buf[40];
  snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> tab_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, '\t')) out.push_back(cur);
  return out;
}

}  // namespace

void write_summary(std::ostream& out, const PosteriorSummary& s) {
  out << "# sparsebayes summary\n";
  out << "# algorithm: " << s.algorithm << '\n';
  out << "# prior: " << s.prior << '\n';
  out << "# slab: " << s.slab << '\n';
  out << "# n: " << s.n << '\n';
  out << "# tracked: " << (s.tracked ? 1 : 0) << '\n';
  out << "# threshold: " << fmt(s.threshold) << '\n';
  out << "# log_marginal: " << fmt(s.log_marginal) << '\n';
  out << "# max_interval_width: " << fmt(s.max_interval_width) << '\n';
  if (s.epsilon) out << "# epsilon: " << fmt(*s.epsilon) << '\n';
  if (s.seed) out << "# seed: " << *s.seed << '\n';
  out << "# runtime_seconds: " << fmt(s.runtime_seconds) << '\n';
  out << "index\ty\tq\tq_lo\tq_hi\tmean\tmedian\tselected\n";
  for (int i = 0; i < s.n; ++i) {
    double lo = s.tracked ? s.q_lo[i] : s.q[i];
    double hi = s.tracked ? s.q_hi[i] : s.q[i];
    out << (i + 1) << '\t' << fmt(s.y[i]) << '\t' << fmt(s.q[i]) << '\t' << fmt(lo) << '\t'
        << fmt(hi) << '\t' << fmt(s.mean[i]) << '\t' << fmt(s.median[i]) << '\t'
        << (s.selected[i] ? 1 : 0) << '\n';
  }
}

PosteriorSummary read_summary(std::istream& in) {
  PosteriorSummary s;
  std::string line;
  bool saw_columns = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto colon = line.find(": ");
      if (colon == std::string::npos) continue;
      std::string key = line.substr(2, colon - 2);
      std::string val = line.substr(colon + 2);
      if (key == "algorithm") s.algorithm = val;
      else if (key == "prior") s.prior = val;
      else if (key == "slab") s.slab = val;
      else if (key == "n") s.n = std::stoi(val);
      else if (key == "tracked") s.tracked = val == "1";
      else if (key == "threshold") s.threshold = std::stod(val);
      else if (key == "log_marginal") s.log_marginal = std::stod(val);
      else if (key == "max_interval_width") s.max_interval_width = std::stod(val);
      else if (key == "epsilon") s.epsilon = std::stod(val);
      else if (key == "seed") s.seed = std::stoull(val);
      else if (key == "runtime_seconds") s.runtime_seconds = std::stod(val);
      continue;
    }
    if (!saw_columns) {  // column names row
      saw_columns = true;
      continue;
    }
    auto f = tab_fields(line);
    if (f.size() != 8) throw DomainError("summary: malformed row");
    s.y.push_back(std::stod(f[1]));
    s.q.push_back(std::stod(f[2]));
    s.q_lo.push_back(std::stod(f[3]));
    s.q_hi.push_back(std::stod(f[4]));
    s.mean.push_back(std::stod(f[5]));
    s.median.push_back(std::stod(f[6]));
    s.selected.push_back(f[7] == "1");
  }
  if (static_cast<int>(s.y.size()) != s.n) throw DomainError("summary: row count mismatch");
  if (!s.tracked) {
    s.q_lo.clear();
    s.q_hi.clear();
  }
  return s;
}

void write_summary_file(const std::string& path, const PosteriorSummary& s) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot open " + path);
  write_summary(out, s);
}

PosteriorSummary read_summary_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  return read_summary(in);
}

std::vector<double> read_data_vector(std::istream& in) {
  std::vector<double> v;
  std::string line;
  bool skipped_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::vector<std::string> fields;
    std::string f;
    while (ss >> f) fields.push_back(f);
    if (fields.empty()) continue;
    try {
      if (fields.size() == 1) {
        v.push_back(std::stod(fields[0]));
      } else {
        v.push_back(std::stod(fields[1]));
      }
    } catch (const std::exception&) {
      if (!skipped_header && v.empty()) {
        skipped_header = true;  // tolerate a single column-name row
        continue;
      }
      throw DomainError("data: non-numeric value '" + line + "'");
    }
  }
  return v;
}

std::vector<double> read_data_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  return read_data_vector(in);
}

void write_vector(std::ostream& out, const std::vector<double>& v) {
  for (double x : v) out << fmt(x) << '\n';
}

void write_simulated(std::ostream& out, const SimulatedData& d) {
  out << "# simulated data: s = " << d.s << '\n';
  out << "# index\ty\ttheta\tin_support\n";
  for (size_t i = 0; i < d.y.size(); ++i)
    out << (i + 1) << '\t' << fmt(d.y[i]) << '\t' << fmt(d.theta[i]) << '\t'
        << (d.support[i] ? 1 : 0) << '\n';
}

SimulatedData read_simulated(std::istream& in) {
  SimulatedData d;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto f = tab_fields(line);
    if (f.size() != 4) throw DomainError("simulated data: malformed row");
    d.y.push_back(std::stod(f[1]));
    d.theta.push_back(std::stod(f[2]));
    d.support.push_back(f[3] == "1");
  }
  d.s = 0;
  for (bool b : d.support) d.s += b ? 1 : 0;
  return d;
}

}  // namespace sparsebayes::harness
