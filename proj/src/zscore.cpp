#include "sparsebayes/zscore.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sparsebayes/lognum.hpp"

namespace sparsebayes::harness {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  char sep = line.find('\t') != std::string::npos ? '\t' : ',';
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

ExpressionMatrix read_matrix(std::istream& in) {
  ExpressionMatrix m;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_fields(line);
    if (!have_header) {
      if (fields.size() < 2) throw DomainError("matrix: header needs patient columns");
      m.patient_ids.assign(fields.begin() + 1, fields.end());
      have_header = true;
      continue;
    }
    if (fields.size() != m.patient_ids.size() + 1)
      throw DomainError("matrix: ragged row for gene " + fields[0]);
    m.gene_ids.push_back(trim(fields[0]));
    std::vector<double> row(m.patient_ids.size());
    for (size_t j = 1; j < fields.size(); ++j) {
      try {
        row[j - 1] = std::stod(fields[j]);
      } catch (const std::exception&) {
        row[j - 1] = std::numeric_limits<double>::quiet_NaN();
      }
    }
    m.values.push_back(std::move(row));
  }
  if (!have_header) throw DomainError("matrix: empty input");
  return m;
}

ExpressionMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("matrix: cannot open " + path);
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const ExpressionMatrix& m) {
  out << "gene";
  for (const auto& p : m.patient_ids) out << '\t' << p;
  out << '\n';
  char buf[64];
  for (int g = 0; g < m.genes(); ++g) {
    out << m.gene_ids[g];
    for (int j = 0; j < m.patients(); ++j) {
      snprintf(buf, sizeof buf, "%.17g", m.values[g][j]);
      out << '\t' << buf;
    }
    out << '\n';
  }
}

std::vector<double> z_scores(const ExpressionMatrix& group_a, const ExpressionMatrix& group_b) {
  if (group_a.genes() != group_b.genes() || group_a.gene_ids != group_b.gene_ids)
    throw DomainError("z_scores: gene dimensions differ");
  const int n = group_a.genes();
  const int na = group_a.patients(), nb = group_b.patients();
  if (na < 2 || nb < 2) throw DomainError("z_scores: need at least two patients per group");

  auto normalized_logs = [n](const ExpressionMatrix& m) {
    std::vector<std::vector<double>> logs(n, std::vector<double>(m.patients()));
    for (int j = 0; j < m.patients(); ++j) {
      double total = 0;
      for (int g = 0; g < n; ++g) {
        double v = m.values[g][j];
        if (!(v > 0)) throw DomainError("z_scores: nonpositive intensity");
        total += v;
      }
      for (int g = 0; g < n; ++g) logs[g][j] = std::log(m.values[g][j] / total);
    }
    return logs;
  };

  auto la = normalized_logs(group_a), lb = normalized_logs(group_b);
  std::vector<double> z(n);
  for (int g = 0; g < n; ++g) {
    auto stats = [](const std::vector<double>& xs) {
      double mean = 0;
      for (double x : xs) mean += x;
      mean /= static_cast<double>(xs.size());
      double var = 0;
      for (double x : xs) var += (x - mean) * (x - mean);
      var /= static_cast<double>(xs.size() - 1);
      return std::pair<double, double>(mean, var);
    };
    auto [ma, va] = stats(la[g]);
    auto [mb, vb] = stats(lb[g]);
    double denom = std::sqrt(va / na + vb / nb);
    double num = ma - mb;
    if (denom == 0) {
      if (num == 0) {
        z[g] = 0;
        continue;
      }
      throw DomainError("z_scores: zero variance with nonzero difference");
    }
    z[g] = num / denom;
  }
  return z;
}

std::pair<ExpressionMatrix, ExpressionMatrix> soft_split(const std::string& path,
                                                         const std::string& subset_type,
                                                         const std::string& label_a,
                                                         const std::string& label_b) {
  std::ifstream in(path);
  if (!in) throw DomainError("soft: cannot open " + path);

  struct Subset {
    std::string description, type;
    std::vector<std::string> samples;
  };
  std::vector<Subset> subsets;
  ExpressionMatrix table;
  bool in_table = false, table_header = false;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line == "!dataset_table_begin") {
      in_table = true;
      table_header = false;
      continue;
    }
    if (line == "!dataset_table_end") {
      in_table = false;
      continue;
    }
    if (in_table) {
      auto fields = split_fields(line);
      if (!table_header) {
        if (fields.size() < 3) throw DomainError("soft: malformed table header");
        table.patient_ids.assign(fields.begin() + 2, fields.end());
        table_header = true;
        continue;
      }
      if (fields.size() != table.patient_ids.size() + 2) continue;  // annotation row
      table.gene_ids.push_back(trim(fields[0]));
      std::vector<double> row(table.patient_ids.size());
      for (size_t j = 2; j < fields.size(); ++j) {
        try {
          row[j - 2] = std::stod(fields[j]);
        } catch (const std::exception&) {
          row[j - 2] = std::numeric_limits<double>::quiet_NaN();
        }
      }
      table.values.push_back(std::move(row));
      continue;
    }
    if (line.rfind("^SUBSET", 0) == 0) {
      subsets.emplace_back();
      continue;
    }
    auto keyval = [&line](const char* key) -> std::string {
      std::string prefix = std::string(key) + " = ";
      if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
      return "";
    };
    if (!subsets.empty()) {
      if (auto v = keyval("!subset_description"); !v.empty()) subsets.back().description = v;
      if (auto v = keyval("!subset_type"); !v.empty()) subsets.back().type = v;
      if (auto v = keyval("!subset_sample_id"); !v.empty()) {
        std::istringstream ss(v);
        std::string id;
        while (std::getline(ss, id, ',')) subsets.back().samples.push_back(trim(id));
      }
    }
  }

  auto find_samples = [&](const std::string& label) {
    for (const auto& s : subsets)
      if (s.type == subset_type && s.description == label) return s.samples;
    throw DomainError("soft: no subset '" + label + "' of type '" + subset_type + "'");
  };

  auto project = [&](const std::vector<std::string>& samples) {
    ExpressionMatrix m;
    m.gene_ids = table.gene_ids;
    std::vector<int> cols;
    for (const auto& id : samples) {
      auto it = std::find(table.patient_ids.begin(), table.patient_ids.end(), id);
      if (it == table.patient_ids.end()) throw DomainError("soft: sample " + id + " missing");
      cols.push_back(static_cast<int>(it - table.patient_ids.begin()));
      m.patient_ids.push_back(id);
    }
    m.values.resize(table.genes());
    for (int g = 0; g < table.genes(); ++g) {
      m.values[g].resize(cols.size());
      for (size_t j = 0; j < cols.size(); ++j) m.values[g][j] = table.values[g][cols[j]];
    }
    return m;
  };

  return {project(find_samples(label_a)), project(find_samples(label_b))};
}

}  // namespace sparsebayes::harness
