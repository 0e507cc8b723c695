#ifndef SPARSEBAYES_ZSCORE_HPP
#define SPARSEBAYES_ZSCORE_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace sparsebayes::harness {

/// Genes x patients intensity matrix; text form is a header row of patient
/// ids preceded by a gene-id column name, then one tab- or comma-separated
/// row per gene.
struct ExpressionMatrix {
  std::vector<std::string> gene_ids;
  std::vector<std::string> patient_ids;
  std::vector<std::vector<double>> values;  // [gene][patient]

  int genes() const { return static_cast<int>(gene_ids.size()); }
  int patients() const { return static_cast<int>(patient_ids.size()); }
};

ExpressionMatrix read_matrix(std::istream& in);
ExpressionMatrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const ExpressionMatrix& m);

/// Z-scores per gene between two patient groups: per-patient normalization
/// to proportions, log transform, difference of group means over the pooled
/// standard error (sample variances with divisor n-1).
std::vector<double> z_scores(const ExpressionMatrix& group_a, const ExpressionMatrix& group_b);

/// Splits the dataset table of a GEO SOFT file into the two groups named by
/// `label_a` / `label_b` among the subsets of the given type.
std::pair<ExpressionMatrix, ExpressionMatrix> soft_split(const std::string& path,
                                                         const std::string& subset_type,
                                                         const std::string& label_a,
                                                         const std::string& label_b);

}  // namespace sparsebayes::harness

#endif
