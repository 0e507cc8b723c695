#ifndef SPARSEBAYES_IO_HPP
#define SPARSEBAYES_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "sparsebayes/harness.hpp"
#include "sparsebayes/posterior.hpp"

namespace sparsebayes::harness {

/// Machine-readable summary record: '#'-prefixed key/value header followed by
/// one tab-separated row per coordinate. Doubles are printed with 17
/// significant digits, so parse(write(x)) == x bit for bit.
void write_summary(std::ostream& out, const PosteriorSummary& s);
PosteriorSummary read_summary(std::istream& in);
void write_summary_file(const std::string& path, const PosteriorSummary& s);
PosteriorSummary read_summary_file(const std::string& path);

/// Data vectors: one value per line ('#' comments allowed). Multi-column
/// rows (the simulate format: index, y, theta, support) contribute their
/// second column.
std::vector<double> read_data_vector(std::istream& in);
std::vector<double> read_data_vector_file(const std::string& path);
void write_vector(std::ostream& out, const std::vector<double>& v);

void write_simulated(std::ostream& out, const SimulatedData& d);
SimulatedData read_simulated(std::istream& in);

}  // namespace sparsebayes::harness

#endif
