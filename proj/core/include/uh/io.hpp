#pragma once

#include "uh/embedding.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace uh {

/// Shortest decimal form that round-trips the exact binary64 value.
std::string format_double(double v);

/// Header `node,coord_0,...,coord_{d-1}`, one row per node.
void write_embeddings_csv(std::ostream& out, const std::vector<ManifoldPoint>& points);
void write_embeddings_csv(std::ostream& out, const EmbeddingSet& embeddings);

/// Reads rows written by write_embeddings_csv. Validates the header, the
/// node-index column, and (when expected_dim >= 0) the coordinate count.
std::vector<Vec> read_embeddings_csv(std::istream& in, int expected_dim = -1);

/// Header `iteration,loss,grad_norm_sq`, one row per iteration.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);

/// Plain numeric matrix, one comma-separated row per line.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);

}  // namespace uh
