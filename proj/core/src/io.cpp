#include "uh/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace uh {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // prefer the shortest representation that still round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
        double parsed = 0.0;
        std::sscanf(shorter, "%lf", &parsed);
        if (parsed == v) return shorter;
    }
    return buf;
}

void write_embeddings_csv(std::ostream& out, const std::vector<ManifoldPoint>& points) {
    const int d = points.empty() ? 0 : points.front().dim();
    out << "node";
    for (int c = 0; c < d; ++c) out << ",coord_" << c;
    out << "\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        out << i;
        for (int c = 0; c < d; ++c) out << ',' << format_double(points[i].vec()[c]);
        out << "\n";
    }
}

void write_embeddings_csv(std::ostream& out, const EmbeddingSet& embeddings) {
    write_embeddings_csv(out, embeddings.points);
}

std::vector<Vec> read_embeddings_csv(std::istream& in, int expected_dim) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("embeddings CSV: empty file");
    if (line.rfind("node", 0) != 0)
        throw std::runtime_error("embeddings CSV: missing header");
    int d = -1;
    {
        std::stringstream header(line);
        std::string cell;
        int cols = 0;
        while (std::getline(header, cell, ',')) ++cols;
        d = cols - 1;
    }
    if (expected_dim >= 0 && d != expected_dim)
        throw std::runtime_error("embeddings CSV: expected dimension " +
                                 std::to_string(expected_dim) + ", file has " +
                                 std::to_string(d));

    std::vector<Vec> rows;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string cell;
        if (!std::getline(ls, cell, ','))
            throw std::runtime_error("embeddings CSV: malformed row");
        if (static_cast<std::size_t>(std::stoul(cell)) != row)
            throw std::runtime_error("embeddings CSV: node indices must be 0..n-1 in order");
        Vec v(d);
        for (int c = 0; c < d; ++c) {
            if (!std::getline(ls, cell, ','))
                throw std::runtime_error("embeddings CSV: row " + std::to_string(row) +
                                         " has fewer than " + std::to_string(d) +
                                         " coordinates");
            v[c] = std::stod(cell);
        }
        if (std::getline(ls, cell, ','))
            throw std::runtime_error("embeddings CSV: row " + std::to_string(row) +
                                     " has extra columns");
        rows.push_back(std::move(v));
        ++row;
    }
    return rows;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
    out << "iteration,loss,grad_norm_sq\n";
    for (const TraceRecord& r : trace)
        out << r.iteration << ',' << format_double(r.loss) << ','
            << format_double(r.gradient_norm_sq) << "\n";
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << "\n";
    }
}

}  // namespace uh
