#pragma once

#include "uh/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace uh {

struct Edge {
    int i = 0;  // i < j canonical order
    int j = 0;
    double capacity = 0.0;
};

/// Undirected capacity-weighted graph. Built from directed capacity entries
/// via S = C + C^T: entries for both orientations of a pair are summed.
struct WeightedGraph {
    int n = 0;
    std::vector<Edge> edges;

    std::size_t edge_count() const { return edges.size(); }
    long long pair_count() const { return static_cast<long long>(n) * (n - 1) / 2; }
    long long non_edge_count() const { return pair_count() - static_cast<long long>(edges.size()); }

    /// All edges share one capacity value.
    bool unweighted() const;

    /// Strength scores s_i = sum_j S_ij.
    std::vector<double> strength_scores() const;

    /// Edge lookup by unordered pair; -1 if absent.
    int edge_index(int a, int b) const;

    /// Node indices of the k highest-strength nodes, ties broken by lowest
    /// node index.
    std::vector<int> top_strength_nodes(int k) const;

    void validate() const;
};

/// Parses the edge-list format: one `i j capacity` entry per line (whitespace
/// separated), `#` comments, optional `n=<int>` header. Each line is a
/// directed capacity entry; opposite orientations of the same pair are summed
/// (S = C + C^T) and a repeated orientation is an error.
WeightedGraph load_graph(std::istream& in);
WeightedGraph load_graph(const std::string& text);
WeightedGraph load_graph_file(const std::string& path);

void write_graph(std::ostream& out, const WeightedGraph& graph);

/// Negative/weaker-pair materialization policy.
struct WeakerSetConfig {
    bool sample_non_edges = false;  // false: enumerate all non-edges
    int sample_count = 0;           // per edge, when sampling
    std::uint64_t seed = 0;
};

/// W(e_k): edges with strictly lower capacity plus non-adjacent pairs (all of
/// them, or a seeded uniform sample without replacement).
std::vector<std::pair<int, int>> weaker_set(const WeightedGraph& graph, int k,
                                            const WeakerSetConfig& config = {});

}  // namespace uh
