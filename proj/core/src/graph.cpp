#include "uh/graph.hpp"

#include "uh/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace uh {

namespace {

std::uint64_t pair_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

bool WeightedGraph::unweighted() const {
    if (edges.empty()) return true;
    const double c0 = edges.front().capacity;
    return std::all_of(edges.begin(), edges.end(),
                       [&](const Edge& e) { return e.capacity == c0; });
}

std::vector<double> WeightedGraph::strength_scores() const {
    std::vector<double> s(n, 0.0);
    for (const Edge& e : edges) {
        s[e.i] += e.capacity;
        s[e.j] += e.capacity;
    }
    return s;
}

int WeightedGraph::edge_index(int a, int b) const {
    if (a > b) std::swap(a, b);
    for (std::size_t k = 0; k < edges.size(); ++k)
        if (edges[k].i == a && edges[k].j == b) return static_cast<int>(k);
    return -1;
}

std::vector<int> WeightedGraph::top_strength_nodes(int k) const {
    std::vector<double> s = strength_scores();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return s[a] > s[b]; });
    order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(k)));
    return order;
}

void WeightedGraph::validate() const {
    std::unordered_set<std::uint64_t> seen;
    for (const Edge& e : edges) {
        if (e.i == e.j) throw GraphParseError("self-loop on node " + std::to_string(e.i));
        if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n)
            throw GraphParseError("edge (" + std::to_string(e.i) + "," +
                                  std::to_string(e.j) + ") out of range for n=" +
                                  std::to_string(n));
        if (!(e.capacity > 0.0) || !std::isfinite(e.capacity))
            throw GraphParseError("nonpositive capacity on edge (" +
                                  std::to_string(e.i) + "," + std::to_string(e.j) + ")");
        if (e.i > e.j) throw GraphParseError("edges must be stored with i < j");
        if (!seen.insert(pair_key(e.i, e.j)).second)
            throw GraphParseError("duplicate edge (" + std::to_string(e.i) + "," +
                                  std::to_string(e.j) + ")");
    }
}

WeightedGraph load_graph(std::istream& in) {
    std::string line;
    int line_no = 0;
    int declared_n = -1;
    int max_index = -1;
    // ordered directed entries; summed per unordered pair afterwards
    std::unordered_set<std::uint64_t> seen_directed;
    std::map<std::pair<int, int>, double> capacity;

    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;  // blank or comment-only

        if (first.rfind("n=", 0) == 0) {
            try {
                declared_n = std::stoi(first.substr(2));
            } catch (const std::exception&) {
                throw GraphParseError(line_no, "malformed node-count header '" + first + "'");
            }
            std::string rest;
            if (ls >> rest) throw GraphParseError(line_no, "trailing content after header");
            if (declared_n <= 0) throw GraphParseError(line_no, "node count must be positive");
            continue;
        }

        int i = 0, j = 0;
        double c = 0.0;
        std::string cap_token;
        try {
            std::size_t pos = 0;
            i = std::stoi(first, &pos);
            if (pos != first.size()) throw std::invalid_argument(first);
            std::string second;
            if (!(ls >> second >> cap_token)) throw std::invalid_argument("missing fields");
            j = std::stoi(second, &pos);
            if (pos != second.size()) throw std::invalid_argument(second);
            c = std::stod(cap_token, &pos);
            if (pos != cap_token.size()) throw std::invalid_argument(cap_token);
        } catch (const std::exception&) {
            throw GraphParseError(line_no, "malformed edge line '" + line + "'");
        }
        std::string rest;
        if (ls >> rest) throw GraphParseError(line_no, "trailing content after edge");

        if (i < 0 || j < 0) throw GraphParseError(line_no, "negative node index");
        if (i == j) throw GraphParseError(line_no, "self-loop on node " + std::to_string(i));
        if (!(c > 0.0) || !std::isfinite(c))
            throw GraphParseError(line_no, "capacity must be positive");

        const std::uint64_t directed =
            (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint32_t>(j);
        if (!seen_directed.insert(directed).second)
            throw GraphParseError(line_no, "duplicate pair (" + std::to_string(i) + "," +
                                               std::to_string(j) + ")");
        capacity[{std::min(i, j), std::max(i, j)}] += c;
        max_index = std::max({max_index, i, j});
    }

    WeightedGraph graph;
    graph.n = declared_n > 0 ? declared_n : max_index + 1;
    if (declared_n > 0 && max_index >= declared_n)
        throw GraphParseError("node index " + std::to_string(max_index) +
                              " exceeds declared n=" + std::to_string(declared_n));
    graph.edges.reserve(capacity.size());
    for (const auto& [pair, c] : capacity)
        graph.edges.push_back({pair.first, pair.second, c});
    graph.validate();
    return graph;
}

WeightedGraph load_graph(const std::string& text) {
    std::istringstream in(text);
    return load_graph(in);
}

WeightedGraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphParseError("cannot open graph file '" + path + "'");
    return load_graph(in);
}

void write_graph(std::ostream& out, const WeightedGraph& graph) {
    out << "n=" << graph.n << "\n";
    for (const Edge& e : graph.edges)
        out << e.i << '\t' << e.j << '\t' << e.capacity << "\n";
}

std::vector<std::pair<int, int>> weaker_set(const WeightedGraph& graph, int k,
                                            const WeakerSetConfig& config) {
    if (k < 0 || static_cast<std::size_t>(k) >= graph.edges.size())
        throw std::out_of_range("weaker_set: edge index out of range");
    const double ck = graph.edges[k].capacity;

    std::vector<std::pair<int, int>> out;
    for (std::size_t l = 0; l < graph.edges.size(); ++l)
        if (graph.edges[l].capacity < ck)
            out.emplace_back(graph.edges[l].i, graph.edges[l].j);

    std::unordered_set<std::uint64_t> edge_keys;
    edge_keys.reserve(graph.edges.size() * 2);
    for (const Edge& e : graph.edges) edge_keys.insert(pair_key(e.i, e.j));

    if (!config.sample_non_edges) {
        for (int a = 0; a < graph.n; ++a)
            for (int b = a + 1; b < graph.n; ++b)
                if (!edge_keys.count(pair_key(a, b))) out.emplace_back(a, b);
        return out;
    }

    const long long available = graph.non_edge_count();
    const long long want = std::min<long long>(config.sample_count, available);
    Rng rng(config.seed);
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(want) * 2);
    while (static_cast<long long>(chosen.size()) < want) {
        const int a = static_cast<int>(rng.below(graph.n));
        const int b = static_cast<int>(rng.below(graph.n));
        if (a == b) continue;
        const std::uint64_t key = pair_key(a, b);
        if (edge_keys.count(key)) continue;
        if (chosen.insert(key).second)
            out.emplace_back(std::min(a, b), std::max(a, b));
    }
    return out;
}

}  // namespace uh
