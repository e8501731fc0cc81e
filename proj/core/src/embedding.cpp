#include "uh/embedding.hpp"

#include "uh/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace uh {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSingularGuard = 1e-9;  // |r/beta - 1| below this: no gradient

double logaddexp(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

/// Running max-shifted sum of exponentials: value = exp(m) * t.
struct ShiftedSum {
    double m = -kInf;
    double t = 0.0;

    void add_log(double x) {  // accumulate exp(x)
        if (x == -kInf) return;
        if (x > m) {
            t = t * std::exp(m - x) + 1.0;
            m = x;
        } else {
            t += std::exp(x - m);
        }
    }
    void merge(const ShiftedSum& o) {
        if (o.t == 0.0) return;
        if (t == 0.0) {
            *this = o;
            return;
        }
        if (o.m > m) {
            t = t * std::exp(m - o.m) + o.t;
            m = o.m;
        } else {
            t += o.t * std::exp(o.m - m);
        }
    }
    bool empty() const { return t == 0.0; }
    double log() const { return empty() ? -kInf : m + std::log(t); }
};

void parallel_for(std::size_t total, int threads, const std::function<void(std::size_t, std::size_t)>& body) {
    if (threads <= 1 || total < 4096) {
        body(0, total);
        return;
    }
    const std::size_t chunks = std::min<std::size_t>(threads, total);
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t begin = total * c / chunks;
        const std::size_t end = total * (c + 1) / chunks;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& t : pool) t.join();
}

std::uint64_t pair_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

/// Shared softmax-ranking machinery over a slot table of node pairs. The
/// distances held per slot come from either the manifold premetric or the
/// Euclidean metric; all capacity-group bookkeeping is metric-agnostic.
class RankingObjective {
  public:
    RankingObjective(const WeightedGraph& graph, double tau, int negative_samples,
                     std::uint64_t seed, int threads)
        : graph_(graph),
          tau_(tau),
          negative_samples_(negative_samples),
          seed_(seed),
          threads_(std::max(1, threads)) {
        if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
        const int m = static_cast<int>(graph.edges.size());
        sorted_edges_.resize(m);
        std::iota(sorted_edges_.begin(), sorted_edges_.end(), 0);
        std::stable_sort(sorted_edges_.begin(), sorted_edges_.end(), [&](int a, int b) {
            return graph.edges[a].capacity < graph.edges[b].capacity;
        });
        group_of_edge_.resize(m);
        int g = -1;
        double prev = -kInf;
        for (int r = 0; r < m; ++r) {
            const int k = sorted_edges_[r];
            const double c = graph.edges[k].capacity;
            if (c != prev) {
                group_begin_.push_back(r);
                ++g;
                prev = c;
            }
            group_of_edge_[k] = g;
        }
        group_begin_.push_back(m);

        if (exact()) {
            build_exact_slots();
        } else {
            resample(0);
        }
    }

    bool exact() const { return negative_samples_ <= 0; }

    void use_manifold(const Signature& sig) {
        manifold_ = true;
        sig_ = sig;
    }
    void use_euclidean() { manifold_ = false; }

    /// Redraws the per-edge non-edge samples (sampled mode only).
    void resample(std::uint64_t epoch) {
        if (exact()) return;
        const int m = static_cast<int>(graph_.edges.size());
        pi_.clear();
        pj_.clear();
        slot_edge_.clear();
        members_.assign(m, {});
        std::unordered_map<std::uint64_t, int> slot_of;
        for (const Edge& e : graph_.edges) {
            slot_of.emplace(pair_key(e.i, e.j), static_cast<int>(pi_.size()));
            pi_.push_back(e.i);
            pj_.push_back(e.j);
        }
        slot_edge_.resize(pi_.size());
        std::iota(slot_edge_.begin(), slot_edge_.end(), 0);

        std::unordered_set<std::uint64_t> edge_keys;
        for (const Edge& e : graph_.edges) edge_keys.insert(pair_key(e.i, e.j));

        const long long available = graph_.non_edge_count();
        const long long want = std::min<long long>(negative_samples_, available);
        Rng rng(mix_seed(seed_, epoch));
        for (int k = 0; k < m; ++k) {
            std::unordered_set<std::uint64_t> chosen;
            while (static_cast<long long>(chosen.size()) < want) {
                const int a = static_cast<int>(rng.below(graph_.n));
                const int b = static_cast<int>(rng.below(graph_.n));
                if (a == b) continue;
                const std::uint64_t key = pair_key(a, b);
                if (edge_keys.count(key) || !chosen.insert(key).second) continue;
                auto [it, fresh] = slot_of.try_emplace(key, static_cast<int>(pi_.size()));
                if (fresh) {
                    pi_.push_back(std::min(a, b));
                    pj_.push_back(std::max(a, b));
                    slot_edge_.push_back(-1);
                }
                members_[k].push_back(it->second);
            }
        }
    }

    /// Non-finite values are returned as-is; the optimizer loop classifies
    /// them as divergence with the iteration index.
    ObjectiveEvaluation evaluate(const std::vector<Vec>& points, bool with_gradients) {
        compute_distances(points);
        ObjectiveEvaluation eval;
        std::vector<double> coeff;
        eval.value = exact() ? exact_loss(with_gradients ? &coeff : nullptr)
                             : sampled_loss(with_gradients ? &coeff : nullptr);
        if (with_gradients) eval.euclidean_gradients = apply_chain_rule(points, coeff);
        return eval;
    }

    /// Constraint-satisfaction fraction from the distances of the last
    /// evaluation. Exact mode only (sampled slots do not cover all pairs).
    double last_constraint_satisfaction() const;

  private:
    void build_exact_slots() {
        const int n = graph_.n;
        pi_.reserve(static_cast<std::size_t>(graph_.pair_count()));
        pj_.reserve(pi_.capacity());
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                pi_.push_back(i);
                pj_.push_back(j);
            }
        slot_edge_.assign(pi_.size(), -1);
        edge_slot_.resize(graph_.edges.size());
        for (std::size_t k = 0; k < graph_.edges.size(); ++k) {
            const Edge& e = graph_.edges[k];
            // slot of pair (i,j), i<j, in row-major upper-triangle order
            const std::size_t slot = static_cast<std::size_t>(e.i) * (2 * n - e.i - 1) / 2 +
                                     (e.j - e.i - 1);
            slot_edge_[slot] = static_cast<int>(k);
            edge_slot_[k] = static_cast<int>(slot);
        }
    }

    void compute_distances(const std::vector<Vec>& points) {
        const std::size_t total = pi_.size();
        d_.resize(total);
        aux_.resize(total);
        if (manifold_) {
            const int td = sig_.time_dim();
            gx_.resize(points.size());
            for (std::size_t v = 0; v < points.size(); ++v) {
                gx_[v] = points[v];
                gx_[v].head(td) = -gx_[v].head(td);
            }
            parallel_for(total, threads_, [&](std::size_t b, std::size_t e) {
                for (std::size_t s = b; s < e; ++s) {
                    const double r = points[pi_[s]].dot(gx_[pj_[s]]);
                    aux_[s] = r;
                    d_[s] = dissimilarity_from_scalar(r, sig_.beta);
                }
            });
        } else {
            parallel_for(total, threads_, [&](std::size_t b, std::size_t e) {
                for (std::size_t s = b; s < e; ++s) {
                    const double dist = (points[pi_[s]] - points[pj_[s]]).norm();
                    d_[s] = dist;
                    aux_[s] = dist;
                }
            });
        }
    }

    /// Loss and per-slot d(loss)/d(distance) coefficients in exact mode.
    /// Denominators share structure across edges: every weaker set is the
    /// union of all non-edges and the strictly-lower capacity groups, so both
    /// the per-edge log-denominators and the gradient coefficients reduce to
    /// prefix/suffix accumulations over capacity groups.
    double exact_loss(std::vector<double>* coeff) {
        const double inv_tau = 1.0 / tau_;
        const int m = static_cast<int>(graph_.edges.size());
        if (coeff) coeff->assign(pi_.size(), 0.0);
        if (m == 0) return 0.0;

        ShiftedSum non_edge_sum;
        for (std::size_t s = 0; s < pi_.size(); ++s)
            if (slot_edge_[s] < 0) non_edge_sum.add_log(-d_[s] * inv_tau);
        const double log_ne = non_edge_sum.log();

        const int groups = static_cast<int>(group_begin_.size()) - 1;
        logdenom_.resize(m);
        double loss_value = 0.0;
        double prefix = log_ne;  // LSE over non-edges and lower-capacity edges
        for (int g = 0; g < groups; ++g) {
            ShiftedSum group_sum;
            for (int r = group_begin_[g]; r < group_begin_[g + 1]; ++r) {
                const int k = sorted_edges_[r];
                const double a = -d_[edge_slot_[k]] * inv_tau;
                logdenom_[k] = logaddexp(a, prefix);
                loss_value += d_[edge_slot_[k]] * inv_tau + logdenom_[k];
                group_sum.add_log(a);
            }
            prefix = logaddexp(prefix, group_sum.log());
        }
        if (!coeff) return loss_value;

        // Suffix sums of 1/denom over capacity groups strictly above each
        // group; suffix_all covers every edge (for non-edge pairs).
        std::vector<ShiftedSum> suffix(groups + 1);
        for (int g = groups - 1; g >= 0; --g) {
            suffix[g] = suffix[g + 1];
            for (int r = group_begin_[g]; r < group_begin_[g + 1]; ++r)
                suffix[g].add_log(-logdenom_[sorted_edges_[r]]);
        }
        const ShiftedSum& all = suffix[0];

        if (!all.empty()) {
            for (std::size_t s = 0; s < pi_.size(); ++s) {
                if (slot_edge_[s] >= 0) continue;
                (*coeff)[s] = -inv_tau * std::exp(-d_[s] * inv_tau + all.m) * all.t;
            }
        }
        for (int k = 0; k < m; ++k) {
            const int s = edge_slot_[k];
            const double a = -d_[s] * inv_tau;
            double c = inv_tau * (1.0 - std::exp(a - logdenom_[k]));
            const ShiftedSum& suf = suffix[group_of_edge_[k] + 1];
            if (!suf.empty()) c -= inv_tau * std::exp(a + suf.m) * suf.t;
            (*coeff)[s] += c;
        }
        return loss_value;
    }

    double sampled_loss(std::vector<double>* coeff) {
        const double inv_tau = 1.0 / tau_;
        const int m = static_cast<int>(graph_.edges.size());
        if (coeff) coeff->assign(pi_.size(), 0.0);
        double loss_value = 0.0;
        for (int k = 0; k < m; ++k) {
            const int sk = slot_edge_idx(k);
            const double a = -d_[sk] * inv_tau;
            ShiftedSum denom;
            denom.add_log(a);
            // edges in strictly lower capacity groups
            const int lower_end = group_begin_[group_of_edge_[k]];
            for (int r = 0; r < lower_end; ++r)
                denom.add_log(-d_[slot_edge_idx(sorted_edges_[r])] * inv_tau);
            for (int s : members_[k]) denom.add_log(-d_[s] * inv_tau);
            const double logdenom = denom.log();
            loss_value += d_[sk] * inv_tau + logdenom;
            if (!coeff) continue;
            (*coeff)[sk] += inv_tau * (1.0 - std::exp(a - logdenom));
            for (int r = 0; r < lower_end; ++r) {
                const int s = slot_edge_idx(sorted_edges_[r]);
                (*coeff)[s] -= inv_tau * std::exp(-d_[s] * inv_tau - logdenom);
            }
            for (int s : members_[k])
                (*coeff)[s] -= inv_tau * std::exp(-d_[s] * inv_tau - logdenom);
        }
        return loss_value;
    }

    int slot_edge_idx(int k) const { return exact() ? edge_slot_[k] : k; }

    std::vector<Vec> apply_chain_rule(const std::vector<Vec>& points,
                                      const std::vector<double>& coeff) const {
        std::vector<Vec> grads(points.size());
        for (std::size_t v = 0; v < points.size(); ++v)
            grads[v] = Vec::Zero(points[v].size());
        for (std::size_t s = 0; s < pi_.size(); ++s) {
            const double c = coeff[s];
            if (c == 0.0) continue;
            if (manifold_) {
                const double r = aux_[s];
                if (std::abs(r / sig_.beta - 1.0) < kSingularGuard) continue;
                const double cd = c * dissimilarity_derivative(r, sig_.beta);
                grads[pi_[s]] += cd * gx_[pj_[s]];
                grads[pj_[s]] += cd * gx_[pi_[s]];
            } else {
                const double dist = aux_[s];
                if (dist < 1e-12) continue;
                const Vec dir = (points[pi_[s]] - points[pj_[s]]) / dist;
                grads[pi_[s]] += c * dir;
                grads[pj_[s]] -= c * dir;
            }
        }
        return grads;
    }

    const WeightedGraph& graph_;
    double tau_;
    int negative_samples_;
    std::uint64_t seed_;
    int threads_;

    bool manifold_ = true;
    Signature sig_{2, 1, -1.0};

    std::vector<int> sorted_edges_;   // ascending capacity
    std::vector<int> group_of_edge_;  // edge -> capacity group
    std::vector<int> group_begin_;    // group -> first rank in sorted_edges_

    std::vector<int> pi_, pj_;        // slot -> node pair
    std::vector<int> slot_edge_;      // slot -> edge index or -1
    std::vector<int> edge_slot_;      // exact mode: edge -> slot
    std::vector<std::vector<int>> members_;  // sampled mode: edge -> sampled slots

    std::vector<double> d_;           // slot distances (last evaluation)
    std::vector<double> aux_;         // manifold: scalar products; euclid: distances
    std::vector<double> logdenom_;
    std::vector<Vec> gx_;             // metric-applied points
};

double RankingObjective::last_constraint_satisfaction() const {
    if (!exact() || graph_.edges.empty()) return 1.0;
    std::vector<double> non_edge_d;
    non_edge_d.reserve(pi_.size());
    for (std::size_t s = 0; s < pi_.size(); ++s)
        if (slot_edge_[s] < 0) non_edge_d.push_back(d_[s]);
    std::sort(non_edge_d.begin(), non_edge_d.end());

    long long total = 0, satisfied = 0;
    const int m = static_cast<int>(graph_.edges.size());
    for (int k = 0; k < m; ++k) {
        const double dk = d_[edge_slot_[k]];
        total += static_cast<long long>(non_edge_d.size());
        satisfied += non_edge_d.end() -
                     std::upper_bound(non_edge_d.begin(), non_edge_d.end(), dk);
        const int lower_end = group_begin_[group_of_edge_[k]];
        total += lower_end;
        for (int r = 0; r < lower_end; ++r)
            satisfied += dk < d_[edge_slot_[sorted_edges_[r]]] ? 1 : 0;
    }
    return total == 0 ? 1.0 : static_cast<double>(satisfied) / static_cast<double>(total);
}

std::vector<Vec> init_params(int n, const TrainingConfig& config) {
    if (!(config.epsilon > 0.0))
        throw std::invalid_argument("epsilon must be positive");
    const Signature& sig = config.signature;
    const int d = sig.dim();
    Vec pole = Vec::Zero(d);
    pole[0] = std::sqrt(sig.abs_beta());

    Rng rng(config.seed);
    std::vector<Vec> zs;
    zs.reserve(n);
    for (int i = 0; i < n; ++i) {
        Vec z(d);
        do {
            for (int c = 0; c < d; ++c)
                z[c] = pole[c] + rng.uniform(-config.epsilon, config.epsilon);
        } while (!(quadratic_norm(z, sig) < 0.0));
        zs.push_back(std::move(z));
    }
    return zs;
}

std::vector<double> rank_with_ties(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

EmbeddingSet init_embeddings(int n, const TrainingConfig& config) {
    EmbeddingSet out;
    out.signature = config.signature;
    out.seed = config.seed;
    for (Vec& z : init_params(n, config))
        out.points.push_back(normalize_to_manifold(z, config.signature));
    return out;
}

WeakerSets materialize_weaker_sets(const WeightedGraph& graph,
                                   const WeakerSetConfig& config) {
    WeakerSets sets;
    sets.reserve(graph.edges.size());
    for (std::size_t k = 0; k < graph.edges.size(); ++k) {
        WeakerSetConfig per_edge = config;
        per_edge.seed = mix_seed(config.seed, k);
        sets.push_back(weaker_set(graph, static_cast<int>(k), per_edge));
    }
    return sets;
}

namespace {

/// Reference-path evaluation over materialized weaker sets: a direct per-edge
/// log-sum-exp, no shared denominators.
double reference_loss_and_coeffs(
    const EmbeddingSet& embeddings, const WeightedGraph& graph, double tau,
    const WeakerSets& weaker_sets,
    std::unordered_map<std::uint64_t, double>* coeffs) {
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    if (weaker_sets.size() != graph.edges.size())
        throw std::invalid_argument("one weaker set per edge is required");
    if (embeddings.size() != graph.n)
        throw DimensionError("embedding count does not match graph node count");

    const double inv_tau = 1.0 / tau;
    const Signature& sig = embeddings.signature;
    auto dist = [&](int a, int b) {
        return dissimilarity_from_scalar(
            scalar_product(embeddings.points[a].vec(), embeddings.points[b].vec(), sig),
            sig.beta);
    };

    double total = 0.0;
    for (std::size_t k = 0; k < graph.edges.size(); ++k) {
        const Edge& e = graph.edges[k];
        const double dk = dist(e.i, e.j);
        const double a = -dk * inv_tau;
        ShiftedSum denom;
        denom.add_log(a);
        std::vector<double> member_logs(weaker_sets[k].size());
        for (std::size_t w = 0; w < weaker_sets[k].size(); ++w) {
            const auto& [wa, wb] = weaker_sets[k][w];
            member_logs[w] = -dist(wa, wb) * inv_tau;
            denom.add_log(member_logs[w]);
        }
        const double logdenom = denom.log();
        total += dk * inv_tau + logdenom;
        if (!coeffs) continue;
        (*coeffs)[pair_key(e.i, e.j)] += inv_tau * (1.0 - std::exp(a - logdenom));
        for (std::size_t w = 0; w < weaker_sets[k].size(); ++w) {
            const auto& [wa, wb] = weaker_sets[k][w];
            (*coeffs)[pair_key(wa, wb)] -= inv_tau * std::exp(member_logs[w] - logdenom);
        }
    }
    if (!std::isfinite(total))
        throw NumericError("ranking loss evaluated to a non-finite value");
    return total;
}

}  // namespace

double loss(const EmbeddingSet& embeddings, const WeightedGraph& graph,
            double tau, const WeakerSets& weaker_sets) {
    return reference_loss_and_coeffs(embeddings, graph, tau, weaker_sets, nullptr);
}

std::vector<Vec> loss_gradients(const EmbeddingSet& embeddings,
                                const WeightedGraph& graph, double tau,
                                const WeakerSets& weaker_sets) {
    std::unordered_map<std::uint64_t, double> coeffs;
    reference_loss_and_coeffs(embeddings, graph, tau, weaker_sets, &coeffs);

    const Signature& sig = embeddings.signature;
    std::vector<Vec> grads(embeddings.points.size(), Vec::Zero(sig.dim()));
    for (const auto& [key, c] : coeffs) {
        if (c == 0.0) continue;
        const int a = static_cast<int>(key >> 32);
        const int b = static_cast<int>(key & 0xffffffffu);
        const double r =
            scalar_product(embeddings.points[a].vec(), embeddings.points[b].vec(), sig);
        if (std::abs(r / sig.beta - 1.0) < kSingularGuard) continue;
        const double cd = c * dissimilarity_derivative(r, sig.beta);
        grads[a] += cd * metric_apply(embeddings.points[b].vec(), sig);
        grads[b] += cd * metric_apply(embeddings.points[a].vec(), sig);
    }
    return grads;
}

EmbeddingSet train(const WeightedGraph& graph, const TrainingConfig& config) {
    if (!(config.eta > 0.0)) throw std::invalid_argument("eta must be positive");
    if (config.max_iterations <= 0)
        throw std::invalid_argument("max_iterations must be positive");

    RankingObjective objective(graph, config.tau, config.negative_samples,
                               config.seed, config.threads);
    objective.use_manifold(config.signature);

    std::vector<Vec> params = init_params(graph.n, config);

    std::uint64_t epoch = 0;
    Objective obj = [&](const std::vector<ManifoldPoint>& pts) {
        objective.resample(epoch++);
        std::vector<Vec> raw;
        raw.reserve(pts.size());
        for (const ManifoldPoint& p : pts) raw.push_back(p.vec());
        return objective.evaluate(raw, true);
    };

    OptimizerConfig ocfg;
    ocfg.step_size = config.eta;
    ocfg.max_iterations = config.max_iterations;
    ocfg.seed = config.seed;
    ocfg.mode = config.mode;
    const bool cs_stop = config.stop_at_full_satisfaction && graph.unweighted() &&
                         config.negative_samples <= 0;
    if (cs_stop) {
        ocfg.stop_rule = StopRule::Callback;
        ocfg.stop_callback = [&](int, const std::vector<ManifoldPoint>&, double) {
            return objective.last_constraint_satisfaction() >= 1.0;
        };
    }

    OptimizeResult result;
    if (config.mode == OptimizerMode::PseudoRiemannian) {
        std::vector<ManifoldPoint> initial;
        initial.reserve(params.size());
        for (const Vec& z : params)
            initial.push_back(normalize_to_manifold(z, config.signature));
        result = optimize(obj, std::move(initial), ocfg);
    } else {
        result = optimize_via_phi(obj, std::move(params), config.signature, ocfg);
    }

    EmbeddingSet out;
    out.signature = config.signature;
    out.points = std::move(result.points);
    out.trace = std::move(result.trace);
    out.seed = config.seed;
    out.iterations = result.iterations_run;
    out.final_loss = out.trace.empty() ? 0.0 : out.trace.back().loss;
    out.renormalizations = result.renormalizations;
    return out;
}

Eigen::MatrixXd dissimilarity_matrix(const std::vector<ManifoldPoint>& points) {
    const int n = static_cast<int>(points.size());
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    if (n == 0) return D;
    const Signature& sig = points.front().sig();
    for (int i = 0; i < n; ++i) {
        if (!(points[i].sig() == sig))
            throw DimensionError("dissimilarity_matrix: mixed signatures");
        for (int j = i + 1; j < n; ++j) {
            const double r = scalar_product(points[i].vec(), points[j].vec(), sig);
            D(i, j) = D(j, i) = dissimilarity_from_scalar(r, sig.beta);
        }
    }
    return D;
}

Eigen::MatrixXd dissimilarity_matrix(const EmbeddingSet& embeddings) {
    return dissimilarity_matrix(embeddings.points);
}

Eigen::MatrixXd euclidean_distance_matrix(const std::vector<Vec>& points) {
    const int n = static_cast<int>(points.size());
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) D(i, j) = D(j, i) = (points[i] - points[j]).norm();
    return D;
}

double constraint_satisfaction(const Eigen::MatrixXd& distances,
                               const WeightedGraph& graph) {
    if (distances.rows() != graph.n || distances.cols() != graph.n)
        throw DimensionError("constraint_satisfaction: matrix size does not match graph");
    if (graph.edges.empty()) return 1.0;

    std::vector<bool> is_edge_pair(static_cast<std::size_t>(graph.n) * graph.n, false);
    for (const Edge& e : graph.edges) {
        is_edge_pair[static_cast<std::size_t>(e.i) * graph.n + e.j] = true;
    }
    std::vector<double> non_edge_d;
    non_edge_d.reserve(static_cast<std::size_t>(graph.non_edge_count()));
    for (int i = 0; i < graph.n; ++i)
        for (int j = i + 1; j < graph.n; ++j)
            if (!is_edge_pair[static_cast<std::size_t>(i) * graph.n + j])
                non_edge_d.push_back(distances(i, j));
    std::sort(non_edge_d.begin(), non_edge_d.end());

    long long total = 0, satisfied = 0;
    for (const Edge& e : graph.edges) {
        const double dk = distances(e.i, e.j);
        total += static_cast<long long>(non_edge_d.size());
        satisfied += non_edge_d.end() -
                     std::upper_bound(non_edge_d.begin(), non_edge_d.end(), dk);
        for (const Edge& w : graph.edges) {
            if (w.capacity < e.capacity) {
                ++total;
                satisfied += dk < distances(w.i, w.j) ? 1 : 0;
            }
        }
    }
    return total == 0 ? 1.0 : static_cast<double>(satisfied) / static_cast<double>(total);
}

double constraint_satisfaction(const EmbeddingSet& embeddings,
                               const WeightedGraph& graph) {
    return constraint_satisfaction(dissimilarity_matrix(embeddings), graph);
}

std::vector<double> delta_scores(const Eigen::MatrixXd& distances) {
    std::vector<double> out(distances.rows());
    for (Eigen::Index i = 0; i < distances.rows(); ++i) out[i] = distances.row(i).sum();
    return out;
}

std::vector<double> delta_scores(const EmbeddingSet& embeddings) {
    return delta_scores(dissimilarity_matrix(embeddings));
}

std::vector<int> leader_ranks(const std::vector<double>& delta,
                              const std::vector<int>& leaders) {
    const int n = static_cast<int>(delta.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return delta[a] != delta[b] ? delta[a] < delta[b] : a < b;
    });
    std::vector<int> rank(n);
    for (int pos = 0; pos < n; ++pos) rank[order[pos]] = pos + 1;

    std::vector<int> out;
    out.reserve(leaders.size());
    for (int leader : leaders) {
        if (leader < 0 || leader >= n)
            throw std::out_of_range("leader index " + std::to_string(leader) +
                                    " out of range");
        out.push_back(rank[leader]);
    }
    return out;
}

double spearman_rho(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw DimensionError("spearman_rho: length mismatch");
    if (a.size() < 2)
        throw std::invalid_argument("spearman_rho: need at least two samples");
    const std::vector<double> ra = rank_with_ties(a);
    const std::vector<double> rb = rank_with_ties(b);
    const double n = static_cast<double>(a.size());
    const double mean = (n + 1.0) / 2.0;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double dx = ra[i] - mean;
        const double dy = rb[i] - mean;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw UndefinedCorrelationError("rank correlation of a constant sequence");
    return sxy / std::sqrt(sxx * syy);
}

double hierarchy_correlation(const std::vector<double>& strengths,
                             const std::vector<double>& deltas) {
    std::vector<double> negated(strengths.size());
    for (std::size_t i = 0; i < strengths.size(); ++i) negated[i] = -strengths[i];
    return spearman_rho(negated, deltas);
}

double recall_at_1(const Eigen::MatrixXd& distances, const WeightedGraph& graph) {
    if (graph.n < 2)
        throw std::invalid_argument("recall_at_1: need at least two nodes");
    if (distances.rows() != graph.n)
        throw DimensionError("recall_at_1: matrix size does not match graph");
    std::unordered_set<std::uint64_t> edge_keys;
    for (const Edge& e : graph.edges) edge_keys.insert(pair_key(e.i, e.j));

    int hits = 0;
    for (int i = 0; i < graph.n; ++i) {
        int best = -1;
        double best_d = kInf;
        for (int j = 0; j < graph.n; ++j) {
            if (j == i) continue;
            if (distances(i, j) < best_d) {
                best_d = distances(i, j);
                best = j;
            }
        }
        hits += edge_keys.count(pair_key(i, best)) ? 1 : 0;
    }
    return static_cast<double>(hits) / graph.n;
}

double recall_at_1(const EmbeddingSet& embeddings, const WeightedGraph& graph) {
    return recall_at_1(dissimilarity_matrix(embeddings), graph);
}

EuclideanEmbeddingSet train_euclidean(const WeightedGraph& graph,
                                      const EuclideanTrainingConfig& config) {
    if (config.dim <= 0) throw std::invalid_argument("dim must be positive");
    if (!(config.eta > 0.0)) throw std::invalid_argument("eta must be positive");

    RankingObjective objective(graph, config.tau, config.negative_samples,
                               config.seed, config.threads);
    objective.use_euclidean();

    Rng rng(config.seed);
    std::vector<Vec> points(graph.n);
    for (Vec& p : points) {
        p.resize(config.dim);
        for (int c = 0; c < config.dim; ++c)
            p[c] = rng.uniform(-config.epsilon, config.epsilon);
    }

    EuclideanEmbeddingSet out;
    out.dim = config.dim;
    out.seed = config.seed;
    out.trace.reserve(config.max_iterations);
    for (int iter = 0; iter < config.max_iterations; ++iter) {
        objective.resample(static_cast<std::uint64_t>(iter));
        ObjectiveEvaluation eval = objective.evaluate(points, true);
        if (!std::isfinite(eval.value)) throw DivergenceError(iter, "non-finite loss");
        double gns = 0.0;
        for (const Vec& g : eval.euclidean_gradients) {
            if (!g.allFinite()) throw DivergenceError(iter, "non-finite gradient");
            gns += g.squaredNorm();
        }
        out.trace.push_back({iter, eval.value, gns});
        out.iterations = iter + 1;
        for (int i = 0; i < graph.n; ++i)
            points[i] -= config.eta * eval.euclidean_gradients[i];
    }
    out.points = std::move(points);
    out.final_loss = out.trace.empty() ? 0.0 : out.trace.back().loss;
    return out;
}

}  // namespace uh
