#pragma once

#include "uh/graph.hpp"
#include "uh/optimizer.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace uh {

struct TrainingConfig {
    Signature signature{2, 1, -1.0};
    double tau = 1e-2;      // softmax temperature
    double epsilon = 0.1;   // initialization perturbation radius
    double eta = 1e-6;      // step size
    int max_iterations = 10000;
    std::uint64_t seed = 0;
    /// 0 enumerates every non-edge per weaker set; a positive count samples
    /// that many non-edges per edge, reseeded each iteration.
    int negative_samples = 0;
    OptimizerMode mode = OptimizerMode::PseudoRiemannian;
    int threads = 1;
    /// For unweighted graphs: stop once every edge is closer than every
    /// non-edge.
    bool stop_at_full_satisfaction = true;
};

struct EmbeddingSet {
    Signature signature{2, 1, -1.0};
    std::vector<ManifoldPoint> points;
    std::vector<TraceRecord> trace;
    std::uint64_t seed = 0;
    int iterations = 0;
    double final_loss = std::numeric_limits<double>::quiet_NaN();
    int renormalizations = 0;

    int size() const { return static_cast<int>(points.size()); }
};

/// Points sampled near the positive pole: z_i = pole + U[-eps,eps]^d noise,
/// redrawn until time-like, then scaled onto the manifold.
EmbeddingSet init_embeddings(int n, const TrainingConfig& config);

/// One weaker-pair list per edge, aligned with graph.edges.
using WeakerSets = std::vector<std::vector<std::pair<int, int>>>;
WeakerSets materialize_weaker_sets(const WeightedGraph& graph,
                                   const WeakerSetConfig& config = {});

/// Softmax ranking loss over edges against their weaker sets, evaluated in
/// log-sum-exp form. Nonnegative; throws NumericError on non-finite values.
double loss(const EmbeddingSet& embeddings, const WeightedGraph& graph,
            double tau, const WeakerSets& weaker_sets);

/// Analytic Euclidean gradients of the loss with respect to every point, in
/// ambient coordinates. Pairs within 1e-9 of the zero-distance singularity
/// contribute no gradient.
std::vector<Vec> loss_gradients(const EmbeddingSet& embeddings,
                                const WeightedGraph& graph, double tau,
                                const WeakerSets& weaker_sets);

/// Full training pipeline: initialization, optimization in the configured
/// mode, and stopping rules.
EmbeddingSet train(const WeightedGraph& graph, const TrainingConfig& config);

// --------------------------------------------------------------------------
// Evaluation

Eigen::MatrixXd dissimilarity_matrix(const std::vector<ManifoldPoint>& points);
Eigen::MatrixXd dissimilarity_matrix(const EmbeddingSet& embeddings);
Eigen::MatrixXd euclidean_distance_matrix(const std::vector<Vec>& points);

/// Fraction of (edge, weaker-pair) orderings d(edge) < d(weaker) that hold;
/// 1.0 when every constraint is satisfied (or none exist).
double constraint_satisfaction(const Eigen::MatrixXd& distances,
                               const WeightedGraph& graph);
double constraint_satisfaction(const EmbeddingSet& embeddings,
                               const WeightedGraph& graph);

/// delta_i = sum_j d(x_i, x_j).
std::vector<double> delta_scores(const Eigen::MatrixXd& distances);
std::vector<double> delta_scores(const EmbeddingSet& embeddings);

/// 1-based ranks of the given nodes in ascending delta order, ties broken by
/// node index.
std::vector<int> leader_ranks(const std::vector<double>& delta,
                              const std::vector<int>& leaders);

/// Spearman rank correlation with average ranks for ties. Throws
/// UndefinedCorrelationError for constant input.
double spearman_rho(const std::vector<double>& a, const std::vector<double>& b);

/// Rank correlation between importance scores and delta scores, oriented so
/// that +1 means the strongest nodes have the smallest delta.
double hierarchy_correlation(const std::vector<double>& strengths,
                             const std::vector<double>& deltas);

/// Fraction of nodes whose nearest distinct node (ties to the lowest index)
/// is a graph neighbor.
double recall_at_1(const Eigen::MatrixXd& distances, const WeightedGraph& graph);
double recall_at_1(const EmbeddingSet& embeddings, const WeightedGraph& graph);

// --------------------------------------------------------------------------
// Flat-space baseline: the same ranking loss on points of R^dim with the
// Euclidean distance and plain gradient descent. Used for side-by-side
// comparisons against the manifold models.

struct EuclideanTrainingConfig {
    int dim = 4;
    double tau = 1e-2;
    double epsilon = 0.1;
    double eta = 1e-6;
    int max_iterations = 10000;
    std::uint64_t seed = 0;
    int negative_samples = 0;
    int threads = 1;
};

struct EuclideanEmbeddingSet {
    int dim = 0;
    std::vector<Vec> points;
    std::vector<TraceRecord> trace;
    std::uint64_t seed = 0;
    int iterations = 0;
    double final_loss = std::numeric_limits<double>::quiet_NaN();
};

EuclideanEmbeddingSet train_euclidean(const WeightedGraph& graph,
                                      const EuclideanTrainingConfig& config);

}  // namespace uh
