#pragma once

#include "uh/maps.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace uh {

/// Loss value together with the Euclidean gradient for every optimized point,
/// both in ambient coordinates.
struct ObjectiveEvaluation {
    double value = 0.0;
    std::vector<Vec> euclidean_gradients;
};

using Objective = std::function<ObjectiveEvaluation(const std::vector<ManifoldPoint>&)>;

/// Returns true to stop. Invoked after the loss of the current iterate has
/// been recorded and before the step is taken.
using StopCallback = std::function<bool(int iteration,
                                        const std::vector<ManifoldPoint>& points,
                                        double loss)>;

enum class StopRule { MaxIterations, Callback };
enum class OptimizerMode { PseudoRiemannian, EuclideanViaPhi };

struct OptimizerConfig {
    double step_size = 1e-6;
    int max_iterations = 10000;
    StopRule stop_rule = StopRule::MaxIterations;
    StopCallback stop_callback;  // consulted when stop_rule == Callback
    std::uint64_t seed = 0;
    OptimizerMode mode = OptimizerMode::PseudoRiemannian;
    bool backtracking_line_search = false;
    int renormalize_every = 100;  // drift control period, iterations
};

struct TraceRecord {
    int iteration = 0;
    double loss = 0.0;
    double gradient_norm_sq = 0.0;  // sum over points of ||Df(x_i)||^2
};

struct OptimizeResult {
    std::vector<ManifoldPoint> points;
    std::vector<TraceRecord> trace;
    int iterations_run = 0;
    int renormalizations = 0;
};

/// Pseudo-Riemannian gradient Df(x) = Pi_x(G grad_f).
TangentVector pseudo_riemannian_gradient(const ManifoldPoint& x, const Vec& grad_f);

/// Descent direction chi = Pi_x(G Df(x)). Satisfies <Df, chi>_q = ||Df||^2,
/// and chi = 0 iff Df = 0.
TangentVector descent_direction(const ManifoldPoint& x, const Vec& grad_f);
Vec descent_direction_raw(const Vec& x, const Vec& grad_f, const Signature& sig);

/// Preconditioner P_x v = G v - x (x^T v) / <x,x>_q, so that
/// chi = P_x Df(x).
Vec precondition(const ManifoldPoint& x, const Vec& v);

/// One descent step x <- exp_x(-eta chi).
ManifoldPoint step(const ManifoldPoint& x, const Vec& grad_f, double eta);

/// Minimizes the objective over a product of manifold points following the
/// chi descent direction. Throws DivergenceError on non-finite loss or
/// gradients.
OptimizeResult optimize(const Objective& objective,
                        std::vector<ManifoldPoint> initial,
                        const OptimizerConfig& config);

/// Gradient descent on unconstrained parameters z_i mapped through phi; the
/// gradient is pulled back through the phi Jacobian. Throws
/// SingularInputError if a parameter's time part collapses to zero.
OptimizeResult optimize_via_phi(const Objective& objective,
                                std::vector<Vec> initial_params,
                                const Signature& sig,
                                const OptimizerConfig& config);

}  // namespace uh
