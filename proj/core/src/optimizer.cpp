#include "uh/optimizer.hpp"

#include <cmath>

namespace uh {

namespace {

bool finite(const Vec& v) { return v.allFinite(); }

void check_gradient_count(const ObjectiveEvaluation& eval, std::size_t n, int iter) {
    if (eval.euclidean_gradients.size() != n)
        throw DivergenceError(iter, "objective returned " +
                                        std::to_string(eval.euclidean_gradients.size()) +
                                        " gradients for " + std::to_string(n) + " points");
}

}  // namespace

TangentVector pseudo_riemannian_gradient(const ManifoldPoint& x, const Vec& grad_f) {
    check_dim(grad_f, x.sig(), "pseudo_riemannian_gradient");
    return project_to_tangent(x, metric_apply(grad_f, x.sig()));
}

Vec descent_direction_raw(const Vec& x, const Vec& grad_f, const Signature& sig) {
    Vec df = project_to_tangent_raw(x, metric_apply(grad_f, sig), sig);
    return project_to_tangent_raw(x, metric_apply(df, sig), sig);
}

TangentVector descent_direction(const ManifoldPoint& x, const Vec& grad_f) {
    check_dim(grad_f, x.sig(), "descent_direction");
    return TangentVector::trusted(x, descent_direction_raw(x.vec(), grad_f, x.sig()));
}

Vec precondition(const ManifoldPoint& x, const Vec& v) {
    check_dim(v, x.sig(), "precondition");
    const double xx = quadratic_norm(x.vec(), x.sig());
    return metric_apply(v, x.sig()) - (x.vec().dot(v) / xx) * x.vec();
}

ManifoldPoint step(const ManifoldPoint& x, const Vec& grad_f, double eta) {
    Vec chi = descent_direction_raw(x.vec(), grad_f, x.sig());
    return exp_map(x, TangentVector::trusted(x, -eta * chi));
}

OptimizeResult optimize(const Objective& objective,
                        std::vector<ManifoldPoint> initial,
                        const OptimizerConfig& config) {
    if (config.step_size <= 0.0)
        throw std::invalid_argument("optimize: step size must be positive");
    OptimizeResult result;
    result.points = std::move(initial);
    const std::size_t n = result.points.size();
    result.trace.reserve(config.max_iterations);

    for (int iter = 0; iter < config.max_iterations; ++iter) {
        ObjectiveEvaluation eval = objective(result.points);
        check_gradient_count(eval, n, iter);
        if (!std::isfinite(eval.value))
            throw DivergenceError(iter, "non-finite loss");

        double grad_norm_sq = 0.0;
        std::vector<Vec> chis(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Vec& g = eval.euclidean_gradients[i];
            if (!finite(g)) throw DivergenceError(iter, "non-finite gradient");
            const ManifoldPoint& x = result.points[i];
            Vec df = project_to_tangent_raw(x.vec(), metric_apply(g, x.sig()), x.sig());
            grad_norm_sq += df.squaredNorm();
            chis[i] = project_to_tangent_raw(x.vec(), metric_apply(df, x.sig()), x.sig());
        }
        result.trace.push_back({iter, eval.value, grad_norm_sq});
        result.iterations_run = iter + 1;

        if (config.stop_rule == StopRule::Callback && config.stop_callback &&
            config.stop_callback(iter, result.points, eval.value))
            break;

        double eta = config.step_size;
        std::vector<ManifoldPoint> next;
        next.reserve(n);
        for (int attempt = 0;; ++attempt) {
            next.clear();
            for (std::size_t i = 0; i < n; ++i) {
                const ManifoldPoint& x = result.points[i];
                next.push_back(exp_map(x, TangentVector::trusted(x, -eta * chis[i])));
            }
            if (!config.backtracking_line_search) break;
            if (attempt >= 30) break;
            double candidate = objective(next).value;
            if (std::isfinite(candidate) && candidate <= eval.value) break;
            eta *= 0.5;
        }
        result.points = std::move(next);

        if (config.renormalize_every > 0 &&
            (iter + 1) % config.renormalize_every == 0) {
            for (std::size_t i = 0; i < n; ++i) {
                const Signature& sig = result.points[i].sig();
                if (manifold_defect(result.points[i].vec(), sig) >
                    kDefaultTolerances.manifold * std::max(1.0, sig.abs_beta()))
                    ++result.renormalizations;
                result.points[i] = normalize_to_manifold(result.points[i].vec(), sig);
            }
        }
    }
    return result;
}

OptimizeResult optimize_via_phi(const Objective& objective,
                                std::vector<Vec> initial_params,
                                const Signature& sig,
                                const OptimizerConfig& config) {
    if (config.step_size <= 0.0)
        throw std::invalid_argument("optimize_via_phi: step size must be positive");
    const std::size_t n = initial_params.size();
    const int d = sig.dim();
    OptimizeResult result;
    result.trace.reserve(config.max_iterations);

    std::vector<Vec> params = std::move(initial_params);
    auto map_all = [&](const std::vector<Vec>& zs) {
        std::vector<ManifoldPoint> pts;
        pts.reserve(zs.size());
        for (const Vec& z : zs) pts.push_back(phi(z, sig));
        return pts;
    };

    // Jacobian of phi at z assembled column-wise from JVPs on basis vectors.
    auto pullback = [&](const Vec& z, const Vec& g) {
        Vec out(d);
        Vec basis = Vec::Zero(d);
        for (int k = 0; k < d; ++k) {
            basis[k] = 1.0;
            out[k] = phi_jvp(z, basis, sig).dot(g);
            basis[k] = 0.0;
        }
        return out;
    };

    result.points = map_all(params);
    for (int iter = 0; iter < config.max_iterations; ++iter) {
        ObjectiveEvaluation eval = objective(result.points);
        check_gradient_count(eval, n, iter);
        if (!std::isfinite(eval.value))
            throw DivergenceError(iter, "non-finite loss");

        double grad_norm_sq = 0.0;
        std::vector<Vec> pulled(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!finite(eval.euclidean_gradients[i]))
                throw DivergenceError(iter, "non-finite gradient");
            pulled[i] = pullback(params[i], eval.euclidean_gradients[i]);
            grad_norm_sq += pulled[i].squaredNorm();
        }
        result.trace.push_back({iter, eval.value, grad_norm_sq});
        result.iterations_run = iter + 1;

        if (config.stop_rule == StopRule::Callback && config.stop_callback &&
            config.stop_callback(iter, result.points, eval.value))
            break;

        for (std::size_t i = 0; i < n; ++i)
            params[i] -= config.step_size * pulled[i];
        result.points = map_all(params);  // throws SingularInputError on collapse
    }
    return result;
}

}  // namespace uh
