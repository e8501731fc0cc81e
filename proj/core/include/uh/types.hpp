#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace uh {

using Vec = Eigen::VectorXd;

/// Sign pattern of the ambient scalar product together with the curvature
/// parameter. A signature (p, q, beta) fixes the quadric
/// Q^{p,q}_beta = { x in R^{p,q+1} : <x,x>_q = beta } with q+1 time
/// coordinates first and p space coordinates last.
struct Signature {
    int p = 0;           // space dimensions
    int q = 0;           // q+1 = time dimensions
    double beta = -1.0;  // curvature parameter, strictly negative

    Signature() = default;
    Signature(int p_, int q_, double beta_);

    int dim() const { return p + q + 1; }
    int time_dim() const { return q + 1; }
    double abs_beta() const { return -beta; }

    bool operator==(const Signature& o) const {
        return p == o.p && q == o.q && beta == o.beta;
    }
};

/// Relative validation tolerances. The defaults are scale-aware 1e-9.
struct Tolerances {
    double manifold = 1e-9;
    double tangent = 1e-9;
};

inline constexpr Tolerances kDefaultTolerances{};

// ---------------------------------------------------------------------------
// Error types

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidSignatureError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct UnsupportedSignatureError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Input to normalize_to_manifold has <z,z>_q >= 0; no scaling lands on the
/// quadric when beta < 0.
struct NonTimelikeInputError : std::domain_error {
    double quadratic_norm;
    explicit NonTimelikeInputError(double qn)
        : std::domain_error("input is not time-like: <z,z>_q = " +
                            std::to_string(qn) + " >= 0"),
          quadratic_norm(qn) {}
};

/// y lies outside the normal neighborhood of x (<x,y>_q >= |beta|), so no
/// logarithm map exists. Carries the offending scalar product.
struct OutsideNormalNeighborhoodError : std::domain_error {
    double scalar_product;
    explicit OutsideNormalNeighborhoodError(double sp)
        : std::domain_error("point outside normal neighborhood: <x,y>_q = " +
                            std::to_string(sp) + " >= |beta|"),
          scalar_product(sp) {}
};

/// The time part of the input vanishes; the mapping phi is singular there.
struct SingularInputError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Non-finite loss or gradient encountered during optimization. Carries the
/// iteration at which the divergence was detected.
struct DivergenceError : std::runtime_error {
    int iteration;
    explicit DivergenceError(int iter, const std::string& what_)
        : std::runtime_error("divergence at iteration " +
                            std::to_string(iter) + ": " + what_),
          iteration(iter) {}
};

/// Rank correlation of a constant sequence is undefined.
struct UndefinedCorrelationError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A computation produced a non-finite intermediate value.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed graph input. Carries the 1-based line number when applicable.
struct GraphParseError : std::runtime_error {
    int line = 0;
    GraphParseError(int line_, const std::string& what_)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what_),
          line(line_) {}
    explicit GraphParseError(const std::string& what_)
        : std::runtime_error(what_) {}
};

inline void check_dim(const Vec& v, const Signature& sig, const char* where) {
    if (v.size() != sig.dim())
        throw DimensionError(std::string(where) + ": vector has dimension " +
                             std::to_string(v.size()) + ", signature requires " +
                             std::to_string(sig.dim()));
}

}  // namespace uh
