#pragma once

#include "uh/geometry.hpp"

namespace uh {

/// Causal character of a tangent vector, by the sign of <xi,xi>_q.
enum class GeodesicClass { TimeLike, Null, SpaceLike };

/// Relative tolerance for classifying <xi,xi>_q as zero. The trig and
/// hyperbolic branches both limit to x + t xi as <xi,xi>_q -> 0, so
/// misclassification error is of the same order.
inline constexpr double kNullClassTolerance = 1e-10;

GeodesicClass classify_tangent(const Vec& xi, const Signature& sig,
                               double eps_class = kNullClassTolerance);

/// Geodesic gamma_{x->xi}(t); defined for all real t.
ManifoldPoint geodesic(const ManifoldPoint& x, const TangentVector& xi, double t);

/// exp_x(xi) = gamma_{x->xi}(1). Total on the tangent space.
ManifoldPoint exp_map(const ManifoldPoint& x, const TangentVector& xi);

/// log_x(y), the inverse of exp_x on the normal neighborhood
/// U_x = { y : <x,y>_q < |beta| }. Throws OutsideNormalNeighborhoodError
/// for <x,y>_q >= |beta|.
TangentVector log_map(const ManifoldPoint& x, const ManifoldPoint& y);

/// Ambient-space distance sqrt|2 beta - 2 <a,b>_q|.
double extrinsic_distance(const ManifoldPoint& a, const ManifoldPoint& b);

/// Arc-length of the radial geodesic from x to y. Same domain and error as
/// log_map.
double geodesic_distance(const ManifoldPoint& x, const ManifoldPoint& y);

/// Continuous symmetric premetric defined on the whole manifold: the geodesic
/// distance for <x,y>_q <= 0, and the linear continuation
/// sqrt|beta| (pi/2 + <x,y>_q / |beta|) otherwise.
double dissimilarity(const ManifoldPoint& x, const ManifoldPoint& y);

/// Premetric value as a function of r = <x,y>_q alone.
double dissimilarity_from_scalar(double r, double beta);

/// Derivative of dissimilarity_from_scalar with respect to r. Near the
/// r/beta = 1 singularity (coincident points) the derivative is unbounded;
/// callers are expected to guard that region.
double dissimilarity_derivative(double r, double beta);

/// Point of S^q x R^p, the image of the diffeomorphism psi.
struct SphereCrossEuclidean {
    Vec u;  // unit (q+1)-vector
    Vec v;  // unconstrained p-vector
};

/// psi(x) = (t/||t||, s/sqrt|beta|) for x = (t; s).
SphereCrossEuclidean psi(const ManifoldPoint& x);

/// psi^{-1}(u, v) = sqrt|beta| (sqrt(1+||v||^2) u ; v). Throws on non-unit u.
ManifoldPoint psi_inverse(const SphereCrossEuclidean& z, const Signature& sig);

/// phi = psi^{-1} o psi extended to ambient vectors with nonzero time part.
/// Fixes points already on the manifold. Throws SingularInputError when the
/// time part vanishes.
ManifoldPoint phi(const Vec& z, const Signature& sig);

/// Directional derivative of phi at z along dz.
Vec phi_jvp(const Vec& z, const Vec& dz, const Signature& sig);

/// Coordinate reversal sigma(x) = (x_{p+q}, ..., x_0). Negates scalar
/// products between the source product signature (p, q) and the target
/// (p' = q+1, q' = p-1); sends Q^{p,q}_beta points onto Q^{q+1,p-1}_{-beta}.
/// Requires p >= 1.
Vec anti_isometry(const Vec& x, const Signature& sig);

}  // namespace uh
