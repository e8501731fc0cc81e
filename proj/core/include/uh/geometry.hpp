#pragma once

#include "uh/types.hpp"

#include <cassert>
#include <cmath>

namespace uh {

/// Indefinite scalar product <a,b>_q = -sum_{i<=q} a_i b_i + sum_{j>q} a_j b_j.
double scalar_product(const Vec& a, const Vec& b, const Signature& sig);

/// Quadratic form <a,a>_q. May be negative, zero, or positive.
double quadratic_norm(const Vec& a, const Signature& sig);

/// Applies the diagonal metric matrix G = I_{q+1,p}: negates the time
/// coordinates, leaves the space coordinates. Involution.
Vec metric_apply(const Vec& a, const Signature& sig);

/// |<x,x>_q - beta| for diagnostics and validation.
double manifold_defect(const Vec& x, const Signature& sig);

class TangentVector;

/// A point constrained to <x,x>_q = beta. The checked factory validates the
/// invariant; the trusted path is for outputs that are on the quadric by
/// construction and only asserts in debug builds.
class ManifoldPoint {
  public:
    static ManifoldPoint checked(Vec v, const Signature& sig,
                                 const Tolerances& tol = kDefaultTolerances);
    static ManifoldPoint trusted(Vec v, const Signature& sig);

    const Vec& vec() const { return v_; }
    const Signature& sig() const { return sig_; }
    int dim() const { return sig_.dim(); }

  private:
    ManifoldPoint(Vec v, const Signature& sig) : v_(std::move(v)), sig_(sig) {}
    Vec v_;
    Signature sig_;
};

/// A tangent vector <x,xi>_q = 0 anchored at its base point.
class TangentVector {
  public:
    static TangentVector checked(const ManifoldPoint& base, Vec v,
                                 const Tolerances& tol = kDefaultTolerances);
    static TangentVector trusted(const ManifoldPoint& base, Vec v);

    const Vec& vec() const { return v_; }
    const ManifoldPoint& base() const { return base_; }

  private:
    TangentVector(const ManifoldPoint& base, Vec v)
        : base_(base), v_(std::move(v)) {}
    ManifoldPoint base_;
    Vec v_;
};

/// Orthogonal projection of an ambient vector onto the tangent space at x:
/// Pi_x(z) = z - (<z,x>_q / <x,x>_q) x.
TangentVector project_to_tangent(const ManifoldPoint& x, const Vec& z);

/// Same projection without the tangent wrapper, for hot loops.
Vec project_to_tangent_raw(const Vec& x, const Vec& z, const Signature& sig);

/// Scales a time-like vector onto the quadric: sqrt|beta| z / sqrt|<z,z>_q|.
/// Throws NonTimelikeInputError when <z,z>_q >= 0.
ManifoldPoint normalize_to_manifold(const Vec& z, const Signature& sig);

}  // namespace uh
