#include "uh/geometry.hpp"

#include <algorithm>

namespace uh {

Signature::Signature(int p_, int q_, double beta_) : p(p_), q(q_), beta(beta_) {
    if (p < 0 || q < 0 || p + q < 1)
        throw InvalidSignatureError("signature requires p, q >= 0 and p + q >= 1");
    if (!(beta < 0.0) || !std::isfinite(beta))
        throw InvalidSignatureError("signature requires finite beta < 0");
}

double scalar_product(const Vec& a, const Vec& b, const Signature& sig) {
    check_dim(a, sig, "scalar_product");
    check_dim(b, sig, "scalar_product");
    const int t = sig.time_dim();
    return -a.head(t).dot(b.head(t)) + a.tail(sig.p).dot(b.tail(sig.p));
}

double quadratic_norm(const Vec& a, const Signature& sig) {
    check_dim(a, sig, "quadratic_norm");
    const int t = sig.time_dim();
    return -a.head(t).squaredNorm() + a.tail(sig.p).squaredNorm();
}

Vec metric_apply(const Vec& a, const Signature& sig) {
    check_dim(a, sig, "metric_apply");
    Vec out = a;
    out.head(sig.time_dim()) = -out.head(sig.time_dim());
    return out;
}

double manifold_defect(const Vec& x, const Signature& sig) {
    return std::abs(quadratic_norm(x, sig) - sig.beta);
}

ManifoldPoint ManifoldPoint::checked(Vec v, const Signature& sig,
                                     const Tolerances& tol) {
    check_dim(v, sig, "ManifoldPoint");
    if (!v.allFinite())
        throw DimensionError("ManifoldPoint: non-finite coordinates");
    const double defect = manifold_defect(v, sig);
    if (defect > tol.manifold * std::max(1.0, sig.abs_beta()))
        throw InvalidSignatureError(
            "point is off the manifold: |<x,x>_q - beta| = " +
            std::to_string(defect));
    return ManifoldPoint(std::move(v), sig);
}

ManifoldPoint ManifoldPoint::trusted(Vec v, const Signature& sig) {
    // Round-off in geodesic formulas grows with the coordinate scale, so the
    // debug check uses a scale-aware slack rather than tol_manifold.
    assert(manifold_defect(v, sig) <=
           1e-6 * std::max({1.0, sig.abs_beta(), v.squaredNorm()}));
    return ManifoldPoint(std::move(v), sig);
}

TangentVector TangentVector::checked(const ManifoldPoint& base, Vec v,
                                     const Tolerances& tol) {
    check_dim(v, base.sig(), "TangentVector");
    const double sp = scalar_product(base.vec(), v, base.sig());
    const double scale = std::max(1.0, base.vec().norm() * v.norm());
    if (std::abs(sp) > tol.tangent * scale)
        throw InvalidSignatureError("vector is not tangent: <x,xi>_q = " +
                                    std::to_string(sp));
    return TangentVector(base, std::move(v));
}

TangentVector TangentVector::trusted(const ManifoldPoint& base, Vec v) {
    assert(std::abs(scalar_product(base.vec(), v, base.sig())) <=
           1e-6 * std::max(1.0, base.vec().norm() * v.norm()));
    return TangentVector(base, std::move(v));
}

Vec project_to_tangent_raw(const Vec& x, const Vec& z, const Signature& sig) {
    const double zx = scalar_product(z, x, sig);
    const double xx = quadratic_norm(x, sig);
    return z - (zx / xx) * x;
}

TangentVector project_to_tangent(const ManifoldPoint& x, const Vec& z) {
    check_dim(z, x.sig(), "project_to_tangent");
    return TangentVector::trusted(x, project_to_tangent_raw(x.vec(), z, x.sig()));
}

ManifoldPoint normalize_to_manifold(const Vec& z, const Signature& sig) {
    check_dim(z, sig, "normalize_to_manifold");
    const double qn = quadratic_norm(z, sig);
    if (!(qn < 0.0)) throw NonTimelikeInputError(qn);
    Vec out = std::sqrt(sig.abs_beta() / -qn) * z;
    return ManifoldPoint::trusted(std::move(out), sig);
}

}  // namespace uh
