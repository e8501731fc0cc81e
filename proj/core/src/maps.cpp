#include "uh/maps.hpp"

#include <algorithm>
#include <cmath>

namespace uh {

namespace {

constexpr double kMiddleBranchTol = 1e-10;  // |<x,y>_q/beta - 1| below this -> y-x branch
constexpr double kClampMargin = 1e-12;

double clamped_acosh(double u) {
    if (u < 1.0 + kClampMargin) u = std::max(u, 1.0);
    return std::acosh(u);
}

double clamped_acos(double u) {
    return std::acos(std::clamp(u, -1.0, 1.0));
}

void check_same_signature(const Signature& a, const Signature& b, const char* where) {
    if (!(a == b))
        throw DimensionError(std::string(where) + ": signatures differ");
}

}  // namespace

GeodesicClass classify_tangent(const Vec& xi, const Signature& sig, double eps_class) {
    const double n2 = quadratic_norm(xi, sig);
    if (std::abs(n2) <= eps_class * std::max(1.0, xi.squaredNorm()))
        return GeodesicClass::Null;
    return n2 > 0 ? GeodesicClass::SpaceLike : GeodesicClass::TimeLike;
}

ManifoldPoint geodesic(const ManifoldPoint& x, const TangentVector& xi, double t) {
    const Signature& sig = x.sig();
    const Vec& xv = x.vec();
    const Vec& w = xi.vec();
    const double root_b = std::sqrt(sig.abs_beta());

    switch (classify_tangent(w, sig)) {
        case GeodesicClass::Null:
            return ManifoldPoint::trusted(xv + t * w, sig);
        case GeodesicClass::SpaceLike: {
            const double n = std::sqrt(quadratic_norm(w, sig));
            const double a = t * n / root_b;
            return ManifoldPoint::trusted(
                std::cosh(a) * xv + (root_b / n) * std::sinh(a) * w, sig);
        }
        case GeodesicClass::TimeLike: {
            const double n = std::sqrt(-quadratic_norm(w, sig));
            const double a = t * n / root_b;
            return ManifoldPoint::trusted(
                std::cos(a) * xv + (root_b / n) * std::sin(a) * w, sig);
        }
    }
    throw std::logic_error("unreachable");
}

ManifoldPoint exp_map(const ManifoldPoint& x, const TangentVector& xi) {
    return geodesic(x, xi, 1.0);
}

TangentVector log_map(const ManifoldPoint& x, const ManifoldPoint& y) {
    check_same_signature(x.sig(), y.sig(), "log_map");
    const Signature& sig = x.sig();
    const double r = scalar_product(x.vec(), y.vec(), sig);
    if (r >= sig.abs_beta()) throw OutsideNormalNeighborhoodError(r);

    const double u = r / sig.beta;
    if (std::abs(u - 1.0) <= kMiddleBranchTol)
        return TangentVector::trusted(x, y.vec() - x.vec());

    Vec radial = y.vec() - u * x.vec();
    if (u > 1.0) {
        const double c = clamped_acosh(u) / std::sqrt(u * u - 1.0);
        return TangentVector::trusted(x, c * radial);
    }
    const double c = clamped_acos(u) / std::sqrt(1.0 - u * u);
    return TangentVector::trusted(x, c * radial);
}

double extrinsic_distance(const ManifoldPoint& a, const ManifoldPoint& b) {
    check_same_signature(a.sig(), b.sig(), "extrinsic_distance");
    const double r = scalar_product(a.vec(), b.vec(), a.sig());
    return std::sqrt(std::abs(2.0 * a.sig().beta - 2.0 * r));
}

double geodesic_distance(const ManifoldPoint& x, const ManifoldPoint& y) {
    check_same_signature(x.sig(), y.sig(), "geodesic_distance");
    const Signature& sig = x.sig();
    const double r = scalar_product(x.vec(), y.vec(), sig);
    if (r >= sig.abs_beta()) throw OutsideNormalNeighborhoodError(r);

    const double root_b = std::sqrt(sig.abs_beta());
    const double u = r / sig.beta;
    if (std::abs(u - 1.0) <= kMiddleBranchTol) return 0.0;
    if (u > 1.0) return root_b * clamped_acosh(u);
    return root_b * clamped_acos(u);
}

double dissimilarity_from_scalar(double r, double beta) {
    const double b = -beta;
    const double root_b = std::sqrt(b);
    if (r > 0.0) return root_b * (M_PI / 2.0 + r / b);

    const double u = r / beta;
    if (std::abs(u - 1.0) <= kMiddleBranchTol) return 0.0;
    if (u > 1.0) return root_b * clamped_acosh(u);
    return root_b * clamped_acos(u);
}

double dissimilarity(const ManifoldPoint& x, const ManifoldPoint& y) {
    check_same_signature(x.sig(), y.sig(), "dissimilarity");
    const double r = scalar_product(x.vec(), y.vec(), x.sig());
    return dissimilarity_from_scalar(r, x.sig().beta);
}

double dissimilarity_derivative(double r, double beta) {
    const double b = -beta;
    const double root_b = std::sqrt(b);
    if (r > 0.0) return 1.0 / root_b;

    const double u = r / beta;
    if (std::abs(u - 1.0) <= 1e-12) return 0.0;  // callers guard the singularity
    if (u > 1.0) return root_b / (beta * std::sqrt(u * u - 1.0));
    return -root_b / (beta * std::sqrt(1.0 - u * u));
}

SphereCrossEuclidean psi(const ManifoldPoint& x) {
    const Signature& sig = x.sig();
    const Vec t = x.vec().head(sig.time_dim());
    const Vec s = x.vec().tail(sig.p);
    return SphereCrossEuclidean{t / t.norm(), s / std::sqrt(sig.abs_beta())};
}

ManifoldPoint psi_inverse(const SphereCrossEuclidean& z, const Signature& sig) {
    if (z.u.size() != sig.time_dim() || z.v.size() != sig.p)
        throw DimensionError("psi_inverse: component dimensions do not match signature");
    if (std::abs(z.u.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("psi_inverse: u is not unit-norm");
    const double root_b = std::sqrt(sig.abs_beta());
    Vec out(sig.dim());
    out.head(sig.time_dim()) = root_b * std::sqrt(1.0 + z.v.squaredNorm()) * z.u;
    out.tail(sig.p) = root_b * z.v;
    return ManifoldPoint::trusted(std::move(out), sig);
}

ManifoldPoint phi(const Vec& z, const Signature& sig) {
    check_dim(z, sig, "phi");
    const Vec t = z.head(sig.time_dim());
    const double nt = t.norm();
    if (nt == 0.0)
        throw SingularInputError("phi: time part of the input is zero");
    const Vec s = z.tail(sig.p);
    const double a = std::sqrt(sig.abs_beta() + s.squaredNorm());
    Vec out(sig.dim());
    out.head(sig.time_dim()) = (a / nt) * t;
    out.tail(sig.p) = s;
    return ManifoldPoint::trusted(std::move(out), sig);
}

Vec phi_jvp(const Vec& z, const Vec& dz, const Signature& sig) {
    check_dim(z, sig, "phi_jvp");
    check_dim(dz, sig, "phi_jvp");
    const int td = sig.time_dim();
    const Vec t = z.head(td);
    const Vec s = z.tail(sig.p);
    const Vec dt = dz.head(td);
    const Vec ds = dz.tail(sig.p);
    const double nt = t.norm();
    if (nt == 0.0)
        throw SingularInputError("phi_jvp: time part of the input is zero");

    const double a = std::sqrt(sig.abs_beta() + s.squaredNorm());
    const double da = s.dot(ds) / a;
    const Vec w = t / nt;
    const Vec dw = dt / nt - t * (t.dot(dt)) / (nt * nt * nt);

    Vec out(sig.dim());
    out.head(td) = da * w + a * dw;
    out.tail(sig.p) = ds;
    return out;
}

Vec anti_isometry(const Vec& x, const Signature& sig) {
    check_dim(x, sig, "anti_isometry");
    if (sig.p < 1)
        throw UnsupportedSignatureError("anti_isometry requires p >= 1");
    return x.reverse();
}

}  // namespace uh
