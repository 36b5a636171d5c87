#include "mobext/cycle.hpp"

#include <algorithm>
#include <cmath>

namespace mobext {

Cycle::Cycle(double n_, double l_, double k_, double m_) : n(n_), l(l_), k(k_), m(m_) {
    if (!std::isfinite(n) || !std::isfinite(l) || !std::isfinite(k) || !std::isfinite(m))
        throw invalid_input("Cycle: non-finite components");
    if (n == 0.0 && l == 0.0 && k == 0.0 && m == 0.0)
        throw invalid_input("Cycle: zero form");
}

Cycle Cycle::normalized(double eps) const {
    const double scale = norm();
    for (double pivot : {k, l, n, m}) {
        if (std::abs(pivot) > eps * scale) return (*this) * (1.0 / pivot);
    }
    return *this;
}

bool cycle_proportional(const Cycle& a, const Cycle& b, double eps) {
    const double va[4] = {a.n, a.l, a.k, a.m};
    const double vb[4] = {b.n, b.l, b.k, b.m};
    const double scale = a.norm() * b.norm();
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (std::abs(va[i] * vb[j] - va[j] * vb[i]) > eps * scale) return false;
    return true;
}

Cycle cycle_from_endpoints(const ProjPoint& x, const ProjPoint& y) {
    // Half of [[p,r],[q,s]] * dual of itself, in homogeneous coordinates.
    const double p = x.p, q = x.q, r = y.p, s = y.q;
    return {0.0, 0.5 * (p * s + q * r), q * s, p * r};
}

Mat2 dual(const Mat2& m) { return {m.d, -m.b, m.c, -m.a}; }

double pairing(const Cycle& q, const Cycle& r, EphClass tau) {
    const double t = static_cast<double>(mobext::tau(tau));
    return 2.0 * q.l * r.l - 2.0 * t * q.n * r.n - q.k * r.m - q.m * r.k;
}

Cycle conjugate(const MoebiusMap& g, const Cycle& q) {
    return Cycle::from_matrix(g.m * q.matrix() * g.m.adjugate());
}

Mat4 linear_action_matrix(const MoebiusMap& g) {
    const double a = g.m.a, b = g.m.b, c = g.m.c, d = g.m.d;
    return Mat4{{
        {{1.0, 0.0, 0.0, 0.0}},
        {{0.0, c * b + a * d, b * d, c * a}},
        {{0.0, 2.0 * c * d, d * d, c * c}},
        {{0.0, 2.0 * a * b, b * b, a * a}},
    }};
}

Mat4 pairing_matrix(EphClass tau) {
    const double t = static_cast<double>(mobext::tau(tau));
    return Mat4{{
        {{-2.0 * t, 0.0, 0.0, 0.0}},
        {{0.0, 2.0, 0.0, 0.0}},
        {{0.0, 0.0, 0.0, -1.0}},
        {{0.0, 0.0, -1.0, 0.0}},
    }};
}

bool is_isotropic(const Cycle& q, EphClass tau, double eps) {
    const double nq = q.norm();
    return std::abs(pairing(q, q, tau)) <= eps * nq * nq;
}

std::optional<PlanePoint> isotropic_to_point(const Cycle& q, EphClass tau, double eps) {
    const double nq = q.norm();
    if (std::abs(pairing(q, q, tau)) > 1e-6 * nq * nq)
        throw domain_error("isotropic_to_point: form is not tau-isotropic");
    if (std::abs(q.k) <= eps * nq) return std::nullopt;
    return PlanePoint{q.l / q.k, q.n / q.k};
}

Cycle point_to_isotropic(double u, double v, EphClass tau) {
    const double t = static_cast<double>(mobext::tau(tau));
    return {v, u, 1.0, u * u - t * v * v};
}

double QuadraticCurve::residual(double u, double v) const {
    const double t = static_cast<double>(mobext::tau(tau));
    return k * (u * u - t * v * v) - 2.0 * l * u - 2.0 * n * v + m;
}

bool QuadraticCurve::contains(double u, double v, double eps) const {
    const double scale = std::max(1.0, std::abs(k) * (u * u + v * v) + 2.0 * std::abs(l * u) +
                                           2.0 * std::abs(n * v) + std::abs(m));
    return std::abs(residual(u, v)) <= eps * scale;
}

QuadraticCurve curve_from_cycle(const Cycle& q, EphClass tau) {
    return QuadraticCurve{q.k, q.l, q.n, q.m, tau};
}

Cycle incidence_form(double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y))
        throw invalid_input("incidence_form: endpoints must be finite");
    return {0.5 * (x - y), 0.5 * (x + y), 1.0, x * y};
}

std::pair<ProjPoint, ProjPoint> endpoints(const Cycle& q, double eps) {
    const double scale = q.norm();
    if (std::abs(q.n) > eps * scale)
        throw domain_error("endpoints: cycle is not trace-free");
    // Roots of k s^2 - 2 l s + m = 0 (the fixed points of the cycle as a map).
    double disc = q.l * q.l - q.k * q.m;
    if (disc < -eps * scale * scale)
        throw domain_error("endpoints: cycle has positive determinant, no real endpoints");
    disc = std::max(disc, 0.0);
    if (std::abs(q.k) <= eps * scale) {
        if (std::abs(q.l) <= eps * scale)
            return {ProjPoint::infinity(), ProjPoint::infinity()};
        return {ProjPoint(q.m / (2.0 * q.l)), ProjPoint::infinity()};
    }
    const double root = std::sqrt(disc);
    const double r1 = (q.l + std::copysign(root, q.l)) / q.k;
    if (r1 == 0.0) return {ProjPoint(0.0), ProjPoint(0.0)};
    return {ProjPoint(r1), ProjPoint(q.m / (q.k * r1))};
}

Cycle real_line_form() {
    const double h = 1.0 / std::sqrt(2.0);
    return {h, 0.0, 0.0, 0.0};
}

}  // namespace mobext
