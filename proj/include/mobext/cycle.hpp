#pragma once

#include <optional>
#include <utility>

#include "mobext/projective.hpp"

namespace mobext {

/// Bilinear form with parameter vector (n, l, k, m) and matrix
/// [[l+n, -m], [k, -l+n]]. Defined projectively: Q ~ lambda*Q.
/// Endpoint cycles C_xy are the trace-free case n = 0.
struct Cycle {
    double n = 0.0, l = 0.0, k = 0.0, m = 0.0;

    Cycle() = default;
    Cycle(double n_, double l_, double k_, double m_);

    Mat2 matrix() const { return {l + n, -m, k, -l + n}; }
    static Cycle from_matrix(const Mat2& a) {
        return {0.5 * (a.a + a.d), 0.5 * (a.a - a.d), a.c, -a.b};
    }

    double norm() const { return std::sqrt(n * n + l * l + k * k + m * m); }

    /// Scale so the first sufficiently large component of (k, l, n, m) is 1.
    Cycle normalized(double eps = kEps) const;

    Cycle operator*(double s) const { return {n * s, l * s, k * s, m * s}; }
};

bool cycle_proportional(const Cycle& a, const Cycle& b, double eps = kEps);

/// Cycle through the pair {x, y}: half of M_xy times its dual, i.e.
/// [[(x+y)/2, -xy], [1, -(x+y)/2]] for finite points. det = -(x-y)^2/4.
Cycle cycle_from_endpoints(const ProjPoint& x, const ProjPoint& y);
inline Cycle cycle_from_endpoints(double x, double y) {
    return cycle_from_endpoints(ProjPoint(x), ProjPoint(y));
}

/// Column-to-row dual on matrices: [[x1,y1],[x2,y2]] -> [[y2,-y1],[x2,-x1]].
/// Intertwines left multiplication by g with right multiplication by adj(g).
Mat2 dual(const Mat2& m);

/// Invariant pairing <Q,R>_tau = tr(Q_tau R) = 2*l*l' - 2*tau*n*n' - k*m' - m*k'.
/// Sign fixed so the self-pairing of C_xy is (x-y)^2/2 >= 0.
double pairing(const Cycle& q, const Cycle& r, EphClass tau);

/// g Q g^-1 repacked as a cycle; sends C_xy to C_{g.x, g.y}, keeps n fixed.
Cycle conjugate(const MoebiusMap& g, const Cycle& q);

/// 4x4 matrix acting on (n, l, k, m) equivalently to conjugation by g.
Mat4 linear_action_matrix(const MoebiusMap& g);

/// Matrix of the pairing in (n, l, k, m) coordinates.
Mat4 pairing_matrix(EphClass tau);

/// Scale-invariant test |<Q,Q>_tau| <= eps * |Q|^2.
bool is_isotropic(const Cycle& q, EphClass tau, double eps = kEps);

struct PlanePoint {
    double u = 0.0;
    double v = 0.0;
};

/// Point (u, v) = (l/k, n/k) of a normalized tau-isotropic form;
/// nullopt when k = 0 (point at infinity of the extended plane).
std::optional<PlanePoint> isotropic_to_point(const Cycle& q, EphClass tau, double eps = kEps);

/// Isotropic form [[u+v, -u^2+tau*v^2], [1, -u+v]] of the point (u, v).
Cycle point_to_isotropic(double u, double v, EphClass tau);

/// Quadratic curve k(u^2 - tau*v^2) - 2lu - 2nv + m = 0.
struct QuadraticCurve {
    double k = 0.0, l = 0.0, n = 0.0, m = 0.0;
    EphClass tau = EphClass::elliptic;

    double residual(double u, double v) const;
    bool contains(double u, double v, double eps = kEps) const;
};

QuadraticCurve curve_from_cycle(const Cycle& q, EphClass tau);
inline Cycle cycle_from_curve(const QuadraticCurve& c) { return {c.n, c.l, c.k, c.m}; }

/// The form [[x, -xy], [1, -y]]; e-orthogonal to [[a,b],[c,d]] exactly when
/// ax + b - cxy - dy = 0, i.e. when the matrix maps x to y.
Cycle incidence_form(double x, double y);

/// Endpoints {x, y} of a trace-free cycle with det <= 0.
std::pair<ProjPoint, ProjPoint> endpoints(const Cycle& q, double eps = kEps);

/// The real line as a bilinear form, normalized to diag(1,1)/sqrt(2).
Cycle real_line_form();

}  // namespace mobext
