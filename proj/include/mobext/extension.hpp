#pragma once

#include <optional>
#include <vector>

#include "mobext/cycle.hpp"

namespace mobext {

/// Ordered pair of distinct projective points.
struct Interval {
    ProjPoint x, y;

    Interval(ProjPoint x_, ProjPoint y_, double eps = kEps) : x(x_), y(y_) {
        if (proj_equal(x, y, eps)) throw invalid_input("Interval: endpoints must be distinct");
    }
    Interval(double x_, double y_) : Interval(ProjPoint(x_), ProjPoint(y_)) {}
};

/// Three intervals whose start-point and end-point triples have the same
/// orientation. Validated at construction.
struct IntervalTriple {
    Interval i1, i2, i3;

    IntervalTriple(Interval a, Interval b, Interval c, double eps = kEps);

    OrientedTriple starts() const { return {i1.x, i2.x, i3.x}; }
    OrientedTriple ends() const { return {i1.y, i2.y, i3.y}; }
};

/// Point of the upper half-plane carrying its geometry type.
struct ExtensionPoint {
    double u = 0.0;
    double v = 0.0;
    EphClass tau = EphClass::elliptic;
};

/// Intersection of the semicircles with diameters [x,y] and [x',y'],
/// x < x' < y < y'.
ExtensionPoint elliptic_extension_point(double x, double y, double xp, double yp);

/// Intersection of the right-angle hyperbolas with vertices at the interval
/// endpoints, x < y < x' < y'.
ExtensionPoint hyperbolic_extension_point(double x, double y, double xp, double yp);

/// Common point of the two downward parabolas with roots (x,y), (x',y') and
/// focus on the real axis; of the two intersections, the one between the
/// vertices is returned, with v >= 0.
ExtensionPoint parabolic_extension_point(double x, double y, double xp, double yp);

struct TripleClassification {
    double discriminant = 0.0;
    EphClass cls = EphClass::parabolic;
};

/// Sign of the fixed-point discriminant of phi_XY, evaluated directly from
/// the six endpoints (squared middle determinant minus four times the product
/// of the outer two); guard band eps_class around zero.
TripleClassification classify_triple(const IntervalTriple& t, double eps_class = kEpsClass);

/// exp(t * X) for trace-free X, via X^2 = -det(X) I.
Mat2 flow(const Mat2& generator, double t);

/// One-parameter subgroup psi(t) = exp(t * generator) together with a
/// conjugator g such that g psi(t) g^-1 lies in H_tau = {[[a, tau*b],[b, a]]}.
struct OneParamSubgroup {
    Mat2 generator;      // trace-free; det > 0 elliptic, = 0 parabolic, < 0 hyperbolic
    MoebiusMap conjugator;
    EphClass cls = EphClass::parabolic;

    Mat2 at(double t) const { return flow(generator, t); }
};

/// Logarithm of phi with phi = exp(generator), classified by trace with
/// guard band eps_class at the parabolic boundary |tr - 2|.
OneParamSubgroup subgroup_from_map(const MoebiusMap& phi, double eps_class = kEpsClass);

/// Parameter t with psi(t) mapping `from` to `to` along the subgroup's orbit.
double flow_time(const OneParamSubgroup& sub, const ProjPoint& from, const ProjPoint& to,
                 double eps = kEps);

struct TripleFlow {
    OneParamSubgroup subgroup;
    MoebiusMap phi;   // psi(1), the triple map of the endpoint triples
    double t2 = 0.0;  // psi(t2) maps interval 1 to interval 2
    double t3 = 0.0;  // psi(t3) maps interval 1 to interval 3
};

/// The subgroup through phi_XY and the parameters moving interval 1 onto
/// intervals 2 and 3 (endpoints reflected into one orbit in the
/// two-fixed-point case).
TripleFlow subgroup_from_triple(const IntervalTriple& t, double eps = kEps,
                                double eps_class = kEpsClass);

/// Member [x, (x + tau*t)/(t*x + 1)] of the H_tau-invariant interval family.
Interval invariant_interval(EphClass tau, double t, double x);

/// Parameter t of the H_tau element mapping x to y: t = (x - y)/(x*y - tau).
/// Returns infinity when x*y = tau.
double flow_parameter(double x, double y, EphClass tau);

/// The form [[ (x+y+xy-tau)/2, -xy ], [ 1, (-x-y+xy-tau)/2 ]], e-orthogonal
/// to C_xx, C_yy and to the base isotropic form of the point (0,1).
Cycle orthogonal_form_through(double x, double y, EphClass tau, double eps = kEps);

/// Cosine of the angle between the curve of Q and the real line:
/// -n / sqrt(|l^2 + n^2 - k m|).
double cosine_to_real_line(const Cycle& q, double eps = kEps);

/// tau-isotropic forms e-orthogonal to both cycles (0, 1 or 2 solutions).
std::vector<Cycle> common_point_forms(const Cycle& c1, const Cycle& c2, EphClass tau,
                                      double eps = kEps);

/// Common points of the quadratic curves of c1 and c2 in the tau-geometry,
/// reported as v >= 0 representatives, deduplicated.
std::vector<ExtensionPoint> common_points(const Cycle& c1, const Cycle& c2, EphClass tau,
                                          double eps = kEps);

struct ExtensionResult {
    EphClass cls = EphClass::parabolic;
    Cycle form;                      // flow-invariant tau-isotropic form, normalized
    std::optional<PlanePoint> point; // nullopt: point at infinity (k = 0)
};

/// The generalized extension of an aligned interval triple: recover the
/// one-parameter subgroup, classify it, and return its invariant isotropic
/// form together with the upper half-plane point it represents.
ExtensionResult extend_triple(const IntervalTriple& t, double eps = kEps,
                              double eps_class = kEpsClass);

}  // namespace mobext
