#pragma once

#include <optional>
#include <vector>

#include "mobext/base.hpp"

namespace mobext {

/// Point of the real projective line in homogeneous coordinates [p:q].
/// Stored canonically: [x:1] for finite points, [1:0] for infinity.
struct ProjPoint {
    double p = 0.0;
    double q = 1.0;

    ProjPoint() = default;
    explicit ProjPoint(double x) : p(x), q(1.0) {
        if (!std::isfinite(x)) throw invalid_input("ProjPoint: non-finite coordinate");
    }
    ProjPoint(double p_, double q_);

    static ProjPoint infinity() {
        ProjPoint pt;
        pt.p = 1.0;
        pt.q = 0.0;
        return pt;
    }

    bool is_infinite() const { return q == 0.0; }
    // Finite value; throws for the point at infinity.
    double value() const {
        if (is_infinite()) throw domain_error("ProjPoint::value: point at infinity");
        return p;
    }
};

bool proj_equal(const ProjPoint& x, const ProjPoint& y, double eps = kEps);

/// Element of PSL(2,R): a 2x2 real matrix with det > 0, stored with det = 1
/// and sign-canonicalized (trace >= 0; trace 0 broken by c > 0, then b > 0).
struct MoebiusMap {
    Mat2 m;

    MoebiusMap() : m(Mat2::identity()) {}
    explicit MoebiusMap(const Mat2& raw);
    MoebiusMap(double a, double b, double c, double d) : MoebiusMap(Mat2{a, b, c, d}) {}

    static MoebiusMap identity() { return MoebiusMap(); }

    MoebiusMap inverse() const { return MoebiusMap(m.adjugate()); }
    MoebiusMap operator*(const MoebiusMap& o) const { return MoebiusMap(m * o.m); }

    ProjPoint operator()(const ProjPoint& x) const;
    ProjPoint operator()(double x) const { return (*this)(ProjPoint(x)); }
};

bool almost_equal(const MoebiusMap& g, const MoebiusMap& h, double eps = kEps);

/// Projective action of an arbitrary nonsingular matrix (covers the
/// orientation-reversing involutions coming from cycles with det < 0).
ProjPoint apply(const Mat2& m, const ProjPoint& x);

enum class Orientation { positive, negative };

/// Pairwise distinct triple of projective points.
struct OrientedTriple {
    ProjPoint x1, x2, x3;

    OrientedTriple(ProjPoint a, ProjPoint b, ProjPoint c, double eps = kEps);
};

/// Positive iff x1 < x2 < x3 up to cyclic rotation, with infinity greater
/// than every real.
Orientation orientation(const OrientedTriple& t);

/// The unique Moebius map sending X component-wise onto Y.
/// Requires orientation(X) == orientation(Y).
MoebiusMap map_between_triples(const OrientedTriple& X, const OrientedTriple& Y,
                               double eps = kEps);

struct IwasawaFactors {
    Mat2 diag;      // [[e^-t, 0], [0, e^t]]
    Mat2 unipotent; // [[1, s], [0, 1]]
    Mat2 rotation;  // [[cos r, -sin r], [sin r, cos r]]
};

/// g = diag * unipotent * rotation, factors unique.
IwasawaFactors iwasawa(const MoebiusMap& g);

enum class EphClass : int {
    elliptic = -1,
    parabolic = 0,
    hyperbolic = +1,
};

inline int tau(EphClass c) { return static_cast<int>(c); }
EphClass eph_from_tau(int t);
const char* to_string(EphClass c);

struct FixedPointReport {
    int count = 0;
    std::vector<ProjPoint> points;
    EphClass eph = EphClass::parabolic;
    bool all_points_fixed = false; // identity map
};

/// Real fixed points of the Moebius action, classified by the sign of
/// trace^2 - 4 with guard band eps_class around the parabolic boundary.
FixedPointReport fixed_points(const MoebiusMap& g, double eps_class = kEpsClass);

}  // namespace mobext
