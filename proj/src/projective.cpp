#include "mobext/projective.hpp"

#include <algorithm>
#include <cmath>

namespace mobext {

ProjPoint::ProjPoint(double p_, double q_) {
    if (!std::isfinite(p_) || !std::isfinite(q_))
        throw invalid_input("ProjPoint: non-finite homogeneous coordinates");
    if (p_ == 0.0 && q_ == 0.0) throw invalid_input("ProjPoint: zero vector");
    if (q_ != 0.0) {
        p = p_ / q_;
        q = 1.0;
    } else {
        p = 1.0;
        q = 0.0;
    }
}

bool proj_equal(const ProjPoint& x, const ProjPoint& y, double eps) {
    // Cross product of the homogeneous pairs, scaled by their magnitudes.
    const double cross = x.p * y.q - y.p * x.q;
    const double sx = std::max(std::abs(x.p), std::abs(x.q));
    const double sy = std::max(std::abs(y.p), std::abs(y.q));
    return std::abs(cross) <= eps * sx * sy;
}

ProjPoint apply(const Mat2& m, const ProjPoint& x) {
    if (max_abs(m) == 0.0) throw invalid_input("apply: zero matrix");
    const double rp = m.a * x.p + m.b * x.q;
    const double rq = m.c * x.p + m.d * x.q;
    if (rp == 0.0 && rq == 0.0)
        throw invalid_input("apply: point lies in the kernel of a singular matrix");
    return ProjPoint(rp, rq);
}

MoebiusMap::MoebiusMap(const Mat2& raw) {
    const double dt = raw.det();
    if (!(dt > 0.0)) throw invalid_input("MoebiusMap: determinant must be positive");
    const double s = std::sqrt(dt);
    m = raw * (1.0 / s);

    // PSL representative: trace >= 0, ties broken by c then b. The tie zone is
    // relative to the entry scale so near-traceless maps canonicalize stably.
    const double tie = 1e-12 * std::max(1.0, max_abs(m));
    bool flip = false;
    if (m.trace() < -tie) {
        flip = true;
    } else if (std::abs(m.trace()) <= tie) {
        if (std::abs(m.c) > tie)
            flip = m.c < 0.0;
        else
            flip = m.b < 0.0;
    }
    if (flip) m = -m;
}

ProjPoint MoebiusMap::operator()(const ProjPoint& x) const { return apply(m, x); }

bool almost_equal(const MoebiusMap& g, const MoebiusMap& h, double eps) {
    return max_abs(g.m - h.m) <= eps || max_abs(g.m + h.m) <= eps;
}

OrientedTriple::OrientedTriple(ProjPoint a, ProjPoint b, ProjPoint c, double eps)
    : x1(a), x2(b), x3(c) {
    if (proj_equal(x1, x2, eps) || proj_equal(x2, x3, eps) || proj_equal(x1, x3, eps))
        throw invalid_input("OrientedTriple: points must be pairwise distinct");
}

Orientation orientation(const OrientedTriple& t) {
    // Homogeneous form of (x1-x2)(x2-x3)(x3-x1); with canonical coordinates
    // (q in {0,1}) this realizes the convention that infinity is greater than
    // every real.
    auto diff = [](const ProjPoint& x, const ProjPoint& y) { return x.p * y.q - y.p * x.q; };
    const double s = diff(t.x1, t.x2) * diff(t.x2, t.x3) * diff(t.x3, t.x1);
    return s > 0.0 ? Orientation::positive : Orientation::negative;
}

namespace {

// Sends a positively oriented triple to (0, 1, infinity): a rotation moving
// x3 to infinity, a translation moving the image of x1 to 0, then a dilation
// moving the image of x2 to 1.
Mat2 to_standard_triple(const OrientedTriple& t) {
    Mat2 rot = Mat2::identity();
    if (!t.x3.is_infinite()) {
        const double angle = std::atan2(1.0, t.x3.value()); // cot(angle) = x3
        const double cs = std::cos(angle), sn = std::sin(angle);
        rot = Mat2{cs, sn, -sn, cs};
    }
    const ProjPoint x1r = apply(rot, t.x1);
    const ProjPoint x2r = apply(rot, t.x2);
    const Mat2 shift{1.0, -x1r.value(), 0.0, 1.0};
    const ProjPoint x2s = apply(shift, x2r);
    const double w = x2s.value();
    if (!(w > 0.0))
        throw orientation_error("map_between_triples: triple is not positively oriented");
    const double r = std::sqrt(w);
    const Mat2 dil{1.0 / r, 0.0, 0.0, r};
    return dil * shift * rot;
}

OrientedTriple reflect_triple(const OrientedTriple& t, double eps) {
    const Mat2 refl{-1.0, 0.0, 0.0, 1.0};
    return {apply(refl, t.x1), apply(refl, t.x2), apply(refl, t.x3), eps};
}

}  // namespace

MoebiusMap map_between_triples(const OrientedTriple& X, const OrientedTriple& Y, double eps) {
    const Orientation ox = orientation(X), oy = orientation(Y);
    if (ox != oy)
        throw orientation_error("map_between_triples: triples have opposite orientations");
    if (ox == Orientation::negative) {
        // Conjugate the positively oriented problem by the reflection x -> -x.
        const Mat2 refl{-1.0, 0.0, 0.0, 1.0};
        const MoebiusMap inner =
            map_between_triples(reflect_triple(X, eps), reflect_triple(Y, eps), eps);
        return MoebiusMap(refl * inner.m * refl);
    }
    const Mat2 gx = to_standard_triple(X);
    const Mat2 gy = to_standard_triple(Y);
    return MoebiusMap(gy.adjugate() * gx);
}

IwasawaFactors iwasawa(const MoebiusMap& g) {
    const Mat2& m = g.m;
    const double et = std::hypot(m.c, m.d);   // e^t of the diagonal factor
    const double angle = std::atan2(m.c, m.d);
    const double cs = std::cos(angle), sn = std::sin(angle);
    const double s = (m.a * sn + m.b * cs) * et;
    return IwasawaFactors{
        Mat2{1.0 / et, 0.0, 0.0, et},
        Mat2{1.0, s, 0.0, 1.0},
        Mat2{cs, -sn, sn, cs},
    };
}

EphClass eph_from_tau(int t) {
    switch (t) {
        case -1: return EphClass::elliptic;
        case 0: return EphClass::parabolic;
        case +1: return EphClass::hyperbolic;
    }
    throw invalid_input("eph_from_tau: tau must be -1, 0 or +1");
}

const char* to_string(EphClass c) {
    switch (c) {
        case EphClass::elliptic: return "elliptic";
        case EphClass::parabolic: return "parabolic";
        case EphClass::hyperbolic: return "hyperbolic";
    }
    return "?";
}

FixedPointReport fixed_points(const MoebiusMap& g, double eps_class) {
    const Mat2& m = g.m;
    FixedPointReport rep;
    if (max_abs(m - Mat2::identity()) <= 1e-14 * std::max(1.0, max_abs(m))) {
        rep.all_points_fixed = true;
        rep.count = 0;
        rep.eph = EphClass::parabolic;
        return rep;
    }

    // Fixed points solve c s^2 + (d-a) s - b = 0; its discriminant equals
    // trace^2 - 4 for det 1, so the root count matches the eigenvalue count.
    const double tr = m.trace(); // canonical representative has tr >= 0
    const double ctol = 1e-14 * std::max(1.0, max_abs(m));
    if (std::abs(tr - 2.0) <= eps_class) {
        rep.eph = EphClass::parabolic;
        rep.count = 1;
        if (std::abs(m.c) <= ctol)
            rep.points.push_back(ProjPoint::infinity());
        else
            rep.points.push_back(ProjPoint((m.a - m.d) / (2.0 * m.c)));
    } else if (tr > 2.0) {
        rep.eph = EphClass::hyperbolic;
        rep.count = 2;
        if (std::abs(m.c) <= ctol) {
            rep.points.push_back(ProjPoint::infinity());
            rep.points.push_back(ProjPoint(m.b / (m.d - m.a)));
        } else {
            const double disc = std::sqrt(tr * tr - 4.0);
            // (a - d +/- disc) / (2c), expanded stably.
            const double h = m.a - m.d;
            const double r1 = (h + (h >= 0.0 ? disc : -disc)) / (2.0 * m.c);
            const double prod = -m.b / m.c; // product of roots
            rep.points.push_back(ProjPoint(r1));
            rep.points.push_back(ProjPoint(prod / r1));
        }
    } else {
        rep.eph = EphClass::elliptic;
        rep.count = 0;
    }
    return rep;
}

}  // namespace mobext
