#include "mobext/extension.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace mobext {

namespace {

double det3(const std::array<std::array<double, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

void require_order(bool ok, const char* what) {
    if (!ok) throw domain_error(what);
}

}  // namespace

IntervalTriple::IntervalTriple(Interval a, Interval b, Interval c, double eps)
    : i1(a), i2(b), i3(c) {
    const OrientedTriple xs{i1.x, i2.x, i3.x, eps};
    const OrientedTriple ys{i1.y, i2.y, i3.y, eps};
    if (orientation(xs) != orientation(ys))
        throw orientation_error(
            "IntervalTriple: endpoint triples have opposite orientations");
}

ExtensionPoint elliptic_extension_point(double x, double y, double xp, double yp) {
    require_order(x < xp && xp < y && y < yp,
                  "elliptic_extension_point: expected x < x' < y < y'");
    const double denom = x + y - xp - yp;
    if (denom == 0.0) {
        // Unreachable under the strict ordering; solve the circles directly.
        const double c1 = 0.5 * (x + y), r1 = 0.5 * (y - x);
        const double c2 = 0.5 * (xp + yp), r2 = 0.5 * (yp - xp);
        if (c1 == c2) throw domain_error("elliptic_extension_point: concentric circles");
        const double u = (r1 * r1 - r2 * r2 - c1 * c1 + c2 * c2) / (2.0 * (c2 - c1));
        return {u, std::sqrt(std::max(r1 * r1 - (u - c1) * (u - c1), 0.0)),
                EphClass::elliptic};
    }
    const double u = (x * y - xp * yp) / denom;
    const double rad = std::max((x - yp) * (x - xp) * (xp - y) * (y - yp), 0.0);
    return {u, std::abs(std::sqrt(rad) / denom), EphClass::elliptic};
}

ExtensionPoint hyperbolic_extension_point(double x, double y, double xp, double yp) {
    require_order(x < y && y < xp && xp < yp,
                  "hyperbolic_extension_point: expected x < y < x' < y'");
    const double denom = x + y - xp - yp; // strictly negative under the ordering
    const double u = (x * y - xp * yp) / denom;
    const double rad = std::max((x - yp) * (x - xp) * (xp - y) * (yp - y), 0.0);
    return {u, std::abs(std::sqrt(rad) / denom), EphClass::hyperbolic};
}

ExtensionPoint parabolic_extension_point(double x, double y, double xp, double yp) {
    require_order(x < y && xp < yp, "parabolic_extension_point: expected x < y and x' < y'");
    if (x == xp && y == yp)
        throw invalid_input("parabolic_extension_point: intervals must be distinct");
    const double scale = std::max({1.0, std::abs(x), std::abs(y), std::abs(xp), std::abs(yp)});
    const double rad = (x - xp) * (y - yp) * (y - x) * (yp - xp);
    if (rad < -kEps * scale * scale * scale * scale)
        throw domain_error(
            "parabolic_extension_point: nested intervals, the parabolas do not meet");
    const double D = std::sqrt(std::max(rad, 0.0));

    // Downward parabola through (x,0), (y,0) with focus on the axis.
    const auto first_parabola = [&](double u) { return -(u - x) * (u - y) / (y - x); };

    const double denom = x - y - xp + yp;
    const double vlo = std::min(0.5 * (x + y), 0.5 * (xp + yp));
    const double vhi = std::max(0.5 * (x + y), 0.5 * (xp + yp));

    double u;
    const double S = x * yp - y * xp; // half of minus the linear coefficient
    if (std::abs(denom) <= 1e-9 * scale) {
        // Equal-length intervals: the intersection equation is linear.
        const double cc = x * y * (yp - xp) - xp * yp * (y - x);
        if (S == 0.0) throw domain_error("parabolic_extension_point: degenerate configuration");
        u = cc / (2.0 * S);
    } else {
        // Roots (S +- D)/denom of the intersection quadratic, evaluated in the
        // cancellation-free Vieta form. For overlapping intervals exactly one
        // root lies above the axis (inside the overlap); for disjoint ones
        // both lie below and exactly one sits between the vertices.
        const double cc = x * y * (yp - xp) - xp * yp * (y - x);
        double r1, r2;
        if (S != 0.0) {
            const double qq = S + std::copysign(D, S);
            r1 = qq / denom;
            r2 = (qq == 0.0) ? r1 : cc / qq;
        } else {
            r1 = D / denom;
            r2 = -D / denom;
        }
        const double pad = kEps * scale + 1e-12;
        const bool up1 = first_parabola(r1) > pad;
        const bool up2 = first_parabola(r2) > pad;
        if (up1 != up2) {
            u = up1 ? r1 : r2;
        } else {
            const bool in1 = r1 >= vlo - pad && r1 <= vhi + pad;
            const bool in2 = r2 >= vlo - pad && r2 <= vhi + pad;
            if (in1 != in2) {
                u = in1 ? r1 : r2;
            } else {
                const double mid = 0.5 * (vlo + vhi);
                u = std::abs(r1 - mid) <= std::abs(r2 - mid) ? r1 : r2;
            }
        }
    }
    const double v = std::abs(first_parabola(u));
    return {u, v, EphClass::parabolic};
}

TripleClassification classify_triple(const IntervalTriple& t, double eps_class) {
    // Rows homogenized by q_i * s_i so endpoints at infinity stay finite; the
    // scaling multiplies both products of determinants by the same positive
    // square and preserves the sign.
    std::array<std::array<double, 3>, 3> m1{}, m2{}, m3{};
    const Interval* iv[3] = {&t.i1, &t.i2, &t.i3};
    for (int i = 0; i < 3; ++i) {
        const double p = iv[i]->x.p, q = iv[i]->x.q;
        const double r = iv[i]->y.p, s = iv[i]->y.q;
        m2[i] = {q * s, p * r, r * q - p * s};
        m1[i] = {p * s, q * s, r * q};
        m3[i] = {p * s, -p * r, r * q};
    }
    const double d2 = det3(m2);
    const double d13 = det3(m1) * det3(m3);
    const double value = d2 * d2 - 4.0 * d13;
    const double scale = d2 * d2 + 4.0 * std::abs(d13);

    TripleClassification out;
    out.discriminant = value;
    if (std::abs(value) <= eps_class * scale)
        out.cls = EphClass::parabolic;
    else
        out.cls = value > 0.0 ? EphClass::hyperbolic : EphClass::elliptic;
    return out;
}

Mat2 flow(const Mat2& generator, double t) {
    const Mat2& x = generator;
    const double dlt = x.det();
    if (dlt > 0.0) {
        const double w = std::sqrt(dlt);
        const double c = std::cos(w * t), s = std::sin(w * t) / w;
        return Mat2{c, 0.0, 0.0, c} + x * s;
    }
    if (dlt < 0.0) {
        const double w = std::sqrt(-dlt);
        const double c = std::cosh(w * t), s = std::sinh(w * t) / w;
        return Mat2{c, 0.0, 0.0, c} + x * s;
    }
    return Mat2::identity() + x * t;
}

namespace {

// Fixed upper half-plane point of an elliptic flow: root of r z^2 - 2p z - q
// with positive imaginary part, for the trace-free generator [[p,q],[r,-p]].
MoebiusMap elliptic_conjugator(const Mat2& x) {
    const double p = 0.5 * (x.a - x.d), r = x.c;
    const double w = std::sqrt(x.det());
    const double u = p / r;
    const double v = w / std::abs(r);
    return MoebiusMap(Mat2{1.0, -u, 0.0, v});
}

MoebiusMap parabolic_conjugator(const Mat2& x) {
    const double p = 0.5 * (x.a - x.d), r = x.c;
    if (std::abs(r) <= 1e-12 * std::max(1.0, max_abs(x)))
        return MoebiusMap(Mat2{0.0, -1.0, 1.0, 0.0}); // fixed point at infinity -> 0
    return MoebiusMap(Mat2{1.0, -p / r, 0.0, 1.0});   // finite fixed point -> 0
}

// Maps the attracting/repelling fixed points onto +1/-1 via the eigenframe.
MoebiusMap hyperbolic_conjugator(const Mat2& x) {
    const double p = 0.5 * (x.a - x.d), q = x.b, r = x.c;
    const double w = std::sqrt(-x.det());

    const auto eigenvector = [&](double lambda) {
        // (x - lambda I) v = 0; pick the better-conditioned row.
        double vx, vy;
        if (std::abs(q) + std::abs(lambda - p) >= std::abs(lambda + p) + std::abs(r)) {
            vx = q;
            vy = lambda - p;
        } else {
            vx = lambda + p;
            vy = r;
        }
        const double nrm = std::hypot(vx, vy);
        vx /= nrm;
        vy /= nrm;
        // Deterministic sign: dominant component positive.
        const bool flip = std::abs(vx) >= std::abs(vy) ? vx < 0.0 : vy < 0.0;
        if (flip) {
            vx = -vx;
            vy = -vy;
        }
        return std::pair<double, double>{vx, vy};
    };

    auto [ax, ay] = eigenvector(+w);
    auto [bx, by] = eigenvector(-w);
    Mat2 frame{ax, bx, ay, by};
    if (frame.det() < 0.0) frame = Mat2{ax, -bx, ay, -by};
    const double h = 1.0 / std::sqrt(2.0);
    const Mat2 target{h, -h, h, h}; // columns (1,1)/sqrt2 and (-1,1)/sqrt2
    return MoebiusMap(target * frame.inverse());
}

}  // namespace

OneParamSubgroup subgroup_from_map(const MoebiusMap& phi, double eps_class) {
    const Mat2& m = phi.m;
    if (max_abs(m - Mat2::identity()) <= 1e-12 * std::max(1.0, max_abs(m)))
        throw domain_error("subgroup_from_map: identity has no distinguished subgroup");
    const double tr = m.trace();

    OneParamSubgroup sub;
    if (std::abs(tr - 2.0) <= eps_class) {
        sub.cls = EphClass::parabolic;
        sub.generator = m - Mat2::identity();
        sub.conjugator = parabolic_conjugator(sub.generator);
    } else if (tr > 2.0) {
        sub.cls = EphClass::hyperbolic;
        const double s = std::acosh(0.5 * tr);
        sub.generator = (m - Mat2{0.5 * tr, 0.0, 0.0, 0.5 * tr}) * (s / std::sinh(s));
        sub.conjugator = hyperbolic_conjugator(sub.generator);
    } else {
        sub.cls = EphClass::elliptic;
        const double theta = std::acos(0.5 * tr);
        sub.generator = (m - Mat2{0.5 * tr, 0.0, 0.0, 0.5 * tr}) * (theta / std::sin(theta));
        sub.conjugator = elliptic_conjugator(sub.generator);
    }
    return sub;
}

namespace {

// g X g^-1 = mu * [[0, tau], [1, 0]]; mu read off the lower-left entry.
double conjugated_scale(const OneParamSubgroup& sub) {
    const Mat2 y = sub.conjugator.m * sub.generator * sub.conjugator.m.adjugate();
    return y.c;
}

// Parameter s with H_tau(s) mapping a to b, from the homogeneous form of
// t = (a - b)/(a*b - tau): tan s, s itself, or tanh s per class.
double subgroup_parameter(EphClass cls, const ProjPoint& a, const ProjPoint& b) {
    const double num = a.p * b.q - b.p * a.q;
    switch (cls) {
        case EphClass::elliptic:
            return std::atan2(num, a.p * b.p + a.q * b.q);
        case EphClass::parabolic: {
            const double den = a.p * b.p;
            if (den == 0.0)
                throw domain_error("flow_time: endpoint at the parabolic fixed point");
            return num / den;
        }
        case EphClass::hyperbolic: {
            const double den = a.p * b.p - a.q * b.q;
            if (std::abs(num) >= std::abs(den))
                throw domain_error("flow_time: endpoints not on one hyperbolic orbit");
            return std::atanh(num / den);
        }
    }
    throw invalid_input("flow_time: bad class");
}

}  // namespace

double flow_time(const OneParamSubgroup& sub, const ProjPoint& from, const ProjPoint& to,
                 double eps) {
    const double mu = conjugated_scale(sub);
    if (std::abs(mu) <= eps)
        throw domain_error("flow_time: degenerate subgroup scale");
    ProjPoint a = sub.conjugator(from);
    ProjPoint b = sub.conjugator(to);
    if (sub.cls == EphClass::hyperbolic) {
        // Reflect points outside (-1, 1) into the interval through 1/x, the
        // involution fixing the conjugated fixed points +-1.
        const Mat2 inv{0.0, 1.0, 1.0, 0.0};
        const auto fold = [&](ProjPoint& pt) {
            if (pt.is_infinite() || std::abs(pt.value()) > 1.0) pt = apply(inv, pt);
            if (std::abs(std::abs(pt.value()) - 1.0) <= eps)
                throw domain_error("flow_time: endpoint at a fixed point");
        };
        fold(a);
        fold(b);
    }
    return subgroup_parameter(sub.cls, a, b) / mu;
}

TripleFlow subgroup_from_triple(const IntervalTriple& t, double eps, double eps_class) {
    TripleFlow out;
    out.phi = map_between_triples(t.starts(), t.ends(), eps);
    out.subgroup = subgroup_from_map(out.phi, eps_class);

    const FixedPointReport fp = fixed_points(out.phi, eps_class);
    const ProjPoint* pts[6] = {&t.i1.x, &t.i2.x, &t.i3.x, &t.i1.y, &t.i2.y, &t.i3.y};
    for (const ProjPoint& fixed : fp.points)
        for (const ProjPoint* p : pts)
            if (proj_equal(*p, fixed, eps))
                throw invalid_input(
                    "subgroup_from_triple: an interval endpoint is a fixed point");

    out.t2 = flow_time(out.subgroup, t.i1.x, t.i2.x, eps);
    out.t3 = flow_time(out.subgroup, t.i1.x, t.i3.x, eps);
    return out;
}

Interval invariant_interval(EphClass cls, double t, double x) {
    const double tv = static_cast<double>(tau(cls));
    if (t == 0.0) throw domain_error("invariant_interval: t must be nonzero");
    if (!(1.0 - tv * t * t > 0.0))
        throw domain_error("invariant_interval: requires 1 - tau t^2 > 0");
    const double den = t * x + 1.0;
    if (std::abs(den) <= 1e-12 * std::max(1.0, std::abs(t * x)))
        throw domain_error("invariant_interval: t x + 1 = 0");
    return Interval(x, (x + tv * t) / den);
}

double flow_parameter(double x, double y, EphClass cls) {
    const double tv = static_cast<double>(tau(cls));
    const double den = x * y - tv;
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return (x - y) / den;
}

Cycle orthogonal_form_through(double x, double y, EphClass cls, double eps) {
    if (std::abs(x - y) <= eps * std::max(1.0, std::abs(x)))
        throw domain_error("orthogonal_form_through: x and y must be distinct");
    const double tv = static_cast<double>(tau(cls));
    return {0.5 * (x * y - tv), 0.5 * (x + y), 1.0, x * y};
}

double cosine_to_real_line(const Cycle& q, double eps) {
    const double disc = q.l * q.l + q.n * q.n - q.k * q.m;
    const double scale = q.norm();
    if (std::abs(disc) <= eps * scale * scale)
        throw domain_error("cosine_to_real_line: undefined angle (e-isotropic form)");
    return -q.n / std::sqrt(std::abs(disc));
}

namespace {

// Basis of the nullspace of a 2x4 system, by full-pivot elimination.
std::pair<Vec4, Vec4> nullspace_2x4(std::array<Vec4, 2> rows) {
    int pivot_col[2] = {-1, -1};
    for (int step = 0; step < 2; ++step) {
        int bi = -1, bj = -1;
        double best = 0.0;
        for (int i = step; i < 2; ++i)
            for (int j = 0; j < 4; ++j) {
                bool used = false;
                for (int s = 0; s < step; ++s) used = used || pivot_col[s] == j;
                if (!used && std::abs(rows[i][j]) > best) {
                    best = std::abs(rows[i][j]);
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0 || best == 0.0)
            throw invalid_input("common_points: cycles are proportional");
        std::swap(rows[step], rows[bi]);
        pivot_col[step] = bj;
        const double pv = rows[step][bj];
        for (int j = 0; j < 4; ++j) rows[step][j] /= pv;
        for (int i = 0; i < 2; ++i) {
            if (i == step) continue;
            const double f = rows[i][bj];
            for (int j = 0; j < 4; ++j) rows[i][j] -= f * rows[step][j];
        }
    }
    std::array<Vec4, 2> basis{};
    int bn = 0;
    for (int j = 0; j < 4; ++j) {
        if (j == pivot_col[0] || j == pivot_col[1]) continue;
        Vec4 v{};
        v[j] = 1.0;
        v[pivot_col[0]] = -rows[0][j];
        v[pivot_col[1]] = -rows[1][j];
        basis[bn++] = v;
    }
    return {basis[0], basis[1]};
}

Cycle cycle_of(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

double vnorm(const Vec4& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
}

}  // namespace

std::vector<Cycle> common_point_forms(const Cycle& c1, const Cycle& c2, EphClass cls,
                                      double eps) {
    if (cycle_proportional(c1, c2, eps))
        throw invalid_input("common_points: cycles are proportional");
    // <F, c>_e = 0 written as a row against (n, l, k, m).
    const auto e_row = [](const Cycle& c) {
        return Vec4{2.0 * c.n, 2.0 * c.l, -c.m, -c.k};
    };
    auto [b1, b2] = nullspace_2x4({e_row(c1), e_row(c2)});
    const double s1 = vnorm(b1), s2 = vnorm(b2);
    for (auto& x : b1) x /= s1;
    for (auto& x : b2) x /= s2;

    const Cycle q1 = cycle_of(b1), q2 = cycle_of(b2);
    const double A = pairing(q1, q1, cls);
    const double B = pairing(q1, q2, cls);
    const double C = pairing(q2, q2, cls);
    const double scale = std::max({std::abs(A), std::abs(B), std::abs(C)});

    std::vector<std::pair<double, double>> weights; // (alpha, beta)
    if (scale <= eps)
        throw domain_error("common_points: every form in the pencil is isotropic");
    const double disc = B * B - A * C;
    if (disc < -eps * scale * scale) return {};
    const double root = std::sqrt(std::max(disc, 0.0));
    if (std::abs(A) >= std::abs(C)) {
        // alpha/beta roots of A r^2 + 2B r + C.
        const double qq = -(B + std::copysign(root, B));
        if (std::abs(A) > eps * scale) {
            weights.emplace_back(qq / A, 1.0);
            if (qq != 0.0 && root > 0.0) weights.emplace_back(C / qq, 1.0);
        } else {
            weights.emplace_back(1.0, 0.0);
            if (std::abs(B) > eps * scale) weights.emplace_back(-C, 2.0 * B);
        }
    } else {
        const double qq = -(B + std::copysign(root, B));
        if (std::abs(C) > eps * scale) {
            weights.emplace_back(1.0, qq / C);
            if (qq != 0.0 && root > 0.0) weights.emplace_back(1.0, A / qq);
        } else {
            weights.emplace_back(0.0, 1.0);
            if (std::abs(B) > eps * scale) weights.emplace_back(2.0 * B, -A);
        }
    }

    std::vector<Cycle> out;
    for (auto [al, be] : weights) {
        Vec4 v{};
        for (int i = 0; i < 4; ++i) v[i] = al * b1[i] + be * b2[i];
        const double nv = vnorm(v);
        if (nv <= 1e-14) continue;
        for (auto& x : v) x /= nv;
        const Cycle cand = cycle_of(v);
        bool dup = false;
        for (const Cycle& seen : out) dup = dup || cycle_proportional(seen, cand, 1e-7);
        if (!dup) out.push_back(cand);
    }
    return out;
}

std::vector<ExtensionPoint> common_points(const Cycle& c1, const Cycle& c2, EphClass cls,
                                          double eps) {
    std::vector<ExtensionPoint> out;
    for (const Cycle& f : common_point_forms(c1, c2, cls, eps)) {
        if (std::abs(f.k) <= eps * f.norm()) continue; // common point at infinity
        const double u = f.l / f.k;
        const double v = std::abs(f.n / f.k);
        bool dup = false;
        for (const ExtensionPoint& p : out)
            dup = dup || (std::abs(p.u - u) <= eps * (1.0 + std::abs(u)) &&
                          std::abs(p.v - v) <= eps * (1.0 + std::abs(v)));
        if (!dup) out.push_back({u, v, cls});
    }
    return out;
}

ExtensionResult extend_triple(const IntervalTriple& t, double eps, double eps_class) {
    const TripleFlow fl = subgroup_from_triple(t, eps, eps_class);
    const EphClass cls = fl.subgroup.cls;

    // Independent classification by the endpoint discriminant; the generator
    // wins inside guard bands (both come from the same phi), but a decisive
    // elliptic/hyperbolic contradiction means the inputs are inconsistent.
    const TripleClassification byDisc = classify_triple(t, eps_class);
    if (byDisc.cls != cls && byDisc.cls != EphClass::parabolic &&
        cls != EphClass::parabolic)
        throw domain_error("extend_triple: discriminant contradicts the recovered subgroup");

    const MoebiusMap ginv = fl.subgroup.conjugator.inverse();
    Cycle form = conjugate(ginv, point_to_isotropic(0.0, 1.0, cls));
    auto pt = isotropic_to_point(form, cls, eps);
    if (pt && pt->v < 0.0) {
        // Mirror isotropic ray of the invariant family; its point is the
        // upper half-plane representative.
        form = conjugate(ginv, point_to_isotropic(0.0, -1.0, cls));
        pt = isotropic_to_point(form, cls, eps);
    }
    form = form.normalized(eps);
    return {cls, form, pt};
}

}  // namespace mobext
