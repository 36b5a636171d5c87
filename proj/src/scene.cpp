#include "mobext/scene.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace mobext {

using nlohmann::json;

double round6(double x) {
    if (!std::isfinite(x)) return x;
    double r = std::nearbyint(x * 1e6) / 1e6;
    if (r == 0.0) r = 0.0; // fold -0 into 0
    return r;
}

std::string fmt6(double x) {
    if (!std::isfinite(x)) return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", round6(x));
    std::string s(buf);
    const auto dot = s.find('.');
    if (dot != std::string::npos) {
        size_t last = s.find_last_not_of('0');
        if (s[last] == '.') --last;
        s.erase(last + 1);
    }
    if (s == "-0") s = "0";
    return s;
}

namespace {

ProjPoint parse_endpoint(const json& v) {
    if (v.is_number()) return ProjPoint(v.get<double>());
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "+inf" || s == "-inf") return ProjPoint::infinity();
        throw schema_error("interval endpoint: expected a number or \"inf\"");
    }
    throw schema_error("interval endpoint: expected a number or \"inf\"");
}

double parse_number(const json& v, const char* what) {
    if (!v.is_number()) throw schema_error(std::string(what) + ": expected a number");
    return v.get<double>();
}

}  // namespace

InputDoc parse_input_doc(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw schema_error(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw schema_error("input document must be a JSON object");

    InputDoc out;
    if (doc.contains("tau") && !doc["tau"].is_null()) {
        const json& t = doc["tau"];
        if (!t.is_number_integer()) throw schema_error("tau: expected -1, 0, 1 or null");
        const int tv = t.get<int>();
        if (tv < -1 || tv > 1) throw schema_error("tau: expected -1, 0, 1 or null");
        out.tau = eph_from_tau(tv);
    }
    if (doc.contains("intervals")) {
        if (!doc["intervals"].is_array()) throw schema_error("intervals: expected an array");
        for (const json& iv : doc["intervals"]) {
            if (!iv.is_array() || iv.size() != 2)
                throw schema_error("intervals: each entry must be a pair [x, y]");
            out.intervals.emplace_back(parse_endpoint(iv[0]), parse_endpoint(iv[1]));
        }
    }
    if (doc.contains("curves")) {
        if (!doc["curves"].is_array()) throw schema_error("curves: expected an array");
        for (const json& cv : doc["curves"]) {
            if (!cv.is_array() || cv.size() != 4)
                throw schema_error("curves: each entry must be [k, l, n, m]");
            out.curves.push_back({parse_number(cv[0], "curves"), parse_number(cv[1], "curves"),
                                  parse_number(cv[2], "curves"), parse_number(cv[3], "curves")});
        }
    }
    if (doc.contains("points")) {
        if (!doc["points"].is_array()) throw schema_error("points: expected an array");
        for (const json& pt : doc["points"]) {
            if (!pt.is_array() || pt.size() != 2)
                throw schema_error("points: each entry must be [u, v]");
            out.points.push_back(
                {parse_number(pt[0], "points"), parse_number(pt[1], "points")});
        }
    }
    if (doc.contains("viewport")) {
        const json& vp = doc["viewport"];
        if (!vp.is_array() || vp.size() != 4)
            throw schema_error("viewport: expected [umin, umax, vmin, vmax]");
        out.viewport = std::array<double, 4>{
            parse_number(vp[0], "viewport"), parse_number(vp[1], "viewport"),
            parse_number(vp[2], "viewport"), parse_number(vp[3], "viewport")};
    }
    return out;
}

Scene build_scene(const InputDoc& doc) {
    Scene scene;
    if (doc.viewport) {
        scene.viewport = *doc.viewport;
        if (!(scene.viewport[0] < scene.viewport[1]) || !(scene.viewport[2] < scene.viewport[3]))
            throw schema_error("viewport: degenerate (requires umin < umax and vmin < vmax)");
    }
    scene.intervals = doc.intervals;
    scene.points = doc.points;

    if (doc.tau) {
        scene.tau = *doc.tau;
    } else if (doc.intervals.size() == 3) {
        const IntervalTriple triple(doc.intervals[0], doc.intervals[1], doc.intervals[2]);
        scene.tau = extend_triple(triple).cls;
    } else {
        throw schema_error("tau: null requires exactly three intervals to classify");
    }

    if (!doc.curves.empty()) {
        for (const auto& c : doc.curves)
            scene.curves.push_back(QuadraticCurve{c[0], c[1], c[2], c[3], scene.tau});
    } else {
        for (const Interval& iv : scene.intervals) {
            const Cycle c = cycle_from_endpoints(iv.x, iv.y);
            scene.curves.push_back(curve_from_cycle(c.normalized(), scene.tau));
        }
    }

    if (scene.points.empty() && scene.curves.size() == 2) {
        try {
            const auto pts = common_points(cycle_from_curve(scene.curves[0]),
                                           cycle_from_curve(scene.curves[1]), scene.tau);
            for (const auto& p : pts) scene.points.push_back({p.u, p.v});
        } catch (const error&) {
            // No marker when the pencil is degenerate.
        }
    }
    return scene;
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#17becf"};

struct Mapper {
    double umin, umax, vmin, vmax, sc;
    double x(double u) const { return (u - umin) * sc; }
    double y(double v) const { return (vmax - v) * sc; }
    bool inside(double u, double v) const {
        const double pu = 0.02 * (umax - umin), pv = 0.02 * (vmax - vmin);
        return u >= umin - pu && u <= umax + pu && v >= vmin - pv && v <= vmax + pv;
    }
};

// Emit polylines for the in-viewport runs of a sampled branch.
void emit_branch(std::ostringstream& svg, const Mapper& map,
                 const std::vector<PlanePoint>& pts, const char* color) {
    std::vector<PlanePoint> run;
    const auto flush = [&]() {
        if (run.size() >= 2) {
            svg << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\" points=\"";
            for (size_t i = 0; i < run.size(); ++i) {
                if (i) svg << ' ';
                svg << fmt6(map.x(run[i].u)) << ',' << fmt6(map.y(run[i].v));
            }
            svg << "\"/>\n";
        }
        run.clear();
    };
    for (const PlanePoint& p : pts) {
        if (std::isfinite(p.u) && std::isfinite(p.v) && map.inside(p.u, p.v))
            run.push_back(p);
        else
            flush();
    }
    flush();
}

void sample_curve(std::ostringstream& svg, const Mapper& map, const QuadraticCurve& c,
                  const char* color, int samples) {
    const double span_u = map.umax - map.umin;
    const double span_v = map.vmax - map.vmin;
    std::vector<PlanePoint> branch;
    branch.reserve(static_cast<size_t>(samples) + 1);

    const bool line_like = std::abs(c.k) <= 1e-12 * std::max({1.0, std::abs(c.l), std::abs(c.n),
                                                              std::abs(c.m)});
    if (line_like) {
        // -2lu - 2nv + m = 0
        if (std::abs(c.n) >= std::abs(c.l)) {
            if (c.n == 0.0) return;
            for (int i = 0; i <= samples; ++i) {
                const double u = map.umin + span_u * i / samples;
                branch.push_back({u, (c.m - 2.0 * c.l * u) / (2.0 * c.n)});
            }
        } else {
            for (int i = 0; i <= samples; ++i) {
                const double v = map.vmin + span_v * i / samples;
                branch.push_back({(c.m - 2.0 * c.n * v) / (2.0 * c.l), v});
            }
        }
        emit_branch(svg, map, branch, color);
        return;
    }

    if (c.tau == EphClass::elliptic) {
        const double u0 = c.l / c.k, v0 = c.n / c.k;
        const double r2 = (c.l * c.l + c.n * c.n - c.k * c.m) / (c.k * c.k);
        if (r2 <= 0.0) return;
        const double r = std::sqrt(r2);
        for (int i = 0; i <= samples; ++i) {
            const double a = 2.0 * M_PI * i / samples;
            branch.push_back({u0 + r * std::cos(a), v0 + r * std::sin(a)});
        }
        emit_branch(svg, map, branch, color);
    } else if (c.tau == EphClass::parabolic) {
        if (std::abs(c.n) <= 1e-12 * std::max(1.0, std::abs(c.k))) {
            // Pair of vertical lines k u^2 - 2 l u + m = 0.
            const double disc = c.l * c.l - c.k * c.m;
            if (disc < 0.0) return;
            for (double sgn : {-1.0, 1.0}) {
                const double u = (c.l + sgn * std::sqrt(disc)) / c.k;
                branch = {{u, map.vmin}, {u, map.vmax}};
                emit_branch(svg, map, branch, color);
            }
            return;
        }
        for (int i = 0; i <= samples; ++i) {
            const double u = map.umin + span_u * i / samples;
            branch.push_back({u, (c.k * u * u - 2.0 * c.l * u + c.m) / (2.0 * c.n)});
        }
        emit_branch(svg, map, branch, color);
    } else {
        const double u0 = c.l / c.k, v0 = -c.n / c.k;
        const double R = (c.l * c.l - c.n * c.n - c.k * c.m) / (c.k * c.k);
        const double reach =
            std::max({std::abs(map.umin - u0), std::abs(map.umax - u0),
                      std::abs(map.vmin - v0), std::abs(map.vmax - v0)}) +
            std::sqrt(std::abs(R)) + 1.0;
        if (std::abs(R) <= 1e-12) {
            // Degenerate pair of lines v - v0 = +-(u - u0).
            for (double sgn : {-1.0, 1.0}) {
                branch = {{u0 - reach, v0 - sgn * reach}, {u0 + reach, v0 + sgn * reach}};
                emit_branch(svg, map, branch, color);
            }
            return;
        }
        const double a = std::sqrt(std::abs(R));
        const double S = std::acosh(std::max(reach / a, 1.0)) + 1.0;
        for (double side : {-1.0, 1.0}) {
            branch.clear();
            for (int i = 0; i <= samples; ++i) {
                const double s = -S + 2.0 * S * i / samples;
                if (R > 0.0)
                    branch.push_back({u0 + side * a * std::cosh(s), v0 + a * std::sinh(s)});
                else
                    branch.push_back({u0 + a * std::sinh(s), v0 + side * a * std::cosh(s)});
            }
            emit_branch(svg, map, branch, color);
        }
    }
}

}  // namespace

std::string render_svg(const Scene& scene, int samples) {
    if (samples < 2) samples = 2;
    const double umin = scene.viewport[0], umax = scene.viewport[1];
    const double vmin = scene.viewport[2], vmax = scene.viewport[3];
    const double sc = 640.0 / (umax - umin);
    const int height = std::max(1, static_cast<int>(std::lround((vmax - vmin) * sc)));
    const Mapper map{umin, umax, vmin, vmax, sc};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" height=\""
        << height << "\" viewBox=\"0 0 640 " << height << "\">\n";
    svg << "<rect width=\"640\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";

    if (vmin < 0.0 && vmax > 0.0) {
        svg << "<line x1=\"0\" y1=\"" << fmt6(map.y(0.0)) << "\" x2=\"640\" y2=\""
            << fmt6(map.y(0.0)) << "\" stroke=\"#888888\" stroke-width=\"1\"/>\n";
    }

    size_t ci = 0;
    for (const Interval& iv : scene.intervals) {
        const char* color = kPalette[ci % 6];
        ++ci;
        if (!iv.x.is_infinite() && !iv.y.is_infinite()) {
            const double a = std::min(iv.x.value(), iv.y.value());
            const double b = std::max(iv.x.value(), iv.y.value());
            svg << "<line x1=\"" << fmt6(map.x(a)) << "\" y1=\"" << fmt6(map.y(0.0))
                << "\" x2=\"" << fmt6(map.x(b)) << "\" y2=\"" << fmt6(map.y(0.0))
                << "\" stroke=\"" << color << "\" stroke-width=\"4\"/>\n";
        } else {
            const ProjPoint& fin = iv.x.is_infinite() ? iv.y : iv.x;
            if (!fin.is_infinite())
                svg << "<line x1=\"" << fmt6(map.x(fin.value())) << "\" y1=\""
                    << fmt6(map.y(0.0) - 6.0) << "\" x2=\"" << fmt6(map.x(fin.value()))
                    << "\" y2=\"" << fmt6(map.y(0.0) + 6.0) << "\" stroke=\"" << color
                    << "\" stroke-width=\"2\"/>\n";
        }
    }

    ci = 0;
    for (const QuadraticCurve& c : scene.curves) {
        sample_curve(svg, map, c, kPalette[ci % 6], samples);
        ++ci;
    }

    for (const PlanePoint& p : scene.points) {
        svg << "<circle cx=\"" << fmt6(map.x(p.u)) << "\" cy=\"" << fmt6(map.y(p.v))
            << "\" r=\"4\" fill=\"#c1121f\" stroke=\"#ffffff\" stroke-width=\"1\"/>\n";
    }

    svg << "</svg>\n";
    return svg.str();
}

}  // namespace mobext
