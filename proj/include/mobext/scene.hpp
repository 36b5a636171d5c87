#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mobext/extension.hpp"

namespace mobext {

/// Malformed input documents (bad JSON, missing fields, wrong shapes).
struct schema_error : error {
    using error::error;
};

/// Drawable description: intervals on the axis, quadratic curves, markers.
struct Scene {
    EphClass tau = EphClass::elliptic;
    std::vector<Interval> intervals;
    std::vector<QuadraticCurve> curves;
    std::vector<PlanePoint> points;
    std::array<double, 4> viewport{-4.0, 4.0, -3.0, 3.0}; // umin, umax, vmin, vmax
};

/// Input document fields shared by the CLI commands:
/// {"tau": -1|0|1|null, "intervals": [[x,y],...], "curves": [[k,l,n,m],...],
///  "points": [[u,v],...], "viewport": [umin,umax,vmin,vmax]}
/// with "inf"/"-inf" accepted for interval endpoints.
struct InputDoc {
    std::optional<EphClass> tau;
    std::vector<Interval> intervals;
    std::vector<std::array<double, 4>> curves; // (k, l, n, m)
    std::vector<PlanePoint> points;
    std::optional<std::array<double, 4>> viewport;
};

InputDoc parse_input_doc(const std::string& text);

/// Builds the drawable scene: resolves a null tau by running the extension on
/// a three-interval document, derives endpoint-cycle curves when none are
/// given, and computes common points of a two-curve scene when no markers are
/// listed.
Scene build_scene(const InputDoc& doc);

/// Deterministic SVG 1.1 rendering; `samples` points per curve branch.
std::string render_svg(const Scene& scene, int samples = 512);

/// Round half-even at the sixth decimal; normalizes -0 to 0.
double round6(double x);

/// Shortest decimal representation of round6(x).
std::string fmt6(double x);

}  // namespace mobext
