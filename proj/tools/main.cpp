#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "mobext/extension.hpp"
#include "mobext/scene.hpp"

namespace {

using nlohmann::json;
using namespace mobext;

struct io_error : error {
    using error::error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write " + path);
    out << data;
    if (!out) throw io_error("cannot write " + path);
}

json point_json(const ProjPoint& p) {
    if (p.is_infinite()) return json("inf");
    return json(p.value());
}

json matrix_json(const Mat2& m) {
    return json::array({json::array({m.a, m.b}), json::array({m.c, m.d})});
}

IntervalTriple triple_from_doc(const InputDoc& doc, double eps) {
    if (doc.intervals.size() != 3)
        throw schema_error("expected exactly three intervals");
    return IntervalTriple(doc.intervals[0], doc.intervals[1], doc.intervals[2], eps);
}

int run_classify(const std::string& input, double eps, double eps_class) {
    const InputDoc doc = parse_input_doc(read_file(input));
    const IntervalTriple t = triple_from_doc(doc, eps);
    const TripleClassification cls = classify_triple(t, eps_class);
    const TripleFlow flow = subgroup_from_triple(t, eps, eps_class);
    const FixedPointReport fp = fixed_points(flow.phi, eps_class);

    json out;
    out["class"] = to_string(cls.cls);
    out["tau"] = tau(cls.cls);
    out["discriminant"] = cls.discriminant;
    out["phi"] = matrix_json(flow.phi.m);
    json pts = json::array();
    for (const ProjPoint& p : fp.points) pts.push_back(point_json(p));
    out["fixed_points"] = pts;
    out["t2"] = flow.t2;
    out["t3"] = flow.t3;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_extend(const std::string& input, double eps, double eps_class) {
    const InputDoc doc = parse_input_doc(read_file(input));
    const IntervalTriple t = triple_from_doc(doc, eps);
    const ExtensionResult res = extend_triple(t, eps, eps_class);

    json out;
    out["tau"] = tau(res.cls);
    out["class"] = to_string(res.cls);
    out["form"] = json::array({res.form.n, res.form.l, res.form.k, res.form.m});
    if (res.point)
        out["point"] = json::array({res.point->u, res.point->v});
    else
        out["point"] = "infinity";
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_point(const std::string& kind, double x, double y, double xp, double yp) {
    ExtensionPoint p;
    if (kind == "ell")
        p = elliptic_extension_point(x, y, xp, yp);
    else if (kind == "hyp")
        p = hyperbolic_extension_point(x, y, xp, yp);
    else if (kind == "par")
        p = parabolic_extension_point(x, y, xp, yp);
    else
        throw schema_error("kind must be one of ell|par|hyp");
    std::cout << fmt6(p.u) << " " << fmt6(p.v) << "\n";
    return 0;
}

int run_plot(const std::string& input, const std::string& outpath, int samples) {
    const InputDoc doc = parse_input_doc(read_file(input));
    const Scene scene = build_scene(doc);
    write_file(outpath, render_svg(scene, samples));
    return 0;
}

int run_iwasawa(double a, double b, double c, double d) {
    const MoebiusMap g(Mat2{a, b, c, d});
    const IwasawaFactors f = iwasawa(g);
    json out;
    out["diag"] = matrix_json(f.diag);
    out["unipotent"] = matrix_json(f.unipotent);
    out["rotation"] = matrix_json(f.rotation);
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_common_points(const std::string& input, double eps) {
    const InputDoc doc = parse_input_doc(read_file(input));
    if (!doc.tau) throw schema_error("common-points requires a non-null tau");
    if (doc.intervals.size() != 2) throw schema_error("expected exactly two intervals");
    const Cycle c1 = cycle_from_endpoints(doc.intervals[0].x, doc.intervals[0].y);
    const Cycle c2 = cycle_from_endpoints(doc.intervals[1].x, doc.intervals[1].y);
    const auto pts = common_points(c1, c2, *doc.tau, eps);

    json out;
    out["tau"] = tau(*doc.tau);
    out["count"] = pts.size();
    json arr = json::array();
    for (const ExtensionPoint& p : pts) arr.push_back(json::array({p.u, p.v}));
    out["points"] = arr;
    std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moebius cycle geometry of the projective line: classification,\n"
                 "upper half-plane extension points and SVG figures."};
    app.require_subcommand(1);

    double eps = kEps;
    double eps_class = kEpsClass;
    std::string input, outpath, kind;
    double x = 0, y = 0, xp = 0, yp = 0;
    double ma = 0, mb = 0, mc = 0, md = 0;
    int samples = 512;

    auto* classify = app.add_subcommand("classify", "EPH class of a triple of intervals");
    classify->add_option("--input", input, "input document")->required();
    classify->add_option("--eps", eps, "projective equality tolerance");
    classify->add_option("--eps-class", eps_class, "classification guard band");

    auto* extend = app.add_subcommand("extend", "invariant isotropic form and point of a triple");
    extend->add_option("--input", input, "input document")->required();
    extend->add_option("--eps", eps, "projective equality tolerance");
    extend->add_option("--eps-class", eps_class, "classification guard band");

    auto* point = app.add_subcommand("point", "closed-form extension point of two intervals");
    point->add_option("kind", kind, "ell|par|hyp")->required();
    point->add_option("x", x)->required();
    point->add_option("y", y)->required();
    point->add_option("xp", xp)->required();
    point->add_option("yp", yp)->required();

    auto* plot = app.add_subcommand("plot", "render a scene document to SVG");
    plot->add_option("--input", input, "input document")->required();
    plot->add_option("--out", outpath, "output SVG path")->required();
    plot->add_option("--samples", samples, "samples per curve branch");
    plot->add_option("--eps", eps, "projective equality tolerance");

    auto* iwa = app.add_subcommand("iwasawa", "diag * unipotent * rotation factors");
    iwa->add_option("a", ma)->required();
    iwa->add_option("b", mb)->required();
    iwa->add_option("c", mc)->required();
    iwa->add_option("d", md)->required();

    auto* common = app.add_subcommand("common-points", "common points of two endpoint cycles");
    common->add_option("--input", input, "input document")->required();
    common->add_option("--eps", eps, "projective equality tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(classify)) return run_classify(input, eps, eps_class);
        if (app.got_subcommand(extend)) return run_extend(input, eps, eps_class);
        if (app.got_subcommand(point)) return run_point(kind, x, y, xp, yp);
        if (app.got_subcommand(plot)) return run_plot(input, outpath, samples);
        if (app.got_subcommand(iwa)) return run_iwasawa(ma, mb, mc, md);
        if (app.got_subcommand(common)) return run_common_points(input, eps);
    } catch (const schema_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
