#include "latdef/emit.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

namespace latdef {

namespace {

std::string fmt_g(double x, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

std::string fmt_f6(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

Json metrics_json(const PolygonMetrics& m, int digits) {
    Json j;
    j["area"] = round_to_sig(m.area, digits);
    j["perimeter"] = round_to_sig(m.perimeter, digits);
    j["lattice_perimeter"] = round_to_sig(m.lattice_perimeter, digits);
    return j;
}

}  // namespace

double round_to_sig(double x, int digits) {
    if (!std::isfinite(x)) return x;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return std::strtod(buf, nullptr);
}

Json sum_report_json(const SumReport& r, int digits) {
    // Non-finite fields become explicit nulls so consumers never meet a bare
    // NaN token.
    auto num = [digits](double x) {
        return std::isfinite(x) ? Json(round_to_sig(x, digits)) : Json(nullptr);
    };
    Json j;
    j["power"] = num(r.power);
    j["partial"] = num(r.partial);
    j["remainder"] = num(r.remainder);
    j["total"] = num(r.total);
    j["terms"] = r.terms;
    j["frontier_size"] = r.frontier_size;
    j["mode"] = to_string(r.mode);
    j["budget_exhausted"] = r.budget_exhausted;
    return j;
}

Json polygon_summary_json(const Polygon& poly, const PolygonMetrics& m, int digits) {
    Json j;
    j["level"] = poly.level();
    j["sides"] = poly.side_count();
    j["metrics"] = metrics_json(m, digits);
    return j;
}

Json polygon_file_json(const Polygon& poly, int digits) {
    Json j;
    j["level"] = poly.level();
    Json normals = Json::array();
    poly.normals([&](const Vec2i& u) { normals.push_back({u.x(), u.y()}); });
    j["normals"] = std::move(normals);
    j["metrics"] = metrics_json(poly.metrics(), digits);
    return j;
}

Json locus_json(const CornerLocusGraph& g, int digits) {
    Json j;
    Json verts = Json::array();
    for (const LocusVertex& v : g.vertices) {
        Json jv;
        if (v.is_origin)
            jv["pair"] = "origin";
        else
            jv["pair"] = {v.pair.v.x(), v.pair.v.y(), v.pair.w.x(), v.pair.w.y()};
        jv["p"] = {round_to_sig(v.p.x(), digits), round_to_sig(v.p.y(), digits)};
        jv["value"] = round_to_sig(v.value, digits);
        verts.push_back(std::move(jv));
    }
    j["vertices"] = std::move(verts);
    Json edges = Json::array();
    for (const auto& e : g.edges) edges.push_back({e[0], e[1]});
    j["edges"] = std::move(edges);
    return j;
}

Json cube_json(const CubeCheck& c, int digits) {
    Json j;
    j["sum_cubes"] = round_to_sig(c.s3, digits);
    j["sum_cubes_tail"] = round_to_sig(c.s3_tail, digits);
    j["integral"] = round_to_sig(c.integral, digits);
    j["integral_error"] = round_to_sig(c.integral_error, digits);
    j["residual"] = round_to_sig(c.residual, digits);
    return j;
}

Json envelope_json(const EnvelopeValue& e, int digits) {
    Json j;
    j["p"] = {round_to_sig(e.p.x(), digits), round_to_sig(e.p.y(), digits)};
    j["value"] = round_to_sig(e.value, digits);
    Json active = Json::array();
    for (const Vec2i& w : e.active) active.push_back({w.x(), w.y()});
    j["active"] = std::move(active);
    j["certified"] = e.certified;
    return j;
}

std::string svg_polygon(const Polygon& poly) {
    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.2 -1.2 2.4 2.4\">\n";
    s += "  <g transform=\"scale(1,-1)\">\n";
    s += "    <circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#999\" "
         "stroke-width=\"0.004\"/>\n";
    s += "    <path d=\"";
    bool first = true;
    poly.vertices([&](const Vec2d& v) {
        s += first ? "M " : "L ";
        first = false;
        s += fmt_f6(v.x());
        s += ' ';
        s += fmt_f6(v.y());
        s += ' ';
    });
    s += "Z\" fill=\"none\" stroke=\"#1a7a4a\" stroke-width=\"0.006\"/>\n";
    s += "  </g>\n</svg>\n";
    return s;
}

std::string svg_locus(const CornerLocusGraph& g) {
    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.2 -1.2 2.4 2.4\">\n";
    s += "  <g transform=\"scale(1,-1)\">\n";
    s += "    <circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#999\" "
         "stroke-width=\"0.004\"/>\n";
    for (const auto& e : g.edges) {
        const Vec2d& a = g.vertices[e[0]].p;
        const Vec2d& b = g.vertices[e[1]].p;
        s += "    <line x1=\"" + fmt_f6(a.x()) + "\" y1=\"" + fmt_f6(a.y()) + "\" x2=\"" +
             fmt_f6(b.x()) + "\" y2=\"" + fmt_f6(b.y()) +
             "\" stroke=\"#345a9c\" stroke-width=\"0.004\"/>\n";
    }
    for (const LocusVertex& v : g.vertices) {
        const double r = 0.015 + 0.06 * v.value;
        s += "    <circle cx=\"" + fmt_f6(v.p.x()) + "\" cy=\"" + fmt_f6(v.p.y()) + "\" r=\"" +
             fmt_f6(r) + "\" fill=\"#b03030\"/>\n";
    }
    s += "  </g>\n</svg>\n";
    return s;
}

void write_vertex_csv(std::ostream& os, const Polygon& poly) {
    os << "x,y\n";
    poly.vertices(
        [&](const Vec2d& v) { os << fmt_g(v.x(), 17) << ',' << fmt_g(v.y(), 17) << '\n'; });
}

void write_grid_csv(std::ostream& os, const GridSpec& grid,
                    const std::function<double(const Vec2d&)>& fn) {
    os << "x,y,F\n";
    constexpr long double two_pi = 6.283185307179586476925286766559005768L;
    const long double dr = 1.0L / grid.radial;
    const long double dth = two_pi / grid.angular;
    for (int i = 0; i < grid.radial; ++i) {
        const long double r = (i + 0.5L) * dr;
        for (int j = 0; j < grid.angular; ++j) {
            const long double th = (j + 0.5L) * dth;
            const double x = static_cast<double>(r * cosl(th));
            const double y = static_cast<double>(r * sinl(th));
            os << fmt_g(x, 17) << ',' << fmt_g(y, 17) << ',' << fmt_g(fn(Vec2d(x, y)), 17)
               << '\n';
        }
    }
}

void write_zeta_csv(std::ostream& os, const std::vector<ZetaRow>& rows, int digits) {
    os << "alpha,partial,remainder,mode,companion_partial,companion_remainder\n";
    for (const ZetaRow& r : rows) {
        os << fmt_g(r.report.power, digits) << ',' << fmt_g(r.report.partial, digits) << ','
           << fmt_g(r.report.remainder, digits) << ',' << to_string(r.report.mode) << ','
           << fmt_g(r.companion_partial, digits) << ',' << fmt_g(r.companion_remainder, digits)
           << '\n';
    }
}

void write_extended_csv(std::ostream& os,
                        const std::vector<std::pair<std::int64_t, double>>& rows, int digits) {
    os << "N,partial\n";
    for (const auto& [n, partial] : rows)
        os << n << ',' << fmt_g(partial, digits) << '\n';
}

}  // namespace latdef
