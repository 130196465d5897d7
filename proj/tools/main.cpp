#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "latdef/latdef.hpp"

namespace {

using namespace latdef;

int exit_for_mode(SumMode m) {
    switch (m) {
        case SumMode::ExactRemainder:
        case SumMode::BoundedTail: return 0;
        case SumMode::Heuristic: return 2;
        case SumMode::DivergenceSuspected: return 3;
    }
    return 0;
}

std::vector<double> parse_alphas(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        const double a = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad alpha value: " + item);
        out.push_back(a);
    }
    if (out.empty()) throw std::invalid_argument("alpha list is empty");
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    return os;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"defect sums, disc polygons and the tropical envelope"};
    app.require_subcommand(1);

    bool deterministic = false;
    int threads = 0;
    int precision = 17;
    std::uint64_t seed = 0;
    app.add_flag("--deterministic", deterministic,
                 "run single threaded with stable output bytes");
    app.add_option("--threads", threads, "worker threads (default: hardware count)");
    app.add_option("--precision", precision, "significant digits in emitted numbers")
        ->check(CLI::Range(6, 17));
    app.add_option("--seed", seed, "seed for randomized helpers");

    auto* sum = app.add_subcommand("sum", "sum defect powers over the quadrant tree");
    int power = 1;
    std::string sum_mode = "exact";
    int depth = 8;
    double budget = 1e6;
    double alpha = std::nan("");
    double threshold = std::nan("");
    double max_nodes = 1e6;
    sum->add_option("--power", power, "defect exponent for exact and best modes (1 or 2)");
    sum->add_option("--mode", sum_mode, "exact | best | truncated")
        ->check(CLI::IsMember({"exact", "best", "truncated"}));
    sum->add_option("--depth", depth, "frontier depth for exact mode");
    sum->add_option("--budget", budget, "node budget for best mode");
    sum->add_option("--alpha", alpha, "defect exponent for truncated mode (default: --power)");
    sum->add_option("--threshold", threshold,
                    "defect cutoff for truncated mode (default: derived from --max-nodes)");
    sum->add_option("--max-nodes", max_nodes, "node cap for truncated mode");

    auto* polygon = app.add_subcommand("polygon", "circumscribed disc polygon");
    int level = 8;
    std::string poly_json, poly_svg, poly_csv;
    polygon->add_option("--level", level, "splitting level");
    polygon->add_option("--json", poly_json, "write level, normals and metrics here");
    polygon->add_option("--svg", poly_svg, "write a drawing here");
    polygon->add_option("--csv", poly_csv, "write vertex coordinates here");

    auto* tropical = app.add_subcommand("tropical", "envelope evaluation and checks");
    std::vector<double> eval_p;
    int locus_depth = -1;
    bool do_integrate = false;
    bool do_cubes = false;
    std::string trop_svg, trop_json, grid_csv;
    double tie_tol = 1e-9;
    double max_ring = 1e6;
    GridSpec grid;
    double cube_threshold = 1e-10;
    double cube_max_nodes = 2e8;
    double perturb_s3 = 0.0;
    tropical->add_option("--eval", eval_p, "evaluate the envelope at x y")->expected(2);
    tropical->add_option("--locus", locus_depth, "build and validate the corner tree");
    tropical->add_flag("--integrate", do_integrate, "integrate the envelope over the disc");
    tropical->add_flag("--check-cubes", do_cubes,
                       "compare twice the cube sum plus three times the integral against 4");
    tropical->add_option("--svg", trop_svg, "write a locus drawing here");
    tropical->add_option("--json", trop_json, "write the locus graph here");
    tropical->add_option("--grid-csv", grid_csv, "write envelope values on the base grid here");
    tropical->add_option("--tie-tol", tie_tol, "active set tie tolerance");
    tropical->add_option("--max-ring", max_ring, "ring search cap");
    tropical->add_option("--grid-radial", grid.radial, "radial cells at the base level");
    tropical->add_option("--grid-angular", grid.angular, "angular cells at the base level");
    tropical->add_option("--grid-levels", grid.levels, "refinement levels");
    tropical->add_option("--threshold", cube_threshold, "defect cutoff for the cube sum");
    tropical->add_option("--max-nodes", cube_max_nodes, "node cap for the cube sum");
    tropical->add_option("--perturb-s3", perturb_s3, "offset the cube sum (fault injection)");

    auto* zeta = app.add_subcommand("zeta", "defect power sums across several exponents");
    std::string alphas_csv = "1,2";
    double zeta_budget = 1e5;
    std::string zeta_out;
    zeta->add_option("--alphas", alphas_csv, "comma separated exponent list");
    zeta->add_option("--budget", zeta_budget, "shared best-first node budget");
    zeta->add_option("--out", zeta_out, "write the table here instead of stdout");

    auto* extended = app.add_subcommand("extended", "box sums over all determinant +1 matrices");
    int entry_bound = 10;
    std::string ext_out;
    extended->add_option("--N", entry_bound, "largest entry bound, rows run from 1 to N");
    extended->add_option("--out", ext_out, "write the table here instead of stdout");

    // Global flags may trail the subcommand; unmatched options climb back up.
    for (CLI::App* s : app.get_subcommands([](CLI::App*) { return true; })) s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    int nthreads = 1;
    if (!deterministic) {
        if (threads > 0) {
            nthreads = threads;
        } else {
            const unsigned hw = std::thread::hardware_concurrency();
            nthreads = hw ? static_cast<int>(hw) : 1;
        }
    }

    try {
        if (*sum) {
            SumReport rep;
            if (sum_mode == "exact")
                rep = exact_partial_sum(power, DepthPolicy{depth}, nthreads);
            else if (sum_mode == "best")
                rep = exact_partial_sum(power, BestFirstPolicy{static_cast<std::uint64_t>(budget)},
                                        nthreads);
            else
                rep = truncated_sum(std::isnan(alpha) ? static_cast<double>(power) : alpha,
                                    threshold, static_cast<std::uint64_t>(max_nodes));
            std::cout << sum_report_json(rep, precision).dump(2) << "\n";
            return exit_for_mode(rep.mode);
        }

        if (*polygon) {
            Polygon poly(level);
            if (!poly_svg.empty()) open_out(poly_svg) << svg_polygon(poly);
            if (!poly_csv.empty()) {
                auto os = open_out(poly_csv);
                write_vertex_csv(os, poly);
            }
            if (!poly_json.empty()) open_out(poly_json) << polygon_file_json(poly, precision).dump(2) << "\n";
            std::cout << polygon_summary_json(poly, poly.metrics(), precision).dump(2) << "\n";
            return 0;
        }

        if (*tropical) {
            EnvelopeOptions env;
            env.tie_tol = tie_tol;
            env.max_ring = static_cast<std::int64_t>(max_ring);
            if (!eval_p.empty()) {
                const Vec2d p(eval_p[0], eval_p[1]);
                if (p.norm() > 1.0 - 1e-9)
                    throw std::invalid_argument(
                        "evaluation point must satisfy |p| <= 1 - 1e-9");
                std::cout << envelope_json(evaluate_envelope(p, env), precision).dump(2) << "\n";
                return 0;
            }
            if (locus_depth >= 0) {
                const CornerLocusGraph g = corner_locus(locus_depth, env, true);
                if (!trop_svg.empty()) open_out(trop_svg) << svg_locus(g);
                if (!trop_json.empty())
                    open_out(trop_json) << locus_json(g, precision).dump(2) << "\n";
                Json j;
                j["depth"] = locus_depth;
                j["vertices"] = g.vertices.size();
                j["edges"] = g.edges.size();
                j["validated"] = true;
                std::cout << j.dump(2) << "\n";
                return 0;
            }
            if (do_cubes) {
                CubeCheckOptions opts;
                opts.threshold = cube_threshold;
                opts.max_nodes = static_cast<std::uint64_t>(cube_max_nodes);
                opts.grid = grid;
                opts.env = env;
                opts.s3_perturbation = perturb_s3;
                opts.threads = nthreads;
                const CubeCheck c = cube_identity_check(opts);
                std::cout << cube_json(c, precision).dump(2) << "\n";
                return std::abs(c.residual) > 1e-3 ? 1 : 0;
            }
            if (do_integrate) {
                if (!grid_csv.empty()) {
                    auto os = open_out(grid_csv);
                    write_grid_csv(os, grid,
                                   [&](const Vec2d& p) { return envelope_value(p, env); });
                }
                const Quadrature q = integrate_disc(
                    [&](const Vec2d& p) { return envelope_value(p, env); }, grid, nthreads);
                Json j;
                j["integral"] = round_to_sig(q.value, precision);
                j["error_estimate"] = round_to_sig(q.error_estimate, precision);
                Json lv = Json::array();
                for (double v : q.level_values) lv.push_back(round_to_sig(v, precision));
                j["levels"] = std::move(lv);
                std::cout << j.dump(2) << "\n";
                return 0;
            }
            if (!grid_csv.empty()) {
                auto os = open_out(grid_csv);
                write_grid_csv(os, grid, [&](const Vec2d& p) { return envelope_value(p, env); });
                return 0;
            }
            throw std::invalid_argument(
                "tropical needs one of --eval, --locus, --integrate, --check-cubes, --grid-csv");
        }

        if (*zeta) {
            const std::vector<double> alphas = parse_alphas(alphas_csv);
            const std::vector<ZetaRow> rows =
                zeta_scan(alphas, static_cast<std::uint64_t>(zeta_budget));
            if (!zeta_out.empty()) {
                auto os = open_out(zeta_out);
                write_zeta_csv(os, rows, precision);
            } else {
                write_zeta_csv(std::cout, rows, precision);
            }
            int worst = 0;
            for (const ZetaRow& r : rows) worst = std::max(worst, exit_for_mode(r.report.mode));
            return worst;
        }

        if (*extended) {
            if (entry_bound < 1) throw std::invalid_argument("--N must be at least 1");
            std::vector<std::pair<std::int64_t, double>> rows;
            rows.reserve(static_cast<std::size_t>(entry_bound));
            for (int n = 1; n <= entry_bound; ++n)
                rows.emplace_back(n, extended_sum(n, nthreads).partial);
            if (!ext_out.empty()) {
                auto os = open_out(ext_out);
                write_extended_csv(os, rows, precision);
            } else {
                write_extended_csv(std::cout, rows, precision);
            }
            return 0;
        }
    } catch (const LevelTooDeepError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 65;
    } catch (const EdgeValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 66;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 64;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 70;
    }
    return 0;
}
