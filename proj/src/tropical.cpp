#include "latdef/tropical.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <utility>

#include "latdef/summation.hpp"

namespace latdef {

namespace {

struct RingCell {
    double x, y, norm;
    std::int32_t ix, iy;
};

void append_cell(std::vector<RingCell>& out, std::int64_t x, std::int64_t y) {
    if (std::gcd(std::abs(x), std::abs(y)) != 1) return;
    RingCell c;
    c.x = static_cast<double>(x);
    c.y = static_cast<double>(y);
    c.norm = std::sqrt(c.x * c.x + c.y * c.y);
    c.ix = static_cast<std::int32_t>(x);
    c.iy = static_cast<std::int32_t>(y);
    out.push_back(c);
}

// Primitive vectors of max-norm exactly R: the top and bottom edges of the
// square ring, then the two side columns without the corners already taken.
std::vector<RingCell> build_ring(std::int64_t R) {
    std::vector<RingCell> out;
    for (std::int64_t x = -R; x <= R; ++x) {
        append_cell(out, x, R);
        append_cell(out, x, -R);
    }
    for (std::int64_t y = -R + 1; y < R; ++y) {
        append_cell(out, R, y);
        append_cell(out, -R, y);
    }
    return out;
}

const std::vector<std::vector<RingCell>>& ring_cache() {
    static const std::vector<std::vector<RingCell>> cache = [] {
        std::vector<std::vector<RingCell>> c(65);
        for (std::int64_t R = 1; R < 65; ++R) c[static_cast<std::size_t>(R)] = build_ring(R);
        return c;
    }();
    return cache;
}

// Ring-by-ring scan in the max norm. Every plane outside ring R satisfies
// h >= R (1 - |p|), so once that exceeds the best value plus the tie margin
// the active set is provably complete. Inside the closed disc this stops
// after a handful of rings; outside it the bound never fires and the scan
// runs into max_ring uncertified.
template <bool Collect>
double envelope_core(const Vec2d& p, const EnvelopeOptions& opts,
                     std::vector<std::pair<Vec2i, double>>* hits, bool* certified) {
    const double px = p.x(), py = p.y();
    const double pn = std::hypot(px, py);
    const auto& cache = ring_cache();
    double best = std::numeric_limits<double>::infinity();
    bool cert = false;
    auto consider = [&](double x, double y, double norm, std::int64_t ix, std::int64_t iy) {
        // Grouping the dot product keeps the eight lattice symmetries exact:
        // swapped or sign-flipped points see the same two addends per plane.
        const double h = norm + (px * x + py * y);
        if constexpr (Collect) {
            if (h <= best + opts.tie_tol) hits->emplace_back(Vec2i(ix, iy), h);
        }
        if (h < best) best = h;
    };
    for (std::int64_t R = 1; R <= opts.max_ring; ++R) {
        if (static_cast<double>(R) * (1.0 - pn) > best + opts.tie_tol) {
            cert = true;
            break;
        }
        if (R < static_cast<std::int64_t>(cache.size())) {
            for (const RingCell& c : cache[static_cast<std::size_t>(R)])
                consider(c.x, c.y, c.norm, c.ix, c.iy);
        } else {
            for (std::int64_t x = -R; x <= R; ++x) {
                if (std::gcd(std::abs(x), R) == 1) {
                    const double dx = static_cast<double>(x), dR = static_cast<double>(R);
                    const double n = std::sqrt(dx * dx + dR * dR);
                    consider(dx, dR, n, x, R);
                    consider(dx, -dR, n, x, -R);
                }
            }
            for (std::int64_t y = -R + 1; y < R; ++y) {
                if (std::gcd(R, std::abs(y)) == 1) {
                    const double dy = static_cast<double>(y), dR = static_cast<double>(R);
                    const double n = std::sqrt(dR * dR + dy * dy);
                    consider(dR, dy, n, R, y);
                    consider(-dR, dy, n, -R, y);
                }
            }
        }
    }
    if (certified) *certified = cert;
    return best;
}

bool lex_less(const Vec2i& a, const Vec2i& b) {
    return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
}

bool contains(const std::vector<Vec2i>& set, const Vec2i& u) {
    for (const Vec2i& s : set)
        if (s.x() == u.x() && s.y() == u.y()) return true;
    return false;
}

Vec2i rotq(const Vec2i& u, int q) {
    Vec2i r = u;
    for (int i = 0; i < q; ++i) r = rot90<std::int64_t>(r);
    return r;
}

}  // namespace

double envelope_value(const Vec2d& p, const EnvelopeOptions& opts) {
    return envelope_core<false>(p, opts, nullptr, nullptr);
}

EnvelopeValue evaluate_envelope(const Vec2d& p, const EnvelopeOptions& opts) {
    std::vector<std::pair<Vec2i, double>> hits;
    EnvelopeValue out;
    out.p = p;
    out.value = envelope_core<true>(p, opts, &hits, &out.certified);
    for (const auto& [w, h] : hits)
        if (h <= out.value + opts.tie_tol && !contains(out.active, w)) out.active.push_back(w);
    std::sort(out.active.begin(), out.active.end(), lex_less);
    return out;
}

FanVertex vertex_for_pair(const UnimodularPair& pair) {
    if (det_wide(pair.v, pair.w) != 1)
        throw NotPrimitiveError("fan vertex requires a determinant +1 pair");
    const long double a = static_cast<long double>(pair.v.x());
    const long double b = static_cast<long double>(pair.v.y());
    const long double c = static_cast<long double>(pair.w.x());
    const long double d = static_cast<long double>(pair.w.y());
    const long double nv = sqrtl(a * a + b * b);
    const long double nw = sqrtl(c * c + d * d);
    const long double mx = a + c, my = b + d;
    const long double nm = sqrtl(mx * mx + my * my);
    const long double dot = a * c + b * d;
    // p is pinned by p.v = f - |v| and p.w = f - |w|; both right sides reduce
    // to -(|v+w| - |w|) and -(|v+w| - |v|), kept in product form so nothing
    // cancels even when the defect underflows the norm scale.
    const long double A = (nv * nv + 2.0L * dot) / (nm + nw);  // |v| - f
    const long double B = (nw * nw + 2.0L * dot) / (nm + nv);  // |w| - f
    FanVertex out;
    out.p = Vec2d(static_cast<double>(b * B - d * A), static_cast<double>(c * A - a * B));
    out.value = static_cast<double>(2.0L / ((nv * nw + dot) * (nv + nw + nm)));
    if (out.p.squaredNorm() >= 1.0)
        throw VertexOutsideDiscError("fan vertex fell outside the unit disc");
    return out;
}

namespace {

void add_subtree(CornerLocusGraph& g, const UnimodularPair& p, int depth, std::size_t parent,
                 int max_depth) {
    const FanVertex fv = vertex_for_pair(p);
    LocusVertex v;
    v.pair = p;
    v.p = fv.p;
    v.value = fv.value;
    v.depth = depth;
    const std::size_t idx = g.vertices.size();
    g.vertices.push_back(v);
    g.edges.push_back({parent, idx});
    if (depth < max_depth) {
        UnimodularPair l, r;
        mediant_children(p, l, r);
        add_subtree(g, l, depth + 1, idx, max_depth);
        add_subtree(g, r, depth + 1, idx, max_depth);
    }
}

void validate_graph(const CornerLocusGraph& g, const EnvelopeOptions& opts) {
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
        const LocusVertex& v = g.vertices[i];
        const EnvelopeValue ev = evaluate_envelope(v.p, opts);
        const int ii = static_cast<int>(i);
        if (std::abs(ev.value - v.value) > 1e-9)
            throw EdgeValidationError(ii, ii, "vertex value drifted from its pair defect");
        if (v.is_origin) {
            if (ev.active.size() != 4)
                throw EdgeValidationError(ii, ii, "origin does not see exactly the four axes");
            continue;
        }
        if (!contains(ev.active, v.pair.v) || !contains(ev.active, v.pair.w) ||
            !contains(ev.active, Vec2i(v.pair.v + v.pair.w)))
            throw EdgeValidationError(ii, ii, "vertex is missing one of its three planes");
    }
    for (const auto& e : g.edges) {
        const LocusVertex& a = g.vertices[e[0]];
        const LocusVertex& b = g.vertices[e[1]];
        const Vec2d mid = 0.5 * (a.p + b.p);
        const EnvelopeValue ev = evaluate_envelope(mid, opts);
        // The open edge is where exactly the child's two planes stay tied.
        std::vector<Vec2i> expect{b.pair.v, b.pair.w};
        std::sort(expect.begin(), expect.end(), lex_less);
        bool match = ev.active.size() == expect.size();
        for (std::size_t k = 0; match && k < expect.size(); ++k)
            match = ev.active[k].x() == expect[k].x() && ev.active[k].y() == expect[k].y();
        if (!match)
            throw EdgeValidationError(static_cast<int>(e[0]), static_cast<int>(e[1]),
                                      "midpoint active set is not the edge's plane pair");
    }
}

}  // namespace

CornerLocusGraph corner_locus(int depth, const EnvelopeOptions& opts, bool validate) {
    if (depth < 0) throw std::invalid_argument("locus depth must be nonnegative");
    constexpr int max_depth = 16;
    if (depth > max_depth) throw LevelTooDeepError(depth, max_depth);
    CornerLocusGraph g;
    g.vertices.reserve(1 + 4 * ((std::size_t(2) << depth) - 1));
    LocusVertex origin;
    origin.is_origin = true;
    origin.value = 1.0;
    g.vertices.push_back(origin);
    for (int q = 0; q < 4; ++q) {
        const UnimodularPair root{rotq(Vec2i(1, 0), q), rotq(Vec2i(0, 1), q)};
        add_subtree(g, root, 0, 0, depth);
    }
    if (validate) validate_graph(g, opts);
    return g;
}

Quadrature integrate_disc(const std::function<double(const Vec2d&)>& fn, const GridSpec& grid,
                          int threads) {
    if (grid.radial < 1 || grid.angular < 1 || grid.levels < 1)
        throw std::invalid_argument("grid dimensions must be positive");
    if (static_cast<std::int64_t>(grid.radial) * grid.angular < 16)
        throw std::invalid_argument("grid needs at least 16 cells");
    constexpr long double two_pi = 6.283185307179586476925286766559005768L;
    Quadrature q;
    for (int lvl = 0; lvl < grid.levels; ++lvl) {
        const std::int64_t nr = static_cast<std::int64_t>(grid.radial) << lvl;
        const std::int64_t na = static_cast<std::int64_t>(grid.angular) << lvl;
        const long double dr = 1.0L / static_cast<long double>(nr);
        const long double dth = two_pi / static_cast<long double>(na);
        std::vector<long double> rows(static_cast<std::size_t>(nr), 0.0L);
        auto do_row = [&](std::int64_t i) {
            const long double r = (static_cast<long double>(i) + 0.5L) * dr;
            Kahan<long double> acc;
            for (std::int64_t j = 0; j < na; ++j) {
                const long double th = (static_cast<long double>(j) + 0.5L) * dth;
                acc.add(fn(Vec2d(static_cast<double>(r * cosl(th)),
                                 static_cast<double>(r * sinl(th)))));
            }
            rows[static_cast<std::size_t>(i)] = acc.value() * r * dr * dth;
        };
        if (threads <= 1) {
            for (std::int64_t i = 0; i < nr; ++i) do_row(i);
        } else {
            std::atomic<std::int64_t> next{0};
            auto worker = [&]() {
                for (;;) {
                    const std::int64_t i = next.fetch_add(1);
                    if (i >= nr) return;
                    do_row(i);
                }
            };
            std::vector<std::thread> pool;
            const int nthreads = static_cast<int>(std::min<std::int64_t>(threads, nr));
            pool.reserve(static_cast<std::size_t>(nthreads));
            for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }
        // Rows merge in index order, so the result does not depend on the
        // thread count.
        Kahan<long double> total;
        for (long double v : rows) total.add(v);
        q.level_values.push_back(static_cast<double>(total.value()));
    }
    const auto& I = q.level_values;
    const int L = grid.levels;
    if (L == 1) {
        q.value = I[0];
        q.error_estimate = std::numeric_limits<double>::quiet_NaN();
        return q;
    }
    auto refined = [&](int lvl) { return I[lvl] + (I[lvl] - I[lvl - 1]) / 3.0; };
    q.value = refined(L - 1);
    q.error_estimate = L >= 3 ? std::abs(refined(L - 1) - refined(L - 2))
                              : std::abs(refined(1) - I[1]);
    return q;
}

CubeCheck cube_identity_check(const CubeCheckOptions& opts) {
    const SumReport s3 = truncated_sum(3.0, opts.threshold, opts.max_nodes);
    const Quadrature q = integrate_disc(
        [&opts](const Vec2d& p) { return envelope_value(p, opts.env); }, opts.grid, opts.threads);
    CubeCheck c;
    c.s3 = s3.partial + opts.s3_perturbation;
    c.s3_tail = s3.remainder;
    c.integral = q.value;
    c.integral_error = q.error_estimate;
    c.residual = 4.0 - 2.0 * c.s3 - 3.0 * c.integral;
    return c;
}

}  // namespace latdef
