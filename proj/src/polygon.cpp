#include "latdef/polygon.hpp"

#include <optional>
#include <stdexcept>

#include "latdef/corner.hpp"
#include "latdef/summation.hpp"

namespace latdef {

namespace {

// In-order walk over the level-n frontier of one quadrant tree, left to
// right, so pairs (and with them corners) come out in increasing angle.
template <class F>
void frontier_pass(const UnimodularPair& p, int depth, F&& fn) {
    if (depth == 0) {
        fn(p);
        return;
    }
    UnimodularPair l, r;
    mediant_children(p, l, r);  // entries stay far below 64 bits at any legal level
    frontier_pass(l, depth - 1, fn);
    frontier_pass(r, depth - 1, fn);
}

template <class F>
void mediant_pass(const Vec2i& v, const Vec2i& w, int rounds, F&& fn) {
    if (rounds == 0) return;
    const Vec2i m = v + w;
    mediant_pass(v, m, rounds - 1, fn);
    fn(m);
    mediant_pass(m, w, rounds - 1, fn);
}

Vec2i rotq(const Vec2i& u, int q) {
    Vec2i r = u;
    for (int i = 0; i < q; ++i) r = rot90<std::int64_t>(r);
    return r;
}

}  // namespace

UnimodularReport check_unimodular(std::span<const Vec2i> normals, bool cyclic) {
    UnimodularReport rep;
    if (normals.empty()) {
        rep.ok = false;
        rep.detail = "empty normal list";
        return rep;
    }
    const std::size_t n = normals.size();
    const std::size_t steps = cyclic ? n : n - 1;
    for (std::size_t i = 0; i < steps; ++i) {
        const Vec2i& a = normals[i];
        const Vec2i& b = normals[(i + 1) % n];
        const __int128 d = det_wide(a, b);
        if (d != 1) {
            rep.ok = false;
            rep.first_violation = i;
            rep.detail = "step " + std::to_string(i) + " -> " + std::to_string((i + 1) % n) +
                         " has determinant " + std::to_string(static_cast<long long>(d)) +
                         ", expected 1";
            return rep;
        }
    }
    return rep;
}

Polygon::Polygon(int level) : level_(level) {
    if (level < 0) throw std::invalid_argument("polygon level must be nonnegative");
    if (level > max_level) throw LevelTooDeepError(level, max_level);
}

PolygonMetrics Polygon::metrics() const {
    Kahan<long double> offsets;   // sum of corner tangent lengths g
    Kahan<long double> lattice;   // sum of per-pair lattice edge mass g(1/|v| + 1/|w|)
    Kahan<long double> shoelace;  // sum of cross(c_i, c_{i+1}) over quadrant corners
    std::optional<Vec2ld> first, prev;
    frontier_pass(root_pair(), level_, [&](const UnimodularPair& p) {
        const Kern k = kernel(p);
        offsets.add(k.g);
        lattice.add(subtree_sum_f(k));
        const Vec2ld c = corner_state(p, k).corner;
        if (prev)
            shoelace.add(cross2<long double>(*prev, c));
        else
            first = c;
        prev = c;
    });
    // Close one quadrant against the 90 degree copy of its first corner; the
    // other three quadrants contribute the same sums by rotation invariance.
    shoelace.add(cross2<long double>(*prev, rot90<long double>(*first)));
    PolygonMetrics m;
    m.perimeter = static_cast<double>(8.0L * offsets.value());
    m.lattice_perimeter = static_cast<double>(4.0L * lattice.value());
    m.area = static_cast<double>(2.0L * shoelace.value());
    return m;
}

void Polygon::vertices(const std::function<void(const Vec2d&)>& sink) const {
    for (int q = 0; q < 4; ++q) {
        frontier_pass(root_pair(), level_, [&](const UnimodularPair& p) {
            Vec2ld c = corner_state(p).corner;
            for (int i = 0; i < q; ++i) c = rot90<long double>(c);
            sink(Vec2d(static_cast<double>(c.x()), static_cast<double>(c.y())));
        });
    }
}

std::vector<Vec2d> Polygon::vertex_list() const {
    if (level_ > max_list_level) throw LevelTooDeepError(level_, max_list_level);
    std::vector<Vec2d> out;
    out.reserve(static_cast<std::size_t>(side_count()));
    vertices([&](const Vec2d& v) { out.push_back(v); });
    return out;
}

void Polygon::normals(const std::function<void(const Vec2i&)>& sink) const {
    for (int q = 0; q < 4; ++q) {
        sink(rotq(Vec2i(1, 0), q));
        mediant_pass(Vec2i(1, 0), Vec2i(0, 1), level_,
                     [&](const Vec2i& m) { sink(rotq(m, q)); });
    }
}

std::vector<Vec2i> Polygon::normal_list() const {
    if (level_ > max_list_level) throw LevelTooDeepError(level_, max_list_level);
    std::vector<Vec2i> out;
    out.reserve(static_cast<std::size_t>(side_count()));
    normals([&](const Vec2i& u) { out.push_back(u); });
    return out;
}

bool Polygon::check_fan() const {
    std::optional<Vec2i> first, prev;
    bool ok = true;
    normals([&](const Vec2i& u) {
        if (prev && det_wide(*prev, u) != 1) ok = false;
        if (!prev) first = u;
        prev = u;
    });
    if (!first || det_wide(*prev, *first) != 1) ok = false;
    return ok;
}

}  // namespace latdef
