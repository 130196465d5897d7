#pragma once

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "latdef/errors.hpp"

namespace latdef {

using Vec2i = Eigen::Matrix<std::int64_t, 2, 1>;
template <class Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
using Vec2d = Vec2<double>;
using Vec2ld = Vec2<long double>;

using BigInt = boost::multiprecision::cpp_int;

// Fallback coordinate type once a mediant no longer fits in 64 bits.
// Coordinates grow at most Fibonacci-like along a branch, so this tier is
// reached only near depth 90 of a single branch; everything stays exact there.
struct WideVec {
    BigInt x, y;
};

struct WidePair {
    WideVec v, w;
};

// Adjacent pair of the mediant tree. Invariant: det(v, w) == +1, which also
// forces both vectors primitive. Factories and enumerators maintain it; the
// aggregate stays open for the hot loops.
struct UnimodularPair {
    Vec2i v, w;
};

template <class Scalar>
Scalar cross2(const Vec2<Scalar>& u, const Vec2<Scalar>& v) {
    return u.x() * v.y() - u.y() * v.x();
}

template <class Scalar>
Vec2<Scalar> rot90(const Vec2<Scalar>& u) {
    return Vec2<Scalar>(-u.y(), u.x());
}

inline __int128 det_wide(const Vec2i& v, const Vec2i& w) {
    return static_cast<__int128>(v.x()) * w.y() - static_cast<__int128>(v.y()) * w.x();
}

inline BigInt det_big(const WidePair& p) {
    return p.v.x * p.w.y - p.v.y * p.w.x;
}

inline Vec2i make_primitive(std::int64_t x, std::int64_t y) {
    if (x == 0 && y == 0) throw ZeroVectorError("zero vector is not primitive");
    if (std::gcd(x, y) != 1)
        throw NotPrimitiveError("vector (" + std::to_string(x) + "," + std::to_string(y) +
                                ") has a common factor");
    return Vec2i(x, y);
}

inline UnimodularPair make_unimodular(const Vec2i& v, const Vec2i& w) {
    if (det_wide(v, w) != 1)
        throw NotPrimitiveError("pair does not have determinant +1");
    return UnimodularPair{v, w};
}

inline UnimodularPair root_pair() {
    return UnimodularPair{Vec2i(1, 0), Vec2i(0, 1)};
}

inline bool is_first_quadrant(const UnimodularPair& p) {
    return p.v.x() >= 0 && p.v.y() >= 0 && p.w.x() >= 0 && p.w.y() >= 0;
}

// Shared per-pair quantities, evaluated in long double. For a same-quadrant
// unimodular pair the dot product is nonnegative and |v||w| - v.w = g by the
// determinant identity, so every expression below is a product or a sum of
// positive terms; nothing cancels.
struct Kern {
    long double nv, nw, nm;  // |v|, |w|, |v+w|
    long double dot;         // v.w
    long double g;           // 1 / (|v||w| + v.w), offset of the corner along each tangent
    long double f;           // defect |v| + |w| - |v+w|
};

inline Kern kernel(long double a, long double b, long double c, long double d) {
    Kern k;
    k.nv = sqrtl(a * a + b * b);
    k.nw = sqrtl(c * c + d * d);
    const long double mx = a + c, my = b + d;
    k.nm = sqrtl(mx * mx + my * my);
    k.dot = a * c + b * d;
    k.g = 1.0L / (k.nv * k.nw + k.dot);
    k.f = 2.0L * k.g / (k.nv + k.nw + k.nm);
    return k;
}

inline Kern kernel(const UnimodularPair& p) {
    return kernel(static_cast<long double>(p.v.x()), static_cast<long double>(p.v.y()),
                  static_cast<long double>(p.w.x()), static_cast<long double>(p.w.y()));
}

inline long double to_long_double(const BigInt& x) {
    if (x == 0) return 0.0L;
    const BigInt ax = boost::multiprecision::abs(x);
    if (boost::multiprecision::msb(ax) > 16300u)
        return x < 0 ? -HUGE_VALL : HUGE_VALL;
    return x.convert_to<long double>();
}

inline long double wide_norm(const WideVec& u) {
    BigInt s = u.x * u.x + u.y * u.y;
    const unsigned bits = boost::multiprecision::msb(s);
    if (bits <= 120) return sqrtl(s.convert_to<long double>());
    const unsigned k = (bits - 120u) & ~1u;
    return sqrtl((s >> k).convert_to<long double>()) * exp2l(static_cast<long double>(k / 2));
}

inline Kern kernel(const WidePair& p) {
    Kern k;
    k.nv = wide_norm(p.v);
    k.nw = wide_norm(p.w);
    k.nm = wide_norm(WideVec{p.v.x + p.w.x, p.v.y + p.w.y});
    k.dot = to_long_double(p.v.x * p.w.x + p.v.y * p.w.y);
    k.g = 1.0L / (k.nv * k.nw + k.dot);
    k.f = 2.0L * k.g / (k.nv + k.nw + k.nm);
    return k;
}

// Cancellation-free defect of a first-quadrant (or any same-quadrant)
// unimodular pair.
inline double defect(const UnimodularPair& p) {
    return static_cast<double>(kernel(p).f);
}

// Upper bound for the defect of every pair in the subtree rooted at p,
// including p itself: descendants only grow the two norms, and
// f <= 2 / (|v||w| * 2 max(|v|,|w|)). Within about 2x of the true values,
// which keeps threshold enumeration near the optimal visit count.
inline long double subtree_defect_bound(const Kern& k) {
    return 1.0L / (k.nv * k.nw * (k.nv > k.nw ? k.nv : k.nw));
}

// Children of a node: (v, v+w) and (v+w, w). Returns false when the mediant
// overflows 64 bits; callers then promote to WidePair and continue exactly.
inline bool mediant_children(const UnimodularPair& p, UnimodularPair& left, UnimodularPair& right) {
    std::int64_t mx, my;
    if (__builtin_add_overflow(p.v.x(), p.w.x(), &mx) ||
        __builtin_add_overflow(p.v.y(), p.w.y(), &my))
        return false;
    const Vec2i m(mx, my);
    left = UnimodularPair{p.v, m};
    right = UnimodularPair{m, p.w};
    return true;
}

inline WidePair widen(const UnimodularPair& p) {
    return WidePair{WideVec{BigInt(p.v.x()), BigInt(p.v.y())},
                    WideVec{BigInt(p.w.x()), BigInt(p.w.y())}};
}

inline void wide_children(const WidePair& p, WidePair& left, WidePair& right) {
    WideVec m{p.v.x + p.w.x, p.v.y + p.w.y};
    left = WidePair{p.v, m};
    right = WidePair{m, p.w};
}

// One enumerated node. Exactly one of pair/wide is non-null, and only for the
// duration of the visitor call.
struct DefectTerm {
    const UnimodularPair* pair;
    const WidePair* wide;
    double f;
    int depth;
};

// Root of a subtree an enumeration did not open, with the priority it was
// queued under (best-first) or 0 (threshold pruning, budget aborts).
struct FrontierNode {
    UnimodularPair pair;
    WidePair wide;
    bool is_wide = false;
    double priority = 0.0;
};

struct EnumerationResult {
    std::uint64_t visited = 0;
    bool budget_exhausted = false;
    std::vector<FrontierNode> frontier;
};

namespace detail {

template <class Visitor>
bool visit_term(Visitor&& fn, const UnimodularPair* p, const WidePair* w, double f, int depth) {
    DefectTerm t{p, w, f, depth};
    return fn(t);
}

}  // namespace detail

// Depth-capped enumeration: visits every pair of depth <= max_depth below
// root (root has depth 0), preorder, left child first. Stops early when
// max_nodes is reached; pending subtrees then land in the frontier so that
// callers can keep their accounting exact.
template <class Visitor>
EnumerationResult enumerate_by_depth(const UnimodularPair& root, int max_depth,
                                     std::uint64_t max_nodes, Visitor&& fn) {
    EnumerationResult res;
    if (max_depth < 0) return res;
    struct Slot {
        UnimodularPair p;
        int depth;
    };
    struct WSlot {
        WidePair p;
        int depth;
    };
    std::vector<Slot> stack;
    std::vector<WSlot> wstack;
    stack.push_back({root, 0});
    auto drain_to_frontier = [&]() {
        for (const Slot& s : stack)
            res.frontier.push_back(FrontierNode{s.p, WidePair{}, false, 0.0});
        for (WSlot& s : wstack)
            res.frontier.push_back(FrontierNode{UnimodularPair{}, std::move(s.p), true, 0.0});
        res.budget_exhausted = true;
    };
    while (!stack.empty() || !wstack.empty()) {
        if (res.visited >= max_nodes) {
            drain_to_frontier();
            return res;
        }
        if (!wstack.empty()) {
            WSlot s = std::move(wstack.back());
            wstack.pop_back();
            const Kern k = kernel(s.p);
            ++res.visited;
            if (!detail::visit_term(fn, nullptr, &s.p, static_cast<double>(k.f), s.depth)) {
                drain_to_frontier();
                return res;
            }
            if (s.depth < max_depth) {
                WidePair l, r;
                wide_children(s.p, l, r);
                wstack.push_back({std::move(r), s.depth + 1});
                wstack.push_back({std::move(l), s.depth + 1});
            }
            continue;
        }
        Slot s = stack.back();
        stack.pop_back();
        const Kern k = kernel(s.p);
        ++res.visited;
        if (!detail::visit_term(fn, &s.p, nullptr, static_cast<double>(k.f), s.depth)) {
            drain_to_frontier();
            return res;
        }
        if (s.depth < max_depth) {
            UnimodularPair l, r;
            if (mediant_children(s.p, l, r)) {
                stack.push_back({r, s.depth + 1});
                stack.push_back({l, s.depth + 1});
            } else {
                WidePair wl, wr;
                wide_children(widen(s.p), wl, wr);
                wstack.push_back({std::move(wr), s.depth + 1});
                wstack.push_back({std::move(wl), s.depth + 1});
            }
        }
    }
    return res;
}

// Threshold enumeration: visits every pair whose subtree could still contain a
// defect >= threshold (sound pruning via subtree_defect_bound; the defect
// itself is not known to be monotone along branches). Visited nodes may have
// f < threshold; callers filter. Pruned subtree roots become the frontier.
// This overload streams each frontier root, with its kernel, into `sink`
// instead of materializing a vector; memory stays at O(tree depth) no matter
// how deep the cut. res.frontier is left empty. Sinks see pruned roots in
// left-to-right order; on budget abort the pending stack follows.
template <class Visitor, class FrontierSink>
EnumerationResult enumerate_threshold(const UnimodularPair& root, double threshold,
                                      std::uint64_t max_nodes, Visitor&& fn, FrontierSink&& sink) {
    EnumerationResult res;
    struct Slot {
        UnimodularPair p;
        int depth;
    };
    struct WSlot {
        WidePair p;
        int depth;
    };
    std::vector<Slot> stack;
    std::vector<WSlot> wstack;
    stack.push_back({root, 0});
    auto drain_to_frontier = [&]() {
        for (const Slot& s : stack)
            sink(FrontierNode{s.p, WidePair{}, false, 0.0}, kernel(s.p));
        for (WSlot& s : wstack) {
            const Kern k = kernel(s.p);
            sink(FrontierNode{UnimodularPair{}, std::move(s.p), true, 0.0}, k);
        }
        res.budget_exhausted = true;
    };
    const long double t = threshold;
    while (!stack.empty() || !wstack.empty()) {
        if (res.visited >= max_nodes) {
            drain_to_frontier();
            return res;
        }
        if (!wstack.empty()) {
            WSlot s = std::move(wstack.back());
            wstack.pop_back();
            const Kern k = kernel(s.p);
            if (subtree_defect_bound(k) < t) {
                sink(FrontierNode{UnimodularPair{}, std::move(s.p), true, 0.0}, k);
                continue;
            }
            ++res.visited;
            if (!detail::visit_term(fn, nullptr, &s.p, static_cast<double>(k.f), s.depth)) {
                drain_to_frontier();
                return res;
            }
            WidePair l, r;
            wide_children(s.p, l, r);
            wstack.push_back({std::move(r), s.depth + 1});
            wstack.push_back({std::move(l), s.depth + 1});
            continue;
        }
        Slot s = stack.back();
        stack.pop_back();
        const Kern k = kernel(s.p);
        if (subtree_defect_bound(k) < t) {
            sink(FrontierNode{s.p, WidePair{}, false, 0.0}, k);
            continue;
        }
        ++res.visited;
        if (!detail::visit_term(fn, &s.p, nullptr, static_cast<double>(k.f), s.depth)) {
            drain_to_frontier();
            return res;
        }
        UnimodularPair l, r;
        if (mediant_children(s.p, l, r)) {
            stack.push_back({r, s.depth + 1});
            stack.push_back({l, s.depth + 1});
        } else {
            WidePair wl, wr;
            wide_children(widen(s.p), wl, wr);
            wstack.push_back({std::move(wr), s.depth + 1});
            wstack.push_back({std::move(wl), s.depth + 1});
        }
    }
    return res;
}

// Materializing variant: collects the streamed frontier into res.frontier.
template <class Visitor>
EnumerationResult enumerate_threshold(const UnimodularPair& root, double threshold,
                                      std::uint64_t max_nodes, Visitor&& fn) {
    std::vector<FrontierNode> collected;
    EnumerationResult res =
        enumerate_threshold(root, threshold, max_nodes, std::forward<Visitor>(fn),
                            [&collected](FrontierNode&& n, const Kern&) {
                                collected.push_back(std::move(n));
                            });
    res.frontier = std::move(collected);
    return res;
}

// Best-first enumeration under a caller-supplied priority (monotone
// decreasing from parent to child, e.g. the exact subtree remainders).
// Pops exactly `budget` nodes unless stopped; the heap contents afterwards
// are the frontier, an antichain covering every unexplored branch.
template <class Priority, class Visitor>
EnumerationResult enumerate_best_first(const UnimodularPair& root, Priority&& prio,
                                       std::uint64_t budget, Visitor&& fn) {
    EnumerationResult res;
    struct Entry {
        double key;
        double f;
        UnimodularPair p;
    };
    struct WEntry {
        double key;
        double f;
        WidePair p;
    };
    auto less = [](const Entry& a, const Entry& b) { return a.key < b.key; };
    std::vector<Entry> heap;
    std::vector<WEntry> wide_pool;  // rarely populated; scanned linearly
    if (budget < (std::uint64_t(1) << 25)) heap.reserve(budget + 2);

    auto push_narrow = [&](const UnimodularPair& p) {
        const Kern k = kernel(p);
        heap.push_back(Entry{static_cast<double>(prio(k)), static_cast<double>(k.f), p});
        std::push_heap(heap.begin(), heap.end(), less);
    };
    auto push_wide = [&](WidePair&& p) {
        const Kern k = kernel(p);
        wide_pool.push_back(WEntry{static_cast<double>(prio(k)), static_cast<double>(k.f), std::move(p)});
    };

    push_narrow(root);
    std::uint64_t pops = 0;
    while (pops < budget && (!heap.empty() || !wide_pool.empty())) {
        double wide_best = -1.0;
        std::size_t wide_idx = 0;
        for (std::size_t i = 0; i < wide_pool.size(); ++i)
            if (wide_pool[i].key > wide_best) {
                wide_best = wide_pool[i].key;
                wide_idx = i;
            }
        const bool take_wide = !wide_pool.empty() && (heap.empty() || wide_best > heap.front().key);
        ++pops;
        if (take_wide) {
            WEntry e = std::move(wide_pool[wide_idx]);
            wide_pool.erase(wide_pool.begin() + static_cast<std::ptrdiff_t>(wide_idx));
            ++res.visited;
            if (!detail::visit_term(fn, nullptr, &e.p, e.f, -1)) break;
            WidePair l, r;
            wide_children(e.p, l, r);
            push_wide(std::move(l));
            push_wide(std::move(r));
            continue;
        }
        std::pop_heap(heap.begin(), heap.end(), less);
        Entry e = heap.back();
        heap.pop_back();
        ++res.visited;
        if (!detail::visit_term(fn, &e.p, nullptr, e.f, -1)) break;
        UnimodularPair l, r;
        if (mediant_children(e.p, l, r)) {
            push_narrow(l);
            push_narrow(r);
        } else {
            WidePair wl, wr;
            wide_children(widen(e.p), wl, wr);
            push_wide(std::move(wl));
            push_wide(std::move(wr));
        }
    }
    res.budget_exhausted = true;
    res.frontier.reserve(heap.size() + wide_pool.size());
    for (const Entry& e : heap)
        res.frontier.push_back(FrontierNode{e.p, WidePair{}, false, e.key});
    for (WEntry& e : wide_pool)
        res.frontier.push_back(FrontierNode{UnimodularPair{}, std::move(e.p), true, e.key});
    return res;
}

// Repeated random root-to-leaf walks, stopping a walk when the next pair
// would exceed max_entry. Every visited pair is reported, duplicates
// included. Deterministic for a fixed seed.
template <class Visitor>
std::uint64_t random_walk_pairs(std::uint64_t count, std::int64_t max_entry, std::uint64_t seed,
                                Visitor&& fn) {
    std::mt19937_64 rng(seed);
    std::uint64_t produced = 0;
    while (produced < count) {
        UnimodularPair cur = root_pair();
        while (produced < count) {
            ++produced;
            fn(cur);
            UnimodularPair l, r;
            if (!mediant_children(cur, l, r)) break;
            const UnimodularPair& next = (rng() & 1u) ? r : l;
            if (next.v.x() > max_entry || next.v.y() > max_entry || next.w.x() > max_entry ||
                next.w.y() > max_entry)
                break;
            cur = next;
        }
    }
    return produced;
}

// Defect extended to any determinant +1 pair. Same closed quadrant keeps the
// |v+w| form; otherwise the excess over |v-w| is used. Axis vectors belong to
// both neighbouring closed quadrants.
inline bool same_closed_quadrant(const Vec2i& v, const Vec2i& w) {
    static const int sx[4] = {1, -1, -1, 1};
    static const int sy[4] = {1, 1, -1, -1};
    for (int q = 0; q < 4; ++q) {
        if (sx[q] * v.x() >= 0 && sy[q] * v.y() >= 0 && sx[q] * w.x() >= 0 && sy[q] * w.y() >= 0)
            return true;
    }
    return false;
}

inline double extended_defect(const Vec2i& v, const Vec2i& w) {
    if (det_wide(v, w) != 1)
        throw NotPrimitiveError("extended defect requires determinant +1");
    const long double a = v.x(), b = v.y(), c = w.x(), d = w.y();
    const long double nv = sqrtl(a * a + b * b);
    const long double nw = sqrtl(c * c + d * d);
    const long double dot = a * c + b * d;
    if (same_closed_quadrant(v, w)) {
        const long double mx = a + c, my = b + d;
        const long double nm = sqrtl(mx * mx + my * my);
        // dot >= 0 here, so |v||w| + dot is a positive sum and the
        // determinant identity gives |v||w| - dot = 1 / (|v||w| + dot).
        return static_cast<double>(2.0L / ((nv * nw + dot) * (nv + nw + nm)));
    }
    // A determinant +1 pair spanning two quadrants always has dot <= 0: the
    // sector from v to w would otherwise cross an axis at width under 90
    // degrees, which forces |det| >= 2.  So |v||w| - dot never cancels.
    const long double ex = a - c, ey = b - d;
    const long double nd = sqrtl(ex * ex + ey * ey);
    return static_cast<double>(2.0L / ((nv * nw - dot) * (nv + nw + nd)));
}

}  // namespace latdef
