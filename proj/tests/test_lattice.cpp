#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <vector>

#include "latdef/corner.hpp"
#include "latdef/lattice.hpp"
#include "latdef/reference.hpp"
#include "latdef/summation.hpp"

using namespace latdef;

namespace {

constexpr double kRoot2 = 1.4142135623730950488;

std::array<std::int64_t, 4> entries(const UnimodularPair& p) {
    return {p.v.x(), p.v.y(), p.w.x(), p.w.y()};
}

std::vector<UnimodularPair> walk_sample(std::uint64_t n, std::int64_t max_entry,
                                        std::uint64_t seed) {
    std::vector<UnimodularPair> out;
    out.reserve(n);
    random_walk_pairs(n, max_entry, seed, [&](const UnimodularPair& p) { out.push_back(p); });
    return out;
}

}  // namespace

TEST_CASE("vector factories enforce their preconditions") {
    CHECK_THROWS_AS(make_primitive(0, 0), ZeroVectorError);
    CHECK_THROWS_AS(make_primitive(2, 4), NotPrimitiveError);
    CHECK_THROWS_AS(make_primitive(-6, 9), NotPrimitiveError);
    const Vec2i p = make_primitive(3, 5);
    CHECK(p.x() == 3);
    CHECK(p.y() == 5);
    CHECK(make_primitive(0, -1).y() == -1);

    CHECK_THROWS_AS(make_unimodular(Vec2i(1, 1), Vec2i(2, 1)), NotPrimitiveError);
    CHECK_THROWS_AS(make_unimodular(Vec2i(1, 0), Vec2i(1, 0)), NotPrimitiveError);
    const UnimodularPair r = make_unimodular(Vec2i(1, 0), Vec2i(0, 1));
    CHECK(det_wide(r.v, r.w) == 1);
}

TEST_CASE("kernel of the root pair matches closed forms") {
    const Kern k = kernel(root_pair());
    CHECK(k.nv == 1.0L);
    CHECK(k.nw == 1.0L);
    CHECK(std::abs(static_cast<double>(k.nm) - kRoot2) <= 1e-18);
    CHECK(k.dot == 0.0L);
    CHECK(k.g == 1.0L);
    CHECK(std::abs(defect(root_pair()) - (2.0 - kRoot2)) <= 3e-16);

    // The double-evaluated closed form and the extended kernel may part by
    // one last-place unit of 1.0.
    const Kern l = kernel(make_unimodular(Vec2i(1, 0), Vec2i(1, 1)));
    const double expect = 1.0 + kRoot2 - std::sqrt(5.0);
    CHECK(std::abs(static_cast<double>(l.f) - expect) <= 3e-16);
}

TEST_CASE("defect agrees with the 50-digit reference on large random pairs") {
    const auto pairs = walk_sample(2000, 1000000, 99);
    REQUIRE(pairs.size() == 2000);
    for (const UnimodularPair& p : pairs) {
        const double fast = defect(p);
        const double slow = defect_naive(p);
        REQUIRE(slow > 0.0);
        REQUIRE(std::abs(fast - slow) <= 1e-12 * slow);
    }
}

TEST_CASE("subtree bound dominates every descendant") {
    for (const UnimodularPair& p : walk_sample(50, 4000, 3)) {
        const long double bound = subtree_defect_bound(kernel(p));
        enumerate_by_depth(p, 4, 1u << 10, [&](const DefectTerm& t) {
            REQUIRE(t.f <= static_cast<double>(bound));
            if (t.pair != nullptr)
                REQUIRE(t.f <= static_cast<double>(subtree_defect_bound(kernel(*t.pair))));
            return true;
        });
    }
}

TEST_CASE("depth enumeration is a duplicate-free preorder walk") {
    std::vector<DefectTerm> terms;
    std::vector<std::array<std::int64_t, 4>> seen;
    std::vector<int> depths;
    const EnumerationResult res =
        enumerate_by_depth(root_pair(), 10, std::uint64_t(1) << 40, [&](const DefectTerm& t) {
            REQUIRE(t.pair != nullptr);
            REQUIRE(det_wide(t.pair->v, t.pair->w) == 1);
            REQUIRE(is_first_quadrant(*t.pair));
            seen.push_back(entries(*t.pair));
            depths.push_back(t.depth);
            return true;
        });
    CHECK(res.visited == 2047);  // 2^11 - 1
    CHECK_FALSE(res.budget_exhausted);
    CHECK(res.frontier.empty());

    std::set<std::array<std::int64_t, 4>> uniq(seen.begin(), seen.end());
    CHECK(uniq.size() == seen.size());

    // Left-first preorder descends the left spine first: w runs through (k,1).
    for (int k = 0; k <= 10; ++k) {
        CHECK(depths[static_cast<std::size_t>(k)] == k);
        if (k > 0) {
            CHECK(seen[static_cast<std::size_t>(k)][2] == k);
            CHECK(seen[static_cast<std::size_t>(k)][3] == 1);
        }
    }
}

TEST_CASE("budget aborts keep the visited plus frontier accounting exact") {
    Kahan<long double> mass;
    const EnumerationResult res =
        enumerate_by_depth(root_pair(), 2000, 1000, [&](const DefectTerm& t) {
            mass.add(static_cast<long double>(t.f));
            return true;
        });
    CHECK(res.visited == 1000);
    CHECK(res.budget_exhausted);
    CHECK_FALSE(res.frontier.empty());
    for (const FrontierNode& fn : res.frontier) {
        REQUIRE_FALSE(fn.is_wide);
        mass.add(subtree_sum_f(kernel(fn.pair)));
    }
    CHECK(std::abs(static_cast<double>(mass.value()) - 2.0) <= 1e-12);
}

TEST_CASE("threshold enumeration prunes a contiguous staircase frontier") {
    const double t = 1e-4;
    Kahan<long double> mass;
    const EnumerationResult res = enumerate_threshold(
        root_pair(), t, std::uint64_t(1) << 40, [&](const DefectTerm& term) {
            REQUIRE(term.pair != nullptr);
            REQUIRE(subtree_defect_bound(kernel(*term.pair)) >= static_cast<long double>(t));
            mass.add(static_cast<long double>(term.f));
            return true;
        });
    CHECK_FALSE(res.budget_exhausted);
    REQUIRE(res.frontier.size() >= 2);
    for (const FrontierNode& fn : res.frontier) {
        REQUIRE_FALSE(fn.is_wide);
        REQUIRE(subtree_defect_bound(kernel(fn.pair)) < static_cast<long double>(t));
        mass.add(subtree_sum_f(kernel(fn.pair)));
    }
    CHECK(std::abs(static_cast<double>(mass.value()) - 2.0) <= 1e-12);

    // Pruned subtrees tile the quadrant: consecutive roots share an edge
    // vector, and the two spines pin the endpoints.
    CHECK(res.frontier.front().pair.v == Vec2i(1, 0));
    CHECK(res.frontier.back().pair.w == Vec2i(0, 1));
    for (std::size_t i = 0; i + 1 < res.frontier.size(); ++i)
        CHECK(res.frontier[i].pair.w == res.frontier[i + 1].pair.v);
}

TEST_CASE("best-first enumeration pops priorities in non-increasing order") {
    const auto prio = [](const Kern& k) { return static_cast<double>(subtree_sum_f(k)); };
    double last = std::numeric_limits<double>::infinity();
    Kahan<long double> mass;
    std::uint64_t pops = 0;
    const EnumerationResult res =
        enumerate_best_first(root_pair(), prio, 1000, [&](const DefectTerm& t) {
            REQUIRE(t.pair != nullptr);
            const double key = prio(kernel(*t.pair));
            REQUIRE(key <= last);
            last = key;
            mass.add(static_cast<long double>(t.f));
            ++pops;
            return true;
        });
    CHECK(pops == 1000);
    CHECK(res.visited == 1000);
    CHECK(res.frontier.size() == 1001);  // each pop replaces one node by two
    for (const FrontierNode& fn : res.frontier) mass.add(static_cast<long double>(fn.priority));
    CHECK(std::abs(static_cast<double>(mass.value()) - 2.0) <= 1e-12);
}

TEST_CASE("mediant overflow promotes to exact wide arithmetic") {
    const std::int64_t k = std::numeric_limits<std::int64_t>::max();
    const UnimodularPair p = make_unimodular(Vec2i(1, 0), Vec2i(k, 1));
    UnimodularPair l, r;
    CHECK_FALSE(mediant_children(p, l, r));

    std::uint64_t narrow = 0, wide = 0;
    const double froot = defect(p);
    CHECK(froot > 0.0);
    enumerate_by_depth(p, 2, 64, [&](const DefectTerm& t) {
        if (t.pair != nullptr) {
            ++narrow;
        } else {
            REQUIRE(t.wide != nullptr);
            REQUIRE(det_big(*t.wide) == 1);
            REQUIRE(t.f > 0.0);
            // At this scale sibling defects differ relatively by ~1e-19,
            // below double resolution, so equality is possible.
            REQUIRE(t.f <= froot);
            ++wide;
        }
        return true;
    });
    CHECK(narrow == 1);
    CHECK(wide == 6);
}

TEST_CASE("wide kernels reproduce narrow kernels and saturate gracefully") {
    for (const UnimodularPair& p :
         {root_pair(), make_unimodular(Vec2i(1, 0), Vec2i(5, 1)),
          make_unimodular(Vec2i(2, 1), Vec2i(5, 3))}) {
        const Kern a = kernel(p);
        const Kern b = kernel(widen(p));
        CHECK(a.f == b.f);
        CHECK(a.g == b.g);
    }

    CHECK(wide_norm(WideVec{BigInt(1) << 200, BigInt(0)}) == ldexpl(1.0L, 200));
    CHECK(to_long_double(BigInt(1) << 17000) == HUGE_VALL);
    CHECK(to_long_double(-(BigInt(1) << 17000)) == -HUGE_VALL);

    // Entries far beyond long double range: the defect underflows to zero
    // without ever producing a NaN.
    const BigInt n = BigInt(1) << 17000;
    const WidePair huge{WideVec{n, BigInt(1)}, WideVec{n - 1, BigInt(1)}};
    REQUIRE(det_big(huge) == 1);
    const Kern h = kernel(huge);
    CHECK(h.f == 0.0L);
    CHECK(h.f == h.f);
}

TEST_CASE("random walks are deterministic and respect the entry cap") {
    const auto a = walk_sample(500, 1000, 42);
    const auto b = walk_sample(500, 1000, 42);
    REQUIRE(a.size() == 500);
    for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(entries(a[i]) == entries(b[i]));

    const auto c = walk_sample(500, 1000, 43);
    bool differs = false;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (entries(a[i]) != entries(c[i])) differs = true;
    CHECK(differs);

    for (const UnimodularPair& p : a) {
        for (std::int64_t e : entries(p)) REQUIRE(e <= 1000);
        REQUIRE(det_wide(p.v, p.w) == 1);
        REQUIRE(is_first_quadrant(p));
    }
}

TEST_CASE("extended defect covers pairs outside a single quadrant") {
    // Same closed quadrant reduces to the tree defect.
    const UnimodularPair tree = make_unimodular(Vec2i(2, 1), Vec2i(5, 3));
    CHECK(extended_defect(tree.v, tree.w) == doctest::Approx(defect(tree)).epsilon(1e-15));

    // Worked example: (1,0) and (-1,1) give 1 + sqrt(2) - sqrt(5).
    const double expect = 1.0 + kRoot2 - std::sqrt(5.0);
    CHECK(std::abs(extended_defect(Vec2i(1, 0), Vec2i(-1, 1)) - expect) <= 1e-15);

    // Negating both vectors changes nothing, bit for bit.
    CHECK(extended_defect(Vec2i(1, 0), Vec2i(-1, 1)) ==
          extended_defect(Vec2i(-1, 0), Vec2i(1, -1)));
    CHECK(extended_defect(Vec2i(1, 2), Vec2i(-1, -1)) ==
          extended_defect(Vec2i(-1, -2), Vec2i(1, 1)));

    CHECK_THROWS_AS(extended_defect(Vec2i(0, 1), Vec2i(1, 0)), NotPrimitiveError);
    CHECK_THROWS_AS(extended_defect(Vec2i(1, 1), Vec2i(3, 2)), NotPrimitiveError);

    // Opposite-quadrant spans agree with the 50-digit reference.
    CHECK(extended_defect(Vec2i(1, 2), Vec2i(-1, -1)) ==
          doctest::Approx(extended_defect_naive(Vec2i(1, 2), Vec2i(-1, -1))).epsilon(1e-14));
    CHECK(extended_defect(Vec2i(-1, 1), Vec2i(1, -2)) ==
          doctest::Approx(extended_defect_naive(Vec2i(-1, 1), Vec2i(1, -2))).epsilon(1e-14));
}

TEST_CASE("extended defect stays stable under massive cancellation") {
    // det = (N+1)(-(N-1)) + N*N = 1 with near-parallel million-scale entries;
    // the direct norm difference loses all significance in doubles.
    const std::int64_t n = 1000000;
    const Vec2i v(n + 1, n), w(-n, -(n - 1));
    const double fast = extended_defect(v, w);
    const double slow = extended_defect_naive(v, w);
    REQUIRE(slow > 0.0);
    CHECK(std::abs(fast - slow) <= 1e-12 * slow);
    CHECK(fast < 1e-18);
}

TEST_CASE("compensated accumulator absorbs rounding and order changes") {
    Kahan<double> k;
    for (int i = 0; i < 1000000; ++i) k.add(0.1);
    CHECK(std::abs(k.value() - 100000.0) <= 1e-9);

    Kahan<double> big;
    big.add(1e100);
    big.add(1.0);
    big.add(-1e100);
    CHECK(big.value() == 1.0);

    Kahan<double> lo, hi, whole;
    for (int i = 0; i < 2000; ++i) {
        const double x = std::sin(0.37 * i) / (1.0 + i);
        (i < 1000 ? lo : hi).add(x);
        whole.add(x);
    }
    lo.merge(hi);
    CHECK(std::abs(lo.value() - whole.value()) <= 1e-15);
}
