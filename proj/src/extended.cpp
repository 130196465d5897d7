#include <cstdint>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "latdef/lattice.hpp"
#include "latdef/series.hpp"
#include "latdef/summation.hpp"

namespace latdef {

namespace {

struct SliceSum {
    Kahan<double> sum;
    std::uint64_t terms = 0;
};

// All determinant-one integer pairs with entries in [-N, N], visited in
// lexicographic (a, b, c, d) order. With a nonzero, d is pinned by the
// determinant; with a zero only bc = -1 survives and d runs free.
void sweep_a_range(std::int64_t n, std::int64_t a_lo, std::int64_t a_hi, SliceSum& out) {
    for (std::int64_t a = a_lo; a <= a_hi; ++a) {
        if (a == 0) {
            for (std::int64_t d = -n; d <= n; ++d) {
                out.sum.add(extended_defect(Vec2i(0, -1), Vec2i(1, d)));
                ++out.terms;
            }
            for (std::int64_t d = -n; d <= n; ++d) {
                out.sum.add(extended_defect(Vec2i(0, 1), Vec2i(-1, d)));
                ++out.terms;
            }
            continue;
        }
        for (std::int64_t b = -n; b <= n; ++b) {
            for (std::int64_t c = -n; c <= n; ++c) {
                const std::int64_t num = 1 + b * c;
                if (num % a != 0) continue;
                const std::int64_t d = num / a;
                if (d < -n || d > n) continue;
                out.sum.add(extended_defect(Vec2i(a, b), Vec2i(c, d)));
                ++out.terms;
            }
        }
    }
}

}  // namespace

SumReport extended_sum(std::int64_t entry_bound, int threads) {
    if (entry_bound < 1) throw std::invalid_argument("entry bound must be at least 1");
    const std::int64_t n = entry_bound;
    SliceSum all;
    if (threads <= 1) {
        sweep_a_range(n, -n, n, all);
    } else {
        const std::int64_t span = 2 * n + 1;
        const int jobs = static_cast<int>(std::min<std::int64_t>(threads, span));
        std::vector<SliceSum> slots(static_cast<std::size_t>(jobs));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int i = 0; i < jobs; ++i) {
            const std::int64_t lo = -n + span * i / jobs;
            const std::int64_t hi = -n + span * (i + 1) / jobs - 1;
            pool.emplace_back([&, lo, hi, i]() { sweep_a_range(n, lo, hi, slots[std::size_t(i)]); });
        }
        for (auto& th : pool) th.join();
        for (const SliceSum& s : slots) {
            all.sum.merge(s.sum);
            all.terms += s.terms;
        }
    }
    SumReport r;
    r.power = 1.0;
    r.partial = all.sum.value();
    r.remainder = std::numeric_limits<double>::quiet_NaN();
    r.total = r.partial;
    r.terms = all.terms;
    r.frontier_size = 0;
    r.mode = SumMode::Heuristic;
    r.budget_exhausted = false;
    return r;
}

}  // namespace latdef
