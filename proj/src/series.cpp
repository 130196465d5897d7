#include "latdef/series.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "latdef/corner.hpp"
#include "latdef/summation.hpp"

namespace latdef {

namespace {

long double tail_value(int power, const Kern& k) {
    return power == 1 ? subtree_sum_f(k) : subtree_sum_f2(k);
}

double power_term(double f, double alpha, int int_alpha) {
    switch (int_alpha) {
        case 1: return f;
        case 2: return f * f;
        case 3: return f * f * f;
        default: return std::pow(f, alpha);
    }
}

int integer_alpha(double alpha) {
    const double r = std::nearbyint(alpha);
    if (alpha == r && r >= 1.0 && r <= 3.0) return static_cast<int>(r);
    return 0;
}

struct DepthSums {
    Kahan<double> partial;
    Kahan<long double> remainder;
    std::uint64_t terms = 0;
    std::uint64_t frontier = 0;
};

void depth_sweep(const UnimodularPair& root, int power, int depth, DepthSums& out) {
    enumerate_by_depth(root, depth, std::numeric_limits<std::uint64_t>::max(),
                       [&](const DefectTerm& t) {
                           if (t.depth < depth) {
                               out.partial.add(power == 1 ? t.f : t.f * t.f);
                               ++out.terms;
                           } else {
                               const Kern k = t.pair ? kernel(*t.pair) : kernel(*t.wide);
                               out.remainder.add(tail_value(power, k));
                               ++out.frontier;
                           }
                           return true;
                       });
}

SumReport finish(double power, const Kahan<double>& partial, long double remainder,
                 std::uint64_t terms, std::uint64_t frontier, SumMode mode, bool exhausted) {
    SumReport r;
    r.power = power;
    r.partial = partial.value();
    r.remainder = static_cast<double>(remainder);
    r.total = static_cast<double>(partial.value() + remainder);
    r.terms = terms;
    r.frontier_size = frontier;
    r.mode = mode;
    r.budget_exhausted = exhausted;
    return r;
}

SumReport depth_exact(int power, int depth, int threads) {
    if (depth < 0) throw std::invalid_argument("frontier depth must be nonnegative");
    if (depth > 28) throw LevelTooDeepError(depth, 28);
    DepthSums all;
    const int split = 6;
    if (threads <= 1 || depth <= split + 2) {
        depth_sweep(root_pair(), power, depth, all);
    } else {
        std::vector<UnimodularPair> roots;
        roots.reserve(std::size_t(1) << split);
        enumerate_by_depth(root_pair(), split, std::numeric_limits<std::uint64_t>::max(),
                           [&](const DefectTerm& t) {
                               if (t.depth < split) {
                                   all.partial.add(power == 1 ? t.f : t.f * t.f);
                                   ++all.terms;
                               } else {
                                   roots.push_back(*t.pair);
                               }
                               return true;
                           });
        std::vector<DepthSums> slots(roots.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= roots.size()) return;
                depth_sweep(roots[i], power, depth - split, slots[i]);
            }
        };
        std::vector<std::thread> pool;
        const int n = std::min<int>(threads, static_cast<int>(roots.size()));
        pool.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
        for (const DepthSums& s : slots) {
            all.partial.merge(s.partial);
            all.remainder.merge(s.remainder);
            all.terms += s.terms;
            all.frontier += s.frontier;
        }
    }
    return finish(power, all.partial, all.remainder.value(), all.terms, all.frontier,
                  SumMode::ExactRemainder, false);
}

SumReport best_first_exact(int power, std::uint64_t budget) {
    Kahan<double> partial;
    std::uint64_t terms = 0;
    // Keyed on the node's own term, not the subtree sum. The term decays
    // monotonically along tree edges, so the visited set is exactly the
    // budget's largest terms, which no other budget-sized ideal beats.
    // Subtree-sum keys chase harmonic spines whose own terms are tiny and
    // leave a remainder about four times larger at equal budget.
    auto prio = [power](const Kern& k) { return power == 1 ? k.f : k.f * k.f; };
    EnumerationResult res =
        enumerate_best_first(root_pair(), prio, budget, [&](const DefectTerm& t) {
            partial.add(power == 1 ? t.f : t.f * t.f);
            ++terms;
            return true;
        });
    // The frontier still certifies the remainder exactly through the closed
    // subtree sums, whatever order the interior was opened in.
    Kahan<double> rem;
    for (const FrontierNode& fn : res.frontier) {
        const Kern k = fn.is_wide ? kernel(fn.wide) : kernel(fn.pair);
        rem.add(static_cast<double>(tail_value(power, k)));
    }
    return finish(power, partial, static_cast<long double>(rem.value()), terms,
                  res.frontier.size(), SumMode::ExactRemainder, res.budget_exhausted);
}

}  // namespace

const char* to_string(SumMode m) {
    switch (m) {
        case SumMode::ExactRemainder: return "exact-remainder";
        case SumMode::BoundedTail: return "bounded-tail";
        case SumMode::Heuristic: return "heuristic";
        case SumMode::DivergenceSuspected: return "divergence-suspected";
    }
    return "unknown";
}

SumReport exact_partial_sum(int power, const ExactPolicy& policy, int threads) {
    if (power != 1 && power != 2)
        throw std::invalid_argument("exact remainders exist for powers 1 and 2 only");
    if (const auto* d = std::get_if<DepthPolicy>(&policy))
        return depth_exact(power, d->depth, threads);
    return best_first_exact(power, std::get<BestFirstPolicy>(policy).budget);
}

SumReport truncated_sum(double alpha, double threshold, std::uint64_t max_nodes) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    double t = threshold;
    if (!(t > 0.0)) {
        // Visit count scales like threshold^(-2/3); aim it at the node budget.
        t = 0.5 * std::pow(3.82 / static_cast<double>(std::max<std::uint64_t>(max_nodes, 64)), 1.5);
        t = std::clamp(t, 1e-14, 0.25);
    }
    const int ia = integer_alpha(alpha);

    if (alpha >= 1.0) {
        Kahan<double> partial;
        Kahan<long double> small;  // visited terms below threshold, known exactly
        Kahan<long double> bound;
        std::uint64_t terms = 0, frontier = 0;
        // Frontier roots stream straight into the tail bound; materializing
        // them costs gigabytes once the cut drops below ~1e-10.
        EnumerationResult res = enumerate_threshold(
            root_pair(), t, max_nodes,
            [&](const DefectTerm& term) {
                if (term.f >= t) {
                    partial.add(power_term(term.f, alpha, ia));
                    ++terms;
                } else {
                    small.add(power_term(term.f, alpha, ia));
                }
                return true;
            },
            [&](FrontierNode&&, const Kern& k) {
                bound.add(powl(subtree_sum_f(k), static_cast<long double>(alpha)));
                ++frontier;
            });
        return finish(alpha, partial, small.value() + bound.value(), terms, frontier,
                      SumMode::BoundedTail, res.budget_exhausted);
    }

    // alpha < 1: three partial sums at thresholds 64t, 8t, t. The tail behaves
    // like c * t^(alpha - 2/3) = c * u^(3 alpha - 2) in u = t^(1/3), so each
    // rung halves u and one power-law extrapolation step removes the leading
    // tail term. Band increments that fail to shrink mean the would-be tail
    // exponent is nonpositive: divergence suspected.
    Kahan<double> band0, band1, band2;
    std::uint64_t terms = 0, frontier = 0;
    EnumerationResult res = enumerate_threshold(
        root_pair(), t, max_nodes,
        [&](const DefectTerm& term) {
            if (term.f < t) return true;
            const double x = power_term(term.f, alpha, ia);
            if (term.f >= 64.0 * t)
                band0.add(x);
            else if (term.f >= 8.0 * t)
                band1.add(x);
            else
                band2.add(x);
            ++terms;
            return true;
        },
        [&](FrontierNode&&, const Kern&) { ++frontier; });
    Kahan<double> partial = band0;
    partial.merge(band1);
    partial.merge(band2);
    SumReport r;
    r.power = alpha;
    r.partial = partial.value();
    r.terms = terms;
    r.frontier_size = frontier;
    r.budget_exhausted = res.budget_exhausted;
    const double d1 = band1.value(), d2 = band2.value();
    if (!(d1 > 0.0) || d2 / d1 >= 0.95) {
        r.mode = SumMode::DivergenceSuspected;
        r.remainder = std::numeric_limits<double>::quiet_NaN();
        r.total = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    const double beta = 3.0 * alpha - 2.0;
    r.remainder = d2 / (std::pow(2.0, beta) - 1.0);
    r.total = r.partial + r.remainder;
    r.mode = SumMode::Heuristic;
    return r;
}

std::vector<ZetaRow> zeta_scan(const std::vector<double>& alphas, std::uint64_t budget) {
    if (alphas.empty()) throw std::invalid_argument("alpha list must be nonempty");
    for (double a : alphas)
        if (!(a > 0.0)) throw std::invalid_argument("alpha must be positive");
    const std::size_t n = alphas.size();
    std::vector<Kahan<double>> sums(n), companions(n);
    auto prio = [](const Kern& k) { return subtree_sum_f(k); };
    EnumerationResult res =
        enumerate_best_first(root_pair(), prio, budget, [&](const DefectTerm& term) {
            const Kern k = term.pair ? kernel(*term.pair) : kernel(*term.wide);
            const double prod = static_cast<double>(k.nv * k.nw * k.nm);
            for (std::size_t i = 0; i < n; ++i) {
                sums[i].add(std::pow(static_cast<double>(k.f), alphas[i]));
                companions[i].add(std::pow(prod, -alphas[i]));
            }
            return true;
        });
    std::vector<Kahan<double>> bounds(n);
    for (const FrontierNode& fn : res.frontier)
        for (std::size_t i = 0; i < n; ++i)
            if (alphas[i] >= 1.0) bounds[i].add(std::pow(fn.priority, alphas[i]));
    std::vector<ZetaRow> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        SumReport& rep = rows[i].report;
        rep.power = alphas[i];
        rep.partial = sums[i].value();
        rep.terms = res.visited;
        rep.frontier_size = res.frontier.size();
        rep.budget_exhausted = true;
        rows[i].companion_partial = companions[i].value();
        if (alphas[i] >= 1.0) {
            rep.mode = SumMode::BoundedTail;
            rep.remainder = bounds[i].value();
            rep.total = rep.partial + rep.remainder;
            rows[i].companion_remainder = std::pow(3.0, alphas[i]) * bounds[i].value();
        } else {
            // The tail exponent alpha - 2/3 is nonpositive at 2/3 and below:
            // no finite total exists there, and between 2/3 and 1 no bound.
            rep.mode = alphas[i] <= 2.0 / 3.0 ? SumMode::DivergenceSuspected : SumMode::Heuristic;
            rep.remainder = std::numeric_limits<double>::quiet_NaN();
            rep.total = alphas[i] <= 2.0 / 3.0 ? std::numeric_limits<double>::quiet_NaN()
                                               : rep.partial;
            rows[i].companion_remainder = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return rows;
}

}  // namespace latdef
