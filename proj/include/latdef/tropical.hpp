#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "latdef/lattice.hpp"
#include "latdef/series.hpp"

namespace latdef {

// F(p) = min over primitive integer w of (|w| + p.w), the lower envelope of
// one supporting plane per tangent direction. Finite on the open unit disc;
// the minimum escapes to -infinity outside the closed disc.
struct EnvelopeOptions {
    double tie_tol = 1e-9;         // planes within this of the minimum count as active
    std::int64_t max_ring = 1000000;  // emergency stop for the ring search
};

struct EnvelopeValue {
    Vec2d p = Vec2d::Zero();
    double value = 0.0;
    std::vector<Vec2i> active;  // lexicographically sorted
    bool certified = false;     // ring bound proved no unseen plane can compete
};

double envelope_value(const Vec2d& p, const EnvelopeOptions& opts = {});
EnvelopeValue evaluate_envelope(const Vec2d& p, const EnvelopeOptions& opts = {});

// Point where the three planes of v, w and v+w meet, which is the corner of
// the piecewise linear region fan belonging to this pair. F there equals the
// defect of the pair exactly.
struct FanVertex {
    Vec2d p = Vec2d::Zero();
    double value = 0.0;
};

FanVertex vertex_for_pair(const UnimodularPair& pair);

struct LocusVertex {
    bool is_origin = false;
    UnimodularPair pair{};  // meaningless when is_origin
    Vec2d p = Vec2d::Zero();
    double value = 0.0;
    int depth = -1;  // -1 for the origin
};

struct CornerLocusGraph {
    std::vector<LocusVertex> vertices;                // origin first, then DFS order
    std::vector<std::array<std::size_t, 2>> edges;    // parent index, child index
};

// Corner tree of F down to the given splitting depth, all four quadrants
// hanging off the origin. With validate set, every vertex is re-evaluated
// through the envelope and every edge midpoint must report exactly the two
// planes shared along that edge; any mismatch throws EdgeValidationError.
CornerLocusGraph corner_locus(int depth, const EnvelopeOptions& opts = {}, bool validate = false);

struct GridSpec {
    int radial = 256;
    int angular = 256;
    int levels = 3;
};

struct Quadrature {
    double value = 0.0;
    double error_estimate = 0.0;          // NaN with a single level
    std::vector<double> level_values;     // raw midpoint sums, coarsest first
};

// Midpoint rule on a polar grid over the unit disc, refined by doubling both
// directions per level, with one step of h^2 extrapolation at the top.
Quadrature integrate_disc(const std::function<double(const Vec2d&)>& fn, const GridSpec& grid = {},
                          int threads = 1);

struct CubeCheckOptions {
    double threshold = 1e-10;           // defect cutoff for the cube sum
    std::uint64_t max_nodes = 200000000;
    GridSpec grid{};
    EnvelopeOptions env{};
    double s3_perturbation = 0.0;  // test hook: offsets the cube sum
    int threads = 1;
};

struct CubeCheck {
    double s3 = 0.0;
    double s3_tail = 0.0;  // upper bound for the mass cut off by the threshold
    double integral = 0.0;
    double integral_error = 0.0;
    double residual = 0.0;  // 4 - 2 * s3 - 3 * integral, zero in the limit
};

CubeCheck cube_identity_check(const CubeCheckOptions& opts = {});

}  // namespace latdef
