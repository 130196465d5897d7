#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "latdef/lattice.hpp"

namespace latdef {

struct PolygonMetrics {
    double area = 0.0;
    double perimeter = 0.0;
    double lattice_perimeter = 0.0;
};

struct UnimodularReport {
    bool ok = true;
    std::size_t first_violation = 0;  // index of the left normal of the bad step
    std::string detail;
};

// Verifies that consecutive normals (cyclically when requested) form
// determinant +1 steps, which is what makes the fan unimodular and every
// normal automatically primitive.
UnimodularReport check_unimodular(std::span<const Vec2i> normals, bool cyclic = true);

// Circumscribed approximant of the unit disc. Level n supports the disc on
// the 4 * 2^n tangent lines whose primitive normals are the axes together
// with all mediants of the first n splitting rounds, repeated in each
// quadrant. Vertices are the tangent intersections of angular neighbours.
class Polygon {
  public:
    static constexpr int max_level = 24;
    static constexpr int max_list_level = 20;  // materialized lists only

    explicit Polygon(int level);

    int level() const noexcept { return level_; }
    std::int64_t side_count() const noexcept { return std::int64_t(4) << level_; }

    PolygonMetrics metrics() const;

    // Counterclockwise, starting with the vertex just above the positive x
    // axis. One full turn; no repeated closing vertex.
    void vertices(const std::function<void(const Vec2d&)>& sink) const;
    std::vector<Vec2d> vertex_list() const;

    // Primitive outward normals in the same angular order, (1, 0) first.
    void normals(const std::function<void(const Vec2i&)>& sink) const;
    std::vector<Vec2i> normal_list() const;

    bool check_fan() const;

  private:
    int level_;
};

}  // namespace latdef
