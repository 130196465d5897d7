#include "latdef/reference.hpp"

#include <boost/multiprecision/mpfr.hpp>

namespace latdef {

namespace {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<50>>;

Real norm(std::int64_t x, std::int64_t y) {
    const Real rx(x), ry(y);
    return sqrt(rx * rx + ry * ry);
}

}  // namespace

double defect_naive(const UnimodularPair& p) { return extended_defect_naive(p.v, p.w); }

double extended_defect_naive(const Vec2i& v, const Vec2i& w) {
    if (det_wide(v, w) != 1)
        throw NotPrimitiveError("extended defect requires determinant +1");
    if (same_closed_quadrant(v, w)) {
        const Real d =
            norm(v.x(), v.y()) + norm(w.x(), w.y()) - norm(v.x() + w.x(), v.y() + w.y());
        return d.convert_to<double>();
    }
    const Real d = norm(v.x(), v.y()) + norm(w.x(), w.y()) - norm(v.x() - w.x(), v.y() - w.y());
    return d.convert_to<double>();
}

}  // namespace latdef
