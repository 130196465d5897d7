#pragma once

#include "latdef/lattice.hpp"

namespace latdef {

// asin(s) - s for s in (0, 1], without cancellation for small s. Below 1/2
// the Taylor tail is summed directly; term ratio (2n+1)^2 s^2 / ((2n+2)(2n+3))
// stays under 0.26 there, so a few dozen terms reach long double accuracy.
inline long double asin_minus(long double s) {
    if (s >= 0.5L) return asinl(s) - s;
    const long double s2 = s * s;
    long double term = s * s2 / 6.0L;
    long double sum = term;
    for (int n = 1; n < 64; ++n) {
        const long double np = 2.0L * static_cast<long double>(n);
        term *= s2 * (np + 1.0L) * (np + 1.0L) / ((np + 2.0L) * (np + 3.0L));
        sum += term;
        if (term < 1e-22L * sum) break;
    }
    return sum;
}

// Exact sum of the defect over the whole subtree rooted at the pair, the
// pair itself included: g (1/|v| + 1/|w|). At the quadrant root this is 2.
inline long double subtree_sum_f(const Kern& k) {
    return k.g * (1.0L / k.nv + 1.0L / k.nw);
}

// Exact sum of the squared defect over the subtree, pair included: twice the
// area pinched between the two supporting lines and the circle arc. With
// s = sin of the angle between v and w (= 1 / (|v||w|), determinant 1) that
// area splits into a straight triangle minus a circular segment, giving
// g^2 s - (asin s - s). At the quadrant root: 2 - pi/2.
inline long double subtree_sum_f2(const Kern& k) {
    long double s = 1.0L / (k.nv * k.nw);
    if (s > 1.0L) s = 1.0L;
    return k.g * k.g * s - asin_minus(s);
}

// Supporting lines v.x = |v| and w.x = |w| touch the unit circle at
// touch_v, touch_w and meet at the corner, which sits at distance g from
// both tangency points. Anchoring the corner at a tangency point keeps its
// absolute error near machine epsilon even for thin corners far out along
// the axes, where solving the 2x2 line system would lose |v||w| epsilon.
struct CornerState {
    Vec2ld touch_v, touch_w;
    Vec2ld corner;
    long double offset;  // g, the common tangent length
};

inline CornerState corner_state(const UnimodularPair& p, const Kern& k) {
    const Vec2ld v(static_cast<long double>(p.v.x()), static_cast<long double>(p.v.y()));
    const Vec2ld w(static_cast<long double>(p.w.x()), static_cast<long double>(p.w.y()));
    CornerState c;
    c.touch_v = v / k.nv;
    c.touch_w = w / k.nw;
    c.offset = k.g;
    c.corner = c.touch_v + (k.g / k.nv) * rot90<long double>(v);
    return c;
}

inline CornerState corner_state(const UnimodularPair& p) { return corner_state(p, kernel(p)); }

// Triangle clipped off the corner of (v, w) by the supporting line of the
// mediant. Its legs run along the two original lines, from the old corner to
// the corners of (v, v+w) and (v+w, w). Both leg lengths reduce to ratios of
// positive products, and the area is half their cross product, so the result
// stays fully accurate even when it underflows toward the defect scale
// squared.
struct CroppedTriangle {
    Vec2ld apex;   // corner of (v, w)
    Vec2ld cut_v;  // corner of (v, v+w), on the v line
    Vec2ld cut_w;  // corner of (v+w, w), on the w line
    long double leg_v, leg_w;
    long double area;
};

inline CroppedTriangle cropped_triangle(const UnimodularPair& p) {
    const Kern k = kernel(p);
    const Vec2ld v(static_cast<long double>(p.v.x()), static_cast<long double>(p.v.y()));
    const Vec2ld w(static_cast<long double>(p.w.x()), static_cast<long double>(p.w.y()));
    const long double Dvw = k.nv * k.nw + k.dot;
    const long double Dvm = k.nv * k.nm + (k.nv * k.nv + k.dot);  // v.(v+w)
    const long double Dmw = k.nm * k.nw + (k.nw * k.nw + k.dot);  // (v+w).w
    // |v+w| - |w| = (|v|^2 + 2 v.w) / (|v+w| + |w|), and symmetrically;
    // this keeps the near-cancelling norm differences in product form.
    const long double rise_v = (k.nv * k.nv + 2.0L * k.dot) / (k.nm + k.nw);
    const long double rise_w = (k.nw * k.nw + 2.0L * k.dot) / (k.nm + k.nv);
    CroppedTriangle t;
    t.leg_v = k.nv * (rise_v + k.nv) / (Dvw * Dvm);
    t.leg_w = k.nw * (rise_w + k.nw) / (Dvw * Dmw);
    const CornerState c = corner_state(p, k);
    t.apex = c.corner;
    const Vec2ld ev = (-t.leg_v / k.nv) * rot90<long double>(v);
    const Vec2ld ew = (t.leg_w / k.nw) * rot90<long double>(w);
    t.cut_v = t.apex + ev;
    t.cut_w = t.apex + ew;
    t.area = 0.5L * fabsl(cross2<long double>(ev, ew));
    return t;
}

}  // namespace latdef
