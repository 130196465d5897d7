#pragma once

#include "latdef/lattice.hpp"

namespace latdef {

// Textbook |v| + |w| - |v + w| evaluated in 50-digit arithmetic. The naive
// form cancels catastrophically in hardware floats once entries reach 1e6,
// so this is the slow yardstick the production kernel is measured against.
double defect_naive(const UnimodularPair& p);

// Same yardstick for the extended defect on arbitrary determinant +1 pairs.
double extended_defect_naive(const Vec2i& v, const Vec2i& w);

}  // namespace latdef
