#pragma once

#include "latdef/corner.hpp"
#include "latdef/emit.hpp"
#include "latdef/errors.hpp"
#include "latdef/lattice.hpp"
#include "latdef/polygon.hpp"
#include "latdef/reference.hpp"
#include "latdef/series.hpp"
#include "latdef/summation.hpp"
#include "latdef/tropical.hpp"
