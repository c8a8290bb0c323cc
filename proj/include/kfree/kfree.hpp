#pragma once

// Umbrella header.

#include "kfree/admissibility.hpp"
#include "kfree/analytics.hpp"
#include "kfree/arithmetic.hpp"
#include "kfree/checked.hpp"
#include "kfree/errors.hpp"
#include "kfree/integer.hpp"
#include "kfree/io.hpp"
#include "kfree/lattice.hpp"
#include "kfree/point_set.hpp"
#include "kfree/ring.hpp"
#include "kfree/svg.hpp"
#include "kfree/symmetry.hpp"
