#pragma once

// Phase-space nonclassicality toolkit: quasi-probability fields on grids,
// Gaussian order-lowering transforms, the xi criterion family and the
// curvature-based quantumness measure built on it.

#include "qxi/errors.hpp"      // IWYU pragma: export
#include "qxi/grid.hpp"        // IWYU pragma: export
#include "qxi/nonclassicality.hpp"  // IWYU pragma: export
#include "qxi/psgrid_io.hpp"   // IWYU pragma: export
#include "qxi/states.hpp"      // IWYU pragma: export
#include "qxi/sweep.hpp"       // IWYU pragma: export
#include "qxi/transforms.hpp"  // IWYU pragma: export
#include "qxi/version.hpp"     // IWYU pragma: export
