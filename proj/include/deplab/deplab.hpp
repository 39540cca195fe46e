#pragma once

// Umbrella header: exact scalars, graphs, explicit graph distributions,
// independence checking, locally-determined coloring models, connectivity
// searches, color reduction, thresholds, and JSON round-tripping.

#include "deplab/bigfloat.hpp"
#include "deplab/coloring_model.hpp"
#include "deplab/config.hpp"
#include "deplab/connect.hpp"
#include "deplab/constructions.hpp"
#include "deplab/distribution.hpp"
#include "deplab/errors.hpp"
#include "deplab/exact.hpp"
#include "deplab/graph.hpp"
#include "deplab/independence.hpp"
#include "deplab/json_io.hpp"
#include "deplab/poly.hpp"
#include "deplab/quadext.hpp"
#include "deplab/reduce.hpp"
#include "deplab/rng.hpp"
#include "deplab/scalar.hpp"
#include "deplab/squarefree.hpp"
#include "deplab/thresholds.hpp"
#include "deplab/trig.hpp"

namespace deplab {

// Library version, also reported by the command-line tool.
inline const char* version() { return "1.0.0"; }

}  // namespace deplab
