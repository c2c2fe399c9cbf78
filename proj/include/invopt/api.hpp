#pragma once

#include "invopt/instance.hpp"
#include "invopt/qp.hpp"
#include "invopt/result.hpp"

namespace invopt {

// Dispatch a validated instance to its inverse solver. `sense` currently
// matters for arborescence only (st-path, flows and sp-trees are inherently
// min; the remaining kinds are max).
InverseResult solve_instance(const Instance& inst, OptSense sense = OptSense::Max,
                             const QpSettings& qs = {});

}  // namespace invopt
