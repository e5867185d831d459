#pragma once

#include "fkf/configuration.hpp"
#include "fkf/phase.hpp"

namespace fkf {

// Winding of the loop arc from c1 forward to c2: q = n_right - n_left.
QuarterTurns path_winding(const LoopSet& loops, int c1, int c2);

// phi = (-1)^{m/8} with m = a1 - a2 - 2q; throws InvariantViolation if m is not a multiple of 8.
int winding_phase(const LatticeDomain& d, const LoopSet& loops, int c1, int c2);

// The same sign from raw data: orientations and the eighth-turns of the arc.
int phase_from_eighths(int a1, int a2, int arc_eighths);

}  // namespace fkf
