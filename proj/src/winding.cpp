#include "fkf/winding.hpp"

#include "fkf/error.hpp"

namespace fkf {

QuarterTurns path_winding(const LoopSet& loops, int c1, int c2) {
  if (!loops.connected(c1, c2)) throw InvalidArgument("path_winding: corners are not on the same loop");
  return {-loops.arc_eighths(c1, c2) / 2};
}

int phase_from_eighths(int a1, int a2, int arc_eighths) {
  const int m = a1 - a2 + arc_eighths;
  if (detail::mod(m, 8) != 0) throw InvariantViolation("winding phase exponent is not a multiple of 8");
  return detail::mod(m / 8, 2) == 0 ? 1 : -1;
}

int winding_phase(const LatticeDomain& d, const LoopSet& loops, int c1, int c2) {
  const QuarterTurns w = path_winding(loops, c1, c2);
  return phase_from_eighths(d.corner(c1).orientation_eighth, d.corner(c2).orientation_eighth, -2 * w.q);
}

}  // namespace fkf
