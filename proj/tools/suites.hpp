#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fkf/engines.hpp"
#include "fkf/lattice.hpp"
#include "fkf/measures.hpp"
#include "report.hpp"

namespace fkf::cli {

struct SuiteContext {
  const LatticeDomain* domain = nullptr;
  ModelParams params = ModelParams::critical();
  std::vector<int> corners;  // empty: suite picks defaults
  EnumerationOptions enumeration{};
  std::uint64_t seed = 1;
  long sweeps = 1000000;
};

const std::vector<std::string>& suite_names();
bool is_suite(std::string_view name);
void run_suite(std::string_view name, const SuiteContext& ctx, RunReport& report);

// Greedy pick, in corner-id order, of corners that share no primal or dual vertex and
// whose mid-edges touch no other pick.
std::vector<int> greedy_spaced_corners(const LatticeDomain& d, int count, bool interior_only);
// Distinct random quadruples of pairwise spaced corners.
std::vector<std::vector<int>> spaced_quadruples(const LatticeDomain& d, int count, std::uint64_t seed);

}  // namespace fkf::cli
