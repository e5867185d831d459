#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fkf/configuration.hpp"
#include "fkf/engines.hpp"
#include "fkf/lattice.hpp"
#include "fkf/measures.hpp"

namespace fkf {

// Ordered list of distinct insertion corners; the order carries the sign.
struct InsertionSet {
  std::vector<int> corners;

  static InsertionSet make(const LatticeDomain& d, std::vector<int> corners);
  static InsertionSet from_specs(const LatticeDomain& d, std::span<const CornerSpec> specs);
  std::size_t size() const { return corners.size(); }
  // No two corners share a primal or a dual vertex.
  bool spaced(const LatticeDomain& d) const;
};

bool corners_spaced(const LatticeDomain& d, std::span<const int> corners);

// Pairs of 0-based insertion indices, first < second.
struct Matching {
  std::vector<std::pair<int, int>> pairs;
  int sign = 1;
};

// Parity of the permutation (i1, t1, i2, t2, ...).
int matching_sign(std::span<const std::pair<int, int>> pairs);

// nullopt when some loop holds an odd number of insertions.
std::optional<Matching> sequential_matching(const LoopSet& loops, std::span<const int> insertions);

// 0 if not admissible, otherwise sign * prod phi(arc from the lower to the higher index).
int config_contribution(const LatticeDomain& d, const LoopSet& loops, std::span<const int> insertions);
int matching_contribution(const LatticeDomain& d, const LoopSet& loops, std::span<const int> insertions,
                          const Matching& m);

enum class Mode { Exact, MonteCarlo };

struct ObservableValue {
  std::complex<double> value;
  Mode mode = Mode::Exact;
  double stderr_value = 0.0;
  std::int64_t n_samples = 0;
  bool null_by_parity = false;
};

ObservableValue fermion_exact(const LatticeDomain& d, const ModelParams& params, std::span<const int> insertions,
                              const EnumerationOptions& opts = {});
// Many insertion sets from one pass over the configurations.
std::vector<double> fermion_exact_batch(const LatticeDomain& d, const ModelParams& params,
                                        std::span<const std::vector<int>> sets, const EnumerationOptions& opts = {});
std::complex<double> smirnov_complexified(const LatticeDomain& d, const ModelParams& params, int c1, int c2,
                                          const EnumerationOptions& opts = {});

// (psi(start) psi(end))_line for one spin configuration.
double ising_pair_value(const LatticeDomain& d, const ModelParams& params, const SpinConfig& spins,
                        const DefectLine& line);
ObservableValue ising_fermion_exact(const LatticeDomain& d, const ModelParams& params, std::span<const int> insertions,
                                    std::span<const DefectLine> lines, int max_vertices = kDefaultMaxEdges);
ObservableValue ising_fermion_exact(const LatticeDomain& d, const ModelParams& params, std::span<const int> insertions);

struct EquivalenceReport {
  double fk = 0.0;
  double ising = 0.0;
  double difference = 0.0;
  std::int64_t bookkeeping_checked = 0;
  bool bookkeeping_ok = true;
};

EquivalenceReport check_equivalence(const LatticeDomain& d, const ModelParams& params, std::span<const int> insertions,
                                    const EnumerationOptions& opts = {});

ObservableValue fermion_mc(const LatticeDomain& d, const ModelParams& params, std::span<const int> insertions,
                           long n_sweeps, std::uint64_t seed, int batches = 32);

// Two defect lines with the same corner ends, compared through their symmetric difference.
struct LineComparison {
  int w_eighths = 0;
  int w_tilde_eighths = 0;
  int crossings = 0;         // transversal self-intersections of the closed dual curve
  int rotation_eighths = 0;  // total turning of the closed dual curve
  // the two corner rays leave the closed curve on different sides (left vs right)
  bool ends_split = false;
  bool relation_holds = false;
};

LineComparison compare_defect_lines(const LatticeDomain& d, const DefectLine& a, const DefectLine& b);

struct ExplorationBranch {
  int loop = 0;
  int start = 0;   // corner where the loop is cut open
  int parent = -1;
  std::vector<int> hits;  // insertion indices in walk order
};

struct ExplorationTree {
  std::vector<ExplorationBranch> branches;
  int winding = 1;
};

// Depth-first exploration of every loop from a boundary root corner.
ExplorationTree explore(const LatticeDomain& d, const LoopSet& loops, std::span<const int> insertions, int root);
int exploration_tree_winding(const LatticeDomain& d, const LoopSet& loops, std::span<const int> insertions, int root);

}  // namespace fkf
