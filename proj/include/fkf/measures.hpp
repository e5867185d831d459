#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fkf/configuration.hpp"
#include "fkf/lattice.hpp"
#include "fkf/rng.hpp"

namespace fkf {

// One point of the FK-Ising family in its three coordinates p, beta and t.
struct ModelParams {
  double p = 0.0;
  double beta = 0.0;
  double t = 0.0;

  static ModelParams from_p(double p);
  static ModelParams from_beta(double beta);
  static ModelParams from_t(double t);
  static ModelParams critical();

  bool is_critical(double tol = 1e-12) const;
};

inline constexpr double kSqrt2 = 1.41421356237309504880;
double critical_p();     // 2 - sqrt(2)
double critical_beta();  // log(1 + sqrt(2)) / 2

struct SpinConfig {
  std::vector<int> spins;  // +1 / -1 per primal vertex

  static SpinConfig all_plus(const LatticeDomain& d) { return {std::vector<int>(d.vertex_count(), 1)}; }
  // Bit v set means spin v is -1.
  static SpinConfig from_mask(const LatticeDomain& d, std::uint64_t mask);
  bool operator==(const SpinConfig&) const = default;
};

// A simple dual path from w(start) to w(end); the corner segments are implicit.
struct DefectLine {
  int start = 0;
  int end = 0;
  std::vector<int> dual_path;      // dual vertex ids, w(start) first, w(end) last
  std::vector<int> crossed_edges;  // primal edges crossed by the path, in path order
};

double fk_weight(const LatticeDomain& d, const FkConfig& config, const ModelParams& params);
double loop_weight(const LatticeDomain& d, const FkConfig& config, const ModelParams& params);
int ising_energy(const LatticeDomain& d, const SpinConfig& spins);  // sum over edges of s_x s_y
double ising_weight(const LatticeDomain& d, const SpinConfig& spins, const ModelParams& params);
int disorder_energy(const LatticeDomain& d, const SpinConfig& spins, const DefectLine& line);

// Validates the path and derives crossed edges.
DefectLine make_defect_line(const LatticeDomain& d, int start, int end, std::vector<int> dual_path);

enum class RouteOrder { HorizontalFirst, VerticalFirst };
DefectLine route_defect_line(const LatticeDomain& d, int c1, int c2, RouteOrder order = RouteOrder::HorizontalFirst);
// One line per consecutive pair (c[0],c[1]), (c[2],c[3]), ...; pairwise vertex-disjoint.
std::vector<DefectLine> route_defect_lines(const LatticeDomain& d, std::span<const int> corners);
bool lines_disjoint(std::span<const DefectLine> lines);

// Total counterclockwise turning of corner segment, dual path and corner segment, in eighths.
int line_turning_eighths(const LatticeDomain& d, const DefectLine& line);
// The real sign i sqrt(o2/o1) e^{-i W/2} of the pair prefactor.
int defect_pair_sign(const LatticeDomain& d, const DefectLine& line);

// -2 E_line + E = |E| - 2 |line (+) eta(spins)|, with eta the disagreeing edges.
bool low_temperature_identity_holds(const LatticeDomain& d, const SpinConfig& spins, const DefectLine& line);

// Unnormalized Edwards-Sokal weight with every crossed edge made antiferromagnetic.
double es_joint_weight(const LatticeDomain& d, const SpinConfig& spins, const FkConfig& config,
                       const ModelParams& params, std::span<const DefectLine> lines = {});

SpinConfig es_sample_spins_given_fk(const LatticeDomain& d, const FkConfig& config, CounterRng& rng);
void es_sample_spins_given_fk(const LatticeDomain& d, const FkConfig& config, CounterRng& rng, UnionFind& uf,
                              SpinConfig& out);
FkConfig es_sample_fk_given_spins(const LatticeDomain& d, const SpinConfig& spins, const ModelParams& params,
                                  CounterRng& rng);
// nullopt when some cluster would need a spin flip along an odd cycle.
std::optional<SpinConfig> es_sample_spins_given_fk_with_defect(const LatticeDomain& d, const FkConfig& config,
                                                               std::span<const DefectLine> lines, CounterRng& rng);

}  // namespace fkf
