#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "fkf/configuration.hpp"
#include "fkf/measures.hpp"
#include "fkf/rng.hpp"

namespace fkf {

inline constexpr int kDefaultMaxEdges = 26;

struct EnumerationOptions {
  int shards = 1;   // power of two
  int threads = 1;
  int max_edges = kDefaultMaxEdges;
  bool needs_loops = true;
};

struct EnumerationPlan {
  int edge_count = 0;
  int shard_count = 1;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;  // [begin, end) mask ranges

  static EnumerationPlan make(const LatticeDomain& d, const EnumerationOptions& opts);
};

// What a per-configuration functional sees. Cluster count is always ready;
// loops only when EnumerationOptions::needs_loops is set.
class ConfigContext {
 public:
  explicit ConfigContext(const LatticeDomain& d) : domain_(&d), config_(d.edge_count()) {}

  const LatticeDomain& domain() const { return *domain_; }
  const FkConfig& config() const { return config_; }
  std::uint64_t mask() const { return mask_; }
  int open_count() const { return open_; }
  int primal_clusters() const { return k_; }
  const LoopSet& loops() const { return loops_; }

  void load(std::uint64_t mask, bool with_loops);

 private:
  const LatticeDomain* domain_;
  FkConfig config_;
  std::uint64_t mask_ = 0;
  int open_ = 0;
  int k_ = 0;
  UnionFind uf_;
  LoopSet loops_;
};

// Z and the weighted sums are scaled by exp(-log_scale); ratios are unaffected.
struct EnumerationResult {
  double z = 0.0;
  std::vector<std::complex<double>> sums;
  double log_scale = 0.0;
  std::uint64_t configs = 0;

  std::complex<double> mean(std::size_t i = 0) const { return sums.at(i) / z; }
};

using VectorFunctional = std::function<void(const ConfigContext&, std::span<std::complex<double>>)>;

// Exact sum over all 2^|E| configurations of rho_p(omega) * functional(omega).
// Bit-identical for every power-of-two shard count and every thread count.
EnumerationResult enumerate_reduce(const LatticeDomain& d, const ModelParams& params, int outputs,
                                   const VectorFunctional& functional, const EnumerationOptions& opts = {});

template <class F>
EnumerationResult enumerate_reduce(const LatticeDomain& d, const ModelParams& params, F&& functional,
                                   const EnumerationOptions& opts = {}) {
  return enumerate_reduce(
      d, params, 1,
      [&](const ConfigContext& ctx, std::span<std::complex<double>> out) { out[0] = functional(ctx); }, opts);
}

// Exact sum over all 2^|V| spin configurations of exp(beta E) * functional(sigma).
using SpinFunctional = std::function<double(const SpinConfig&)>;
EnumerationResult enumerate_spins(const LatticeDomain& d, const ModelParams& params, const SpinFunctional& functional,
                                  int max_vertices = kDefaultMaxEdges);

// Edwards-Sokal chain: one sweep resamples cluster spins, then all edges.
struct ChainState {
  FkConfig config;
  SpinConfig spins;
  CounterRng rng;
  long sweep = 0;
  long burn_in = 0;
};

class EsChain {
 public:
  EsChain(const LatticeDomain& d, const ModelParams& params, std::uint64_t seed, std::uint64_t chain_id = 0,
          long burn_in = 0);

  void sweep();
  const ChainState& state() const { return state_; }
  const FkConfig& config() const { return state_.config; }

 private:
  const LatticeDomain* domain_;
  ModelParams params_;
  ChainState state_;
  UnionFind uf_;
};

// Runs burn_in sweeps, then calls visit on each of the remaining n_sweeps - burn_in configs.
void run_chain(const LatticeDomain& d, const ModelParams& params, long n_sweeps, long burn_in, std::uint64_t seed,
               const std::function<void(const FkConfig&)>& visit);

int threads_from_environment(int fallback = 1);

}  // namespace fkf
