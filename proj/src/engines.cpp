#include "fkf/engines.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "fkf/error.hpp"

namespace fkf {

namespace {

constexpr std::uint64_t kLeaf = 64;

// Running totals of one subtree of the fixed reduction tree.
struct Partial {
  double z = 0.0;
  std::vector<std::complex<double>> sums;

  void clear(int outputs) {
    z = 0.0;
    sums.assign(outputs, {0.0, 0.0});
  }
  void add(const Partial& o) {
    z += o.z;
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += o.sums[i];
  }
};

class Worker {
 public:
  Worker(const LatticeDomain& d, const ModelParams& params, int outputs, const VectorFunctional& f, bool loops)
      : ctx_(d), f_(f), outputs_(outputs), loops_(loops), out_(outputs) {
    const double r = params.p / (1.0 - params.p);
    rpow_.resize(d.edge_count() + 1);
    for (int j = 0; j <= d.edge_count(); ++j) rpow_[j] = j == 0 ? 1.0 : std::pow(r, j);
    kpow_.resize(d.vertex_count() + 1);
    for (int k = 0; k <= d.vertex_count(); ++k) kpow_[k] = std::ldexp(1.0, k - d.vertex_count());
    scratch_.resize(64);
  }

  // Pairwise reduction of [lo, hi); the split points depend only on the range.
  void reduce(std::uint64_t lo, std::uint64_t hi, Partial& acc, int depth = 0) {
    if (hi - lo <= kLeaf) {
      acc.clear(outputs_);
      for (std::uint64_t m = lo; m < hi; ++m) visit(m, acc);
      return;
    }
    const std::uint64_t mid = lo + (hi - lo) / 2;
    reduce(lo, mid, acc, depth + 1);
    Partial& right = scratch_[depth];
    reduce(mid, hi, right, depth + 1);
    acc.add(right);
  }

 private:
  void visit(std::uint64_t mask, Partial& acc) {
    const int open = std::popcount(mask);
    if (rpow_[open] == 0.0) return;
    ctx_.load(mask, loops_);
    const double w = rpow_[open] * kpow_[ctx_.primal_clusters()];
    acc.z += w;
    std::fill(out_.begin(), out_.end(), std::complex<double>{});
    f_(ctx_, out_);
    for (int i = 0; i < outputs_; ++i) acc.sums[i] += w * out_[i];
  }

  ConfigContext ctx_;
  const VectorFunctional& f_;
  int outputs_;
  bool loops_;
  std::vector<std::complex<double>> out_;
  std::vector<double> rpow_, kpow_;
  std::vector<Partial> scratch_;
};

// Combines per-shard partials in a balanced tree over shard indices.
Partial combine(std::vector<Partial>& parts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  std::size_t mid = lo + (hi - lo) / 2;
  Partial left = combine(parts, lo, mid);
  left.add(combine(parts, mid, hi));
  return left;
}

}  // namespace

void ConfigContext::load(std::uint64_t mask, bool with_loops) {
  mask_ = mask;
  config_.assign_mask(mask);
  open_ = std::popcount(mask);
  k_ = primal_cluster_count(*domain_, config_, uf_);
  if (with_loops) extract_loops(*domain_, config_, loops_);
}

EnumerationPlan EnumerationPlan::make(const LatticeDomain& d, const EnumerationOptions& opts) {
  if (opts.max_edges < 1 || opts.max_edges > 40) throw InvalidArgument("max_edges must lie in [1, 40]");
  if (d.edge_count() > opts.max_edges)
    throw EnumerationCapExceeded("exact enumeration refused: " + std::to_string(d.edge_count()) +
                                 " edges exceed the cap of " + std::to_string(opts.max_edges));
  if (opts.shards < 1 || !std::has_single_bit(static_cast<unsigned>(opts.shards)))
    throw InvalidArgument("shard count must be a power of two");
  EnumerationPlan plan;
  plan.edge_count = d.edge_count();
  const std::uint64_t total = std::uint64_t{1} << plan.edge_count;
  std::uint64_t shards = static_cast<std::uint64_t>(opts.shards);
  while (shards > 1 && total / shards < kLeaf) shards /= 2;
  plan.shard_count = static_cast<int>(shards);
  const std::uint64_t len = total / shards;
  for (std::uint64_t s = 0; s < shards; ++s) plan.ranges.push_back({s * len, (s + 1) * len});
  return plan;
}

EnumerationResult enumerate_reduce(const LatticeDomain& d, const ModelParams& params, int outputs,
                                   const VectorFunctional& functional, const EnumerationOptions& opts) {
  if (!(params.p >= 0.0 && params.p < 1.0)) throw InvalidArgument("p must lie in [0,1)");
  if (outputs < 0) throw InvalidArgument("negative output count");
  const EnumerationPlan plan = EnumerationPlan::make(d, opts);
  std::vector<Partial> parts(plan.shard_count);
  const int threads = std::max(1, std::min(opts.threads, plan.shard_count));
  if (threads == 1) {
    Worker w(d, params, outputs, functional, opts.needs_loops);
    for (int s = 0; s < plan.shard_count; ++s) w.reduce(plan.ranges[s].first, plan.ranges[s].second, parts[s]);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        Worker w(d, params, outputs, functional, opts.needs_loops);
        for (int s = next++; s < plan.shard_count; s = next++)
          w.reduce(plan.ranges[s].first, plan.ranges[s].second, parts[s]);
      });
    }
    for (auto& th : pool) th.join();
  }
  Partial total = combine(parts, 0, parts.size());
  EnumerationResult res;
  res.z = total.z;
  res.sums = std::move(total.sums);
  res.log_scale = d.vertex_count() * std::log(2.0);
  res.configs = std::uint64_t{1} << plan.edge_count;
  return res;
}

namespace {

struct SpinSum {
  double z = 0.0;
  double s = 0.0;
};

SpinSum reduce_spins(const LatticeDomain& d, const std::vector<double>& boltz, const SpinFunctional& f,
                     std::uint64_t lo, std::uint64_t hi, SpinConfig& scratch) {
  if (hi - lo <= kLeaf) {
    SpinSum acc;
    for (std::uint64_t m = lo; m < hi; ++m) {
      for (int v = 0; v < d.vertex_count(); ++v) scratch.spins[v] = ((m >> v) & 1u) ? -1 : 1;
      const int e = ising_energy(d, scratch);
      const double w = boltz[(e + d.edge_count()) / 2];
      acc.z += w;
      if (w != 0.0) acc.s += w * f(scratch);
    }
    return acc;
  }
  const std::uint64_t mid = lo + (hi - lo) / 2;
  SpinSum a = reduce_spins(d, boltz, f, lo, mid, scratch);
  SpinSum b = reduce_spins(d, boltz, f, mid, hi, scratch);
  return {a.z + b.z, a.s + b.s};
}

}  // namespace

EnumerationResult enumerate_spins(const LatticeDomain& d, const ModelParams& params, const SpinFunctional& functional,
                                  int max_vertices) {
  if (d.vertex_count() > max_vertices)
    throw EnumerationCapExceeded("spin enumeration refused: " + std::to_string(d.vertex_count()) +
                                 " vertices exceed the cap of " + std::to_string(max_vertices));
  // exp(beta (E - |E|)) indexed by (E + |E|) / 2, so the all-aligned state has weight 1.
  std::vector<double> boltz(d.edge_count() + 1);
  for (int j = 0; j <= d.edge_count(); ++j) boltz[j] = std::exp(params.beta * (2.0 * j - 2.0 * d.edge_count()));
  SpinConfig scratch = SpinConfig::all_plus(d);
  const std::uint64_t total = std::uint64_t{1} << d.vertex_count();
  SpinSum s = reduce_spins(d, boltz, functional, 0, total, scratch);
  EnumerationResult res;
  res.z = s.z;
  res.sums = {std::complex<double>(s.s, 0.0)};
  res.log_scale = params.beta * d.edge_count();
  res.configs = total;
  return res;
}

EsChain::EsChain(const LatticeDomain& d, const ModelParams& params, std::uint64_t seed, std::uint64_t chain_id,
                 long burn_in)
    : domain_(&d), params_(params), state_{FkConfig::all_closed(d), SpinConfig::all_plus(d), CounterRng(seed, chain_id), 0, burn_in} {
  if (!(params.p >= 0.0 && params.p < 1.0)) throw InvalidArgument("p must lie in [0,1)");
}

void EsChain::sweep() {
  const LatticeDomain& d = *domain_;
  es_sample_spins_given_fk(d, state_.config, state_.rng, uf_, state_.spins);
  for (int e = 0; e < d.edge_count(); ++e) {
    const bool equal = state_.spins.spins[d.edge(e).a] == state_.spins.spins[d.edge(e).b];
    state_.config.set(e, equal && state_.rng.bernoulli(params_.p));
  }
  ++state_.sweep;
}

void run_chain(const LatticeDomain& d, const ModelParams& params, long n_sweeps, long burn_in, std::uint64_t seed,
               const std::function<void(const FkConfig&)>& visit) {
  if (burn_in < 0 || n_sweeps <= burn_in) throw InvalidArgument("run_chain needs n_sweeps > burn_in >= 0");
  EsChain chain(d, params, seed, 0, burn_in);
  for (long s = 0; s < n_sweeps; ++s) {
    chain.sweep();
    if (s >= burn_in) visit(chain.config());
  }
}

int threads_from_environment(int fallback) {
  const char* env = std::getenv("FKF_THREADS");
  if (!env || !*env) return fallback;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 1024) return fallback;
  return static_cast<int>(v);
}

}  // namespace fkf
