#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fkf/configuration.hpp"
#include "fkf/engines.hpp"
#include "fkf/error.hpp"
#include "fkf/lattice.hpp"
#include "fkf/measures.hpp"
#include "fkf/observables.hpp"
#include "fkf/winding.hpp"
#include "report.hpp"
#include "suites.hpp"

namespace fkf::cli {

namespace {

using nlohmann::json;

struct Common {
  int width = 3;
  int height = 3;
  std::optional<double> p;
  std::optional<double> beta;
  std::optional<double> t;
  bool critical = false;
  std::uint64_t seed = 1;
  bool json_out = false;
  bool csv_out = false;
  int shards = 1;
  int threads = 0;
  int max_edges = kDefaultMaxEdges;

  ModelParams params() const {
    if (p) return ModelParams::from_p(*p);
    if (beta) return ModelParams::from_beta(*beta);
    if (t) return ModelParams::from_t(*t);
    return ModelParams::critical();
  }

  EnumerationOptions enumeration() const {
    EnumerationOptions o;
    o.shards = shards;
    o.threads = threads > 0 ? threads : threads_from_environment(1);
    o.max_edges = max_edges;
    return o;
  }
};

void add_domain(CLI::App* app, Common& c) {
  app->add_option("-w,--width", c.width, "domain width in primal vertices")->check(CLI::PositiveNumber);
  app->add_option("-h,--height", c.height, "domain height in primal vertices")->check(CLI::PositiveNumber);
}

void add_params(CLI::App* app, Common& c) {
  auto* p = app->add_option("--p", c.p, "FK edge probability");
  auto* b = app->add_option("--beta", c.beta, "inverse temperature");
  auto* t = app->add_option("--t", c.t, "t = tanh(beta)");
  auto* k = app->add_flag("--critical", c.critical, "use the critical point (default)");
  p->excludes(b, t, k);
  b->excludes(t, k);
  t->excludes(k);
}

void add_engine(CLI::App* app, Common& c) {
  app->add_option("--shards", c.shards, "power-of-two shard count for exact enumeration");
  app->add_option("--threads", c.threads, "worker threads (default FKF_THREADS or 1)");
  app->add_option("--max-edges", c.max_edges, "refuse exact enumeration above this many edges");
}

json params_json(const ModelParams& m) { return {{"p", m.p}, {"beta", m.beta}, {"t", m.t}}; }

json domain_summary(const LatticeDomain& d) { return {{"width", d.width()}, {"height", d.height()}}; }

std::vector<int> parse_corners(const LatticeDomain& d, const std::string& s) {
  std::vector<int> out;
  for (const auto& spec : parse_corner_list(s)) out.push_back(d.corner_by_spec(spec));
  return out;
}

void emit_report(const RunReport& rep, const Common& c, std::ostream& out) {
  if (c.json_out) out << rep.to_json().dump(2) << '\n';
  else if (c.csv_out) out << rep.to_csv();
  else out << rep.to_text();
}

std::string mode_name(Mode m) { return m == Mode::Exact ? "exact" : "mc"; }

int cmd_domain(const Common& c, bool dump, std::ostream& out) {
  LatticeDomain d(c.width, c.height);
  if (dump) {
    out << domain_json(d, true) << '\n';
    return kExitPass;
  }
  out << "vertices " << d.vertex_count() << "\nedges " << d.edge_count() << "\nduals " << d.dual_count()
      << "\ncorners " << d.corner_count() << "\nmid_edges " << d.mid_edge_count() << '\n';
  return kExitPass;
}

int cmd_loops(const Common& c, const std::string& config, std::ostream& out) {
  LatticeDomain d(c.width, c.height);
  const LoopSet loops = extract_loops(d, FkConfig::from_hex(d, config));
  if (c.json_out) {
    json j;
    j["loops"] = loops.as_cycles();
    json map = json::object();
    for (int k = 0; k < d.corner_count(); ++k) map[std::to_string(k)] = {loops.loop_of(k), loops.position_of(k)};
    j["corner_to_loop"] = map;
    out << j.dump(2) << '\n';
    return kExitPass;
  }
  for (int l = 0; l < loops.loop_count(); ++l) {
    out << "loop " << l << ':';
    for (int k : loops.loop(l)) out << ' ' << k;
    out << '\n';
  }
  return kExitPass;
}

int cmd_winding(const Common& c, const std::string& config, const std::string& from, const std::string& to,
                std::ostream& out) {
  LatticeDomain d(c.width, c.height);
  const LoopSet loops = extract_loops(d, FkConfig::from_hex(d, config));
  const auto s1 = parse_corner_spec(from), s2 = parse_corner_spec(to);
  if (!s1 || !s2) throw InvalidArgument("corner spec must look like \"x,y,Q\"");
  const int c1 = d.corner_by_spec(*s1), c2 = d.corner_by_spec(*s2);
  const int q = path_winding(loops, c1, c2).q;
  const int phi = winding_phase(d, loops, c1, c2);
  if (c.json_out) out << json{{"q", q}, {"phi", phi}}.dump() << '\n';
  else out << "q " << q << "\nphi " << phi << '\n';
  return kExitPass;
}

struct FermionArgs {
  std::string corners;
  bool exact = false;
  bool mc = false;
  long sweeps = 100000;
  int batches = 32;
  bool allow_odd = false;
};

ObservableValue compute_fermion(const LatticeDomain& d, const Common& c, const std::vector<int>& ins, bool mc,
                                long sweeps, int batches, std::ostream& err) {
  if (mc) {
    err << "fkf: running " << sweeps << " sweeps\n";
    return fermion_mc(d, c.params(), ins, sweeps, c.seed, batches);
  }
  err << "fkf: enumerating 2^" << d.edge_count() << " configurations\n";
  return fermion_exact(d, c.params(), ins, c.enumeration());
}

int cmd_fermion(const Common& c, const FermionArgs& a, std::ostream& out, std::ostream& err) {
  LatticeDomain d(c.width, c.height);
  const auto ins = parse_corners(d, a.corners);
  if (ins.size() % 2 && !a.allow_odd) throw InvalidArgument("odd number of insertions; pass --allow-odd");
  const ObservableValue v = compute_fermion(d, c, ins, a.mc, a.sweeps, a.batches, err);
  if (c.json_out) {
    json j{{"value_re", v.value.real()},
           {"value_im", v.value.imag()},
           {"stderr", v.stderr_value},
           {"n_samples", v.n_samples},
           {"mode", mode_name(v.mode)}};
    out << j.dump() << '\n';
  } else {
    out << "value " << format_double(v.value.real()) << " " << format_double(v.value.imag()) << "i\n"
        << "stderr " << format_double(v.stderr_value) << "\nn_samples " << v.n_samples << "\nmode "
        << mode_name(v.mode) << '\n';
    if (v.null_by_parity) out << "note odd insertion count: zero by parity\n";
  }
  return kExitPass;
}

int cmd_verify(const Common& c, const std::string& suite, const std::string& corners, long sweeps,
               const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (!is_suite(suite)) throw InvalidArgument("unknown suite '" + suite + "'");
  LatticeDomain d(c.width, c.height);
  SuiteContext ctx;
  ctx.domain = &d;
  ctx.params = c.params();
  if (!corners.empty()) ctx.corners = parse_corners(d, corners);
  ctx.enumeration = c.enumeration();
  ctx.seed = c.seed;
  ctx.sweeps = sweeps;
  RunReport rep;
  rep.command = args;
  rep.command.insert(rep.command.begin(), "fkf");
  rep.domain = domain_summary(d);
  rep.params = params_json(ctx.params);
  rep.seed = c.seed;
  err << "fkf: suite " << suite << " on " << c.width << "x" << c.height << '\n';
  const auto t0 = std::chrono::steady_clock::now();
  run_suite(suite, ctx, rep);
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit_report(rep, c, out);
  return rep.pass() ? kExitPass : kExitCheckFailed;
}

struct TableArgs {
  std::string sweep = "p";
  std::optional<double> from;
  std::optional<double> to;
  int points = 11;
  std::string corners;
  bool mc = false;
  long sweeps = 100000;
};

int cmd_table(const Common& c, const TableArgs& a, std::ostream& out, std::ostream& err) {
  LatticeDomain d(c.width, c.height);
  std::vector<TableRow> rows;
  auto eval = [&](const Common& cc, const std::vector<int>& ins) {
    return compute_fermion(d, cc, ins, a.mc, a.sweeps, 32, err);
  };
  if (a.sweep == "p") {
    std::vector<int> ins = a.corners.empty() ? std::vector<int>{d.corner_by_spec(0, 0, Quadrant::NE),
                                                                d.corner_by_spec(d.width() - 1, d.height() - 1,
                                                                                 Quadrant::SW)}
                                             : parse_corners(d, a.corners);
    const double lo = a.from.value_or(0.05), hi = a.to.value_or(0.95);
    if (a.points <= 0 || lo > hi) throw InvalidArgument("empty sweep");
    for (int i = 0; i < a.points; ++i) {
      const double p = a.points == 1 ? lo : lo + (hi - lo) * i / (a.points - 1);
      Common cc = c;
      cc.p = p;
      cc.beta.reset();
      cc.t.reset();
      const auto v = eval(cc, ins);
      rows.push_back({p, v.value.real(), v.value.imag(), v.stderr_value});
    }
  } else if (a.sweep == "separation") {
    const int y = d.height() / 2;
    const int lo = static_cast<int>(std::ceil(a.from.value_or(1.0)));
    const int hi = static_cast<int>(std::floor(a.to.value_or(d.width() - 1.0)));
    for (int s = std::max(lo, 1); s <= std::min(hi, d.width() - 1); ++s) {
      const std::vector<int> ins{d.corner_by_spec(0, y, Quadrant::NE), d.corner_by_spec(s, y, Quadrant::NE)};
      const auto v = eval(c, ins);
      rows.push_back({static_cast<double>(s), v.value.real(), v.value.imag(), v.stderr_value});
    }
    if (rows.empty()) throw InvalidArgument("empty sweep");
  } else {
    throw InvalidArgument("--sweep must be p or separation");
  }
  if (c.json_out) out << table_to_json(rows).dump(2) << '\n';
  else out << table_to_csv(rows);
  return kExitPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"FK-Ising fermionic observables", "fkf"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  Common c;
  auto* domain = app.add_subcommand("domain", "describe a domain");
  bool dump = false;
  add_domain(domain, c);
  domain->add_flag("--dump", dump, "JSON dump with adjacency");

  std::string config;
  auto* loops = app.add_subcommand("loops", "list the loops of a configuration");
  add_domain(loops, c);
  loops->add_option("--config", config, "hex edge mask")->required();
  loops->add_flag("--json", c.json_out);

  std::string from, to;
  auto* winding = app.add_subcommand("winding", "winding and phase between two co-looped corners");
  add_domain(winding, c);
  winding->add_option("--config", config, "hex edge mask")->required();
  winding->add_option("--from", from, "corner \"x,y,Q\"")->required();
  winding->add_option("--to", to, "corner \"x,y,Q\"")->required();
  winding->add_flag("--json", c.json_out);

  FermionArgs fa;
  auto* fermion = app.add_subcommand("fermion", "fermionic observable of an insertion set");
  add_domain(fermion, c);
  add_params(fermion, c);
  add_engine(fermion, c);
  fermion->add_option("--corners", fa.corners, "\"x,y,Q;x,y,Q;...\"")->required();
  auto* ex = fermion->add_flag("--exact", fa.exact, "exact enumeration (default)");
  auto* mc = fermion->add_flag("--mc", fa.mc, "Monte Carlo estimate");
  ex->excludes(mc);
  fermion->add_option("--sweeps", fa.sweeps, "Monte Carlo sweeps")->check(CLI::PositiveNumber);
  fermion->add_option("--batches", fa.batches, "batch count for the error estimate");
  fermion->add_option("--seed", c.seed);
  fermion->add_flag("--allow-odd", fa.allow_odd, "accept an odd insertion count");
  fermion->add_flag("--json", c.json_out);

  std::string suite, vcorners;
  long vsweeps = 1000000;
  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  verify->add_option("suite", suite, "suite name")->required();
  add_domain(verify, c);
  add_params(verify, c);
  add_engine(verify, c);
  verify->add_option("--corners", vcorners, "insertion set used by the suite");
  verify->add_option("--sweeps", vsweeps, "chain sweeps for the stationarity check");
  verify->add_option("--seed", c.seed);
  auto* vj = verify->add_flag("--json", c.json_out);
  auto* vc = verify->add_flag("--csv", c.csv_out);
  vj->excludes(vc);

  TableArgs ta;
  auto* table = app.add_subcommand("table", "parameter sweep as CSV rows");
  add_domain(table, c);
  add_params(table, c);
  add_engine(table, c);
  table->add_option("--sweep", ta.sweep, "p or separation");
  table->add_option("--from", ta.from);
  table->add_option("--to", ta.to);
  table->add_option("--points", ta.points);
  table->add_option("--corners", ta.corners);
  table->add_flag("--mc", ta.mc);
  table->add_option("--sweeps", ta.sweeps);
  table->add_option("--seed", c.seed);
  table->add_flag("--json", c.json_out);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "fkf: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*domain) return cmd_domain(c, dump, out);
    if (*loops) return cmd_loops(c, config, out);
    if (*winding) return cmd_winding(c, config, from, to, out);
    if (*fermion) return cmd_fermion(c, fa, out, err);
    if (*verify) return cmd_verify(c, suite, vcorners, vsweeps, args, out, err);
    if (*table) return cmd_table(c, ta, out, err);
  } catch (const EnumerationCapExceeded& e) {
    err << "fkf: " << e.what() << '\n';
    return kExitRefused;
  } catch (const InvalidArgument& e) {
    err << "fkf: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RoutingError& e) {
    err << "fkf: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvariantViolation& e) {
    err << "fkf: invariant violated: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitUsage;
}

}  // namespace fkf::cli
