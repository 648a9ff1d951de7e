// eonctl: traffic generation, solving, validation, LP export and experiments.
//
// Exit codes: 0 success, 1 I/O or input failure, 2 usage, 3 validation failure.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "eon/bench.hpp"
#include "eon/error.hpp"
#include "eon/exact.hpp"
#include "eon/heuristics.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInvalid = 3;

struct IoError : eon::Error {
  using eon::Error::Error;
};
struct UsageError : eon::Error {
  using eon::Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out.flush()) throw IoError("write failed for '" + path + "'");
}

std::pair<int, int> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError("--slices expects MIN:MAX, got '" + s + "'");
  try {
    std::size_t used_a = 0, used_b = 0;
    const int a = std::stoi(s.substr(0, colon), &used_a);
    const int b = std::stoi(s.substr(colon + 1), &used_b);
    if (used_a != colon || used_b != s.size() - colon - 1) throw std::invalid_argument(s);
    if (a < 1 || b < a) throw UsageError("--slices range must satisfy 1 <= MIN <= MAX");
    return {a, b};
  } catch (const std::logic_error&) {
    throw UsageError("--slices expects MIN:MAX, got '" + s + "'");
  }
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
  std::string topology;
  int demands = 8;
  std::string slices = "1:4";
  std::uint64_t seed = 1;
  std::string output;
  bool json = false;
};

int cmd_gen(const GenArgs& a) {
  const auto [lo, hi] = parse_range(a.slices);
  if (a.demands < 1) throw UsageError("--demands must be >= 1");
  const eon::Topology topo = eon::resolve_topology(a.topology);
  const eon::TrafficMatrix tm = eon::generate_traffic(topo, a.demands, lo, hi, a.seed);
  const std::string csv = eon::save_traffic(tm, topo);
  if (a.output.empty() || a.output == "-")
    std::cout << csv;
  else
    write_file(a.output, csv);

  std::ostream& info = a.output.empty() || a.output == "-" ? std::cerr : std::cout;
  if (a.json)
    info << json{{"demands", tm.size()}, {"total_slices", tm.total_slices()}, {"seed", a.seed}}.dump() << "\n";
  else
    info << tm.size() << " demands, " << tm.total_slices() << " slices total\n";
  return 0;
}

// ---- solve -----------------------------------------------------------------

struct SolveArgs {
  std::string topology;
  std::string traffic;
  std::string problem = "rsa";
  std::string method = "msf";
  double time_limit = 60.0;
  std::int64_t node_limit = eon::SolverLimits{}.node_limit;
  std::size_t path_cap = eon::SolverLimits{}.path_cap;
  int slots = 0;
  std::uint64_t seed = 1;
  int k_paths = 0;
  int population = eon::GaConfig{}.population;
  int generations = eon::GaConfig{}.generations;
  int threads = 1;
  std::string solution;
  std::string outcome;
  std::string ga_log;
  bool json = false;
};

int cmd_solve(const SolveArgs& a) {
  const bool rwa = a.problem == "rwa";
  if (a.method == "ga" && !rwa) throw UsageError("--method ga solves --problem rwa only");
  if (a.slots < 0 || a.k_paths < 0 || a.threads < 1) throw UsageError("numeric options must be positive");

  const eon::Topology topo = eon::resolve_topology(a.topology);
  eon::TrafficMatrix tm = eon::load_traffic(read_file(a.traffic), topo);
  if (rwa) tm = eon::to_rwa_demands(tm);
  eon::SpectrumGrid grid = rwa ? eon::SpectrumGrid::rwa() : eon::SpectrumGrid::rsa();
  if (a.slots > 0) grid.slot_count = a.slots;

  const auto t0 = std::chrono::steady_clock::now();
  json summary{{"problem", a.problem}, {"method", a.method}};
  std::optional<eon::SpectrumAssignment> solution;
  std::string outcome_text;

  if (a.method == "exact") {
    const eon::SolverLimits limits{a.time_limit, a.node_limit, a.path_cap};
    const eon::SolveOutcome o = eon::solve_rsa_exact(topo, tm, grid, limits);
    solution = o.solution;
    outcome_text = eon::save_outcome(o);
    summary["status"] = std::string(eon::to_string(o.status));
    summary["objective"] = o.objective ? json(*o.objective) : json(nullptr);
    summary["lower_bound"] = o.lower_bound;
    summary["nodes"] = o.stats.nodes;
  } else {
    if (a.method == "msf") {
      eon::MsfConfig cfg;
      cfg.grid = grid;
      if (a.k_paths > 0) cfg.k_paths = a.k_paths;
      solution = eon::msf_solve(topo, tm, cfg);
    } else {
      eon::GaConfig cfg;
      cfg.grid = grid;
      cfg.seed = a.seed;
      cfg.threads = a.threads;
      cfg.population = a.population;
      cfg.generations = a.generations;
      if (a.k_paths > 0) cfg.k_paths = a.k_paths;
      if (cfg.elitism >= cfg.population) cfg.elitism = cfg.population - 1;
      if (cfg.tournament_size > cfg.population) cfg.tournament_size = cfg.population;
      const eon::GaResult r = eon::ga_rwa_solve(topo, tm, cfg);
      solution = r.assignment;
      if (!a.ga_log.empty()) write_file(a.ga_log, eon::ga_log_csv(r.log));
    }
    json doc{{"problem", a.problem},
             {"method", a.method},
             {"status", "Heuristic"},
             {"objective", eon::used_slice_count(*solution)},
             {"fitness", eon::fitness(*solution)}};
    outcome_text = doc.dump(2) + "\n";
    summary["status"] = "Heuristic";
    summary["objective"] = eon::used_slice_count(*solution);
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  summary["fitness"] = solution ? json(eon::fitness(*solution)) : json(nullptr);
  summary["wall_time_s"] = wall;

  if (!a.solution.empty() && solution) write_file(a.solution, eon::save_assignment(*solution));
  if (!a.outcome.empty()) write_file(a.outcome, outcome_text);

  if (a.json) {
    std::cout << summary.dump() << "\n";
  } else {
    std::cout << "status " << summary["status"].get<std::string>() << ", objective "
              << (summary["objective"].is_null() ? std::string("none") : summary["objective"].dump());
    if (summary.contains("lower_bound")) std::cout << ", bound " << summary["lower_bound"].get<int>();
    std::cout << ", " << wall << " s\n";
  }
  return 0;
}

// ---- validate --------------------------------------------------------------

struct ValidateArgs {
  std::string topology;
  std::string traffic;
  std::string solution;
  std::string problem = "rsa";
  bool json = false;
};

int cmd_validate(const ValidateArgs& a) {
  const eon::Topology topo = eon::resolve_topology(a.topology);
  eon::TrafficMatrix tm = eon::load_traffic(read_file(a.traffic), topo);
  if (a.problem == "rwa") tm = eon::to_rwa_demands(tm);
  const eon::SpectrumAssignment sol = eon::load_assignment(read_file(a.solution), topo, tm);
  const eon::ValidationReport rep = eon::validate_assignment(topo, tm, sol);

  if (a.json) {
    json list = json::array();
    for (const auto& v : rep.violations)
      list.push_back({{"kind", std::string(eon::to_string(v.kind))}, {"demand", v.demand}, {"message", v.message}});
    std::cout << json{{"violations", list}, {"ok", rep.ok()}}.dump() << "\n";
  } else {
    for (const auto& v : rep.violations) std::cout << eon::to_string(v.kind) << ": " << v.message << "\n";
    std::cout << rep.violations.size() << " violations\n";
  }
  return rep.ok() ? 0 : kExitInvalid;
}

// ---- emit-lp ---------------------------------------------------------------

struct EmitLpArgs {
  std::string topology;
  std::string traffic;
  std::string problem = "rsa";
  int slots = 0;
  std::string output;
};

int cmd_emit_lp(const EmitLpArgs& a) {
  if (a.slots < 0) throw UsageError("--slots must be positive");
  const eon::Topology topo = eon::resolve_topology(a.topology);
  eon::TrafficMatrix tm = eon::load_traffic(read_file(a.traffic), topo);
  const bool rwa = a.problem == "rwa";
  if (rwa) tm = eon::to_rwa_demands(tm);
  eon::SpectrumGrid grid = rwa ? eon::SpectrumGrid::rwa() : eon::SpectrumGrid::rsa();
  if (a.slots > 0) grid.slot_count = a.slots;
  const std::string lp = eon::emit_lp(topo, tm, grid);
  if (a.output.empty() || a.output == "-")
    std::cout << lp;
  else
    write_file(a.output, lp);
  return 0;
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
  std::string experiment = "small";
  std::string config;
  std::string out_dir = ".";
  int threads = 0;
  bool json = false;
};

int cmd_bench(const BenchArgs& a) {
  eon::ExperimentConfig cfg;
  if (!a.config.empty())
    cfg = eon::load_experiment_config(read_file(a.config));
  else if (a.experiment == "small")
    cfg = eon::default_small_config();
  else {
    cfg = eon::default_audit_config();
    cfg.name = a.experiment;
  }
  if (a.threads > 0) cfg.threads = a.threads;
  cfg.validate();

  eon::ExperimentReport rep;
  if (a.experiment == "small")
    rep = eon::run_small_scale(cfg);
  else if (a.experiment == "audit")
    rep = eon::run_extrapolation_audit(cfg);
  else
    rep = eon::run_comparison_distortion(cfg);

  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  if (ec) throw IoError("cannot create '" + a.out_dir + "': " + ec.message());
  const fs::path csv_path = fs::path(a.out_dir) / (a.experiment + ".csv");
  const fs::path md_path = fs::path(a.out_dir) / (a.experiment + ".md");
  write_file(csv_path.string(), rep.csv());
  write_file(md_path.string(), rep.markdown());

  if (a.json) {
    std::cout << json{{"experiment", a.experiment},
                      {"csv", csv_path.string()},
                      {"markdown", md_path.string()},
                      {"rsa_mean_gap", rep.rsa.mean_gap},
                      {"rwa_mean_gap", rep.rwa.mean_gap},
                      {"negative_heuristic_savings", rep.negative_heuristic_savings},
                      {"invariant_violations", rep.invariant_violations.size()}}
                     .dump()
              << "\n";
  } else {
    std::cout << "wrote " << csv_path.string() << " and " << md_path.string() << "\n"
              << "RSA mean gap " << rep.rsa.mean_gap << "%, RWA mean gap " << rep.rwa.mean_gap << "%\n";
    for (const auto& v : rep.invariant_violations) std::cout << "invariant violated: " << v << "\n";
  }
  return rep.invariant_violations.empty() ? 0 : kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Routing and spectrum/wavelength assignment toolkit"};
  app.require_subcommand(1, 1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a seeded traffic matrix (CSV)");
  g->add_option("--topology", gen.topology, "Builtin name or topology JSON file")->required();
  g->add_option("--demands", gen.demands, "Number of demands");
  g->add_option("--slices", gen.slices, "Slice range MIN:MAX");
  g->add_option("--seed", gen.seed, "Random seed");
  g->add_option("-o,--output", gen.output, "Output CSV (stdout if omitted)");
  g->add_flag("--json", gen.json, "Machine-readable summary");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve an RSA or RWA instance");
  s->add_option("--topology", solve.topology)->required();
  s->add_option("--traffic", solve.traffic, "Traffic CSV")->required();
  s->add_option("--problem", solve.problem)->check(CLI::IsMember({"rsa", "rwa"}));
  s->add_option("--method", solve.method)->check(CLI::IsMember({"exact", "msf", "ga"}));
  s->add_option("--time-limit", solve.time_limit, "Seconds")->check(CLI::PositiveNumber);
  s->add_option("--node-limit", solve.node_limit)->check(CLI::PositiveNumber);
  s->add_option("--path-cap", solve.path_cap, "Paths enumerated per demand")->check(CLI::PositiveNumber);
  s->add_option("--slots", solve.slots, "Grid size (default 80 for rsa, 40 for rwa)");
  s->add_option("--seed", solve.seed, "GA seed");
  s->add_option("--k-paths", solve.k_paths, "Candidate paths per demand");
  s->add_option("--population", solve.population)->check(CLI::PositiveNumber);
  s->add_option("--generations", solve.generations)->check(CLI::PositiveNumber);
  s->add_option("--threads", solve.threads, "Worker hint; never changes results");
  s->add_option("-o,--solution", solve.solution, "Assignment JSON output");
  s->add_option("--outcome", solve.outcome, "Outcome JSON output");
  s->add_option("--ga-log", solve.ga_log, "Per-generation best fitness CSV");
  s->add_flag("--json", solve.json);

  ValidateArgs val;
  auto* v = app.add_subcommand("validate", "Check an assignment against its instance");
  v->add_option("--topology", val.topology)->required();
  v->add_option("--traffic", val.traffic)->required();
  v->add_option("--solution", val.solution)->required();
  v->add_option("--problem", val.problem)->check(CLI::IsMember({"rsa", "rwa"}));
  v->add_flag("--json", val.json);

  EmitLpArgs lp;
  auto* e = app.add_subcommand("emit-lp", "Write the MILP in CPLEX LP format");
  e->add_option("--topology", lp.topology)->required();
  e->add_option("--traffic", lp.traffic)->required();
  e->add_option("--problem", lp.problem)->check(CLI::IsMember({"rsa", "rwa"}));
  e->add_option("--slots", lp.slots);
  e->add_option("-o,--output", lp.output);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run an experiment and write CSV + Markdown reports");
  b->add_option("--experiment", bench.experiment)->check(CLI::IsMember({"small", "audit", "distortion"}));
  b->add_option("--config", bench.config, "Experiment config JSON");
  b->add_option("--out-dir", bench.out_dir);
  b->add_option("--threads", bench.threads);
  b->add_flag("--json", bench.json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*s) return cmd_solve(solve);
    if (*v) return cmd_validate(val);
    if (*e) return cmd_emit_lp(lp);
    return cmd_bench(bench);
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const eon::InvalidArgumentError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const eon::UnknownNameError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitIo;
  }
}
