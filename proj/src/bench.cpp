#include "eon/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <thread>

#include "eon/error.hpp"
#include "json.hpp"

namespace eon {

using nlohmann::json;

Ratio Ratio::make(long num, long den) {
  if (den == 0) throw InvalidArgumentError("ratio: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long g = std::gcd(num < 0 ? -num : num, den);
  return g > 1 ? Ratio{num / g, den / g} : Ratio{num, den};
}

std::string Ratio::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Ratio operator-(const Ratio& a, const Ratio& b) {
  return Ratio::make(a.num * b.den - b.num * a.den, a.den * b.den);
}

double gap_percent(int optimal, int heuristic) {
  if (optimal < 1) throw InvalidArgumentError("gap: optimal value must be >= 1");
  if (heuristic < optimal)
    throw InvalidArgumentError("gap: heuristic " + std::to_string(heuristic) + " below optimum " +
                               std::to_string(optimal));
  return 100.0 * (heuristic - optimal) / optimal;
}

double bandwidth_ghz(int objective, const SpectrumGrid& grid) {
  if (objective < 0) throw InvalidArgumentError("bandwidth: negative objective");
  return objective * grid.slot_width_ghz;
}

double spectral_saving_percent(double rsa_bw, double rwa_bw) {
  if (!(rsa_bw > 0.0) || !(rwa_bw > 0.0)) throw InvalidArgumentError("saving: bandwidths must be positive");
  return 100.0 * (rwa_bw - rsa_bw) / rwa_bw;
}

std::string_view to_string(GapBasis b) { return b == GapBasis::kOptimal ? "optimal" : "bound"; }

void ExperimentConfig::validate() const {
  if (instances < 1) throw InvalidArgumentError("experiment: instances must be >= 1");
  if (demands < 1) throw InvalidArgumentError("experiment: demands must be >= 1");
  if (slice_min < 1 || slice_min > slice_max) throw InvalidArgumentError("experiment: invalid slice range");
  if (rsa_slots < 1 || rwa_slots < 1) throw InvalidArgumentError("experiment: slot counts must be >= 1");
  if (msf.k_paths < 1) throw InvalidArgumentError("experiment: msf.k_paths must be >= 1");
  if (threads < 1) throw InvalidArgumentError("experiment: threads must be >= 1");
  ga.validate();
}

ExperimentConfig default_small_config() {
  ExperimentConfig c;
  c.name = "small";
  c.topology = "six_node";
  c.instances = 10;
  c.demands = 8;
  c.base_seed = 2021;
  c.limits = SolverLimits{600.0, 20'000'000, 10'000};
  return c;
}

ExperimentConfig default_audit_config() {
  ExperimentConfig c;
  c.name = "audit";
  c.topology = "cost239";
  c.instances = 10;
  c.demands = 45;
  c.base_seed = 2033;
  // The node limit binds long before the time limit, which keeps reports
  // reproducible on slower machines.
  c.limits = SolverLimits{600.0, 100'000, 10'000};
  return c;
}

ExperimentConfig load_experiment_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("experiment config: ") + e.what());
  }
  ExperimentConfig c = doc.value("topology", std::string("six_node")) == "cost239" ? default_audit_config()
                                                                                  : default_small_config();
  try {
    c.name = doc.value("name", c.name);
    c.topology = doc.value("topology", c.topology);
    c.instances = doc.value("instances", c.instances);
    c.demands = doc.value("demands", c.demands);
    c.slice_min = doc.value("slice_min", c.slice_min);
    c.slice_max = doc.value("slice_max", c.slice_max);
    c.base_seed = doc.value("base_seed", c.base_seed);
    c.rsa_slots = doc.value("rsa_slots", c.rsa_slots);
    c.rwa_slots = doc.value("rwa_slots", c.rwa_slots);
    c.threads = doc.value("threads", c.threads);
    if (doc.contains("limits")) {
      const auto& l = doc["limits"];
      c.limits.time_limit_s = l.value("time_limit_s", c.limits.time_limit_s);
      c.limits.node_limit = l.value("node_limit", c.limits.node_limit);
      c.limits.path_cap = l.value("path_cap", c.limits.path_cap);
    }
    if (doc.contains("msf")) c.msf.k_paths = doc["msf"].value("k_paths", c.msf.k_paths);
    if (doc.contains("ga")) {
      const auto& g = doc["ga"];
      c.ga.k_paths = g.value("k_paths", c.ga.k_paths);
      c.ga.population = g.value("population", c.ga.population);
      c.ga.generations = g.value("generations", c.ga.generations);
      c.ga.tournament_size = g.value("tournament_size", c.ga.tournament_size);
      c.ga.crossover_rate = g.value("crossover_rate", c.ga.crossover_rate);
      c.ga.mutation_rate = g.value("mutation_rate", c.ga.mutation_rate);
      c.ga.elitism = g.value("elitism", c.ga.elitism);
      c.ga.seed = g.value("seed", c.ga.seed);
    }
    const std::string metric = doc.value("gap_metric", std::string("used_slots"));
    if (metric == "used_slots")
      c.gap_metric = GapMetric::kUsedSlots;
    else if (metric == "fitness")
      c.gap_metric = GapMetric::kFitness;
    else
      throw ValidationError("experiment config: unknown gap_metric '" + metric + "'");
  } catch (const json::exception& e) {
    throw ParseError(std::string("experiment config: ") + e.what());
  }
  c.msf.grid = SpectrumGrid::rsa(c.rsa_slots);
  c.ga.grid = SpectrumGrid::rwa(c.rwa_slots);
  c.validate();
  return c;
}

std::string save_experiment_config(const ExperimentConfig& c) {
  json doc = {
      {"name", c.name},
      {"topology", c.topology},
      {"instances", c.instances},
      {"demands", c.demands},
      {"slice_min", c.slice_min},
      {"slice_max", c.slice_max},
      {"base_seed", c.base_seed},
      {"rsa_slots", c.rsa_slots},
      {"rwa_slots", c.rwa_slots},
      {"threads", c.threads},
      {"limits",
       {{"time_limit_s", c.limits.time_limit_s},
        {"node_limit", c.limits.node_limit},
        {"path_cap", c.limits.path_cap}}},
      {"msf", {{"k_paths", c.msf.k_paths}}},
      {"ga",
       {{"k_paths", c.ga.k_paths},
        {"population", c.ga.population},
        {"generations", c.ga.generations},
        {"tournament_size", c.ga.tournament_size},
        {"crossover_rate", c.ga.crossover_rate},
        {"mutation_rate", c.ga.mutation_rate},
        {"elitism", c.ga.elitism},
        {"seed", c.ga.seed}}},
      {"gap_metric", c.gap_metric == GapMetric::kUsedSlots ? "used_slots" : "fitness"},
  };
  return doc.dump(2) + "\n";
}

namespace {

long milli_ghz(int objective, const SpectrumGrid& grid) {
  return std::lround(bandwidth_ghz(objective, grid) * 1000.0);
}

std::optional<Ratio> saving_ratio(long rsa_mghz, long rwa_mghz) {
  if (rsa_mghz <= 0 || rwa_mghz <= 0) return std::nullopt;
  return Ratio::make(100 * (rwa_mghz - rsa_mghz), rwa_mghz);
}

void fill_exact(ProblemResult& r, const SolveOutcome& o) {
  r.status = o.status;
  r.exact = o.objective;
  r.proven_bound = o.lower_bound;
  r.nodes = o.stats.nodes;
}

void fill_gap(ProblemResult& r) {
  r.basis = r.proven() ? GapBasis::kOptimal : GapBasis::kBound;
  const int ref = r.reference();
  r.gap = ref >= 1 && r.heuristic >= ref ? gap_percent(ref, r.heuristic) : 0.0;
}

InstanceRow run_instance(const ExperimentConfig& cfg, const Topology& topo, int index) {
  InstanceRow row;
  row.index = index;
  row.seed = cfg.base_seed + static_cast<std::uint64_t>(index);
  const SpectrumGrid rsa_grid = SpectrumGrid::rsa(cfg.rsa_slots);
  const SpectrumGrid rwa_grid = SpectrumGrid::rwa(cfg.rwa_slots);
  const bool use_fitness = cfg.gap_metric == GapMetric::kFitness;
  try {
    const TrafficMatrix tm = generate_traffic(topo, cfg.demands, cfg.slice_min, cfg.slice_max, row.seed);
    const TrafficMatrix rwa_tm = to_rwa_demands(tm);
    row.total_slices = tm.total_slices();

    fill_exact(row.rsa, solve_rsa_exact(topo, tm, rsa_grid, cfg.limits));
    row.rsa.simple_bound = lower_bound(topo, tm);
    MsfConfig msf = cfg.msf;
    msf.grid = rsa_grid;
    const SpectrumAssignment msf_sol = msf_solve(topo, tm, msf);
    if (!validate_assignment(topo, tm, msf_sol).ok()) throw Error("MSF produced an infeasible assignment");
    row.rsa.heuristic_fitness = fitness(msf_sol);
    row.rsa.heuristic = use_fitness ? row.rsa.heuristic_fitness : used_slice_count(msf_sol);

    GaConfig ga = cfg.ga;
    ga.grid = rwa_grid;
    ga.seed = cfg.ga.seed + static_cast<std::uint64_t>(index);
    const GaResult ga_res = ga_rwa_solve(topo, rwa_tm, ga);
    if (!validate_assignment(topo, rwa_tm, ga_res.assignment).ok())
      throw Error("GA produced an infeasible assignment");
    fill_exact(row.rwa, solve_rwa_exact(topo, rwa_tm, cfg.limits, rwa_grid, &ga_res.assignment));
    row.rwa.simple_bound = lower_bound(topo, rwa_tm);
    row.rwa.heuristic_fitness = fitness(ga_res.assignment);
    row.rwa.heuristic = use_fitness ? row.rwa.heuristic_fitness : used_slice_count(ga_res.assignment);

    fill_gap(row.rsa);
    fill_gap(row.rwa);

    const long msf_bw = milli_ghz(row.rsa.heuristic, rsa_grid);
    const long ga_bw = milli_ghz(row.rwa.heuristic, rwa_grid);
    row.heuristic_saving = saving_ratio(msf_bw, ga_bw);
    if (row.rsa.proven() && row.rwa.proven()) {
      const long opt_rsa = milli_ghz(*row.rsa.exact, rsa_grid);
      const long opt_rwa = milli_ghz(*row.rwa.exact, rwa_grid);
      row.optimal_saving = saving_ratio(opt_rsa, opt_rwa);
      row.heur_rsa_vs_opt_rwa = saving_ratio(msf_bw, opt_rwa);
      row.opt_rsa_vs_heur_rwa = saving_ratio(opt_rsa, ga_bw);
      if (row.heuristic_saving && row.optimal_saving) {
        row.distortion = *row.heuristic_saving - *row.optimal_saving;
        row.sign_flip = row.heuristic_saving->num < 0 && row.optimal_saving->num > 0;
      }
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

void check_chain(const std::string& tag, const InstanceRow& row, const ProblemResult& r,
                 std::vector<std::string>& out) {
  auto fail = [&](const std::string& what) {
    out.push_back("instance " + std::to_string(row.index + 1) + " " + tag + ": " + what);
  };
  if (r.simple_bound > r.proven_bound) fail("lower_bound exceeds the solver bound");
  if (r.exact && r.proven_bound > *r.exact) fail("bound exceeds the exact objective");
  if (r.proven() && *r.exact > r.heuristic) fail("heuristic beats the proven optimum");
  if (r.proven_bound > r.heuristic) fail("heuristic below the lower bound");
  if (r.status == SolveStatus::kInfeasible || r.status == SolveStatus::kTimedOut)
    fail(std::string("exact solver ended ") + std::string(to_string(r.status)) + " although a heuristic solution exists");
}

ProblemAggregate aggregate(const std::vector<InstanceRow>& rows, bool rsa) {
  ProblemAggregate a;
  int n = 0;
  for (const auto& row : rows) {
    if (!row.error.empty()) continue;
    const ProblemResult& r = rsa ? row.rsa : row.rwa;
    ++n;
    a.mean_gap += r.gap;
    a.max_gap = std::max(a.max_gap, r.gap);
    if (r.proven()) {
      ++a.proven;
      if (r.heuristic == *r.exact) ++a.optimal_hits;
    } else {
      ++a.bound_based;
    }
  }
  if (n > 0) a.mean_gap /= n;
  return a;
}

std::string fmt(double v, int decimals = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string opt_int(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string{}; }

std::string opt_ratio(const std::optional<Ratio>& r) { return r ? fmt(r->value()) : std::string{}; }
std::string opt_ratio_exact(const std::optional<Ratio>& r) { return r ? r->str() : std::string{}; }

std::string kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kSmallScale: return "small-scale verification";
    case ExperimentKind::kExtrapolationAudit: return "extrapolation audit";
    case ExperimentKind::kComparisonDistortion: return "comparison distortion";
  }
  return "";
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg, ExperimentKind kind) {
  cfg.validate();
  const Topology topo = resolve_topology(cfg.topology);
  ExperimentReport report;
  report.kind = kind;
  report.config = cfg;
  report.rows.resize(cfg.instances);

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < cfg.instances; i = next++) report.rows[i] = run_instance(cfg, topo, i);
  };
  const int workers = std::min(cfg.threads, cfg.instances);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& row : report.rows) {
    if (!row.error.empty()) {
      report.invariant_violations.push_back("instance " + std::to_string(row.index + 1) + ": " + row.error);
      continue;
    }
    check_chain("rsa", row, row.rsa, report.invariant_violations);
    check_chain("rwa", row, row.rwa, report.invariant_violations);
    if (row.heuristic_saving && row.heuristic_saving->num < 0) ++report.negative_heuristic_savings;
    if (row.sign_flip) ++report.sign_flips;
  }
  report.rsa = aggregate(report.rows, true);
  report.rwa = aggregate(report.rows, false);

  double sum = 0.0;
  int n = 0;
  for (const auto& row : report.rows)
    if (row.distortion) {
      sum += row.distortion->value();
      ++n;
    }
  if (n > 0) report.mean_distortion = sum / n;
  return report;
}

ExperimentReport run_small_scale(const ExperimentConfig& cfg) {
  return run_experiment(cfg, ExperimentKind::kSmallScale);
}

ExperimentReport run_extrapolation_audit(const ExperimentConfig& cfg) {
  return run_experiment(cfg, ExperimentKind::kExtrapolationAudit);
}

ExperimentReport run_comparison_distortion(const ExperimentConfig& cfg) {
  return run_experiment(cfg, ExperimentKind::kComparisonDistortion);
}

std::string ExperimentReport::csv() const {
  std::string out =
      "instance,seed,demands,total_slices,"
      "rsa_status,rsa_exact,rsa_bound,rsa_lb,rsa_nodes,msf_used,msf_fitness,msf_gap,msf_gap_basis,"
      "rwa_status,rwa_exact,rwa_bound,rwa_lb,rwa_nodes,ga_used,ga_fitness,ga_gap,ga_gap_basis,"
      "msf_bw_ghz,ga_bw_ghz,opt_rsa_bw_ghz,opt_rwa_bw_ghz,"
      "heuristic_saving,heuristic_saving_exact,optimal_saving,optimal_saving_exact,"
      "msf_vs_opt_rwa_saving,opt_rsa_vs_ga_saving,distortion,distortion_exact,sign_flip,error\n";
  const SpectrumGrid rsa_grid = SpectrumGrid::rsa(config.rsa_slots);
  const SpectrumGrid rwa_grid = SpectrumGrid::rwa(config.rwa_slots);
  for (const auto& r : rows) {
    auto problem = [&](const ProblemResult& p) {
      return std::string(to_string(p.status)) + "," + opt_int(p.exact) + "," + std::to_string(p.proven_bound) + "," +
             std::to_string(p.simple_bound) + "," + std::to_string(p.nodes) + ",";
    };
    auto heur = [&](const ProblemResult& p) {
      return std::to_string(p.heuristic) + "," + std::to_string(p.heuristic_fitness) + "," + fmt(p.gap) + "," +
             std::string(to_string(p.basis)) + ",";
    };
    std::string line = std::to_string(r.index + 1) + "," + std::to_string(r.seed) + "," +
                       std::to_string(config.demands) + "," + std::to_string(r.total_slices) + ",";
    if (r.error.empty()) {
      line += problem(r.rsa) + heur(r.rsa) + problem(r.rwa) + heur(r.rwa);
      line += fmt(bandwidth_ghz(r.rsa.heuristic, rsa_grid), 1) + "," + fmt(bandwidth_ghz(r.rwa.heuristic, rwa_grid), 1) +
              ",";
      line += (r.rsa.proven() ? fmt(bandwidth_ghz(*r.rsa.exact, rsa_grid), 1) : "") + "," +
              (r.rwa.proven() ? fmt(bandwidth_ghz(*r.rwa.exact, rwa_grid), 1) : "") + ",";
      line += opt_ratio(r.heuristic_saving) + "," + opt_ratio_exact(r.heuristic_saving) + "," +
              opt_ratio(r.optimal_saving) + "," + opt_ratio_exact(r.optimal_saving) + "," +
              opt_ratio(r.heur_rsa_vs_opt_rwa) + "," + opt_ratio(r.opt_rsa_vs_heur_rwa) + "," +
              opt_ratio(r.distortion) + "," + opt_ratio_exact(r.distortion) + "," + (r.sign_flip ? "1" : "0") + ",";
    } else {
      line += std::string(31, ',');
      std::string msg = r.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      line += msg;
    }
    out += line + "\n";
  }
  return out;
}

std::string ExperimentReport::markdown() const {
  std::string out = "# " + config.name + " (" + kind_name(kind) + ")\n\n";
  out += "Topology `" + config.topology + "`, " + std::to_string(config.instances) + " instances x " +
         std::to_string(config.demands) + " demands, slices " + std::to_string(config.slice_min) + ".." +
         std::to_string(config.slice_max) + ", base seed " + std::to_string(config.base_seed) + ".\n\n";

  auto value_cell = [](const ProblemResult& p) {
    if (p.proven()) return std::to_string(*p.exact);
    std::string cell = ">=" + std::to_string(p.proven_bound);
    if (p.exact) cell += " (best " + std::to_string(*p.exact) + ")";
    return cell;
  };

  switch (kind) {
    case ExperimentKind::kSmallScale:
      out += "| Traffic Instance | Optimal RSA | Heuristic RSA | Optimal RWA | Heuristic RWA |\n";
      out += "|---|---|---|---|---|\n";
      for (const auto& r : rows) {
        if (!r.error.empty()) {
          out += "| " + std::to_string(r.index + 1) + " | error | | | |\n";
          continue;
        }
        out += "| " + std::to_string(r.index + 1) + " | " + value_cell(r.rsa) + " | " + std::to_string(r.rsa.heuristic) +
               " | " + value_cell(r.rwa) + " | " + std::to_string(r.rwa.heuristic) + " |\n";
      }
      break;
    case ExperimentKind::kExtrapolationAudit:
      out += "| Instance | RSA status | RSA optimum/bound | MSF | MSF gap % | RWA status | RWA optimum/bound | GA | GA gap % |\n";
      out += "|---|---|---|---|---|---|---|---|---|\n";
      for (const auto& r : rows) {
        if (!r.error.empty()) {
          out += "| " + std::to_string(r.index + 1) + " | error | | | | | | | |\n";
          continue;
        }
        out += "| " + std::to_string(r.index + 1) + " | " + std::string(to_string(r.rsa.status)) + " | " +
               value_cell(r.rsa) + " | " + std::to_string(r.rsa.heuristic) + " | " + fmt(r.rsa.gap, 1) + " (" +
               std::string(to_string(r.rsa.basis)) + ") | " + std::string(to_string(r.rwa.status)) + " | " +
               value_cell(r.rwa) + " | " + std::to_string(r.rwa.heuristic) + " | " + fmt(r.rwa.gap, 1) + " (" +
               std::string(to_string(r.rwa.basis)) + ") |\n";
      }
      break;
    case ExperimentKind::kComparisonDistortion:
      out += "| Instance | MSF GHz | GA GHz | Heuristic saving % | Optimal RSA GHz | Optimal RWA GHz | True saving % | "
             "Distortion | Sign flip |\n";
      out += "|---|---|---|---|---|---|---|---|---|\n";
      for (const auto& r : rows) {
        if (!r.error.empty()) {
          out += "| " + std::to_string(r.index + 1) + " | error | | | | | | | |\n";
          continue;
        }
        const SpectrumGrid rsa_grid = SpectrumGrid::rsa(config.rsa_slots);
        const SpectrumGrid rwa_grid = SpectrumGrid::rwa(config.rwa_slots);
        out += "| " + std::to_string(r.index + 1) + " | " + fmt(bandwidth_ghz(r.rsa.heuristic, rsa_grid), 1) + " | " +
               fmt(bandwidth_ghz(r.rwa.heuristic, rwa_grid), 1) + " | " + opt_ratio(r.heuristic_saving) + " | " +
               (r.rsa.proven() ? fmt(bandwidth_ghz(*r.rsa.exact, rsa_grid), 1) : "unproven") + " | " +
               (r.rwa.proven() ? fmt(bandwidth_ghz(*r.rwa.exact, rwa_grid), 1) : "unproven") + " | " +
               (r.optimal_saving ? opt_ratio(r.optimal_saving) : "n/a") + " | " +
               (r.distortion ? opt_ratio(r.distortion) : "n/a") + " | " + (r.sign_flip ? "yes" : "") + " |\n";
      }
      break;
  }

  auto agg = [&](const char* label, const ProblemAggregate& a) {
    return std::string("- ") + label + ": mean gap " + fmt(a.mean_gap, 2) + "%, max gap " + fmt(a.max_gap, 2) +
           "%, heuristic optimal on " + std::to_string(a.optimal_hits) + "/" + std::to_string(a.proven) +
           " proven instances, " + std::to_string(a.bound_based) + " bound-based gaps\n";
  };
  out += "\n";
  out += agg("RSA (MSF)", rsa);
  out += agg("RWA (GA)", rwa);
  out += "- negative heuristic savings: " + std::to_string(negative_heuristic_savings) + ", sign flips: " +
         std::to_string(sign_flips);
  if (mean_distortion) out += ", mean distortion " + fmt(*mean_distortion, 2) + " points";
  out += "\n";
  if (!invariant_violations.empty()) {
    out += "\n## Invariant violations\n\n";
    for (const auto& v : invariant_violations) out += "- " + v + "\n";
  }
  return out;
}

}  // namespace eon
