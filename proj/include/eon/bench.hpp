#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eon/exact.hpp"
#include "eon/heuristics.hpp"
#include "eon/spectrum.hpp"

namespace eon {

// Reduced fraction, used where reports promise exact arithmetic.
struct Ratio {
  long num = 0;
  long den = 1;

  static Ratio make(long num, long den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
  friend Ratio operator-(const Ratio& a, const Ratio& b);
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

double gap_percent(int optimal, int heuristic);
double bandwidth_ghz(int objective, const SpectrumGrid& grid);
double spectral_saving_percent(double rsa_bw, double rwa_bw);

// Which heuristic value the gaps use: used-slot count or highest slot index.
enum class GapMetric { kUsedSlots, kFitness };

struct ExperimentConfig {
  std::string name = "small";
  std::string topology = "six_node";
  int instances = 10;
  int demands = 8;
  int slice_min = 1;
  int slice_max = 4;
  std::uint64_t base_seed = 1;
  int rsa_slots = 80;
  int rwa_slots = 40;
  SolverLimits limits;
  MsfConfig msf;
  GaConfig ga;
  GapMetric gap_metric = GapMetric::kUsedSlots;
  // Instances solved concurrently. Never changes report contents.
  int threads = 1;

  void validate() const;
};

ExperimentConfig default_small_config();
ExperimentConfig default_audit_config();
ExperimentConfig load_experiment_config(std::string_view json_text);
std::string save_experiment_config(const ExperimentConfig& cfg);

enum class GapBasis { kOptimal, kBound };
std::string_view to_string(GapBasis b);

struct ProblemResult {
  SolveStatus status = SolveStatus::kTimedOut;
  std::optional<int> exact;  // incumbent objective
  int proven_bound = 0;      // solver's bound (== exact when Optimal)
  int simple_bound = 0;      // lower_bound(): degree and width bound
  std::int64_t nodes = 0;
  int heuristic = 0;          // used slots / wavelengths
  int heuristic_fitness = 0;  // highest used index
  double gap = 0.0;
  GapBasis basis = GapBasis::kOptimal;

  bool proven() const { return status == SolveStatus::kOptimal; }
  // Reference value for gaps: the optimum when proven, else the bound.
  int reference() const { return proven() ? *exact : proven_bound; }
};

struct InstanceRow {
  int index = 0;
  std::uint64_t seed = 0;
  int total_slices = 0;
  ProblemResult rsa;
  ProblemResult rwa;
  std::string error;

  // In units of 12.5 GHz so savings stay exact.
  std::optional<Ratio> heuristic_saving;     // MSF vs GA
  std::optional<Ratio> optimal_saving;       // both optima, when proven
  std::optional<Ratio> heur_rsa_vs_opt_rwa;
  std::optional<Ratio> opt_rsa_vs_heur_rwa;
  std::optional<Ratio> distortion;           // heuristic_saving - optimal_saving
  bool sign_flip = false;
};

struct ProblemAggregate {
  double mean_gap = 0.0;
  double max_gap = 0.0;
  int optimal_hits = 0;  // heuristic equal to a proven optimum
  int proven = 0;
  int bound_based = 0;
};

enum class ExperimentKind { kSmallScale, kExtrapolationAudit, kComparisonDistortion };

struct ExperimentReport {
  ExperimentKind kind = ExperimentKind::kSmallScale;
  ExperimentConfig config;
  std::vector<InstanceRow> rows;
  ProblemAggregate rsa;
  ProblemAggregate rwa;
  int negative_heuristic_savings = 0;
  int sign_flips = 0;
  std::optional<double> mean_distortion;
  // Broken lower_bound <= optimum <= heuristic chains, one line each.
  std::vector<std::string> invariant_violations;

  std::string csv() const;
  std::string markdown() const;
};

// Runs every instance through exact and heuristic RSA and RWA.
ExperimentReport run_experiment(const ExperimentConfig& cfg, ExperimentKind kind);

ExperimentReport run_small_scale(const ExperimentConfig& cfg);
ExperimentReport run_extrapolation_audit(const ExperimentConfig& cfg);
ExperimentReport run_comparison_distortion(const ExperimentConfig& cfg);

}  // namespace eon
