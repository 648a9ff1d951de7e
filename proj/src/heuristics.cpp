#include "eon/heuristics.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <thread>

#include "eon/error.hpp"
#include "eon/rng.hpp"

namespace eon {

void GaConfig::validate() const {
  if (k_paths < 1) throw InvalidArgumentError("ga: k_paths must be >= 1");
  if (population < 1) throw InvalidArgumentError("ga: population must be >= 1");
  if (generations < 0) throw InvalidArgumentError("ga: generations must be >= 0");
  if (tournament_size < 1 || tournament_size > population)
    throw InvalidArgumentError("ga: tournament_size must be in 1..population");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0))
    throw InvalidArgumentError("ga: crossover_rate must be in [0,1]");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0))
    throw InvalidArgumentError("ga: mutation_rate must be in [0,1]");
  if (elitism < 0 || elitism >= population)
    throw InvalidArgumentError("ga: elitism must be < population");
}

CandidatePaths k_shortest_candidates(const Topology& topo, const TrafficMatrix& tm, int k) {
  CandidatePaths out;
  out.reserve(tm.demands.size());
  for (const auto& d : tm.demands) out.push_back(yen_k_shortest_paths(topo, d.src, d.dst, k));
  return out;
}

SpectrumAssignment first_fit_serve(const Topology& topo, const TrafficMatrix& tm,
                                   const Ordering& order, const CandidatePaths& candidates,
                                   const SpectrumGrid& grid) {
  SpectrumAssignment a(grid, topo.link_count());
  for (int id : order) {
    const Demand& d = tm.demands.at(id);
    std::optional<int> best_start;
    const Path* best_path = nullptr;
    for (const Path& p : candidates.at(id)) {
      auto start = first_fit_channel(path_availability(a, p), d.slices);
      if (start && (!best_start || *start < *best_start)) {
        best_start = start;
        best_path = &p;
      }
    }
    if (!best_start)
      throw CapacityExhaustedError(id, "demand " + std::to_string(id) + " (" + std::to_string(d.slices) +
                                           " slots) fits on none of its candidate paths");
    a.assign(id, *best_path, Channel{*best_start, d.slices});
  }
  return a;
}

Ordering msf_order(const TrafficMatrix& tm) {
  Ordering order(tm.demands.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return tm.demands[a].slices > tm.demands[b].slices;
  });
  return order;
}

SpectrumAssignment msf_solve(const Topology& topo, const TrafficMatrix& tm, const MsfConfig& cfg) {
  if (cfg.k_paths < 1) throw InvalidArgumentError("msf: k_paths must be >= 1");
  validate_traffic(tm, topo);
  return first_fit_serve(topo, tm, msf_order(tm), k_shortest_candidates(topo, tm, cfg.k_paths),
                         cfg.grid);
}

SpectrumAssignment first_fit_rwa(const Topology& topo, const TrafficMatrix& tm, const Ordering& order,
                                 int k_paths, const SpectrumGrid& grid) {
  for (const auto& d : tm.demands)
    if (d.slices != 1) throw InvalidArgumentError("rwa: demands must be converted to one wavelength each");
  return first_fit_serve(topo, tm, order, k_shortest_candidates(topo, tm, k_paths), grid);
}

Ordering order_crossover(const Ordering& a, const Ordering& b, std::size_t lo, std::size_t hi) {
  const std::size_t n = a.size();
  Ordering child(n, -1);
  std::vector<char> taken(n, 0);
  for (std::size_t i = lo; i <= hi; ++i) {
    child[i] = a[i];
    taken[a[i]] = 1;
  }
  std::size_t pos = (hi + 1) % n;
  for (std::size_t j = 0; j < n; ++j) {
    const int gene = b[(hi + 1 + j) % n];
    if (taken[gene]) continue;
    child[pos] = gene;
    taken[gene] = 1;
    pos = (pos + 1) % n;
  }
  return child;
}

namespace {

bool is_permutation_of_ids(const Ordering& o) {
  std::vector<char> seen(o.size(), 0);
  for (int g : o) {
    if (g < 0 || g >= static_cast<int>(o.size()) || seen[g]) return false;
    seen[g] = 1;
  }
  return true;
}

class GaRun {
 public:
  GaRun(const Topology& topo, const TrafficMatrix& tm, const GaConfig& cfg)
      : topo_(topo), tm_(tm), cfg_(cfg), candidates_(k_shortest_candidates(topo, tm, cfg.k_paths)) {}

  // Fitness is the number of wavelengths in use; decoding failure is fatal
  // because every ordering sees the same capacity.
  int decode_fitness(const Ordering& o) const {
    return used_slice_count(first_fit_serve(topo_, tm_, o, candidates_, cfg_.grid));
  }

  std::vector<int> evaluate(const std::vector<Ordering>& pop) const {
    std::vector<int> fit(pop.size());
    const int workers = std::max(1, std::min<int>(cfg_.threads, static_cast<int>(pop.size())));
    if (workers == 1) {
      for (std::size_t i = 0; i < pop.size(); ++i) fit[i] = decode_fitness(pop[i]);
      return fit;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < pop.size(); i += workers) fit[i] = decode_fitness(pop[i]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    return fit;
  }

  const CandidatePaths& candidates() const { return candidates_; }

 private:
  const Topology& topo_;
  const TrafficMatrix& tm_;
  const GaConfig& cfg_;
  CandidatePaths candidates_;
};

// Index of the fittest genome, lowest index on ties.
std::size_t argbest(const std::vector<int>& fit) {
  return static_cast<std::size_t>(std::min_element(fit.begin(), fit.end()) - fit.begin());
}

}  // namespace

GaResult ga_rwa_solve(const Topology& topo, const TrafficMatrix& tm, const GaConfig& cfg) {
  cfg.validate();
  validate_traffic(tm, topo);
  for (const auto& d : tm.demands)
    if (d.slices != 1) throw InvalidArgumentError("rwa: demands must be converted to one wavelength each");

  const std::size_t n = tm.demands.size();
  GaRun run(topo, tm, cfg);
  Rng rng(cfg.seed);

  std::vector<Ordering> pop;
  Ordering identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  pop.push_back(identity);
  if (cfg.population > 1) {
    // Converted demands all have width 1, so rank by the original rate.
    Ordering by_rate = identity;
    std::stable_sort(by_rate.begin(), by_rate.end(), [&](int a, int b) {
      return tm.demands[a].rate_gbps > tm.demands[b].rate_gbps;
    });
    pop.push_back(by_rate);
  }
  while (static_cast<int>(pop.size()) < cfg.population) {
    Ordering o = identity;
    for (std::size_t i = n; i > 1; --i) std::swap(o[i - 1], o[rng.uniform(i)]);
    pop.push_back(std::move(o));
  }

  std::vector<int> fit = run.evaluate(pop);
  std::size_t best_i = argbest(fit);
  Ordering best = pop[best_i];
  int best_fit = fit[best_i];
  std::vector<int> log{best_fit};

  auto tournament = [&]() -> std::size_t {
    std::size_t pick = rng.uniform(pop.size());
    for (int t = 1; t < cfg.tournament_size; ++t) {
      const std::size_t c = rng.uniform(pop.size());
      if (fit[c] < fit[pick] || (fit[c] == fit[pick] && c < pick)) pick = c;
    }
    return pick;
  };

  for (int g = 1; g <= cfg.generations; ++g) {
    std::vector<std::size_t> rank(pop.size());
    std::iota(rank.begin(), rank.end(), 0);
    std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) { return fit[a] < fit[b]; });

    std::vector<Ordering> next;
    next.reserve(pop.size());
    for (int e = 0; e < cfg.elitism && e < static_cast<int>(pop.size()); ++e) next.push_back(pop[rank[e]]);
    while (next.size() < pop.size()) {
      const Ordering& p1 = pop[tournament()];
      const Ordering& p2 = pop[tournament()];
      Ordering child;
      if (n > 1 && rng.uniform_real() < cfg.crossover_rate) {
        std::size_t lo = rng.uniform(n);
        std::size_t hi = rng.uniform(n);
        if (lo > hi) std::swap(lo, hi);
        child = order_crossover(p1, p2, lo, hi);
      } else {
        child = p1;
      }
      if (n > 1 && rng.uniform_real() < cfg.mutation_rate) {
        const std::size_t i = rng.uniform(n);
        const std::size_t j = rng.uniform(n);
        std::swap(child[i], child[j]);
      }
      next.push_back(std::move(child));
    }
    pop = std::move(next);
    fit = run.evaluate(pop);
    const std::size_t gi = argbest(fit);
    if (fit[gi] < best_fit) {
      best_fit = fit[gi];
      best = pop[gi];
    }
    log.push_back(best_fit);
  }

  if (!is_permutation_of_ids(best)) throw Error("ga: internal error, genome is not a permutation");
  return GaResult{first_fit_serve(topo, tm, best, run.candidates(), cfg.grid), best, best_fit, std::move(log)};
}

std::string ga_log_csv(const std::vector<int>& log) {
  std::string out = "generation,best_fitness\n";
  for (std::size_t g = 0; g < log.size(); ++g)
    out += std::to_string(g) + "," + std::to_string(log[g]) + "\n";
  return out;
}

}  // namespace eon
