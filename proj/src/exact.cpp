#include "eon/exact.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "eon/error.hpp"
#include "eon/heuristics.hpp"
#include "json.hpp"

namespace eon {

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "Optimal";
    case SolveStatus::kFeasibleBound: return "FeasibleBound";
    case SolveStatus::kInfeasible: return "Infeasible";
    case SolveStatus::kTimedOut: return "TimedOut";
  }
  return "Unknown";
}

int lower_bound(const Topology& topo, const TrafficMatrix& tm) {
  int bound = tm.max_slices();
  std::vector<long> out_load(topo.node_count(), 0), in_load(topo.node_count(), 0);
  for (const auto& d : tm.demands) {
    out_load[d.src] += d.slices;
    in_load[d.dst] += d.slices;
  }
  auto ceil_div = [](long a, long b) { return static_cast<int>((a + b - 1) / b); };
  for (int v = 0; v < topo.node_count(); ++v) {
    if (out_load[v] > 0 && topo.out_degree(v) > 0)
      bound = std::max(bound, ceil_div(out_load[v], topo.out_degree(v)));
    if (in_load[v] > 0 && topo.in_degree(v) > 0)
      bound = std::max(bound, ceil_div(in_load[v], topo.in_degree(v)));
  }
  return bound;
}

int load_bound(const Topology& topo, const TrafficMatrix& tm) {
  if (topo.link_count() == 0 || tm.demands.empty()) return 0;
  long total = 0;
  for (const auto& d : tm.demands) {
    auto hops = hop_distance(topo, d.src, d.dst);
    if (!hops) throw NoPathError("demand " + std::to_string(d.id) + " is disconnected");
    total += static_cast<long>(d.slices) * *hops;
  }
  return static_cast<int>((total + topo.link_count() - 1) / topo.link_count());
}

int cut_bound(const Topology& topo, const TrafficMatrix& tm) {
  const int n = topo.node_count();
  if (n < 2 || tm.demands.empty()) return 0;
  auto ceil_div = [](long a, long b) { return static_cast<int>((a + b - 1) / b); };
  int bound = 0;
  std::vector<char> inside(n, 0);
  auto eval = [&] {
    long out_links = 0, in_links = 0, out_load = 0, in_load = 0;
    for (const auto& l : topo.links()) {
      if (inside[l.src] && !inside[l.dst]) ++out_links;
      if (!inside[l.src] && inside[l.dst]) ++in_links;
    }
    for (const auto& d : tm.demands) {
      if (inside[d.src] && !inside[d.dst]) out_load += d.slices;
      if (!inside[d.src] && inside[d.dst]) in_load += d.slices;
    }
    // A loaded cut without links means disconnection, reported elsewhere.
    if (out_load > 0 && out_links > 0) bound = std::max(bound, ceil_div(out_load, out_links));
    if (in_load > 0 && in_links > 0) bound = std::max(bound, ceil_div(in_load, in_links));
  };
  if (n <= 20) {
    for (std::uint32_t mask = 1; mask + 1 < (std::uint32_t{1} << n); ++mask) {
      for (int v = 0; v < n; ++v) inside[v] = (mask >> v) & 1U;
      eval();
    }
  } else {
    for (int v = 0; v < n; ++v) {
      std::fill(inside.begin(), inside.end(), 0);
      inside[v] = 1;
      eval();
    }
  }
  return bound;
}

namespace {

using Clock = std::chrono::steady_clock;
using Word = std::uint64_t;

// Small fixed-width bitset helpers over `words` consecutive words. Bit i of
// the set stands for slot i + 1.
struct Bits {
  int words;

  void clear(Word* a) const { std::fill(a, a + words, Word{0}); }
  void copy(Word* dst, const Word* src) const { std::copy(src, src + words, dst); }
  void or_into(Word* dst, const Word* src) const {
    for (int w = 0; w < words; ++w) dst[w] |= src[w];
  }
  // Low `n` bits set.
  void prefix(Word* a, int n) const {
    for (int w = 0; w < words; ++w) {
      const int lo = w * 64;
      if (n >= lo + 64)
        a[w] = ~Word{0};
      else if (n <= lo)
        a[w] = 0;
      else
        a[w] = (Word{1} << (n - lo)) - 1;
    }
  }
  // a &= (b >> k)
  void and_shifted(Word* a, const Word* b, int k) const {
    const int ws = k / 64, bs = k % 64;
    for (int w = 0; w < words; ++w) {
      Word v = 0;
      if (w + ws < words) {
        v = b[w + ws] >> bs;
        if (bs && w + ws + 1 < words) v |= b[w + ws + 1] << (64 - bs);
      }
      a[w] &= v;
    }
  }
  bool range_clear(const Word* a, int start, int width) const {
    for (int i = start - 1; i < start - 1 + width; ++i)
      if ((a[i / 64] >> (i % 64)) & 1U) return false;
    return true;
  }
  void set_range(Word* a, int start, int width, bool on) const {
    for (int i = start - 1; i < start - 1 + width; ++i) {
      const Word m = Word{1} << (i % 64);
      if (on)
        a[i / 64] |= m;
      else
        a[i / 64] &= ~m;
    }
  }
  int count_below(const Word* a, int limit) const {
    int total = 0;
    for (int w = 0; w < words; ++w) {
      const int lo = w * 64;
      if (limit <= lo) break;
      Word v = a[w];
      if (limit < lo + 64) v &= (Word{1} << (limit - lo)) - 1;
      total += std::popcount(v);
    }
    return total;
  }
};

struct DemandPlan {
  int id = 0;
  int width = 1;
  NodeIndex src = 0, dst = 0;
  int min_hops = 0;
  std::vector<Path> paths;
  int twin_prev = -1;  // depth of the previous identical demand
};

struct Choice {
  int start = 0;
  int path = -1;
};

class BranchAndBound {
 public:
  BranchAndBound(const Topology& topo, const TrafficMatrix& tm, const SpectrumGrid& grid,
                 const SolverLimits& limits, const SpectrumAssignment* hint)
      : topo_(topo), tm_(tm), grid_(grid), limits_(limits), hint_(hint), bits_{(grid.slot_count + 63) / 64} {}

  SolveOutcome run() {
    started_ = Clock::now();
    SolveOutcome out;
    validate_traffic(tm_, topo_);
    if (grid_.slot_count < 1) throw InvalidArgumentError("grid: slot_count must be >= 1");

    if (tm_.demands.empty()) {
      out.status = SolveStatus::kOptimal;
      out.objective = 0;
      out.lower_bound = 0;
      out.solution = SpectrumAssignment(grid_, topo_.link_count());
      return finish(out);
    }
    for (const auto& d : tm_.demands) {
      if (!hop_distance(topo_, d.src, d.dst)) {
        out.status = SolveStatus::kInfeasible;
        out.lower_bound = lower_bound(topo_, tm_);
        return finish(out);
      }
    }
    root_bound_ = std::max({lower_bound(topo_, tm_), load_bound(topo_, tm_), cut_bound(topo_, tm_)});
    out.lower_bound = root_bound_;
    if (root_bound_ > grid_.slot_count) {
      out.status = SolveStatus::kInfeasible;
      return finish(out);
    }

    plan();
    out.stats.path_space = path_space_;
    out.stats.truncated = truncated_;

    try {
      auto warm = compact_spectrum(msf_solve(topo_, tm_, MsfConfig{3, grid_}));
      incumbent_value_ = used_slice_count(warm);
      incumbent_ = std::move(warm);
    } catch (const CapacityExhaustedError&) {
    }
    if (hint_) {
      auto warm = compact_spectrum(*hint_);
      const int value = used_slice_count(warm);
      if (!incumbent_ || value < *incumbent_value_) {
        incumbent_value_ = value;
        incumbent_ = std::move(warm);
      }
    }

    target_ = incumbent_ ? *incumbent_value_ - 1 : grid_.slot_count;
    if (!incumbent_ || *incumbent_value_ > root_bound_) {
      occ_.assign(static_cast<std::size_t>(topo_.link_count()) * bits_.words, 0);
      rem_out_.assign(topo_.node_count(), 0);
      rem_in_.assign(topo_.node_count(), 0);
      rem_load_ = 0;
      for (const auto& d : plans_) {
        rem_out_[d.src] += d.width;
        rem_in_[d.dst] += d.width;
        rem_load_ += static_cast<long>(d.width) * d.min_hops;
      }
      choices_.assign(plans_.size(), Choice{});
      witness_.assign(plans_.size(), Choice{});
      placed_.assign(plans_.size(), 0);
      scratch_a_.assign(bits_.words, 0);
      scratch_b_.assign(bits_.words, 0);
      search(0);
    }

    out.stats.nodes = nodes_;
    out.stats.limit_hit = aborted_;
    const bool proven_by_bound = incumbent_ && *incumbent_value_ <= root_bound_;
    const bool exhausted = !aborted_;
    if (incumbent_) {
      out.objective = incumbent_value_;
      out.solution = incumbent_;
      if (proven_by_bound || (exhausted && !truncated_)) {
        out.status = SolveStatus::kOptimal;
        out.lower_bound = *incumbent_value_;
      } else {
        out.status = SolveStatus::kFeasibleBound;
        out.lower_bound = root_bound_;
      }
    } else {
      out.status = exhausted && !truncated_ ? SolveStatus::kInfeasible : SolveStatus::kTimedOut;
      out.lower_bound = root_bound_;
    }
    return finish(out);
  }

 private:
  SolveOutcome& finish(SolveOutcome& out) {
    out.stats.wall_time_s = std::chrono::duration<double>(Clock::now() - started_).count();
    return out;
  }

  void plan() {
    for (int id : msf_order(tm_)) {
      const Demand& d = tm_.demands[id];
      DemandPlan p;
      p.id = id;
      p.width = d.slices;
      p.src = d.src;
      p.dst = d.dst;
      p.min_hops = *hop_distance(topo_, d.src, d.dst);
      PathSet ps = enumerate_simple_paths(topo_, d.src, d.dst, limits_.path_cap);
      truncated_ = truncated_ || ps.truncated;
      path_space_ += ps.paths.size();
      p.paths = std::move(ps.paths);
      for (int k = static_cast<int>(plans_.size()) - 1; k >= 0; --k) {
        const auto& q = plans_[k];
        if (q.src == p.src && q.dst == p.dst && q.width == p.width) {
          p.twin_prev = k;
          break;
        }
      }
      plans_.push_back(std::move(p));
    }
  }

  Word* link_words(LinkId e) { return occ_.data() + static_cast<std::size_t>(e) * bits_.words; }

  bool path_block_free(const Path& p, int start, int width) {
    for (LinkId e : p.links)
      if (!bits_.range_clear(link_words(e), start, width)) return false;
    return true;
  }

  void place(const Path& p, int start, int width, bool on) {
    for (LinkId e : p.links) bits_.set_range(link_words(e), start, width, on);
  }

  // Feasible starts of `width` on path p within 1..target_, as a bitset.
  void feasible_starts(const Path& p, int width, Word* out, Word* scratch) {
    bits_.clear(scratch);
    for (LinkId e : p.links) bits_.or_into(scratch, link_words(e));
    bits_.prefix(out, target_);
    for (int w = 0; w < bits_.words; ++w) out[w] &= ~scratch[w];
    Word* free_mask = scratch;
    bits_.copy(free_mask, out);
    for (int k = 1; k < width; ++k) bits_.and_shifted(out, free_mask, k);
  }

  bool limits_hit() {
    if (aborted_) return true;
    if (nodes_ >= limits_.node_limit) aborted_ = true;
    if ((nodes_ & 255) == 0 &&
        std::chrono::duration<double>(Clock::now() - started_).count() > limits_.time_limit_s)
      aborted_ = true;
    return aborted_;
  }

  bool capacity_ok() {
    const int T = target_;
    long free_total = 0;
    std::vector<long>& out_free = scratch_out_;
    std::vector<long>& in_free = scratch_in_;
    out_free.assign(topo_.node_count(), 0);
    in_free.assign(topo_.node_count(), 0);
    for (const auto& l : topo_.links()) {
      const long f = T - bits_.count_below(link_words(l.id), T);
      free_total += f;
      out_free[l.src] += f;
      in_free[l.dst] += f;
    }
    if (free_total < rem_load_) return false;
    for (int v = 0; v < topo_.node_count(); ++v)
      if (out_free[v] < rem_out_[v] || in_free[v] < rem_in_[v]) return false;
    return true;
  }

  bool forward_check() {
    std::vector<Word>& scratch = scratch_a_;
    std::vector<Word>& starts = scratch_b_;
    for (std::size_t j = 0; j < plans_.size(); ++j) {
      if (placed_[j]) continue;
      const DemandPlan& d = plans_[j];
      Choice& w = witness_[j];
      if (w.path >= 0 && w.start + d.width - 1 <= target_ &&
          path_block_free(d.paths[w.path], w.start, d.width))
        continue;
      w.path = -1;
      for (std::size_t p = 0; p < d.paths.size() && w.path < 0; ++p) {
        feasible_starts(d.paths[p], d.width, starts.data(), scratch.data());
        for (int i = 0; i < bits_.words; ++i) {
          if (starts[i]) {
            w.start = i * 64 + std::countr_zero(starts[i]) + 1;
            w.path = static_cast<int>(p);
            break;
          }
        }
      }
      if (w.path < 0) return false;
    }
    return true;
  }

  void record_solution() {
    SpectrumAssignment a(grid_, topo_.link_count());
    for (std::size_t k = 0; k < plans_.size(); ++k)
      a.assign(plans_[k].id, plans_[k].paths[choices_[k].path], Channel{choices_[k].start, plans_[k].width});
    a = compact_spectrum(a);
    const int value = used_slice_count(a);
    if (!incumbent_value_ || value < *incumbent_value_) {
      incumbent_value_ = value;
      incumbent_ = std::move(a);
      target_ = value - 1;
      if (value <= root_bound_) done_ = true;
    }
  }

  // Feasible (path, start) count for plan j, giving up once above `limit`.
  long count_options(std::size_t j, long limit) {
    const DemandPlan& d = plans_[j];
    std::vector<Word>& scratch = scratch_a_;
    std::vector<Word>& starts = scratch_b_;
    long count = 0;
    for (const Path& p : d.paths) {
      feasible_starts(p, d.width, starts.data(), scratch.data());
      for (Word w : starts) count += std::popcount(w);
      if (count > limit) break;
    }
    return count;
  }

  // Widest unplaced demands go first; within that tier, the one with the
  // fewest options. An identical demand waits for its predecessor.
  std::optional<std::size_t> select_demand() {
    int tier = 0;
    for (std::size_t j = 0; j < plans_.size(); ++j)
      if (!placed_[j]) tier = std::max(tier, plans_[j].width);
    std::optional<std::size_t> pick;
    long best = std::numeric_limits<long>::max();
    for (std::size_t j = 0; j < plans_.size(); ++j) {
      const DemandPlan& d = plans_[j];
      if (placed_[j] || d.width != tier) continue;
      if (d.twin_prev >= 0 && !placed_[d.twin_prev]) continue;
      const long c = count_options(j, best - 1);
      if (c < best) {
        best = c;
        pick = j;
        if (c <= 1) break;
      }
    }
    return pick;
  }

  void search(std::size_t depth) {
    if (done_ || aborted_) return;
    if (depth == plans_.size()) {
      record_solution();
      return;
    }
    const auto picked = select_demand();
    if (!picked) return;
    const std::size_t j = *picked;
    const DemandPlan& d = plans_[j];

    // Candidate (start, path) pairs, start-major.
    std::vector<Word> scratch(bits_.words), starts(bits_.words);
    std::vector<Choice> options;
    for (std::size_t p = 0; p < d.paths.size(); ++p) {
      feasible_starts(d.paths[p], d.width, starts.data(), scratch.data());
      for (int i = 0; i < bits_.words; ++i) {
        Word v = starts[i];
        while (v) {
          options.push_back(Choice{i * 64 + std::countr_zero(v) + 1, static_cast<int>(p)});
          v &= v - 1;
        }
      }
    }
    if (options.empty()) return;
    std::stable_sort(options.begin(), options.end(),
                     [](const Choice& a, const Choice& b) { return a.start < b.start; });

    const Choice twin = d.twin_prev >= 0 ? choices_[d.twin_prev] : Choice{0, -1};
    placed_[j] = 1;
    rem_out_[d.src] -= d.width;
    rem_in_[d.dst] -= d.width;
    rem_load_ -= static_cast<long>(d.width) * d.min_hops;

    for (const Choice& c : options) {
      if (done_ || aborted_) break;
      if (c.start + d.width - 1 > target_) break;
      // Mirror image of any solution inside 1..T is also inside 1..T.
      if (depth == 0 && 2 * c.start > target_ - d.width + 2) break;
      if (twin.path >= 0 && (c.start < twin.start || (c.start == twin.start && c.path <= twin.path)))
        continue;
      ++nodes_;
      if (limits_hit()) break;

      const Path& p = d.paths[c.path];
      place(p, c.start, d.width, true);
      choices_[j] = c;
      if (capacity_ok() && forward_check()) search(depth + 1);
      place(p, c.start, d.width, false);
    }

    placed_[j] = 0;
    choices_[j] = Choice{};
    rem_out_[d.src] += d.width;
    rem_in_[d.dst] += d.width;
    rem_load_ += static_cast<long>(d.width) * d.min_hops;
  }

  const Topology& topo_;
  const TrafficMatrix& tm_;
  SpectrumGrid grid_;
  SolverLimits limits_;
  const SpectrumAssignment* hint_;
  Bits bits_;
  Clock::time_point started_;

  std::vector<DemandPlan> plans_;
  std::size_t path_space_ = 0;
  bool truncated_ = false;
  int root_bound_ = 0;

  std::optional<SpectrumAssignment> incumbent_;
  std::optional<int> incumbent_value_;
  int target_ = 0;

  std::vector<Word> occ_;
  std::vector<long> rem_out_, rem_in_, scratch_out_, scratch_in_;
  long rem_load_ = 0;
  std::vector<Choice> choices_, witness_;
  std::vector<char> placed_;
  std::vector<Word> scratch_a_, scratch_b_;
  std::int64_t nodes_ = 0;
  bool aborted_ = false;
  bool done_ = false;
};

}  // namespace

SolveOutcome solve_rsa_exact(const Topology& topo, const TrafficMatrix& tm, const SpectrumGrid& grid,
                             const SolverLimits& limits, const SpectrumAssignment* warm_start) {
  if (limits.path_cap < 1 || limits.node_limit < 1 || !(limits.time_limit_s > 0))
    throw InvalidArgumentError("solver limits must be positive");
  if (warm_start) {
    if (warm_start->grid().slot_count != grid.slot_count)
      throw InvalidArgumentError("warm start: grid mismatch");
    validate_traffic(tm, topo);
    if (!validate_assignment(topo, tm, *warm_start).ok())
      throw InvalidArgumentError("warm start: assignment is not valid for this instance");
  }
  return BranchAndBound(topo, tm, grid, limits, warm_start).run();
}

SolveOutcome solve_rwa_exact(const Topology& topo, const TrafficMatrix& tm, const SolverLimits& limits,
                             const SpectrumGrid& grid, const SpectrumAssignment* warm_start) {
  return solve_rsa_exact(topo, to_rwa_demands(tm), grid, limits, warm_start);
}

namespace {

// Plain recursive enumeration, deliberately independent of the path
// services in topology.cpp.
void all_simple_paths(const Topology& topo, NodeIndex at, NodeIndex dst, std::vector<char>& on_path,
                      std::vector<LinkId>& stack, std::vector<std::vector<LinkId>>& out) {
  if (at == dst) {
    out.push_back(stack);
    return;
  }
  for (const auto& l : topo.links()) {
    if (l.src != at || on_path[l.dst]) continue;
    on_path[l.dst] = 1;
    stack.push_back(l.id);
    all_simple_paths(topo, l.dst, dst, on_path, stack, out);
    stack.pop_back();
    on_path[l.dst] = 0;
  }
}

struct Oracle {
  const TrafficMatrix& tm;
  int slots;
  std::vector<std::vector<std::vector<LinkId>>> paths;
  std::vector<std::vector<char>> busy;  // [link][slot]
  std::vector<int> slot_refs;           // links using each slot
  int distinct = 0;
  std::optional<int> best;

  void go(std::size_t k) {
    if (k == tm.demands.size()) {
      if (!best || distinct < *best) best = distinct;
      return;
    }
    const int width = tm.demands[k].slices;
    for (const auto& links : paths[k]) {
      for (int start = 1; start + width - 1 <= slots; ++start) {
        bool clash = false;
        for (LinkId e : links)
          for (int s = start; s < start + width && !clash; ++s) clash = busy[e][s];
        if (clash) continue;
        for (LinkId e : links)
          for (int s = start; s < start + width; ++s) {
            busy[e][s] = 1;
            if (slot_refs[s]++ == 0) ++distinct;
          }
        go(k + 1);
        for (LinkId e : links)
          for (int s = start; s < start + width; ++s) {
            busy[e][s] = 0;
            if (--slot_refs[s] == 0) --distinct;
          }
      }
    }
  }
};

}  // namespace

std::optional<int> brute_force_oracle(const Topology& topo, const TrafficMatrix& tm, const SpectrumGrid& grid,
                                      double cap) {
  Oracle o{tm, grid.slot_count, {}, {}, {}, 0, std::nullopt};
  double combos = 1.0;
  for (const auto& d : tm.demands) {
    std::vector<char> on_path(topo.node_count(), 0);
    on_path[d.src] = 1;
    std::vector<LinkId> stack;
    std::vector<std::vector<LinkId>> ps;
    all_simple_paths(topo, d.src, d.dst, on_path, stack, ps);
    combos *= static_cast<double>(ps.size()) * std::max(0, grid.slot_count - d.slices + 1);
    o.paths.push_back(std::move(ps));
  }
  if (combos > cap)
    throw TooLargeError("oracle: " + std::to_string(combos) + " combinations exceed the cap");
  o.busy.assign(topo.link_count(), std::vector<char>(grid.slot_count + 1, 0));
  o.slot_refs.assign(grid.slot_count + 1, 0);
  o.go(0);
  return o.best;
}

std::string emit_lp(const Topology& topo, const TrafficMatrix& tm, const SpectrumGrid& grid) {
  const int S = grid.slot_count;
  const int E = topo.link_count();
  auto x = [](int d, int e, int c) {
    return "x_d" + std::to_string(d) + "_e" + std::to_string(e) + "_c" + std::to_string(c);
  };
  auto alpha = [](int d, int c) { return "alpha_d" + std::to_string(d) + "_c" + std::to_string(c); };
  auto gamma = [](int e, int s) { return "gamma_e" + std::to_string(e) + "_s" + std::to_string(s); };
  auto delta = [](int s) { return "delta_s" + std::to_string(s); };
  auto channels = [&](const Demand& d) { return std::max(0, S - d.slices + 1); };

  std::ostringstream body;
  std::vector<std::string> binaries;
  long n_x = 0, n_alpha = 0, n_rows = 0;

  // Wraps long sums; LP readers limit line length.
  auto write_row = [&](const std::string& name, const std::vector<std::string>& terms, const std::string& rhs) {
    body << " " << name << ":";
    int on_line = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string& t = terms[i];
      const bool neg = t[0] == '-';
      body << (i == 0 ? (neg ? " - " : " ") : (neg ? " - " : " + ")) << (neg ? t.substr(1) : t);
      if (++on_line == 8 && i + 1 < terms.size()) {
        body << "\n  ";
        on_line = 0;
      }
    }
    body << " " << rhs << "\n";
    ++n_rows;
  };

  body << "Minimize\n";
  {
    std::vector<std::string> terms;
    for (int s = 1; s <= S; ++s) terms.push_back(delta(s));
    body << " obj:";
    for (std::size_t i = 0; i < terms.size(); ++i) {
      body << (i == 0 ? " " : " + ") << terms[i];
      if ((i + 1) % 8 == 0 && i + 1 < terms.size()) body << "\n ";
    }
    body << "\n";
  }
  body << "Subject To\n";

  for (const auto& d : tm.demands) {
    const int nc = channels(d);
    std::vector<std::string> terms;
    for (int c = 1; c <= nc; ++c) terms.push_back(alpha(d.id, c));
    if (terms.empty()) {
      // Wider than the grid: no channel exists, state infeasibility.
      write_row("choice_d" + std::to_string(d.id), {delta(1)}, ">= 2");
    } else {
      write_row("choice_d" + std::to_string(d.id), terms, "= 1");
    }
  }

  for (const auto& d : tm.demands) {
    for (int c = 1; c <= channels(d); ++c) {
      for (int v = 0; v < topo.node_count(); ++v) {
        std::vector<std::string> terms;
        for (LinkId e : topo.out_links(v)) terms.push_back(x(d.id, e, c));
        for (LinkId e : topo.in_links(v)) terms.push_back("-" + x(d.id, e, c));
        if (v == d.src) terms.push_back("-" + alpha(d.id, c));
        if (v == d.dst) terms.push_back(alpha(d.id, c));
        if (terms.empty()) continue;
        write_row("flow_d" + std::to_string(d.id) + "_c" + std::to_string(c) + "_v" + std::to_string(v), terms,
                  "= 0");
      }
    }
  }

  for (int e = 0; e < E; ++e) {
    for (int s = 1; s <= S; ++s) {
      std::vector<std::string> terms;
      for (const auto& d : tm.demands)
        for (int c = std::max(1, s - d.slices + 1); c <= std::min(s, channels(d)); ++c) terms.push_back(x(d.id, e, c));
      terms.push_back("-" + gamma(e, s));
      write_row("slot_e" + std::to_string(e) + "_s" + std::to_string(s), terms, "= 0");
    }
  }

  for (int s = 1; s <= S; ++s) {
    std::vector<std::string> terms;
    for (int e = 0; e < E; ++e) terms.push_back(gamma(e, s));
    terms.push_back("-" + std::to_string(E) + " " + delta(s));
    write_row("net_s" + std::to_string(s), terms, "<= 0");
  }

  body << "Binary\n";
  auto bin = [&](const std::string& v) { body << " " << v << "\n"; };
  for (const auto& d : tm.demands)
    for (int c = 1; c <= channels(d); ++c) {
      for (int e = 0; e < E; ++e) {
        bin(x(d.id, e, c));
        ++n_x;
      }
      bin(alpha(d.id, c));
      ++n_alpha;
    }
  for (int e = 0; e < E; ++e)
    for (int s = 1; s <= S; ++s) bin(gamma(e, s));
  for (int s = 1; s <= S; ++s) bin(delta(s));
  body << "End\n";

  const long n_gamma = static_cast<long>(E) * S;
  std::ostringstream head;
  head << "\\ RSA arc-channel model for '" << topo.name() << "'\n";
  head << "\\ nodes " << topo.node_count() << ", links " << E << ", demands " << tm.size() << ", slots " << S
       << "\n";
  head << "\\ variables " << (n_x + n_alpha + n_gamma + S) << ": x " << n_x << ", alpha " << n_alpha << ", gamma "
       << n_gamma << ", delta " << S << "\n";
  head << "\\ constraints " << n_rows << "\n";
  for (const auto& d : tm.demands)
    head << "\\ demand " << d.id << ": width " << d.slices << ", channel variables " << channels(d) << "\n";
  return head.str() + body.str();
}

std::string save_outcome(const SolveOutcome& o) {
  nlohmann::json doc;
  doc["status"] = std::string(to_string(o.status));
  doc["objective"] = o.objective ? nlohmann::json(*o.objective) : nlohmann::json(nullptr);
  doc["lower_bound"] = o.lower_bound;
  doc["stats"] = {{"nodes", o.stats.nodes},
                  {"wall_time_s", o.stats.wall_time_s},
                  {"path_space", o.stats.path_space},
                  {"truncated", o.stats.truncated},
                  {"limit_hit", o.stats.limit_hit}};
  if (o.solution) doc["fitness"] = fitness(*o.solution);
  return doc.dump(2) + "\n";
}

}  // namespace eon
