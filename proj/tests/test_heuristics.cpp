#include "doctest.h"

#include <algorithm>

#include "eon/bench.hpp"
#include "eon/error.hpp"
#include "eon/exact.hpp"
#include "eon/heuristics.hpp"
#include "fixtures.hpp"

using namespace eon;

TEST_CASE("msf order") {
  auto tm = fixtures::demands({{0, 1, 1}, {0, 1, 3}, {0, 1, 2}});
  CHECK(msf_order(tm) == Ordering{1, 2, 0});
  auto ties = fixtures::demands({{0, 1, 2}, {1, 0, 4}, {0, 1, 2}, {1, 0, 4}});
  CHECK(msf_order(ties) == Ordering{1, 3, 0, 2});
}

TEST_CASE("msf single demand starts at slot 1 on its shortest path") {
  auto t = builtin_topology("cost239");
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto tm = generate_traffic(t, 1, 1, 4, seed);
    auto a = msf_solve(t, tm);
    const auto* r = a.route(0);
    REQUIRE(r);
    CHECK(r->channel.start == 1);
    CHECK(r->path == yen_k_shortest_paths(t, tm.demands[0].src, tm.demands[0].dst, 1)[0]);
    CHECK(used_slice_count(a) == tm.demands[0].slices);
  }
}

TEST_CASE("msf picks the path with the lowest start") {
  // Triangle: first demand blocks A->B at slots 1-2; a 2-slot A->B demand
  // then fits at 1 only via C.
  auto tri = fixtures::triangle();
  auto tm = fixtures::demands({{0, 1, 2}, {0, 1, 2}});
  auto a = msf_solve(tri, tm, MsfConfig{3, SpectrumGrid::rsa(10)});
  CHECK(a.route(0)->path.hops() == 1);
  CHECK(a.route(0)->channel.start == 1);
  CHECK(a.route(1)->path.hops() == 2);
  CHECK(a.route(1)->channel.start == 1);

  // With k = 1 the second demand stacks on the direct link.
  auto b = msf_solve(tri, tm, MsfConfig{1, SpectrumGrid::rsa(10)});
  CHECK(b.route(1)->channel.start == 3);
}

TEST_CASE("capacity exhausted reports the demand") {
  auto ch = fixtures::chain(2);
  auto tm = fixtures::demands({{0, 1, 3}, {0, 1, 2}});
  try {
    msf_solve(ch, tm, MsfConfig{3, SpectrumGrid::rsa(4)});
    FAIL("expected CapacityExhaustedError");
  } catch (const CapacityExhaustedError& e) {
    CHECK(e.demand_id() == 1);
  }
  CHECK_THROWS_AS(msf_solve(ch, tm, MsfConfig{0, SpectrumGrid::rsa(8)}), InvalidArgumentError);
}

TEST_CASE("first_fit_rwa examples") {
  auto ch = fixtures::chain(4);
  auto disjoint = fixtures::demands({{0, 1, 1}, {2, 3, 1}});
  auto a = first_fit_rwa(ch, disjoint, {0, 1}, 10, SpectrumGrid::rwa());
  CHECK(a.route(0)->channel.start == 1);
  CHECK(a.route(1)->channel.start == 1);

  auto shared = fixtures::demands({{0, 1, 1}, {0, 1, 1}});
  auto b = first_fit_rwa(ch, shared, {0, 1}, 10, SpectrumGrid::rwa());
  CHECK(b.route(0)->channel.start == 1);
  CHECK(b.route(1)->channel.start == 2);
  auto c = first_fit_rwa(ch, shared, {1, 0}, 10, SpectrumGrid::rwa());
  CHECK(c.route(1)->channel.start == 1);

  CHECK_THROWS_AS(first_fit_rwa(ch, fixtures::demands({{0, 1, 2}}), {0}, 10, SpectrumGrid::rwa()),
                  InvalidArgumentError);
  CHECK(first_fit_rwa(ch, shared, {0, 1}, 10, SpectrumGrid::rwa()) == b);
}

TEST_CASE("order crossover") {
  const Ordering a{0, 1, 2, 3, 4, 5, 6, 7, 8};
  const Ordering b{8, 2, 6, 7, 1, 5, 4, 0, 3};
  CHECK(order_crossover(a, b, 3, 6) == Ordering{2, 7, 1, 3, 4, 5, 6, 0, 8});
  CHECK(order_crossover(a, b, 0, 8) == a);
  CHECK(order_crossover(a, a, 2, 4) == a);
  auto c = order_crossover(b, a, 1, 1);
  auto sorted = c;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == a);
  CHECK(c[1] == b[1]);
}

TEST_CASE("ga config validation") {
  GaConfig c;
  CHECK_NOTHROW(c.validate());
  c.elitism = c.population;
  CHECK_THROWS_AS(c.validate(), InvalidArgumentError);
  c = GaConfig{};
  c.tournament_size = c.population + 1;
  CHECK_THROWS_AS(c.validate(), InvalidArgumentError);
  c = GaConfig{};
  c.crossover_rate = 1.5;
  CHECK_THROWS_AS(c.validate(), InvalidArgumentError);
}

TEST_CASE("degenerate ga equals first fit on the identity order") {
  auto t = builtin_topology("cost239");
  auto tm = to_rwa_demands(generate_traffic(t, 30, 1, 4, 9));
  GaConfig c;
  c.population = 1;
  c.generations = 0;
  c.elitism = 0;
  c.tournament_size = 1;
  auto r = ga_rwa_solve(t, tm, c);
  Ordering id(tm.size());
  for (int i = 0; i < tm.size(); ++i) id[i] = i;
  CHECK(r.assignment == first_fit_rwa(t, tm, id, c.k_paths, c.grid));
  CHECK(r.log.size() == 1);
}

TEST_CASE("ga determinism, thread invariance and monotone log") {
  auto t = builtin_topology("cost239");
  auto tm = to_rwa_demands(generate_traffic(t, 45, 1, 4, 2033));
  GaConfig c;
  c.generations = 40;
  c.seed = 3;
  auto r1 = ga_rwa_solve(t, tm, c);
  auto r2 = ga_rwa_solve(t, tm, c);
  c.threads = 4;
  auto r3 = ga_rwa_solve(t, tm, c);
  CHECK(r1.log == r2.log);
  CHECK(r1.log == r3.log);
  CHECK(r1.best_order == r3.best_order);
  CHECK(r1.assignment == r3.assignment);
  CHECK(r1.log.size() == 41);
  CHECK(std::is_sorted(r1.log.rbegin(), r1.log.rend()));
  CHECK(r1.best_fitness == r1.log.back());
  CHECK(used_slice_count(r1.assignment) == r1.best_fitness);
  CHECK(validate_assignment(t, tm, r1.assignment).ok());
  CHECK(ga_log_csv(r1.log).rfind("generation,best_fitness\n0,", 0) == 0);
  CHECK_THROWS_AS(ga_rwa_solve(t, generate_traffic(t, 4, 2, 2, 1), GaConfig{}), InvalidArgumentError);
}

TEST_CASE("heuristics against the exact solver on the six_node suite") {
  auto t = builtin_topology("six_node");
  const auto cfg = default_small_config();
  for (int i = 0; i < cfg.instances; ++i) {
    auto tm = generate_traffic(t, cfg.demands, cfg.slice_min, cfg.slice_max, cfg.base_seed + i);
    auto ex = solve_rsa_exact(t, tm, SpectrumGrid::rsa());
    REQUIRE(ex.status == SolveStatus::kOptimal);
    const int msf = used_slice_count(msf_solve(t, tm));
    CHECK(msf >= *ex.objective);
    CHECK(msf <= *ex.objective + 2);

    auto rwa = to_rwa_demands(tm);
    auto exw = solve_rwa_exact(t, rwa);
    REQUIRE(exw.status == SolveStatus::kOptimal);
    GaConfig g;
    g.seed = 1 + i;
    CHECK(ga_rwa_solve(t, rwa, g).best_fitness >= *exw.objective);
  }
}
