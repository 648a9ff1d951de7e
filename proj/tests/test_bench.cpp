#include "doctest.h"

#include <sstream>

#include "eon/bench.hpp"
#include "eon/error.hpp"

using namespace eon;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  FAIL("missing column " << name);
  return 0;
}

ExperimentConfig quick_small(int instances) {
  auto c = default_small_config();
  c.instances = instances;
  c.ga.generations = 30;
  return c;
}

}  // namespace

TEST_CASE("gap, bandwidth and saving arithmetic") {
  CHECK(gap_percent(4, 5) == doctest::Approx(25.0));
  CHECK(gap_percent(4, 4) == doctest::Approx(0.0));
  CHECK(gap_percent(5, 8) == doctest::Approx(60.0));
  CHECK_THROWS_AS(gap_percent(5, 4), InvalidArgumentError);
  CHECK_THROWS_AS(gap_percent(0, 4), InvalidArgumentError);

  CHECK(bandwidth_ghz(4, SpectrumGrid::rsa()) == doctest::Approx(50.0));
  CHECK(bandwidth_ghz(1, SpectrumGrid::rwa()) == doctest::Approx(50.0));
  CHECK(bandwidth_ghz(0, SpectrumGrid::rwa()) == 0.0);

  CHECK(spectral_saving_percent(50, 50) == doctest::Approx(0.0));
  CHECK(spectral_saving_percent(62.5, 50) == doctest::Approx(-25.0));
  CHECK(spectral_saving_percent(50, 100) == doctest::Approx(50.0));
}

TEST_CASE("ratio") {
  CHECK(Ratio::make(6, 8) == Ratio{3, 4});
  CHECK(Ratio::make(3, -6) == Ratio{-1, 2});
  CHECK(Ratio::make(0, 5) == Ratio{0, 1});
  CHECK((Ratio{1, 2} - Ratio{1, 3}) == Ratio{1, 6});
  CHECK(Ratio{-25, 1}.str() == "-25");
  CHECK(Ratio{100, 3}.str() == "100/3");
  CHECK_THROWS_AS(Ratio::make(1, 0), InvalidArgumentError);
}

TEST_CASE("experiment config json") {
  for (const auto& c : {default_small_config(), default_audit_config()}) {
    auto back = load_experiment_config(save_experiment_config(c));
    CHECK(save_experiment_config(back) == save_experiment_config(c));
    CHECK(back.base_seed == c.base_seed);
    CHECK(back.limits.node_limit == c.limits.node_limit);
  }
  auto partial = load_experiment_config(R"({"topology": "six_node", "instances": 3, "base_seed": 5})");
  CHECK(partial.instances == 3);
  CHECK(partial.base_seed == 5);
  CHECK(partial.demands == 8);
  CHECK_THROWS(load_experiment_config(R"({"instances": 0})"));
  CHECK_THROWS(load_experiment_config("[1,"));
}

TEST_CASE("one demand, one instance") {
  auto c = quick_small(1);
  c.demands = 1;
  c.slice_min = c.slice_max = 3;
  auto r = run_small_scale(c);
  REQUIRE(r.rows.size() == 1);
  const auto& row = r.rows[0];
  CHECK(row.error.empty());
  CHECK(row.rsa.exact == 3);
  CHECK(row.rsa.heuristic == 3);
  CHECK(row.rwa.exact == 1);
  CHECK(row.rwa.heuristic == 1);
  // 37.5 GHz vs 50 GHz
  CHECK(row.heuristic_saving == Ratio{25, 1});
  CHECK(row.distortion == Ratio{0, 1});
  CHECK(r.invariant_violations.empty());
}

TEST_CASE("small-scale report shape and exact savings") {
  auto r = run_small_scale(quick_small(10));
  REQUIRE(r.rows.size() == 10);
  CHECK(r.invariant_violations.empty());
  for (const auto& row : r.rows) {
    CHECK(row.error.empty());
    CHECK(row.rsa.proven());
    CHECK(row.rwa.proven());
    CHECK(row.rsa.heuristic >= *row.rsa.exact);
    CHECK(row.rwa.heuristic >= *row.rwa.exact);
  }

  const auto md = r.markdown();
  CHECK(md.find("| Traffic Instance | Optimal RSA | Heuristic RSA | Optimal RWA | Heuristic RWA |") !=
        std::string::npos);

  auto rows = parse_csv(r.csv());
  REQUIRE(rows.size() == 11);
  const auto& h = rows[0];
  CHECK(h.size() == 36);
  const auto msf = column(h, "msf_used"), ga = column(h, "ga_used");
  const auto orsa = column(h, "rsa_exact"), orwa = column(h, "rwa_exact");
  const auto hs = column(h, "heuristic_saving_exact"), os = column(h, "optimal_saving_exact");
  const auto dist = column(h, "distortion_exact");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    REQUIRE(row.size() == 36);
    // rsa slots are a quarter of a wavelength
    auto saving = [](int slices, int waves) { return Ratio::make(100L * (4 * waves - slices), 4L * waves); };
    const Ratio heur = saving(std::stoi(row[msf]), std::stoi(row[ga]));
    const Ratio opt = saving(std::stoi(row[orsa]), std::stoi(row[orwa]));
    CHECK(row[hs] == heur.str());
    CHECK(row[os] == opt.str());
    CHECK(row[dist] == (heur - opt).str());
  }
}

TEST_CASE("audit on the small config reproduces the small-scale numbers") {
  auto c = quick_small(3);
  auto small = run_small_scale(c);
  auto audit = run_extrapolation_audit(c);
  REQUIRE(small.rows.size() == audit.rows.size());
  for (std::size_t i = 0; i < small.rows.size(); ++i) {
    CHECK(small.rows[i].rsa.exact == audit.rows[i].rsa.exact);
    CHECK(small.rows[i].rsa.heuristic == audit.rows[i].rsa.heuristic);
    CHECK(small.rows[i].rwa.exact == audit.rows[i].rwa.exact);
    CHECK(small.rows[i].rwa.heuristic == audit.rows[i].rwa.heuristic);
  }
  CHECK(small.csv() == audit.csv());
}

TEST_CASE("thread count does not change reports") {
  auto c = quick_small(4);
  auto one = run_comparison_distortion(c);
  c.threads = 3;
  c.ga.threads = 2;
  auto three = run_comparison_distortion(c);
  CHECK(one.csv() == three.csv());
  CHECK(one.markdown() == three.markdown());
}

TEST_CASE("fitness gap metric") {
  auto c = quick_small(2);
  c.gap_metric = GapMetric::kFitness;
  auto r = run_small_scale(c);
  for (const auto& row : r.rows) CHECK(row.rsa.heuristic == row.rsa.heuristic_fitness);
}

TEST_CASE("failing instance is reported and the rest continue") {
  auto c = quick_small(2);
  c.rsa_slots = 2;  // too narrow for 3- and 4-slot demands
  auto r = run_small_scale(c);
  REQUIRE(r.rows.size() == 2);
  for (const auto& row : r.rows) CHECK_FALSE(row.error.empty());
  auto rows = parse_csv(r.csv());
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].size() == 36);
}
