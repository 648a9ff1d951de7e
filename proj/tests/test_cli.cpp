#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "eon/exact.hpp"
#include "eon/topology.hpp"
#include "eon/traffic.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("eonctl_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code;
  std::string out;
};

Run eonctl(const std::string& args) {
  const fs::path out = workdir() / "stdout.txt";
  const std::string cmd = "cd '" + workdir().string() + "' && '" EONCTL_PATH "' " + args + " > '" +
                          out.string() + "' 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

}  // namespace

TEST_CASE("gen writes a deterministic csv") {
  auto r = eonctl("gen --topology six_node --demands 8 --slices 1:4 --seed 7 -o t.csv");
  CHECK(r.code == 0);
  CHECK(r.out.find("8 demands") != std::string::npos);
  const std::string first = slurp(workdir() / "t.csv");
  int lines = 0;
  for (char c : first) lines += c == '\n';
  CHECK(lines == 9);
  CHECK(eonctl("gen --topology six_node --demands 8 --slices 1:4 --seed 7 -o t2.csv").code == 0);
  CHECK(slurp(workdir() / "t2.csv") == first);

  CHECK(eonctl("gen --topology six_node --demands 8 --slices 4:1 -o bad.csv").code == 2);
  CHECK(eonctl("gen --topology six_node --slices x").code == 2);
  CHECK(eonctl("gen --demands 3").code == 2);
  CHECK(eonctl("gen --topology missing.json -o x.csv").code == 1);
  CHECK(eonctl("").code == 2);
  CHECK(eonctl("--help").code == 0);
}

TEST_CASE("solve, validate and the exit contract") {
  REQUIRE(eonctl("gen --topology six_node --demands 8 --seed 11 -o s.csv").code == 0);
  auto ex = eonctl("solve --topology six_node --traffic s.csv --problem rsa --method exact "
                   "--time-limit 60 -o exact.json --outcome exact_out.json --json");
  CHECK(ex.code == 0);
  CHECK(ex.out.find("\"status\":\"Optimal\"") != std::string::npos);

  auto topo = eon::builtin_topology("six_node");
  auto tm = eon::load_traffic(slurp(workdir() / "s.csv"), topo);
  auto direct = eon::solve_rsa_exact(topo, tm, eon::SpectrumGrid::rsa());
  CHECK(ex.out.find("\"objective\":" + std::to_string(*direct.objective)) != std::string::npos);
  CHECK(slurp(workdir() / "exact_out.json").find("\"status\": \"Optimal\"") != std::string::npos);

  auto v = eonctl("validate --topology six_node --traffic s.csv --solution exact.json");
  CHECK(v.code == 0);
  CHECK(v.out.find("0 violations") != std::string::npos);

  for (const char* m : {"msf", "exact"}) {
    CHECK(eonctl(std::string("solve --topology six_node --traffic s.csv --problem rwa --method ") + m +
                 " -o w.json").code == 0);
    CHECK(eonctl("validate --topology six_node --traffic s.csv --problem rwa --solution w.json").code == 0);
  }
  // An RWA solution has the wrong widths for the RSA instance.
  CHECK(eonctl("validate --topology six_node --traffic s.csv --solution w.json").code == 3);

  CHECK(eonctl("solve --topology six_node --traffic s.csv --problem rsa --method ga").code == 2);
  CHECK(eonctl("solve --topology six_node --traffic s.csv --method nope").code == 2);
  CHECK(eonctl("solve --topology six_node --traffic nowhere.csv").code == 1);
  CHECK(eonctl("validate --topology six_node --traffic s.csv --solution nowhere.json").code == 1);
}

TEST_CASE("single demand msf objective equals its width") {
  {
    std::ofstream(workdir() / "one.csv") << "id,src,dst,slices,rate_gbps\n0,N1,N4,3,75\n";
  }
  auto r = eonctl("solve --topology six_node --traffic one.csv --problem rsa --method msf --json");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"objective\":3") != std::string::npos);
}

TEST_CASE("seeded ga outcome files are identical") {
  REQUIRE(eonctl("gen --topology cost239 --demands 20 --seed 5 -o g.csv").code == 0);
  CHECK(eonctl("solve --topology cost239 --traffic g.csv --problem rwa --method ga --seed 3 "
               "--generations 20 --outcome ga1.json -o ga1_sol.json --ga-log ga1.csv").code == 0);
  CHECK(eonctl("solve --topology cost239 --traffic g.csv --problem rwa --method ga --seed 3 "
               "--generations 20 --threads 3 --outcome ga2.json -o ga2_sol.json --ga-log ga2.csv").code == 0);
  CHECK(slurp(workdir() / "ga1.json") == slurp(workdir() / "ga2.json"));
  CHECK(slurp(workdir() / "ga1_sol.json") == slurp(workdir() / "ga2_sol.json"));
  CHECK(slurp(workdir() / "ga1.csv") == slurp(workdir() / "ga2.csv"));
}

TEST_CASE("emit-lp header reports channel variables") {
  {
    std::ofstream(workdir() / "lp.csv") << "id,src,dst,slices,rate_gbps\n0,N1,N2,2,50\n";
  }
  CHECK(eonctl("emit-lp --topology six_node --traffic lp.csv --slots 5 -o m.lp").code == 0);
  const auto lp = slurp(workdir() / "m.lp");
  CHECK(lp.find("demand 0: width 2, channel variables 4") != std::string::npos);
  CHECK(eonctl("emit-lp --topology six_node --traffic lp.csv --slots -3").code == 2);
}

TEST_CASE("bench writes csv and markdown") {
  {
    std::ofstream(workdir() / "tiny.json")
        << R"({"topology": "six_node", "instances": 2, "demands": 5, "base_seed": 9,
              "ga": {"generations": 10}})";
  }
  auto r = eonctl("bench --experiment small --config tiny.json --out-dir reports");
  CHECK(r.code == 0);
  const auto md = slurp(workdir() / "reports" / "small.md");
  CHECK(md.find("| Traffic Instance | Optimal RSA | Heuristic RSA | Optimal RWA | Heuristic RWA |") !=
        std::string::npos);
  const auto csv = slurp(workdir() / "reports" / "small.csv");
  CHECK(csv.rfind("instance,seed,", 0) == 0);
  CHECK(eonctl("bench --experiment bogus").code == 2);
  CHECK(eonctl("bench --experiment small --config nowhere.json").code == 1);
}
