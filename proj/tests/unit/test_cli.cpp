#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "nodal");
  std::ostringstream out, err;
  const int code = nodal::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

struct TolEnv {
  explicit TolEnv(const char* v) { setenv("NODAL_TOL", v, 1); }
  ~TolEnv() { unsetenv("NODAL_TOL"); }
};

// theta_m, M^{(m)}_0, M^{(m)}_0 / sqrt(m) as printed in the published table.
const double kFigure3[25][3] = {
    {10.374, 1.6487, 1.6487},      {18.4277, 2.46075, 1.74001}, {26.4493, 3.06521, 1.7697},
    {34.4609, 3.56876, 1.78438},   {42.4682, 4.00957, 1.79313}, {50.4731, 4.40651, 1.79895},
    {58.4767, 4.77053, 1.80309},   {66.4795, 5.10867, 1.80619}, {74.4816, 5.42579, 1.8086},
    {82.4833, 5.72537, 1.81052},   {90.4848, 6.01003, 1.81209}, {98.486, 6.28181, 1.8134},
    {106.487, 6.5423, 1.81451},    {114.488, 6.79282, 1.81546}, {122.489, 7.03442, 1.81628},
    {130.489, 7.26799, 1.817},     {138.49, 7.49429, 1.81763},  {146.49, 7.71395, 1.81819},
    {154.491, 7.92752, 1.8187},    {162.491, 8.13549, 1.81915}, {170.492, 8.33828, 1.81956},
    {178.492, 8.53625, 1.81993},   {186.492, 8.72973, 1.82027}, {194.493, 8.91901, 1.82059},
    {202.493, 9.10436, 1.82087},
};

}  // namespace

TEST_CASE("constants --m 25 reproduces the published table") {
  const auto r = run({"constants", "--m", "25", "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 26);
  CHECK(rows[0][1] == "theta_k");
  CHECK(rows[0][2] == "M0_k");
  // Row k carries theta_k, while the table's M column at row m is M^{(m)}_0.
  for (int k = 1; k <= 25; ++k) {
    const auto& row = rows[static_cast<std::size_t>(k)];
    CHECK(std::stoi(row[0]) == k);
    CHECK(std::abs(std::stod(row[1]) - kFigure3[k - 1][0]) <= 5e-4 * kFigure3[k - 1][0]);
    CHECK(std::abs(std::stod(row[2]) / kFigure3[k - 1][1] - 1.0) <= 5e-5);
    CHECK(std::abs(std::stod(row[3]) / kFigure3[k - 1][2] - 1.0) <= 5e-5);
  }
}

TEST_CASE("output is byte-deterministic") {
  const auto a = run({"constants", "--m", "7", "--alpha", "1", "--format", "json"});
  const auto b = run({"constants", "--m", "7", "--alpha", "1", "--format", "json"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["m"] == 7);
  const auto c = run({"verify", "--m", "2", "--bc", "neumann", "--p", "20,40"});
  const auto d = run({"verify", "--m", "2", "--bc", "neumann", "--p", "20,40"});
  CHECK(c.out == d.out);
}

TEST_CASE("Neumann needs m >= 2") {
  const auto r = run({"solve", "--p", "2", "--alpha", "0", "--m", "1", "--bc", "neumann"});
  CHECK(r.code == 1);
  CHECK(r.out.empty());
  CHECK(r.err.find("m >= 2") != std::string::npos);
}

TEST_CASE("validation errors exit 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"constants", "--m", "3", "--bogus"}).code == 1);
  CHECK(run({"constants", "--m", "0"}).code == 1);
  CHECK(run({"constants", "--m", "3", "--format", "xml"}).code == 1);
  CHECK(run({"solve", "--p", "0.5", "--m", "1"}).code == 1);
  CHECK(run({"solve", "--p", "3", "--m", "1", "--alpha", "-1"}).code == 1);
  CHECK(run({"verify", "--m", "1", "--p", "100,50"}).code == 1);
  CHECK(run({"verify", "--m", "1", "--p", "50,abc"}).code == 1);
  CHECK(run({"bubble", "--i", "1", "--rmin", "3", "--rmax", "1"}).code == 1);
  CHECK(run({"sweep", "--config", "/nonexistent/sweep.cfg"}).code == 1);
  CHECK(run({"constants", "--m", "3", "--output", "/nonexistent/dir/out.csv"}).code == 1);
}

TEST_CASE("help exits 0") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("constants") != std::string::npos);
}

TEST_CASE("NODAL_TOL") {
  {
    TolEnv env("garbage");
    CHECK(run({"solve", "--p", "5", "--m", "1"}).code == 1);
  }
  {
    TolEnv env("1e-300");
    CHECK(run({"solve", "--p", "5", "--m", "1"}).code == 2);
  }
  {
    TolEnv env("1e-8");
    const auto r = run({"solve", "--p", "5", "--m", "2", "--format", "json"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["tol"].get<double>() == 1e-8);
  }
}

TEST_CASE("solve dump") {
  const auto r = run({"solve", "--p", "30", "--m", "2", "--bc", "plane", "--format", "json",
                      "--samples", "11"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  for (const char* key : {"p", "alpha", "bc", "m", "log_zeros", "log_crit", "crit_values",
                          "boundary_derivative", "energy_grad", "energy_pot"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["samples"]["u"].size() == 11);
  const auto c = run({"solve", "--p", "30", "--m", "2", "--samples", "6"});
  REQUIRE(c.code == 0);
  CHECK(csv(c.out).size() == 7);
}

TEST_CASE("verify CSV") {
  const auto r = run({"verify", "--m", "2", "--alpha", "0", "--bc", "dirichlet", "--p",
                      "50,100,200"});
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() > 1);
  CHECK(r.out.rfind("quantity,bc,m,alpha,i,p,computed,limit,abs_err\n", 0) == 0);
  // r_1, s_1, |u(s_0)|, |u(s_1)|, two zero slopes and the energy, at 3 exponents
  CHECK(rows.size() == 1 + 7 * 3);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    REQUIRE(rows[k].size() == 9);
    CHECK(rows[k][1] == "dirichlet");
    CHECK(std::abs(std::stod(rows[k][8]) - std::abs(std::stod(rows[k][6]) - std::stod(rows[k][7]))) <=
          1e-12 * std::max(1.0, std::stod(rows[k][7])));
  }
  const auto j = run({"verify", "--m", "1", "--p", "50,100", "--profiles", "--format", "json"});
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["reports"].size() == 5);
  CHECK(run({"verify", "--m", "2", "--bc", "plane", "--p", "50,100", "--profiles"}).code == 1);
}

TEST_CASE("bubble subcommand") {
  const auto r = run({"bubble", "--i", "1", "--alpha", "0", "--rmin", "0", "--rmax", "20",
                      "--n", "5"});
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0][0] == "r");
  CHECK(r.err.find("mass") != std::string::npos);
  const auto j = run({"bubble", "--i", "2", "--alpha", "1", "--n", "3", "--format", "json"});
  REQUIRE(j.code == 0);
  CHECK(nlohmann::json::parse(j.out)["split"].is_null());
}

TEST_CASE("sweep and --output") {
  const auto dir = std::filesystem::temp_directory_path() / "nodal_cli_test";
  std::filesystem::create_directories(dir);
  const auto cfg = dir / "sweep.cfg";
  {
    std::ofstream f(cfg);
    f << "p = 20,40\nm = 1..2\nalpha = 0\nbc = dirichlet\n";
  }
  const auto out_path = dir / "sweep.csv";
  const auto r = run({"sweep", "--config", cfg.string(), "--output", out_path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(out_path);
  std::stringstream ss;
  ss << f.rdbuf();
  const auto again = run({"sweep", "--config", cfg.string()});
  CHECK(ss.str() == again.out);
  CHECK(ss.str().rfind("quantity,bc,m,alpha,i,p,computed,limit,abs_err\n", 0) == 0);
  std::filesystem::remove_all(dir);
}
