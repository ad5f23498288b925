#include <doctest.h>

#include "hmf/errors.hpp"
#include "hmf/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace hmf;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run hmflab(const std::string& args) {
  std::string cmd = std::string(HMFLAB_EXE) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("hmflab_" + name + "_" + std::to_string(getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

} // namespace

TEST_CASE("config parser") {
  KeyValueConfig c = KeyValueConfig::parse("# comment\n T = 1e-3 \nname=planar # trailing\n\n n=12\n");
  CHECK(c.get_double("T", 0) == 1e-3);
  CHECK(c.get_string("name", "") == "planar");
  CHECK(c.get_int("n", 0) == 12);
  CHECK(c.get_double("missing", 7.5) == 7.5);
  CHECK_THROWS_AS(c.get_int("T", 0), DomainError);
  CHECK_THROWS_AS(KeyValueConfig::parse("novalue\n"), DomainError);
  CHECK_THROWS_AS(c.check_keys({"T", "n"}), DomainError);
  CHECK_THROWS_WITH_AS(c.check_required({"T", "beta", "r0"}), "missing required keys: beta, r0", DomainError);
  CHECK_THROWS_AS(KeyValueConfig::load("/nonexistent/cfg"), IoError);
}

TEST_CASE("csv formatting round trips doubles") {
  for (double x : {0.1, 1.0 / 3, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_double(x)) == x);
  CsvTable t{{"a", "b"}, {{1, 2}, {3, 4}}};
  CHECK(to_csv(t) == "a,b\n1,2\n3,4\n");
  t.rows.push_back({1});
  CHECK_THROWS_AS(to_csv(t), DomainError);
}

TEST_CASE("cli: identities pass, negative control fails, json report") {
  Run ok = hmflab("identities");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  Run bad = hmflab("identities --perturb 1");
  CHECK(bad.code == 2);
  CHECK(bad.out.find("FAIL") != std::string::npos);
  Run js = hmflab("identities --json");
  auto j = nlohmann::json::parse(js.out);
  CHECK(j["pass"] == true);
  CHECK(j["checks"].size() == 18);
}

TEST_CASE("cli: gamma table, single row, usage errors") {
  fs::path d = scratch("gamma");
  Run r = hmflab("--out " + d.string() + " gamma --tau-min 1e-6 --tau-max 1e4 --n 64");
  CHECK(r.code == 0);
  std::string csv = slurp(d / "gamma.csv");
  CHECK(csv.rfind("tau,gamma1,gamma2,flag\n", 0) == 0);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  double g1 = std::stod(line.substr(line.find(',') + 1));
  CHECK(std::abs(g1 - 1) < 1e-4);
  Run one = hmflab("--out " + d.string() + " gamma --tau-min 2 --tau-max 2 --n 1");
  CHECK(one.code == 0);
  std::string single = slurp(d / "gamma.csv");
  CHECK(std::count(single.begin(), single.end(), '\n') == 2);
  Run inv = hmflab("gamma --tau-min 10 --tau-max 1 --n 4");
  CHECK(inv.code == 1);
  Run miss = hmflab("gamma --tau-min 1");
  CHECK(miss.code == 1);
  CHECK(miss.out.find("tau_max") != std::string::npos);
  CHECK(miss.out.find("n") != std::string::npos);
  fs::remove_all(d);
}

TEST_CASE("cli: reduced is reproducible and in band") {
  fs::path a = scratch("red_a"), b = scratch("red_b");
  Run r1 = hmflab("--out " + a.string() + " --json reduced --set n_out=21");
  Run r2 = hmflab("--out " + b.string() + " reduced --set n_out=21");
  CHECK(r1.code == 0);
  CHECK(r2.code == 0);
  CHECK(slurp(a / "reduced.csv") == slurp(b / "reduced.csv"));
  auto j = nlohmann::json::parse(r1.out);
  double lo = j["ratio_band"][0], hi = j["ratio_band"][1];
  CHECK((hi - lo) / hi < 0.15);
  // 17 significant digits
  std::string csv = slurp(a / "reduced.csv");
  std::string row = csv.substr(csv.find('\n') + 1);
  std::string second = row.substr(row.find(',') + 1);
  second = second.substr(0, second.find(','));
  CHECK(second.find('.') != std::string::npos);
  CHECK(second.size() >= 18);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("cli: config file, unknown keys, i/o and validation exit codes") {
  fs::path d = scratch("cfg");
  {
    std::ofstream f(d / "run.cfg");
    f << "# short run\nn = 32\nlambda0 = 0.2\ndelta = 0.3\nt_end = 0.002\ndiag_every = 10\n";
  }
  Run r = hmflab("--config " + (d / "run.cfg").string() + " --out " + d.string() + " corotational");
  CHECK(r.code == 0);
  CHECK(slurp(d / "corotational.csv").rfind("t,max_grad,lambda_est,xi1_est,xi2_est,e_total,e_ball\n", 0) == 0);
  CHECK(fs::exists(d / "corotational_final.csv"));
  Run f = hmflab("--config " + (d / "run.cfg").string() + " --out " + d.string() + " flow --set check_energy=1");
  CHECK(f.code == 0);
  CHECK(f.out.find("initial degree") != std::string::npos);
  CHECK(hmflab("--set bogus=1 reduced").code == 1);
  CHECK(hmflab("--config /nonexistent/x.cfg reduced").code == 3);
  CHECK(hmflab("--set delta=0.6 corotational").code == 1);
  CHECK(hmflab("--set model=cubic corotational").code == 1);
  CHECK(hmflab("frobnicate").code == 1);
  Run n = hmflab("--out " + d.string() + " --json norms");
  CHECK(n.code == 0);
  CHECK(nlohmann::json::parse(n.out)["nu_a"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  fs::remove_all(d);
}
