// End-to-end tests of the command line tool: record shape, pinned values,
// exit codes, and byte-level determinism of reruns.
#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

struct CliResult {
  int status = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  std::string capture = "/tmp/triform_cli_capture_" + std::to_string(::getpid()) + "_" +
                        std::to_string(counter++) + ".txt";
  std::string cmd = std::string("\"") + TRIFORM_CLI_PATH + "\" " + args + " >" + capture +
                    " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  CliResult r;
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream in(capture, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  std::remove(capture.c_str());
  return r;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) {
      out.push_back(text.substr(pos));
      break;
    }
    out.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

json single_record(const CliResult& r) {
  std::vector<std::string> lines = split_lines(r.output);
  REQUIRE(lines.size() == 1);
  return json::parse(lines[0]);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_six(const double v[6]) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", v[0], v[1], v[2], v[3],
                v[4], v[5]);
  return buf;
}

}  // namespace

TEST_CASE("closed-form emits the pinned value and config echo") {
  CliResult r = run_cli("closed-form");
  REQUIRE(r.status == 0);
  json rec = single_record(r);

  REQUIRE(rec.at("command").get<std::string>() == "closed-form");
  REQUIRE(rec.at("pass").get<bool>() == true);

  const json& config = rec.at("config");
  REQUIRE(config.at("n").get<int>() == 3);
  REQUIRE(config.at("lambda").size() == 6);
  REQUIRE(config.at("scheme").get<std::string>() == "mc");
  REQUIRE(config.at("resolution").get<int>() == 64);
  REQUIRE(config.at("deterministic").get<bool>() == false);

  const json& values = rec.at("values");
  // Independently pinned by the symmetry-reduced quadrature: I(0) = 8 pi^5.
  const double i_zero = 8.0 * std::pow(kPi, 5);
  REQUIRE(std::abs(values.at("I").at("re").get<double>() - i_zero) <= 1e-12 * i_zero);
  REQUIRE(std::abs(values.at("I").at("im").get<double>()) <= 1e-9);
  const double normalized_zero = 8.0 * std::pow(kPi, 3);
  REQUIRE(std::abs(values.at("normalized_I").at("re").get<double>() - normalized_zero) <=
          1e-12 * normalized_zero);
  REQUIRE(values.at("pole_distance").get<double>() == 1.0);
  REQUIRE(values.at("integrable").get<bool>() == true);
  REQUIRE(values.at("pole").get<bool>() == false);
}

TEST_CASE("closed-form refuses on a pole hyperplane with a finite normalized value") {
  // alpha1 = -l1 + l2 + l3 = -1, so (alpha1 + rho)/2 hits the k = 0 pole.
  CliResult r = run_cli("closed-form --lambda=0.25,0,-0.4,0,-0.35,0");
  REQUIRE(r.status == 2);
  json rec = single_record(r);
  const json& values = rec.at("values");
  REQUIRE(values.at("pole").get<bool>() == true);
  REQUIRE(values.at("I").is_null());
  REQUIRE(std::isfinite(values.at("normalized_I").at("re").get<double>()));
  REQUIRE(std::isfinite(values.at("normalized_I").at("im").get<double>()));
  REQUIRE(values.at("pole_distance").get<double>() <= 1e-12);
  REQUIRE(values.at("integrable").get<bool>() == false);
  REQUIRE(rec.at("pass").get<bool>() == false);
}

TEST_CASE("closed-form value is symmetric in the parameter triple") {
  CliResult a = run_cli("closed-form --lambda=0.3,0,0.2,0,0.1,0");
  CliResult b = run_cli("closed-form --lambda=0.2,0,0.3,0,0.1,0");
  REQUIRE(a.status == 0);
  REQUIRE(b.status == 0);
  double ia = single_record(a).at("values").at("I").at("re").get<double>();
  double ib = single_record(b).at("values").at("I").at("re").get<double>();
  REQUIRE(std::abs(ia - ib) <= 1e-12 * std::abs(ia));
}

TEST_CASE("verify passes at the default configuration") {
  CliResult r = run_cli("verify");
  REQUIRE(r.status == 0);
  json rec = single_record(r);
  REQUIRE(rec.at("command").get<std::string>() == "verify");
  const json& residuals = rec.at("residuals");
  REQUIRE(residuals.at("closed_form_rel").get<double>() < 1e-2);
  REQUIRE(residuals.at("invariance").get<double>() < 1e-2);
  REQUIRE(residuals.at("duality").get<double>() < 1e-2);
  REQUIRE(rec.at("values").at("invariance_scheme").get<std::string>() == "mc");
  REQUIRE(rec.at("values").at("group_identity").get<bool>() == false);
  REQUIRE(rec.at("pass").get<bool>() == true);
}

TEST_CASE("verify with the identity seed reports exactly zero residuals") {
  CliResult r = run_cli("verify --seed=0");
  REQUIRE(r.status == 0);
  json rec = single_record(r);
  REQUIRE(rec.at("values").at("group_identity").get<bool>() == true);
  REQUIRE(rec.at("residuals").at("invariance").get<double>() == 0.0);
  REQUIRE(rec.at("residuals").at("duality").get<double>() == 0.0);
  REQUIRE(rec.at("pass").get<bool>() == true);
}

TEST_CASE("verify coerces the reduced scheme to mc for moving fields") {
  CliResult r = run_cli("verify --scheme=reduced --seed=0 --resolution=32");
  REQUIRE(r.status == 0);
  json rec = single_record(r);
  REQUIRE(rec.at("config").at("scheme").get<std::string>() == "reduced");
  REQUIRE(rec.at("values").at("invariance_scheme").get<std::string>() == "mc");
}

TEST_CASE("verify refuses non-integrable parameters with a structured record") {
  CliResult r = run_cli("verify --lambda=-1.2,0,0.5,0,0.5,0");
  REQUIRE(r.status == 2);
  json rec = single_record(r);
  REQUIRE(rec.at("command").get<std::string>() == "verify");
  REQUIRE(rec.contains("error"));
  REQUIRE(rec.at("pass").get<bool>() == false);
}

TEST_CASE("pole-scan finds the sum crossing and its ratio table converges") {
  // Segment through lambda0 = (-0.15, -0.15, -0.70) along u = (2,1,1)/sqrt(6):
  // it crosses the k = 0 sum hyperplane at t = 0.3 and nothing else.
  const double u[3] = {2.0 / std::sqrt(6.0), 1.0 / std::sqrt(6.0), 1.0 / std::sqrt(6.0)};
  const double l0[3] = {-0.15, -0.15, -0.70};
  double start[6] = {l0[0] - 0.3 * u[0], 0.0, l0[1] - 0.3 * u[1], 0.0, l0[2] - 0.3 * u[2], 0.0};
  double end[6] = {l0[0] + 0.7 * u[0], 0.0, l0[1] + 0.7 * u[1], 0.0, l0[2] + 0.7 * u[2], 0.0};

  CliResult r = run_cli("pole-scan --lambda=" + format_six(start) +
                        " --lambda-end=" + format_six(end) + " --steps=8");
  REQUIRE(r.status == 0);
  std::vector<std::string> lines = split_lines(r.output);
  REQUIRE(lines.size() == 10);  // 9 samples + 1 summary

  for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
    json sample = json::parse(lines[i]);
    REQUIRE(sample.at("command").get<std::string>() == "pole-scan");
    REQUIRE(sample.at("values").at("pole").get<bool>() == false);
    REQUIRE(std::isfinite(sample.at("values").at("normalized_I").at("re").get<double>()));
    REQUIRE(sample.at("pass").get<bool>() == true);
  }

  json summary = json::parse(lines.back());
  const json& values = summary.at("values");
  REQUIRE(values.at("samples").get<int>() == 9);
  REQUIRE(values.at("normalized_bounded").get<bool>() == true);
  REQUIRE(values.at("crossings").size() == 1);
  const json& crossing = values.at("crossings").at(0);
  REQUIRE(crossing.at("hyperplane").get<std::string>() == "sum");
  REQUIRE(crossing.at("k").get<int>() == 0);
  REQUIRE(std::abs(crossing.at("t").get<double>() - 0.3) <= 1e-9);
  REQUIRE(crossing.at("deviation").get<double>() <= 1e-2);
  REQUIRE(crossing.at("within_tolerance").get<bool>() == true);
  REQUIRE(summary.at("residuals").at("worst_ratio_deviation").get<double>() <= 1e-2);
  REQUIRE(summary.at("pass").get<bool>() == true);
}

TEST_CASE("orbit classifies pinned triples and the label is invariant") {
  CliResult generic = run_cli("orbit --points=1,0,0,-1,0,0,0,1,0");
  REQUIRE(generic.status == 0);
  json rec = single_record(generic);
  REQUIRE(rec.at("values").at("label").get<std::string>() == "O0");
  REQUIRE(rec.at("values").at("moved_label").get<std::string>() == "O0");
  REQUIRE(rec.at("values").at("invariant").get<bool>() == true);
  REQUIRE(rec.at("pass").get<bool>() == true);

  CliResult triple = run_cli("orbit --points=1,0,0,1,0,0,1,0,0 --seed=7");
  REQUIRE(triple.status == 0);
  json rec3 = single_record(triple);
  REQUIRE(rec3.at("values").at("label").get<std::string>() == "O4");
  REQUIRE(rec3.at("values").at("invariant").get<bool>() == true);

  CliResult four = run_cli("orbit --n=4 --points=1,0,0,0,-1,0,0,0,0,1,0,0");
  REQUIRE(four.status == 0);
  REQUIRE(single_record(four).at("values").at("label").get<std::string>() == "O0");
}

TEST_CASE("usage errors exit with status 1 and no records") {
  REQUIRE(run_cli("closed-form --bogus=3").status == 1);
  REQUIRE(run_cli("closed-form --lambda=0.25,0,-0.4").status == 1);
  REQUIRE(run_cli("verify --scheme=simpson").status == 1);
  REQUIRE(run_cli("").status == 1);
  CliResult off_sphere = run_cli("orbit --points=1,1,0,-1,0,0,0,1,0");
  REQUIRE(off_sphere.status == 1);
  REQUIRE(off_sphere.output.empty());
  REQUIRE(run_cli("--help").status == 0);
}

TEST_CASE("reruns are byte-identical, on stdout and in the output file") {
  const std::string out_a = "/tmp/triform_cli_file_a.jsonl";
  const std::string out_b = "/tmp/triform_cli_file_b.jsonl";
  const std::string args =
      "verify --seed=3 --resolution=32 --deterministic --out=";
  CliResult a = run_cli(args + out_a);
  CliResult b = run_cli(args + out_b);
  REQUIRE(a.status == 0);
  REQUIRE(b.status == 0);
  REQUIRE(!a.output.empty());
  REQUIRE(a.output == b.output);
  REQUIRE(read_file(out_a) == a.output);
  REQUIRE(read_file(out_b) == a.output);
  std::remove(out_a.c_str());
  std::remove(out_b.c_str());

  CliResult c = run_cli("closed-form --lambda=0.3,0,0.2,0,0.1,0");
  CliResult d = run_cli("closed-form --lambda=0.3,0,0.2,0,0.1,0");
  REQUIRE(c.output == d.output);
}
