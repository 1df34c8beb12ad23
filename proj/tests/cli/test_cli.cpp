#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli/cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "gibbsrate");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = gibbsrate::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

nlohmann::json json_of(const Result& r) { return nlohmann::json::parse(r.out); }

std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> lines;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

std::string temp_path(const std::string& name) { return "/tmp/gibbsrate_cli_test_" + name; }

}  // namespace

TEST_CASE("rosenthal reproduces the 10^33 step count") {
  const auto r = run({"rosenthal", "--n", "100", "--d", "1000", "--r", "0.001", "--target", "0.01"});
  REQUIRE(r.code == 0);
  const auto j = json_of(r);
  const double lg = j["result"]["min_steps"]["log10"];
  CHECK(lg >= 33.0);
  CHECK(lg <= 34.5);
  CHECK(j["config"]["subcommand"] == "rosenthal");
  CHECK(j["config"]["n"] == 100);
  CHECK(j["result"]["certificate"]["epsilon"]["exponent"] == -31);
}

TEST_CASE("words lists six reduced words") {
  const auto r = run({"words", "--len", "3"});
  REQUIRE(r.code == 0);
  const auto words = json_of(r)["result"]["words"];
  REQUIRE(words.size() == 6);
  std::vector<int> counts;
  for (const auto& w : words) counts.push_back(w["count"]);
  CHECK(counts == std::vector<int>{1, 2, 1, 1, 2, 1});
  CHECK(words[2]["word"] == "P1P2P1");
}

TEST_CASE("gap curve is CSV with the peak at one half") {
  const auto r = run({"spectral", "--gap-curve", "--product", "0.5", "--grid", "101"});
  REQUIRE(r.code == 0);
  auto lines = data_lines(r.out);
  REQUIRE(lines.front() == "scan_weight,lambda_plus,lambda_minus,gap");
  lines.erase(lines.begin());
  REQUIRE(lines.size() == 101);
  double best = -1.0;
  std::string best_alpha;
  for (const auto& line : lines) {
    const auto alpha = line.substr(0, line.find(','));
    const double gap = std::stod(line.substr(line.rfind(',') + 1));
    if (gap > best) {
      best = gap;
      best_alpha = alpha;
    }
  }
  CHECK(best_alpha == "0.5");
}

TEST_CASE("identical configurations give byte-identical output") {
  const std::vector<std::string> args{"scan-compare", "--n", "12", "--max-steps", "20", "--mc-samples", "1000",
                                      "--mc-steps", "1,4", "--seed", "77"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  auto threaded = args;
  threaded.insert(threaded.end(), {"--threads", "3"});
  const auto c = run(threaded);
  CHECK(json_of(a)["result"] == json_of(c)["result"]);
  const auto d = run({"simulate", "--steps", "30", "--seed", "5"});
  CHECK(d.out == run({"simulate", "--steps", "30", "--seed", "5"}).out);
  CHECK(d.out != run({"simulate", "--steps", "30", "--seed", "6"}).out);
}

TEST_CASE("config file values yield to command-line flags") {
  const auto path = temp_path("config.json");
  {
    std::ofstream f(path);
    f << R"({"n": 20, "target": 0.05, "d-grid": [100, 1000], "format": "json"})";
  }
  const auto from_file = json_of(run({"rosenthal", "--config", path}));
  CHECK(from_file["config"]["n"] == 20);
  CHECK(from_file["config"]["target"] == 0.05);
  CHECK(from_file["config"]["d-grid"] == "100,1000");
  const auto overridden = json_of(run({"rosenthal", "--config", path, "--n", "30"}));
  CHECK(overridden["config"]["n"] == 30);
  CHECK(overridden["config"]["target"] == 0.05);
  const auto defaults = json_of(run({"rosenthal"}));
  CHECK(defaults["config"]["n"] == 100);
  std::remove(path.c_str());
}

TEST_CASE("output file") {
  const auto path = temp_path("out.csv");
  const auto r = run({"pg-demo", "--starts", "0,8", "--format", "csv", "--out", path});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  const auto lines = data_lines(text.str());
  CHECK(lines == std::vector<std::string>{"start,exact_min_steps,chisq_min_steps", "0,5,8", "8,8,12"});
  std::remove(path.c_str());
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"rosenthal", "--n"}).code == 2);
  CHECK(run({"rosenthal", "--format", "xml"}).code == 2);
  const auto bad_r = run({"rosenthal", "--r", "1.5"});
  CHECK(bad_r.code == 2);
  CHECK(bad_r.err.find("invalid-r") != std::string::npos);
  CHECK(run({"spectral", "--product", "1.5"}).code == 2);
  CHECK(run({"scan-compare", "--n", "5000"}).code == 2);
  CHECK(run({"words", "--len", "40"}).code == 2);
  CHECK(run({"rosenthal", "--config", "/nonexistent/config.json"}).code == 2);
  const auto truncated = run({"exact-tv", "--family", "pg", "--x-max", "10"});
  CHECK(truncated.code == 3);
  CHECK(truncated.err.find("truncation") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("every subcommand answers") {
  const std::vector<std::vector<std::string>> cases{
      {"two-term"},
      {"two-term", "--steps", "0,100,34000"},
      {"spectral", "--n", "6"},
      {"spectral", "--family", "pg", "--x-max", "150"},
      {"spectral", "--product", "0.3", "--alpha", "0.2"},
      {"exact-tv", "--n", "6", "--max-steps", "10", "--target", "0.1"},
      {"exact-tv", "--family", "pg", "--x-max", "200", "--start", "5", "--max-steps", "10"},
      {"simulate", "--family", "pg", "--x-max", "200", "--scan", "ktilde", "--steps", "5"},
      {"simulate", "--decay", "--n", "3", "--steps", "3", "--samples", "2000"},
      {"rosenthal", "--lambda", "0.5", "--b", "0.3", "--log2-epsilon", "-3", "--d", "10", "--r", "0.05"},
      {"words", "--len", "4", "--alpha", "0.25"},
  };
  for (const auto& args : cases) {
    const auto r = run(args);
    INFO(args.front());
    CHECK(r.code == 0);
    CHECK(json_of(run(args))["config"]["subcommand"] == args.front());
  }
  const auto exact = json_of(run({"exact-tv", "--n", "1", "--max-steps", "3"}));
  CHECK(exact["result"]["curve"][3]["tv"].get<double>() == doctest::Approx(0.5 / 27));
}
