#include "ptree/cli.hpp"

#include "support/check.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = ptree::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("ptree_cli_" + name);
  std::ofstream(path) << text;
  return path.string();
}

const std::string kUniform =
    R"({"version": 1, "representation": "generator", "generator": "uniform_binary", "depth_budget": 16})";
const std::string kTrials = R"({"version": 1, "representation": "explicit", "nodes": {
  "": {"arity": 2, "probs": ["1/2", "1/2"]},
  "0": {"arity": 2, "probs": ["7/10", "3/10"]}, "1": {"arity": 2, "probs": ["1/2", "1/2"]},
  "0.0": {"arity": 0}, "0.1": {"arity": 0}, "1.0": {"arity": 0}, "1.1": {"arity": 0}}})";

}  // namespace

TEST_CASE("cli measure, embed and front") {
  std::string t = write_temp("uniform.json", kUniform);
  auto m = run({"measure", "--tree", t, "--node", "0.1"});
  CHECK(m.code == 0);
  CHECK(m.out == "1/4\n");
  auto e = run({"embed", "--tree", t, "--node", "0.1"});
  CHECK(e.out == "[1/4, 1/2]\n");
  auto f = run({"front", "--tree", t, "--depth", "2", "--check-mass"});
  CHECK(f.code == 0);
  CHECK(f.out == "mass = 1\n");
  auto l = run({"front", "--tree", t, "--depth", "1"});
  CHECK(l.out == "0\t1/2\n1\t1/2\n");
}

TEST_CASE("cli bound") {
  std::string b = write_temp("trials.json", kTrials);
  auto r = run({"bound", "--tree", b, "--p", "1/2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("1\t13/20\t3/4\t1/10\n") != std::string::npos);
  CHECK(r.out.find("dominance holds") != std::string::npos);
  auto bad = run({"bound", "--tree", b, "--p", "3/5"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("HypothesisViolated") != std::string::npos);
  auto flipped = run({"bound", "--tree", b, "--p", "3/10", "--flip-success"});
  CHECK(flipped.code == 0);
  auto random = run({"bound", "--n", "6", "--p", "1/3", "--random", "5", "--min-p", "1/3"});
  CHECK(random.code == 0);
  CHECK(random.out.find("dominance holds for n = 6") != std::string::npos);
  CHECK(run({"bound", "--p", "1/2", "--random", "5"}).code == 2);
}

TEST_CASE("cli sample") {
  std::string t = write_temp("uniform.json", kUniform);
  auto a = run({"sample", "--tree", t, "--seed", "42", "--count", "5", "--depth", "3"});
  auto b = run({"sample", "--tree", t, "--seed", "42", "--count", "5", "--depth", "3"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 5);
  auto s = run({"sample", "--tree", t, "--seed", "1", "--count", "100", "--depth", "1", "--summary"});
  CHECK(s.out.find("floating point") != std::string::npos);
}

TEST_CASE("cli expect, encode, classify") {
  std::string b = write_temp("trials.json", kTrials);
  auto x = run({"expect", "--tree", b, "--front-level", "2", "--count-index", "0"});
  CHECK(x.code == 0);
  CHECK(x.out == "11/10\n");
  std::string vals = write_temp("values.json", R"({"0.0": "1", "0.1": "0", "1.0": "0", "1.1": "-3"})");
  auto v = run({"expect", "--tree", b, "--front-level", "2", "--values", vals, "--node", "1"});
  CHECK(v.out == "-3/2\n");
  auto enc = run({"encode", "--tree", b, "--verify"});
  CHECK(enc.code == 0);
  CHECK(enc.out.find("intervals match: yes") != std::string::npos);
  auto h = run({"encode", "--tree", b, "--node", "1.0"});
  CHECK(h.out == "1.0\n");
  auto c = run({"classify", "--tree", b});
  CHECK(c.out.find("well pruned: yes") != std::string::npos);
  CHECK(c.out.find("height: 3") != std::string::npos);
}

TEST_CASE("cli errors and exit codes") {
  std::string t = write_temp("uniform.json", kUniform);
  CHECK(run({}).code == 2);
  CHECK(run({"measure", "--tree", t, "--bogus"}).code == 2);
  CHECK(run({"teleport"}).code == 2);
  CHECK(run({"embed", "--tree", t}).code == 2);
  std::string bad = write_temp("bad.json", R"({"representation": "explicit", "nodes": {"": {"arity": 2, "probs": ["1/3", "1/3"]}, "0": {"arity": 0}, "1": {"arity": 0}}})");
  auto r = run({"measure", "--tree", bad, "--node", "0"});
  CHECK(r.code == 1);
  CHECK(r.err.find("ValidationError") != std::string::npos);
  CHECK(run({"measure", "--tree", t, "--node", "0.2"}).code == 1);
  CHECK(run({"measure", "--tree", "/nonexistent.json", "--node", "0"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli depth budget from the environment") {
  std::string t = write_temp("geo.json", R"({"representation": "generator", "generator": "geometric_omega"})");
  ::setenv("PTREE_DEPTH_BUDGET", "3", 1);
  CHECK(run({"measure", "--tree", t, "--node", "0.0.0"}).code == 0);
  CHECK(run({"measure", "--tree", t, "--node", "0.0.0.0"}).code == 1);
  ::setenv("PTREE_DEPTH_BUDGET", "lots", 1);
  CHECK(run({"measure", "--tree", t, "--node", "0"}).code == 2);
  ::unsetenv("PTREE_DEPTH_BUDGET");
  CHECK(run({"measure", "--tree", t, "--node", "0.0.0.0"}).out == "1/16\n");
}
