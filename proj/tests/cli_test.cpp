#include "doctest.h"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace {

const std::filesystem::path kData = ENDCHARGE_TEST_DATA;

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string command = std::string(ENDCHARGE_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.out.append(buf.data(), n);
  }
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string data(const char* name) { return (kData / name).string(); }

std::filesystem::path scratch(const char* name) {
  return std::filesystem::temp_directory_path() / (std::string("endcharge_cli_") + name);
}

}  // namespace

TEST_CASE("cli charge of the reference word") {
  const Run r = run("charge --tree " + data("tree.json") + " --measure " + data("measure.json") + " --word " +
                    data("word.json"));
  CHECK(r.status == 0);
  CHECK(r.out == "{\"ℓ1\":\"3\",\"ℓ2\":\"-3\",\"ℓ3\":\"0\"}\n");
}

TEST_CASE("cli section with zero charge writes an empty word") {
  const auto out = scratch("zero.json");
  const Run r = run("section --tree " + data("tree.json") + " --charge " + data("zero_charge.json") + " --out " +
                    out.string());
  CHECK(r.status == 0);
  std::ifstream in(out);
  const auto j = nlohmann::json::parse(in);
  CHECK(j.at("moves").empty());
}

TEST_CASE("cli section round trip") {
  const auto word = scratch("section.json");
  const auto trace = scratch("trace.csv");
  const Run s = run("section --tree " + data("tree.json") + " --charge " + data("charge.json") + " --out " +
                    word.string() + " --trace " + trace.string());
  REQUIRE(s.status == 0);
  const Run c = run("charge --tree " + data("tree.json") + " --word " + word.string());
  CHECK(c.status == 0);
  CHECK(c.out == "{\"ℓ1\":\"3\",\"ℓ2\":\"-3\",\"ℓ3\":\"0\"}\n");
  std::ifstream csv(trace);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "level,parent,child,amount,parameter");
}

TEST_CASE("cli output is deterministic") {
  const std::string args = "section --tree " + data("tree.json") + " --charge " + data("charge.json");
  CHECK(run(args).out == run(args).out);
}

TEST_CASE("cli factorize and retract") {
  const Run f = run("factorize --tree " + data("tree.json") + " --word " + data("word.json"));
  CHECK(f.status == 0);
  const auto j = nlohmann::json::parse(f.out);
  CHECK(j.at("charge").at("ℓ1") == "3");
  const Run r = run("retract --tree " + data("tree.json") + " --word " + data("word.json") + " --tau 1/2");
  CHECK(r.status == 0);
  CHECK(run("retract --tree " + data("tree.json") + " --word " + data("word.json") + " --tau 2").status == 2);
}

TEST_CASE("cli push and oracle") {
  const Run p = run("push --morphism " + data("morphism.json") + " --word " + data("word.json"));
  CHECK(p.status == 0);
  CHECK(nlohmann::json::parse(p.out).at("diagram_commutes") == true);
  const Run o = run("oracle --star " + data("star.json") + " --word " + data("star_word.json"));
  CHECK(o.status == 0);
  CHECK(nlohmann::json::parse(o.out).at("agree") == true);
}

TEST_CASE("cli exit codes") {
  CHECK(run("validate --tree " + data("tree.json") + " --charge " + data("charge.json")).status == 0);
  CHECK(run("validate --tree " + data("bad_tree.json")).status == 2);
  CHECK(run("validate --tree " + data("tree.json") + " --charge " + data("bad_charge.json")).status == 2);
  CHECK(run("section --tree " + data("tree.json") + " --charge " + data("bad_charge.json")).status == 2);
  CHECK(run("charge --tree " + data("tree.json") + " --word " + data("swapped_word.json")).status == 2);
  CHECK(run("charge --tree " + data("missing.json") + " --word " + data("word.json")).status == 4);
  CHECK(run("frobnicate").status == 2);
}

TEST_CASE("cli verify") {
  const Run r = run("verify --cases 100 --seed 7");
  CHECK(r.status == 0);
  CHECK(r.out.find("failures: 0") != std::string::npos);
}
