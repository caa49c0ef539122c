// End-to-end tests driving the command line binary as a subprocess.
// The binary path comes in via ORTHOSEFE_CLI_BIN; scratch files are written
// into the test working directory with a cli_tmp_ prefix.

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "orthosefe/constraints.hpp"
#include "orthosefe/instance.hpp"

using namespace orthosefe;

namespace {

struct RunResult {
  int code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string("\"") + ORTHOSEFE_CLI_BIN + "\" " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  int status = pclose(pipe);
  if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
  return r;
}

std::string put_file(const std::string& name, const std::string& text) {
  std::string path = "cli_tmp_" + name;
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
  return path;
}

std::string put_instance(const std::string& name, const Instance& inst) {
  return put_file(name, serialize_instance(inst));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

bool starts_with(const std::string& hay, const std::string& prefix) {
  return hay.rfind(prefix, 0) == 0;
}

std::string fig1a_path() {
  return std::string("\"") + ORTHOSEFE_DATA_DIR + "/fig1a.json\"";
}

// One exclusive chord per graph, non-conflicting: feasible, no rewriting site.
Instance feasible_cycle() {
  return make_cycle_instance({"a", "b", "c", "d", "e", "f"},
                             {{{"a", "c"}}, {{"b", "d"}}});
}

// Vertex a carries two graph-0 chords: a degree-reduction site.
Instance deg4_cycle() {
  return make_cycle_instance({"a", "b", "c", "d", "e", "f"},
                             {{{"a", "c"}, {"a", "e"}}, {{"b", "d"}}});
}

// Two alternating graph-0 chords: same-side assignments violate planarity.
Instance alternating_pair() {
  return make_cycle_instance({"a", "b", "c", "d", "e", "f"},
                             {{{"a", "c"}, {"b", "d"}}, {}});
}

// A two-edge transfer path through the isolated vertex x; the edges alternate
// between the graphs as the group walker requires.
Instance isolated_instance() {
  return make_cycle_instance({"a", "b", "c", "d"},
                             {{{"x", "c"}}, {{"a", "x"}}}, {"x"});
}

Instance theta_shared() {
  return make_shared_instance(
      {"a", "b", "c", "d"},
      {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"a", "d"}, {"a", "c"}}, {{}, {}});
}

}  // namespace

TEST_CASE("check decides a feasible cycle instance and emits artifacts") {
  Instance inst = feasible_cycle();
  std::string f = put_instance("check_feasible.json", inst);
  std::string wit = "cli_tmp_check_feasible.witness";
  std::string emb = "cli_tmp_check_feasible.embedding";
  std::string trace = "cli_tmp_check_feasible.trace";
  std::string formula = "cli_tmp_check_feasible.formula";

  RunResult r = run_cli("check " + f + " --emit-witness " + wit +
                        " --emit-embedding " + emb + " --emit-trace " + trace +
                        " --emit-formula " + formula);
  CHECK(r.code == 0);
  CHECK(starts_with(r.output, "feasible"));

  SideAssignment a = load_witness(inst, slurp(wit));
  CHECK(check_assignment(inst, a).feasible);
  RotationSystem rot = load_rotation_system(inst, slurp(emb));
  CHECK(check_sefe_orthogonality(inst, rot).feasible);
  CHECK(!slurp(trace).empty());
  CHECK(starts_with(slurp(formula), "p nae"));
}

TEST_CASE("check reports the bundled infeasible instance") {
  RunResult r = run_cli("check " + fig1a_path());
  CHECK(r.code == 1);
  CHECK(starts_with(r.output, "infeasible"));
}

TEST_CASE("check routes unsupported and malformed inputs to exit code two") {
  std::string iso = put_instance("check_isolated.json", isolated_instance());
  RunResult r = run_cli("check " + iso);
  CHECK(r.code == 2);
  CHECK(contains(r.output, "oracle subcommand"));

  std::string bad = put_file("check_bad.json", "{ this is not json");
  r = run_cli("check " + bad);
  CHECK(r.code == 2);
  CHECK(contains(r.output, "input error"));

  r = run_cli("check cli_tmp_no_such_file.json");
  CHECK(r.code == 2);
  CHECK(contains(r.output, "cannot read file"));
}

TEST_CASE("check handles a biconnected shared graph") {
  std::string f = put_instance("check_theta.json", theta_shared());
  RunResult r = run_cli("check " + f);
  CHECK(r.code == 0);
  CHECK(starts_with(r.output, "feasible"));
}

TEST_CASE("oracle decides instances and honors cap and jobs") {
  Instance inst = feasible_cycle();
  std::string f = put_instance("oracle_feasible.json", inst);
  std::string wit = "cli_tmp_oracle_feasible.witness";

  RunResult r = run_cli("oracle " + f + " --emit-witness " + wit);
  CHECK(r.code == 0);
  SideAssignment a = load_witness(inst, slurp(wit));
  CHECK(check_assignment(inst, a).feasible);

  r = run_cli("oracle " + fig1a_path());
  CHECK(r.code == 1);
  CHECK(starts_with(r.output, "infeasible"));

  r = run_cli("oracle " + f + " --cap 1");
  CHECK(r.code == 2);
  CHECK(contains(r.output, "cap exceeded"));

  r = run_cli("oracle " + f + " --jobs 3");
  CHECK(r.code == 0);

  // isolated vertices are out of scope for check but fine for the oracle
  std::string iso = put_instance("oracle_isolated.json", isolated_instance());
  r = run_cli("oracle " + iso);
  CHECK(r.code == 0);
}

TEST_CASE("transform applies rewriting rules") {
  std::string deg4 = put_instance("transform_deg4.json", deg4_cycle());
  std::string out = "cli_tmp_transform_deg4.out.json";
  std::string trace = "cli_tmp_transform_deg4.trace";

  RunResult r = run_cli("transform " + deg4 + " --lemma 3 -o " + out +
                        " --emit-trace " + trace);
  CHECK(r.code == 0);
  CHECK(starts_with(r.output, "applied 1 rewriting step"));
  Instance rewritten = load_instance(slurp(out));
  CHECK(rewritten.vertex_count() > 6);
  CHECK(!slurp(trace).empty());

  // the rewriting removed the only degree-four vertex, so a fixpoint run
  // performs exactly one step as well
  r = run_cli("transform " + deg4 + " --lemma 3 --fixpoint -o " + out);
  CHECK(r.code == 0);
  CHECK(starts_with(r.output, "applied 1 rewriting step"));

  std::string plain = put_instance("transform_plain.json", feasible_cycle());
  r = run_cli("transform " + plain + " --lemma 3");
  CHECK(r.code == 1);
  CHECK(contains(r.output, "no applicable rewriting site"));

  std::string alt = put_instance("transform_alt.json", alternating_pair());
  r = run_cli("transform " + alt + " --lemma 2 -o " + out);
  CHECK(r.code == 0);
  CHECK(starts_with(r.output, "applied 1 rewriting step"));

  r = run_cli("transform " + deg4 + " --lemma 5");
  CHECK(r.code == 2);
}

TEST_CASE("generate is deterministic and builds hardness instances") {
  RunResult r = run_cli("generate --random n=8 seed=5 -o cli_tmp_rand_a.json");
  CHECK(r.code == 0);
  r = run_cli("generate --random n=8 seed=5 -o cli_tmp_rand_b.json");
  CHECK(r.code == 0);
  std::string a = slurp("cli_tmp_rand_a.json");
  CHECK(a == slurp("cli_tmp_rand_b.json"));
  Instance rnd = load_instance(a);
  CHECK(rnd.k == 2);

  std::string cnf = put_file("formula.cnf", "x y z\nx y w\n");
  r = run_cli("generate --nae3sat " + cnf + " --theorem 3 -o cli_tmp_thm3.json");
  CHECK(r.code == 0);
  Instance t3 = load_instance(slurp("cli_tmp_thm3.json"));
  CHECK(t3.k == 3);
  CHECK(t3.is_cycle_form());

  r = run_cli("generate --nae3sat " + cnf + " --theorem 4 -o cli_tmp_thm4.json");
  CHECK(r.code == 0);
  Instance t4 = load_instance(slurp("cli_tmp_thm4.json"));
  CHECK(t4.k == 2);
  CHECK(!t4.isolated.empty());

  r = run_cli("generate --nae3sat " + cnf);
  CHECK(r.code == 2);
  CHECK(contains(r.output, "--theorem"));

  r = run_cli("generate --random bogus=1");
  CHECK(r.code == 2);
  CHECK(contains(r.output, "unknown key"));

  r = run_cli("generate");
  CHECK(r.code == 2);
}

TEST_CASE("draw produces an svg") {
  std::string f = put_instance("draw_feasible.json", feasible_cycle());
  std::string svg = "cli_tmp_draw_feasible.svg";
  RunResult r = run_cli("draw " + f + " -o " + svg);
  CHECK(r.code == 0);
  CHECK(contains(r.output, "drawing:"));
  CHECK(contains(r.output, "max bends"));
  CHECK(contains(slurp(svg), "<svg"));

  r = run_cli("draw " + fig1a_path());
  CHECK(r.code == 1);
}

TEST_CASE("spqr dumps a decomposition") {
  std::string f = put_instance("spqr_theta.json", theta_shared());
  RunResult r = run_cli("spqr " + f);
  CHECK(r.code == 0);
  CHECK(!r.output.empty());
}

TEST_CASE("validate verifies witnesses and embeddings") {
  Instance inst = feasible_cycle();
  std::string f = put_instance("validate_inst.json", inst);
  std::string wit = "cli_tmp_validate.witness";
  RunResult r = run_cli("check " + f + " --emit-witness " + wit);
  REQUIRE(r.code == 0);

  r = run_cli("validate " + f + " --witness " + wit);
  CHECK(r.code == 0);
  CHECK(starts_with(r.output, "valid"));

  std::string alt = put_instance("validate_alt.json", alternating_pair());
  std::string badwit = put_file("validate_bad.witness",
                                R"({"assignment":{"a-c":"L","b-d":"L"}})");
  r = run_cli("validate " + alt + " --witness " + badwit);
  CHECK(r.code == 1);
  CHECK(starts_with(r.output, "invalid"));
  CHECK(contains(r.output, "planarity"));

  std::string emb = "cli_tmp_validate.embedding";
  r = run_cli("check " + f + " --emit-embedding " + emb);
  REQUIRE(r.code == 0);
  r = run_cli("validate " + f + " --embedding " + emb);
  CHECK(r.code == 0);
  CHECK(starts_with(r.output, "valid"));

  r = run_cli("validate " + f + " --witness " + wit + " --embedding " + emb);
  CHECK(r.code == 2);
  CHECK(contains(r.output, "exactly one"));

  r = run_cli("validate " + f);
  CHECK(r.code == 2);
}

TEST_CASE("usage errors exit with code two") {
  RunResult r = run_cli("");
  CHECK(r.code == 2);

  r = run_cli("frobnicate");
  CHECK(r.code == 2);

  r = run_cli("check");
  CHECK(r.code == 2);

  r = run_cli("--help");
  CHECK(r.code == 0);
  CHECK(contains(r.output, "Usage"));
}
