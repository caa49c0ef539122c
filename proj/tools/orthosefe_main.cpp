#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "orthosefe/constraints.hpp"
#include "orthosefe/cyclesolver.hpp"
#include "orthosefe/drawing.hpp"
#include "orthosefe/gadgets.hpp"
#include "orthosefe/instance.hpp"
#include "orthosefe/naesat.hpp"
#include "orthosefe/spqr.hpp"

namespace {

using namespace orthosefe;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InstanceError("cannot write file: " + path);
  out << text;
}

void report(const Verdict& v, const char* yes, const char* no) {
  std::cout << (v.feasible ? yes : no) << "\n";
  for (const auto& viol : v.violations)
    std::cout << "  " << viol.kind << ": " << viol.detail << "\n";
}

std::uint64_t env_seed(std::uint64_t fallback) {
  const char* s = std::getenv("ORTHOSEFE_SEED");
  if (!s || !*s) return fallback;
  try {
    return std::stoull(s);
  } catch (...) {
    throw InstanceError("ORTHOSEFE_SEED is not a number");
  }
}

struct CheckFlags {
  std::string emit_witness, emit_trace, emit_formula, emit_embedding;
  bool gadget_variant = false;
};

int run_cycle_pipeline(const Instance& original, const Instance& cyc,
                       const CheckFlags& f) {
  if (!cyc.isolated.empty()) {
    std::cout << "the cycle pipeline does not cover isolated vertices; "
                 "use the oracle subcommand\n";
    return 2;
  }
  CycleSolution sol = solve_cycle(cyc);
  report(sol.verdict, "feasible", "infeasible");
  if (!f.emit_trace.empty()) write_file(f.emit_trace, serialize_trace(sol.trace));
  if (!f.emit_formula.empty())
    write_file(f.emit_formula, dump_formula(sol.reduction.formula));
  if (sol.verdict.feasible && sol.verdict.witness) {
    if (!f.emit_witness.empty())
      write_file(f.emit_witness, serialize_witness(original, *sol.verdict.witness));
    if (!f.emit_embedding.empty())
      write_file(f.emit_embedding,
                 serialize_rotation_system(
                     original, rotation_from_assignment(cyc, *sol.verdict.witness)));
  }
  return sol.verdict.feasible ? 0 : 1;
}

int cmd_check(const std::string& file, const CheckFlags& f) {
  Instance inst = load_instance_file(file);
  if (inst.is_cycle_form()) return run_cycle_pipeline(inst, inst, f);
  if (auto cyc = as_cycle_form(inst)) return run_cycle_pipeline(inst, *cyc, f);
  if (shared_graph_biconnected(inst)) {
    BiconnectedSolution sol = solve_biconnected(inst, f.gadget_variant);
    report(sol.verdict, "feasible", "infeasible");
    if (sol.verdict.feasible) {
      if (!f.emit_witness.empty() && sol.verdict.witness)
        write_file(f.emit_witness, serialize_witness(inst, *sol.verdict.witness));
      if (!f.emit_embedding.empty() && sol.rotation)
        write_file(f.emit_embedding,
                   serialize_rotation_system(inst, *sol.rotation));
    }
    return sol.verdict.feasible ? 0 : 1;
  }
  std::cout << "unsupported shared graph: neither a cycle (plus isolated "
               "vertices) nor biconnected\n";
  return 2;
}

int cmd_oracle(const std::string& file, int cap, int jobs,
               const std::string& emit_witness) {
  Instance inst = load_instance_file(file);
  OracleOptions opt;
  opt.cap = cap;
  opt.jobs = jobs;
  Verdict v = oracle(inst, opt);
  report(v, "feasible", "infeasible");
  if (v.feasible && v.witness && !emit_witness.empty())
    write_file(emit_witness, serialize_witness(inst, *v.witness));
  return v.feasible ? 0 : 1;
}

int cmd_transform(const std::string& file, int lemma, bool fixpoint,
                  const std::string& out, const std::string& emit_trace) {
  Instance inst = load_instance_file(file);
  auto step = [&](const Instance& in) {
    switch (lemma) {
      case 2: return outerplanarize_step(in);
      case 3: return reduce_degree_step(in);
      case 7: return split_offending_step(in);
      default: throw InstanceError("transform lemma must be 2, 3, or 7");
    }
  };
  TransformationTrace trace;
  trace.states.push_back(inst);
  Instance cur = inst;
  while (true) {
    auto r = step(cur);
    if (!r) break;
    trace.steps.push_back(r->step);
    trace.states.push_back(r->instance);
    cur = r->instance;
    if (!fixpoint) break;
  }
  if (trace.steps.empty()) {
    std::cout << "no applicable rewriting site\n";
    return 1;
  }
  std::cout << "applied " << trace.steps.size() << " rewriting step"
            << (trace.steps.size() == 1 ? "" : "s") << "\n";
  std::string text = serialize_instance(cur);
  if (out.empty())
    std::cout << text << "\n";
  else
    write_file(out, text);
  if (!emit_trace.empty()) write_file(emit_trace, serialize_trace(trace));
  return 0;
}

int cmd_generate(const std::string& nae3sat, int theorem,
                 const std::vector<std::string>& random,
                 const std::string& out) {
  std::string text;
  if (!nae3sat.empty()) {
    if (theorem != 3 && theorem != 4)
      throw InstanceError("--nae3sat requires --theorem 3 or --theorem 4");
    PositiveFormula f = parse_positive_3cnf(read_file(nae3sat));
    HardnessInstance h =
        theorem == 3 ? generate_theorem3(f) : generate_theorem4(f);
    text = serialize_instance(h.instance);
  } else if (!random.empty()) {
    RandomSpec spec;
    spec.seed = env_seed(spec.seed);
    for (const std::string& kv : random) {
      auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw InstanceError("--random expects key=value, got: " + kv);
      std::string key = kv.substr(0, eq);
      long val;
      try {
        val = std::stol(kv.substr(eq + 1));
      } catch (...) {
        throw InstanceError("--random value is not a number: " + kv);
      }
      if (key == "n") spec.n = static_cast<int>(val);
      else if (key == "m") spec.max_exclusive = static_cast<int>(val);
      else if (key == "seed") spec.seed = static_cast<std::uint64_t>(val);
      else if (key == "k") spec.k = static_cast<int>(val);
      else if (key == "maxdeg") spec.union_max_degree = static_cast<int>(val);
      else if (key == "biconnected") spec.biconnected = val != 0;
      else if (key == "chords") spec.shared_chords = static_cast<int>(val);
      else throw InstanceError("--random: unknown key: " + key);
    }
    text = serialize_instance(generate_random(spec));
  } else {
    throw InstanceError("generate needs --nae3sat with --theorem, or --random");
  }
  if (out.empty())
    std::cout << text << "\n";
  else
    write_file(out, text);
  return 0;
}

int cmd_draw(const std::string& file, const std::string& embedding,
             const std::string& out, bool gadget_variant) {
  Instance inst = load_instance_file(file);
  RotationSystem rot;
  if (!embedding.empty()) {
    rot = load_rotation_system(inst, read_file(embedding));
  } else {
    std::optional<Instance> cyc =
        inst.is_cycle_form() ? std::optional<Instance>(inst) : as_cycle_form(inst);
    if (cyc && cyc->isolated.empty()) {
      CycleSolution sol = solve_cycle(*cyc);
      if (!sol.verdict.feasible) {
        report(sol.verdict, "feasible", "infeasible");
        return 1;
      }
      rot = rotation_from_assignment(*cyc, *sol.verdict.witness);
    } else if (shared_graph_biconnected(inst)) {
      BiconnectedSolution sol = solve_biconnected(inst, gadget_variant);
      if (!sol.verdict.feasible || !sol.rotation) {
        report(sol.verdict, "feasible", "infeasible");
        return 1;
      }
      rot = *sol.rotation;
    } else {
      std::cout << "unsupported shared graph: neither a cycle nor biconnected\n";
      return 2;
    }
  }
  OrthogonalDrawing d = draw(inst, rot);
  std::string svg = export_svg(inst, d);
  if (!out.empty()) write_file(out, svg);
  int maxBends = 0;
  for (const auto& [e, p] : d.paths) maxBends = std::max(maxBends, bend_count(p));
  std::cout << "drawing: " << d.pos.size() << " vertices, " << d.paths.size()
            << " edges, base edge " << edge_name(inst, d.root) << " with "
            << bend_count(d.paths.at(d.root)) << " bends, max bends "
            << maxBends << "\n";
  if (out.empty()) std::cout << svg;
  return 0;
}

int cmd_spqr(const std::string& file) {
  Instance inst = load_instance_file(file);
  SpqrTree tree = build_spqr(inst);
  std::cout << dump_spqr(inst, tree);
  return 0;
}

int cmd_validate(const std::string& file, const std::string& witness,
                 const std::string& embedding) {
  if (witness.empty() == embedding.empty())
    throw InstanceError("validate needs exactly one of --witness/--embedding");
  Instance inst = load_instance_file(file);
  Verdict v;
  if (!witness.empty()) {
    SideAssignment a = load_witness(inst, read_file(witness));
    v = check_assignment(inst, a);
  } else {
    RotationSystem r = load_rotation_system(inst, read_file(embedding));
    v = check_sefe_orthogonality(inst, r);
  }
  report(v, "valid", "invalid");
  return v.feasible ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simultaneous planar orthogonal embedding toolkit"};
  app.require_subcommand(1);

  std::string file, embedding, out, witness;
  CheckFlags cf;
  int cap = 24, jobs = 1, lemma = 0, theorem = 0;
  bool fixpoint = false;
  std::string nae3sat;
  std::vector<std::string> random;

  CLI::App* check = app.add_subcommand("check", "decide feasibility");
  check->add_option("file", file)->required();
  check->add_option("--emit-witness", cf.emit_witness);
  check->add_option("--emit-trace", cf.emit_trace);
  check->add_option("--emit-formula", cf.emit_formula);
  check->add_option("--emit-embedding", cf.emit_embedding);
  check->add_flag("--gadget-variant", cf.gadget_variant);

  CLI::App* orc = app.add_subcommand("oracle", "exhaustive side-assignment search");
  orc->add_option("file", file)->required();
  orc->add_option("--cap", cap);
  orc->add_option("--jobs", jobs);
  orc->add_option("--emit-witness", cf.emit_witness);

  CLI::App* tra = app.add_subcommand("transform", "apply one rewriting rule");
  tra->add_option("file", file)->required();
  tra->add_option("--lemma", lemma)->required()->check(CLI::IsMember({2, 3, 7}));
  tra->add_flag("--fixpoint", fixpoint);
  tra->add_option("-o,--output", out);
  tra->add_option("--emit-trace", cf.emit_trace);

  CLI::App* gen = app.add_subcommand("generate", "build instances");
  gen->add_option("--nae3sat", nae3sat);
  gen->add_option("--theorem", theorem);
  gen->add_option("--random", random)->expected(-1);
  gen->add_option("-o,--output", out);

  CLI::App* drw = app.add_subcommand("draw", "orthogonal grid drawing");
  drw->add_option("file", file)->required();
  drw->add_option("--embedding", embedding);
  drw->add_option("-o,--output", out);
  drw->add_flag("--gadget-variant", cf.gadget_variant);

  CLI::App* spq = app.add_subcommand("spqr", "dump the shared-graph decomposition");
  spq->add_option("file", file)->required();

  CLI::App* val = app.add_subcommand("validate", "verify a witness or embedding");
  val->add_option("file", file)->required();
  val->add_option("--witness", witness);
  val->add_option("--embedding", embedding);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return cmd_check(file, cf);
    if (orc->parsed()) return cmd_oracle(file, cap, jobs, cf.emit_witness);
    if (tra->parsed()) return cmd_transform(file, lemma, fixpoint, out, cf.emit_trace);
    if (gen->parsed()) return cmd_generate(nae3sat, theorem, random, out);
    if (drw->parsed()) return cmd_draw(file, embedding, out, cf.gadget_variant);
    if (spq->parsed()) return cmd_spqr(file);
    if (val->parsed()) return cmd_validate(file, witness, embedding);
  } catch (const InternalCheckError& e) {
    std::cout << "internal check failed: " << e.what() << "\n";
    return 3;
  } catch (const InstanceError& e) {
    std::cout << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
