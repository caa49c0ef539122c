#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "orthosefe/constraints.hpp"
#include "orthosefe/instance.hpp"

using namespace orthosefe;

namespace {

Edge E(const Instance& inst, const char* u, const char* v) {
  return Edge(inst.id_of(u), inst.id_of(v));
}

SideAssignment assign(const Instance& inst,
                      const std::vector<std::pair<const char*, Side>>& sides) {
  SideAssignment a;
  for (auto [name, side] : sides) {
    auto dash = std::string(name).find('-');
    std::string u = std::string(name).substr(0, dash), v = std::string(name).substr(dash + 1);
    a[Edge(inst.id_of(u), inst.id_of(v))] = side;
  }
  return a;
}

bool has_kind(const Verdict& v, const std::string& kind) {
  return std::any_of(v.violations.begin(), v.violations.end(),
                     [&](const Violation& x) { return x.kind == kind; });
}

}  // namespace

TEST_CASE("check_assignment enforces planarity of same-graph chords") {
  Instance inst = make_cycle_instance({"a", "b", "c", "d", "e", "f"},
                                      {{{"a", "c"}, {"b", "d"}}, {}});
  auto bad = assign(inst, {{"a-c", Side::Left}, {"b-d", Side::Left}});
  Verdict v = check_assignment(inst, bad);
  CHECK(!v.feasible);
  CHECK(has_kind(v, "planarity"));

  auto good = assign(inst, {{"a-c", Side::Left}, {"b-d", Side::Right}});
  CHECK(check_assignment(inst, good).feasible);
}

TEST_CASE("alternating chords of different graphs may share a side") {
  Instance inst = make_cycle_instance({"a", "b", "c", "d", "e", "f"},
                                      {{{"a", "c"}}, {{"b", "d"}}});
  auto a = assign(inst, {{"a-c", Side::Left}, {"b-d", Side::Left}});
  CHECK(check_assignment(inst, a).feasible);
}

TEST_CASE("check_assignment enforces the same-side trigger at a vertex") {
  // two graph-0 chords at a on one side force the graph-1 chord at a there too
  Instance inst = make_cycle_instance({"a", "b", "c", "d", "e", "f"},
                                      {{{"a", "c"}, {"a", "e"}}, {{"a", "d"}}});
  auto bad = assign(inst, {{"a-c", Side::Left}, {"a-e", Side::Left}, {"a-d", Side::Right}});
  Verdict v = check_assignment(inst, bad);
  CHECK(!v.feasible);
  CHECK(has_kind(v, "orthogonality"));

  auto good = assign(inst, {{"a-c", Side::Left}, {"a-e", Side::Left}, {"a-d", Side::Left}});
  CHECK(check_assignment(inst, good).feasible);

  // a split graph-0 pair leaves the graph-1 chord free
  auto split = assign(inst, {{"a-c", Side::Left}, {"a-e", Side::Right}, {"a-d", Side::Right}});
  CHECK(check_assignment(inst, split).feasible);
}

TEST_CASE("check_assignment rejects partial or excessive assignments") {
  Instance inst = make_cycle_instance({"a", "b", "c", "d"}, {{{"a", "c"}}, {{"b", "d"}}});
  SideAssignment partial{{E(inst, "a", "c"), Side::Left}};
  CHECK_THROWS_AS(check_assignment(inst, partial), InstanceError);

  SideAssignment extra{{E(inst, "a", "c"), Side::Left}, {E(inst, "b", "d"), Side::Left}};
  extra[E(inst, "a", "b")] = Side::Left;  // a shared edge has no side
  CHECK_THROWS_AS(check_assignment(inst, extra), InstanceError);
}

TEST_CASE("oracle agrees with the brute-force reference on all small instances") {
  int checked = 0, feasible = 0;
  for (int n = 4; n <= 7; ++n) {
    testref::enumerate_cycle_instances(n, 4, 2, [&](const Instance& inst) {
      bool naive = testref::naive_cycle_feasible(inst);
      Verdict v = oracle(inst);
      REQUIRE(naive == v.feasible);
      if (v.feasible) {
        ++feasible;
        REQUIRE(v.witness.has_value());
        CHECK(check_assignment(inst, *v.witness).feasible);
      }
      ++checked;
    });
  }
  CHECK(checked > 20000);
  CHECK(feasible > 15000);
  CHECK(checked - feasible > 300);  // the corpus exercises both verdicts
}

TEST_CASE("oracle agrees with the reference on three-graph instances") {
  int checked = 0, infeasible = 0;
  for (int n = 5; n <= 6; ++n) {
    testref::enumerate_cycle_instances(n, 4, 3, [&](const Instance& inst) {
      bool naive = testref::naive_cycle_feasible(inst);
      REQUIRE(naive == oracle(inst).feasible);
      if (!naive) ++infeasible;
      ++checked;
    });
  }
  CHECK(checked > 13000);
  CHECK(infeasible > 50);
}

TEST_CASE("oracle respects its cap") {
  std::vector<std::string> names;
  for (int i = 0; i < 12; ++i) names.push_back("v" + std::to_string(i));
  std::vector<NamePair> chords;
  for (int i = 0; i < 6; ++i) chords.push_back({names[i], names[i + 5]});
  Instance inst = make_cycle_instance(names, {chords, {}});
  OracleOptions opt;
  opt.cap = 5;
  CHECK_THROWS_WITH_AS(oracle(inst, opt), doctest::Contains("cap exceeded"), InstanceError);
  opt.cap = 6;
  CHECK_NOTHROW(oracle(inst, opt));
}

TEST_CASE("oracle is deterministic and job count does not change the result") {
  testref::enumerate_cycle_instances(6, 2, 2, [&](const Instance& inst) {
    Verdict one = oracle(inst);
    OracleOptions par;
    par.jobs = 3;
    Verdict many = oracle(inst, par);
    REQUIRE(one.feasible == many.feasible);
    if (one.feasible) REQUIRE(*one.witness == *many.witness);
  });
}

TEST_CASE("exclusive-edge groups: chords and alternating paths") {
  // chord group
  Instance chordy = make_cycle_instance({"a", "b", "c", "d"}, {{{"a", "c"}}, {}});
  auto gs = exclusive_groups(chordy);
  REQUIRE(gs.size() == 1);
  CHECK(gs[0].chord());

  // alternating two-link path through one isolated vertex
  Instance path =
      make_cycle_instance({"a", "b", "c", "d"}, {{{"a", "x"}}, {{"x", "c"}}}, {"x"});
  auto gp = exclusive_groups(path);
  REQUIRE(gp.size() == 1);
  CHECK(gp[0].links.size() == 2);
  CHECK(gp[0].anchor_a == path.id_of("a"));
  CHECK(gp[0].anchor_b == path.id_of("c"));

  // consecutive links of the same graph are malformed
  Instance same =
      make_cycle_instance({"a", "b", "c", "d"}, {{{"a", "x"}, {"x", "c"}}, {}}, {"x"});
  CHECK_THROWS_AS(exclusive_groups(same), InstanceError);

  // a dangling isolated vertex never closes a path
  Instance dangling = make_cycle_instance({"a", "b", "c", "d"}, {{{"a", "x"}}, {}}, {"x"});
  CHECK_THROWS_AS(exclusive_groups(dangling), InstanceError);
}

TEST_CASE("a group through isolated vertices takes one side as a whole") {
  Instance inst =
      make_cycle_instance({"a", "b", "c", "d"}, {{{"a", "x"}}, {{"x", "c"}}}, {"x"});
  auto both_left = assign(inst, {{"a-x", Side::Left}, {"c-x", Side::Left}});
  CHECK(check_assignment(inst, both_left).feasible);
  auto torn = assign(inst, {{"a-x", Side::Left}, {"c-x", Side::Right}});
  Verdict v = check_assignment(inst, torn);
  CHECK(!v.feasible);
  CHECK(has_kind(v, "planarity"));
}

TEST_CASE("witness serialization round-trips") {
  Instance inst = make_cycle_instance({"a", "b", "c", "d"}, {{{"a", "c"}}, {{"b", "d"}}});
  auto a = assign(inst, {{"a-c", Side::Left}, {"b-d", Side::Right}});
  SideAssignment back = load_witness(inst, serialize_witness(inst, a));
  CHECK(back == a);
  CHECK_THROWS_AS(load_witness(inst, "{}"), InstanceError);
  CHECK_THROWS_AS(load_witness(inst, R"({"assignment":{"a-c":"X","b-d":"L"}})"), InstanceError);
}

TEST_CASE("rotation systems: validation and round-trip") {
  Instance inst = make_cycle_instance({"a", "b", "c", "d"}, {{{"a", "c"}}, {}});
  auto rot = testref::exhaustive_rotation_search(inst);
  REQUIRE(rot.has_value());
  CHECK(check_sefe_orthogonality(inst, *rot).feasible);
  RotationSystem back = load_rotation_system(inst, serialize_rotation_system(inst, *rot));
  CHECK(back == *rot);

  RotationSystem wrong = *rot;
  wrong[inst.id_of("a")].pop_back();
  CHECK_THROWS_AS(check_sefe_orthogonality(inst, wrong), InstanceError);
}

TEST_CASE("some rotation of a chorded cycle is rejected as not a sefe") {
  // cycle plus one chord: a rotation can force genus onto the chord's graph
  Instance inst = make_cycle_instance({"a", "b", "c", "d"}, {{{"a", "c"}}, {}});
  int planar = 0, twisted = 0;
  std::vector<VertexId> deg3 = {inst.id_of("a"), inst.id_of("c")};
  // enumerate every rotation: degree-3 vertices have two distinct rotations
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      RotationSystem rot;
      for (VertexId v = 0; v < inst.vertex_count(); ++v) {
        auto inc = testref::incident_union_edges(inst, v);
        if ((v == deg3[0] && i) || (v == deg3[1] && j)) std::swap(inc[1], inc[2]);
        rot[v] = inc;
      }
      Verdict out = check_sefe_orthogonality(inst, rot);
      if (has_kind(out, "not-a-sefe"))
        ++twisted;
      else
        ++planar;
    }
  CHECK(planar == 2);   // chord on either side of the cycle
  CHECK(twisted == 2);  // mismatched ends twist the chord
}

TEST_CASE("at a shared-degree-3 vertex all exclusive edges share one gap") {
  // theta graph: three pole-to-pole paths of length three
  Instance inst = make_shared_instance(
      {"p", "a1", "a2", "q", "b1", "b2", "c1", "c2"},
      {{"p", "a1"}, {"a1", "a2"}, {"a2", "q"},
       {"p", "b1"}, {"b1", "b2"}, {"b2", "q"},
       {"p", "c1"}, {"c1", "c2"}, {"c2", "q"}},
      {{{"p", "a2"}}, {{"p", "b2"}}});
  VertexId p = inst.id_of("p");

  auto base_rotation = [&](int slot_a2, int slot_b2, int flip_a2, int flip_b2) {
    // pole p: shared edges ccw a1, b1, c1 with the two exclusive edges
    // inserted after slot 0, 1 or 2; pole q reversed for planarity.
    RotationSystem rot;
    std::vector<Edge> pr;
    std::vector<Edge> pshared = {E(inst, "p", "a1"), E(inst, "p", "b1"), E(inst, "p", "c1")};
    for (int s = 0; s < 3; ++s) {
      pr.push_back(pshared[s]);
      if (slot_a2 == s) pr.push_back(E(inst, "p", "a2"));
      if (slot_b2 == s) pr.push_back(E(inst, "p", "b2"));
    }
    rot[p] = pr;
    rot[inst.id_of("q")] = {E(inst, "q", "c2"), E(inst, "q", "b2"), E(inst, "q", "a2")};
    for (const char* name : {"a1", "b1", "c1", "c2"}) {
      VertexId v = inst.id_of(name);
      rot[v] = testref::incident_union_edges(inst, v);
    }
    VertexId a2 = inst.id_of("a2"), b2 = inst.id_of("b2");
    rot[a2] = testref::incident_union_edges(inst, a2);
    if (flip_a2) std::swap(rot[a2][1], rot[a2][2]);
    rot[b2] = testref::incident_union_edges(inst, b2);
    if (flip_b2) std::swap(rot[b2][1], rot[b2][2]);
    return rot;
  };

  // same gap for both exclusive edges: some orientation of the interior
  // vertices embeds both graphs and satisfies the gap rule
  bool same_gap_ok = false;
  for (int fa = 0; fa < 2 && !same_gap_ok; ++fa)
    for (int fb = 0; fb < 2 && !same_gap_ok; ++fb)
      same_gap_ok = check_sefe_orthogonality(inst, base_rotation(0, 0, fa, fb)).feasible;
  CHECK(same_gap_ok);

  // splitting the exclusives across two gaps never verifies, and at least one
  // orientation fails on the gap rule with both graphs still planar
  bool any_ok = false, gap_violation = false;
  for (int fa = 0; fa < 2; ++fa)
    for (int fb = 0; fb < 2; ++fb) {
      Verdict out = check_sefe_orthogonality(inst, base_rotation(0, 1, fa, fb));
      any_ok |= out.feasible;
      if (!out.feasible && !has_kind(out, "not-a-sefe") && has_kind(out, "orthogonality"))
        gap_violation = true;
    }
  CHECK(!any_ok);
  CHECK(gap_violation);
}

TEST_CASE("rotation_from_assignment realizes every feasible oracle witness") {
  int realized = 0;
  for (int n = 4; n <= 7; ++n) {
    testref::enumerate_cycle_instances(n, 4, 2, [&](const Instance& inst) {
      if (!inst.isolated.empty()) return;
      Verdict v = oracle(inst);
      if (!v.feasible) return;
      RotationSystem rot = rotation_from_assignment(inst, *v.witness);
      REQUIRE(check_sefe_orthogonality(inst, rot).feasible);
      ++realized;
    });
  }
  CHECK(realized > 15000);
}

TEST_CASE("rotation_from_assignment rejects infeasible assignments") {
  Instance inst = make_cycle_instance({"a", "b", "c", "d", "e", "f"},
                                      {{{"a", "c"}, {"b", "d"}}, {}});
  auto bad = assign(inst, {{"a-c", Side::Left}, {"b-d", Side::Left}});
  CHECK_THROWS_AS(rotation_from_assignment(inst, bad), InstanceError);
}
