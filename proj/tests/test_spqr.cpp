#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "orthosefe/constraints.hpp"
#include "orthosefe/gadgets.hpp"
#include "orthosefe/instance.hpp"
#include "orthosefe/spqr.hpp"

using namespace orthosefe;

namespace {

Instance theta(int len) {
  // three pole-to-pole paths of the given length
  std::vector<std::string> names{"p", "q"};
  std::vector<NamePair> shared;
  for (char branch : {'a', 'b', 'c'}) {
    std::string prev = "p";
    for (int i = 1; i < len; ++i) {
      std::string v = std::string(1, branch) + std::to_string(i);
      names.push_back(v);
      shared.push_back({prev, v});
      prev = v;
    }
    shared.push_back({prev, "q"});
  }
  return make_shared_instance(names, shared, {{}, {}});
}

Instance with_exclusive(const Instance& base, const std::vector<std::vector<NamePair>>& ex) {
  std::vector<NamePair> shared;
  for (Edge e : base.shared) shared.push_back({base.names[e.u], base.names[e.v]});
  return make_shared_instance(base.names, shared, ex);
}

int count_kind(const SpqrTree& t, NodeKind k) {
  int c = 0;
  for (const auto& n : t.nodes)
    if (n.kind == k) ++c;
  return c;
}

}  // namespace

TEST_CASE("decomposition of a plain cycle") {
  Instance inst = make_shared_instance(
      {"a", "b", "c", "d", "e"},
      {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "e"}, {"e", "a"}}, {{}, {}});
  SpqrTree t = build_spqr(inst);
  CHECK(count_kind(t, NodeKind::S) == 1);
  CHECK(count_kind(t, NodeKind::P) == 0);
  CHECK(count_kind(t, NodeKind::R) == 0);
  CHECK(count_kind(t, NodeKind::Q) == 5);
  CHECK(!dump_spqr(inst, t).empty());
}

TEST_CASE("decomposition of the complete graph on four vertices") {
  Instance inst = make_shared_instance(
      {"a", "b", "c", "d"},
      {{"a", "b"}, {"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}, {"c", "d"}}, {{}, {}});
  SpqrTree t = build_spqr(inst);
  CHECK(count_kind(t, NodeKind::R) == 1);
  CHECK(count_kind(t, NodeKind::S) == 0);
  CHECK(count_kind(t, NodeKind::P) == 0);
  CHECK(count_kind(t, NodeKind::Q) == 6);
}

TEST_CASE("decomposition of a theta graph") {
  SpqrTree t = build_spqr(theta(2));
  CHECK(count_kind(t, NodeKind::P) == 1);
  CHECK(count_kind(t, NodeKind::S) == 3);
  CHECK(count_kind(t, NodeKind::R) == 0);
  CHECK(count_kind(t, NodeKind::Q) == 6);
}

TEST_CASE("twin links are an involution and Q-nodes carry the real edges") {
  for (const Instance& inst : {theta(2), theta(3)}) {
    SpqrTree t = build_spqr(inst);
    std::multiset<Edge> reals;
    for (size_t n = 0; n < t.nodes.size(); ++n) {
      const auto& node = t.nodes[n];
      for (size_t s = 0; s < node.skeleton.size(); ++s) {
        const SkelEdge& se = node.skeleton[s];
        if (se.twin_node < 0) {
          CHECK(node.kind == NodeKind::Q);
          reals.insert(se.e);
          continue;
        }
        const SkelEdge& twin = t.nodes[se.twin_node].skeleton[se.twin_slot];
        CHECK(twin.twin_node == static_cast<int>(n));
        CHECK(twin.twin_slot == static_cast<int>(s));
        CHECK(twin.e == se.e);
      }
    }
    // every real edge appears exactly once across the Q-nodes
    std::multiset<Edge> expect(inst.shared.begin(), inst.shared.end());
    CHECK(reals == expect);
  }
}

TEST_CASE("expansions of one node's skeleton partition the real edges") {
  Instance inst = theta(3);
  SpqrTree t = build_spqr(inst);
  for (size_t n = 0; n < t.nodes.size(); ++n) {
    if (t.nodes[n].kind == NodeKind::Q) continue;
    std::multiset<Edge> seen;
    for (size_t s = 0; s < t.nodes[n].skeleton.size(); ++s)
      for (Edge e : expansion_edges(t, static_cast<int>(n), static_cast<int>(s))) seen.insert(e);
    std::multiset<Edge> expect(inst.shared.begin(), inst.shared.end());
    CHECK(seen == expect);
  }
}

TEST_CASE("expansion vertices of a theta branch") {
  Instance inst = theta(3);
  SpqrTree t = build_spqr(inst);
  // in the P-node, each virtual edge expands to one branch: two interior
  // vertices per branch of length three
  for (size_t n = 0; n < t.nodes.size(); ++n) {
    if (t.nodes[n].kind != NodeKind::P) continue;
    for (size_t s = 0; s < t.nodes[n].skeleton.size(); ++s) {
      auto verts = expansion_vertices(t, static_cast<int>(n), static_cast<int>(s));
      CHECK(verts.size() == 2);
      for (VertexId v : verts) {
        CHECK(v != inst.id_of("p"));
        CHECK(v != inst.id_of("q"));
      }
    }
  }
}

TEST_CASE("normalize_attachments leaves degree-two endpoints alone") {
  Instance inst = with_exclusive(theta(3), {{{"a1", "b1"}}, {{"a2", "b2"}}});
  NormalizeResult r = normalize_attachments(inst);
  CHECK(r.feasible);
  CHECK(r.subdivisions.empty());
  CHECK(r.removed.empty());
  CHECK(serialize_instance(r.instance) == serialize_instance(inst));
}

TEST_CASE("normalize_attachments rewrites a degree-three endpoint") {
  Instance inst = with_exclusive(theta(3), {{{"p", "b2"}}, {}});
  NormalizeResult r = normalize_attachments(inst);
  REQUIRE(r.feasible);
  CHECK(r.subdivisions.size() == 1);
  // afterwards every exclusive endpoint has exactly two shared edges
  for (int g = 0; g < r.instance.k; ++g)
    for (Edge e : r.instance.exclusive[g]) {
      CHECK(r.instance.shared_degree(e.u) == 2);
      CHECK(r.instance.shared_degree(e.v) == 2);
    }
  // feasibility is preserved
  REQUIRE(testref::rotation_search_tractable(inst));
  REQUIRE(testref::rotation_search_tractable(r.instance));
  CHECK(testref::exhaustive_rotation_search(inst).has_value() ==
        testref::exhaustive_rotation_search(r.instance).has_value());
}

TEST_CASE("extract_snode_instances on a theta with attachments") {
  Instance inst = with_exclusive(theta(3), {{{"a1", "b1"}}, {{"a2", "c1"}}});
  SpqrTree t = build_spqr(inst);
  ExtractResult ex = extract_snode_instances(inst, t);
  REQUIRE(ex.feasible);
  CHECK(ex.snodes.size() == 3);
  for (const SNodeInstance& s : ex.snodes) {
    REQUIRE(!s.ring.empty());
    CHECK(s.segment_of.size() == s.ring.size());
    for (int seg : s.segment_of)
      CHECK(seg < static_cast<int>(s.segments.size()));
    for (const VirtualSegment& vs : s.segments) {
      CHECK(vs.pole_a >= 0);
      CHECK(vs.pole_b >= 0);
      // attachments listed on the faces are behind vertices
      std::set<VertexId> behind(vs.behind.begin(), vs.behind.end());
      for (VertexId v : vs.side_cw) CHECK(behind.count(v));
      for (VertexId v : vs.side_ccw) CHECK(behind.count(v));
    }
  }
}

TEST_CASE("flatten_cycle produces a two-graph cycle instance") {
  Instance inst = with_exclusive(theta(3), {{{"a1", "b1"}}, {{"a2", "b2"}}});
  SpqrTree t = build_spqr(inst);
  ExtractResult ex = extract_snode_instances(inst, t);
  REQUIRE(ex.feasible);
  bool saw_segment = false;
  for (const SNodeInstance& s : ex.snodes) {
    Flattened f = flatten_cycle(inst, s);
    CHECK(f.instance.k == 2);
    CHECK(f.instance.is_cycle_form());
    CHECK(f.instance.isolated.empty());
    for (const auto& [orig, flat] : f.to_flat) CHECK(f.from_flat.at(flat) == orig);
    for (const auto& [flat, orig] : f.from_flat) CHECK(f.to_flat.at(orig) == flat);
    saw_segment |= !s.segments.empty();
  }
  CHECK(saw_segment);
}

TEST_CASE("solve_biconnected matches exhaustive search on hand instances") {
  std::vector<Instance> cases;
  cases.push_back(with_exclusive(theta(3), {{{"a1", "b1"}}, {}}));
  cases.push_back(with_exclusive(theta(3), {{{"a1", "b1"}}, {{"a2", "b2"}}}));
  cases.push_back(with_exclusive(theta(3), {{{"a1", "b1"}, {"a2", "c2"}}, {{"b1", "c1"}}}));
  cases.push_back(with_exclusive(theta(2), {{{"a1", "b1"}}, {{"b1", "c1"}}}));
  // square with one shared chord: two triangles sharing an edge
  cases.push_back(make_shared_instance(
      {"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "a"}, {"a", "c"}},
      {{{"b", "d"}}, {}}));
  for (const Instance& inst : cases) {
    CAPTURE(serialize_instance(inst));
    REQUIRE(testref::rotation_search_tractable(inst));
    bool want = testref::exhaustive_rotation_search(inst).has_value();
    BiconnectedSolution sol = solve_biconnected(inst);
    REQUIRE(sol.verdict.feasible == want);
    if (want) {
      REQUIRE(sol.rotation.has_value());
      CHECK(check_sefe_orthogonality(inst, *sol.rotation).feasible);
    }
  }
}

TEST_CASE("solve_biconnected agrees with the cycle pipeline on plain cycles") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    RandomSpec spec;
    spec.n = 7;
    spec.max_exclusive = 6;
    spec.seed = seed;
    Instance cyc = generate_random(spec);
    // shared-form copy of the same instance
    std::vector<NamePair> shared;
    for (Edge e : cyc.shared) shared.push_back({cyc.names[e.u], cyc.names[e.v]});
    std::vector<std::vector<NamePair>> ex(2);
    for (int g = 0; g < 2; ++g)
      for (Edge e : cyc.exclusive[g]) ex[g].push_back({cyc.names[e.u], cyc.names[e.v]});
    Instance inst = make_shared_instance(cyc.names, shared, ex);
    BiconnectedSolution sol = solve_biconnected(inst);
    Verdict direct = oracle(cyc);
    REQUIRE(sol.verdict.feasible == direct.feasible);
    if (sol.verdict.feasible)
      CHECK(check_sefe_orthogonality(inst, *sol.rotation).feasible);
  }
}

TEST_CASE("solve_biconnected agrees with exhaustive search on random instances") {
  int solved = 0;
  for (std::uint64_t seed = 1; seed <= 60 && solved < 25; ++seed) {
    RandomSpec spec;
    spec.n = 8;
    spec.max_exclusive = 5;
    spec.biconnected = true;
    spec.shared_chords = 2;
    spec.seed = seed;
    Instance inst = generate_random(spec);
    if (!testref::rotation_search_tractable(inst, 3e5)) continue;
    CAPTURE(serialize_instance(inst));
    bool want = testref::exhaustive_rotation_search(inst, 3e5).has_value();
    BiconnectedSolution sol = solve_biconnected(inst);
    REQUIRE(sol.verdict.feasible == want);
    if (want) CHECK(check_sefe_orthogonality(inst, *sol.rotation).feasible);
    ++solved;
  }
  CHECK(solved >= 20);
}

TEST_CASE("the alternative gadget wiring also solves the hand instances") {
  Instance inst = with_exclusive(theta(3), {{{"a1", "b1"}}, {{"a2", "b2"}}});
  bool want = testref::exhaustive_rotation_search(inst).has_value();
  BiconnectedSolution sol = solve_biconnected(inst, true);
  CHECK(sol.verdict.feasible == want);
}

TEST_CASE("solve_biconnected rejects non-biconnected shared graphs") {
  Instance path = make_shared_instance({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}, {{}, {}});
  CHECK_THROWS_AS(solve_biconnected(path), InstanceError);
}
