#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is deliberately written from the constraint definitions,
// not by calling back into the code under test: the brute-force side search
// re-derives alternation from cycle positions, and the rotation search
// enumerates raw cyclic orders.  Keep these naive and obvious.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "orthosefe/constraints.hpp"
#include "orthosefe/instance.hpp"
#include "orthosefe/naesat.hpp"

namespace testref {

using orthosefe::Edge;
using orthosefe::Instance;
using orthosefe::RotationSystem;
using orthosefe::Side;
using orthosefe::SideAssignment;
using orthosefe::VertexId;

// ---------------------------------------------------------------------------
// Brute-force side-assignment search for cycle instances without isolated
// vertices: every exclusive edge is a chord.  Tries all 2^m assignments in
// mask order (bit 0 = first edge, 0 = Left) and returns the first one whose
// transcription of the two constraint families holds:
//   planarity     same-graph chords with interleaved endpoints get different
//                 sides;
//   orthogonality two same-graph chords meeting a vertex on the same side
//                 drag every exclusive edge at that vertex onto that side.
inline std::optional<SideAssignment> naive_cycle_search(const Instance& inst) {
  if (!inst.is_cycle_form() || !inst.isolated.empty())
    throw std::runtime_error("naive_cycle_search: expects a pure cycle instance");
  const auto& cyc = *inst.cycle;
  const int n = static_cast<int>(cyc.size());
  std::vector<int> pos(inst.vertex_count(), -1);
  for (int i = 0; i < n; ++i) pos[cyc[i]] = i;

  struct Chord {
    Edge e;
    int graph;
  };
  std::vector<Chord> chords;
  for (int g = 0; g < inst.k; ++g)
    for (Edge e : inst.exclusive[g]) chords.push_back({e, g});
  const int m = static_cast<int>(chords.size());
  if (m > 20) throw std::runtime_error("naive_cycle_search: instance too large");

  // Exactly one endpoint of f strictly inside the arc pos(e.u) -> pos(e.v).
  auto interleave = [&](Edge e, Edge f) {
    if (e.touches(f.u) || e.touches(f.v)) return false;
    auto inside = [&](VertexId x) {
      int a = pos[e.u], b = pos[e.v], p = pos[x];
      int span = (b - a + n) % n;
      int off = (p - a + n) % n;
      return off > 0 && off < span;
    };
    return inside(f.u) != inside(f.v);
  };

  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    auto side = [&](int i) { return (mask >> i) & 1u ? Side::Right : Side::Left; };
    bool ok = true;
    for (int i = 0; i < m && ok; ++i)
      for (int j = i + 1; j < m && ok; ++j)
        if (chords[i].graph == chords[j].graph && side(i) == side(j) &&
            interleave(chords[i].e, chords[j].e))
          ok = false;
    for (VertexId v = 0; v < inst.vertex_count() && ok; ++v) {
      for (int g = 0; g < inst.k && ok; ++g) {
        int forced = -1;  // 0 = Left, 1 = Right
        for (int i = 0; i < m; ++i)
          for (int j = i + 1; j < m; ++j)
            if (chords[i].graph == g && chords[j].graph == g && chords[i].e.touches(v) &&
                chords[j].e.touches(v) && side(i) == side(j))
              forced = side(i) == Side::Right ? 1 : 0;
        if (forced < 0) continue;
        for (int i = 0; i < m && ok; ++i)
          if (chords[i].e.touches(v) && side(i) != (forced ? Side::Right : Side::Left)) ok = false;
      }
    }
    if (ok) {
      SideAssignment a;
      for (int i = 0; i < m; ++i) a[chords[i].e] = side(i);
      return a;
    }
  }
  return std::nullopt;
}

inline bool naive_cycle_feasible(const Instance& inst) {
  return naive_cycle_search(inst).has_value();
}

// ---------------------------------------------------------------------------
// Exhaustive search over rotation systems.  Around each vertex the first
// incident edge is pinned and the rest are permuted, which covers every
// cyclic order exactly once.  The verifier is the arbiter.

inline std::vector<Edge> incident_union_edges(const Instance& inst, VertexId v) {
  std::vector<Edge> out;
  for (Edge e : inst.shared)
    if (e.touches(v)) out.push_back(e);
  for (const auto& list : inst.exclusive)
    for (Edge e : list)
      if (e.touches(v)) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

// Enumerates every rotation system and returns the first one `accept` takes;
// the plain search below instantiates it with the library verifier.
inline std::optional<RotationSystem> exhaustive_rotation_search_if(
    const Instance& inst, const std::function<bool(const RotationSystem&)>& accept,
    double max_space = 2e6) {
  std::vector<VertexId> verts;
  std::vector<std::vector<std::vector<Edge>>> orders;  // per vertex: candidate rotations
  double space = 1.0;
  for (VertexId v = 0; v < inst.vertex_count(); ++v) {
    auto inc = incident_union_edges(inst, v);
    if (inc.empty()) continue;
    std::vector<std::vector<Edge>> cand;
    if (inc.size() <= 2) {
      cand.push_back(inc);
    } else {
      std::vector<Edge> tail(inc.begin() + 1, inc.end());
      std::sort(tail.begin(), tail.end());
      do {
        std::vector<Edge> rot;
        rot.push_back(inc.front());
        rot.insert(rot.end(), tail.begin(), tail.end());
        cand.push_back(rot);
      } while (std::next_permutation(tail.begin(), tail.end()));
    }
    space *= static_cast<double>(cand.size());
    if (space > max_space) return std::nullopt;  // caller must pre-check tractability
    verts.push_back(v);
    orders.push_back(std::move(cand));
  }

  std::vector<size_t> idx(verts.size(), 0);
  while (true) {
    RotationSystem rot;
    for (size_t i = 0; i < verts.size(); ++i) rot[verts[i]] = orders[i][idx[i]];
    if (accept(rot)) return rot;
    size_t i = 0;
    while (i < idx.size()) {
      if (++idx[i] < orders[i].size()) break;
      idx[i] = 0;
      ++i;
    }
    if (i == idx.size()) return std::nullopt;
  }
}

inline std::optional<RotationSystem> exhaustive_rotation_search(const Instance& inst,
                                                                double max_space = 2e6) {
  return exhaustive_rotation_search_if(
      inst,
      [&](const RotationSystem& rot) {
        return orthosefe::check_sefe_orthogonality(inst, rot).feasible;
      },
      max_space);
}

// True when the instance is small enough for exhaustive_rotation_search.
inline bool rotation_search_tractable(const Instance& inst, double max_space = 2e6) {
  double space = 1.0;
  for (VertexId v = 0; v < inst.vertex_count(); ++v) {
    const auto d = incident_union_edges(inst, v).size();
    double perms = 1.0;
    for (size_t i = 2; i < d; ++i) perms *= static_cast<double>(i);
    space *= perms;
    if (space > max_space) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Brute-force not-all-equal satisfiability.  Variable 1 is the most
// significant bit so the first hit is lexicographically least with
// false < true, matching the solver's documented order.
inline std::optional<std::vector<bool>> nae_brute(const orthosefe::NaeFormula& f) {
  const int n = f.num_vars;
  if (n > 24) return std::nullopt;
  for (std::uint64_t word = 0; word < (1ull << n); ++word) {
    std::vector<bool> a(n);
    for (int i = 0; i < n; ++i) a[i] = (word >> (n - 1 - i)) & 1ull;
    bool ok = true;
    for (const auto& cl : f.clauses) {
      bool any_true = false, any_false = false;
      for (int lit : cl) {
        bool val = lit > 0 ? a[lit - 1] : !a[-lit - 1];
        (val ? any_true : any_false) = true;
      }
      if (!(any_true && any_false)) {
        ok = false;
        break;
      }
    }
    if (ok) return a;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Enumeration of all cycle instances: every subset of chords of an n-cycle of
// size at most max_edges, each chord assigned to one of k graphs, pruned by
// the per-graph degree-4 bound.  Chords are scanned in lexicographic order.
inline void enumerate_cycle_instances(int n, int max_edges, int k,
                                      const std::function<void(const Instance&)>& fn) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  std::vector<std::pair<int, int>> chords;
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j)
      if (!(i == 0 && j == n - 1)) chords.emplace_back(i, j);

  std::vector<std::vector<orthosefe::NamePair>> chosen(k);
  std::vector<std::vector<int>> extra(k, std::vector<int>(n, 0));  // exclusive degree

  std::function<void(size_t, int)> rec = [&](size_t from, int used) {
    fn(orthosefe::make_cycle_instance(names, chosen));
    if (used == max_edges) return;
    for (size_t c = from; c < chords.size(); ++c) {
      auto [i, j] = chords[c];
      for (int g = 0; g < k; ++g) {
        if (extra[g][i] == 2 || extra[g][j] == 2) continue;  // would exceed degree 4
        ++extra[g][i], ++extra[g][j];
        chosen[g].push_back({names[i], names[j]});
        rec(c + 1, used + 1);
        chosen[g].pop_back();
        --extra[g][i], --extra[g][j];
      }
    }
  };
  rec(0, 0);
}

}  // namespace testref
