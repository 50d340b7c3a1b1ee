#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cggm/colored_graph.hpp"

namespace cggm {

// eta[i] is the vertex color placed at position i+1.
using Ordering = std::vector<int>;

// Sparse (k,h) -> count map; absent keys are zero.
using TwoPathTable = std::map<std::pair<int, int>, int>;

bool is_simplicial(const ColoredGraph& g, int v, const std::vector<int>& subset);

// Is every vertex of V_{eta_i} simplicial in G[V_{eta_i} u ... u V_{eta_r}]?
bool is_cpeo(const ColoredGraph& g, const Ordering& eta);

std::optional<Ordering> greedy_find_cpeo(const ColoredGraph& g);
std::optional<Ordering> cpeo_via_color_dag(const ColoredGraph& g);

bool is_peo(const ColoredGraph& g, const std::vector<int>& peo);
Ordering cpeo_from_peo(const ColoredGraph& g, const std::vector<int>& peo);

// m_{v->w}: u ranges over vertices whose color is placed no later than both c(v) and c(w).
TwoPathTable two_path_table(const ColoredGraph& g, const Ordering& eta, int v, int w);
TwoPathTable symmetric_two_path_table(const ColoredGraph& g, const Ordering& eta, int v, int w);

struct EdgePairWitness {
  Edge first;
  Edge second;
};

struct VertexPairWitness {
  int v = 0;
  int w = 0;
};

struct M1Result {
  bool holds = true;
  std::optional<EdgePairWitness> witness;
};

struct M2Result {
  bool holds = true;
  std::optional<VertexPairWitness> witness;
};

struct M3Result {
  bool holds = true;
  std::optional<EdgePairWitness> witness;  // second == first when a non-edge count is nonzero
};

M1Result check_m1(const ColoredGraph& g, const Ordering& eta);

struct FSets {
  std::vector<std::vector<int>> per_class;  // F_1..F_r
  std::vector<int> all;                     // F
};
FSets f_sets(const ColoredGraph& g);

M2Result check_m2(const ColoredGraph& g, const Ordering& eta);

// Group criterion on the block-lower-triangular part of the space.
M3Result check_m3(const ColoredGraph& g, const Ordering& eta);
M3Result check_m3(const ColoredGraph& relabeled);

enum class VerdictKind { NotDecomposableColoring, CpeoOnly, Cer, SymmetricCer };

std::string to_string(VerdictKind k);

struct CerVerdict {
  VerdictKind kind = VerdictKind::NotDecomposableColoring;
  std::optional<Ordering> ordering;
  std::optional<EdgePairWitness> m1_witness;    // for the first cpeo, when no cpeo passes M1
  std::optional<VertexPairWitness> m2_witness;  // for the returned Cer ordering
  bool is_cer() const { return kind == VerdictKind::Cer || kind == VerdictKind::SymmetricCer; }
};

CerVerdict classify(const ColoredGraph& g, int max_colors = 12);

}  // namespace cggm
