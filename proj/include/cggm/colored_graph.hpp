#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "cggm/linalg.hpp"

namespace cggm {

// Undirected edge between 1-based vertices, stored with v < w.
struct Edge {
  int v = 0;
  int w = 0;
  auto operator<=>(const Edge&) const = default;
};

Edge make_edge(int v, int w);

// Image notation: sigma[v-1] is the image of vertex v.
using Permutation = std::vector<int>;

// Undirected graph on [p] with a vertex coloring (colors 1..r) and an edge
// coloring (colors r+1..r+R).  Color 0 marks non-edges.
class ColoredGraph {
 public:
  ColoredGraph() = default;
  ColoredGraph(int p, std::vector<Edge> edges, std::vector<std::vector<int>> vertex_classes,
               std::vector<std::vector<Edge>> edge_classes, std::vector<std::string> class_names = {});

  // All-singleton coloring of a plain graph.
  static ColoredGraph uncolored(int p, const std::vector<Edge>& edges);

  int p() const { return p_; }
  int r() const { return static_cast<int>(vertex_classes_.size()); }
  int R() const { return static_cast<int>(edge_classes_.size()); }
  int num_colors() const { return r() + R(); }

  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::vector<int>>& vertex_classes() const { return vertex_classes_; }
  const std::vector<std::vector<Edge>>& edge_classes() const { return edge_classes_; }
  const std::vector<std::string>& class_names() const { return class_names_; }

  int vertex_color(int v) const { return color_of(v, v); }
  int color_of(int v, int w) const { return color_[idx(v, w)]; }
  bool adjacent(int v, int w) const { return v != w && color_[idx(v, w)] != 0; }
  std::vector<int> neighbors(int v) const;

  // Members of color k: vertices of a vertex class as loops (v,v), or edges.
  std::vector<Edge> extended_edges_of_color(int k) const;

  // Display name of vertex color i (falls back to the index).
  std::string color_name(int i) const;

  bool operator==(const ColoredGraph& o) const {
    return p_ == o.p_ && edges_ == o.edges_ && vertex_classes_ == o.vertex_classes_ &&
           edge_classes_ == o.edge_classes_;
  }

 private:
  std::size_t idx(int v, int w) const { return static_cast<std::size_t>(v - 1) * p_ + (w - 1); }

  int p_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> vertex_classes_;
  std::vector<std::vector<Edge>> edge_classes_;
  std::vector<std::string> class_names_;
  std::vector<int> color_;
};

// Orbit coloring of vertices and edges under the group generated by gens.
ColoredGraph rcop_coloring(int p, const std::vector<Edge>& edges, const std::vector<Permutation>& gens);

bool is_automorphism(int p, const std::vector<Edge>& edges, const Permutation& sigma);

// BFS closure of the generators.  Throws group_too_large beyond cap elements.
std::vector<Permutation> enumerate_group(int p, const std::vector<Permutation>& gens, std::size_t cap = 10000);

bool is_generously_transitive(int p, const std::vector<Permutation>& gens, std::size_t cap = 10000);

struct BasisMatrix {
  int color = 0;
  IntMatrix pattern;
};

std::vector<BasisMatrix> basis_matrices(const ColoredGraph& g);

struct Relabeling {
  ColoredGraph graph;
  std::vector<int> old_of_new;  // old_of_new[j-1] = original vertex now numbered j
};

// Renumber vertices so that V_{eta_1}, ..., V_{eta_r} occupy consecutive blocks.
// Vertex class i of the result is the old class eta_i; edge classes keep their order.
Relabeling relabel_for_ordering(const ColoredGraph& g, const std::vector<int>& eta);

// Apply a vertex renumbering (old_of_new) to a symmetric matrix.
Matrix permute_symmetric(const Matrix& x, const std::vector<int>& old_of_new);

}  // namespace cggm
