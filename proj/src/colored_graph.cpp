#include "cggm/colored_graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "cggm/errors.hpp"

namespace cggm {

Edge make_edge(int v, int w) { return v < w ? Edge{v, w} : Edge{w, v}; }

namespace {

void check_vertex(int p, int v) {
  if (v < 1 || v > p) throw input_error("vertex " + std::to_string(v) + " out of range 1.." + std::to_string(p));
}

void check_permutation(int p, const Permutation& s) {
  if (static_cast<int>(s.size()) != p) throw input_error("generator has wrong length");
  std::vector<char> seen(p, 0);
  for (int x : s) {
    check_vertex(p, x);
    if (seen[x - 1]++) throw input_error("generator is not a permutation");
  }
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

ColoredGraph::ColoredGraph(int p, std::vector<Edge> edges, std::vector<std::vector<int>> vertex_classes,
                           std::vector<std::vector<Edge>> edge_classes, std::vector<std::string> class_names)
    : p_(p),
      edges_(std::move(edges)),
      vertex_classes_(std::move(vertex_classes)),
      edge_classes_(std::move(edge_classes)),
      class_names_(std::move(class_names)) {
  if (p_ < 1) throw input_error("graph needs at least one vertex");
  color_.assign(static_cast<std::size_t>(p_) * p_, 0);

  for (auto& e : edges_) {
    check_vertex(p_, e.v);
    check_vertex(p_, e.w);
    if (e.v == e.w) throw input_error("self-loop in edge list");
    e = make_edge(e.v, e.w);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) throw input_error("duplicate edge");

  const int r = static_cast<int>(vertex_classes_.size());
  for (int i = 0; i < r; ++i) {
    auto& cls = vertex_classes_[i];
    if (cls.empty()) throw input_error("empty vertex class");
    std::sort(cls.begin(), cls.end());
    for (int v : cls) {
      check_vertex(p_, v);
      if (color_[idx(v, v)] != 0) throw input_error("vertex " + std::to_string(v) + " in two classes");
      color_[idx(v, v)] = i + 1;
    }
  }
  for (int v = 1; v <= p_; ++v)
    if (color_[idx(v, v)] == 0) throw input_error("vertex " + std::to_string(v) + " has no class");

  std::set<Edge> edge_set(edges_.begin(), edges_.end());
  for (std::size_t j = 0; j < edge_classes_.size(); ++j) {
    auto& cls = edge_classes_[j];
    if (cls.empty()) throw input_error("empty edge class");
    for (auto& e : cls) {
      e = make_edge(e.v, e.w);
      if (!edge_set.count(e)) throw input_error("edge class member is not an edge");
      if (color_[idx(e.v, e.w)] != 0) throw input_error("edge in two classes");
      color_[idx(e.v, e.w)] = color_[idx(e.w, e.v)] = r + 1 + static_cast<int>(j);
    }
    std::sort(cls.begin(), cls.end());
  }
  for (const auto& e : edges_)
    if (color_[idx(e.v, e.w)] == 0) throw input_error("edge {" + std::to_string(e.v) + "," + std::to_string(e.w) + "} has no class");
  if (!class_names_.empty() && static_cast<int>(class_names_.size()) != r)
    throw input_error("vertex class names do not match the number of classes");
}

ColoredGraph ColoredGraph::uncolored(int p, const std::vector<Edge>& edges) {
  std::vector<std::vector<int>> vc;
  for (int v = 1; v <= p; ++v) vc.push_back({v});
  std::vector<Edge> sorted = edges;
  for (auto& e : sorted) e = make_edge(e.v, e.w);
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::vector<Edge>> ec;
  for (const auto& e : sorted) ec.push_back({e});
  return ColoredGraph(p, sorted, vc, ec);
}

std::vector<int> ColoredGraph::neighbors(int v) const {
  std::vector<int> out;
  for (int w = 1; w <= p_; ++w)
    if (adjacent(v, w)) out.push_back(w);
  return out;
}

std::vector<Edge> ColoredGraph::extended_edges_of_color(int k) const {
  std::vector<Edge> out;
  if (k >= 1 && k <= r()) {
    for (int v : vertex_classes_[k - 1]) out.push_back({v, v});
  } else if (k > r() && k <= num_colors()) {
    out = edge_classes_[k - r() - 1];
  }
  return out;
}

std::string ColoredGraph::color_name(int i) const {
  if (!class_names_.empty() && i >= 1 && i <= r()) return class_names_[i - 1];
  return std::to_string(i);
}

bool is_automorphism(int p, const std::vector<Edge>& edges, const Permutation& sigma) {
  check_permutation(p, sigma);
  std::set<Edge> es;
  for (const auto& e : edges) es.insert(make_edge(e.v, e.w));
  for (const auto& e : es)
    if (!es.count(make_edge(sigma[e.v - 1], sigma[e.w - 1]))) return false;
  return true;
}

ColoredGraph rcop_coloring(int p, const std::vector<Edge>& edges, const std::vector<Permutation>& gens) {
  for (const auto& s : gens)
    if (!is_automorphism(p, edges, s)) throw input_error("generator is not an automorphism of the graph");

  std::vector<Edge> es;
  for (const auto& e : edges) es.push_back(make_edge(e.v, e.w));
  std::sort(es.begin(), es.end());
  std::map<Edge, int> edge_index;
  for (std::size_t j = 0; j < es.size(); ++j) edge_index[es[j]] = static_cast<int>(j);

  UnionFind vu(p);
  UnionFind eu(static_cast<int>(es.size()));
  for (const auto& s : gens) {
    for (int v = 1; v <= p; ++v) vu.unite(v - 1, s[v - 1] - 1);
    for (std::size_t j = 0; j < es.size(); ++j)
      eu.unite(static_cast<int>(j), edge_index.at(make_edge(s[es[j].v - 1], s[es[j].w - 1])));
  }

  // Roots are the smallest member, so classes come out ordered by their first element.
  std::map<int, std::vector<int>> vclasses;
  for (int v = 1; v <= p; ++v) vclasses[vu.find(v - 1)].push_back(v);
  std::map<int, std::vector<Edge>> eclasses;
  for (std::size_t j = 0; j < es.size(); ++j) eclasses[eu.find(static_cast<int>(j))].push_back(es[j]);

  std::vector<std::vector<int>> vc;
  for (auto& [root, cls] : vclasses) vc.push_back(cls);
  std::vector<std::vector<Edge>> ec;
  for (auto& [root, cls] : eclasses) ec.push_back(cls);
  return ColoredGraph(p, es, vc, ec);
}

std::vector<Permutation> enumerate_group(int p, const std::vector<Permutation>& gens, std::size_t cap) {
  for (const auto& s : gens) check_permutation(p, s);
  Permutation id(p);
  std::iota(id.begin(), id.end(), 1);
  std::set<Permutation> seen{id};
  std::vector<Permutation> out{id};
  std::deque<Permutation> queue{id};
  while (!queue.empty()) {
    Permutation g = queue.front();
    queue.pop_front();
    for (const auto& s : gens) {
      Permutation h(p);
      for (int v = 0; v < p; ++v) h[v] = s[g[v] - 1];
      if (seen.insert(h).second) {
        if (seen.size() > cap) throw group_too_large("group order exceeds " + std::to_string(cap));
        out.push_back(h);
        queue.push_back(std::move(h));
      }
    }
  }
  return out;
}

bool is_generously_transitive(int p, const std::vector<Permutation>& gens, std::size_t cap) {
  const auto group = enumerate_group(p, gens, cap);
  std::set<std::pair<int, int>> swapped;
  for (const auto& g : group)
    for (int v = 1; v <= p; ++v) {
      int w = g[v - 1];
      if (w != v && g[w - 1] == v) swapped.insert({std::min(v, w), std::max(v, w)});
    }
  UnionFind orbits(p);
  for (const auto& g : group)
    for (int v = 1; v <= p; ++v) orbits.unite(v - 1, g[v - 1] - 1);
  for (int v = 1; v <= p; ++v)
    for (int w = v + 1; w <= p; ++w)
      if (orbits.find(v - 1) == orbits.find(w - 1) && !swapped.count({v, w})) return false;
  return true;
}

std::vector<BasisMatrix> basis_matrices(const ColoredGraph& g) {
  const int p = g.p();
  std::vector<BasisMatrix> out;
  for (int k = 1; k <= g.num_colors(); ++k) {
    BasisMatrix b{k, IntMatrix::Zero(p, p)};
    for (const auto& e : g.extended_edges_of_color(k)) b.pattern(e.v - 1, e.w - 1) = b.pattern(e.w - 1, e.v - 1) = 1;
    out.push_back(std::move(b));
  }
  return out;
}

Relabeling relabel_for_ordering(const ColoredGraph& g, const std::vector<int>& eta) {
  const int r = g.r();
  if (static_cast<int>(eta.size()) != r) throw input_error("ordering has wrong length");
  std::vector<char> seen(r, 0);
  for (int k : eta) {
    if (k < 1 || k > r || seen[k - 1]++) throw input_error("ordering is not a permutation of the vertex colors");
  }

  std::vector<int> old_of_new;
  for (int k : eta)
    for (int v : g.vertex_classes()[k - 1]) old_of_new.push_back(v);
  std::vector<int> new_of_old(g.p() + 1);
  for (std::size_t j = 0; j < old_of_new.size(); ++j) new_of_old[old_of_new[j]] = static_cast<int>(j) + 1;

  std::vector<std::vector<int>> vc;
  std::vector<std::string> names;
  for (int k : eta) {
    std::vector<int> cls;
    for (int v : g.vertex_classes()[k - 1]) cls.push_back(new_of_old[v]);
    vc.push_back(cls);
    if (!g.class_names().empty()) names.push_back(g.class_names()[k - 1]);
  }
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) edges.push_back(make_edge(new_of_old[e.v], new_of_old[e.w]));
  std::vector<std::vector<Edge>> ec;
  for (const auto& cls : g.edge_classes()) {
    std::vector<Edge> c;
    for (const auto& e : cls) c.push_back(make_edge(new_of_old[e.v], new_of_old[e.w]));
    ec.push_back(c);
  }
  return {ColoredGraph(g.p(), edges, vc, ec, names), old_of_new};
}

Matrix permute_symmetric(const Matrix& x, const std::vector<int>& old_of_new) {
  const auto n = static_cast<Eigen::Index>(old_of_new.size());
  if (x.rows() != n || x.cols() != n) throw input_error("matrix size does not match the permutation");
  Matrix y(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) y(a, b) = x(old_of_new[a] - 1, old_of_new[b] - 1);
  return y;
}

}  // namespace cggm
