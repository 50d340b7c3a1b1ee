#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cggm/color_space.hpp"
#include "cggm/colored_graph.hpp"
#include "cggm/errors.hpp"

namespace fixtures {

using cggm::ColoredGraph;
using cggm::Edge;
using cggm::Matrix;

inline ColoredGraph uncolored(int p, std::vector<Edge> edges) { return ColoredGraph::uncolored(p, edges); }

inline ColoredGraph path(int n) {
  std::vector<Edge> e;
  for (int v = 1; v < n; ++v) e.push_back({v, v + 1});
  return uncolored(n, e);
}

inline std::vector<Edge> complete_edges(int n) {
  std::vector<Edge> e;
  for (int v = 1; v <= n; ++v)
    for (int w = v + 1; w <= n; ++w) e.push_back({v, w});
  return e;
}

inline ColoredGraph complete(int n) { return uncolored(n, complete_edges(n)); }

inline std::vector<Edge> cycle_edges(int n) {
  std::vector<Edge> e;
  for (int v = 1; v < n; ++v) e.push_back({v, v + 1});
  e.push_back({1, n});
  return e;
}

// Triangle with singleton vertex classes Blue, Red, Green; Orange = {12, 13}, Purple = {23}.
inline ColoredGraph k3_example() {
  return ColoredGraph(3, complete_edges(3), {{1}, {2}, {3}}, {{{1, 2}, {1, 3}}, {{2, 3}}}, {"Blue", "Red", "Green"});
}

// One vertex color; edges colored a, b, c, d by the circulant-like pattern.
inline ColoredGraph circulant6() {
  const char* rows[6] = {"*acdcb", "a*bcdc", "cb*acd", "dca*bc", "cdcb*a", "bcdca*"};
  std::map<char, std::vector<Edge>> cls;
  for (int v = 1; v <= 6; ++v)
    for (int w = v + 1; w <= 6; ++w) cls[rows[v - 1][w - 1]].push_back({v, w});
  std::vector<std::vector<Edge>> ec;
  for (auto& [c, es] : cls) ec.push_back(es);
  return ColoredGraph(6, complete_edges(6), {{1, 2, 3, 4, 5, 6}}, ec);
}

inline Matrix unit_sym(int p, std::vector<std::pair<std::pair<int, int>, double>> entries) {
  Matrix x = Matrix::Zero(p, p);
  for (auto& [ij, v] : entries) {
    x(ij.first - 1, ij.second - 1) = v;
    x(ij.second - 1, ij.first - 1) = v;
  }
  return x;
}

// The non-graphical 4x4 space with parameters a, b, c, d, e.
inline std::vector<Matrix> four_by_four_basis() {
  return {unit_sym(4, {{{1, 1}, 1}, {{2, 2}, 1}}),
          unit_sym(4, {{{1, 3}, 1}, {{2, 4}, 1}}),
          unit_sym(4, {{{1, 4}, 1}, {{2, 3}, -1}}),
          unit_sym(4, {{{3, 3}, 1}, {{4, 4}, 1}}),
          unit_sym(4, {{{3, 4}, 1}})};
}

inline cggm::ColorSpace four_by_four() { return cggm::space_from_basis(four_by_four_basis(), {2, 2}); }

// Petersen graph: 2-subsets of {1..5}, adjacent when disjoint.
inline Matrix petersen_adjacency() {
  std::vector<std::pair<int, int>> sets;
  for (int a = 1; a <= 5; ++a)
    for (int b = a + 1; b <= 5; ++b) sets.push_back({a, b});
  Matrix b = Matrix::Zero(10, 10);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      auto [a1, b1] = sets[i];
      auto [a2, b2] = sets[j];
      if (a1 != a2 && a1 != b2 && b1 != a2 && b1 != b2) b(i, j) = 1;
    }
  return b;
}

// Complete graph K10 with one vertex color and edge colors {Petersen edges, non-edges}.
inline ColoredGraph petersen_colored() {
  const Matrix b = petersen_adjacency();
  std::vector<Edge> on, off;
  for (int v = 1; v <= 10; ++v)
    for (int w = v + 1; w <= 10; ++w) (b(v - 1, w - 1) > 0 ? on : off).push_back({v, w});
  std::vector<int> all(10);
  for (int v = 0; v < 10; ++v) all[v] = v + 1;
  return ColoredGraph(10, complete_edges(10), {all}, {on, off});
}

// Two isolated vertices sharing one color.
inline ColoredGraph isolated_pair() { return ColoredGraph(2, {}, {{1, 2}}, {}); }

// K2 with one vertex color and one edge color.
inline ColoredGraph k2_colored() { return ColoredGraph(2, {{1, 2}}, {{1, 2}}, {{{1, 2}}}); }

inline Matrix random_pd(int p, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Matrix m(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) m(i, j) = n(rng);
  return m * m.transpose() / p + 0.5 * Matrix::Identity(p, p);
}

}  // namespace fixtures

namespace fixtures {

// Chordal graph grown by attaching each new vertex to a random subset of an existing clique.
inline std::vector<Edge> random_chordal_edges(int p, std::mt19937_64& rng, double keep = 0.7) {
  std::vector<std::vector<int>> cliques{{1}};
  std::vector<Edge> edges;
  std::bernoulli_distribution coin(keep);
  for (int v = 2; v <= p; ++v) {
    std::uniform_int_distribution<std::size_t> pick(0, cliques.size() - 1);
    const auto base = cliques[pick(rng)];
    std::vector<int> c{v};
    for (int u : base)
      if (coin(rng)) {
        c.push_back(u);
        edges.push_back(cggm::make_edge(u, v));
      }
    cliques.push_back(c);
  }
  return edges;
}

struct SymmetricGraph {
  int p = 0;
  std::vector<Edge> edges;
  std::vector<cggm::Permutation> generators;
};

// k copies of a random chordal graph H, each fully joined to a central clique.
// Generators are drawn from copy permutations and central-clique permutations,
// rejected until the generated group has order <= max_order.
inline SymmetricGraph random_symmetric_decomposable(std::mt19937_64& rng, std::size_t max_order = 100) {
  std::uniform_int_distribution<int> hsize(1, 3), copies(2, 4), csize(0, 3);
  for (;;) {
    const int h = hsize(rng), k = copies(rng), c = csize(rng);
    const auto he = random_chordal_edges(h, rng);
    SymmetricGraph g;
    g.p = k * h + c;
    auto vert = [&](int copy, int x) { return copy * h + x; };
    for (int copy = 0; copy < k; ++copy)
      for (const auto& e : he) g.edges.push_back(cggm::make_edge(vert(copy, e.v), vert(copy, e.w)));
    const int c0 = k * h;
    for (int a = 1; a <= c; ++a) {
      for (int b = a + 1; b <= c; ++b) g.edges.push_back({c0 + a, c0 + b});
      for (int v = 1; v <= k * h; ++v) g.edges.push_back({v, c0 + a});
    }
    auto copy_perm = [&](const std::vector<int>& img) {
      cggm::Permutation s(g.p);
      for (int v = 1; v <= g.p; ++v) s[v - 1] = v;
      for (int copy = 0; copy < k; ++copy)
        for (int x = 1; x <= h; ++x) s[vert(copy, x) - 1] = vert(img[copy], x);
      return s;
    };
    auto clique_perm = [&](const std::vector<int>& img) {
      cggm::Permutation s(g.p);
      for (int v = 1; v <= g.p; ++v) s[v - 1] = v;
      for (int a = 0; a < c; ++a) s[c0 + a] = c0 + img[a] + 1;
      return s;
    };
    std::uniform_int_distribution<int> ngens(1, 2), kind(0, 3);
    const int n = ngens(rng);
    for (int i = 0; i < n; ++i) {
      std::vector<int> img;
      switch (kind(rng)) {
        case 0:  // rotate copies
          for (int copy = 0; copy < k; ++copy) img.push_back((copy + 1) % k);
          g.generators.push_back(copy_perm(img));
          break;
        case 1:  // swap two copies
          for (int copy = 0; copy < k; ++copy) img.push_back(copy);
          std::swap(img[0], img[1 + static_cast<int>(rng() % (k - 1))]);
          g.generators.push_back(copy_perm(img));
          break;
        case 2:  // rotate the central clique
          if (c < 2) break;
          for (int a = 0; a < c; ++a) img.push_back((a + 1) % c);
          g.generators.push_back(clique_perm(img));
          break;
        default:  // swap two central vertices
          if (c < 2) break;
          for (int a = 0; a < c; ++a) img.push_back(a);
          std::swap(img[0], img[1]);
          g.generators.push_back(clique_perm(img));
          break;
      }
    }
    if (g.generators.empty()) continue;
    try {
      if (cggm::enumerate_group(g.p, g.generators, max_order).size() <= max_order) return g;
    } catch (const cggm::group_too_large&) {
    }
  }
}

}  // namespace fixtures
