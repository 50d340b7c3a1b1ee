#include <doctest.h>

#include <algorithm>
#include <random>

#include "cggm/cer_analysis.hpp"
#include "cggm/color_space.hpp"
#include "fixtures.hpp"

using namespace cggm;

namespace {

ColorSpace graph_space(const ColoredGraph& g, const Ordering& eta) {
  return space_from_graph(relabel_for_ordering(g, eta).graph);
}

}  // namespace

TEST_CASE("block operators") {
  const BlockStructure bs({2, 1, 3});
  CHECK(bs.p() == 6);
  CHECK(bs.offset(2) == 3);
  CHECK(bs.block_of(4) == 2);
  const Matrix id = Matrix::Identity(6, 6);
  CHECK(block_diag(id, bs) == id);
  CHECK(block_tri(id, bs) == id);
  std::mt19937_64 rng(1);
  const Matrix x = fixtures::random_pd(6, rng);
  CHECK((block_tri(x, bs) + block_tri(x, bs).transpose() - block_diag(x, bs) - x).norm() < 1e-14);
  CHECK(block_tri(x, BlockStructure({6})) == x);
  CHECK(block_tri(x, bs)(0, 2) == 0.0);
  CHECK(block_tri(x, bs)(2, 0) == x(2, 0));
  CHECK_THROWS_AS(block_tri(Matrix::Identity(5, 5), bs), input_error);
  CHECK_THROWS_AS(BlockStructure({2, 0}), input_error);
}

TEST_CASE("spaces from graphs") {
  const auto p3 = fixtures::path(3);
  const auto s = graph_space(p3, {1, 3, 2});
  CHECK(s.dim() == 5);
  CHECK(s.blocks().r() == 3);
  const auto c = graph_space(fixtures::circulant6(), {1});
  CHECK(c.dim() == 5);
  CHECK(c.blocks().r() == 1);
  const auto kn = rcop_coloring(5, fixtures::complete_edges(5), {{2, 3, 4, 5, 1}, {2, 1, 3, 4, 5}});
  CHECK(space_from_graph(kn).dim() == 2);
  CHECK(s.integral());
  CHECK_THROWS_AS(space_from_graph(ColoredGraph(3, {{1, 2}}, {{1, 3}, {2}}, {{{1, 2}}})), input_error);
}

TEST_CASE("spaces from raw bases") {
  const auto s = fixtures::four_by_four();
  CHECK(s.dim() == 5);
  CHECK(s.blocks().r() == 2);
  CHECK(s.diagonal_indices(0).size() == 1);
  CHECK(s.strip_indices(0).size() == 2);
  CHECK(s.diagonal_indices(1).size() == 2);
  CHECK(s.strip_indices(1).empty());

  std::vector<Matrix> full;
  for (int a = 1; a <= 3; ++a)
    for (int b = a; b <= 3; ++b) full.push_back(fixtures::unit_sym(3, {{{a, b}, 1.0}}));
  CHECK(space_from_basis(full, {3}).dim() == 6);

  // straddles the (1,1) block and the strip below it
  auto bad = fixtures::four_by_four_basis();
  bad[0] = fixtures::unit_sym(4, {{{1, 1}, 1}, {{2, 2}, 1}, {{1, 3}, 1}, {{2, 4}, 1}});
  bad.erase(bad.begin() + 1);
  CHECK_THROWS_AS(space_from_basis(bad, {2, 2}), classification_error);
  // identity missing
  auto noid = fixtures::four_by_four_basis();
  noid.erase(noid.begin() + 3);
  CHECK_THROWS_AS(space_from_basis(noid, {2, 2}), classification_error);
  // dependent basis
  auto dep = fixtures::four_by_four_basis();
  dep.push_back(dep[1] * 2.0);
  CHECK_THROWS_AS(space_from_basis(dep, {2, 2}), input_error);
}

TEST_CASE("membership") {
  const auto s = fixtures::four_by_four();
  for (const auto& el : s.basis()) CHECK(s.member(el.matrix));
  Matrix unequal = fixtures::unit_sym(4, {{{1, 1}, 1}, {{2, 2}, 2}});
  CHECK_FALSE(s.member(unequal));
  // (2,3) entry must be the negative of (1,4); perturb along an explicit off-span direction
  const Matrix x = s.basis()[2].matrix * 3.0 + s.basis()[0].matrix;
  const Matrix off = fixtures::unit_sym(4, {{{1, 4}, 1}, {{2, 3}, 1}}) / 2.0;
  CHECK(s.project(off).norm() < 1e-15);
  CHECK(s.member(x));
  CHECK_FALSE(s.member(x + 10.0 * 1e-10 * x.norm() * off));
  const Vector z = s.project(x);
  CHECK((s.from_coordinates(z) - x).norm() < 1e-14);

  const auto g = graph_space(fixtures::path(3), {1, 3, 2});
  IntMatrix ix = IntMatrix::Identity(3, 3);
  CHECK(g.integer_residual(ix) == 0);
  ix(0, 1) = ix(1, 0) = 1;  // new vertices 1 and 2 are the two leaves
  CHECK(g.integer_residual(ix) > 0);
}

TEST_CASE("measure factor") {
  const auto s = graph_space(fixtures::k2_colored(), {1});
  // J = I_2 and the off-diagonal pair, both of norm sqrt 2
  CHECK(s.log_measure_factor() == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("Z1 and Z2 on the worked examples") {
  const auto c = graph_space(fixtures::circulant6(), {1});
  CHECK(check_z1(c).holds);
  const auto z2 = check_z2(c);
  CHECK_FALSE(z2.holds);
  CHECK(z2.witness.has_value());
  const auto f = fixtures::four_by_four();
  CHECK(check_z1(f).holds);
  CHECK(check_z2(f).holds);
  CHECK(check_z2(graph_space(fixtures::path(4), {1, 2, 3, 4})).holds);
}

TEST_CASE("4-cycle fails Z1 for every ordering") {
  const auto g = fixtures::uncolored(4, fixtures::cycle_edges(4));
  Ordering eta{1, 2, 3, 4};
  int count = 0;
  do {
    const auto s = graph_space(g, eta);
    const auto rep = check_z1(s);
    CHECK_FALSE(rep.holds);
    CHECK(rep.worst_residual > 0.0);
    ++count;
  } while (std::next_permutation(eta.begin(), eta.end()));
  CHECK(count == 24);
}

TEST_CASE("CER graphs give BC-spaces") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sg = fixtures::random_symmetric_decomposable(rng);
    const auto g = rcop_coloring(sg.p, sg.edges, sg.generators);
    const auto v = classify(g);
    REQUIRE(v.is_cer());
    const auto s = graph_space(g, *v.ordering);
    CHECK(check_z1(s).holds);
    if (v.kind == VerdictKind::SymmetricCer) CHECK(check_z2(s).holds);
  }
}

TEST_CASE("Z2 makes diagonal blocks commute") {
  for (const auto& s : {fixtures::four_by_four(), graph_space(fixtures::petersen_colored(), {1}),
                        graph_space(fixtures::k3_example(), {1, 2, 3})}) {
    REQUIRE(check_z2(s).holds);
    for (int t = 0; t < 100; ++t) {
      const Matrix x = block_diag(random_element(s, 2 * t, false), s.blocks());
      const Matrix y = block_diag(random_element(s, 2 * t + 1, false), s.blocks());
      CHECK((x * y - y * x).norm() <= 1e-10 * x.norm() * y.norm());
    }
  }
}

TEST_CASE("BlockTri products count 2-paths") {
  for (const auto& [g0, eta] : std::vector<std::pair<ColoredGraph, Ordering>>{
           {fixtures::k3_example(), {1, 2, 3}}, {fixtures::circulant6(), {1}}, {fixtures::path(4), {1, 4, 2, 3}}}) {
    const auto g = relabel_for_ordering(g0, eta).graph;
    const Ordering ident = [&] {
      Ordering o(g.r());
      for (int i = 0; i < g.r(); ++i) o[i] = i + 1;
      return o;
    }();
    const auto s = space_from_graph(g);
    const auto mats = basis_matrices(g);
    for (const auto& jk : mats)
      for (const auto& jh : mats) {
        const Matrix prod = block_tri(jk.pattern.cast<double>(), s.blocks()) *
                            block_tri(jh.pattern.cast<double>(), s.blocks()).transpose();
        for (int v = 1; v <= g.p(); ++v)
          for (int w = 1; w <= g.p(); ++w) {
            if (v != w && !g.adjacent(v, w)) continue;
            const auto t = two_path_table(g, ident, v, w);
            const auto it = t.find({jk.color, jh.color});
            const int count = it == t.end() ? 0 : it->second;
            CHECK(prod(v - 1, w - 1) == count);
          }
      }
  }
}

TEST_CASE("random elements") {
  const auto s = fixtures::four_by_four();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix x = random_element(s, seed, false);
    CHECK(s.member(x));
    const Matrix y = random_element(s, seed, true);
    CHECK(s.member(y));
    CHECK(min_eigenvalue(y) >= 0.1);
    CHECK(random_element(s, seed, true) == y);
  }
}
