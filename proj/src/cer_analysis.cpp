#include "cggm/cer_analysis.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "cggm/errors.hpp"

namespace cggm {

namespace {

std::vector<int> positions(const ColoredGraph& g, const Ordering& eta) {
  const int r = g.r();
  if (static_cast<int>(eta.size()) != r) throw input_error("ordering has wrong length");
  std::vector<int> pos(r + 1, 0);
  for (int i = 0; i < r; ++i) {
    int k = eta[i];
    if (k < 1 || k > r || pos[k] != 0) throw input_error("ordering is not a permutation of the vertex colors");
    pos[k] = i + 1;
  }
  return pos;
}

// pos[k] == 0 marks a color not yet placed; such vertices never serve as intermediates.
TwoPathTable directed_table(const ColoredGraph& g, const std::vector<int>& pos, int v, int w) {
  TwoPathTable t;
  const int bound = std::min(pos[g.vertex_color(v)], pos[g.vertex_color(w)]);
  for (int u = 1; u <= g.p(); ++u) {
    const int pu = pos[g.vertex_color(u)];
    if (pu == 0 || pu > bound) continue;
    const int k = g.color_of(v, u);
    const int h = g.color_of(u, w);
    if (k != 0 && h != 0) ++t[{k, h}];
  }
  return t;
}

TwoPathTable symmetrize(const TwoPathTable& d) {
  TwoPathTable t = d;
  for (const auto& [kh, n] : d) t[{kh.second, kh.first}] += n;
  return t;
}

TwoPathTable restrict_to(const TwoPathTable& t, const std::vector<char>& in_f) {
  TwoPathTable out;
  for (const auto& [kh, n] : t)
    if (in_f[kh.first] && in_f[kh.second]) out[kh] = n;
  return out;
}

bool class_simplicial(const ColoredGraph& g, int k, const std::vector<char>& present) {
  for (int v : g.vertex_classes()[k - 1]) {
    const auto nb = g.neighbors(v);
    for (std::size_t a = 0; a < nb.size(); ++a) {
      if (!present[nb[a]]) continue;
      for (std::size_t b = a + 1; b < nb.size(); ++b)
        if (present[nb[b]] && !g.adjacent(nb[a], nb[b])) return false;
    }
  }
  return true;
}

std::vector<char> f_mask(const ColoredGraph& g) {
  std::vector<char> m(g.num_colors() + 1, 0);
  for (int k : f_sets(g).all) m[k] = 1;
  return m;
}

// Lexicographic backtracking over cpeos, pruning as soon as a placed prefix
// already determines an (M1) or (M2) violation.
class CpeoSearch {
 public:
  CpeoSearch(const ColoredGraph& g, bool need_m1, bool need_m2)
      : g_(g), need_m1_(need_m1), need_m2_(need_m2), in_f_(f_mask(g)) {
    pos_.assign(g.r() + 1, 0);
    present_.assign(g.p() + 1, 1);
    ref_.resize(g.num_colors() + 1);
  }

  std::optional<Ordering> run() {
    if (dfs()) return eta_;
    return std::nullopt;
  }

 private:
  bool dfs() {
    if (static_cast<int>(eta_.size()) == g_.r()) return true;
    for (int k = 1; k <= g_.r(); ++k) {
      if (pos_[k] != 0 || !class_simplicial(g_, k, present_)) continue;
      eta_.push_back(k);
      pos_[k] = static_cast<int>(eta_.size());
      std::vector<int> newly;
      if (consistent(k, newly)) {
        for (int v : g_.vertex_classes()[k - 1]) present_[v] = 0;
        if (dfs()) return true;
        for (int v : g_.vertex_classes()[k - 1]) present_[v] = 1;
      }
      for (int c : newly) ref_[c].reset();
      pos_[k] = 0;
      eta_.pop_back();
    }
    return false;
  }

  bool consistent(int k, std::vector<int>& newly) {
    if (need_m1_) {
      for (int v : g_.vertex_classes()[k - 1]) {
        if (!check_edge(v, v, newly)) return false;
        for (int w : g_.neighbors(v)) {
          const int cw = g_.vertex_color(w);
          if (pos_[cw] == 0 || (cw == k && w < v)) continue;
          if (!check_edge(v, w, newly)) return false;
        }
      }
    }
    if (need_m2_) {
      const auto& cls = g_.vertex_classes()[k - 1];
      for (std::size_t a = 0; a < cls.size(); ++a)
        for (std::size_t b = a + 1; b < cls.size(); ++b)
          if (restrict_to(directed_table(g_, pos_, cls[a], cls[b]), in_f_) !=
              restrict_to(directed_table(g_, pos_, cls[b], cls[a]), in_f_))
            return false;
    }
    return true;
  }

  bool check_edge(int v, int w, std::vector<int>& newly) {
    const int c = g_.color_of(v, w);
    auto t = symmetrize(directed_table(g_, pos_, v, w));
    if (!ref_[c]) {
      ref_[c] = std::move(t);
      newly.push_back(c);
      return true;
    }
    return *ref_[c] == t;
  }

  const ColoredGraph& g_;
  bool need_m1_;
  bool need_m2_;
  std::vector<char> in_f_;
  std::vector<int> pos_;
  std::vector<char> present_;
  std::vector<std::optional<TwoPathTable>> ref_;
  Ordering eta_;
};

void check_extended_edge(const ColoredGraph& g, int v, int w) {
  if (v < 1 || v > g.p() || w < 1 || w > g.p()) throw input_error("vertex out of range");
  if (v != w && !g.adjacent(v, w)) throw input_error("pair is not an extended edge");
}

}  // namespace

bool is_simplicial(const ColoredGraph& g, int v, const std::vector<int>& subset) {
  if (std::find(subset.begin(), subset.end(), v) == subset.end()) throw input_error("vertex not in subset");
  std::vector<char> present(g.p() + 1, 0);
  for (int u : subset) {
    if (u < 1 || u > g.p()) throw input_error("vertex out of range");
    present[u] = 1;
  }
  const auto nb = g.neighbors(v);
  for (std::size_t a = 0; a < nb.size(); ++a)
    for (std::size_t b = a + 1; b < nb.size(); ++b)
      if (present[nb[a]] && present[nb[b]] && !g.adjacent(nb[a], nb[b])) return false;
  return true;
}

bool is_cpeo(const ColoredGraph& g, const Ordering& eta) {
  positions(g, eta);
  std::vector<char> present(g.p() + 1, 1);
  for (int k : eta) {
    if (!class_simplicial(g, k, present)) return false;
    for (int v : g.vertex_classes()[k - 1]) present[v] = 0;
  }
  return true;
}

std::optional<Ordering> greedy_find_cpeo(const ColoredGraph& g) {
  const int r = g.r();
  std::vector<char> present(g.p() + 1, 1);
  std::string remaining(r, '1');
  std::unordered_set<std::string> failed;
  Ordering eta;

  auto rec = [&](auto&& self) -> bool {
    if (static_cast<int>(eta.size()) == r) return true;
    if (failed.count(remaining)) return false;
    for (int k = 1; k <= r; ++k) {
      if (remaining[k - 1] != '1' || !class_simplicial(g, k, present)) continue;
      remaining[k - 1] = '0';
      for (int v : g.vertex_classes()[k - 1]) present[v] = 0;
      eta.push_back(k);
      if (self(self)) return true;
      eta.pop_back();
      for (int v : g.vertex_classes()[k - 1]) present[v] = 1;
      remaining[k - 1] = '1';
    }
    failed.insert(remaining);
    return false;
  };
  if (rec(rec)) return eta;
  return std::nullopt;
}

std::optional<Ordering> cpeo_via_color_dag(const ColoredGraph& g) {
  const int r = g.r();
  std::vector<std::vector<char>> h(r + 1, std::vector<char>(r + 1, 0));
  for (int v = 1; v <= g.p(); ++v) {
    const int k = g.vertex_color(v);
    const auto nb = g.neighbors(v);
    for (std::size_t x = 0; x < nb.size(); ++x)
      for (std::size_t y = x + 1; y < nb.size(); ++y) {
        if (g.adjacent(nb[x], nb[y])) continue;
        const int a = g.vertex_color(nb[x]);
        const int b = g.vertex_color(nb[y]);
        if (a == k && b == k) {
          for (int j = 1; j <= r; ++j) h[j][k] = 1;
        } else if (a == k) {
          h[b][k] = 1;
        } else if (b == k) {
          h[a][k] = 1;
        } else if (a == b) {
          h[a][k] = 1;
        }
      }
  }
  for (int k = 1; k <= r; ++k)
    if (h[k][k]) return std::nullopt;

  std::vector<int> indeg(r + 1, 0);
  for (int a = 1; a <= r; ++a)
    for (int b = 1; b <= r; ++b) indeg[b] += h[a][b];

  std::vector<char> done(r + 1, 0);
  std::vector<char> present(g.p() + 1, 1);
  Ordering eta;
  while (static_cast<int>(eta.size()) < r) {
    int pick = 0;
    for (int k = 1; k <= r && pick == 0; ++k)
      if (!done[k] && indeg[k] == 0 && class_simplicial(g, k, present)) pick = k;
    if (pick == 0) return std::nullopt;
    done[pick] = 1;
    eta.push_back(pick);
    for (int v : g.vertex_classes()[pick - 1]) present[v] = 0;
    for (int b = 1; b <= r; ++b) indeg[b] -= h[pick][b];
  }
  return eta;
}

bool is_peo(const ColoredGraph& g, const std::vector<int>& peo) {
  if (static_cast<int>(peo.size()) != g.p()) return false;
  std::vector<char> present(g.p() + 1, 1);
  std::vector<char> seen(g.p() + 1, 0);
  for (int v : peo) {
    if (v < 1 || v > g.p() || seen[v]++) return false;
  }
  for (int v : peo) {
    const auto nb = g.neighbors(v);
    for (std::size_t a = 0; a < nb.size(); ++a)
      for (std::size_t b = a + 1; b < nb.size(); ++b)
        if (present[nb[a]] && present[nb[b]] && !g.adjacent(nb[a], nb[b])) return false;
    present[v] = 0;
  }
  return true;
}

Ordering cpeo_from_peo(const ColoredGraph& g, const std::vector<int>& peo) {
  if (!is_peo(g, peo)) throw input_error("not a perfect elimination ordering");
  std::vector<char> used(g.r() + 1, 0);
  Ordering eta;
  for (int v : peo) {
    const int k = g.vertex_color(v);
    if (!used[k]) {
      used[k] = 1;
      eta.push_back(k);
    }
  }
  if (!is_cpeo(g, eta)) throw input_error("derived color ordering is not a cpeo (coloring is not orbit-induced)");
  return eta;
}

TwoPathTable two_path_table(const ColoredGraph& g, const Ordering& eta, int v, int w) {
  check_extended_edge(g, v, w);
  return directed_table(g, positions(g, eta), v, w);
}

TwoPathTable symmetric_two_path_table(const ColoredGraph& g, const Ordering& eta, int v, int w) {
  return symmetrize(two_path_table(g, eta, v, w));
}

M1Result check_m1(const ColoredGraph& g, const Ordering& eta) {
  const auto pos = positions(g, eta);
  for (int c = 1; c <= g.num_colors(); ++c) {
    const auto members = g.extended_edges_of_color(c);
    if (members.size() < 2) continue;
    const auto ref = symmetrize(directed_table(g, pos, members[0].v, members[0].w));
    for (std::size_t j = 1; j < members.size(); ++j)
      if (symmetrize(directed_table(g, pos, members[j].v, members[j].w)) != ref)
        return {false, EdgePairWitness{members[0], members[j]}};
  }
  return {};
}

FSets f_sets(const ColoredGraph& g) {
  FSets f;
  f.per_class.resize(g.r());
  std::set<int> all;
  for (int i = 1; i <= g.r(); ++i) {
    std::set<int> fi{i};
    for (int v : g.vertex_classes()[i - 1])
      for (int w : g.neighbors(v))
        if (g.vertex_color(w) == i) fi.insert(g.color_of(v, w));
    f.per_class[i - 1].assign(fi.begin(), fi.end());
    all.insert(fi.begin(), fi.end());
  }
  f.all.assign(all.begin(), all.end());
  return f;
}

M2Result check_m2(const ColoredGraph& g, const Ordering& eta) {
  const auto pos = positions(g, eta);
  const auto in_f = f_mask(g);
  for (const auto& cls : g.vertex_classes())
    for (std::size_t a = 0; a < cls.size(); ++a)
      for (std::size_t b = a + 1; b < cls.size(); ++b)
        if (restrict_to(directed_table(g, pos, cls[a], cls[b]), in_f) !=
            restrict_to(directed_table(g, pos, cls[b], cls[a]), in_f))
          return {false, VertexPairWitness{cls[a], cls[b]}};
  return {};
}

M3Result check_m3(const ColoredGraph& g, const Ordering& eta) {
  const auto pos = positions(g, eta);
  if (!is_cpeo(g, eta)) throw input_error("ordering is not a cpeo");
  const int p = g.p();
  auto block = [&](int v) { return pos[g.vertex_color(v)]; };

  // Counts of u with block(w) <= block(u) <= block(v): the (v,w) entry of
  // BlockTri(J^k) BlockTri(J^h).
  auto ordered_table = [&](int v, int w) {
    TwoPathTable t;
    for (int u = 1; u <= p; ++u) {
      if (block(u) > block(v) || block(u) < block(w)) continue;
      const int k = g.color_of(v, u);
      const int h = g.color_of(u, w);
      if (k != 0 && h != 0) ++t[{k, h}];
    }
    return t;
  };

  std::vector<std::optional<std::pair<Edge, TwoPathTable>>> ref(g.num_colors() + 1);
  for (int v = 1; v <= p; ++v)
    for (int w = 1; w <= p; ++w) {
      if (block(v) < block(w)) continue;
      auto t = ordered_table(v, w);
      const int c = g.color_of(v, w);
      const Edge e = make_edge(v, w);
      if (c == 0) {
        if (!t.empty()) return {false, EdgePairWitness{e, e}};
        continue;
      }
      if (!ref[c]) {
        ref[c] = std::make_pair(e, std::move(t));
      } else if (ref[c]->second != t) {
        return {false, EdgePairWitness{ref[c]->first, e}};
      }
    }
  return {};
}

M3Result check_m3(const ColoredGraph& relabeled) {
  Ordering id(relabeled.r());
  for (int i = 0; i < relabeled.r(); ++i) id[i] = i + 1;
  return check_m3(relabeled, id);
}

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::NotDecomposableColoring: return "NotDecomposableColoring";
    case VerdictKind::CpeoOnly: return "CpeoOnly";
    case VerdictKind::Cer: return "Cer";
    case VerdictKind::SymmetricCer: return "SymmetricCer";
  }
  return "?";
}

CerVerdict classify(const ColoredGraph& g, int max_colors) {
  if (g.r() > max_colors)
    throw input_error("classification is capped at " + std::to_string(max_colors) + " vertex colors");
  CerVerdict out;
  const auto first = greedy_find_cpeo(g);
  if (!first) return out;

  if (auto eta = CpeoSearch(g, true, true).run()) {
    out.kind = VerdictKind::SymmetricCer;
    out.ordering = eta;
    return out;
  }
  if (auto eta = CpeoSearch(g, true, false).run()) {
    out.kind = VerdictKind::Cer;
    out.ordering = eta;
    out.m2_witness = check_m2(g, *eta).witness;
    return out;
  }
  out.kind = VerdictKind::CpeoOnly;
  out.ordering = first;
  out.m1_witness = check_m1(g, *first).witness;
  return out;
}

}  // namespace cggm
