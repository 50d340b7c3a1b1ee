#include "cggm/structure_constants.hpp"

#include <cmath>
#include <numbers>

#include "cggm/errors.hpp"

namespace cggm {

Matrix projection_factor(const Matrix& c) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (c + c.transpose()));
  const Vector& ev = es.eigenvalues();
  std::vector<int> keep;
  for (Eigen::Index j = 0; j < ev.size(); ++j) {
    if (std::abs(ev(j)) > 1e-6 && std::abs(ev(j) - 1.0) > 1e-6) throw numerical_error("matrix is not a projection");
    if (ev(j) >= 0.5) keep.push_back(static_cast<int>(j));
  }
  Matrix w(c.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) w.col(j) = es.eigenvectors().col(keep[j]);
  return w;
}

std::vector<Matrix> l_space_basis(const ColorSpace& space, int block) {
  std::vector<Matrix> out;
  for (int k : space.strip_indices(block)) out.push_back(space.basis()[k].matrix);
  return out;
}

std::vector<Matrix> HSpaceBasis::orthonormal() const {
  std::vector<Matrix> out;
  if (u.empty()) return out;
  const Matrix linv = gram.llt().matrixL().solve(Matrix::Identity(m(), m()));
  for (int g = 0; g < m(); ++g) {
    Matrix f = Matrix::Zero(w.rows(), w.cols());
    for (int k = 0; k <= g; ++k) f += linv(g, k) * u[k];
    out.push_back(f * w.transpose());
  }
  return out;
}

Matrix HSpaceBasis::e_tilde() const { return w * w.transpose() / std::sqrt(static_cast<double>(mu)); }

namespace {

// Rank of an integer matrix by fraction-free elimination.
int bareiss_rank(IntMatrix a) {
  const int n = static_cast<int>(a.rows()), cols = static_cast<int>(a.cols());
  int rank = 0;
  __int128 prev = 1;
  std::vector<std::vector<__int128>> m(n, std::vector<__int128>(cols));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < cols; ++j) m[i][j] = a(i, j);
  for (int col = 0; col < cols && rank < n; ++col) {
    int piv = -1;
    for (int i = rank; i < n; ++i)
      if (m[i][col] != 0) piv = i;
    if (piv < 0) continue;
    std::swap(m[piv], m[rank]);
    for (int i = rank + 1; i < n; ++i) {
      for (int j = col + 1; j < cols; ++j) m[i][j] = (m[rank][col] * m[i][j] - m[i][col] * m[rank][j]) / prev;
      m[i][col] = 0;
    }
    prev = m[rank][col];
    ++rank;
  }
  return rank;
}

}  // namespace

HSpaceBasis h_space(const ColorSpace& space, const std::vector<JordanFrame>& frames, int block, int alpha,
                    const HSpaceOptions& opt) {
  const auto& bs = space.blocks();
  const auto& frame = frames.at(block);
  HSpaceBasis h;
  h.block = block;
  h.alpha = alpha;
  h.mu = frame.mu.at(alpha);
  const Matrix wloc = projection_factor(frame.c[alpha]);
  if (wloc.cols() != h.mu) throw numerical_error("projection rank does not match its trace");
  h.w = Matrix::Zero(bs.p(), h.mu);
  h.w.block(bs.offset(block), 0, bs.size(block), h.mu) = wloc;

  std::vector<Matrix> span;
  double scale = 0.0;
  for (int k : space.strip_indices(block)) {
    const Matrix& b = space.basis()[k].matrix;
    span.push_back(b * h.w);
    scale = std::max(scale, b.squaredNorm());
  }
  const auto alg = diagonal_algebra(space, block);
  if (!alg.commutative() && alpha + 1 < frame.d()) {
    Matrix later = Matrix::Zero(bs.p(), bs.p());
    for (int b = alpha + 1; b < frame.d(); ++b) later += embed_block(frame.c[b], bs, block);
    for (int k : alg.space_index) {
      const Matrix& a = space.basis()[k].matrix;
      span.push_back(later * a * h.w);
      scale = std::max(scale, a.squaredNorm());
    }
  }

  const int n = static_cast<int>(span.size());
  Matrix g(n, n);
  for (int t = 0; t < n; ++t)
    for (int s = 0; s < n; ++s) g(t, s) = frob_inner(span[t], span[s]);

  // Cholesky with complete pivoting; stops once the largest remaining pivot is negligible.
  Matrix res = g;
  std::vector<char> used(n, 0);
  const double thr = opt.rank_tol * scale;
  for (int step = 0; step < n; ++step) {
    int q = -1;
    for (int t = 0; t < n; ++t)
      if (!used[t] && (q < 0 || res(t, t) > res(q, q))) q = t;
    if (q < 0 || !(res(q, q) > thr)) break;
    used[q] = 1;
    h.pivots.push_back(q);
    const Vector col = res.col(q) / std::sqrt(res(q, q));
    res -= col * col.transpose();
  }
  for (int q : h.pivots) h.u.push_back(span[q]);
  const int m = h.m();
  h.gram.resize(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) h.gram(a, b) = g(h.pivots[a], h.pivots[b]);

  if (n > 0 && ((g.array() - g.array().round()).abs() <= 1e-9).all()) {
    if (bareiss_rank(g.array().round().cast<std::int64_t>().matrix()) != m)
      throw numerical_error("pivoted Cholesky rank disagrees with exact integer rank");
  }
  return h;
}

StructureConstants structure_constants(const ColorSpace& space, const std::vector<JordanFrame>& frames,
                                       const HSpaceOptions& opt) {
  StructureConstants sc;
  sc.r = space.blocks().r();
  sc.dim = space.dim();
  if (static_cast<int>(frames.size()) != sc.r) throw input_error("need one Jordan frame per block");
  int count = 0;
  const double log2pi = std::log(2.0 * std::numbers::pi);
  for (int i = 0; i < sc.r; ++i) {
    sc.d.push_back(frames[i].d());
    sc.mu.emplace_back();
    sc.m.emplace_back();
    sc.h.emplace_back();
    for (int a = 0; a < frames[i].d(); ++a) {
      auto h = h_space(space, frames, i, a, opt);
      const int mu = h.mu, m = h.m();
      sc.mu.back().push_back(mu);
      sc.m.back().push_back(m);
      sc.p_z += mu * std::log(static_cast<double>(mu));
      sc.q_z += 0.5 * ((std::log(static_cast<double>(mu)) - log2pi) * m + std::log(static_cast<double>(mu)));
      count += 1 + m;
      sc.h.back().push_back(std::move(h));
    }
  }
  if (count != sc.dim)
    throw numerical_error("counting identity failed: sum of (1+m) = " + std::to_string(count) + " but dim Z = " +
                          std::to_string(sc.dim));
  return sc;
}

std::vector<FactorValues> determinant_factors(const StructureConstants& sc, const Matrix& a) {
  std::vector<FactorValues> out;
  for (const auto& row : sc.h)
    for (const auto& h : row) {
      if (a.rows() != h.w.rows() || a.cols() != h.w.rows()) throw input_error("A has the wrong size");
      FactorValues f;
      f.block = h.block;
      f.alpha = h.alpha;
      f.mu = h.mu;
      f.m = h.m();
      const Matrix aw = a * h.w;
      f.lambda = (h.w.transpose() * aw).trace() / h.mu;
      f.ratio = f.lambda;
      if (f.m > 0) {
        Matrix psi(f.m, f.m);
        Vector v(f.m);
        for (int k = 0; k < f.m; ++k) {
          const Matrix au = a * h.u[k];
          for (int l = 0; l < f.m; ++l) psi(l, k) = frob_inner(h.u[l], au);
          v(k) = frob_inner(h.u[k], aw) / std::sqrt(static_cast<double>(h.mu));
        }
        Eigen::LLT<Matrix> llt(psi);
        if (llt.info() != Eigen::Success) throw input_error("A is not positive definite (A-weighted Gram matrix)");
        double ld_psi = 0.0, ld_g = 0.0;
        if (!log_det_pd(psi, ld_psi) || !log_det_pd(h.gram, ld_g)) throw input_error("A is not positive definite");
        f.log_det_psi = ld_psi - ld_g;
        const Vector y = llt.matrixL().solve(v);
        f.ratio = f.lambda - y.squaredNorm();
      }
      if (!(f.lambda > 0.0) || !(f.ratio > 0.0)) throw input_error("A is not positive definite (nonpositive ratio)");
      out.push_back(f);
    }
  return out;
}

Matrix phi_matrix(const HSpaceBasis& h, const Matrix& a) {
  const auto f = h.orthonormal();
  const Matrix e = h.e_tilde();
  const int m = h.m();
  std::vector<Matrix> basis{e};
  basis.insert(basis.end(), f.begin(), f.end());
  Matrix phi(m + 1, m + 1);
  for (int k = 0; k <= m; ++k)
    for (int l = 0; l <= m; ++l) phi(k, l) = (a * basis[k] * basis[l].transpose()).trace();
  return phi;
}

}  // namespace cggm
