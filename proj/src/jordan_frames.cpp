#include "cggm/jordan_frames.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cggm/errors.hpp"

namespace cggm {

bool DiagonalBlockAlgebra::commutative(double tol) const {
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t h = k + 1; h < a.size(); ++h) {
      const Matrix x = a[k] * a[h];
      if ((x - x.transpose()).norm() > tol * std::max(1.0, x.norm())) return false;
    }
  return true;
}

DiagonalBlockAlgebra diagonal_algebra(const ColorSpace& space, int block) {
  DiagonalBlockAlgebra alg;
  alg.block = block;
  alg.n = space.blocks().size(block);
  const int o = space.blocks().offset(block);
  for (int k : space.diagonal_indices(block)) {
    alg.a.push_back(space.basis()[k].matrix.block(o, o, alg.n, alg.n));
    alg.space_index.push_back(k);
  }
  return alg;
}

Matrix embed_block(const Matrix& c, const BlockStructure& bs, int block) {
  Matrix x = Matrix::Zero(bs.p(), bs.p());
  x.block(bs.offset(block), bs.offset(block), bs.size(block), bs.size(block)) = c;
  return x;
}

namespace {

// Coordinates of y in the (not necessarily orthogonal) basis a, plus the residual norm.
Vector coordinates(const std::vector<Matrix>& a, const Matrix& y, double& residual) {
  const int d = static_cast<int>(a.size());
  Matrix g(d, d);
  Vector rhs(d);
  for (int k = 0; k < d; ++k) {
    rhs(k) = frob_inner(a[k], y);
    for (int h = 0; h < d; ++h) g(k, h) = frob_inner(a[k], a[h]);
  }
  Vector z = g.ldlt().solve(rhs);
  Matrix rest = y;
  for (int k = 0; k < d; ++k) rest -= z(k) * a[k];
  residual = rest.norm();
  return z;
}

double span_residual(const std::vector<Matrix>& a, const Matrix& y) {
  double res;
  coordinates(a, y, res);
  return res;
}

double snap(double x, double step) {
  const double r = std::round(x / step) * step;
  return std::abs(x - r) <= 1e-9 ? r : x;
}

// Deterministic order: rank, then position-weighted trace, then entries.
std::vector<int> frame_order(const std::vector<Matrix>& c, const std::vector<int>& mu) {
  std::vector<int> idx(c.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto weighted = [&](int a) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < c[a].rows(); ++j) s += static_cast<double>(j + 1) * c[a](j, j);
    return s;
  };
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (mu[a] != mu[b]) return mu[a] < mu[b];
    const double wa = weighted(a), wb = weighted(b);
    if (std::abs(wa - wb) > 1e-8) return wa < wb;
    for (Eigen::Index k = 0; k < c[a].size(); ++k) {
      const double x = c[a].data()[k], y = c[b].data()[k];
      if (std::abs(x - y) > 1e-8) return x < y;
    }
    return false;
  });
  return idx;
}

void apply_order(JordanFrame& f) {
  const auto idx = frame_order(f.c, f.mu);
  JordanFrame g;
  g.block = f.block;
  for (int a : idx) {
    g.c.push_back(f.c[a]);
    g.mu.push_back(f.mu[a]);
  }
  if (f.P) {
    Matrix p(f.P->rows(), f.P->cols()), q(f.Q->rows(), f.Q->cols());
    for (std::size_t j = 0; j < idx.size(); ++j) {
      p.col(j) = f.P->col(idx[j]);
      q.row(j) = f.Q->row(idx[j]);
    }
    g.P = p;
    g.Q = q;
  }
  f = std::move(g);
}

std::vector<int> ranks_of(const std::vector<Matrix>& c) {
  std::vector<int> mu;
  for (const auto& x : c) {
    const double t = x.trace();
    const double r = std::round(t);
    if (std::abs(t - r) > 1e-6 || r < 1) throw numerical_error("projection trace is not a positive integer");
    mu.push_back(static_cast<int>(r));
  }
  return mu;
}

}  // namespace

IntersectionData intersection_numbers(const DiagonalBlockAlgebra& alg) {
  IntersectionData data;
  const int d = static_cast<int>(alg.a.size());
  data.d = d;
  data.eta.assign(static_cast<std::size_t>(d) * d * d, 0.0);
  for (int k = 0; k < d; ++k)
    for (int h = k; h < d; ++h) {
      const Matrix y = 0.5 * (alg.a[k] * alg.a[h] + alg.a[h] * alg.a[k]);
      double res;
      Vector z = coordinates(alg.a, y, res);
      if (res > 1e-9 * std::max(1.0, y.norm()))
        throw classification_error("Jordan product leaves the diagonal block span");
      for (int c = 0; c < d; ++c) {
        const double v = snap(z(c), 0.5);
        data.eta[(static_cast<std::size_t>(k) * d + h) * d + c] = v;
        data.eta[(static_cast<std::size_t>(h) * d + k) * d + c] = v;
      }
    }
  for (int n = 0; n < d; ++n) {
    Matrix l(d, d);
    for (int ell = 0; ell < d; ++ell)
      for (int m = 0; m < d; ++m) l(ell, m) = data.at(n, m, ell);
    data.l.push_back(l);
  }
  return data;
}

JordanFrame random_method(const DiagonalBlockAlgebra& alg, const IntersectionData& data, std::uint64_t seed,
                          const FrameOptions& opt) {
  if (!alg.commutative()) throw numerical_error("random method needs a commutative block algebra");
  const int d = data.d;
  const double n = alg.n;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (int attempt = 0; attempt < opt.max_retries; ++attempt) {
    Matrix lx = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) lx += unif(rng) * data.l[k];
    Eigen::EigenSolver<Matrix> es(lx);
    if (es.info() != Eigen::Success) continue;
    const auto ev = es.eigenvalues();
    const double radius = ev.cwiseAbs().maxCoeff();
    bool ok = true;
    for (int a = 0; a < d && ok; ++a) {
      if (std::abs(ev(a).imag()) > 1e-10 * std::max(1.0, radius)) ok = false;
      for (int b = a + 1; b < d && ok; ++b)
        if (std::abs(ev(a) - ev(b)) <= opt.gap_tol * radius) ok = false;
    }
    if (!ok) continue;

    Matrix v = es.eigenvectors().real();
    for (int a = 0; a < d; ++a) v.col(a).normalize();
    Matrix p(d, d);
    for (int m = 0; m < d && ok; ++m)
      for (int a = 0; a < d && ok; ++a) {
        const Vector lv = data.l[m] * v.col(a);
        p(m, a) = v.col(a).dot(lv);
        if ((lv - p(m, a) * v.col(a)).norm() > 1e-8 * std::max(1.0, data.l[m].norm())) ok = false;
      }
    if (!ok) continue;

    const Matrix vtp = v.transpose() * p;
    Vector kappa = vtp.diagonal() / n;
    const Matrix off = vtp - Matrix(vtp.diagonal().asDiagonal());
    if (off.norm() > 1e-8 * vtp.norm() || (kappa.array().abs() < 1e-12).any()) continue;

    bool integral = true;
    for (Eigen::Index k = 0; k < p.size(); ++k) integral &= std::abs(p.data()[k] - std::round(p.data()[k])) <= 1e-6;
    Matrix q;
    if (integral) {
      p = p.array().round().matrix();
      q = n * p.inverse();
    } else {
      q = kappa.cwiseInverse().asDiagonal() * v.transpose();
    }

    JordanFrame f;
    f.block = alg.block;
    for (int a = 0; a < d; ++a) {
      Matrix c = Matrix::Zero(alg.n, alg.n);
      for (int m = 0; m < d; ++m) c += q(a, m) * alg.a[m];
      f.c.push_back(c / n);
    }
    f.mu = ranks_of(f.c);
    f.P = p;
    f.Q = q;
    apply_order(f);
    if (!verify_frame(f, alg).pass) throw numerical_error("random method produced an invalid frame");
    return f;
  }
  throw spectrum_not_simple("no simple spectrum after " + std::to_string(opt.max_retries) + " draws");
}

namespace {

std::vector<Matrix> spectral_projectors(const DiagonalBlockAlgebra& alg, std::mt19937_64& rng, double cluster_tol) {
  std::normal_distribution<double> normal;
  Matrix x = Matrix::Zero(alg.n, alg.n);
  for (const auto& a : alg.a) x += normal(rng) * a;
  Eigen::SelfAdjointEigenSolver<Matrix> es(x);
  const Vector& ev = es.eigenvalues();
  const double radius = std::max(std::abs(ev(0)), std::abs(ev(alg.n - 1)));
  std::vector<Matrix> out;
  int start = 0;
  for (int j = 1; j <= alg.n; ++j) {
    if (j == alg.n || ev(j) - ev(j - 1) > cluster_tol * radius) {
      const Matrix vv = es.eigenvectors().middleCols(start, j - start);
      out.push_back(vv * vv.transpose());
      start = j;
    }
  }
  return out;
}

}  // namespace

JordanFrame generic_element_frame(const DiagonalBlockAlgebra& alg, std::uint64_t seed, const FrameOptions& opt) {
  std::mt19937_64 rng(seed);
  const auto first = spectral_projectors(alg, rng, opt.cluster_tol);
  const auto second = spectral_projectors(alg, rng, opt.cluster_tol);

  for (const auto& c : first)
    if (span_residual(alg.a, c) > 1e-8) throw numerical_error("spectral projector leaves the block span");
  auto mu1 = ranks_of(first);
  auto mu2 = ranks_of(second);
  if (first.size() != second.size()) throw numerical_error("unstable Jordan rank across two random elements");
  auto s1 = mu1, s2 = mu2;
  std::sort(s1.begin(), s1.end());
  std::sort(s2.begin(), s2.end());
  if (s1 != s2) throw numerical_error("unstable projection ranks across two random elements");
  if (alg.commutative()) {
    for (const auto& c : second) {
      bool found = false;
      for (const auto& c0 : first) found |= (c - c0).norm() <= 1e-8;
      if (!found) throw numerical_error("incompatible frames across two random elements");
    }
  }

  JordanFrame f;
  f.block = alg.block;
  f.c = first;
  f.mu = mu1;
  apply_order(f);
  return f;
}

FrameReport verify_frame(const JordanFrame& frame, const DiagonalBlockAlgebra& alg, double tol) {
  FrameReport rep;
  const int n = alg.n;
  Matrix sum = Matrix::Zero(n, n);
  for (int a = 0; a < frame.d(); ++a) {
    const Matrix& c = frame.c[a];
    sum += c;
    rep.idempotency = std::max(rep.idempotency, (c * c - c).norm());
    for (int b = 0; b < frame.d(); ++b)
      if (b != a) rep.orthogonality = std::max(rep.orthogonality, (c * frame.c[b]).norm());
    rep.span = std::max(rep.span, span_residual(alg.a, c));
    const double mu = a < static_cast<int>(frame.mu.size()) ? frame.mu[a] : std::round(c.trace());
    rep.integrality = std::max(rep.integrality, std::abs(c.trace() - mu));
  }
  rep.completeness = (sum - Matrix::Identity(n, n)).norm();
  if (frame.P && frame.Q) {
    const Matrix ni = static_cast<double>(n) * Matrix::Identity(frame.d(), frame.d());
    rep.qp = std::max((*frame.Q * *frame.P - ni).norm(), (*frame.P * *frame.Q - ni).norm());
  }
  rep.pass = rep.idempotency <= tol && rep.orthogonality <= tol && rep.completeness <= tol && rep.span <= tol &&
             rep.integrality <= tol && rep.qp <= tol;
  return rep;
}

std::vector<JordanFrame> compute_frames(const ColorSpace& space, std::uint64_t seed, const FrameOptions& opt) {
  std::vector<JordanFrame> frames;
  for (int i = 0; i < space.blocks().r(); ++i) {
    const auto alg = diagonal_algebra(space, i);
    const std::uint64_t s = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(i + 1);
    JordanFrame f;
    if (alg.commutative()) {
      try {
        f = random_method(alg, intersection_numbers(alg), s, opt);
      } catch (const spectrum_not_simple&) {
        f = generic_element_frame(alg, s, opt);
      }
    } else {
      f = generic_element_frame(alg, s, opt);
    }
    if (!verify_frame(f, alg).pass) throw numerical_error("Jordan frame failed verification");
    frames.push_back(std::move(f));
  }
  return frames;
}

}  // namespace cggm
