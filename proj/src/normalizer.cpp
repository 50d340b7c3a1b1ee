#include "cggm/normalizer.hpp"

#include <cmath>
#include <limits>

#include "cggm/errors.hpp"

namespace cggm {

BcModel analyze_space(ColorSpace space, std::uint64_t seed, const FrameOptions& fopt, const HSpaceOptions& hopt) {
  const auto z1 = check_z1(space);
  if (!z1.holds) throw classification_error("(Z1) fails: the space is not a block-Cholesky space");
  auto frames = compute_frames(space, seed, fopt);
  auto sc = structure_constants(space, frames, hopt);
  return BcModel{std::move(space), std::move(frames), std::move(sc)};
}

GraphModel build_graph_model(const ColoredGraph& g, std::uint64_t seed) {
  auto verdict = classify(g);
  if (!verdict.is_cer())
    throw classification_error("graph is " + to_string(verdict.kind) +
                               ", not CER; no closed form exists for it here (oracle-based scoring is not offered)");
  auto rel = relabel_for_ordering(g, *verdict.ordering);
  auto model = analyze_space(space_from_graph(rel.graph), seed);
  return GraphModel{std::move(verdict), std::move(rel), std::move(model)};
}

double convergence_threshold(const StructureConstants& sc) {
  double thr = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sc.mu.size(); ++i)
    for (std::size_t a = 0; a < sc.mu[i].size(); ++a)
      thr = std::max(thr, -(2.0 + sc.m[i][a]) / (2.0 * sc.mu[i][a]));
  return thr;
}

NormalizerResult log_integral(const StructureConstants& sc, const std::vector<FactorValues>& factors, double s) {
  NormalizerResult res;
  res.s = s;
  res.threshold = convergence_threshold(sc);
  if (!(s > res.threshold))
    throw divergence_error("integral diverges: s = " + std::to_string(s) + " is not above the threshold " +
                               std::to_string(res.threshold),
                           res.threshold);
  res.log_value = -sc.p_z * s - sc.q_z;
  for (const auto& f : factors) {
    if (!(f.ratio > 0.0)) throw input_error("nonpositive determinant ratio");
    const double a = f.mu * s + 1.0 + 0.5 * f.m;
    const double term = std::lgamma(a) - a * std::log(f.ratio) - 0.5 * f.log_det_psi;
    res.log_terms.push_back(term);
    res.log_value += term;
  }
  res.factors = factors;
  return res;
}

NormalizerResult log_integral(const BcModel& model, double s, const Matrix& a) {
  return log_integral(model.constants, determinant_factors(model.constants, a), s);
}

NormalizerResult dy_log_normalizer(const BcModel& model, double delta, const Matrix& d) {
  Eigen::LLT<Matrix> llt(d);
  if (d.rows() != model.space.p() || d.cols() != model.space.p()) throw input_error("D has the wrong size");
  if (llt.info() != Eigen::Success) throw input_error("D is not positive definite");
  return log_integral(model, 0.5 * (delta - 2.0), 0.5 * d);
}

double log_posterior_ratio(const BcModel& model, double delta, const Matrix& d, double n, const Matrix& u) {
  if (n < 0) throw input_error("negative sample count");
  return dy_log_normalizer(model, delta + n, d + u).log_value - dy_log_normalizer(model, delta, d).log_value;
}

SrgSpectrum srg_spectrum(const SrgParameters& prm) {
  const double lm = prm.lambda - prm.mu;
  const double delta = lm * lm + 4.0 * (prm.k - prm.mu);
  if (!(delta > 0.0)) throw input_error("not a primitive strongly regular graph (discriminant <= 0)");
  const double sq = std::sqrt(delta);
  SrgSpectrum sp;
  sp.theta1 = 0.5 * (lm + sq);
  sp.theta2 = 0.5 * (lm - sq);
  const double f1 = 0.5 * (prm.p - 1 - (2.0 * prm.k + (prm.p - 1) * lm) / sq);
  const double f2 = 0.5 * (prm.p - 1 + (2.0 * prm.k + (prm.p - 1) * lm) / sq);
  if (std::abs(f1 - std::round(f1)) > 1e-9 || std::abs(f2 - std::round(f2)) > 1e-9 || std::round(f1) < 1 ||
      std::round(f2) < 1)
    throw input_error("srg multiplicities are not positive integers");
  sp.f1 = static_cast<int>(std::round(f1));
  sp.f2 = static_cast<int>(std::round(f2));
  return sp;
}

NormalizerResult srg_log_integral(const SrgParameters& prm, const Matrix& b, double s, const Matrix& a) {
  const auto sp = srg_spectrum(prm);
  const int p = prm.p;
  if (b.rows() != p || b.cols() != p || a.rows() != p || a.cols() != p) throw input_error("matrix size mismatch");
  const Matrix id = Matrix::Identity(p, p);
  const Matrix j = Matrix::Ones(p, p);
  const Matrix b2 = prm.k * id + prm.lambda * b + prm.mu * (j - id - b);
  if ((b * b - b2).norm() > 1e-9 || (b - b.transpose()).norm() > 0 || b.diagonal().cwiseAbs().sum() > 0)
    throw input_error("adjacency matrix does not satisfy the srg identities");

  const Matrix e0 = j / p;
  const Matrix e1 = (b - sp.theta2 * id - (prm.k - sp.theta2) * e0) / (sp.theta1 - sp.theta2);
  const Matrix e2 = (b - sp.theta1 * id - (prm.k - sp.theta1) * e0) / (sp.theta2 - sp.theta1);
  const int mus[3] = {1, sp.f1, sp.f2};
  const Matrix* es[3] = {&e0, &e1, &e2};

  NormalizerResult res;
  res.s = s;
  res.threshold = -1.0 / std::max(sp.f1, sp.f2);
  if (!(s > res.threshold)) throw divergence_error("integral diverges for this s", res.threshold);
  const double f1 = sp.f1, f2 = sp.f2;
  res.log_value = -(f1 * std::log(f1) + f2 * std::log(f2)) * s - 0.5 * (std::log(f1) + std::log(f2));
  for (int al = 0; al < 3; ++al) {
    FactorValues f;
    f.alpha = al;
    f.mu = mus[al];
    f.lambda = (a * *es[al]).trace() / mus[al];
    f.ratio = f.lambda;
    if (!(f.ratio > 0.0)) throw input_error("A is not positive definite");
    const double x = mus[al] * s + 1.0;
    const double term = std::lgamma(x) - x * std::log(f.ratio);
    res.factors.push_back(f);
    res.log_terms.push_back(term);
    res.log_value += term;
  }
  return res;
}

namespace {

Matrix inverse_spd(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(x);
  if (!(es.eigenvalues()(0) > 0.0)) throw input_error("x is not positive definite");
  return es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

CholeskyCoordinates generalized_cholesky(const BcModel& model, const Matrix& x, double tol) {
  const auto& bs = model.space.blocks();
  const int p = bs.p();
  if (x.rows() != p || x.cols() != p) throw input_error("x has the wrong size");
  if (!model.space.member(x, 1e-10)) throw input_error("x is not in the space");
  Eigen::LLT<Matrix> llt(x);
  if (llt.info() != Eigen::Success) throw input_error("x is not positive definite");

  Matrix cur = 0.5 * (x + x.transpose());
  CholeskyCoordinates out;
  out.T = Matrix::Zero(p, p);
  for (int i = 0; i < bs.r(); ++i) {
    const int o = bs.offset(i), n = bs.size(i), rest = p - o - n;
    const Matrix xi = cur.block(o, o, n, n);
    const Matrix yi = cur.block(o + n, o, rest, n);
    const Matrix ti = yi * inverse_spd(xi);

    const auto& frame = model.frames[i];
    Matrix c = xi;
    Matrix si = Matrix::Zero(n, n);
    for (int a = 0; a < frame.d(); ++a) {
      const Matrix& ca = frame.c[a];
      Matrix later = Matrix::Zero(n, n);
      for (int b = a + 1; b < frame.d(); ++b) later += frame.c[b];
      const double s2 = (c * ca).trace() / frame.mu[a];
      if (!(s2 > 0.0)) throw input_error("x is not positive definite");
      const double s = std::sqrt(s2);
      const Matrix g = later * c * ca / s;
      si += s * ca + g;
      c = later * c * later - g * g.transpose();
    }
    out.T.block(o, o, n, n) = si;
    if (rest > 0) {
      out.T.block(o + n, o, rest, n) = ti * si;
      cur.block(o + n, o + n, rest, rest) -= ti * yi.transpose();
    }
  }

  Matrix rebuilt = Matrix::Zero(p, p);
  for (const auto& row : model.constants.h) {
    out.t.emplace_back();
    out.tau.emplace_back();
    for (const auto& h : row) {
      const Matrix e = h.e_tilde();
      const double t = frob_inner(out.T, e);
      if (!(t > 0.0)) throw numerical_error("Cholesky diagonal coordinate is not positive");
      rebuilt += t * e;
      const auto f = h.orthonormal();
      Vector tau(h.m());
      for (int g = 0; g < h.m(); ++g) {
        tau(g) = frob_inner(out.T, f[g]);
        rebuilt += tau(g) * f[g];
      }
      out.t.back().push_back(t);
      out.tau.back().push_back(tau);
    }
  }
  const double nx = x.norm();
  if ((rebuilt - out.T).norm() > 1e3 * tol * std::max(1.0, out.T.norm()))
    throw numerical_error("Cholesky factor does not lie in the triangular space H");
  out.reconstruction_error = (rebuilt * rebuilt.transpose() - x).norm() / nx;
  if (out.reconstruction_error > tol)
    throw numerical_error("Cholesky reconstruction error " + std::to_string(out.reconstruction_error) +
                          " exceeds tolerance");
  return out;
}

}  // namespace cggm
