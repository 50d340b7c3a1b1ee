#include "cggm/color_space.hpp"

#include <cmath>
#include <random>

#include "cggm/errors.hpp"

namespace cggm {

BlockStructure::BlockStructure(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw input_error("block structure needs at least one block");
  for (int n : sizes_) {
    if (n < 1) throw input_error("block sizes must be positive");
    offsets_.push_back(offsets_.back() + n);
  }
}

int BlockStructure::block_of(int index) const {
  for (int i = 0; i < r(); ++i)
    if (index < offsets_[i + 1]) return i;
  throw input_error("index outside the block structure");
}

Matrix block_tri(const Matrix& x, const BlockStructure& bs) {
  if (x.rows() != bs.p() || x.cols() != bs.p()) throw input_error("matrix size does not match block structure");
  Matrix y = Matrix::Zero(x.rows(), x.cols());
  for (int j = 0; j < bs.r(); ++j) {
    const int o = bs.offset(j), n = bs.size(j);
    y.block(o, o, bs.p() - o, n) = x.block(o, o, bs.p() - o, n);
  }
  return y;
}

Matrix block_diag(const Matrix& x, const BlockStructure& bs) {
  if (x.rows() != bs.p() || x.cols() != bs.p()) throw input_error("matrix size does not match block structure");
  Matrix y = Matrix::Zero(x.rows(), x.cols());
  for (int j = 0; j < bs.r(); ++j) {
    const int o = bs.offset(j), n = bs.size(j);
    y.block(o, o, n, n) = x.block(o, o, n, n);
  }
  return y;
}

namespace {

IntMatrix to_int(const Matrix& x) { return x.array().round().cast<std::int64_t>().matrix(); }

IntMatrix int_block_tri(const IntMatrix& x, const BlockStructure& bs) {
  IntMatrix y = IntMatrix::Zero(x.rows(), x.cols());
  for (int j = 0; j < bs.r(); ++j) {
    const int o = bs.offset(j), n = bs.size(j);
    y.block(o, o, bs.p() - o, n) = x.block(o, o, bs.p() - o, n);
  }
  return y;
}

}  // namespace

ColorSpace::ColorSpace(BlockStructure bs, std::vector<SpaceElement> basis, bool integral)
    : blocks_(std::move(bs)), basis_(std::move(basis)), integral_(integral) {
  const int p = blocks_.p();
  // Modified Gram-Schmidt, applied twice; orthogonal inputs come out merely normalized.
  for (const auto& el : basis_) {
    if (el.matrix.rows() != p || el.matrix.cols() != p) throw input_error("basis matrix has wrong size");
    Matrix q = el.matrix;
    const double norm0 = q.norm();
    if (norm0 == 0.0) throw input_error("zero basis matrix");
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& o : orthonormal_) q -= frob_inner(q, o) * o;
    const double nq = q.norm();
    if (nq <= 1e-10 * norm0) throw input_error("basis matrices are linearly dependent");
    orthonormal_.push_back(q / nq);
  }
  if (integral_) {
    entry_owner_.assign(static_cast<std::size_t>(p) * p, -1);
    for (std::size_t k = 0; k < basis_.size(); ++k)
      for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b)
          if (basis_[k].matrix(a, b) != 0.0) {
            auto& owner = entry_owner_[static_cast<std::size_t>(a) * p + b];
            if (owner != -1 || basis_[k].matrix(a, b) != 1.0) integral_ = false;
            owner = static_cast<int>(k);
          }
    if (!integral_) entry_owner_.clear();
  }
}

std::vector<int> ColorSpace::diagonal_indices(int block) const {
  std::vector<int> out;
  for (int k = 0; k < dim(); ++k)
    if (basis_[k].region == Region::Diagonal && basis_[k].block == block) out.push_back(k);
  return out;
}

std::vector<int> ColorSpace::strip_indices(int block) const {
  std::vector<int> out;
  for (int k = 0; k < dim(); ++k)
    if (basis_[k].region == Region::Strip && basis_[k].block == block) out.push_back(k);
  return out;
}

Vector ColorSpace::project(const Matrix& x) const {
  Vector z(dim());
  for (int k = 0; k < dim(); ++k) z(k) = frob_inner(x, orthonormal_[k]);
  return z;
}

Matrix ColorSpace::from_coordinates(const Vector& z) const {
  Matrix x = Matrix::Zero(p(), p());
  for (int k = 0; k < dim(); ++k) x += z(k) * orthonormal_[k];
  return x;
}

double ColorSpace::membership_residual(const Matrix& x) const {
  if (x.rows() != p() || x.cols() != p()) throw input_error("matrix size does not match the space");
  const double res = (x - from_coordinates(project(x))).norm();
  const double nx = x.norm();
  return nx > 0.0 ? res / nx : res;
}

std::int64_t ColorSpace::integer_residual(const IntMatrix& x) const {
  if (!integral_) throw input_error("integer membership needs a 0/1 disjoint-support basis");
  const int p = this->p();
  std::vector<std::optional<std::int64_t>> value(basis_.size());
  std::int64_t worst = 0;
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b) {
      const int owner = entry_owner_[static_cast<std::size_t>(a) * p + b];
      const std::int64_t e = x(a, b);
      if (owner < 0) {
        worst = std::max<std::int64_t>(worst, std::abs(e));
      } else if (!value[owner]) {
        value[owner] = e;
      } else {
        worst = std::max<std::int64_t>(worst, std::abs(e - *value[owner]));
      }
    }
  return worst;
}

double ColorSpace::log_measure_factor() const {
  double s = 0.0;
  for (const auto& el : basis_) s += std::log(el.matrix.norm());
  return s;
}

namespace {

SpaceElement classify_support(const Matrix& m, const BlockStructure& bs) {
  const double thr = 1e-14 * m.cwiseAbs().maxCoeff();
  int diag_block = -1, strip_block = -1;
  bool mixed = false;
  for (int a = 0; a < bs.p(); ++a)
    for (int b = 0; b < bs.p(); ++b) {
      if (std::abs(m(a, b)) <= thr) continue;
      const int ba = bs.block_of(a), bb = bs.block_of(b);
      if (ba == bb) {
        if (diag_block == -1) diag_block = ba;
        mixed |= diag_block != ba;
      } else {
        const int lo = std::min(ba, bb);
        if (strip_block == -1) strip_block = lo;
        mixed |= strip_block != lo;
      }
    }
  if (mixed || (diag_block != -1 && strip_block != -1))
    throw classification_error("(Z0) violated: a basis matrix straddles several diagonal blocks or strips");
  SpaceElement el;
  el.matrix = m;
  if (diag_block != -1) {
    el.region = Region::Diagonal;
    el.block = diag_block;
  } else {
    el.region = Region::Strip;
    el.block = strip_block;
  }
  return el;
}

void require_identity(const ColorSpace& s) {
  if (!s.member(Matrix::Identity(s.p(), s.p()))) throw classification_error("(Z0) violated: identity not in the span");
}

}  // namespace

ColorSpace space_from_graph(const ColoredGraph& g) {
  std::vector<int> sizes;
  int next = 1;
  for (const auto& cls : g.vertex_classes()) {
    for (int v : cls)
      if (v != next++) throw input_error("vertex classes are not consecutive blocks; relabel first");
    sizes.push_back(static_cast<int>(cls.size()));
  }
  BlockStructure bs(sizes);
  std::vector<SpaceElement> basis;
  for (const auto& bm : basis_matrices(g)) {
    SpaceElement el = classify_support(bm.pattern.cast<double>(), bs);
    el.color = bm.color;
    basis.push_back(std::move(el));
  }
  ColorSpace s(bs, std::move(basis), true);
  require_identity(s);
  return s;
}

ColorSpace space_from_basis(const std::vector<Matrix>& basis, const std::vector<int>& block_sizes) {
  BlockStructure bs(block_sizes);
  std::vector<SpaceElement> els;
  for (const auto& m : basis) {
    if (m.rows() != bs.p() || m.cols() != bs.p()) throw input_error("basis matrix size does not match block sizes");
    if ((m - m.transpose()).norm() > 1e-12 * std::max(1.0, m.norm())) throw input_error("basis matrix is not symmetric");
    els.push_back(classify_support(m, bs));
  }
  ColorSpace s(bs, std::move(els), true);
  require_identity(s);
  return s;
}

AxiomReport check_z1(const ColorSpace& space, double tol) {
  AxiomReport rep;
  const auto& bs = space.blocks();
  const int d = space.dim();
  if (space.integral()) {
    std::vector<IntMatrix> t;
    for (const auto& el : space.basis()) t.push_back(int_block_tri(to_int(el.matrix), bs));
    for (int k = 0; k < d; ++k)
      for (int h = k; h < d; ++h) {
        IntMatrix prod = t[k] * t[h].transpose();
        IntMatrix s = prod + prod.transpose();
        const auto res = space.integer_residual(s);
        rep.worst_residual = std::max(rep.worst_residual, static_cast<double>(res));
        if (res != 0 && rep.holds) {
          rep.holds = false;
          rep.witness = {k, h};
        }
      }
    return rep;
  }
  std::vector<Matrix> t;
  for (const auto& el : space.basis()) t.push_back(block_tri(el.matrix, bs));
  for (int k = 0; k < d; ++k)
    for (int h = k; h < d; ++h) {
      Matrix prod = t[k] * t[h].transpose();
      const double res = space.membership_residual(prod + prod.transpose());
      rep.worst_residual = std::max(rep.worst_residual, res);
      if (res > tol && rep.holds) {
        rep.holds = false;
        rep.witness = {k, h};
      }
    }
  return rep;
}

AxiomReport check_z2(const ColorSpace& space, double tol) {
  AxiomReport rep;
  for (int i = 0; i < space.blocks().r(); ++i) {
    const auto idx = space.diagonal_indices(i);
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a; b < idx.size(); ++b) {
        const Matrix& x = space.basis()[idx[a]].matrix;
        const Matrix& y = space.basis()[idx[b]].matrix;
        double res;
        if (space.integral()) {
          res = static_cast<double>(space.integer_residual(to_int(x) * to_int(y)));
          if (res == 0.0) res = static_cast<double>(space.integer_residual(to_int(y) * to_int(x)));
        } else {
          res = std::max(space.membership_residual(x * y), space.membership_residual(y * x));
        }
        rep.worst_residual = std::max(rep.worst_residual, res);
        const bool fail = space.integral() ? res != 0.0 : res > tol;
        if (fail && rep.holds) {
          rep.holds = false;
          rep.witness = {idx[a], idx[b]};
        }
      }
  }
  return rep;
}

Matrix random_element(const ColorSpace& space, std::uint64_t seed, bool positive_definite) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector z(space.dim());
  for (int k = 0; k < space.dim(); ++k) z(k) = normal(rng);
  Matrix x = space.from_coordinates(z);
  if (positive_definite) {
    const double lo = min_eigenvalue(x);
    if (lo < 0.1) x += std::ceil(0.1 - lo) * Matrix::Identity(space.p(), space.p());
  }
  return x;
}

}  // namespace cggm
