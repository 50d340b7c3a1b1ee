#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cggm/colored_graph.hpp"
#include "cggm/linalg.hpp"

namespace cggm {

// Blocks are 0-based internally: block i covers indices offset(i) .. offset(i)+size(i)-1.
class BlockStructure {
 public:
  BlockStructure() = default;
  explicit BlockStructure(std::vector<int> sizes);

  int r() const { return static_cast<int>(sizes_.size()); }
  int p() const { return offsets_.back(); }
  int size(int i) const { return sizes_[i]; }
  int offset(int i) const { return offsets_[i]; }
  int block_of(int index) const;
  const std::vector<int>& sizes() const { return sizes_; }

 private:
  std::vector<int> sizes_;
  std::vector<int> offsets_{0};
};

Matrix block_tri(const Matrix& x, const BlockStructure& bs);
Matrix block_diag(const Matrix& x, const BlockStructure& bs);

enum class Region { Diagonal, Strip };

struct SpaceElement {
  Matrix matrix;
  Region region = Region::Diagonal;
  int block = 0;  // 0-based; for a strip L_i this is i
  int color = 0;  // graph color, 0 for raw input
};

class ColorSpace {
 public:
  ColorSpace(BlockStructure bs, std::vector<SpaceElement> basis, bool integral);

  const BlockStructure& blocks() const { return blocks_; }
  int p() const { return blocks_.p(); }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<SpaceElement>& basis() const { return basis_; }
  const std::vector<Matrix>& orthonormal_basis() const { return orthonormal_; }
  bool integral() const { return integral_; }

  std::vector<int> diagonal_indices(int block) const;
  std::vector<int> strip_indices(int block) const;

  // Coordinates against the orthonormal basis.
  Vector project(const Matrix& x) const;
  Matrix from_coordinates(const Vector& z) const;
  // ||x - P(x)||_F / ||x||_F (absolute when x = 0).
  double membership_residual(const Matrix& x) const;
  bool member(const Matrix& x, double tol = 1e-10) const { return membership_residual(x) <= tol; }

  // For integral spaces: worst deviation of an integer matrix from the span
  // (entries must be constant on each support and zero elsewhere); 0 iff member.
  std::int64_t integer_residual(const IntMatrix& x) const;

  // log of prod_k ||J^k||_F, the factor between orthonormal and basis coordinates.
  double log_measure_factor() const;

 private:
  BlockStructure blocks_;
  std::vector<SpaceElement> basis_;
  std::vector<Matrix> orthonormal_;
  bool integral_ = false;
  std::vector<int> entry_owner_;  // p*p, basis index owning the entry or -1 (integral spaces)
};

// g must already be relabeled so that its vertex classes are consecutive blocks.
ColorSpace space_from_graph(const ColoredGraph& relabeled);
ColorSpace space_from_basis(const std::vector<Matrix>& basis, const std::vector<int>& block_sizes);

struct AxiomReport {
  bool holds = true;
  double worst_residual = 0.0;
  std::optional<std::pair<int, int>> witness;  // basis indices of the first failing pair
};

AxiomReport check_z1(const ColorSpace& space, double tol = 1e-10);
AxiomReport check_z2(const ColorSpace& space, double tol = 1e-10);

Matrix random_element(const ColorSpace& space, std::uint64_t seed, bool positive_definite);

}  // namespace cggm
