#pragma once

#include <vector>

#include "cggm/color_space.hpp"
#include "cggm/jordan_frames.hpp"

namespace cggm {

// W with W^T W = I and W W^T = c (columns span the range of c).
Matrix projection_factor(const Matrix& c);

std::vector<Matrix> l_space_basis(const ColorSpace& space, int block);

struct HSpaceBasis {
  int block = 0;
  int alpha = 0;
  int mu = 0;
  Matrix w;                // p x mu, embedded factor of c_alpha
  std::vector<Matrix> u;   // p x mu compressed factors of the pivot elements (element = u W^T)
  std::vector<int> pivots; // indices into the spanning set
  Matrix gram;             // m x m Gram matrix of the pivot elements
  int m() const { return static_cast<int>(u.size()); }

  // Orthonormal basis of H_{i,alpha} as p x p matrices, obtained from the Cholesky factor of gram.
  std::vector<Matrix> orthonormal() const;
  Matrix e_tilde() const;  // c_alpha / sqrt(mu), embedded p x p
};

struct HSpaceOptions {
  double rank_tol = 1e-10;
};

HSpaceBasis h_space(const ColorSpace& space, const std::vector<JordanFrame>& frames, int block, int alpha,
                    const HSpaceOptions& opt = {});

struct StructureConstants {
  int r = 0;
  int dim = 0;
  std::vector<int> d;                    // per block
  std::vector<std::vector<int>> mu;      // [block][alpha]
  std::vector<std::vector<int>> m;       // [block][alpha]
  double p_z = 0.0;
  double q_z = 0.0;
  std::vector<std::vector<HSpaceBasis>> h;
};

StructureConstants structure_constants(const ColorSpace& space, const std::vector<JordanFrame>& frames,
                                       const HSpaceOptions& opt = {});

struct FactorValues {
  int block = 0;
  int alpha = 0;
  int mu = 0;
  int m = 0;
  double lambda = 0.0;
  double log_det_psi = 0.0;
  double ratio = 0.0;  // det phi / det psi
};

std::vector<FactorValues> determinant_factors(const StructureConstants& sc, const Matrix& a);

// phi_{i,alpha}(A) in the orthonormal basis (e_tilde, orthonormal()).
Matrix phi_matrix(const HSpaceBasis& h, const Matrix& a);

}  // namespace cggm
