#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cggm/color_space.hpp"

namespace cggm {

struct DiagonalBlockAlgebra {
  int block = 0;  // 0-based
  int n = 0;
  std::vector<Matrix> a;  // n x n basis of M_i
  std::vector<int> space_index;  // index of each a[k] in the space basis

  bool commutative(double tol = 1e-10) const;
};

DiagonalBlockAlgebra diagonal_algebra(const ColorSpace& space, int block);

struct IntersectionData {
  int d = 0;
  std::vector<double> eta;   // eta[(k*d + h)*d + c] = eta_{kh}^c
  std::vector<Matrix> l;     // (L_n)_{lm} = eta_{nm}^l
  double at(int k, int h, int c) const { return eta[(static_cast<std::size_t>(k) * d + h) * d + c]; }
};

// Coefficients of the Jordan products 1/2 (A_k A_h + A_h A_k) in the A-basis.
IntersectionData intersection_numbers(const DiagonalBlockAlgebra& alg);

struct JordanFrame {
  int block = 0;
  std::vector<Matrix> c;  // n x n projections
  std::vector<int> mu;
  std::optional<Matrix> P;  // P(m, alpha): eigenvalue of A_m on c_alpha
  std::optional<Matrix> Q;  // Q(alpha, m)
  int d() const { return static_cast<int>(c.size()); }
};

struct FrameOptions {
  double gap_tol = 1e-8;
  int max_retries = 20;
  double cluster_tol = 1e-6;
};

JordanFrame random_method(const DiagonalBlockAlgebra& alg, const IntersectionData& data, std::uint64_t seed,
                          const FrameOptions& opt = {});

JordanFrame generic_element_frame(const DiagonalBlockAlgebra& alg, std::uint64_t seed, const FrameOptions& opt = {});

struct FrameReport {
  double idempotency = 0.0;
  double orthogonality = 0.0;
  double completeness = 0.0;
  double span = 0.0;
  double integrality = 0.0;
  double qp = 0.0;  // ||QP - nI||, ||PQ - nI|| when eigenmatrices are present
  bool pass = false;
};

FrameReport verify_frame(const JordanFrame& frame, const DiagonalBlockAlgebra& alg, double tol = 1e-10);

// Frames for every diagonal block: Random Method where the block is
// commutative (falling back on failure), generic element otherwise.
std::vector<JordanFrame> compute_frames(const ColorSpace& space, std::uint64_t seed, const FrameOptions& opt = {});

// Embed an n_i x n_i block matrix into p x p.
Matrix embed_block(const Matrix& c, const BlockStructure& bs, int block);

}  // namespace cggm
