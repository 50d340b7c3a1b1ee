#pragma once

#include <cstdint>
#include <vector>

#include "cggm/cer_analysis.hpp"
#include "cggm/color_space.hpp"
#include "cggm/jordan_frames.hpp"
#include "cggm/structure_constants.hpp"

namespace cggm {

// A verified BC-space together with its frames and structure constants.
struct BcModel {
  ColorSpace space;
  std::vector<JordanFrame> frames;
  StructureConstants constants;
};

// Checks (Z1) and builds frames and constants; (Z0) is enforced by the space itself.
BcModel analyze_space(ColorSpace space, std::uint64_t seed = 0, const FrameOptions& fopt = {},
                      const HSpaceOptions& hopt = {});

struct GraphModel {
  CerVerdict verdict;
  Relabeling relabeling;
  BcModel model;

  // Move a matrix indexed by the original vertices into the model's numbering.
  Matrix to_model(const Matrix& x) const { return permute_symmetric(x, relabeling.old_of_new); }
};

// classify -> relabel by the CER ordering -> space -> frames -> constants.
GraphModel build_graph_model(const ColoredGraph& g, std::uint64_t seed = 0);

double convergence_threshold(const StructureConstants& sc);

struct NormalizerResult {
  double log_value = 0.0;
  double s = 0.0;
  double threshold = 0.0;
  std::vector<FactorValues> factors;
  std::vector<double> log_terms;  // per-factor contribution, aligned with factors
};

NormalizerResult log_integral(const StructureConstants& sc, const std::vector<FactorValues>& factors, double s);
NormalizerResult log_integral(const BcModel& model, double s, const Matrix& a);

// log of the integral of det(K)^{(delta-2)/2} exp(-tr(DK)/2) over the cone.
NormalizerResult dy_log_normalizer(const BcModel& model, double delta, const Matrix& d);

double log_posterior_ratio(const BcModel& model, double delta, const Matrix& d, double n, const Matrix& u);

struct SrgParameters {
  int p = 0;
  int k = 0;
  int lambda = 0;
  int mu = 0;
};

struct SrgSpectrum {
  double theta1 = 0.0;
  double theta2 = 0.0;
  int f1 = 0;
  int f2 = 0;
};

SrgSpectrum srg_spectrum(const SrgParameters& prm);

// Closed form on span{I, B, J - I - B}; the adjacency matrix B is needed for A != I.
NormalizerResult srg_log_integral(const SrgParameters& prm, const Matrix& adjacency, double s, const Matrix& a);

struct CholeskyCoordinates {
  std::vector<std::vector<double>> t;    // [block][alpha]
  std::vector<std::vector<Vector>> tau;  // [block][alpha]
  Matrix T;
  double reconstruction_error = 0.0;     // ||T T^T - x||_F / ||x||_F
};

CholeskyCoordinates generalized_cholesky(const BcModel& model, const Matrix& x, double tol = 1e-10);

}  // namespace cggm
