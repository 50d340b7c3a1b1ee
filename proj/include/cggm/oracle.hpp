#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "cggm/color_space.hpp"
#include "cggm/colored_graph.hpp"

namespace cggm {

struct McOptions {
  std::size_t samples = 1000000;
  std::uint64_t seed = 0;
  int threads = 1;
  std::size_t pilot = 1000;
};

struct McEstimate {
  double log_estimate = 0.0;
  double stderr_log = 0.0;
  double ess = 0.0;
  std::size_t samples = 0;
};

// Importance sampling of log int det(x)^s exp(-tr(Ax)) dx over Z n Sym+ in
// orthonormal coordinates.
McEstimate mc_integral(const ColorSpace& space, double s, const Matrix& a, const McOptions& opt = {});

// Nested adaptive quadrature, dim <= 3.
double quadrature_integral(const ColorSpace& space, double s, const Matrix& a);

// Clique-separator formula for an all-singleton coloring of a chordal graph,
// in orthonormal-coordinate measure.
double decomposable_gwishart_log(const ColoredGraph& g, double delta, const Matrix& d);

// log of the multivariate gamma function Gamma_q(a).
double log_multivariate_gamma(int q, double a);

struct Comparison {
  double engine = 0.0;
  double oracle = 0.0;
  double diff = 0.0;
  std::optional<double> stderr_log;
  double z = 0.0;
  bool pass = false;
};

Comparison compare(double engine_log, double oracle_log, std::optional<double> oracle_stderr, double tol = 1e-8);

}  // namespace cggm
