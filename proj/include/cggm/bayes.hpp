#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cggm/colored_graph.hpp"
#include "cggm/linalg.hpp"

namespace cggm {

struct DYPrior {
  double delta = 3.0;
  Matrix d;  // empty means I_p

  Matrix d_or_identity(int p) const { return d.size() == 0 ? Matrix::Identity(p, p) : d; }
};

struct SufficientStats {
  double n = 0.0;
  Matrix u;

  explicit SufficientStats(int p = 0) : u(Matrix::Zero(p, p)) {}
  void add(const Vector& z);
};

SufficientStats ingest_data(const std::vector<std::vector<double>>& rows, int p);

// log I(delta+n, D+U) - log I(delta, D) + log_prior_prob, with D and U given in the
// graph's original vertex numbering.
double score_model(const ColoredGraph& g, const DYPrior& prior, const SufficientStats& stats, double log_prior_prob,
                   std::uint64_t seed = 0);

struct ModelEntry {
  ColoredGraph graph;
  double log_prior = 0.0;
  std::string name;
};

struct RankedModel {
  int index = 0;  // position in the input list
  std::string name;
  bool ok = false;
  double log_score = 0.0;
  std::string verdict;
  double threshold = 0.0;
  double runtime_ms = 0.0;
  std::string error;
};

// Successful models by descending score (input order on ties), then failed ones.
std::vector<RankedModel> compare_models(const std::vector<ModelEntry>& models, const DYPrior& prior,
                                        const SufficientStats& stats, std::uint64_t seed = 0);

}  // namespace cggm
