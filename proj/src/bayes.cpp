#include "cggm/bayes.hpp"

#include <algorithm>
#include <chrono>

#include "cggm/errors.hpp"
#include "cggm/normalizer.hpp"

namespace cggm {

void SufficientStats::add(const Vector& z) {
  if (z.size() != u.rows()) throw input_error("observation has the wrong length");
  u += z * z.transpose();
  n += 1.0;
}

SufficientStats ingest_data(const std::vector<std::vector<double>>& rows, int p) {
  SufficientStats st(p);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<int>(rows[i].size()) != p)
      throw input_error("row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                        " columns, expected " + std::to_string(p));
    st.add(Eigen::Map<const Vector>(rows[i].data(), p));
  }
  return st;
}

double score_model(const ColoredGraph& g, const DYPrior& prior, const SufficientStats& stats, double log_prior_prob,
                   std::uint64_t seed) {
  const int p = g.p();
  if (stats.u.rows() != p) throw input_error("data dimension does not match the graph");
  const auto gm = build_graph_model(g, seed);
  const Matrix d = gm.to_model(prior.d_or_identity(p));
  const Matrix u = gm.to_model(stats.u);
  return log_posterior_ratio(gm.model, prior.delta, d, stats.n, u) + log_prior_prob;
}

std::vector<RankedModel> compare_models(const std::vector<ModelEntry>& models, const DYPrior& prior,
                                        const SufficientStats& stats, std::uint64_t seed) {
  std::vector<RankedModel> ok, failed;
  for (std::size_t i = 0; i < models.size(); ++i) {
    RankedModel row;
    row.index = static_cast<int>(i);
    row.name = models[i].name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const auto& g = models[i].graph;
      if (stats.u.rows() != g.p()) throw input_error("data dimension does not match the graph");
      const auto gm = build_graph_model(g, seed);
      row.verdict = to_string(gm.verdict.kind);
      row.threshold = convergence_threshold(gm.model.constants);
      const Matrix d = gm.to_model(prior.d_or_identity(g.p()));
      const Matrix u = gm.to_model(stats.u);
      row.log_score = log_posterior_ratio(gm.model, prior.delta, d, stats.n, u) + models[i].log_prior;
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
      if (row.verdict.empty()) {
        try {
          row.verdict = to_string(classify(models[i].graph).kind);
        } catch (const std::exception&) {
        }
      }
    }
    row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    (row.ok ? ok : failed).push_back(std::move(row));
  }
  std::stable_sort(ok.begin(), ok.end(), [](const RankedModel& a, const RankedModel& b) { return a.log_score > b.log_score; });
  ok.insert(ok.end(), failed.begin(), failed.end());
  return ok;
}

}  // namespace cggm
