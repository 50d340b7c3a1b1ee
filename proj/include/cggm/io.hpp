#pragma once

#include <istream>
#include <json.hpp>
#include <string>
#include <vector>

#include "cggm/bayes.hpp"
#include "cggm/cer_analysis.hpp"
#include "cggm/color_space.hpp"
#include "cggm/normalizer.hpp"
#include "cggm/oracle.hpp"

namespace cggm {

using json = nlohmann::json;

bool is_graph_json(const json& j);
bool is_space_json(const json& j);
bool is_rcop_json(const json& j);

ColoredGraph graph_from_json(const json& j);
json graph_to_json(const ColoredGraph& g);

struct RcopInput {
  int p = 0;
  std::vector<Edge> edges;
  std::vector<Permutation> generators;
};
RcopInput rcop_from_json(const json& j);

ColorSpace space_from_json(const json& j);

// Accepts nested rows or a flat row-major array of p*p numbers.
Matrix matrix_from_json(const json& j, int p);
json matrix_to_json(const Matrix& x);

// Round to the given number of significant digits for stable printing.
double round_sig(double x, int digits = 12);

json verdict_to_json(const ColoredGraph& g, const CerVerdict& v);
json constants_to_json(const StructureConstants& sc, const std::vector<JordanFrame>& frames, bool dump);
json normalizer_to_json(const NormalizerResult& r);
json cholesky_to_json(const CholeskyCoordinates& c);
json comparison_to_json(const Comparison& c);

std::vector<ModelEntry> models_from_json(const json& j);
std::vector<std::vector<double>> read_csv(std::istream& in, bool header);

}  // namespace cggm
