#include "cggm/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "cggm/errors.hpp"

namespace cggm {

namespace {

Edge edge_from_json(const json& e) {
  if (!e.is_array() || e.size() != 2) throw input_error("edge must be a pair [v, w]");
  return make_edge(e[0].get<int>(), e[1].get<int>());
}

std::vector<Edge> edges_from_json(const json& j) {
  std::vector<Edge> out;
  if (!j.contains("edges")) return out;
  if (!j.at("edges").is_array()) throw input_error("\"edges\" must be an array");
  for (const auto& e : j.at("edges")) out.push_back(edge_from_json(e));
  return out;
}

json edge_to_json(const Edge& e) { return json::array({e.v, e.w}); }

int p_from_json(const json& j) {
  if (!j.contains("p") || !j.at("p").is_number_integer()) throw input_error("missing integer field \"p\"");
  return j.at("p").get<int>();
}

}  // namespace

bool is_graph_json(const json& j) { return j.is_object() && j.contains("p") && !j.contains("generators"); }
bool is_space_json(const json& j) { return j.is_object() && j.contains("basis") && j.contains("block_sizes"); }
bool is_rcop_json(const json& j) { return j.is_object() && j.contains("p") && j.contains("generators"); }

ColoredGraph graph_from_json(const json& j) {
  if (!j.is_object()) throw input_error("graph JSON must be an object");
  const int p = p_from_json(j);
  const auto edges = edges_from_json(j);
  if (!j.contains("vertex_classes") && !j.contains("edge_classes")) return ColoredGraph::uncolored(p, edges);

  std::vector<std::vector<int>> vc;
  if (j.contains("vertex_classes")) {
    for (const auto& cls : j.at("vertex_classes")) vc.push_back(cls.get<std::vector<int>>());
  } else {
    for (int v = 1; v <= p; ++v) vc.push_back({v});
  }
  std::vector<std::vector<Edge>> ec;
  if (j.contains("edge_classes")) {
    for (const auto& cls : j.at("edge_classes")) {
      std::vector<Edge> c;
      for (const auto& e : cls) c.push_back(edge_from_json(e));
      ec.push_back(c);
    }
  } else {
    for (const auto& e : edges) ec.push_back({e});
  }
  std::vector<std::string> names;
  if (j.contains("vertex_class_names")) names = j.at("vertex_class_names").get<std::vector<std::string>>();
  return ColoredGraph(p, edges, vc, ec, names);
}

json graph_to_json(const ColoredGraph& g) {
  json j;
  j["p"] = g.p();
  j["edges"] = json::array();
  for (const auto& e : g.edges()) j["edges"].push_back(edge_to_json(e));
  j["vertex_classes"] = g.vertex_classes();
  j["edge_classes"] = json::array();
  for (const auto& cls : g.edge_classes()) {
    json c = json::array();
    for (const auto& e : cls) c.push_back(edge_to_json(e));
    j["edge_classes"].push_back(c);
  }
  if (!g.class_names().empty()) j["vertex_class_names"] = g.class_names();
  return j;
}

RcopInput rcop_from_json(const json& j) {
  RcopInput in;
  in.p = p_from_json(j);
  in.edges = edges_from_json(j);
  for (const auto& g : j.at("generators")) in.generators.push_back(g.get<Permutation>());
  return in;
}

Matrix matrix_from_json(const json& j, int p) {
  if (!j.is_array()) throw input_error("matrix must be an array");
  Matrix x(p, p);
  if (static_cast<int>(j.size()) == p * p && (j.empty() || j[0].is_number())) {
    for (int k = 0; k < p * p; ++k) x(k / p, k % p) = j[k].get<double>();
    return x;
  }
  if (static_cast<int>(j.size()) != p) throw input_error("matrix has the wrong number of rows");
  for (int a = 0; a < p; ++a) {
    if (!j[a].is_array() || static_cast<int>(j[a].size()) != p) throw input_error("matrix row has the wrong length");
    for (int b = 0; b < p; ++b) x(a, b) = j[a][b].get<double>();
  }
  return x;
}

json matrix_to_json(const Matrix& x) {
  json j = json::array();
  for (Eigen::Index a = 0; a < x.rows(); ++a) {
    json row = json::array();
    for (Eigen::Index b = 0; b < x.cols(); ++b) row.push_back(round_sig(x(a, b)));
    j.push_back(row);
  }
  return j;
}

ColorSpace space_from_json(const json& j) {
  const auto sizes = j.at("block_sizes").get<std::vector<int>>();
  int p = 0;
  for (int n : sizes) p += n;
  std::vector<Matrix> basis;
  for (const auto& b : j.at("basis")) basis.push_back(matrix_from_json(b, p));
  return space_from_basis(basis, sizes);
}

double round_sig(double x, int digits) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

json verdict_to_json(const ColoredGraph& g, const CerVerdict& v) {
  json j;
  j["verdict"] = to_string(v.kind);
  if (v.ordering) {
    j["eta"] = *v.ordering;
    json names = json::array();
    for (int k : *v.ordering) names.push_back(g.color_name(k));
    j["eta_names"] = names;
  }
  if (v.m1_witness) j["m1_witness"] = {edge_to_json(v.m1_witness->first), edge_to_json(v.m1_witness->second)};
  if (v.m2_witness) j["m2_witness"] = {v.m2_witness->v, v.m2_witness->w};
  return j;
}

json constants_to_json(const StructureConstants& sc, const std::vector<JordanFrame>& frames, bool dump) {
  json j;
  j["r"] = sc.r;
  j["dim"] = sc.dim;
  j["d"] = sc.d;
  j["mu"] = sc.mu;
  j["m"] = sc.m;
  j["p_Z"] = round_sig(sc.p_z);
  j["q_Z"] = round_sig(sc.q_z);
  j["threshold"] = round_sig(convergence_threshold(sc));
  if (dump) {
    json fs = json::array();
    for (const auto& f : frames) {
      json fj;
      fj["i"] = f.block + 1;
      fj["ranks"] = f.mu;
      fj["projections"] = json::array();
      for (const auto& c : f.c) {
        json flat = json::array();
        for (Eigen::Index a = 0; a < c.rows(); ++a)
          for (Eigen::Index b = 0; b < c.cols(); ++b) flat.push_back(round_sig(c(a, b)));
        fj["projections"].push_back(flat);
      }
      if (f.P) fj["P"] = matrix_to_json(*f.P);
      if (f.Q) fj["Q"] = matrix_to_json(*f.Q);
      fs.push_back(fj);
    }
    j["frames"] = fs;
  }
  return j;
}

json normalizer_to_json(const NormalizerResult& r) {
  json j;
  j["log_value"] = round_sig(r.log_value);
  j["s"] = round_sig(r.s);
  j["threshold"] = round_sig(r.threshold);
  j["factors"] = json::array();
  for (const auto& f : r.factors)
    j["factors"].push_back({{"i", f.block + 1},
                            {"alpha", f.alpha + 1},
                            {"mu", f.mu},
                            {"m", f.m},
                            {"lambda", round_sig(f.lambda)},
                            {"log_det_psi", round_sig(f.log_det_psi)},
                            {"log_ratio", round_sig(std::log(f.ratio))}});
  return j;
}

json cholesky_to_json(const CholeskyCoordinates& c) {
  json j;
  j["reconstruction_error"] = round_sig(c.reconstruction_error);
  j["coordinates"] = json::array();
  for (std::size_t i = 0; i < c.t.size(); ++i)
    for (std::size_t a = 0; a < c.t[i].size(); ++a) {
      json tau = json::array();
      for (Eigen::Index g = 0; g < c.tau[i][a].size(); ++g) tau.push_back(round_sig(c.tau[i][a](g)));
      j["coordinates"].push_back({{"i", i + 1}, {"alpha", a + 1}, {"t", round_sig(c.t[i][a])}, {"tau", tau}});
    }
  j["T"] = matrix_to_json(c.T);
  return j;
}

json comparison_to_json(const Comparison& c) {
  json j;
  j["engine"] = round_sig(c.engine);
  j["oracle"] = round_sig(c.oracle);
  j["diff"] = round_sig(c.diff);
  if (c.stderr_log) {
    j["stderr"] = round_sig(*c.stderr_log);
    j["z"] = round_sig(c.z);
  }
  j["pass"] = c.pass;
  return j;
}

std::vector<ModelEntry> models_from_json(const json& j) {
  if (!j.is_array()) throw input_error("model list must be a JSON array");
  std::vector<ModelEntry> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    ModelEntry m{graph_from_json(j[i]), j[i].value("log_prior", 0.0), j[i].value("name", "model" + std::to_string(i + 1))};
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<std::vector<double>> read_csv(std::istream& in, bool header) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool skip = header;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (skip) {
      skip = false;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      const std::string t = b == std::string::npos ? "" : cell.substr(b, e - b + 1);
      char* end = nullptr;
      const double v = std::strtod(t.c_str(), &end);
      if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v))
        throw input_error("non-numeric cell '" + t + "' on line " + std::to_string(lineno));
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace cggm
