#include "cggm/oracle.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <thread>

#include "cggm/errors.hpp"

namespace cggm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log det(x)^s e^{-tr(Ax)}, or -inf outside the cone.
double log_integrand(const Matrix& x, double s, const Matrix& a) {
  double ld;
  if (!log_det_pd(x, ld)) return kNegInf;
  return s * ld - frob_inner(a, x);
}

struct Proposal {
  Vector mean;
  Matrix chol;  // lower factor of the scale matrix
  double log_norm = 0.0;
  double nu = 5.0;

  void set_scale(const Matrix& scale) {
    Eigen::LLT<Matrix> llt(scale);
    chol = llt.matrixL();
    const double d = static_cast<double>(mean.size());
    double ld = 0.0;
    for (Eigen::Index i = 0; i < chol.rows(); ++i) ld += std::log(chol(i, i));
    log_norm = std::lgamma(0.5 * (nu + d)) - std::lgamma(0.5 * nu) - 0.5 * d * std::log(nu * std::numbers::pi) - ld;
  }

  // Multivariate Student-t draw; returns log density at the draw.
  double draw(std::mt19937_64& rng, Vector& z) const {
    std::normal_distribution<double> normal;
    std::chi_squared_distribution<double> chi(nu);
    const Eigen::Index d = mean.size();
    Vector y(d);
    for (Eigen::Index k = 0; k < d; ++k) y(k) = normal(rng);
    const double w = std::sqrt(nu / chi(rng));
    z = mean + w * (chol * y);
    const double maha = y.squaredNorm() * w * w;
    return log_norm - 0.5 * (nu + static_cast<double>(d)) * std::log1p(maha / nu);
  }
};

void sample_weights(const ColorSpace& space, double s, const Matrix& a, const Proposal& q, std::size_t n,
                    std::mt19937_64& rng, std::vector<double>& lw, std::vector<Vector>* keep) {
  lw.resize(n);
  Vector z;
  for (std::size_t i = 0; i < n; ++i) {
    const double lq = q.draw(rng, z);
    const double lf = log_integrand(space.from_coordinates(z), s, a);
    lw[i] = lf == kNegInf ? kNegInf : lf - lq;
    if (keep) keep->push_back(z);
  }
}

}  // namespace

McEstimate mc_integral(const ColorSpace& space, double s, const Matrix& a, const McOptions& opt) {
  const int d = space.dim();
  const int p = space.p();
  if (d > 8) throw input_error("Monte Carlo oracle supports dim <= 8");
  if (opt.samples < 2 || opt.threads < 1) throw input_error("need at least two samples and one thread");
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) throw input_error("A is not positive definite");

  // Anchor on the identity ray, scaled like the Wishart mean.
  const double t0 = std::max(s * p + d, 0.5) / a.trace();
  Proposal q;
  q.mean = space.project(t0 * Matrix::Identity(p, p));
  q.set_scale(std::pow(0.5 * t0, 2) * Matrix::Identity(d, d));

  std::seed_seq pilot_seq{opt.seed, std::uint64_t{0x5eed}};
  std::mt19937_64 pilot_rng(pilot_seq);
  for (int round = 0; round < 4; ++round) {
    std::vector<double> lw;
    std::vector<Vector> zs;
    sample_weights(space, s, a, q, opt.pilot, pilot_rng, lw, &zs);
    const double m = *std::max_element(lw.begin(), lw.end());
    if (m == kNegInf) {
      q.set_scale(0.25 * q.chol * q.chol.transpose());
      continue;
    }
    Vector mean = Vector::Zero(d);
    double total = 0.0, total2 = 0.0;
    std::vector<double> w(lw.size());
    for (std::size_t i = 0; i < lw.size(); ++i) {
      w[i] = std::exp(lw[i] - m);
      total += w[i];
      total2 += w[i] * w[i];
      mean += w[i] * zs[i];
    }
    mean /= total;
    Matrix cov = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < lw.size(); ++i) cov += w[i] * (zs[i] - mean) * (zs[i] - mean).transpose();
    cov /= total;
    const double ess = total * total / total2;
    // A degenerate pilot only moves the centre; widen instead of trusting its spread.
    if (ess < 2.0 * d + 2.0) {
      q.mean = mean;
      q.set_scale(1.5 * q.chol * q.chol.transpose());
      continue;
    }
    q.mean = mean;
    q.set_scale(cov + 1e-12 * cov.trace() * Matrix::Identity(d, d));
  }

  const int threads = opt.threads;
  std::vector<std::vector<double>> parts(threads);
  auto work = [&](int t) {
    const std::size_t n = opt.samples / threads + (static_cast<std::size_t>(t) < opt.samples % threads ? 1 : 0);
    std::seed_seq seq{opt.seed, std::uint64_t{1}, static_cast<std::uint64_t>(t)};
    std::mt19937_64 rng(seq);
    sample_weights(space, s, a, q, n, rng, parts[t], nullptr);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }

  double m = kNegInf;
  for (const auto& part : parts)
    for (double x : part) m = std::max(m, x);
  if (m == kNegInf) throw validation_error("no Monte Carlo sample landed in the cone");
  double sum = 0.0, sum2 = 0.0;
  for (const auto& part : parts)
    for (double x : part) {
      const double w = std::exp(x - m);
      sum += w;
      sum2 += w * w;
    }
  const double n = static_cast<double>(opt.samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum2 / n - mean * mean) * n / (n - 1.0);
  McEstimate est;
  est.samples = opt.samples;
  est.ess = sum * sum / sum2;
  est.log_estimate = m + std::log(mean);
  est.stderr_log = std::sqrt(var / n) / mean;
  if (est.ess < 0.01 * n)
    throw validation_error("importance sampling effective sample size " + std::to_string(est.ess) +
                           " is below 1% of the sample count");
  return est;
}

double quadrature_integral(const ColorSpace& space, double s, const Matrix& a) {
  const int d = space.dim();
  const int p = space.p();
  if (d > 3) throw input_error("quadrature oracle supports dim <= 3");
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) throw input_error("A is not positive definite");
  const double tra = a.trace();

  // Orthonormal coordinates with the identity direction first; the remaining
  // directions are traceless.
  const Matrix u0 = Matrix::Identity(p, p) / std::sqrt(static_cast<double>(p));
  std::vector<Matrix> rest;
  for (const auto& q : space.orthonormal_basis()) {
    Matrix y = q - frob_inner(q, u0) * u0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& r : rest) y -= frob_inner(y, r) * r;
    if (y.norm() > 1e-8) rest.push_back(y / y.norm());
  }
  if (static_cast<int>(rest.size()) != d - 1) throw numerical_error("identity direction not found in the span");

  // For fixed traceless part Y, substitute x = u I + (Y - lambda_min(Y) I), u > 0.
  auto inner = [&](const Matrix& y) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(y, Eigen::EigenvaluesOnly);
    const Vector nu = es.eigenvalues().array() - es.eigenvalues()(0);
    const double c = frob_inner(a, y) - es.eigenvalues()(0) * tra;
    boost::math::quadrature::exp_sinh<double> integrator;
    auto f = [&](double w) {
      double lg = -w;
      for (Eigen::Index j = 0; j < nu.size(); ++j) lg += s * std::log(w / tra + nu(j));
      return std::exp(lg - c);
    };
    return std::sqrt(static_cast<double>(p)) / tra * integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-12);
  };

  using boost::math::quadrature::gauss_kronrod;
  const double inf = std::numeric_limits<double>::infinity();
  auto line = [&](const std::function<double(double)>& f) {
    return gauss_kronrod<double, 31>::integrate(f, -inf, 0.0, 15, 1e-11) +
           gauss_kronrod<double, 31>::integrate(f, 0.0, inf, 15, 1e-11);
  };

  double value;
  if (d == 1) {
    value = inner(Matrix::Zero(p, p));
  } else if (d == 2) {
    value = line([&](double y1) { return inner(y1 * rest[0]); });
  } else {
    value = line([&](double y1) { return line([&](double y2) { return inner(y1 * rest[0] + y2 * rest[1]); }); });
  }
  if (!(value > 0.0) || !std::isfinite(value)) throw numerical_error("quadrature did not produce a positive value");
  return std::log(value);
}

double log_multivariate_gamma(int q, double a) {
  double s = 0.25 * q * (q - 1) * std::log(std::numbers::pi);
  for (int j = 1; j <= q; ++j) s += std::lgamma(a - 0.5 * (j - 1));
  return s;
}

namespace {

double log_complete_wishart(const std::vector<int>& clique, double delta, const Matrix& d) {
  const int q = static_cast<int>(clique.size());
  if (q == 0) return 0.0;
  Matrix dc(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) dc(i, j) = 0.5 * d(clique[i] - 1, clique[j] - 1);
  double ld;
  if (!log_det_pd(dc, ld)) throw input_error("D is not positive definite");
  const double a = 0.5 * (delta + q - 1);
  return log_multivariate_gamma(q, a) - a * ld;
}

}  // namespace

double decomposable_gwishart_log(const ColoredGraph& g, double delta, const Matrix& d) {
  const int p = g.p();
  if (g.r() != p || g.R() != static_cast<int>(g.edges().size()))
    throw input_error("clique-separator oracle needs an all-singleton coloring");
  if (d.rows() != p || d.cols() != p) throw input_error("D has the wrong size");

  std::vector<std::vector<char>> adj(p + 1, std::vector<char>(p + 1, 0));
  for (const auto& e : g.edges()) adj[e.v][e.w] = adj[e.w][e.v] = 1;

  // Maximum cardinality search; its reverse is a perfect elimination ordering for chordal graphs.
  std::vector<int> weight(p + 1, 0), order;
  std::vector<char> numbered(p + 1, 0);
  for (int step = 0; step < p; ++step) {
    int best = -1;
    for (int v = 1; v <= p; ++v)
      if (!numbered[v] && (best < 0 || weight[v] > weight[best])) best = v;
    numbered[best] = 1;
    order.push_back(best);
    for (int w = 1; w <= p; ++w)
      if (adj[best][w] && !numbered[w]) ++weight[w];
  }
  std::reverse(order.begin(), order.end());
  std::vector<int> rank(p + 1);
  for (int i = 0; i < p; ++i) rank[order[i]] = i;

  std::vector<std::set<int>> cand;
  for (int v : order) {
    std::set<int> c{v};
    for (int w = 1; w <= p; ++w)
      if (adj[v][w] && rank[w] > rank[v]) c.insert(w);
    for (int x : c)
      for (int y : c)
        if (x < y && !adj[x][y]) throw input_error("graph is not decomposable");
    cand.push_back(c);
  }
  std::vector<std::vector<int>> cliques;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < cand.size() && maximal; ++j)
      if (i != j && cand[j].size() >= cand[i].size() &&
          std::includes(cand[j].begin(), cand[j].end(), cand[i].begin(), cand[i].end()) &&
          (cand[j].size() > cand[i].size() || j < i))
        maximal = false;
    if (maximal) cliques.emplace_back(cand[i].begin(), cand[i].end());
  }

  // Junction tree: maximum-weight spanning tree of the clique intersection graph.
  const int nc = static_cast<int>(cliques.size());
  struct Link { int w, a, b; std::vector<int> sep; };
  std::vector<Link> links;
  for (int i = 0; i < nc; ++i)
    for (int j = i + 1; j < nc; ++j) {
      std::vector<int> sep;
      std::set_intersection(cliques[i].begin(), cliques[i].end(), cliques[j].begin(), cliques[j].end(),
                            std::back_inserter(sep));
      links.push_back({static_cast<int>(sep.size()), i, j, sep});
    }
  std::stable_sort(links.begin(), links.end(), [](const Link& x, const Link& y) { return x.w > y.w; });
  std::vector<int> comp(nc);
  for (int i = 0; i < nc; ++i) comp[i] = i;
  std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };

  double value = 0.0;
  for (const auto& c : cliques) value += log_complete_wishart(c, delta, d);
  for (const auto& l : links) {
    const int ra = find(l.a), rb = find(l.b);
    if (ra == rb) continue;
    comp[ra] = rb;
    value -= log_complete_wishart(l.sep, delta, d);
  }
  return value + 0.5 * static_cast<double>(g.edges().size()) * std::log(2.0);
}

Comparison compare(double engine_log, double oracle_log, std::optional<double> oracle_stderr, double tol) {
  Comparison c;
  c.engine = engine_log;
  c.oracle = oracle_log;
  c.diff = engine_log - oracle_log;
  c.stderr_log = oracle_stderr;
  if (oracle_stderr) {
    c.z = *oracle_stderr > 0.0 ? c.diff / *oracle_stderr
                              : (c.diff == 0.0 ? 0.0 : std::copysign(-kNegInf, c.diff));
    c.pass = std::abs(c.diff) <= std::max(3.0 * *oracle_stderr, 1e-8);
  } else {
    c.pass = std::abs(c.diff) <= tol;
  }
  return c;
}

}  // namespace cggm
