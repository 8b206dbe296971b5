#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "lowstretch/common.hpp"
#include "lowstretch/multigraph.hpp"
#include "lowstretch/steiner.hpp"

namespace lowstretch {

struct OperatorCheckReport {
  int n_graph = 0;
  int n_combined = 0;
  int vectors = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  bool pass = false;
};

namespace detail {

inline Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& L) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  const auto& vals = es.eigenvalues();
  double lmax = vals.cwiseAbs().maxCoeff();
  double cutoff = 1e-10 * lmax;
  Eigen::VectorXd inv = vals;
  int null_dim = 0;
  for (int i = 0; i < inv.size(); ++i) {
    if (std::abs(vals[i]) <= cutoff) {
      inv[i] = 0.0;
      ++null_dim;
    } else {
      inv[i] = 1.0 / vals[i];
    }
  }
  if (null_dim != 1) throw Error("Laplacian null space is not one-dimensional (disconnected?)");
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace detail

/// Quadratic-form sandwich: with H the graph plus the tree (weights are
/// reciprocal lengths) and Pi the selector of original vertices, checks
/// 1/2 - tol <= (x' Pi Lh+ Pi' x)/(x' Lg+ x) <= 1 + tol for random
/// Gaussian x projected orthogonal to the all-ones vector. Dense
/// eigendecomposition oracle; instances are capped at 400 vertices.
inline OperatorCheckReport laplacian_sandwich_check(const MultiGraph& g,
                                                    const SteinerTree& T, int trials,
                                                    double tol,
                                                    unsigned long long seed = 12345) {
  if (T.n_total > 400) throw Error("laplacian_sandwich_check: instance above 400 vertices");
  if (trials <= 0) throw Error("laplacian_sandwich_check: need at least one vector");
  if (!g.connected()) throw Error("laplacian_sandwich_check: graph must be connected");

  const int n = g.n, N = T.n_total;
  Eigen::MatrixXd Lg = Eigen::MatrixXd::Zero(n, n);
  auto add = [](Eigen::MatrixXd& L, int a, int b, double w) {
    L(a, a) += w;
    L(b, b) += w;
    L(a, b) -= w;
    L(b, a) -= w;
  };
  for (const Edge& e : g.edges) add(Lg, e.u, e.v, 1.0 / e.length);
  Eigen::MatrixXd Lh = Eigen::MatrixXd::Zero(N, N);
  for (const Edge& e : g.edges) add(Lh, T.pi[e.u], T.pi[e.v], 1.0 / e.length);
  for (const auto& te : T.edges) add(Lh, te.u, te.v, 1.0 / te.length);

  Eigen::MatrixXd Lg_pinv = detail::pseudo_inverse(Lg);
  Eigen::MatrixXd Lh_pinv = detail::pseudo_inverse(Lh);
  Eigen::MatrixXd Pi = Eigen::MatrixXd::Zero(n, N);
  for (int v = 0; v < n; ++v) Pi(v, T.pi[v]) = 1.0;
  Eigen::MatrixXd M = Pi * Lh_pinv * Pi.transpose();

  OperatorCheckReport rep;
  rep.n_graph = n;
  rep.n_combined = N;
  rep.vectors = trials;
  rep.min_ratio = kInf;
  rep.max_ratio = -kInf;
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.normal();
    x.array() -= x.mean();  // project orthogonal to all-ones
    double denom = x.dot(Lg_pinv * x);
    if (!(denom > 0.0)) {
      --t;  // degenerate draw; redraw (measure-zero event)
      continue;
    }
    double r = x.dot(M * x) / denom;
    rep.min_ratio = std::min(rep.min_ratio, r);
    rep.max_ratio = std::max(rep.max_ratio, r);
  }
  rep.pass = rep.min_ratio >= 0.5 - tol && rep.max_ratio <= 1.0 + tol;
  return rep;
}

}  // namespace lowstretch
