#include "detlim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace detlim {

namespace {

// B^T B accumulated through the left adjacency lists (cost sum_v deg(v)^2).
Eigen::MatrixXd gram_right(const SignedBipartiteIncidence& g) {
  const int m = g.num_u();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  for (int v = 0; v < g.num_v(); ++v)
    for (const auto& [u1, s1] : g.v_adj[v])
      for (const auto& [u2, s2] : g.v_adj[v]) a(u1, u2) += s1 * s2;
  return a;
}

// B B^T accumulated through the right adjacency lists.
Eigen::MatrixXd gram_left(const SignedBipartiteIncidence& g) {
  const int n = g.num_v();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int u = 0; u < g.num_u(); ++u)
    for (const auto& [v1, s1] : g.u_adj[u])
      for (const auto& [v2, s2] : g.u_adj[u]) a(v1, v2) += s1 * s2;
  return a;
}

}  // namespace

SpectralData decompose(const SignedBipartiteIncidence& g, int max_right_vertices) {
  const int m = g.num_u();
  if (m > max_right_vertices)
    throw error("spectral: |U|=" + std::to_string(m) + " exceeds the dense guard " +
                std::to_string(max_right_vertices));
  if (g.d <= 0) throw error("spectral: graph has no declared left degree");

  Eigen::MatrixXd lminus = gram_right(g) / static_cast<double>(g.d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lminus);
  if (solver.info() != Eigen::Success) throw error("spectral: eigendecomposition failed");

  SpectralData s;
  s.d = g.d;
  s.k = g.k;
  // Eigen returns ascending order; flip to descending.
  s.eigenvalues = solver.eigenvalues().reverse();
  s.eigenvectors = solver.eigenvectors().rowwise().reverse();

  const double lmax = std::max(s.eigenvalues(0), 0.0);
  const double residual =
      (lminus * s.eigenvectors - s.eigenvectors * s.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff();
  if (residual > 1e-8 * std::max(1.0, lmax))
    throw error("spectral: eigenpair residual " + std::to_string(residual));

  s.rank_tol = 1e-9 * lmax;
  s.rank = 0;
  for (int i = 0; i < m; ++i)
    if (s.eigenvalues(i) > s.rank_tol) ++s.rank;
  return s;
}

Subspace projection_subspace(const SpectralData& s) {
  Subspace h;
  h.basis = s.eigenvectors.leftCols(s.rank).transpose();
  return h;
}

Subspace near_one_subspace(const SpectralData& s, double eps) {
  if (eps <= 0) throw error("spectral: eps must be positive");
  std::vector<int> keep;
  for (int i = 0; i < s.rank; ++i) {
    const double gap = s.eigenvalues(i) - 1.0;
    if (gap * gap <= eps) keep.push_back(i);
  }
  Subspace h;
  h.basis.resize(static_cast<int>(keep.size()), s.eigenvectors.rows());
  for (size_t j = 0; j < keep.size(); ++j) h.basis.row(static_cast<int>(j)) = s.eigenvectors.col(keep[j]).transpose();
  return h;
}

std::vector<int> structured_vertices(const SpectralData& s, double eps, double delta) {
  if (eps <= 0 || delta <= 0) throw error("spectral: eps and delta must be positive");
  const int m = static_cast<int>(s.eigenvectors.rows());
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < s.rank; ++i) {
    const double gap = s.eigenvalues(i) - 1.0;
    if (gap * gap > eps) mass += s.eigenvectors.col(i).cwiseAbs2();
  }
  std::vector<int> out;
  for (int u = 0; u < m; ++u)
    if (mass(u) > delta) out.push_back(u);
  return out;
}

double trace_identity_gap(const SignedBipartiteIncidence& g) {
  const int n = g.num_v();
  Eigen::MatrixXd lp = gram_left(g) / static_cast<double>(g.d);
  lp.diagonal().array() -= 1.0;
  const double tr = lp.cwiseAbs2().sum();
  return std::abs(tr - static_cast<double>(g.k) * n / g.d);
}

Eigen::VectorXd dual_positive_spectrum(const SignedBipartiteIncidence& g) {
  Eigen::MatrixXd lp = gram_left(g) / static_cast<double>(g.d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lp);
  if (solver.info() != Eigen::Success) throw error("spectral: eigendecomposition failed");
  Eigen::VectorXd desc = solver.eigenvalues().reverse();
  const double tol = 1e-9 * std::max(desc(0), 0.0);
  int r = 0;
  while (r < desc.size() && desc(r) > tol) ++r;
  return desc.head(r);
}

std::vector<int> structured_vertices_dual(const SignedBipartiteIncidence& g, double eps,
                                          double delta) {
  if (eps <= 0 || delta <= 0) throw error("spectral: eps and delta must be positive");
  const int n = g.num_v();
  const int m = g.num_u();
  Eigen::MatrixXd lp = gram_left(g) / static_cast<double>(g.d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lp);
  if (solver.info() != Eigen::Success) throw error("spectral: eigendecomposition failed");
  const Eigen::VectorXd vals = solver.eigenvalues().reverse();
  const Eigen::MatrixXd vecs = solver.eigenvectors().rowwise().reverse();
  const double tol = 1e-9 * std::max(vals(0), 0.0);

  // Right-side eigenvector entries come from the left ones:
  // psi_i(u) = (b_u . chi_i) / sqrt(d * lambda_i).
  std::vector<int> bad;
  for (int i = 0; i < n; ++i) {
    if (vals(i) <= tol) break;
    const double gap = vals(i) - 1.0;
    if (gap * gap > eps) bad.push_back(i);
  }
  std::vector<int> out;
  for (int u = 0; u < m; ++u) {
    double mass = 0.0;
    for (int i : bad) {
      double dot = 0.0;
      for (const auto& [v, sg] : g.u_adj[u]) dot += sg * vecs(v, i);
      mass += dot * dot / (g.d * vals(i));
    }
    if (mass > delta) out.push_back(u);
  }
  return out;
}

}  // namespace detlim
