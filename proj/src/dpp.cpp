#include "detlim/dpp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace detlim {

namespace {

constexpr double kProbSlack = 1e-8;
constexpr double kFeasibilityTol = 1e-12;

// Householder rotation on the basis rows so that row `pivot` carries the whole
// coordinate vector c = basis.col(u); afterwards all other rows vanish at u.
void rotate_coordinate_onto_row(Eigen::MatrixXd& basis, int u) {
  const int dim = static_cast<int>(basis.rows());
  Eigen::VectorXd c = basis.col(u);
  const double norm = c.norm();
  if (norm == 0.0) return;
  Eigen::VectorXd v = c;
  v(0) += (c(0) >= 0 ? norm : -norm);
  const double vsq = v.squaredNorm();
  if (vsq < 1e-300) return;
  // basis <- (I - 2 v v^T / |v|^2) basis
  Eigen::RowVectorXd w = v.transpose() * basis;
  basis.noalias() -= v * (2.0 / vsq) * w;
  // force exact zeros below the pivot at coordinate u
  basis.col(u).tail(dim - 1).setZero();
}

void drop_row(Eigen::MatrixXd& basis, int row) {
  const int dim = static_cast<int>(basis.rows());
  for (int i = row; i + 1 < dim; ++i) basis.row(i) = basis.row(i + 1);
  basis.conservativeResize(dim - 1, Eigen::NoChange);
}

// Thin re-orthonormalization of the rows, dropping directions below tol.
Eigen::MatrixXd reorthonormalize(const Eigen::MatrixXd& basis, double rel_tol = 1e-9) {
  if (basis.rows() == 0) return basis;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(basis, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cut = rel_tol * std::max(sv.size() > 0 ? sv(0) : 0.0, 1e-300);
  int keep = 0;
  while (keep < sv.size() && sv(keep) > cut) ++keep;
  return svd.matrixV().leftCols(keep).transpose();
}

Eigen::MatrixXd gram_of_columns(const Subspace& h, const std::vector<int>& idx) {
  Eigen::MatrixXd c(h.dim(), static_cast<int>(idx.size()));
  for (size_t j = 0; j < idx.size(); ++j) {
    if (idx[j] < 0 || idx[j] >= h.ambient()) throw error("dpp: coordinate index out of range");
    c.col(static_cast<int>(j)) = h.basis.col(idx[j]);
  }
  return c.transpose() * c;
}

}  // namespace

SampleSet sample(const Subspace& h, RandomStream& rng) {
  if (h.dim() < 1) throw error("dpp: sample requires dim >= 1");
  const int m = h.ambient();
  Eigen::MatrixXd basis = h.basis;
  SampleSet out;
  out.source_dim = h.dim();
  int steps_since_qr = 0;

  for (int u = 0; u < m; ++u) {
    if (basis.rows() == 0) break;
    double p = basis.col(u).squaredNorm();
    if (p < -kProbSlack || p > 1.0 + kProbSlack)
      throw error("dpp: conditional probability " + std::to_string(p) + " out of range");
    p = std::clamp(p, 0.0, 1.0);

    if (rng.uniform() < p) {
      out.members.push_back(u);
      rotate_coordinate_onto_row(basis, u);
      drop_row(basis, 0);
    } else {
      if (p > 1.0 - 1e-12)
        throw error("dpp: excluded a coordinate of conditional probability ~1");
      rotate_coordinate_onto_row(basis, u);
      // remove the u-component of the pivot row and renormalize it
      basis(0, u) = 0.0;
      const double rest = basis.row(0).squaredNorm();
      if (rest < 1e-14) throw error("dpp: basis degenerated during exclusion");
      basis.row(0) /= std::sqrt(rest);
    }

    if (++steps_since_qr == 64) {
      basis = reorthonormalize(basis);
      // re-zero the processed prefix against drift
      if (u + 1 > 0 && basis.rows() > 0) basis.leftCols(u + 1).setZero();
      steps_since_qr = 0;
    }
  }
  if (static_cast<int>(out.members.size()) != out.source_dim)
    throw error("dpp: sample size " + std::to_string(out.members.size()) +
                " does not match subspace dimension");
  return out;
}

double mass(const Subspace& h, const std::vector<int>& t) {
  if (static_cast<int>(t.size()) != h.dim())
    throw error("dpp: mass requires |t| == dim(h)");
  if (t.empty()) return 1.0;
  Eigen::MatrixXd c(h.dim(), static_cast<int>(t.size()));
  for (size_t j = 0; j < t.size(); ++j) {
    if (t[j] < 0 || t[j] >= h.ambient()) throw error("dpp: coordinate index out of range");
    c.col(static_cast<int>(j)) = h.basis.col(t[j]);
  }
  const double det = c.determinant();
  return det * det;
}

double marginal(const Subspace& h, const std::vector<int>& e) {
  if (e.empty()) return 1.0;
  return gram_of_columns(h, e).determinant();
}

double avoidance(const Subspace& h, const std::vector<int>& e) {
  if (e.empty()) return 1.0;
  Eigen::MatrixXd gram = gram_of_columns(h, e);
  return (Eigen::MatrixXd::Identity(gram.rows(), gram.cols()) - gram).determinant();
}

Subspace condition(const Subspace& h, const std::vector<int>& include,
                   const std::vector<int>& exclude) {
  for (int a : include)
    for (int b : exclude)
      if (a == b) throw error("dpp: include and exclude sets intersect");
  if (marginal(h, include) <= kFeasibilityTol)
    throw error("dpp: conditioning on an inclusion event of probability ~0");
  if (avoidance(h, exclude) <= kFeasibilityTol)
    throw error("dpp: conditioning on an exclusion event of probability ~0");

  // basis of H ∩ [include]^perp: consume one direction per included coordinate
  Eigen::MatrixXd basis = h.basis;
  for (int a : include) {
    if (basis.rows() == 0) throw error("dpp: conditioning exhausted the subspace");
    rotate_coordinate_onto_row(basis, a);
    drop_row(basis, 0);
  }
  // append the coordinate axes of the included set
  const int reduced = static_cast<int>(basis.rows());
  basis.conservativeResize(reduced + static_cast<int>(include.size()), Eigen::NoChange);
  for (size_t j = 0; j < include.size(); ++j) {
    basis.row(reduced + static_cast<int>(j)).setZero();
    basis(reduced + static_cast<int>(j), include[j]) = 1.0;
  }
  // project away the excluded coordinates
  for (int b : exclude) basis.col(b).setZero();

  Subspace out;
  out.basis = reorthonormalize(basis);
  return out;
}

std::vector<std::pair<SampleSet, double>> enumerate_all(const Subspace& h, double max_subsets) {
  const int m = h.ambient();
  const int r = h.dim();
  double count = 1.0;
  for (int i = 0; i < r; ++i) count *= static_cast<double>(m - i) / (i + 1);
  if (count > max_subsets)
    throw error("dpp: C(m, dim) ~ " + std::to_string(count) + " exceeds the enumeration guard");

  std::vector<std::pair<SampleSet, double>> out;
  if (r == 0) return out;
  std::vector<int> idx(r);
  for (int i = 0; i < r; ++i) idx[i] = i;
  for (;;) {
    const double p = mass(h, idx);
    if (p > 1e-12) out.push_back({SampleSet{idx, r}, p});
    int i = r - 1;
    while (i >= 0 && idx[i] == m - (r - i)) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

double nw_lower_bound(const Subspace& h, int u, const std::vector<Eigen::VectorXd>& xis) {
  if (xis.empty()) throw error("dpp: nw bound needs at least one vector");
  const int kc = static_cast<int>(xis.size());
  Eigen::MatrixXd q(kc, h.ambient());
  for (int i = 0; i < kc; ++i) {
    const Eigen::VectorXd& xi = xis[i];
    if (xi.size() != h.ambient()) throw error("dpp: nw vector has wrong length");
    const double resid = (xi.transpose() - xi.transpose() * h.basis.transpose() * h.basis).norm();
    if (resid > 1e-8 * std::max(1.0, xi.norm()))
      throw error("dpp: nw vector " + std::to_string(i) + " is not in the subspace (residual " +
                  std::to_string(resid) + ")");
    if (std::abs(std::abs(xi(u)) - 1.0) > 1e-8)
      throw error("dpp: nw vector " + std::to_string(i) + " must have |value| 1 at u");
    q.row(i) = (xi(u) >= 0 ? 1.0 : -1.0) * xi.transpose();
  }
  Eigen::MatrixXd gram = q * q.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo <= 0 || hi / lo > 1e10)
    throw error("dpp: nw Gram matrix is singular or too ill conditioned");
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(kc);
  return ones.dot(gram.ldlt().solve(ones));
}

double nw_corollary_bound(const Subspace& h, int u, const std::vector<Eigen::VectorXd>& xis,
                          double gamma) {
  const int kc = static_cast<int>(xis.size());
  if (kc == 0) throw error("dpp: nw bound needs at least one vector");
  if (!(gamma > 0.0 && gamma < 1.0 / kc))
    throw error("dpp: gamma must lie in (0, 1/k)");
  for (int i = 0; i < kc; ++i) {
    if (std::abs(std::abs(xis[i](u)) - 1.0) > 1e-8)
      throw error("dpp: nw vector must have |value| 1 at u");
    const double resid =
        (xis[i].transpose() - xis[i].transpose() * h.basis.transpose() * h.basis).norm();
    if (resid > 1e-8 * std::max(1.0, xis[i].norm()))
      throw error("dpp: nw vector is not in the subspace");
  }
  double sum = 0.0;
  for (int i = 0; i < kc; ++i) {
    for (int j = i + 1; j < kc; ++j) {
      const double bound = gamma * std::min(xis[i].squaredNorm(), xis[j].squaredNorm());
      if (std::abs(xis[i].dot(xis[j])) > bound + 1e-12)
        throw error("dpp: pairwise inner product violates the gamma hypothesis");
    }
    sum += 1.0 / xis[i].squaredNorm();
  }
  const double gk = gamma * kc;
  return (1.0 - gk / (1.0 - gk)) * sum;
}

FactorSampler::FactorSampler(const SignedBipartiteIncidence& g) {
  n_ = g.num_v();
  m_ = g.num_u();
  col_ptr_.assign(m_ + 1, 0);
  for (int u = 0; u < m_; ++u)
    col_ptr_[u + 1] = col_ptr_[u] + static_cast<int>(g.u_adj[u].size());
  col_v_.resize(col_ptr_[m_]);
  col_sign_.resize(col_ptr_[m_]);
  for (int u = 0; u < m_; ++u) {
    int e = col_ptr_[u];
    for (const auto& [v, sg] : g.u_adj[u]) {
      col_v_[e] = v;
      col_sign_[e] = sg;
      ++e;
    }
  }

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (int u = 0; u < m_; ++u)
    for (const auto& [v1, s1] : g.u_adj[u])
      for (const auto& [v2, s2] : g.u_adj[u]) a(v1, v2) += s1 * s2;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw error("dpp: factor eigendecomposition failed");
  const Eigen::VectorXd& vals = solver.eigenvalues();
  const Eigen::MatrixXd& vecs = solver.eigenvectors();
  const double tol = 1e-9 * std::max(vals(n_ - 1), 0.0);

  Eigen::VectorXd inv_sqrt = Eigen::VectorXd::Zero(n_);
  rank_ = 0;
  for (int i = 0; i < n_; ++i)
    if (vals(i) > tol) {
      inv_sqrt(i) = 1.0 / std::sqrt(vals(i));
      ++rank_;
    }
  root_.noalias() = vecs * inv_sqrt.asDiagonal() * vecs.transpose();

  base_norms_.resize(m_);
  for (int u = 0; u < m_; ++u) base_norms_(u) = feature(u).squaredNorm();
}

Eigen::VectorXd FactorSampler::feature(int u) const {
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(n_);
  for (int e = col_ptr_[u]; e < col_ptr_[u + 1]; ++e) phi += col_sign_[e] * root_.col(col_v_[e]);
  return phi;
}

SampleSet FactorSampler::draw(RandomStream& rng) const {
  Eigen::VectorXd q = base_norms_;
  double total = q.sum();
  std::vector<char> chosen(m_, 0);
  Eigen::MatrixXd dirs(n_, rank_);      // orthonormal chosen directions
  Eigen::MatrixXd lifted(n_, rank_);    // root_ * dirs, for weight updates
  SampleSet out;
  out.source_dim = rank_;
  out.members.reserve(rank_);

  for (int t = 0; t < rank_; ++t) {
    // categorical selection proportional to the residual kernel diagonal
    const double x = rng.uniform() * total;
    double acc = 0.0;
    int pick = -1;
    for (int u = 0; u < m_; ++u) {
      if (chosen[u]) continue;
      acc += q(u);
      if (acc > x) {
        pick = u;
        break;
      }
    }
    if (pick < 0) {
      for (int u = m_ - 1; u >= 0; --u)
        if (!chosen[u] && q(u) > 0) {
          pick = u;
          break;
        }
    }
    if (pick < 0) throw error("dpp: factor sampler ran out of weight");

    Eigen::VectorXd psi = feature(pick);
    if (t > 0) {
      // orthogonalize twice against the chosen directions
      auto prev = dirs.leftCols(t);
      psi.noalias() -= prev * (prev.transpose() * psi);
      psi.noalias() -= prev * (prev.transpose() * psi);
    }
    const double nrm2 = psi.squaredNorm();
    if (nrm2 < 1e-18) throw error("dpp: factor sampler hit a degenerate direction");
    psi /= std::sqrt(nrm2);
    dirs.col(t) = psi;
    lifted.col(t).noalias() = root_ * psi;

    chosen[pick] = 1;
    q(pick) = 0.0;
    out.members.push_back(pick);

    // q_u -= (psi . phi_u)^2, via the lifted direction and the sparse columns;
    // chosen coordinates stay pinned at 0 by the clamp
    double new_total = 0.0;
    const double* w = lifted.col(t).data();
    double* qd = q.data();
    for (int u = 0; u < m_; ++u) {
      double s = 0.0;
      for (int e = col_ptr_[u]; e < col_ptr_[u + 1]; ++e) s += col_sign_[e] * w[col_v_[e]];
      double nq = qd[u] - s * s;
      if (nq < 0.0) nq = 0.0;
      qd[u] = nq;
      new_total += nq;
    }
    total = new_total;

    const double expected = static_cast<double>(rank_ - t - 1);
    if (std::abs(total - expected) > 1e-9 * rank_ + 1e-6 * std::max(expected, 1.0)) {
      // refresh against drift: q_u = |phi_u|^2 - sum_i (w_i . b_u)^2
      new_total = 0.0;
      for (int u = 0; u < m_; ++u) {
        if (chosen[u]) {
          q(u) = 0.0;
          continue;
        }
        double drop = 0.0;
        for (int i = 0; i <= t; ++i) {
          double s = 0.0;
          for (int e = col_ptr_[u]; e < col_ptr_[u + 1]; ++e)
            s += col_sign_[e] * lifted(col_v_[e], i);
          drop += s * s;
        }
        double nq = base_norms_(u) - drop;
        if (nq < 0.0) nq = 0.0;
        q(u) = nq;
        new_total += nq;
      }
      total = new_total;
      if (std::abs(total - expected) > 1e-3 * std::max(expected, 1.0) + 1e-6)
        throw error("dpp: factor sampler weights drifted beyond recovery");
    }
  }
  std::sort(out.members.begin(), out.members.end());
  return out;
}

}  // namespace detlim
