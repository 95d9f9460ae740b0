#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "detlim/incidence.hpp"
#include "detlim/rng.hpp"
#include "detlim/spectral.hpp"

namespace detlim {

struct SampleSet {
  std::vector<int> members;  // sorted u-indices
  int source_dim = 0;
};

// Exact sample of the projection determinantal measure of h: coordinates are
// visited in index order, each kept with the conditional diagonal kernel
// probability, and the orthonormal basis is updated per decision.
SampleSet sample(const Subspace& h, RandomStream& rng);

// det of the principal kernel submatrix on t; requires |t| == dim(h).
double mass(const Subspace& h, const std::vector<int>& t);

// Inclusion probability det(P restricted to e); e may be any subset.
double marginal(const Subspace& h, const std::vector<int>& e);

// Probability that no element of e is sampled.
double avoidance(const Subspace& h, const std::vector<int>& e);

// Subspace of the measure conditioned on include ⊆ T and exclude ∩ T = ∅.
Subspace condition(const Subspace& h, const std::vector<int>& include,
                   const std::vector<int>& exclude);

// Every dim(h)-subset with positive mass; masses sum to 1 when h is a genuine
// projection subspace. Guarded by the number of candidate subsets.
std::vector<std::pair<SampleSet, double>> enumerate_all(const Subspace& h,
                                                        double max_subsets = 1e6);

// Lower bound sum_ij (M^-1)_ij on the marginal of u from vectors xi in h with
// |xi(u)| = 1; M is their Gram matrix after orienting xi(u) = +1.
double nw_lower_bound(const Subspace& h, int u, const std::vector<Eigen::VectorXd>& xis);

// Closed-form relaxation (1 - gamma*k/(1-gamma*k)) * sum 1/|xi|^2 under the
// pairwise near-orthogonality hypothesis.
double nw_corollary_bound(const Subspace& h, int u, const std::vector<Eigen::VectorXd>& xis,
                          double gamma);

// Exact sampler working in the left (feature) space of the graph's kernel
// factor. Per draw cost is O(r n^2 + r m k) instead of the O(m^2 r) basis
// walk, which makes desk-scale experiments on graphs with huge |U| feasible.
// Agrees in distribution with sample() on the row-space subspace.
class FactorSampler {
 public:
  explicit FactorSampler(const SignedBipartiteIncidence& g);

  int rank() const { return rank_; }
  double marginal(int u) const { return base_norms_(u); }
  SampleSet draw(RandomStream& rng) const;

 private:
  Eigen::VectorXd feature(int u) const;  // root_ * b_u

  int n_ = 0, m_ = 0, rank_ = 0;
  Eigen::MatrixXd root_;        // (B B^T)^{+1/2}, n x n symmetric
  Eigen::VectorXd base_norms_;  // P(u,u)
  // flat column storage of B: entries [col_ptr_[u], col_ptr_[u+1])
  std::vector<int> col_ptr_;
  std::vector<int> col_v_;
  std::vector<double> col_sign_;
};

}  // namespace detlim
