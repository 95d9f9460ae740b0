#pragma once

#include <Eigen/Dense>
#include <vector>

#include "detlim/incidence.hpp"

namespace detlim {

// Eigendecomposition of the right-side operator B^T B / d. Eigenvalues are
// sorted descending; column i of `eigenvectors` matches eigenvalues[i].
// Immutable after decompose().
struct SpectralData {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  int rank = 0;
  int d = 0;
  int k = 0;
  double rank_tol = 0.0;  // absolute threshold used for the rank cut
};

// Orthonormal row vectors spanning a subspace of R^U.
struct Subspace {
  Eigen::MatrixXd basis;  // dim x m, orthonormal rows

  int dim() const { return static_cast<int>(basis.rows()); }
  int ambient() const { return static_cast<int>(basis.cols()); }
  Eigen::MatrixXd projection() const { return basis.transpose() * basis; }
};

SpectralData decompose(const SignedBipartiteIncidence& g, int max_right_vertices = 5000);

Subspace projection_subspace(const SpectralData& s);
Subspace near_one_subspace(const SpectralData& s, double eps);

// Right vertices carrying more than delta of squared eigenvector mass from
// eigenvalues with (lambda-1)^2 > eps. Sorted ascending.
std::vector<int> structured_vertices(const SpectralData& s, double eps, double delta);

// |Tr((L+ - I)^2) - kn/d|, computed directly from B B^T / d.
double trace_identity_gap(const SignedBipartiteIncidence& g);

// Same structured-vertex set computed through the left-side operator
// B B^T / d, which shares the positive spectrum; usable when |U| is far
// beyond the dense decomposition guard.
std::vector<int> structured_vertices_dual(const SignedBipartiteIncidence& g, double eps,
                                          double delta);

// Positive eigenvalues of B B^T / d, descending.
Eigen::VectorXd dual_positive_spectrum(const SignedBipartiteIncidence& g);

inline double default_eps(int d) { return 1.0 / std::sqrt(static_cast<double>(d)); }
inline double default_delta(int d) { return std::pow(static_cast<double>(d), -1.25); }

}  // namespace detlim
