#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "detlim/rng.hpp"

namespace detlim {

// Finite rooted tree with even/odd parity by height and an AHU-style
// canonical code ("(" + sorted child codes + ")"); two trees are
// root-isomorphic iff their codes are equal. Immutable value type.
struct RootedBipTree {
  std::vector<int> parent;                 // parent[root] == -1
  std::vector<std::vector<int>> children;  // sorted by child subtree code
  std::vector<int> depth;
  int height = 0;
  std::string code;  // canonical code of the root

  static RootedBipTree from_parents(const std::vector<int>& parent);

  int size() const { return static_cast<int>(parent.size()); }
  int root() const;
};

const std::string& canonical_code(const RootedBipTree& t);

// Number of root-preserving automorphisms, exact (overflow-guarded).
std::uint64_t aut_size(const RootedBipTree& t);

// Same count in floating point, for mass ratios whose automorphism groups
// outgrow 64 bits.
double aut_size_real(const RootedBipTree& t);

// Even height and every odd-height vertex has degree exactly k+1.
bool is_valid(const RootedBipTree& t, int k);

struct TreeParts {
  std::vector<int> even;          // V(T)
  std::vector<int> odd;           // U(T)
  std::vector<int> interior_even; // I(T): even vertices of height < height(T)
};
TreeParts parts(const RootedBipTree& t);

// Number of matchings saturating K ∪ U(T); K holds vertex ids in V(T).
// Exact 64-bit, throws on overflow.
std::uint64_t matching_count(const RootedBipTree& t, const std::vector<int>& K);

// All valid trees of height exactly `radius` with at most `max_vertices`
// vertices, one per isomorphism class.
std::vector<RootedBipTree> enumerate_valid_trees(int k, int radius, int max_vertices,
                                                 std::size_t max_count = 1000000);

// Signed V(T) x U(T) incidence of the tree. Rows follow parts(t).even order,
// columns parts(t).odd order. Standalone trees default to all +1; edge_signs
// gives a sign per non-root vertex (its edge to the parent).
Eigen::MatrixXd tree_incidence(const RootedBipTree& t);
Eigen::MatrixXd tree_incidence(const RootedBipTree& t, const std::vector<int>& edge_signs);

// Vector phi over V(T) with phi^T D = 0, phi(v0) = 1 and minimal squared norm
// off K; the norm equals m(K,T)/(m(K,T) - m(K ∪ {v0},T)). Indexed by
// parts(t).even order.
Eigen::VectorXd transversal_vector(const RootedBipTree& t, const Eigen::MatrixXd& D,
                                   const std::vector<int>& K, int v0);
Eigen::VectorXd transversal_vector(const RootedBipTree& t, const std::vector<int>& K, int v0);

// Nonzero kernel vector of the K-rows of D (exists whenever m(K,T)=0).
Eigen::VectorXd dependent_vector(const RootedBipTree& t, const Eigen::MatrixXd& D,
                                 const std::vector<int>& K);
Eigen::VectorXd dependent_vector(const RootedBipTree& t, const std::vector<int>& K);

// Uniform transversal: the |U(T)|-subset of V(T) saturated by a matching,
// drawn via the determinantal measure of the tree incidence column space.
std::vector<int> uniform_transversal(const RootedBipTree& t, RandomStream& rng);

// Serialization: nested-parenthesis code plus a parent-array JSON form.
std::string tree_to_json(const RootedBipTree& t);
RootedBipTree tree_from_json(const std::string& text);

}  // namespace detlim
