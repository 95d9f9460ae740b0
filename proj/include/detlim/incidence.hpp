#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace detlim {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Family {
  ust_complete,
  kalai,
  cube_skeleton,
  colorful,
  grassmannian,
  subset_incidence,
  custom,
};

const char* family_name(Family f);
Family family_from_name(const std::string& name);

struct Edge {
  int v;
  int u;
  int sign;  // +1 or -1
};

// Bipartite incidence structure with a +-1 sign per edge. Left part V has
// degree d, right part U has degree k+1. Immutable after construction;
// adjacency lists are rebuilt by the generators and the JSON loader.
struct SignedBipartiteIncidence {
  std::vector<std::string> v_labels;
  std::vector<std::string> u_labels;
  std::vector<Edge> edges;
  int d = 0;
  int k = 0;
  Family family = Family::custom;
  std::string params;   // generator parameters, human readable
  std::string warning;  // non-fatal generator diagnostics

  // adjacency: (neighbor index, sign) per vertex, in edge insertion order
  std::vector<std::vector<std::pair<int, int>>> v_adj;
  std::vector<std::vector<std::pair<int, int>>> u_adj;

  int num_v() const { return static_cast<int>(v_labels.size()); }
  int num_u() const { return static_cast<int>(u_labels.size()); }

  void rebuild_adjacency();
};

struct ValidationReport {
  bool simple = false;
  bool left_regular = false;
  bool right_regular = false;
  bool c4_free = false;
  bool counts_consistent = false;  // |U|(k+1) == |V| d
  int left_degree = -1;            // observed, -1 when irregular
  int right_degree = -1;
  std::vector<std::string> failures;

  bool ok() const {
    return simple && left_regular && right_regular && c4_free && counts_consistent;
  }
};

SignedBipartiteIncidence build_complete_graph_ust(int n_vertices);
SignedBipartiteIncidence build_kalai_complex(int n_vertices, int k);
SignedBipartiteIncidence build_hypercube_skeleton(int n_dim, int ell);
SignedBipartiteIncidence build_colorful_complex(int parts, int part_size, int ell);
SignedBipartiteIncidence build_grassmannian(int q, int n_dim, int ell);
SignedBipartiteIncidence build_subset_incidence(int n_ground, int l);

ValidationReport validate(const SignedBipartiteIncidence& g);

// Dense |V| x |U| matrix with entries in {-1, 0, +1}.
Eigen::MatrixXd signed_matrix(const SignedBipartiteIncidence& g);

}  // namespace detlim
