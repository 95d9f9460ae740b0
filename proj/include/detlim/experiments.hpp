#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "detlim/dpp.hpp"
#include "detlim/incidence.hpp"
#include "detlim/limit_law.hpp"
#include "detlim/rooted_tree.hpp"

namespace detlim {

// A ball of G[T] with the graph ids behind each tree vertex (v-side ids at
// even depth, u-side ids at odd depth).
struct EmbeddedBall {
  RootedBipTree shape;
  std::vector<int> graph_id;
};

// BFS ball of radius r around o inside G[T]; nullopt when the ball contains a
// cycle.
std::optional<RootedBipTree> extract_ball(const SignedBipartiteIncidence& g, const SampleSet& t,
                                          int o, int radius);
std::optional<EmbeddedBall> extract_ball_embedded(const SignedBipartiteIncidence& g,
                                                  const SampleSet& t, int o, int radius);

// N independent samples, R independent uniform roots each; non-tree and
// height-deficient balls land in the residual bucket.
BallDistribution empirical_ball_distribution(const SignedBipartiteIncidence& g, int radius,
                                             long long num_samples, int roots_per_sample,
                                             RandomStream& rng, int threads = 1);

// Exact mixture over enumerate_all and all roots; feasible at toy scale.
BallDistribution exact_ball_distribution(const SignedBipartiteIncidence& g, const Subspace& h,
                                         int radius);

double tv_distance(const BallDistribution& a, const BallDistribution& b);

struct ConvergenceRow {
  int size = 0;
  long long samples = 0;
  int roots_per_sample = 0;
  long long root_samples = 0;
  double tv_to_limit = 0.0;
  double non_tree_fraction = 0.0;
  double structured_hit_fraction = 0.0;
  BallDistribution distribution;
};

struct ConvergenceReport {
  std::string family;
  std::string params;
  int k = 0;
  int radius = 0;
  std::uint64_t seed = 0;
  std::vector<ConvergenceRow> rows;  // ordered by size
};

// Builds the family member of given size (ust: n, kalai: n, grassmannian: n
// with q/ell from params, cube: n with ell, colorful: part_size with
// parts/ell, subset: n with l).
SignedBipartiteIncidence build_family_member(Family family, int size,
                                             const std::string& params);

ConvergenceReport convergence_experiment(Family family, const std::string& params,
                                         const std::vector<int>& sizes, int k, int radius,
                                         long long num_samples, int roots_per_sample,
                                         std::uint64_t seed, int threads = 1);

// One Y/|V| per sample: the fraction of roots whose ball is isomorphic to the
// given valid shape.
std::vector<double> quenched_fractions(const SignedBipartiteIncidence& g,
                                       const RootedBipTree& shape, int radius,
                                       long long num_samples, RandomStream& rng, int threads = 1);

// |det(L- restricted to U(t)) - d^{-|U(t)|} m(0,t)| for an embedded valid
// tree whose odd vertices have all of their graph neighbors inside the tree.
double tree_determinant_identity_gap(const SignedBipartiteIncidence& g, const EmbeddedBall& t);

// Fraction of embedded balls whose odd vertices touch the structured set.
double structured_hit_fraction(const std::vector<EmbeddedBall>& balls,
                               const std::vector<int>& structured);

}  // namespace detlim
