#pragma once

#include <map>
#include <string>

#include "detlim/rng.hpp"
#include "detlim/rooted_tree.hpp"

namespace detlim {

// Probability mass over canonical tree codes plus an explicit residual bucket
// (enumeration tail, and non-tree / short balls on the empirical side).
struct BallDistribution {
  std::map<std::string, double> entries;
  double residual = 0.0;
  int radius = 0;
  int k = 0;

  double total() const;
};

// exp(-k|I|) (k!)^|U| m(I,T) / |Aut(T,o)| for a valid tree.
double tk_ball_mass(const RootedBipTree& t, int k);

// Exact ball law of the limit tree at even radius, truncated at max_vertices;
// the un-enumerated tail goes to residual.
BallDistribution tk_distribution(int k, int radius, int max_vertices);

// Ball of the 4-type branching process (root even; odd vertices have k
// children; even vertices attach Poisson(k) extra branches, plus the spine
// child when on it), truncated at even depth `radius`.
RootedBipTree sample_tk_ball(int k, int radius, RandomStream& rng);

// Finite-d one-out approximation: every even particle scatters Binomial(k,
// 1/(d+1)) draw marks over its d neighbor slots; marked neighbors join with
// the matching multi-type progeny rules.
RootedBipTree sample_one_out_ball(int k, int d, int radius, RandomStream& rng);

// Enumeration budget giving the residuals the experiment tables are run at.
int default_tree_budget(int k, int radius);

}  // namespace detlim
