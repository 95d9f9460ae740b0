#include "detlim/limit_law.hpp"

#include <cmath>

#include "detlim/incidence.hpp"

namespace detlim {

double BallDistribution::total() const {
  double s = residual;
  for (const auto& [code, p] : entries) s += p;
  return s;
}

double tk_ball_mass(const RootedBipTree& t, int k) {
  if (!is_valid(t, k)) throw error("limit: tk_ball_mass requires a valid tree");
  const TreeParts p = parts(t);
  const std::uint64_t m = matching_count(t, p.interior_even);
  const long double aut = aut_size_real(t);
  long double mass = std::exp(static_cast<long double>(-k) *
                              static_cast<long double>(p.interior_even.size()));
  long double kfact = 1.0L;
  for (int i = 2; i <= k; ++i) kfact *= i;
  for (size_t i = 0; i < p.odd.size(); ++i) mass *= kfact;
  mass *= static_cast<long double>(m);
  mass /= aut;
  return static_cast<double>(mass);
}

BallDistribution tk_distribution(int k, int radius, int max_vertices) {
  BallDistribution dist;
  dist.k = k;
  dist.radius = radius;
  double sum = 0.0;
  for (const RootedBipTree& t : enumerate_valid_trees(k, radius, max_vertices)) {
    const double p = tk_ball_mass(t, k);
    dist.entries[t.code] = p;
    sum += p;
  }
  dist.residual = 1.0 - sum;
  if (dist.residual < -1e-8) throw error("limit: enumerated masses exceed 1");
  if (dist.residual < 0.0) dist.residual = 0.0;
  return dist;
}

namespace {

constexpr std::size_t kSizeGuard = 1000000;

enum class TkType { a_even, b_even, a_odd, b_odd };

}  // namespace

RootedBipTree sample_tk_ball(int k, int radius, RandomStream& rng) {
  if (radius < 0 || radius % 2 != 0) throw error("limit: radius must be even and >= 0");
  std::vector<int> parent{-1};
  std::vector<TkType> type{TkType::a_even};
  std::vector<int> depth{0};
  for (std::size_t i = 0; i < parent.size(); ++i) {
    if (parent.size() > kSizeGuard) throw error("limit: sampled ball exceeded the size guard");
    const int dep = depth[i];
    auto add = [&](TkType tt) {
      parent.push_back(static_cast<int>(i));
      type.push_back(tt);
      depth.push_back(dep + 1);
    };
    switch (type[i]) {
      case TkType::a_even: {
        if (dep >= radius) break;
        add(TkType::a_odd);
        const int extra = rng.poisson(k);
        for (int j = 0; j < extra; ++j) add(TkType::b_odd);
        break;
      }
      case TkType::b_even: {
        if (dep >= radius) break;
        const int extra = rng.poisson(k);
        for (int j = 0; j < extra; ++j) add(TkType::b_odd);
        break;
      }
      case TkType::a_odd: {
        for (int j = 0; j < k; ++j) add(TkType::a_even);
        break;
      }
      case TkType::b_odd: {
        for (int j = 0; j < k - 1; ++j) add(TkType::a_even);
        add(TkType::b_even);
        break;
      }
    }
  }
  return RootedBipTree::from_parents(parent);
}

namespace {

// Progeny counts of an even particle in the one-out process: the number of
// neighbor slots whose Binomial(k, 1/(d+1)) mark count equals j, for
// j = 1..k, over `slots` independent slots. Sampled as sequential
// conditional binomials of the multinomial occupancy law.
void draw_mark_counts(int k, int d, long long slots, RandomStream& rng, std::vector<long long>& out) {
  const double p = 1.0 / (d + 1);
  out.assign(k + 1, 0);
  // q_j = C(k,j) p^j (1-p)^(k-j)
  std::vector<double> q(k + 1);
  double comb = 1.0;
  for (int j = 0; j <= k; ++j) {
    q[j] = comb * std::pow(p, j) * std::pow(1.0 - p, k - j);
    comb = comb * (k - j) / (j + 1);
  }
  long long remaining = slots;
  double mass_left = 1.0;
  for (int j = 1; j <= k && remaining > 0; ++j) {
    const double cond = std::min(1.0, q[j] / mass_left);
    out[j] = rng.binomial(remaining, cond);
    remaining -= out[j];
    mass_left -= q[j];
    if (mass_left <= 0) break;
  }
}

}  // namespace

RootedBipTree sample_one_out_ball(int k, int d, int radius, RandomStream& rng) {
  if (radius < 0 || radius % 2 != 0) throw error("limit: radius must be even and >= 0");
  if (d < k + 1) throw error("limit: one-out model needs d >= k+1");

  // types: -1 = a-even, -2 = b-even, j >= 0 = odd drawn by j children
  std::vector<int> parent{-1};
  std::vector<int> type{-1};
  std::vector<int> depth{0};
  std::vector<long long> counts;
  for (std::size_t i = 0; i < parent.size(); ++i) {
    if (parent.size() > kSizeGuard) throw error("limit: sampled ball exceeded the size guard");
    const int dep = depth[i];
    auto add = [&](int tt) {
      parent.push_back(static_cast<int>(i));
      type.push_back(tt);
      depth.push_back(dep + 1);
    };
    if (type[i] == -1) {  // a-even: drew one child; that child is X1-odd
      if (dep >= radius) continue;
      const int x1 = static_cast<int>(rng.binomial(k, 1.0 / (d + 1)));
      add(x1);
      draw_mark_counts(k, d, d - 1, rng, counts);
      for (int j = 1; j <= k; ++j)
        for (long long c = 0; c < counts[j]; ++c) add(j);
    } else if (type[i] == -2) {  // b-even: drew its parent
      if (dep >= radius) continue;
      draw_mark_counts(k, d, d, rng, counts);
      for (int j = 1; j <= k; ++j)
        for (long long c = 0; c < counts[j]; ++c) add(j);
    } else {  // j-odd: j children drew it, the rest draw downward
      const int j = type[i];
      for (int c = 0; c < j; ++c) add(-2);
      for (int c = 0; c < k - j; ++c) add(-1);
    }
  }
  return RootedBipTree::from_parents(parent);
}

int default_tree_budget(int k, int radius) {
  if (radius <= 2) return k == 1 ? 41 : 37;
  if (k == 1 && radius == 4) return 57;
  return 41;
}

}  // namespace detlim
