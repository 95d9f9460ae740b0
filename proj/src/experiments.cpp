#include "detlim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "detlim/spectral.hpp"

namespace detlim {

namespace {

std::map<std::string, long long> parse_params(const std::string& params) {
  std::map<std::string, long long> out;
  std::stringstream ss(params);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw error("experiments: malformed parameter '" + item + "'");
    out[item.substr(0, eq)] = std::stoll(item.substr(eq + 1));
  }
  return out;
}

long long param_or(const std::map<std::string, long long>& p, const std::string& key,
                   long long fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

}  // namespace

std::optional<EmbeddedBall> extract_ball_embedded(const SignedBipartiteIncidence& g,
                                                  const SampleSet& t, int o, int radius) {
  if (o < 0 || o >= g.num_v()) throw error("experiments: root index out of range");
  std::vector<char> in_sample(g.num_u(), 0);
  for (int u : t.members) in_sample[u] = 1;

  std::vector<int> v_seen(g.num_v(), -1), u_seen(g.num_u(), -1);
  EmbeddedBall ball;
  std::vector<int> parent;
  std::vector<int> depth;
  auto push = [&](int gid, int par, int dep) {
    ball.graph_id.push_back(gid);
    parent.push_back(par);
    depth.push_back(dep);
    return static_cast<int>(parent.size()) - 1;
  };
  v_seen[o] = push(o, -1, 0);

  for (std::size_t head = 0; head < parent.size(); ++head) {
    const int dep = depth[head];
    if (dep >= radius) continue;
    const int gid = ball.graph_id[head];
    if (dep % 2 == 0) {
      for (const auto& [u, sg] : g.v_adj[gid]) {
        if (!in_sample[u]) continue;
        if (u_seen[u] >= 0) {
          if (u_seen[u] != parent[head] || parent[head] < 0) return std::nullopt;  // cycle
          continue;
        }
        u_seen[u] = push(u, static_cast<int>(head), dep + 1);
      }
    } else {
      for (const auto& [v, sg] : g.u_adj[gid]) {
        if (v_seen[v] >= 0) {
          if (v_seen[v] != parent[head]) return std::nullopt;  // cycle
          continue;
        }
        v_seen[v] = push(v, static_cast<int>(head), dep + 1);
      }
    }
  }
  ball.shape = RootedBipTree::from_parents(parent);
  // canonicalization reorders children only; vertex ids stay aligned
  return ball;
}

std::optional<RootedBipTree> extract_ball(const SignedBipartiteIncidence& g, const SampleSet& t,
                                          int o, int radius) {
  auto ball = extract_ball_embedded(g, t, o, radius);
  if (!ball) return std::nullopt;
  return std::move(ball->shape);
}

namespace {

struct BucketCounts {
  std::map<std::string, std::uint64_t> codes;
  std::uint64_t residual = 0;   // non-tree + height-deficient
  std::uint64_t non_tree = 0;
  std::uint64_t structured_hits = 0;
  std::uint64_t total = 0;

  void merge(const BucketCounts& o) {
    for (const auto& [c, n] : o.codes) codes[c] += n;
    residual += o.residual;
    non_tree += o.non_tree;
    structured_hits += o.structured_hits;
    total += o.total;
  }
};

// Draw `num_samples` sets with per-draw substreams and bucket R root balls
// each; deterministic for a given seed regardless of the thread count.
BucketCounts run_draws(const SignedBipartiteIncidence& g, const FactorSampler& sampler,
                       int radius, long long num_samples, int roots_per_sample,
                       std::uint64_t seed, int threads,
                       const std::vector<int>* structured) {
  threads = std::max(1, threads);
  std::vector<BucketCounts> partial(num_samples > 0 ? static_cast<std::size_t>(num_samples) : 0);
  std::unordered_set<int> structured_set;
  if (structured) structured_set.insert(structured->begin(), structured->end());

  std::atomic<long long> next{0};
  auto worker = [&]() {
    for (;;) {
      const long long i = next.fetch_add(1);
      if (i >= num_samples) break;
      RandomStream stream = RandomStream::substream(seed, static_cast<std::uint64_t>(i));
      const SampleSet s = sampler.draw(stream);
      BucketCounts& c = partial[static_cast<std::size_t>(i)];
      for (int r = 0; r < roots_per_sample; ++r) {
        const int root = static_cast<int>(stream.below(static_cast<std::uint64_t>(g.num_v())));
        auto ball = extract_ball_embedded(g, s, root, radius);
        ++c.total;
        if (!ball) {
          ++c.residual;
          ++c.non_tree;
          continue;
        }
        if (ball->shape.height < radius) {
          ++c.residual;
          continue;
        }
        ++c.codes[ball->shape.code];
        if (structured) {
          bool hit = false;
          for (int i2 = 0; i2 < ball->shape.size() && !hit; ++i2)
            if (ball->shape.depth[i2] % 2 == 1 && structured_set.count(ball->graph_id[i2])) hit = true;
          if (hit) ++c.structured_hits;
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < threads; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  BucketCounts out;
  for (const auto& c : partial) out.merge(c);
  return out;
}

BallDistribution counts_to_distribution(const BucketCounts& c, int radius, int k) {
  BallDistribution dist;
  dist.radius = radius;
  dist.k = k;
  const double total = static_cast<double>(c.total);
  for (const auto& [code, n] : c.codes) dist.entries[code] = static_cast<double>(n) / total;
  dist.residual = static_cast<double>(c.residual) / total;
  return dist;
}

}  // namespace

BallDistribution empirical_ball_distribution(const SignedBipartiteIncidence& g, int radius,
                                             long long num_samples, int roots_per_sample,
                                             RandomStream& rng, int threads) {
  if (num_samples < 1 || roots_per_sample < 1)
    throw error("experiments: need at least one sample and one root");
  const FactorSampler sampler(g);
  const std::uint64_t seed = rng.next_u64();
  const BucketCounts counts =
      run_draws(g, sampler, radius, num_samples, roots_per_sample, seed, threads, nullptr);
  return counts_to_distribution(counts, radius, g.k);
}

BallDistribution exact_ball_distribution(const SignedBipartiteIncidence& g, const Subspace& h,
                                         int radius) {
  BallDistribution dist;
  dist.radius = radius;
  dist.k = g.k;
  const int n = g.num_v();
  for (const auto& [set, p] : enumerate_all(h)) {
    for (int root = 0; root < n; ++root) {
      const double w = p / n;
      auto ball = extract_ball(g, set, root, radius);
      if (!ball || ball->height < radius)
        dist.residual += w;
      else
        dist.entries[ball->code] += w;
    }
  }
  return dist;
}

double tv_distance(const BallDistribution& a, const BallDistribution& b) {
  if (a.radius != b.radius) throw error("experiments: tv over different radii");
  double s = std::abs(a.residual - b.residual);
  for (const auto& [code, p] : a.entries) {
    const auto it = b.entries.find(code);
    s += std::abs(p - (it == b.entries.end() ? 0.0 : it->second));
  }
  for (const auto& [code, p] : b.entries)
    if (!a.entries.count(code)) s += p;
  return 0.5 * s;
}

SignedBipartiteIncidence build_family_member(Family family, int size, const std::string& params) {
  const auto p = parse_params(params);
  switch (family) {
    case Family::ust_complete:
      return build_complete_graph_ust(size);
    case Family::kalai:
      return build_kalai_complex(size, static_cast<int>(param_or(p, "k", 1)));
    case Family::cube_skeleton:
      return build_hypercube_skeleton(size, static_cast<int>(param_or(p, "ell", 1)));
    case Family::colorful:
      return build_colorful_complex(static_cast<int>(param_or(p, "parts", 3)), size,
                                    static_cast<int>(param_or(p, "ell", 1)));
    case Family::grassmannian:
      return build_grassmannian(static_cast<int>(param_or(p, "q", 2)), size,
                                static_cast<int>(param_or(p, "ell", 1)));
    case Family::subset_incidence:
      return build_subset_incidence(size, static_cast<int>(param_or(p, "l", 1)));
    case Family::custom:
      break;
  }
  throw error("experiments: family has no size-indexed builder");
}

ConvergenceReport convergence_experiment(Family family, const std::string& params,
                                         const std::vector<int>& sizes, int k, int radius,
                                         long long num_samples, int roots_per_sample,
                                         std::uint64_t seed, int threads) {
  ConvergenceReport report;
  report.family = family_name(family);
  report.params = params;
  report.k = k;
  report.radius = radius;
  report.seed = seed;

  const BallDistribution limit = tk_distribution(k, radius, default_tree_budget(k, radius));
  std::vector<int> ordered = sizes;
  std::sort(ordered.begin(), ordered.end());

  for (std::size_t si = 0; si < ordered.size(); ++si) {
    const int size = ordered[si];
    const SignedBipartiteIncidence g = build_family_member(family, size, params);
    if (g.k != k)
      throw error("experiments: family member has k=" + std::to_string(g.k) +
                  ", expected " + std::to_string(k));
    const FactorSampler sampler(g);
    const std::vector<int> structured =
        structured_vertices_dual(g, default_eps(g.d), default_delta(g.d));
    const std::uint64_t size_seed =
        RandomStream::substream(seed, 1000003ull * si).next_u64();
    const BucketCounts counts = run_draws(g, sampler, radius, num_samples, roots_per_sample,
                                          size_seed, threads, &structured);
    ConvergenceRow row;
    row.size = size;
    row.samples = num_samples;
    row.roots_per_sample = roots_per_sample;
    row.root_samples = static_cast<long long>(counts.total);
    row.distribution = counts_to_distribution(counts, radius, k);
    row.tv_to_limit = tv_distance(row.distribution, limit);
    row.non_tree_fraction = static_cast<double>(counts.non_tree) / counts.total;
    row.structured_hit_fraction = static_cast<double>(counts.structured_hits) / counts.total;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<double> quenched_fractions(const SignedBipartiteIncidence& g,
                                       const RootedBipTree& shape, int radius,
                                       long long num_samples, RandomStream& rng, int threads) {
  if (!is_valid(shape, g.k)) throw error("experiments: quenched shape must be valid");
  const FactorSampler sampler(g);
  const std::uint64_t seed = rng.next_u64();
  const std::string& target = shape.code;
  const int n = g.num_v();
  threads = std::max(1, threads);

  std::vector<double> out(static_cast<std::size_t>(num_samples), 0.0);
  std::atomic<long long> next{0};
  auto worker = [&]() {
    for (;;) {
      const long long i = next.fetch_add(1);
      if (i >= num_samples) break;
      RandomStream stream = RandomStream::substream(seed, static_cast<std::uint64_t>(i));
      const SampleSet s = sampler.draw(stream);
      long long hits = 0;
      for (int root = 0; root < n; ++root) {
        auto ball = extract_ball(g, s, root, radius);
        if (ball && ball->height == radius && ball->code == target) ++hits;
      }
      out[static_cast<std::size_t>(i)] = static_cast<double>(hits) / n;
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < threads; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

double tree_determinant_identity_gap(const SignedBipartiteIncidence& g, const EmbeddedBall& t) {
  if (!is_valid(t.shape, g.k))
    throw error("experiments: identity gap requires a valid embedded tree");
  std::unordered_set<int> v_ids;
  std::vector<int> u_ids;
  for (int i = 0; i < t.shape.size(); ++i) {
    if (t.shape.depth[i] % 2 == 0)
      v_ids.insert(t.graph_id[i]);
    else
      u_ids.push_back(t.graph_id[i]);
  }
  for (int u : u_ids)
    for (const auto& [v, sg] : g.u_adj[u])
      if (!v_ids.count(v))
        throw error("experiments: embedded tree does not close the odd neighborhoods");

  const int s = static_cast<int>(u_ids.size());
  Eigen::MatrixXd sub(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      double dot = 0.0;
      // sparse column dot product through the shorter adjacency list
      for (const auto& [v1, s1] : g.u_adj[u_ids[i]])
        for (const auto& [v2, s2] : g.u_adj[u_ids[j]])
          if (v1 == v2) dot += s1 * s2;
      sub(i, j) = dot / g.d;
    }
  const double det = s == 0 ? 1.0 : sub.determinant();
  const double expected =
      std::pow(static_cast<double>(g.d), -s) *
      static_cast<double>(matching_count(t.shape, {}));
  return std::abs(det - expected);
}

double structured_hit_fraction(const std::vector<EmbeddedBall>& balls,
                               const std::vector<int>& structured) {
  if (balls.empty()) return 0.0;
  std::unordered_set<int> set(structured.begin(), structured.end());
  long long hits = 0;
  for (const EmbeddedBall& b : balls) {
    bool hit = false;
    for (int i = 0; i < b.shape.size() && !hit; ++i)
      if (b.shape.depth[i] % 2 == 1 && set.count(b.graph_id[i])) hit = true;
    if (hit) ++hits;
  }
  return static_cast<double>(hits) / balls.size();
}

}  // namespace detlim
