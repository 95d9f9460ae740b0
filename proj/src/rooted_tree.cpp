#include "detlim/rooted_tree.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "detlim/dpp.hpp"
#include "detlim/incidence.hpp"
#include "json.hpp"

namespace detlim {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw error("rootedtrees: 64-bit overflow");
  return r;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw error("rootedtrees: 64-bit overflow");
  return r;
}

}  // namespace

int RootedBipTree::root() const {
  for (int i = 0; i < size(); ++i)
    if (parent[i] < 0) return i;
  throw error("rootedtrees: tree has no root");
}

RootedBipTree RootedBipTree::from_parents(const std::vector<int>& parent) {
  const int n = static_cast<int>(parent.size());
  if (n == 0) throw error("rootedtrees: empty tree");
  RootedBipTree t;
  t.parent = parent;
  t.children.assign(n, {});
  int root = -1;
  for (int i = 0; i < n; ++i) {
    if (parent[i] < 0) {
      if (root >= 0) throw error("rootedtrees: multiple roots");
      root = i;
    } else {
      if (parent[i] >= n) throw error("rootedtrees: parent index out of range");
      t.children[parent[i]].push_back(i);
    }
  }
  if (root < 0) throw error("rootedtrees: no root");

  t.depth.assign(n, -1);
  t.height = 0;
  std::vector<int> order;
  order.reserve(n);
  order.push_back(root);
  t.depth[root] = 0;
  for (size_t head = 0; head < order.size(); ++head) {
    const int v = order[head];
    for (int c : t.children[v]) {
      if (t.depth[c] >= 0) throw error("rootedtrees: parent array has a cycle");
      t.depth[c] = t.depth[v] + 1;
      t.height = std::max(t.height, t.depth[c]);
      order.push_back(c);
    }
  }
  if (static_cast<int>(order.size()) != n) throw error("rootedtrees: disconnected parent array");

  // bottom-up AHU codes with children sorted lexicographically by code
  std::vector<std::string> codes(n);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    std::sort(t.children[v].begin(), t.children[v].end(),
              [&codes](int a, int b) { return codes[a] < codes[b]; });
    std::string c = "(";
    for (int ch : t.children[v]) c += codes[ch];
    c += ")";
    codes[v] = std::move(c);
  }
  t.code = codes[root];
  return t;
}

const std::string& canonical_code(const RootedBipTree& t) { return t.code; }

namespace {

// Bottom-up product over groups of isomorphic child subtrees; Mult is either
// guarded uint64 or long double.
template <typename Mult>
auto aut_fold(const RootedBipTree& t, Mult mul_op) {
  using Value = decltype(mul_op(std::uint64_t{1}, std::uint64_t{1}));
  const int n = t.size();
  std::vector<std::string> codes(n);
  std::vector<Value> aut(n, Value{1});
  std::vector<int> order;
  order.reserve(n);
  order.push_back(t.root());
  for (size_t head = 0; head < order.size(); ++head)
    for (int c : t.children[order[head]]) order.push_back(c);

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    std::string c = "(";
    Value a{1};
    const auto& kids = t.children[v];
    size_t i = 0;
    while (i < kids.size()) {
      size_t j = i;
      while (j < kids.size() && codes[kids[j]] == codes[kids[i]]) {
        a = mul_op(a, aut[kids[j]]);
        ++j;
      }
      for (std::uint64_t mult = 2; mult <= j - i; ++mult) a = mul_op(a, Value(mult));
      i = j;
    }
    for (int ch : kids) c += codes[ch];
    c += ")";
    codes[v] = std::move(c);
    aut[v] = a;
  }
  return aut[order[0]];
}

}  // namespace

std::uint64_t aut_size(const RootedBipTree& t) {
  return aut_fold(t, [](std::uint64_t a, std::uint64_t b) { return checked_mul(a, b); });
}

double aut_size_real(const RootedBipTree& t) {
  return static_cast<double>(
      aut_fold(t, [](long double a, long double b) { return a * b; }));
}

bool is_valid(const RootedBipTree& t, int k) {
  if (t.height % 2 != 0) return false;
  for (int v = 0; v < t.size(); ++v)
    if (t.depth[v] % 2 == 1 && static_cast<int>(t.children[v].size()) != k) return false;
  return true;
}

TreeParts parts(const RootedBipTree& t) {
  TreeParts p;
  for (int v = 0; v < t.size(); ++v) {
    if (t.depth[v] % 2 == 0) {
      p.even.push_back(v);
      if (t.depth[v] < t.height) p.interior_even.push_back(v);
    } else {
      p.odd.push_back(v);
    }
  }
  return p;
}

std::uint64_t matching_count(const RootedBipTree& t, const std::vector<int>& K) {
  const int n = t.size();
  std::vector<char> required(n, 0);
  for (int v : K) {
    if (v < 0 || v >= n) throw error("rootedtrees: K index out of range");
    if (t.depth[v] % 2 != 0) throw error("rootedtrees: K must contain even vertices");
    required[v] = 1;
  }
  for (int v = 0; v < n; ++v)
    if (t.depth[v] % 2 == 1) required[v] = 1;  // U(T) is always saturated

  // a[v]: matchings of the subtree with v unmatched inside it;
  // b[v]: with v matched to one of its children. Saturation enforced for all
  // required vertices strictly inside the subtree.
  std::vector<std::uint64_t> a(n), b(n);
  std::vector<int> order;
  order.reserve(n);
  order.push_back(t.root());
  for (size_t head = 0; head < order.size(); ++head)
    for (int c : t.children[order[head]]) order.push_back(c);

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    const auto& kids = t.children[v];
    const int s = static_cast<int>(kids.size());
    // open[c] = b[c] + a[c] unless c is required, then b[c]
    std::vector<std::uint64_t> open(s);
    for (int i = 0; i < s; ++i) {
      const int c = kids[i];
      open[i] = required[c] ? b[c] : checked_add(a[c], b[c]);
    }
    std::uint64_t prod = 1;
    for (int i = 0; i < s; ++i) prod = checked_mul(prod, open[i]);
    a[v] = prod;
    // b[v] = sum_i a[kids[i]] * prod_{j != i} open[j], via prefix/suffix
    std::vector<std::uint64_t> pre(s + 1, 1), suf(s + 1, 1);
    for (int i = 0; i < s; ++i) pre[i + 1] = checked_mul(pre[i], open[i]);
    for (int i = s - 1; i >= 0; --i) suf[i] = checked_mul(suf[i + 1], open[i]);
    std::uint64_t total = 0;
    for (int i = 0; i < s; ++i)
      total = checked_add(total, checked_mul(a[kids[i]], checked_mul(pre[i], suf[i + 1])));
    b[v] = total;
  }
  const int root = order[0];
  return required[root] ? b[root] : checked_add(a[root], b[root]);
}

namespace {

// Canonical generation of valid trees: an even-rooted subtree of height <= h
// is a multiset of odd branches, each branch being an odd vertex with exactly
// k even-rooted subtrees of height <= h-2.
struct GenLevel {
  // each tree stored as (size, height, parent array rooted at 0)
  struct T {
    int size;
    int height;
    std::vector<int> parents;
  };
  std::vector<T> trees;
};

void append_subtree(std::vector<int>& parents, const std::vector<int>& sub, int attach) {
  const int base = static_cast<int>(parents.size());
  for (size_t i = 0; i < sub.size(); ++i)
    parents.push_back(sub[i] < 0 ? attach : base + sub[i]);
}

}  // namespace

std::vector<RootedBipTree> enumerate_valid_trees(int k, int radius, int max_vertices,
                                                 std::size_t max_count) {
  if (k < 1) throw error("rootedtrees: k must be >= 1");
  if (radius < 0 || radius % 2 != 0) throw error("rootedtrees: radius must be even and >= 0");
  if (max_vertices < 1) return {};

  GenLevel prev;
  prev.trees.push_back({1, 0, {-1}});
  for (int h = 2; h <= radius; h += 2) {
    // branches: odd vertex + nondecreasing k-tuple of prev trees
    struct Branch {
      int size;
      int height;  // height measured from the odd vertex's parent
      std::vector<int> subtree_ids;
    };
    std::vector<Branch> branches;
    {
      std::vector<int> tuple;
      std::function<void(int, int)> rec = [&](int start, int size_used) {
        if (static_cast<int>(tuple.size()) == k) {
          int ht = 0;
          for (int id : tuple) ht = std::max(ht, prev.trees[id].height);
          branches.push_back({1 + size_used, 2 + ht, tuple});
          return;
        }
        for (int i = start; i < static_cast<int>(prev.trees.size()); ++i) {
          const int sz = prev.trees[i].size;
          if (size_used + sz + (k - static_cast<int>(tuple.size()) - 1) + 2 > max_vertices) {
            // remaining slots need at least one vertex each plus root+odd
            continue;
          }
          tuple.push_back(i);
          rec(i, size_used + sz);
          tuple.pop_back();
        }
      };
      rec(0, 0);
    }

    GenLevel next;
    // trees: root + nondecreasing multiset of branches
    std::vector<int> chosen;
    std::function<void(int, int)> rec = [&](int start, int size_used) {
      {
        int ht = 0;
        for (int id : chosen) ht = std::max(ht, branches[id].height);
        std::vector<int> parents{-1};
        for (int id : chosen) {
          const int odd = static_cast<int>(parents.size());
          parents.push_back(0);
          for (int sid : branches[id].subtree_ids) append_subtree(parents, prev.trees[sid].parents, odd);
        }
        next.trees.push_back({1 + size_used, ht, std::move(parents)});
        if (next.trees.size() > max_count)
          throw error("rootedtrees: enumeration exceeded the count guard");
      }
      for (int i = start; i < static_cast<int>(branches.size()); ++i) {
        if (size_used + branches[i].size + 1 > max_vertices) continue;
        chosen.push_back(i);
        rec(i, size_used + branches[i].size);
        chosen.pop_back();
      }
    };
    rec(0, 0);
    prev = std::move(next);
  }

  std::vector<RootedBipTree> out;
  for (const auto& t : prev.trees) {
    if (t.height != radius) continue;
    out.push_back(RootedBipTree::from_parents(t.parents));
  }
  return out;
}

Eigen::MatrixXd tree_incidence(const RootedBipTree& t) {
  return tree_incidence(t, std::vector<int>(t.size(), 1));
}

Eigen::MatrixXd tree_incidence(const RootedBipTree& t, const std::vector<int>& edge_signs) {
  if (static_cast<int>(edge_signs.size()) != t.size())
    throw error("rootedtrees: edge_signs must have one entry per vertex");
  const TreeParts p = parts(t);
  std::vector<int> v_pos(t.size(), -1), u_pos(t.size(), -1);
  for (size_t i = 0; i < p.even.size(); ++i) v_pos[p.even[i]] = static_cast<int>(i);
  for (size_t i = 0; i < p.odd.size(); ++i) u_pos[p.odd[i]] = static_cast<int>(i);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<int>(p.even.size()),
                                            static_cast<int>(p.odd.size()));
  for (int w = 0; w < t.size(); ++w) {
    const int par = t.parent[w];
    if (par < 0) continue;
    const int even = t.depth[w] % 2 == 0 ? w : par;
    const int odd = t.depth[w] % 2 == 0 ? par : w;
    d(v_pos[even], u_pos[odd]) = edge_signs[w];
  }
  return d;
}

namespace {

Eigen::MatrixXd orthonormal_rows(const Eigen::MatrixXd& rows, double rel_tol = 1e-10) {
  if (rows.rows() == 0) return rows;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cut = rel_tol * std::max(sv.size() ? sv(0) : 0.0, 1e-300);
  int keep = 0;
  while (keep < sv.size() && sv(keep) > cut) ++keep;
  return svd.matrixV().leftCols(keep).transpose();
}

}  // namespace

Eigen::VectorXd transversal_vector(const RootedBipTree& t, const Eigen::MatrixXd& D,
                                   const std::vector<int>& K, int v0) {
  const TreeParts p = parts(t);
  const int nv = static_cast<int>(p.even.size());
  std::vector<int> v_pos(t.size(), -1);
  for (int i = 0; i < nv; ++i) v_pos[p.even[i]] = i;

  std::vector<char> in_k(nv, 0);
  for (int v : K) {
    if (v < 0 || v >= t.size() || v_pos[v] < 0) throw error("rootedtrees: K must be even vertices");
    in_k[v_pos[v]] = 1;
  }
  if (v0 < 0 || v0 >= t.size() || v_pos[v0] < 0 || in_k[v_pos[v0]])
    throw error("rootedtrees: v0 must be an even vertex outside K");
  const int v0_pos = v_pos[v0];

  // kernel of D^T, coordinates of K zeroed, re-orthonormalized: the space of
  // admissible left null vectors restricted off K
  Eigen::FullPivLU<Eigen::MatrixXd> lu(D.transpose());
  lu.setThreshold(1e-10);
  Eigen::MatrixXd ker = lu.kernel();  // nv x dim(ker)
  if (ker.cols() == 1 && ker.isZero(0)) throw error("rootedtrees: incidence has no left kernel");
  Eigen::MatrixXd rows = ker.transpose();
  for (int i = 0; i < nv; ++i)
    if (in_k[i]) rows.col(i).setZero();
  Eigen::MatrixXd w_basis = orthonormal_rows(rows);

  // minimal-norm point of the affine slice {w in W : w(v0) = 1}
  Eigen::VectorXd proj = w_basis.transpose() * w_basis.col(v0_pos);
  const double alpha = proj.squaredNorm();
  if (alpha <= 1e-12)
    throw error("rootedtrees: no transversal vector exists for this (K, v0)");
  Eigen::VectorXd w = proj / alpha;

  // lift back to a left null vector: correct on the K coordinates only
  Eigen::VectorXd rhs = -(D.transpose() * w);
  std::vector<int> k_rows;
  for (int i = 0; i < nv; ++i)
    if (in_k[i]) k_rows.push_back(i);
  Eigen::VectorXd phi = w;
  if (!k_rows.empty()) {
    Eigen::MatrixXd dk(static_cast<int>(k_rows.size()), D.cols());
    for (size_t i = 0; i < k_rows.size(); ++i) dk.row(static_cast<int>(i)) = D.row(k_rows[i]);
    Eigen::VectorXd y =
        dk.transpose().completeOrthogonalDecomposition().solve(rhs);
    for (size_t i = 0; i < k_rows.size(); ++i) phi(k_rows[i]) += y(static_cast<int>(i));
  }
  const double resid = (phi.transpose() * D).norm();
  if (resid > 1e-8 * std::max(1.0, phi.norm()))
    throw error("rootedtrees: transversal vector residual " + std::to_string(resid));
  return phi;
}

Eigen::VectorXd transversal_vector(const RootedBipTree& t, const std::vector<int>& K, int v0) {
  return transversal_vector(t, tree_incidence(t), K, v0);
}

Eigen::VectorXd dependent_vector(const RootedBipTree& t, const Eigen::MatrixXd& D,
                                 const std::vector<int>& K) {
  const TreeParts p = parts(t);
  std::vector<int> v_pos(t.size(), -1);
  for (size_t i = 0; i < p.even.size(); ++i) v_pos[p.even[i]] = static_cast<int>(i);
  std::vector<int> k_rows;
  for (int v : K) {
    if (v < 0 || v >= t.size() || v_pos[v] < 0) throw error("rootedtrees: K must be even vertices");
    k_rows.push_back(v_pos[v]);
  }
  if (k_rows.empty()) throw error("rootedtrees: dependent_vector needs a nonempty K");
  Eigen::MatrixXd dk(static_cast<int>(k_rows.size()), D.cols());
  for (size_t i = 0; i < k_rows.size(); ++i) dk.row(static_cast<int>(i)) = D.row(k_rows[i]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(dk.transpose());
  lu.setThreshold(1e-10);
  if (lu.dimensionOfKernel() == 0)
    throw error("rootedtrees: K rows are independent, no dependent vector");
  Eigen::VectorXd y = lu.kernel().col(0);
  y /= y.cwiseAbs().maxCoeff();
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(static_cast<int>(p.even.size()));
  for (size_t i = 0; i < k_rows.size(); ++i) phi(k_rows[i]) = y(static_cast<int>(i));
  return phi;
}

Eigen::VectorXd dependent_vector(const RootedBipTree& t, const std::vector<int>& K) {
  return dependent_vector(t, tree_incidence(t), K);
}

std::vector<int> uniform_transversal(const RootedBipTree& t, RandomStream& rng) {
  const TreeParts p = parts(t);
  const Eigen::MatrixXd d = tree_incidence(t);
  // determinantal measure of the tree incidence column space over V(T)
  Eigen::MatrixXd basis = orthonormal_rows(d.transpose());
  if (basis.rows() != d.cols())
    throw error("rootedtrees: tree has no transversal (rank-deficient incidence)");
  Subspace h{basis};
  const SampleSet s = sample(h, rng);
  std::vector<int> out;
  out.reserve(s.members.size());
  for (int pos : s.members) out.push_back(p.even[pos]);
  return out;
}

std::string tree_to_json(const RootedBipTree& t) {
  nlohmann::json j;
  j["parent"] = t.parent;
  j["code"] = t.code;
  return j.dump();
}

RootedBipTree tree_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  return RootedBipTree::from_parents(j.at("parent").get<std::vector<int>>());
}

}  // namespace detlim
