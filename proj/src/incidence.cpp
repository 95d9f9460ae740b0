#include "detlim/incidence.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "gf.hpp"

namespace detlim {

const char* family_name(Family f) {
  switch (f) {
    case Family::ust_complete: return "ust";
    case Family::kalai: return "kalai";
    case Family::cube_skeleton: return "cube";
    case Family::colorful: return "colorful";
    case Family::grassmannian: return "grassmannian";
    case Family::subset_incidence: return "subset";
    case Family::custom: return "custom";
  }
  return "custom";
}

Family family_from_name(const std::string& name) {
  if (name == "ust") return Family::ust_complete;
  if (name == "kalai") return Family::kalai;
  if (name == "cube") return Family::cube_skeleton;
  if (name == "colorful") return Family::colorful;
  if (name == "grassmannian") return Family::grassmannian;
  if (name == "subset") return Family::subset_incidence;
  if (name == "custom") return Family::custom;
  throw error("incidence: unknown family '" + name + "'");
}

void SignedBipartiteIncidence::rebuild_adjacency() {
  v_adj.assign(v_labels.size(), {});
  u_adj.assign(u_labels.size(), {});
  for (const Edge& e : edges) {
    if (e.v < 0 || e.v >= num_v() || e.u < 0 || e.u >= num_u())
      throw error("incidence: edge index out of range");
    if (e.sign != 1 && e.sign != -1) throw error("incidence: edge sign must be +-1");
    v_adj[e.v].emplace_back(e.u, e.sign);
    u_adj[e.u].emplace_back(e.v, e.sign);
  }
}

namespace {

std::string subset_label(const std::vector<int>& s) {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) os << ",";
    os << s[i];
  }
  os << "}";
  return os.str();
}

// All (size)-subsets of {1,...,n} in lexicographic order.
std::vector<std::vector<int>> subsets_of(int n, int size) {
  std::vector<std::vector<int>> out;
  if (size < 0 || size > n) return out;
  std::vector<int> cur(size);
  for (int i = 0; i < size; ++i) cur[i] = i + 1;
  for (;;) {
    out.push_back(cur);
    int i = size - 1;
    while (i >= 0 && cur[i] == n - (size - 1 - i)) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < size; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

// Boundary-style incidence between (size)-subsets and (size+1)-subsets of a
// common label universe: sign of (sigma, tau) is (-1)^i with i the 0-based
// position of tau \ sigma in tau. Used by the simplicial families.
void add_boundary_edges(SignedBipartiteIncidence& g,
                        const std::vector<std::vector<int>>& v_sets,
                        const std::vector<std::vector<int>>& u_sets, bool signed_entries) {
  std::map<std::vector<int>, int> v_index;
  for (size_t i = 0; i < v_sets.size(); ++i) v_index[v_sets[i]] = static_cast<int>(i);
  for (size_t ui = 0; ui < u_sets.size(); ++ui) {
    const std::vector<int>& tau = u_sets[ui];
    for (size_t pos = 0; pos < tau.size(); ++pos) {
      std::vector<int> sigma;
      sigma.reserve(tau.size() - 1);
      for (size_t j = 0; j < tau.size(); ++j)
        if (j != pos) sigma.push_back(tau[j]);
      auto it = v_index.find(sigma);
      if (it == v_index.end()) continue;
      const int sign = (!signed_entries || pos % 2 == 0) ? 1 : -1;
      g.edges.push_back({it->second, static_cast<int>(ui), sign});
    }
  }
}

}  // namespace

SignedBipartiteIncidence build_complete_graph_ust(int n) {
  if (n < 3) throw error("ust: n_vertices must be >= 3");
  SignedBipartiteIncidence g;
  g.family = Family::ust_complete;
  g.params = "n=" + std::to_string(n);
  g.d = n - 1;
  g.k = 1;
  for (int i = 0; i < n; ++i) g.v_labels.push_back(std::to_string(i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int u = static_cast<int>(g.u_labels.size());
      g.u_labels.push_back("(" + std::to_string(i) + "," + std::to_string(j) + ")");
      // orientation lower -> higher: source -1, target +1
      g.edges.push_back({i, u, -1});
      g.edges.push_back({j, u, +1});
    }
  g.rebuild_adjacency();
  return g;
}

SignedBipartiteIncidence build_kalai_complex(int n, int k) {
  if (k < 1) throw error("kalai: k must be >= 1");
  if (n <= k + 1) throw error("kalai: n_vertices must be >= k+2");
  SignedBipartiteIncidence g;
  g.family = Family::kalai;
  g.params = "n=" + std::to_string(n) + ",k=" + std::to_string(k);
  g.d = n - k;
  g.k = k;
  const auto v_sets = subsets_of(n, k);
  const auto u_sets = subsets_of(n, k + 1);
  for (const auto& s : v_sets) g.v_labels.push_back(subset_label(s));
  for (const auto& s : u_sets) g.u_labels.push_back(subset_label(s));
  add_boundary_edges(g, v_sets, u_sets, /*signed_entries=*/true);
  g.rebuild_adjacency();
  return g;
}

SignedBipartiteIncidence build_hypercube_skeleton(int n, int ell) {
  if (ell < 1 || ell > n) throw error("cube: need 1 <= ell <= n_dim");
  SignedBipartiteIncidence g;
  g.family = Family::cube_skeleton;
  g.params = "n=" + std::to_string(n) + ",ell=" + std::to_string(ell);
  g.d = n - ell + 1;
  g.k = 2 * ell - 1;

  // A cell is (free coordinate mask, fixed values); label chars are
  // '0'/'1'/'*' with position = coordinate index.
  struct Cell {
    unsigned mask;
    unsigned vals;
  };
  auto label_of = [n](Cell c) {
    std::string s(n, '0');
    for (int i = 0; i < n; ++i) {
      if (c.mask & (1u << i))
        s[i] = '*';
      else if (c.vals & (1u << i))
        s[i] = '1';
    }
    return s;
  };
  auto cells_of_dim = [n](int dim) {
    std::vector<Cell> out;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (__builtin_popcount(mask) != dim) continue;
      const unsigned fixed = (~mask) & ((1u << n) - 1);
      // enumerate values over the fixed coordinates
      unsigned sub = 0;
      for (;;) {
        out.push_back({mask, sub});
        if (sub == fixed) break;
        sub = (sub - fixed) & fixed;
      }
    }
    return out;
  };

  const auto v_cells = cells_of_dim(ell - 1);
  const auto u_cells = cells_of_dim(ell);
  std::unordered_map<std::uint64_t, int> v_index;
  auto key_of = [](Cell c) {
    return (static_cast<std::uint64_t>(c.mask) << 32) | c.vals;
  };
  for (size_t i = 0; i < v_cells.size(); ++i) {
    g.v_labels.push_back(label_of(v_cells[i]));
    v_index[key_of(v_cells[i])] = static_cast<int>(i);
  }
  for (size_t ui = 0; ui < u_cells.size(); ++ui) {
    const Cell c = u_cells[ui];
    g.u_labels.push_back(label_of(c));
    int j = 0;  // rank of the free coordinate, ascending
    for (int coord = 0; coord < n; ++coord) {
      if (!(c.mask & (1u << coord))) continue;
      for (int bit = 0; bit <= 1; ++bit) {
        Cell face{c.mask & ~(1u << coord),
                  bit ? (c.vals | (1u << coord)) : c.vals};
        const int base = (j % 2 == 0) ? 1 : -1;  // 0-face gets (-1)^j
        const int sign = bit == 0 ? base : -base;
        g.edges.push_back({v_index.at(key_of(face)), static_cast<int>(ui), sign});
      }
      ++j;
    }
  }
  g.rebuild_adjacency();
  return g;
}

SignedBipartiteIncidence build_colorful_complex(int parts, int part_size, int ell) {
  if (part_size < 1) throw error("colorful: part_size must be >= 1");
  if (ell < 1) throw error("colorful: ell must be >= 1");
  if (parts <= ell) throw error("colorful: parts must be >= ell+1");
  SignedBipartiteIncidence g;
  g.family = Family::colorful;
  g.params = "parts=" + std::to_string(parts) + ",part_size=" + std::to_string(part_size) +
             ",ell=" + std::to_string(ell);
  g.d = (parts - ell) * part_size;
  g.k = ell;

  const int nv = parts * part_size;
  auto rainbow = [&](const std::vector<int>& s) {
    std::set<int> seen;
    for (int x : s) {
      const int part = (x - 1) / part_size;
      if (!seen.insert(part).second) return false;
    }
    return true;
  };
  std::vector<std::vector<int>> v_sets, u_sets;
  for (const auto& s : subsets_of(nv, ell))
    if (rainbow(s)) v_sets.push_back(s);
  for (const auto& s : subsets_of(nv, ell + 1))
    if (rainbow(s)) u_sets.push_back(s);
  auto label = [&](const std::vector<int>& s) {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < s.size(); ++i) {
      if (i) os << ",";
      os << (s[i] - 1) / part_size << "." << (s[i] - 1) % part_size;
    }
    os << "}";
    return os.str();
  };
  for (const auto& s : v_sets) g.v_labels.push_back(label(s));
  for (const auto& s : u_sets) g.u_labels.push_back(label(s));
  add_boundary_edges(g, v_sets, u_sets, /*signed_entries=*/true);
  g.rebuild_adjacency();
  return g;
}

SignedBipartiteIncidence build_grassmannian(int q, int n, int ell) {
  if (ell < 1 || ell + 1 > n) throw error("grassmannian: need 1 <= ell < n_dim");
  const gf::Field f(q);  // rejects q outside {2,3,4,5}
  SignedBipartiteIncidence g;
  g.family = Family::grassmannian;
  g.params = "q=" + std::to_string(q) + ",n=" + std::to_string(n) + ",ell=" + std::to_string(ell);
  if (!(ell + 1 < n / 2.0))
    g.warning = "grassmannian: ell+1 < n/2 violated; the incidence matrix may not have "
                "full row rank";

  const auto v_spaces = gf::enumerate_subspaces(f, n, ell);
  const auto u_spaces = gf::enumerate_subspaces(f, n, ell + 1);
  for (const auto& s : v_spaces) g.v_labels.push_back(gf::subspace_label(s));
  for (const auto& s : u_spaces) g.u_labels.push_back(gf::subspace_label(s));
  for (size_t ui = 0; ui < u_spaces.size(); ++ui)
    for (size_t vi = 0; vi < v_spaces.size(); ++vi)
      if (gf::contained_in(v_spaces[vi], u_spaces[ui], f))
        g.edges.push_back({static_cast<int>(vi), static_cast<int>(ui), +1});

  // d = (q^{n-ell}-1)/(q-1), k+1 = (q^{ell+1}-1)/(q-1)
  long long qp = 1;
  for (int i = 0; i < n - ell; ++i) qp *= q;
  g.d = static_cast<int>((qp - 1) / (q - 1));
  qp = 1;
  for (int i = 0; i < ell + 1; ++i) qp *= q;
  g.k = static_cast<int>((qp - 1) / (q - 1)) - 1;
  g.rebuild_adjacency();
  return g;
}

SignedBipartiteIncidence build_subset_incidence(int n, int l) {
  if (l < 1 || l > n - 1) throw error("subset: need 1 <= l <= n_ground-1");
  SignedBipartiteIncidence g;
  g.family = Family::subset_incidence;
  g.params = "n=" + std::to_string(n) + ",l=" + std::to_string(l);
  g.d = n - l;
  g.k = l;
  const auto v_sets = subsets_of(n, l);
  const auto u_sets = subsets_of(n, l + 1);
  for (const auto& s : v_sets) g.v_labels.push_back(subset_label(s));
  for (const auto& s : u_sets) g.u_labels.push_back(subset_label(s));
  add_boundary_edges(g, v_sets, u_sets, /*signed_entries=*/false);
  g.rebuild_adjacency();
  return g;
}

ValidationReport validate(const SignedBipartiteIncidence& g) {
  ValidationReport r;
  const int n = g.num_v();
  const int m = g.num_u();

  r.simple = true;
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(g.edges.size() * 2);
  for (const Edge& e : g.edges) {
    if (e.v < 0 || e.v >= n || e.u < 0 || e.u >= m || (e.sign != 1 && e.sign != -1)) {
      r.simple = false;
      r.failures.push_back("malformed edge");
      break;
    }
    const std::uint64_t key = (static_cast<std::uint64_t>(e.v) << 32) | static_cast<std::uint32_t>(e.u);
    if (!seen.insert(key).second) {
      r.simple = false;
      r.failures.push_back("repeated (v,u) pair");
      break;
    }
  }

  std::vector<int> v_deg(n, 0), u_deg(m, 0);
  for (const Edge& e : g.edges) {
    if (e.v >= 0 && e.v < n) ++v_deg[e.v];
    if (e.u >= 0 && e.u < m) ++u_deg[e.u];
  }
  r.left_regular = n > 0;
  for (int i = 0; i < n; ++i)
    if (v_deg[i] != v_deg[0]) {
      r.left_regular = false;
      break;
    }
  if (r.left_regular) r.left_degree = n > 0 ? v_deg[0] : -1;
  if (!r.left_regular) r.failures.push_back("left degrees not constant");
  r.right_regular = m > 0;
  for (int i = 0; i < m; ++i)
    if (u_deg[i] != u_deg[0]) {
      r.right_regular = false;
      break;
    }
  if (r.right_regular) r.right_degree = m > 0 ? u_deg[0] : -1;
  if (!r.right_regular) r.failures.push_back("right degrees not constant");

  // common-neighbor counts of v-pairs through the U side; cost ~ sum deg(u)^2
  r.c4_free = true;
  std::unordered_map<std::uint64_t, int> pair_count;
  for (int u = 0; u < m && r.c4_free; ++u) {
    const auto& nbrs = g.u_adj[u];
    for (size_t a = 0; a < nbrs.size() && r.c4_free; ++a)
      for (size_t b = a + 1; b < nbrs.size(); ++b) {
        int v1 = nbrs[a].first, v2 = nbrs[b].first;
        if (v1 == v2) continue;
        if (v1 > v2) std::swap(v1, v2);
        const std::uint64_t key = (static_cast<std::uint64_t>(v1) << 32) | static_cast<std::uint32_t>(v2);
        if (++pair_count[key] > 1) {
          r.c4_free = false;
          r.failures.push_back("v-pair with two common neighbors: " + g.v_labels[v1] + "," +
                               g.v_labels[v2]);
          break;
        }
      }
  }

  r.counts_consistent =
      static_cast<long long>(m) * (g.k + 1) == static_cast<long long>(n) * g.d;
  if (!r.counts_consistent) r.failures.push_back("|U|(k+1) != |V|d");
  return r;
}

Eigen::MatrixXd signed_matrix(const SignedBipartiteIncidence& g) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(g.num_v(), g.num_u());
  for (const Edge& e : g.edges) b(e.v, e.u) = e.sign;
  return b;
}

namespace gf {

std::vector<Mat> enumerate_subspaces(const Field& f, int n, int t) {
  std::vector<Mat> out;
  if (t < 0 || t > n) return out;
  // pivot column combinations in lexicographic order
  std::vector<int> piv(t);
  for (int i = 0; i < t; ++i) piv[i] = i;
  for (;;) {
    // free positions: (row i, col c) with c > piv[i] and c not a pivot
    std::vector<std::pair<int, int>> free_pos;
    std::vector<char> is_piv(n, 0);
    for (int p : piv) is_piv[p] = 1;
    for (int i = 0; i < t; ++i)
      for (int c = piv[i] + 1; c < n; ++c)
        if (!is_piv[c]) free_pos.emplace_back(i, c);

    std::vector<std::uint8_t> vals(free_pos.size(), 0);
    for (;;) {
      Mat m(t, Row(n, 0));
      for (int i = 0; i < t; ++i) m[i][piv[i]] = 1;
      for (size_t j = 0; j < free_pos.size(); ++j)
        m[free_pos[j].first][free_pos[j].second] = vals[j];
      out.push_back(std::move(m));
      // increment base-q counter (row-major over free positions)
      int j = static_cast<int>(vals.size()) - 1;
      while (j >= 0 && vals[j] == f.q - 1) vals[j--] = 0;
      if (j < 0) break;
      ++vals[j];
    }

    int i = t - 1;
    while (i >= 0 && piv[i] == n - (t - i)) --i;
    if (i < 0) break;
    ++piv[i];
    for (int j2 = i + 1; j2 < t; ++j2) piv[j2] = piv[j2 - 1] + 1;
  }
  return out;
}

bool contained_in(const Mat& sub, const Mat& sup, const Field& f) {
  // reduce each row of sub against sup's RREF rows and test for zero
  const int n = static_cast<int>(sup[0].size());
  std::vector<int> pivot_col(sup.size());
  for (size_t i = 0; i < sup.size(); ++i) {
    int c = 0;
    while (c < n && sup[i][c] == 0) ++c;
    pivot_col[i] = c;
  }
  for (const Row& row : sub) {
    Row r = row;
    for (size_t i = 0; i < sup.size(); ++i) {
      const int c = pivot_col[i];
      if (c >= n || r[c] == 0) continue;
      const int factor = r[c];
      for (int j = 0; j < n; ++j) {
        const int s = f.mul[factor][sup[i][j]];
        int neg = s;
        if (f.q != 4 && s != 0) neg = f.q - s;
        r[j] = f.add[r[j]][neg];
      }
    }
    for (int j = 0; j < n; ++j)
      if (r[j] != 0) return false;
  }
  return true;
}

std::string subspace_label(const Mat& m) {
  std::string s = "[";
  for (size_t i = 0; i < m.size(); ++i) {
    if (i) s += ";";
    for (std::uint8_t x : m[i]) s += static_cast<char>('0' + x);
  }
  s += "]";
  return s;
}

}  // namespace gf

}  // namespace detlim
