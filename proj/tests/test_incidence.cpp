#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "detlim/incidence.hpp"
#include "detlim/io.hpp"

using namespace detlim;

namespace {

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

long long gaussian_binom(int q, int n, int k) {
  // [n choose k]_q = prod (q^{n-i} - 1) / (q^{k-i} - 1)
  long double r = 1.0L;
  for (int i = 0; i < k; ++i) {
    r *= (std::pow((long double)q, n - i) - 1.0L);
    r /= (std::pow((long double)q, k - i) - 1.0L);
  }
  return static_cast<long long>(std::llround((double)r));
}

}  // namespace

TEST_CASE("complete graph incidence") {
  auto g = build_complete_graph_ust(4);
  CHECK(g.num_v() == 4);
  CHECK(g.num_u() == 6);
  CHECK(g.d == 3);
  CHECK(g.k == 1);
  CHECK(validate(g).ok());

  auto g3 = build_complete_graph_ust(3);
  CHECK(g3.num_v() == 3);
  CHECK(g3.num_u() == 3);
  CHECK(g3.d == 2);

  auto g50 = build_complete_graph_ust(50);
  auto r = validate(g50);
  CHECK(r.ok());
  CHECK(r.left_degree == 49);
  CHECK(r.right_degree == 2);

  CHECK_THROWS_AS(build_complete_graph_ust(2), error);
}

TEST_CASE("kalai complex") {
  auto g = build_kalai_complex(5, 2);
  CHECK(g.num_v() == 10);
  CHECK(g.num_u() == 10);
  CHECK(g.d == 3);
  auto r = validate(g);
  CHECK(r.ok());
  CHECK(r.right_degree == 3);

  // 1-dimensional boundary is the complete-graph incidence up to signs
  auto g1 = build_kalai_complex(4, 1);
  auto ust = build_complete_graph_ust(4);
  REQUIRE(g1.num_u() == ust.num_u());
  auto b1 = signed_matrix(g1).cwiseAbs();
  auto b2 = signed_matrix(ust).cwiseAbs();
  CHECK((b1 - b2).norm() == 0.0);

  CHECK(validate(build_kalai_complex(6, 2)).ok());
  CHECK(build_kalai_complex(6, 2).d == 4);
  CHECK_THROWS_AS(build_kalai_complex(3, 2), error);
}

TEST_CASE("boundary of boundary vanishes") {
  for (int n = 4; n <= 7; ++n) {
    for (int k = 1; k + 1 <= n - 2; ++k) {
      auto lo = build_kalai_complex(n, k);
      auto hi = build_kalai_complex(n, k + 1);
      // lo's U equals hi's V by construction order
      REQUIRE(lo.u_labels == hi.v_labels);
      Eigen::MatrixXd prod = signed_matrix(lo) * signed_matrix(hi);
      CHECK(prod.cwiseAbs().maxCoeff() == 0.0);
    }
  }
  // cubical counterpart on a small cube
  auto lo = build_hypercube_skeleton(3, 1);
  auto hi = build_hypercube_skeleton(3, 2);
  REQUIRE(lo.u_labels == hi.v_labels);
  Eigen::MatrixXd prod = signed_matrix(lo) * signed_matrix(hi);
  CHECK(prod.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hypercube skeleton") {
  auto g = build_hypercube_skeleton(4, 1);
  CHECK(g.num_v() == 16);
  CHECK(g.num_u() == 32);
  CHECK(g.d == 4);
  CHECK(g.k == 1);
  CHECK(validate(g).ok());

  auto g2 = build_hypercube_skeleton(3, 2);
  CHECK(g2.k == 3);
  auto r = validate(g2);
  CHECK(r.ok());
  CHECK(r.right_degree == 4);

  CHECK(validate(build_hypercube_skeleton(5, 2)).ok());
  CHECK_THROWS_AS(build_hypercube_skeleton(3, 4), error);
  CHECK_THROWS_AS(build_hypercube_skeleton(3, 0), error);
}

TEST_CASE("colorful complex") {
  auto g = build_colorful_complex(3, 2, 1);
  CHECK(g.num_v() == 6);
  CHECK(g.num_u() == 12);  // edges of K_{2,2,2}
  CHECK(g.d == 4);
  CHECK(g.k == 1);
  CHECK(validate(g).ok());

  auto single = build_colorful_complex(3, 1, 2);
  CHECK(single.num_u() == 1);

  auto g2 = build_colorful_complex(4, 3, 2);
  CHECK(g2.d == 6);
  auto r = validate(g2);
  CHECK(r.ok());
  CHECK(r.right_degree == 3);

  CHECK_THROWS_AS(build_colorful_complex(2, 3, 2), error);
}

TEST_CASE("grassmannian") {
  auto g = build_grassmannian(2, 4, 1);
  CHECK(g.num_v() == 15);
  CHECK(g.num_u() == 35);
  CHECK(g.d == 7);
  CHECK(g.k + 1 == 3);
  CHECK(validate(g).ok());
  CHECK(!g.warning.empty());  // ell+1 < n/2 fails at n=4

  auto g5 = build_grassmannian(2, 5, 1);
  CHECK(g5.d == 15);
  CHECK(g5.k + 1 == 3);
  CHECK(g5.warning.empty());
  CHECK(validate(g5).ok());

  // counts match the Gaussian binomials wherever |U| stays moderate
  for (int q : {2, 3, 4, 5})
    for (int n = 3; n <= 6; ++n)
      for (int ell = 1; ell < n; ++ell) {
        if (gaussian_binom(q, n, ell + 1) > 2000) continue;
        auto gq = build_grassmannian(q, n, ell);
        CHECK(gq.num_v() == gaussian_binom(q, n, ell));
        CHECK(gq.num_u() == gaussian_binom(q, n, ell + 1));
        auto rq = validate(gq);
        CHECK(rq.ok());
        CHECK(rq.right_degree == gaussian_binom(q, ell + 1, ell));
      }
  CHECK_THROWS_AS(build_grassmannian(6, 4, 1), error);
}

TEST_CASE("subset incidence") {
  auto g = build_subset_incidence(5, 1);
  CHECK(g.num_v() == 5);
  CHECK(g.num_u() == 10);
  CHECK(g.d == 4);
  CHECK(g.k == 1);
  CHECK(validate(g).ok());
  Eigen::MatrixXd b = signed_matrix(g);
  CHECK(b.minCoeff() >= 0.0);  // unsigned

  auto g2 = build_subset_incidence(5, 2);
  auto kal = build_kalai_complex(5, 2);
  CHECK((signed_matrix(g2).cwiseAbs() - signed_matrix(kal).cwiseAbs()).norm() == 0.0);

  CHECK_THROWS_AS(build_subset_incidence(5, 5), error);
}

TEST_CASE("validator flags constructed failures") {
  auto g = build_complete_graph_ust(4);
  SUBCASE("duplicated edge breaks simplicity") {
    g.edges.push_back(g.edges.front());
    g.rebuild_adjacency();
    auto r = validate(g);
    CHECK(!r.simple);
  }
  SUBCASE("complete bipartite K22 has a C4") {
    SignedBipartiteIncidence k22;
    k22.v_labels = {"a", "b"};
    k22.u_labels = {"x", "y"};
    k22.edges = {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}};
    k22.d = 2;
    k22.k = 1;
    k22.rebuild_adjacency();
    auto r = validate(k22);
    CHECK(!r.c4_free);
    CHECK(r.simple);
  }
}

TEST_CASE("signed matrix row and column sums") {
  for (auto g : {build_complete_graph_ust(6), build_kalai_complex(5, 2),
                 build_hypercube_skeleton(3, 2), build_colorful_complex(4, 2, 2),
                 build_subset_incidence(6, 2)}) {
    Eigen::MatrixXd b = signed_matrix(g).cwiseAbs();
    for (int i = 0; i < b.rows(); ++i) CHECK(b.row(i).sum() == doctest::Approx(g.d));
    for (int j = 0; j < b.cols(); ++j) CHECK(b.col(j).sum() == doctest::Approx(g.k + 1));
    CHECK(static_cast<long long>(g.num_u()) * (g.k + 1) ==
          static_cast<long long>(g.num_v()) * g.d);
  }
}

TEST_CASE("json round trip") {
  auto g = build_kalai_complex(5, 2);
  auto text = graph_to_json(g);
  auto h = graph_from_json(text);
  CHECK(h.num_v() == g.num_v());
  CHECK(h.num_u() == g.num_u());
  CHECK(h.d == g.d);
  CHECK(h.k == g.k);
  CHECK(h.edges.size() == g.edges.size());
  CHECK(family_name(h.family) == std::string("kalai"));
  CHECK(validate(h).ok());
  CHECK(graph_to_json(h) == text);
}

TEST_CASE("gaussian binomial sanity for counting helper") {
  CHECK(binom(5, 2) == 10);
  CHECK(gaussian_binom(2, 4, 2) == 35);
}
