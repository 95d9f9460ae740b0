#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "detlim/dpp.hpp"
#include "detlim/experiments.hpp"
#include "detlim/io.hpp"
#include "detlim/limit_law.hpp"
#include "detlim/rng.hpp"
#include "detlim/rooted_tree.hpp"
#include "detlim/spectral.hpp"

namespace py = pybind11;
using namespace detlim;

namespace {

py::dict report_to_dict(const ConvergenceReport& report) {
  py::dict out;
  out["family"] = report.family;
  out["params"] = report.params;
  out["k"] = report.k;
  out["radius"] = report.radius;
  out["seed"] = report.seed;
  py::list rows;
  for (const auto& row : report.rows) {
    py::dict r;
    r["size"] = row.size;
    r["samples"] = row.samples;
    r["roots_per_sample"] = row.roots_per_sample;
    r["root_samples"] = row.root_samples;
    r["tv_to_limit"] = row.tv_to_limit;
    r["non_tree_fraction"] = row.non_tree_fraction;
    r["structured_hit_fraction"] = row.structured_hit_fraction;
    r["distribution"] = row.distribution;
    rows.append(std::move(r));
  }
  out["rows"] = std::move(rows);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "determinantal processes on C4-free bi-regular incidence structures";
  m.attr("__version__") = kToolVersion;

  py::register_exception<error>(m, "DetlimError");

  py::class_<RandomStream>(m, "RandomStream")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def_static("substream", &RandomStream::substream, py::arg("master_seed"), py::arg("index"))
      .def("uniform", &RandomStream::uniform)
      .def("poisson", &RandomStream::poisson, py::arg("mean"))
      .def("binomial", &RandomStream::binomial, py::arg("n"), py::arg("p"));

  py::class_<SignedBipartiteIncidence>(m, "Graph")
      .def_property_readonly("num_v", &SignedBipartiteIncidence::num_v)
      .def_property_readonly("num_u", &SignedBipartiteIncidence::num_u)
      .def_readonly("d", &SignedBipartiteIncidence::d)
      .def_readonly("k", &SignedBipartiteIncidence::k)
      .def_readonly("v_labels", &SignedBipartiteIncidence::v_labels)
      .def_readonly("u_labels", &SignedBipartiteIncidence::u_labels)
      .def_readonly("params", &SignedBipartiteIncidence::params)
      .def_readonly("warning", &SignedBipartiteIncidence::warning)
      .def_property_readonly("family",
                             [](const SignedBipartiteIncidence& g) {
                               return std::string(family_name(g.family));
                             })
      .def_property_readonly("edges",
                             [](const SignedBipartiteIncidence& g) {
                               py::list out;
                               for (const Edge& e : g.edges)
                                 out.append(py::make_tuple(e.v, e.u, e.sign));
                               return out;
                             })
      .def("to_json", &graph_to_json)
      .def_static("from_json", &graph_from_json, py::arg("text"))
      .def("__repr__", [](const SignedBipartiteIncidence& g) {
        return "<Graph family=" + std::string(family_name(g.family)) + " |V|=" +
               std::to_string(g.num_v()) + " |U|=" + std::to_string(g.num_u()) + ">";
      });

  m.def("build_complete_graph_ust", &build_complete_graph_ust, py::arg("n_vertices"));
  m.def("build_kalai_complex", &build_kalai_complex, py::arg("n_vertices"), py::arg("k"));
  m.def("build_hypercube_skeleton", &build_hypercube_skeleton, py::arg("n_dim"), py::arg("ell"));
  m.def("build_colorful_complex", &build_colorful_complex, py::arg("parts"),
        py::arg("part_size"), py::arg("ell"));
  m.def("build_grassmannian", &build_grassmannian, py::arg("q"), py::arg("n_dim"),
        py::arg("ell"));
  m.def("build_subset_incidence", &build_subset_incidence, py::arg("n_ground"), py::arg("l"));

  m.def("validate", [](const SignedBipartiteIncidence& g) {
    const ValidationReport r = validate(g);
    py::dict out;
    out["simple"] = r.simple;
    out["left_regular"] = r.left_regular;
    out["right_regular"] = r.right_regular;
    out["c4_free"] = r.c4_free;
    out["counts_consistent"] = r.counts_consistent;
    out["left_degree"] = r.left_degree;
    out["right_degree"] = r.right_degree;
    out["ok"] = r.ok();
    out["failures"] = r.failures;
    return out;
  });
  m.def("signed_matrix", &signed_matrix);

  py::class_<SpectralData>(m, "SpectralData")
      .def_readonly("eigenvalues", &SpectralData::eigenvalues)
      .def_readonly("eigenvectors", &SpectralData::eigenvectors)
      .def_readonly("rank", &SpectralData::rank)
      .def_readonly("d", &SpectralData::d)
      .def_readonly("k", &SpectralData::k)
      .def_readonly("rank_tol", &SpectralData::rank_tol);

  py::class_<Subspace>(m, "Subspace")
      .def_readonly("basis", &Subspace::basis)
      .def_property_readonly("dim", &Subspace::dim)
      .def("projection", &Subspace::projection);

  m.def("decompose", &decompose, py::arg("graph"), py::arg("max_right_vertices") = 5000);
  m.def("projection_subspace", &projection_subspace);
  m.def("near_one_subspace", &near_one_subspace, py::arg("spectral"), py::arg("eps"));
  m.def("structured_vertices", &structured_vertices, py::arg("spectral"), py::arg("eps"),
        py::arg("delta"));
  m.def("structured_vertices_dual", &structured_vertices_dual, py::arg("graph"), py::arg("eps"),
        py::arg("delta"));
  m.def("trace_identity_gap", &trace_identity_gap);
  m.def("default_eps", &default_eps);
  m.def("default_delta", &default_delta);

  m.def("sample",
        [](const Subspace& h, RandomStream& rng) { return sample(h, rng).members; },
        py::arg("subspace"), py::arg("rng"));
  m.def("mass", &mass, py::arg("subspace"), py::arg("members"));
  m.def("marginal", &marginal, py::arg("subspace"), py::arg("members"));
  m.def("condition", &condition, py::arg("subspace"), py::arg("include"), py::arg("exclude"));
  m.def("enumerate_all",
        [](const Subspace& h, double max_subsets) {
          py::list out;
          for (const auto& [s, p] : enumerate_all(h, max_subsets))
            out.append(py::make_tuple(s.members, p));
          return out;
        },
        py::arg("subspace"), py::arg("max_subsets") = 1e6);
  m.def("nw_lower_bound", &nw_lower_bound, py::arg("subspace"), py::arg("u"), py::arg("xis"));
  m.def("nw_corollary_bound", &nw_corollary_bound, py::arg("subspace"), py::arg("u"),
        py::arg("xis"), py::arg("gamma"));

  py::class_<FactorSampler>(m, "FactorSampler")
      .def(py::init<const SignedBipartiteIncidence&>(), py::arg("graph"))
      .def_property_readonly("rank", &FactorSampler::rank)
      .def("marginal", &FactorSampler::marginal, py::arg("u"))
      .def("draw",
           [](const FactorSampler& fs, RandomStream& rng) { return fs.draw(rng).members; },
           py::arg("rng"));

  py::class_<RootedBipTree>(m, "RootedTree")
      .def_static("from_parents", &RootedBipTree::from_parents, py::arg("parents"))
      .def_readonly("parent", &RootedBipTree::parent)
      .def_readonly("depth", &RootedBipTree::depth)
      .def_readonly("height", &RootedBipTree::height)
      .def_readonly("code", &RootedBipTree::code)
      .def_property_readonly("size", &RootedBipTree::size)
      .def("to_json", &tree_to_json)
      .def_static("from_json", &tree_from_json, py::arg("text"))
      .def("__repr__", [](const RootedBipTree& t) { return "<RootedTree " + t.code + ">"; });

  m.def("aut_size", &aut_size);
  m.def("is_valid", &is_valid, py::arg("tree"), py::arg("k"));
  m.def("parts", [](const RootedBipTree& t) {
    const TreeParts p = parts(t);
    return py::make_tuple(p.even, p.odd, p.interior_even);
  });
  m.def("matching_count", &matching_count, py::arg("tree"), py::arg("K"));
  m.def("enumerate_valid_trees", &enumerate_valid_trees, py::arg("k"), py::arg("radius"),
        py::arg("max_vertices"), py::arg("max_count") = 1000000);
  m.def("transversal_vector",
        py::overload_cast<const RootedBipTree&, const std::vector<int>&, int>(
            &transversal_vector),
        py::arg("tree"), py::arg("K"), py::arg("v0"));
  m.def("dependent_vector",
        py::overload_cast<const RootedBipTree&, const std::vector<int>&>(&dependent_vector),
        py::arg("tree"), py::arg("K"));
  m.def("uniform_transversal", &uniform_transversal, py::arg("tree"), py::arg("rng"));

  py::class_<BallDistribution>(m, "BallDistribution")
      .def_readonly("entries", &BallDistribution::entries)
      .def_readonly("residual", &BallDistribution::residual)
      .def_readonly("radius", &BallDistribution::radius)
      .def_readonly("k", &BallDistribution::k)
      .def("total", &BallDistribution::total);

  m.def("tk_ball_mass", &tk_ball_mass, py::arg("tree"), py::arg("k"));
  m.def("tk_distribution", &tk_distribution, py::arg("k"), py::arg("radius"),
        py::arg("max_vertices"));
  m.def("sample_tk_ball", &sample_tk_ball, py::arg("k"), py::arg("radius"), py::arg("rng"));
  m.def("sample_one_out_ball", &sample_one_out_ball, py::arg("k"), py::arg("d"),
        py::arg("radius"), py::arg("rng"));
  m.def("default_tree_budget", &default_tree_budget, py::arg("k"), py::arg("radius"));

  m.def("extract_ball",
        [](const SignedBipartiteIncidence& g, const std::vector<int>& members, int root,
           int radius) -> py::object {
          SampleSet s{members, static_cast<int>(members.size())};
          auto ball = extract_ball(g, s, root, radius);
          if (!ball) return py::none();
          return py::cast(*ball);
        },
        py::arg("graph"), py::arg("members"), py::arg("root"), py::arg("radius"));
  m.def("empirical_ball_distribution", &empirical_ball_distribution, py::arg("graph"),
        py::arg("radius"), py::arg("num_samples"), py::arg("roots_per_sample"), py::arg("rng"),
        py::arg("threads") = 1);
  m.def("exact_ball_distribution", &exact_ball_distribution, py::arg("graph"),
        py::arg("subspace"), py::arg("radius"));
  m.def("tv_distance", &tv_distance, py::arg("a"), py::arg("b"));
  m.def("convergence_experiment",
        [](const std::string& family, const std::string& params, const std::vector<int>& sizes,
           int k, int radius, long long num_samples, int roots_per_sample, std::uint64_t seed,
           int threads) {
          return report_to_dict(convergence_experiment(family_from_name(family), params, sizes,
                                                       k, radius, num_samples, roots_per_sample,
                                                       seed, threads));
        },
        py::arg("family"), py::arg("params"), py::arg("sizes"), py::arg("k"), py::arg("radius"),
        py::arg("num_samples"), py::arg("roots_per_sample"), py::arg("seed"),
        py::arg("threads") = 1);
  m.def("quenched_fractions", &quenched_fractions, py::arg("graph"), py::arg("shape"),
        py::arg("radius"), py::arg("num_samples"), py::arg("rng"), py::arg("threads") = 1);
}
