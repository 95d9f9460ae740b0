#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "detlim/dpp.hpp"
#include "detlim/experiments.hpp"
#include "detlim/io.hpp"
#include "detlim/limit_law.hpp"
#include "detlim/spectral.hpp"
#include "json.hpp"

using namespace detlim;
using nlohmann::json;

namespace {

std::string g_config;  // canonical argv join, embedded in every output

json meta_object(std::uint64_t seed) {
  json m;
  m["seed"] = seed;
  m["config"] = g_config;
  m["tool_version"] = kToolVersion;
  return m;
}

std::string meta_comment(std::uint64_t seed) {
  return "# seed=" + std::to_string(seed) + " config=\"" + g_config +
         "\" version=" + std::string(kToolVersion) + "\n";
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    atomic_write(out_path, content);
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::map<std::string, long long> parse_params(const std::string& params) {
  std::map<std::string, long long> out;
  std::stringstream ss(params);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw error("cli: malformed parameter '" + item + "'");
    out[item.substr(0, eq)] = std::stoll(item.substr(eq + 1));
  }
  return out;
}

long long need(const std::map<std::string, long long>& p, const std::string& key) {
  const auto it = p.find(key);
  if (it == p.end()) throw error("cli: missing parameter '" + key + "'");
  return it->second;
}

SignedBipartiteIncidence build_from_params(const std::string& family_name_str,
                                           const std::string& params) {
  const Family family = family_from_name(family_name_str);
  const auto p = parse_params(params);
  switch (family) {
    case Family::ust_complete:
      return build_complete_graph_ust(static_cast<int>(need(p, "n")));
    case Family::kalai:
      return build_kalai_complex(static_cast<int>(need(p, "n")), static_cast<int>(need(p, "k")));
    case Family::cube_skeleton:
      return build_hypercube_skeleton(static_cast<int>(need(p, "n")),
                                      static_cast<int>(need(p, "ell")));
    case Family::colorful:
      return build_colorful_complex(static_cast<int>(need(p, "parts")),
                                    static_cast<int>(need(p, "part_size")),
                                    static_cast<int>(need(p, "ell")));
    case Family::grassmannian:
      return build_grassmannian(static_cast<int>(need(p, "q")), static_cast<int>(need(p, "n")),
                                static_cast<int>(need(p, "ell")));
    case Family::subset_incidence:
      return build_subset_incidence(static_cast<int>(need(p, "n")),
                                    static_cast<int>(need(p, "l")));
    case Family::custom:
      break;
  }
  throw error("cli: family '" + family_name_str + "' has no generator");
}

json distribution_json(const BallDistribution& d) {
  json j;
  j["radius"] = d.radius;
  j["k"] = d.k;
  j["residual"] = d.residual;
  j["entries"] = json::object();
  for (const auto& [code, p] : d.entries) j["entries"][code] = p;
  return j;
}

std::string distribution_csv(const BallDistribution& d, std::uint64_t seed) {
  std::string out = meta_comment(seed) + "code,probability\n";
  for (const auto& [code, p] : d.entries) out += code + "," + fmt_double(p) + "\n";
  out += "RESIDUAL," + fmt_double(d.residual) + "\n";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (i > 1) g_config += " ";
    g_config += argv[i];
  }

  CLI::App app{"determinantal incidence processes: generators, exact sampling, "
               "limit-law computation and convergence experiments"};
  app.require_subcommand(1);

  std::string family = "ust", params, graph_path, out_path, csv_path, dump_dir, sizes_csv;
  std::uint64_t seed = 0;
  long long count = 1, samples = 1000;
  int k = 1, radius = 2, max_vertices = 41, dpp_d = 10000, roots = 32, threads = 1;
  double eps = -1.0, delta = -1.0;

  auto* gen = app.add_subcommand("generate", "build a graph family member as JSON");
  gen->add_option("--family", family)->required();
  gen->add_option("--params", params)->required();
  gen->add_option("--out", out_path);
  gen->add_option("--matrix-csv", csv_path, "also export the signed matrix, one row per v");
  gen->callback([&] {
    auto g = build_from_params(family, params);
    if (!g.warning.empty()) std::cerr << "warning: " << g.warning << "\n";
    if (!csv_path.empty()) atomic_write(csv_path, matrix_to_csv(g));
    emit(out_path, graph_to_json(g) + "\n");
  });

  auto* val = app.add_subcommand("validate", "regularity and C4-freeness report");
  val->add_option("--graph", graph_path)->required();
  val->add_option("--out", out_path);
  val->callback([&] {
    auto g = load_graph_file(graph_path);
    auto r = validate(g);
    json j;
    j["meta"] = meta_object(0);
    j["simple"] = r.simple;
    j["left_regular"] = r.left_regular;
    j["right_regular"] = r.right_regular;
    j["c4_free"] = r.c4_free;
    j["counts_consistent"] = r.counts_consistent;
    j["left_degree"] = r.left_degree;
    j["right_degree"] = r.right_degree;
    j["ok"] = r.ok();
    j["failures"] = r.failures;
    emit(out_path, j.dump(2) + "\n");
  });

  auto* spec = app.add_subcommand("spectral", "eigenvalues and structured-vertex summary");
  spec->add_option("--graph", graph_path)->required();
  spec->add_option("--eps", eps, "structured-vertex eps (default d^-1/2)");
  spec->add_option("--delta", delta, "structured-vertex delta (default d^-5/4)");
  spec->add_option("--csv-out", csv_path, "eigenvalue CSV path");
  spec->add_option("--out", out_path, "JSON summary path");
  spec->callback([&] {
    auto g = load_graph_file(graph_path);
    auto s = decompose(g);
    const double e = eps > 0 ? eps : default_eps(g.d);
    const double dl = delta > 0 ? delta : default_delta(g.d);
    const auto structured = structured_vertices(s, e, dl);
    if (!csv_path.empty()) {
      std::string csv = meta_comment(0) + "index,eigenvalue\n";
      for (int i = 0; i < s.eigenvalues.size(); ++i)
        csv += std::to_string(i) + "," + fmt_double(s.eigenvalues(i)) + "\n";
      atomic_write(csv_path, csv);
    }
    json j;
    j["meta"] = meta_object(0);
    j["rank"] = s.rank;
    j["trace_gap"] = trace_identity_gap(g);
    j["structured_count"] = structured.size();
    j["eps"] = e;
    j["delta"] = dl;
    emit(out_path, j.dump(2) + "\n");
  });

  auto* smp = app.add_subcommand("sample", "draw from the row-space determinantal measure");
  smp->add_option("--graph", graph_path)->required();
  smp->add_option("--count", count)->required();
  smp->add_option("--seed", seed)->required();
  smp->add_option("--out", out_path);
  smp->callback([&] {
    auto g = load_graph_file(graph_path);
    auto h = projection_subspace(decompose(g));
    RandomStream rng(seed);
    std::string out = json{{"meta", meta_object(seed)}}.dump() + "\n";
    for (long long i = 0; i < count; ++i) {
      auto s = sample(h, rng);
      out += json{{"members", s.members}}.dump() + "\n";
    }
    emit(out_path, out);
  });

  auto* orc = app.add_subcommand("oracle", "brute-force enumeration of the measure");
  orc->add_option("--family", family)->required();
  orc->add_option("--params", params)->required();
  orc->add_option("--out", out_path);
  orc->callback([&] {
    auto g = build_from_params(family, params);
    auto h = projection_subspace(decompose(g));
    std::string out = json{{"meta", meta_object(0)}}.dump() + "\n";
    for (const auto& [s, p] : enumerate_all(h))
      out += json{{"members", s.members}, {"probability", p}}.dump() + "\n";
    emit(out_path, out);
  });

  auto* tkd = app.add_subcommand("tk-dist", "exact limit ball law as CSV");
  tkd->add_option("--k", k)->required();
  tkd->add_option("--radius", radius)->required();
  tkd->add_option("--max-vertices", max_vertices);
  tkd->add_option("--out", out_path);
  tkd->callback([&] {
    auto d = tk_distribution(k, radius, max_vertices);
    emit(out_path, distribution_csv(d, 0));
  });

  auto* tks = app.add_subcommand("tk-sample", "sample limit balls, one code per line");
  tks->add_option("--k", k)->required();
  tks->add_option("--radius", radius)->required();
  tks->add_option("--count", count)->required();
  tks->add_option("--seed", seed)->required();
  tks->add_option("--out", out_path);
  tks->callback([&] {
    RandomStream rng(seed);
    std::string out = meta_comment(seed);
    for (long long i = 0; i < count; ++i) out += sample_tk_ball(k, radius, rng).code + "\n";
    emit(out_path, out);
  });

  auto* oos = app.add_subcommand("oneout-sample", "sample finite-d one-out balls");
  oos->add_option("--k", k)->required();
  oos->add_option("--d", dpp_d)->required();
  oos->add_option("--radius", radius)->required();
  oos->add_option("--count", count)->required();
  oos->add_option("--seed", seed)->required();
  oos->add_option("--out", out_path);
  oos->callback([&] {
    RandomStream rng(seed);
    std::string out = meta_comment(seed);
    for (long long i = 0; i < count; ++i)
      out += sample_one_out_ball(k, dpp_d, radius, rng).code + "\n";
    emit(out_path, out);
  });

  auto* ent = app.add_subcommand("enumerate-trees", "valid trees of the given height");
  ent->add_option("--k", k)->required();
  ent->add_option("--radius", radius)->required();
  ent->add_option("--max-vertices", max_vertices);
  ent->add_option("--out", out_path);
  ent->callback([&] {
    std::string out = meta_comment(0);
    for (const auto& t : enumerate_valid_trees(k, radius, max_vertices)) out += t.code + "\n";
    emit(out_path, out);
  });

  auto* exp = app.add_subcommand("experiment", "convergence table against the limit law");
  exp->add_option("--family", family)->required();
  exp->add_option("--params", params);
  exp->add_option("--sizes", sizes_csv)->required();
  exp->add_option("--k", k)->required();
  exp->add_option("--radius", radius)->required();
  exp->add_option("--samples", samples)->required();
  exp->add_option("--roots", roots);
  exp->add_option("--seed", seed)->required();
  exp->add_option("--threads", threads);
  exp->add_option("--out", out_path);
  exp->add_option("--dump-dir", dump_dir, "write per-size distribution CSVs here");
  exp->callback([&] {
    std::vector<int> sizes;
    std::stringstream ss(sizes_csv);
    std::string item;
    while (std::getline(ss, item, ',')) sizes.push_back(std::stoi(item));
    auto report = convergence_experiment(family_from_name(family), params, sizes, k, radius,
                                         samples, roots, seed, threads);
    json j;
    j["meta"] = meta_object(seed);
    j["family"] = report.family;
    j["params"] = report.params;
    j["k"] = report.k;
    j["radius"] = report.radius;
    j["rows"] = json::array();
    for (const auto& row : report.rows) {
      json r;
      r["size"] = row.size;
      r["samples"] = row.samples;
      r["roots_per_sample"] = row.roots_per_sample;
      r["root_samples"] = row.root_samples;
      r["tv_to_limit"] = row.tv_to_limit;
      r["non_tree_fraction"] = row.non_tree_fraction;
      r["structured_hit_fraction"] = row.structured_hit_fraction;
      r["distribution"] = distribution_json(row.distribution);
      j["rows"].push_back(std::move(r));
      if (!dump_dir.empty())
        atomic_write(dump_dir + "/dist_" + report.family + "_" + std::to_string(row.size) +
                         ".csv",
                     distribution_csv(row.distribution, seed));
    }
    emit(out_path, j.dump(2) + "\n");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
