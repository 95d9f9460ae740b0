#include "detlim/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace detlim {

std::string graph_to_json(const SignedBipartiteIncidence& g) {
  nlohmann::json j;
  j["family"] = family_name(g.family);
  j["params"] = g.params;
  j["d"] = g.d;
  j["k"] = g.k;
  j["v_labels"] = g.v_labels;
  j["u_labels"] = g.u_labels;
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const Edge& e : g.edges) edges.push_back({e.v, e.u, e.sign});
  return j.dump();
}

SignedBipartiteIncidence graph_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw error(std::string("io: bad graph JSON: ") + e.what());
  }
  SignedBipartiteIncidence g;
  g.family = family_from_name(j.value("family", "custom"));
  g.params = j.value("params", "");
  g.v_labels = j.at("v_labels").get<std::vector<std::string>>();
  g.u_labels = j.at("u_labels").get<std::vector<std::string>>();
  for (const auto& e : j.at("edges"))
    g.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()});
  if (j.contains("d") && j.contains("k")) {
    g.d = j["d"].get<int>();
    g.k = j["k"].get<int>();
  } else {
    // derive degrees from the first vertices; validate() reports irregularity
    std::vector<int> v_deg(g.v_labels.size(), 0), u_deg(g.u_labels.size(), 0);
    for (const Edge& e : g.edges) {
      ++v_deg.at(e.v);
      ++u_deg.at(e.u);
    }
    g.d = v_deg.empty() ? 0 : v_deg[0];
    g.k = u_deg.empty() ? 0 : u_deg[0] - 1;
  }
  g.rebuild_adjacency();
  return g;
}

SignedBipartiteIncidence load_graph_file(const std::string& path) {
  return graph_from_json(read_file(path));
}

std::string matrix_to_csv(const SignedBipartiteIncidence& g) {
  std::vector<std::vector<int>> rows(g.num_v(), std::vector<int>(g.num_u(), 0));
  for (const Edge& e : g.edges) rows[e.v][e.u] = e.sign;
  std::ostringstream os;
  for (const auto& row : rows) {
    for (size_t j = 0; j < row.size(); ++j) {
      if (j) os << ",";
      os << row[j];
    }
    os << "\n";
  }
  return os.str();
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw error("io: cannot open " + tmp + " for writing");
    out << content;
    if (!out.flush()) throw error("io: write to " + tmp + " failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw error("io: rename to " + path + " failed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("io: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detlim
