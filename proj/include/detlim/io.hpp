#pragma once

#include <string>

#include "detlim/incidence.hpp"

namespace detlim {

inline constexpr const char* kToolVersion = "0.1.0";

// Graph document: {family, params, d, k, v_labels, u_labels,
// edges: [[vi, ui, sign], ...]}.
std::string graph_to_json(const SignedBipartiteIncidence& g);
SignedBipartiteIncidence graph_from_json(const std::string& text);

SignedBipartiteIncidence load_graph_file(const std::string& path);

// CSV of the signed matrix, one row per v.
std::string matrix_to_csv(const SignedBipartiteIncidence& g);

// Write via a temp file in the same directory plus rename.
void atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace detlim
