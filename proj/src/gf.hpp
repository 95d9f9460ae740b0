#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "detlim/incidence.hpp"

namespace detlim::gf {

// Arithmetic tables for GF(q), q in {2,3,4,5}. q=4 is GF(2)[x]/(x^2+x+1)
// with elements encoded as 2-bit polynomials.
struct Field {
  int q;
  std::array<std::array<std::uint8_t, 5>, 5> add{};
  std::array<std::array<std::uint8_t, 5>, 5> mul{};

  explicit Field(int q_) : q(q_) {
    if (q == 2 || q == 3 || q == 5) {
      for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b) {
          add[a][b] = static_cast<std::uint8_t>((a + b) % q);
          mul[a][b] = static_cast<std::uint8_t>((a * b) % q);
        }
    } else if (q == 4) {
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          add[a][b] = static_cast<std::uint8_t>(a ^ b);
          int prod = 0;
          for (int i = 0; i < 2; ++i)
            if (b & (1 << i)) prod ^= a << i;
          if (prod & 4) prod ^= 0b111;  // x^2 = x + 1
          mul[a][b] = static_cast<std::uint8_t>(prod);
        }
    } else {
      throw error("grassmannian: q must be a prime power in {2,3,4,5}");
    }
  }

  int inv(int a) const {
    for (int b = 1; b < q; ++b)
      if (mul[a][b] == 1) return b;
    throw error("gf: zero has no inverse");
  }
};

using Row = std::vector<std::uint8_t>;
using Mat = std::vector<Row>;

// In-place reduced row echelon form; returns the rank.
inline int rref(Mat& m, const Field& f) {
  if (m.empty()) return 0;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pivot = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m[r], m[pivot]);
    const int scale = f.inv(m[r][c]);
    for (int j = 0; j < cols; ++j) m[r][j] = f.mul[m[r][j]][scale];
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const int factor = m[i][c];
      for (int j = 0; j < cols; ++j) {
        const int sub = f.mul[factor][m[r][j]];
        // subtraction: a - b = a + (q - b) mod q, and for GF(4) addition is xor
        int neg = sub;
        if (f.q != 4 && sub != 0) neg = f.q - sub;
        m[i][j] = f.add[m[i][j]][neg];
      }
    }
    ++r;
  }
  return r;
}

// All t-dimensional subspaces of F_q^n as RREF basis matrices, enumerated in
// lexicographic order on (pivot columns, free entries).
std::vector<Mat> enumerate_subspaces(const Field& f, int n, int t);

// Is every row of `sub` (an RREF matrix) in the row space of `sup`?
bool contained_in(const Mat& sub, const Mat& sup, const Field& f);

std::string subspace_label(const Mat& m);

}  // namespace detlim::gf
