#pragma once

// Dense reference routines shared by the tests. They deliberately avoid the
// library's eliminators so they can serve as an independent check.

#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include "instanton/exactla.hpp"

namespace oracle {

using instanton::exactla::ExactMatrix;
using instanton::exactla::Rational;
using Dense = std::vector<std::vector<Rational>>;

inline Dense dense(const ExactMatrix& m) {
  Dense d(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (const auto& e : m.row(i)) d[i][e.col] = e.value;
  return d;
}

// Plain Gaussian elimination with partial search for any nonzero pivot.
inline std::size_t rank(Dense a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

inline std::size_t rank(const ExactMatrix& m) { return rank(dense(m)); }

inline Dense multiply(const Dense& a, const Dense& b) {
  const std::size_t inner = b.size();
  const std::size_t cols = inner ? b[0].size() : 0;
  Dense out(a.size(), std::vector<Rational>(cols));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t l = 0; l < inner; ++l) {
      if (a[i][l] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][l] * b[l][j];
    }
  return out;
}

inline bool all_zero(const Dense& a) {
  for (const auto& row : a)
    for (const auto& x : row)
      if (x != 0) return false;
  return true;
}

// Random sparse integer matrix, density in (0, 1], entries in [-bound, bound].
inline Dense random_sparse(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double density,
                           int bound = 5) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> val(-bound, bound);
  Dense d(rows, std::vector<Rational>(cols));
  for (auto& row : d)
    for (auto& x : row)
      if (coin(rng) < density) x = val(rng);
  return d;
}

// Random matrix of prescribed rank (product of random rows x r and r x cols).
inline Dense random_low_rank(std::mt19937_64& rng, std::size_t rows, std::size_t cols, std::size_t r) {
  const Dense left = random_sparse(rng, rows, r, 0.6, 3);
  const Dense right = random_sparse(rng, r, cols, 0.6, 3);
  return multiply(left, right);
}

}  // namespace oracle
