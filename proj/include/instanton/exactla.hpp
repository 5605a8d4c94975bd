#pragma once

// Exact rational linear algebra on sparse matrices whose rows and columns are
// labelled by tensor spaces.
//
// Two independent eliminators share the same contract:
//   - FractionFree: integer rows, cross-multiplication, row content removed
//     after every update; no rational arithmetic until the final normalization.
//   - NaiveRational: textbook Gauss-Jordan over mpq.
// Both pivot column by column from the left, so the pivot columns (and hence
// the reduced echelon form and the kernel basis) are unique.

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "instanton/space.hpp"

namespace instanton::exactla {

using Rational = mpq_class;
using Integer = mpz_class;
using Vector = std::vector<Rational>;
using rep::TensorSpace;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Strategy { FractionFree, NaiveRational };

struct Triplet {
  std::size_t row;
  std::size_t col;
  Rational value;
};

class ExactMatrix {
 public:
  struct Entry {
    std::size_t col;
    Rational value;
    bool operator==(const Entry&) const = default;
  };
  using Row = std::vector<Entry>;

  ExactMatrix() = default;
  // Zero map domain -> codomain.
  ExactMatrix(TensorSpace codomain, TensorSpace domain);

  // Duplicate (row, col) pairs are summed; zero sums are dropped.
  static ExactMatrix from_triplets(TensorSpace codomain, TensorSpace domain,
                                   std::span<const Triplet> triplets);
  static ExactMatrix from_dense(const std::vector<std::vector<Rational>>& rows);
  static ExactMatrix from_dense(TensorSpace codomain, TensorSpace domain,
                                const std::vector<std::vector<Rational>>& rows);
  static ExactMatrix identity(const TensorSpace& space);

  std::size_t rows() const { return codomain_.dim(); }
  std::size_t cols() const { return domain_.dim(); }
  std::size_t nnz() const;
  const TensorSpace& domain() const { return domain_; }
  const TensorSpace& codomain() const { return codomain_; }

  const Row& row(std::size_t i) const { return rows_[i]; }
  Rational at(std::size_t i, std::size_t j) const;
  bool is_zero() const { return nnz() == 0; }

  // Transpose dualizes both spaces.
  ExactMatrix transpose() const;
  Vector apply(std::span<const Rational> v) const;
  ExactMatrix with_spaces(TensorSpace codomain, TensorSpace domain) const;
  // Restriction to a subset of rows and columns, relabelled as plain spaces.
  ExactMatrix submatrix(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;
  std::vector<std::vector<Rational>> to_dense() const;

  // Equality of canonical forms; spaces must agree too.
  bool operator==(const ExactMatrix& other) const {
    return domain_ == other.domain_ && codomain_ == other.codomain_ && rows_ == other.rows_;
  }

  class Builder {
   public:
    Builder(TensorSpace codomain, TensorSpace domain);
    void add(std::size_t row, std::size_t col, const Rational& value);
    ExactMatrix build() &&;

   private:
    TensorSpace codomain_;
    TensorSpace domain_;
    std::vector<std::map<std::size_t, Rational>> acc_;
  };

 private:
  TensorSpace codomain_;
  TensorSpace domain_;
  std::vector<Row> rows_;  // sorted by column, no stored zeros
};

// Reduced row echelon form: pivot rows with pivot entry 1.
struct Echelon {
  std::size_t cols = 0;
  std::vector<std::size_t> pivots;  // pivot column of each row, increasing
  std::vector<ExactMatrix::Row> rows;
};

Echelon reduced_echelon(const ExactMatrix& m, Strategy strategy = Strategy::FractionFree);

std::size_t rank(const ExactMatrix& m, Strategy strategy = Strategy::FractionFree);

// Right kernel, one vector per non-pivot column f: x_f = 1, x_p = -R[p][f]
// for pivot columns p, zero elsewhere. Ordered by f.
std::vector<Vector> kernel_basis(const ExactMatrix& m, Strategy strategy = Strategy::FractionFree);

// f o g; requires domain(f) == codomain(g).
ExactMatrix compose(const ExactMatrix& f, const ExactMatrix& g);

// Row index = r_f * rows(g) + r_g, column index likewise.
ExactMatrix kron(const ExactMatrix& f, const ExactMatrix& g);

struct ColumnSpaceResult {
  bool member = false;
  std::optional<Vector> preimage;
};

ColumnSpaceResult in_column_space(const ExactMatrix& m, std::span<const Rational> v,
                                  Strategy strategy = Strategy::FractionFree);

ExactMatrix add(const ExactMatrix& a, const ExactMatrix& b);
ExactMatrix scale(const ExactMatrix& a, const Rational& c);

// Matrix with the given vectors as columns; codomain is the given space.
ExactMatrix from_columns(const TensorSpace& codomain, const std::vector<Vector>& columns);

bool is_zero_vector(std::span<const Rational> v);

// Graded structure of a matrix whose rows and columns carry integer grades.
struct GradedBlock {
  int grade = 0;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};

// True iff every stored entry connects a row and column of equal grade.
bool is_homogeneous(const ExactMatrix& m, std::span<const int> row_grades,
                    std::span<const int> col_grades);

// Blocks of a homogeneous matrix, sorted by grade. Grades present on only one
// side still get a block (with an empty row or column list).
std::vector<GradedBlock> graded_blocks(std::span<const int> row_grades,
                                       std::span<const int> col_grades);

// Per-grade kernel dimension of a homogeneous matrix. Blocks are eliminated
// on up to `jobs` threads; the result does not depend on `jobs`.
std::map<int, std::size_t> blockwise_kernel_dims(const ExactMatrix& m,
                                                 std::span<const int> row_grades,
                                                 std::span<const int> col_grades,
                                                 unsigned jobs = 1,
                                                 Strategy strategy = Strategy::FractionFree);

std::size_t blockwise_rank(const ExactMatrix& m, std::span<const int> row_grades,
                           std::span<const int> col_grades, unsigned jobs = 1,
                           Strategy strategy = Strategy::FractionFree);

std::string to_string(const Rational& q);

}  // namespace instanton::exactla
