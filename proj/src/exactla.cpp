#include "instanton/exactla.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>
#include <unordered_map>

namespace instanton::exactla {

namespace {

template <typename T>
using SparseRow = std::vector<std::pair<std::size_t, T>>;

// a * x + b * y over sorted sparse rows, dropping zeros.
template <typename T>
SparseRow<T> combine(const T& a, const SparseRow<T>& x, const T& b, const SparseRow<T>& y) {
  SparseRow<T> out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.emplace_back(x[i].first, a * x[i].second);
      ++i;
    } else if (i == x.size() || y[j].first < x[i].first) {
      out.emplace_back(y[j].first, b * y[j].second);
      ++j;
    } else {
      T v = a * x[i].second + b * y[j].second;
      if (v != 0) out.emplace_back(x[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

void make_primitive(SparseRow<Integer>& row) {
  if (row.empty()) return;
  Integer g = 0;
  for (const auto& [c, v] : row) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (g == 1) break;
  }
  if (row.front().second < 0) g = -g;
  if (g != 1) {
    for (auto& [c, v] : row) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  }
}

SparseRow<Integer> to_integer_row(const ExactMatrix::Row& row) {
  Integer l = 1;
  for (const auto& e : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.value.get_den_mpz_t());
  SparseRow<Integer> out;
  out.reserve(row.size());
  for (const auto& e : row) {
    Integer v = e.value.get_num() * (l / e.value.get_den());
    out.emplace_back(e.col, std::move(v));
  }
  make_primitive(out);
  return out;
}

SparseRow<Rational> to_rational_row(const ExactMatrix::Row& row) {
  SparseRow<Rational> out;
  out.reserve(row.size());
  for (const auto& e : row) out.emplace_back(e.col, e.value);
  return out;
}

// Shared driver: rows are bucketed by leading column and the columns are
// swept left to right. `Ops` supplies the scalar-specific update rules.
template <typename T, typename Ops>
std::pair<std::vector<std::size_t>, std::vector<SparseRow<T>>> forward_eliminate(
    std::vector<SparseRow<T>> rows, std::size_t cols) {
  std::vector<std::vector<std::size_t>> buckets(cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (!rows[r].empty()) buckets[rows[r].front().first].push_back(r);

  std::vector<std::size_t> pivots;
  std::vector<SparseRow<T>> echelon;
  for (std::size_t c = 0; c < cols; ++c) {
    auto bucket = std::move(buckets[c]);
    if (bucket.empty()) continue;
    // Shortest row pivots (ties by row id) to limit fill-in.
    auto best = std::min_element(bucket.begin(), bucket.end(), [&](std::size_t a, std::size_t b) {
      return rows[a].size() != rows[b].size() ? rows[a].size() < rows[b].size() : a < b;
    });
    const std::size_t p = *best;
    Ops::prepare_pivot(rows[p]);
    for (std::size_t r : bucket) {
      if (r == p) continue;
      rows[r] = Ops::eliminate(rows[r], rows[p]);
      if (!rows[r].empty()) buckets[rows[r].front().first].push_back(r);
    }
    pivots.push_back(c);
    echelon.push_back(std::move(rows[p]));
  }
  return {std::move(pivots), std::move(echelon)};
}

// Clears every pivot column above its pivot, last pivot first.
template <typename T, typename Ops>
void back_eliminate(const std::vector<std::size_t>& pivots, std::vector<SparseRow<T>>& echelon) {
  for (std::size_t i = echelon.size(); i-- > 0;) {
    const std::size_t c = pivots[i];
    for (std::size_t j = 0; j < i; ++j) {
      auto& row = echelon[j];
      auto it = std::lower_bound(row.begin(), row.end(), c,
                                 [](const auto& e, std::size_t col) { return e.first < col; });
      if (it == row.end() || it->first != c) continue;
      row = Ops::eliminate_at(row, echelon[i], it->second);
    }
  }
}

struct IntegerOps {
  static void prepare_pivot(SparseRow<Integer>&) {}
  static SparseRow<Integer> eliminate(const SparseRow<Integer>& row, const SparseRow<Integer>& piv) {
    return eliminate_at(row, piv, row.front().second);
  }
  // row <- (p/g) row - (a/g) piv, then primitive part.
  static SparseRow<Integer> eliminate_at(const SparseRow<Integer>& row, const SparseRow<Integer>& piv,
                                         const Integer& a) {
    const Integer& p = piv.front().second;
    Integer g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), a.get_mpz_t());
    Integer pp = p / g;
    Integer aa = -(a / g);
    auto out = combine<Integer>(pp, row, aa, piv);
    make_primitive(out);
    return out;
  }
};

struct RationalOps {
  static void prepare_pivot(SparseRow<Rational>& piv) {
    const Rational inv = 1 / piv.front().second;
    for (auto& [c, v] : piv) v *= inv;
  }
  static SparseRow<Rational> eliminate(const SparseRow<Rational>& row, const SparseRow<Rational>& piv) {
    return eliminate_at(row, piv, row.front().second);
  }
  static SparseRow<Rational> eliminate_at(const SparseRow<Rational>& row, const SparseRow<Rational>& piv,
                                          const Rational& a) {
    return combine<Rational>(Rational(1), row, Rational(-a), piv);
  }
};

Echelon finish(std::size_t cols, std::vector<std::size_t> pivots,
               std::vector<SparseRow<Rational>> rows) {
  Echelon out;
  out.cols = cols;
  out.pivots = std::move(pivots);
  out.rows.reserve(rows.size());
  for (auto& row : rows) {
    const Rational inv = 1 / row.front().second;
    ExactMatrix::Row r;
    r.reserve(row.size());
    for (auto& [c, v] : row) r.push_back({c, v * inv});
    out.rows.push_back(std::move(r));
  }
  return out;
}

std::vector<SparseRow<Integer>> integer_rows(const ExactMatrix& m) {
  std::vector<SparseRow<Integer>> rows;
  rows.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(to_integer_row(m.row(i)));
  return rows;
}

std::vector<SparseRow<Rational>> rational_rows(const ExactMatrix& m) {
  std::vector<SparseRow<Rational>> rows;
  rows.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(to_rational_row(m.row(i)));
  return rows;
}

void check_space(const TensorSpace& a, const TensorSpace& b, const char* what) {
  if (!(a == b)) {
    throw DimensionMismatch(std::string(what) + ": " + a.label() + " (dim " + std::to_string(a.dim()) +
                            ") vs " + b.label() + " (dim " + std::to_string(b.dim()) + ")");
  }
}

}  // namespace

ExactMatrix::ExactMatrix(TensorSpace codomain, TensorSpace domain)
    : codomain_(std::move(codomain)), domain_(std::move(domain)), rows_(codomain_.dim()) {}

ExactMatrix ExactMatrix::from_triplets(TensorSpace codomain, TensorSpace domain,
                                       std::span<const Triplet> triplets) {
  Builder b(std::move(codomain), std::move(domain));
  for (const auto& t : triplets) b.add(t.row, t.col, t.value);
  return std::move(b).build();
}

ExactMatrix ExactMatrix::from_dense(const std::vector<std::vector<Rational>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.front().size() : 0;
  return from_dense(TensorSpace::plain(r), TensorSpace::plain(c), rows);
}

ExactMatrix ExactMatrix::from_dense(TensorSpace codomain, TensorSpace domain,
                                    const std::vector<std::vector<Rational>>& rows) {
  ExactMatrix m(std::move(codomain), std::move(domain));
  if (rows.size() != m.rows()) throw DimensionMismatch("from_dense: row count");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw DimensionMismatch("from_dense: ragged rows");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      if (rows[i][j] != 0) {
        m.rows_[i].push_back({j, rows[i][j]});
        m.rows_[i].back().value.canonicalize();
      }
  }
  return m;
}

ExactMatrix ExactMatrix::identity(const TensorSpace& space) {
  ExactMatrix m(space, space);
  for (std::size_t i = 0; i < space.dim(); ++i) m.rows_[i].push_back({i, Rational(1)});
  return m;
}

std::size_t ExactMatrix::nnz() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

Rational ExactMatrix::at(std::size_t i, std::size_t j) const {
  const auto& r = rows_.at(i);
  auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, std::size_t c) { return e.col < c; });
  return (it != r.end() && it->col == j) ? it->value : Rational(0);
}

ExactMatrix ExactMatrix::transpose() const {
  ExactMatrix t(domain_.dual(), codomain_.dual());
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const auto& e : rows_[i]) t.rows_[e.col].push_back({i, e.value});
  return t;
}

Vector ExactMatrix::apply(std::span<const Rational> v) const {
  if (v.size() != cols()) throw DimensionMismatch("apply: vector length " + std::to_string(v.size()) +
                                                  " vs " + std::to_string(cols()) + " columns");
  Vector out(rows());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    Rational acc = 0;
    for (const auto& e : rows_[i])
      if (v[e.col] != 0) acc += e.value * v[e.col];
    out[i] = acc;
  }
  return out;
}

ExactMatrix ExactMatrix::with_spaces(TensorSpace codomain, TensorSpace domain) const {
  if (codomain.dim() != rows() || domain.dim() != cols())
    throw DimensionMismatch("with_spaces: dimensions differ");
  ExactMatrix m = *this;
  m.codomain_ = std::move(codomain);
  m.domain_ = std::move(domain);
  return m;
}

ExactMatrix ExactMatrix::submatrix(std::span<const std::size_t> rows,
                                   std::span<const std::size_t> cols) const {
  std::unordered_map<std::size_t, std::size_t> local;
  local.reserve(cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) local.emplace(cols[j], j);
  ExactMatrix m(TensorSpace::plain(rows.size()), TensorSpace::plain(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& out = m.rows_[i];
    for (const auto& e : rows_.at(rows[i])) {
      auto it = local.find(e.col);
      if (it != local.end()) out.push_back({it->second, e.value});
    }
    std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
  }
  return m;
}

std::vector<std::vector<Rational>> ExactMatrix::to_dense() const {
  std::vector<std::vector<Rational>> d(rows(), std::vector<Rational>(cols()));
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const auto& e : rows_[i]) d[i][e.col] = e.value;
  return d;
}

ExactMatrix::Builder::Builder(TensorSpace codomain, TensorSpace domain)
    : codomain_(std::move(codomain)), domain_(std::move(domain)), acc_(codomain_.dim()) {}

void ExactMatrix::Builder::add(std::size_t row, std::size_t col, const Rational& value) {
  if (row >= codomain_.dim() || col >= domain_.dim())
    throw DimensionMismatch("Builder::add: (" + std::to_string(row) + ", " + std::to_string(col) +
                            ") outside " + std::to_string(codomain_.dim()) + "x" +
                            std::to_string(domain_.dim()));
  Rational q = value;
  q.canonicalize();  // mpq arithmetic assumes lowest terms
  if (q == 0) return;
  acc_[row][col] += q;
}

ExactMatrix ExactMatrix::Builder::build() && {
  ExactMatrix m(std::move(codomain_), std::move(domain_));
  for (std::size_t i = 0; i < acc_.size(); ++i)
    for (auto& [c, v] : acc_[i])
      if (v != 0) m.rows_[i].push_back({c, std::move(v)});
  return m;
}

Echelon reduced_echelon(const ExactMatrix& m, Strategy strategy) {
  if (strategy == Strategy::FractionFree) {
    auto [pivots, rows] = forward_eliminate<Integer, IntegerOps>(integer_rows(m), m.cols());
    back_eliminate<Integer, IntegerOps>(pivots, rows);
    std::vector<SparseRow<Rational>> q;
    q.reserve(rows.size());
    for (auto& row : rows) {
      SparseRow<Rational> r;
      r.reserve(row.size());
      for (auto& [c, v] : row) r.emplace_back(c, Rational(v));
      q.push_back(std::move(r));
    }
    return finish(m.cols(), std::move(pivots), std::move(q));
  }
  auto [pivots, rows] = forward_eliminate<Rational, RationalOps>(rational_rows(m), m.cols());
  back_eliminate<Rational, RationalOps>(pivots, rows);
  return finish(m.cols(), std::move(pivots), std::move(rows));
}

std::size_t rank(const ExactMatrix& m, Strategy strategy) {
  if (strategy == Strategy::FractionFree)
    return forward_eliminate<Integer, IntegerOps>(integer_rows(m), m.cols()).first.size();
  return forward_eliminate<Rational, RationalOps>(rational_rows(m), m.cols()).first.size();
}

std::vector<Vector> kernel_basis(const ExactMatrix& m, Strategy strategy) {
  const Echelon e = reduced_echelon(m, strategy);
  std::vector<std::ptrdiff_t> free_slot(m.cols(), -1);
  std::vector<std::size_t> free_cols;
  {
    std::size_t p = 0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (p < e.pivots.size() && e.pivots[p] == c) {
        ++p;
        continue;
      }
      free_slot[c] = static_cast<std::ptrdiff_t>(free_cols.size());
      free_cols.push_back(c);
    }
  }
  std::vector<Vector> basis(free_cols.size(), Vector(m.cols()));
  for (std::size_t f = 0; f < free_cols.size(); ++f) basis[f][free_cols[f]] = 1;
  for (std::size_t r = 0; r < e.rows.size(); ++r)
    for (const auto& entry : e.rows[r])
      if (free_slot[entry.col] >= 0) basis[free_slot[entry.col]][e.pivots[r]] = -entry.value;
  return basis;
}

ExactMatrix compose(const ExactMatrix& f, const ExactMatrix& g) {
  check_space(f.domain(), g.codomain(), "compose: domain(f) != codomain(g)");
  ExactMatrix::Builder b(f.codomain(), g.domain());
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (const auto& ef : f.row(i))
      for (const auto& eg : g.row(ef.col)) b.add(i, eg.col, ef.value * eg.value);
  return std::move(b).build();
}

ExactMatrix kron(const ExactMatrix& f, const ExactMatrix& g) {
  ExactMatrix::Builder b(f.codomain().tensor(g.codomain()), f.domain().tensor(g.domain()));
  const std::size_t gr = g.rows(), gc = g.cols();
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (const auto& ef : f.row(i))
      for (std::size_t k = 0; k < gr; ++k)
        for (const auto& eg : g.row(k)) b.add(i * gr + k, ef.col * gc + eg.col, ef.value * eg.value);
  return std::move(b).build();
}

ColumnSpaceResult in_column_space(const ExactMatrix& m, std::span<const Rational> v, Strategy strategy) {
  if (v.size() != m.rows())
    throw DimensionMismatch("in_column_space: vector length " + std::to_string(v.size()) + " vs " +
                            std::to_string(m.rows()) + " rows");
  if (is_zero_vector(v)) return {true, Vector(m.cols())};
  ExactMatrix::Builder b(TensorSpace::plain(m.rows()), TensorSpace::plain(m.cols() + 1));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (const auto& e : m.row(i)) b.add(i, e.col, e.value);
    b.add(i, m.cols(), v[i]);
  }
  const Echelon e = reduced_echelon(std::move(b).build(), strategy);
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return {false, std::nullopt};
  Vector x(m.cols());
  for (std::size_t r = 0; r < e.rows.size(); ++r) {
    const auto& row = e.rows[r];
    if (!row.empty() && row.back().col == m.cols()) x[e.pivots[r]] = row.back().value;
  }
  return {true, std::move(x)};
}

ExactMatrix add(const ExactMatrix& a, const ExactMatrix& b) {
  check_space(a.domain(), b.domain(), "add: domains differ");
  check_space(a.codomain(), b.codomain(), "add: codomains differ");
  ExactMatrix::Builder out(a.codomain(), a.domain());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (const auto& e : a.row(i)) out.add(i, e.col, e.value);
    for (const auto& e : b.row(i)) out.add(i, e.col, e.value);
  }
  return std::move(out).build();
}

ExactMatrix scale(const ExactMatrix& a, const Rational& c) {
  ExactMatrix::Builder out(a.codomain(), a.domain());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (const auto& e : a.row(i)) out.add(i, e.col, e.value * c);
  return std::move(out).build();
}

ExactMatrix from_columns(const TensorSpace& codomain, const std::vector<Vector>& columns) {
  ExactMatrix::Builder b(codomain, TensorSpace::plain(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != codomain.dim()) throw DimensionMismatch("from_columns: column length");
    for (std::size_t i = 0; i < columns[j].size(); ++i) b.add(i, j, columns[j][i]);
  }
  return std::move(b).build();
}

bool is_zero_vector(std::span<const Rational> v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
}

bool is_homogeneous(const ExactMatrix& m, std::span<const int> row_grades,
                    std::span<const int> col_grades) {
  if (row_grades.size() != m.rows() || col_grades.size() != m.cols())
    throw DimensionMismatch("is_homogeneous: grade vector length");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (const auto& e : m.row(i))
      if (row_grades[i] != col_grades[e.col]) return false;
  return true;
}

std::vector<GradedBlock> graded_blocks(std::span<const int> row_grades, std::span<const int> col_grades) {
  std::map<int, GradedBlock> blocks;
  for (std::size_t i = 0; i < row_grades.size(); ++i) {
    auto& b = blocks[row_grades[i]];
    b.grade = row_grades[i];
    b.rows.push_back(i);
  }
  for (std::size_t j = 0; j < col_grades.size(); ++j) {
    auto& b = blocks[col_grades[j]];
    b.grade = col_grades[j];
    b.cols.push_back(j);
  }
  std::vector<GradedBlock> out;
  out.reserve(blocks.size());
  for (auto& [g, b] : blocks) out.push_back(std::move(b));
  return out;
}

std::map<int, std::size_t> blockwise_kernel_dims(const ExactMatrix& m, std::span<const int> row_grades,
                                                 std::span<const int> col_grades, unsigned jobs,
                                                 Strategy strategy) {
  if (!is_homogeneous(m, row_grades, col_grades))
    throw std::invalid_argument("blockwise_kernel_dims: matrix is not homogeneous");
  const auto blocks = graded_blocks(row_grades, col_grades);
  std::vector<std::size_t> dims(blocks.size());
  auto work = [&](std::size_t b) {
    const auto& blk = blocks[b];
    if (blk.cols.empty()) return;
    dims[b] = blk.cols.size() - rank(m.submatrix(blk.rows, blk.cols), strategy);
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(blocks.size())));
  if (threads == 1) {
    for (std::size_t b = 0; b < blocks.size(); ++b) work(b);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t b; (b = next.fetch_add(1)) < blocks.size();) work(b);
      });
    for (auto& th : pool) th.join();
  }
  std::map<int, std::size_t> out;
  for (std::size_t b = 0; b < blocks.size(); ++b)
    if (dims[b]) out[blocks[b].grade] = dims[b];
  return out;
}

std::size_t blockwise_rank(const ExactMatrix& m, std::span<const int> row_grades,
                           std::span<const int> col_grades, unsigned jobs, Strategy strategy) {
  std::size_t nullity = 0;
  for (const auto& [g, d] : blockwise_kernel_dims(m, row_grades, col_grades, jobs, strategy)) nullity += d;
  return m.cols() - nullity;
}

std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace instanton::exactla
