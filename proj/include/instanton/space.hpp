#pragma once

// Tensor spaces built from SL(2)/GL(2) representations with a canonical
// ordered basis.
//
// Elementary factors:
//   S(m)       basis e_i = s^{m-i} t^i, i = 0..m                 weight m-2i
//   V(m)       U (x) S(m); x_mu = s (x) e_mu first, then
//              xbar_mu = t (x) e_mu                               weight m+1-2mu / m-1-2mu
//   Wedge2V(m) pairs (i,j), i < j, of V(m) basis indices, lexicographic
//   Sym2V(m)   pairs (i,j), i <= j, of V(m) basis indices, lexicographic
//   Plain(d)   unstructured K^d, every basis vector of weight 0
//
// A tensor index is the mixed-radix composition of factor indices, row-major
// in factor order (the last factor varies fastest). Dual factors share the
// index set of the underlying factor and carry negated weights.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace instanton::rep {

enum class FactorKind { Sym, V, Wedge2V, Sym2V, Plain };

struct Factor {
  FactorKind kind = FactorKind::Sym;
  int m = 0;
  bool dual = false;

  static Factor S(int m) { return {FactorKind::Sym, m, false}; }
  static Factor V(int m) { return {FactorKind::V, m, false}; }
  static Factor Wedge2V(int m) { return {FactorKind::Wedge2V, m, false}; }
  static Factor Sym2V(int m) { return {FactorKind::Sym2V, m, false}; }
  static Factor Plain(int d) { return {FactorKind::Plain, d, false}; }

  Factor dualized() const { return {kind, m, !dual}; }

  std::size_t dim() const;
  int weight(std::size_t i) const;
  std::string label() const;

  bool operator==(const Factor&) const = default;
};

// Number of basis vectors of V(m); zero for m < 0.
std::size_t v_dim(int m);

// Index of the pair (i, j) in the lexicographic list of pairs over d
// elements, strict (i < j) or weak (i <= j).
std::size_t strict_pair_index(std::size_t d, std::size_t i, std::size_t j);
std::size_t weak_pair_index(std::size_t d, std::size_t i, std::size_t j);
std::pair<std::size_t, std::size_t> strict_pair(std::size_t d, std::size_t index);
std::pair<std::size_t, std::size_t> weak_pair(std::size_t d, std::size_t index);

class TensorSpace {
 public:
  // The empty factor list is the one-dimensional ground field.
  TensorSpace() = default;
  explicit TensorSpace(std::vector<Factor> factors);
  TensorSpace(std::initializer_list<Factor> factors)
      : TensorSpace(std::vector<Factor>(factors)) {}

  static TensorSpace plain(std::size_t d) {
    return TensorSpace({Factor::Plain(static_cast<int>(d))});
  }

  std::size_t dim() const { return dim_; }
  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t factor_dim(std::size_t f) const { return dims_[f]; }

  std::size_t index(std::span<const std::size_t> parts) const;
  std::size_t index(std::initializer_list<std::size_t> parts) const {
    return index(std::span<const std::size_t>(parts.begin(), parts.size()));
  }
  std::vector<std::size_t> split(std::size_t index) const;

  int weight(std::size_t index) const;
  std::vector<int> weights() const;

  TensorSpace dual() const;
  // Concatenation of factor lists: the space of the Kronecker product.
  TensorSpace tensor(const TensorSpace& other) const;

  std::string label() const;

  bool operator==(const TensorSpace& other) const {
    return factors_ == other.factors_;
  }

 private:
  std::vector<Factor> factors_;
  std::vector<std::size_t> dims_;
  std::size_t dim_ = 1;
};

}  // namespace instanton::rep
