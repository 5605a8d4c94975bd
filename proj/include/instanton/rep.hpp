#pragma once

// SL(2)/GL(2) representation spaces and the equivariant maps between them.
//
// Conventions: s has torus weight +1 and t weight -1; Lambda^2 U is
// trivialized by s^t and dropped from every space; a dual map is the
// transposed matrix.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "instanton/exactla.hpp"
#include "instanton/space.hpp"

namespace instanton::rep {

using exactla::ExactMatrix;

TensorSpace build_space(std::vector<Factor> factors);

// beta: S_{k-1} (x) S_{n-1} -> S_k (x) S_n, f (x) g -> sf (x) tg - tf (x) sg.
ExactMatrix cg_beta(int k, int n);
// mu: S_k (x) S_n -> S_{k+n}, multiplication.
ExactMatrix cg_mu(int k, int n);

// beta tensored with U: S_{k-1} (x) V_{n-1} -> S_k (x) V_n.
ExactMatrix cg_beta_twisted(int k, int n);
// mu tensored with U: S_k (x) V_n -> V_{k+n}.
ExactMatrix cg_mu_twisted(int k, int n);

// sigma: Lambda^2 V_m -> V_m (x) V_m, v^w -> v(x)w - w(x)v.
ExactMatrix desym_sigma(int m);
// iota: S^2 V_m -> V_m (x) V_m, v.w -> v(x)w + w(x)v.
ExactMatrix sym_iota(int m);
// Projection V_m (x) V_m -> S^2 V_m, e_i (x) e_j -> e_i.e_j.
ExactMatrix sym_projection(int m);

// Permutation of tensor factors: factor f of the source lands in position
// perm[f] of the target.
ExactMatrix factor_permutation(const TensorSpace& source, const std::vector<std::size_t>& perm);

// Laurent polynomial in z: weight -> multiplicity.
class Character {
 public:
  Character() = default;
  explicit Character(std::map<int, std::int64_t> coeffs);

  static Character irreducible(int m);  // character of S_m

  const std::map<int, std::int64_t>& coefficients() const { return coeffs_; }
  std::int64_t at(int w) const;
  std::int64_t dimension() const;
  bool is_palindromic() const;
  bool is_nonnegative() const;
  bool empty() const { return coeffs_.empty(); }

  Character operator+(const Character& o) const;
  Character operator-(const Character& o) const;
  Character operator*(const Character& o) const;
  // z -> z^p (Adams operation), used for S^2 and Lambda^2 of arbitrary characters.
  Character adams(int p) const;
  Character dual() const;
  Character sym2() const;
  Character wedge2() const;

  std::string to_string() const;
  bool operator==(const Character&) const = default;

 private:
  void normalize();
  std::map<int, std::int64_t> coeffs_;
};

Character character(const TensorSpace& space);
Character character_of_weights(const std::vector<int>& weights);

class NotACharacter : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Multiplicities of the irreducibles S_m, keyed by m.
std::map<int, std::int64_t> decompose_character(const Character& c);
std::string format_decomposition(const std::map<int, std::int64_t>& irreps);

}  // namespace instanton::rep
