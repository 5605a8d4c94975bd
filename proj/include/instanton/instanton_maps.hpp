#pragma once

// Linear maps attached to a special symplectic instanton monad on P(V_n),
// V_n = U (x) S^n U, and to the operator whose cokernel is Ext^2(E, E).
//
//   A = S_{k-1},  B = S_{k-1}^v,  C = S_{k-2}^v (x) V_{n-1}^v
//   b     : B (x) V_n^v -> C                          transpose of twisted beta
//   a     : A -> B (x) Lambda^2 V_n^v                 kappa o catalecticant
//   Phi   : B (x) B (x) Lambda^2 V_n^v -> C (x) C     (b (x) b) o (id (x) sigma)
//   Phi^v : S_{k-2}^{(x)2} (x) V_{n-1}^{(x)2} -> S_{k-1}^{(x)2} (x) Lambda^2 V_n
//   eps   : S_{k-3}^{(x)2} (x) S^2 V_{n-2} -> domain of Phi^v, image = Ker Phi^v
//
// C (x) C is presented with factor order S, S, V, V so that transpose(Phi)
// and Phi^v share bases.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "instanton/exactla.hpp"
#include "instanton/rep.hpp"

namespace instanton::maps {

using exactla::ExactMatrix;
using exactla::Rational;
using exactla::Vector;
using rep::TensorSpace;

class InvalidSpec : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct MonadSpec {
  int n = 1;
  int k = 2;
  // Coefficients of alpha in S_{2n+2k-2}^v on the dual monomial basis.
  std::vector<Rational> alpha;

  static std::size_t alpha_length(int n, int k) { return static_cast<std::size_t>(2 * n + 2 * k - 1); }
  // Throws InvalidSpec.
  void validate() const;
  // Integer coefficients uniform in [-10, 10], redrawn while all zero.
  static MonadSpec random(int n, int k, std::mt19937_64& rng);
};

struct MonadMatrices {
  int n = 1;
  int k = 2;
  ExactMatrix a;
  ExactMatrix b;

  struct Dims {
    std::size_t a, b, c;
  };
  Dims dims() const;
};

ExactMatrix special_b(int k, int n);
ExactMatrix catalecticant(const MonadSpec& spec);
// d: S_{k-1} (x) Lambda^2 V_n -> S_{2n+k-1}, (u(x)g)^(v(x)h) (x) f -> det(u,v) fgh.
ExactMatrix kappa_dual(int k, int n);
ExactMatrix kappa(int k, int n);
ExactMatrix special_a(const MonadSpec& spec);
MonadMatrices special_monad(const MonadSpec& spec);

// A -> B (x) Lambda^2 V^v -> B (x) V^v (x) V^v -> C (x) V^v.
ExactMatrix monad_composite(const MonadMatrices& m);
bool monad_complex_check(const MonadMatrices& m);

// Lambda^2 V_n^v -> V_n^v, contraction with v.
ExactMatrix wedge_contraction(int n, std::span<const Rational> v);
// Basis of the annihilator of v as columns in V_n^v.
ExactMatrix annihilator(int n, std::span<const Rational> v);

// Rank of a_v : A -> B (x) V^v. Subbundle at [v] iff rank == k.
std::size_t fiber_check_a(const MonadMatrices& m, std::span<const Rational> v);
// Rank of b on B (x) ann(v). Surjective at [v] iff rank == 2n(k-1).
std::size_t fiber_check_b(int k, int n, std::span<const Rational> v);

ExactMatrix phi(int k, int n);
ExactMatrix phi_dual_explicit(int k, int n);
ExactMatrix epsilon_prime(int k, int n);
// The same map as beta' (x) beta' with factors reordered.
ExactMatrix epsilon_prime_via_kron(int k, int n);
ExactMatrix epsilon(int k, int n);

// Index tuple of a basis vector of S_{k-2} (x) S_{k-2} (x) V_{n-1} (x) V_{n-1}.
struct PhiDualIndex {
  int alpha;
  int beta;
  bool mu_bar;
  int mu;
  bool nu_bar;
  int nu;
  std::string to_string() const;
};
PhiDualIndex split_phi_dual_index(int k, int n, std::size_t index);

class NotInKernel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ReductionStuck : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReductionStep {
  std::size_t leading;        // index in the domain of Phi^v
  PhiDualIndex leading_tuple;
  std::size_t preimage_index; // basis index in the domain of eps
  Rational coefficient;       // multiple of eps(basis vector) subtracted
};

struct ReductionCertificate {
  std::vector<ReductionStep> steps;
  Vector preimage;  // eps * preimage == xi
};

// Lexicographic leading-term reduction of xi in Ker Phi^v modulo Im eps.
ReductionCertificate reduce_mod_epsilon(int k, int n, std::span<const Rational> xi);

// Leading-coefficient shapes a kernel element may have. Returns an empty
// string when the shape is allowed, otherwise which case rules it out.
std::string reduction_shape_violation(int k, int n, std::span<const Rational> xi);

enum class CoefficientReading { Corrected, AsPrinted };

// Coefficient of Phi^v(xi) at g_alpha (x) g_beta (x) y_mu ^ ybar_nu from the
// coefficient expansion of xi.
Rational kernel_coefficient(int k, int n, std::span<const Rational> xi, int alpha, int beta, int mu,
                             int nu, CoefficientReading reading = CoefficientReading::Corrected);

struct CoefficientMismatch {
  int alpha, beta, mu, nu;
  Rational matrix_value;
  Rational formula_value;
};
std::vector<CoefficientMismatch> coefficient_mismatches(int k, int n, std::span<const Rational> xi,
                                                CoefficientReading reading);

struct KernelCharacter {
  rep::Character kernel;
  rep::Character expected;
  bool match = false;
};
// Character of Ker Phi^v from per-weight kernel dimensions, against the
// character of S_{k-3} (x) S_{k-3} (x) S^2 V_{n-2}.
KernelCharacter ext2_character(int k, int n, unsigned jobs = 1);
bool ext2_character_check(int k, int n, unsigned jobs = 1);

// Sampling helpers for fiber checks.
Vector random_point(int n, std::mt19937_64& rng);
// u (x) u^n for u = s + lambda t.
Vector curve_point(int n, const Rational& lambda);
// 0, 1, -1, 2, -2, ...
std::int64_t curve_parameter(std::size_t i);

}  // namespace instanton::maps
