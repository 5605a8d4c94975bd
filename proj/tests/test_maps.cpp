#include <doctest.h>

#include <random>

#include "instanton/cohomology.hpp"
#include "instanton/instanton_maps.hpp"
#include "instanton/rep.hpp"
#include "oracle.hpp"

using namespace instanton;
using exactla::ExactMatrix;
using exactla::Rational;
using exactla::Vector;
using maps::MonadSpec;
using rep::Character;
using rep::Factor;
using rep::TensorSpace;

namespace {

MonadSpec delta_spec(int n, int k) {
  MonadSpec s{n, k, std::vector<Rational>(MonadSpec::alpha_length(n, k))};
  s.alpha[0] = 1;
  return s;
}

// alpha_j = lambda^j: the catalecticant is the outer product of (lambda^i) and (lambda^j).
MonadSpec power_spec(int n, int k, const Rational& lambda) {
  MonadSpec s{n, k, {}};
  Rational p = 1;
  for (std::size_t j = 0; j < MonadSpec::alpha_length(n, k); ++j, p *= lambda) s.alpha.push_back(p);
  return s;
}

Vector random_vector(std::mt19937_64& rng, std::size_t d) {
  std::uniform_int_distribution<int> dist(-4, 4);
  Vector v(d);
  for (auto& x : v) x = dist(rng);
  return v;
}

bool homogeneous(const ExactMatrix& m) {
  const auto rw = m.codomain().weights();
  const auto cw = m.domain().weights();
  return exactla::is_homogeneous(m, rw, cw);
}

Character expected_ext2(int k, int n) {
  if (k < 3 || n < 2) return Character();
  const Character s = Character::irreducible(k - 3);
  return s * s * (Character::irreducible(1) * Character::irreducible(n - 2)).sym2();
}

}  // namespace

TEST_CASE("MonadSpec validation") {
  CHECK_NOTHROW(delta_spec(2, 3).validate());
  MonadSpec zero{2, 3, std::vector<Rational>(9)};
  CHECK_THROWS_WITH_AS(zero.validate(), "alpha must be nonzero", maps::InvalidSpec);
  MonadSpec short_alpha{2, 3, {1, 2}};
  CHECK_THROWS_AS(short_alpha.validate(), maps::InvalidSpec);
  CHECK_THROWS_AS((MonadSpec{0, 3, {1}}).validate(), maps::InvalidSpec);
  CHECK_THROWS_AS((MonadSpec{1, 1, {1, 2}}).validate(), maps::InvalidSpec);
  std::mt19937_64 rng(1);
  const auto r = MonadSpec::random(3, 4, rng);
  CHECK(r.alpha.size() == 13);
  CHECK_NOTHROW(r.validate());
}

TEST_CASE("special b") {
  const auto b21 = maps::special_b(2, 1);
  CHECK(b21.rows() == 2);
  CHECK(b21.cols() == 8);
  CHECK(exactla::rank(b21) == 2);
  for (int k = 2; k <= 5; ++k)
    for (int n = 1; n <= 5; ++n) {
      CAPTURE(k);
      CAPTURE(n);
      const auto b = maps::special_b(k, n);
      const std::size_t c = static_cast<std::size_t>(2 * n * (k - 1));
      CHECK(b.rows() == c);
      CHECK(b.cols() == static_cast<std::size_t>(k * 2 * (n + 1)));
      CHECK(exactla::rank(b) == c);
      CHECK(exactla::kernel_basis(b).size() == b.cols() - c);
      CHECK(homogeneous(b));
      CHECK(b == rep::cg_beta_twisted(k - 1, n).transpose());
    }
}

TEST_CASE("catalecticant") {
  const auto d = maps::catalecticant(delta_spec(2, 3));
  CHECK(d.rows() == 7);
  CHECK(d.cols() == 3);
  CHECK(d.nnz() == 1);
  CHECK(d.at(0, 0) == 1);

  for (const Rational lambda : {Rational(2), Rational(-1, 3)}) CHECK(exactla::rank(maps::catalecticant(power_spec(2, 4, lambda))) == 1);

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = MonadSpec::random(2, 3, rng);
    const auto c = maps::catalecticant(s);
    for (std::size_t i = 0; i < c.rows(); ++i)
      for (std::size_t j = 0; j < c.cols(); ++j) CHECK(c.at(i, j) == s.alpha[i + j]);
    CHECK(exactla::rank(c) == 3);
  }
}

TEST_CASE("kappa dual") {
  SUBCASE("f = s^{k-1}, (s(x)s^n) ^ (t(x)s^n) -> s^{2n+k-1}") {
    for (int k = 1; k <= 4; ++k)
      for (int n = 1; n <= 3; ++n) {
        const auto d = maps::kappa_dual(k, n);
        const std::size_t vd = rep::v_dim(n);
        const std::size_t col = d.domain().index({0, rep::strict_pair_index(vd, 0, static_cast<std::size_t>(n + 1))});
        CHECK(d.at(0, col) == 1);
        CHECK(d.transpose().row(col).size() == 1);
      }
  }
  SUBCASE("(s(x)g) ^ (s(x)h) -> 0") {
    const int k = 3, n = 2;
    const auto d = maps::kappa_dual(k, n);
    const std::size_t vd = rep::v_dim(n);
    const auto dt = d.transpose();
    for (std::size_t f = 0; f < 3; ++f)
      for (std::size_t i = 0; i <= 2; ++i)
        for (std::size_t j = i + 1; j <= 2; ++j) {
          CHECK(dt.row(d.domain().index({f, rep::strict_pair_index(vd, i, j)})).empty());
          CHECK(dt.row(d.domain().index({f, rep::strict_pair_index(vd, 3 + i, 3 + j)})).empty());
        }
  }
  SUBCASE("surjective and homogeneous") {
    for (int k = 1; k <= 5; ++k)
      for (int n = 1; n <= 5; ++n) {
        const auto d = maps::kappa_dual(k, n);
        CHECK(exactla::rank(d) == static_cast<std::size_t>(2 * n + k));
        CHECK(homogeneous(d));
        CHECK(maps::kappa(k, n) == d.transpose());
      }
  }
}

TEST_CASE("special a") {
  CHECK(exactla::rank(maps::special_a(delta_spec(2, 3))) <= 1);
  CHECK(exactla::rank(maps::special_a(delta_spec(2, 3))) == 1);
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = MonadSpec::random(2, 3, rng);
    const auto a = maps::special_a(s);
    CHECK(a.rows() == 3 * 15);
    CHECK(a.cols() == 3);
    CHECK(exactla::rank(a) == 3);
  }
}

TEST_CASE("monad complex condition") {
  std::mt19937_64 rng(2024);
  for (int n = 1; n <= 3; ++n)
    for (int k = 2; k <= 4; ++k) {
      CAPTURE(n);
      CAPTURE(k);
      for (int trial = 0; trial < 3; ++trial) {
        const auto m = maps::special_monad(MonadSpec::random(n, k, rng));
        const auto dims = m.dims();
        CHECK(dims.a == static_cast<std::size_t>(k));
        CHECK(dims.b == static_cast<std::size_t>(k));
        CHECK(dims.c == static_cast<std::size_t>(2 * n * (k - 1)));
        CHECK(maps::monad_complex_check(m));
      }
    }
  SUBCASE("a = 0") {
    auto m = maps::special_monad(delta_spec(2, 3));
    m.a = ExactMatrix(m.a.codomain(), m.a.domain());
    CHECK(maps::monad_complex_check(m));
  }
  SUBCASE("perturbed a") {
    auto m = maps::special_monad(MonadSpec::random(2, 3, rng));
    CHECK(maps::monad_complex_check(m));
    int broken = 0;
    for (std::size_t row = 0; row < m.a.rows(); row += 7) {
      auto mutated = m;
      ExactMatrix::Builder b(m.a.codomain(), m.a.domain());
      for (std::size_t i = 0; i < m.a.rows(); ++i)
        for (const auto& e : m.a.row(i)) b.add(i, e.col, e.value);
      b.add(row, 0, 1);
      mutated.a = std::move(b).build();
      if (!maps::monad_complex_check(mutated)) ++broken;
    }
    CHECK(broken > 0);
  }
}

TEST_CASE("fiber checks") {
  std::mt19937_64 rng(31);
  const auto m = maps::special_monad(MonadSpec::random(2, 3, rng));
  SUBCASE("curve points") {
    for (std::size_t i = 0; i < 20; ++i) {
      const auto v = maps::curve_point(2, maps::curve_parameter(i));
      CHECK(maps::fiber_check_a(m, v) == 3);
      CHECK(maps::fiber_check_b(3, 2, v) == 8);
    }
  }
  SUBCASE("random points") {
    for (int i = 0; i < 100; ++i) CHECK(maps::fiber_check_a(m, maps::random_point(2, rng)) == 3);
    for (int n = 1; n <= 3; ++n)
      for (int k = 2; k <= 4; ++k)
        for (int i = 0; i < 100; ++i)
          CHECK(maps::fiber_check_b(k, n, maps::random_point(n, rng)) == static_cast<std::size_t>(2 * n * (k - 1)));
  }
  SUBCASE("rank-deficient alpha is detected") {
    const auto low = maps::special_monad(power_spec(2, 3, 2));
    std::size_t deficient = 0;
    for (int i = 0; i < 10; ++i)
      if (maps::fiber_check_a(low, maps::random_point(2, rng)) < 3) ++deficient;
    CHECK(deficient == 10);
  }
  SUBCASE("single points") {
    CHECK(maps::fiber_check_b(2, 1, Vector{1, 0, 0, 0}) == 2);
    CHECK_THROWS(maps::fiber_check_b(2, 1, Vector{0, 0, 0, 0}));
    CHECK_THROWS(maps::fiber_check_a(m, Vector(6)));
  }
  SUBCASE("curve points are u^n") {
    // n = 2, lambda = 2: (s+2t)^2 = s^2 + 4st + 4t^2, then s(x) and lambda t(x).
    CHECK(maps::curve_point(2, 2) == Vector{1, 4, 4, 2, 8, 8});
    CHECK(maps::curve_point(1, 0) == Vector{1, 0, 0, 0});
    CHECK(maps::curve_parameter(0) == 0);
    CHECK(maps::curve_parameter(1) == 1);
    CHECK(maps::curve_parameter(2) == -1);
    CHECK(maps::curve_parameter(3) == 2);
  }
}

TEST_CASE("wedge contraction and annihilator") {
  const Vector v{1, 2, 0, -1};
  const auto w = maps::wedge_contraction(1, v);
  CHECK(exactla::rank(w) == 3);
  const auto ann = maps::annihilator(1, v);
  CHECK(exactla::rank(ann) == 3);
  // Every column of the annihilator kills v.
  const auto annt = ann.transpose();
  for (std::size_t j = 0; j < ann.cols(); ++j) {
    Rational pairing = 0;
    for (const auto& e : annt.row(j)) pairing += e.value * v[e.col];
    CHECK(pairing == 0);
  }
}

TEST_CASE("Phi^v explicit formula on a basis vector") {
  // k=2, n=1: 1 (x) 1 (x) (s(x)1) (x) (s(x)1)
  const auto pd = maps::phi_dual_explicit(2, 1);
  CHECK(pd.rows() == 2 * 2 * 6);
  CHECK(pd.cols() == 4);
  const auto image = pd.apply(Vector{1, 0, 0, 0});
  Vector expected(24);
  // x_0 ^ x_1 has pair index 0; the (s, t) and (t, s) slots of S_1 (x) S_1.
  expected[pd.codomain().index({0, 1, 0})] = 1;
  expected[pd.codomain().index({1, 0, 0})] = -1;
  CHECK(image == expected);
}

TEST_CASE("Phi cross-construction") {
  for (int n = 1; n <= 3; ++n)
    for (int k = 2; k <= 4; ++k) {
      CAPTURE(n);
      CAPTURE(k);
      const auto p = maps::phi(k, n);
      const auto pd = maps::phi_dual_explicit(k, n);
      CHECK(p.transpose() == pd);
      CHECK(homogeneous(pd));
      const std::size_t r = exactla::rank(pd);
      CHECK(static_cast<std::int64_t>(pd.cols() - r) == cohomology::ext2_dim_formula(n, k));
      if (k == 2) CHECK(r == pd.cols());
    }
}

TEST_CASE("Phi^v kernel matches the dimension of its predicted representation") {
  for (int n = 1; n <= 3; ++n)
    for (int k = 2; k <= 6; ++k) {
      CAPTURE(n);
      CAPTURE(k);
      const auto pd = maps::phi_dual_explicit(k, n);
      const auto rw = pd.codomain().weights();
      const auto cw = pd.domain().weights();
      const std::size_t r = exactla::blockwise_rank(pd, rw, cw, 2);
      CHECK(static_cast<std::int64_t>(pd.cols() - r) == expected_ext2(k, n).dimension());
    }
}

TEST_CASE("kernel coefficient formula") {
  std::mt19937_64 rng(32);
  const int k = 3, n = 2;
  const auto pd = maps::phi_dual_explicit(k, n);
  std::size_t printed_mismatches = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto xi = random_vector(rng, pd.cols());
    CHECK(maps::coefficient_mismatches(k, n, xi, maps::CoefficientReading::Corrected).empty());
    printed_mismatches += maps::coefficient_mismatches(k, n, xi, maps::CoefficientReading::AsPrinted).size();
  }
  // The literal reading disagrees with the displayed map on generic input.
  CHECK(printed_mismatches > 0);
  // Larger cell.
  const auto xi = random_vector(rng, maps::phi_dual_explicit(5, 3).cols());
  CHECK(maps::coefficient_mismatches(5, 3, xi, maps::CoefficientReading::Corrected).empty());
}

TEST_CASE("epsilon") {
  SUBCASE("hand expansion at k=3, n=2") {
    const auto eps = maps::epsilon(3, 2);
    REQUIRE(eps.cols() == 3);
    const auto col = eps.apply(Vector{1, 0, 0});  // e_0 (x) e_0 (x) u_0.u_0
    const TensorSpace& cod = eps.codomain();
    // x_0 = s(x)s, x_1 = s(x)t in V_1.
    Vector expected(cod.dim());
    expected[cod.index({0, 0, 1, 1})] = 2;
    expected[cod.index({0, 1, 0, 1})] = -2;
    expected[cod.index({1, 0, 1, 0})] = -2;
    expected[cod.index({1, 1, 0, 0})] = 2;
    CHECK(col == expected);
    CHECK(exactla::is_zero_vector(maps::phi_dual_explicit(3, 2).apply(col)));
  }
  SUBCASE("epsilon' equals the reordered tensor square of beta") {
    for (int n = 2; n <= 3; ++n)
      for (int k = 3; k <= 5; ++k) CHECK(maps::epsilon_prime(k, n) == maps::epsilon_prime_via_kron(k, n));
  }
  SUBCASE("image is the kernel") {
    for (int n = 1; n <= 3; ++n)
      for (int k = 2; k <= 6; ++k) {
        CAPTURE(n);
        CAPTURE(k);
        const auto eps = maps::epsilon(k, n);
        const auto pd = maps::phi_dual_explicit(k, n);
        CHECK(eps.rows() == pd.cols());
        CHECK(exactla::compose(pd, eps).is_zero());
        const std::size_t r = exactla::rank(eps);
        CHECK(r == eps.cols());
        CHECK(static_cast<std::int64_t>(r) == cohomology::ext2_dim_formula(n, k));
        if (k < 3 || n < 2) CHECK(eps.cols() == 0);
        CHECK(homogeneous(eps));
      }
  }
}

TEST_CASE("structured reduction") {
  SUBCASE("zero") {
    const auto pd = maps::phi_dual_explicit(3, 2);
    const auto cert = maps::reduce_mod_epsilon(3, 2, Vector(pd.cols()));
    CHECK(cert.steps.empty());
    CHECK(exactla::is_zero_vector(cert.preimage));
  }
  SUBCASE("round trip through eps") {
    std::mt19937_64 rng(41);
    const auto eps = maps::epsilon(4, 2);
    for (int trial = 0; trial < 10; ++trial) {
      const auto p = random_vector(rng, eps.cols());
      const auto xi = eps.apply(p);
      const auto cert = maps::reduce_mod_epsilon(4, 2, xi);
      CHECK(eps.apply(cert.preimage) == xi);
      CHECK(cert.preimage == p);
    }
  }
  SUBCASE("kernel basis at n=2, k=3") {
    const auto eps = maps::epsilon(3, 2);
    std::vector<Vector> pre;
    for (const auto& xi : exactla::kernel_basis(maps::phi_dual_explicit(3, 2))) {
      const auto cert = maps::reduce_mod_epsilon(3, 2, xi);
      CHECK_FALSE(cert.steps.empty());
      CHECK(eps.apply(cert.preimage) == xi);
      pre.push_back(cert.preimage);
    }
    CHECK(exactla::rank(exactla::from_columns(eps.domain(), pre)) == 3);
  }
  SUBCASE("random kernel elements, reduction shapes") {
    std::mt19937_64 rng(43);
    for (const auto [n, k] : {std::pair{2, 4}, std::pair{3, 3}, std::pair{3, 5}}) {
      const auto basis = exactla::kernel_basis(maps::phi_dual_explicit(k, n));
      for (const auto& xi : basis) CHECK(maps::reduction_shape_violation(k, n, xi).empty());
      for (int trial = 0; trial < 5; ++trial) {
        Vector xi(basis[0].size());
        const auto coeffs = random_vector(rng, basis.size());
        for (std::size_t b = 0; b < basis.size(); ++b)
          for (std::size_t i = 0; i < xi.size(); ++i) xi[i] += coeffs[b] * basis[b][i];
        CHECK(maps::reduction_shape_violation(k, n, xi).empty());
        const auto cert = maps::reduce_mod_epsilon(k, n, xi);
        CHECK(maps::epsilon(k, n).apply(cert.preimage) == xi);
      }
    }
  }
  SUBCASE("rejects vectors outside the kernel") {
    Vector xi(maps::phi_dual_explicit(3, 2).cols());
    xi[0] = 1;
    CHECK_THROWS_AS(maps::reduce_mod_epsilon(3, 2, xi), maps::NotInKernel);
    CHECK_THROWS_AS(maps::reduce_mod_epsilon(3, 2, Vector{1}), exactla::DimensionMismatch);
  }
}

TEST_CASE("kernel character") {
  CHECK(maps::ext2_character(3, 2).kernel == Character::irreducible(2));
  for (int k = 2; k <= 6; ++k) CHECK(maps::ext2_character(k, 1).kernel.empty());
  for (int n = 1; n <= 3; ++n) CHECK(maps::ext2_character(2, n).kernel.empty());
  for (int n = 1; n <= 3; ++n)
    for (int k = 2; k <= 5; ++k) {
      const auto kc = maps::ext2_character(k, n, 2);
      CHECK(kc.kernel == expected_ext2(k, n));
      CHECK(kc.match);
      CHECK(kc.kernel.is_palindromic());
    }
}

TEST_CASE("Phi^v index decoding") {
  const auto t = maps::split_phi_dual_index(4, 3, maps::phi_dual_explicit(4, 3).domain().index({2, 1, 4, 0}));
  CHECK(t.alpha == 2);
  CHECK(t.beta == 1);
  CHECK(t.mu_bar);
  CHECK(t.mu == 1);
  CHECK_FALSE(t.nu_bar);
  CHECK(t.nu == 0);
}
