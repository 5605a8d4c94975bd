#include <doctest.h>

#include <random>

#include "instanton/cohomology.hpp"

using namespace instanton;
using cohomology::TruncatedSeries;
using exactla::Rational;

namespace {

// Coefficient of h^j in (1 - h^2)^{-k}: C(k-1+j/2, j/2) for even j.
Rational expected_coefficient(int k, int j) {
  if (j % 2) return 0;
  Rational c = 1;
  const int m = j / 2;
  for (int i = 1; i <= m; ++i) c = c * (k - 1 + i) / i;
  return c;
}

}  // namespace

TEST_CASE("formula spot values") {
  CHECK(cohomology::ext2_dim_formula(2, 3) == 3);
  CHECK(cohomology::ext2_dim_formula(3, 4) == 40);
  CHECK(cohomology::ext1_dim_formula(2, 3) == 57);
  CHECK(cohomology::ext1_dim_formula(2, 4) == 77);
  CHECK(cohomology::ext1_dim_formula(3, 2) == 69);
  CHECK(cohomology::euler_formula(2, 3) == 54);
  for (int k = 1; k <= 20; ++k) {
    CHECK(cohomology::ext2_dim_formula(1, k) == 0);
    CHECK(cohomology::ext1_dim_formula(1, k) == 8 * k - 3);
    CHECK(cohomology::euler_formula(1, k) == 8 * k - 3);
  }
  CHECK(cohomology::binom2(5) == 10);
  CHECK(cohomology::binom2(1) == 0);
}

TEST_CASE("formula triangle") {
  for (int n = 1; n <= 10; ++n)
    for (int k = 2; k <= 20; ++k) {
      CAPTURE(n);
      CAPTURE(k);
      CHECK(cohomology::ext1_dim_formula(n, k) - cohomology::ext2_dim_formula(n, k) ==
            cohomology::euler_formula(n, k));
    }
}

TEST_CASE("truncated series arithmetic") {
  const auto x = TruncatedSeries::linear(5, 1);
  const auto inv = x.inverse();
  CHECK(inv.coefficients() == std::vector<Rational>{1, -1, 1, -1, 1});
  CHECK(x * inv == TruncatedSeries::one(5));
  CHECK(x.pow(3).coefficients() == std::vector<Rational>{1, 3, 3, 1, 0});
  CHECK(x.pow(-2) == inv * inv);
  CHECK(x.pow(0) == TruncatedSeries::one(5));
  CHECK_THROWS(TruncatedSeries(3, {0, 1}).inverse());
  CHECK_THROWS(TruncatedSeries::one(3) * TruncatedSeries::one(4));
  CHECK(TruncatedSeries(4, {1, 0, 2}).to_string() == "1 + 2h^2 mod h^4");
}

TEST_CASE("Chern series") {
  SUBCASE("n=1, k=1") {
    const auto c = cohomology::chern_from_monad(1, 1);
    CHECK(c.coefficients() == std::vector<Rational>{1, 0, 1, 0});
    CHECK(cohomology::chern_check(1, 1));
  }
  SUBCASE("n=2, k=3") {
    CHECK(cohomology::chern_check(2, 3));
    CHECK(cohomology::chern_from_monad(2, 3)[2] == 3);
  }
  SUBCASE("grid") {
    for (int n = 1; n <= 4; ++n)
      for (int k = 1; k <= 8; ++k) {
        CAPTURE(n);
        CAPTURE(k);
        CHECK(cohomology::chern_check(n, k));
        const auto c = cohomology::chern_from_monad(n, k);
        CHECK(c.order() == static_cast<std::size_t>(2 * n + 2));
        for (int j = 0; j < 2 * n + 2; ++j) CHECK(c[j] == expected_coefficient(k, j));
      }
  }
  SUBCASE("rank bookkeeping") {
    for (int n = 1; n <= 5; ++n)
      for (int k = 1; k <= 8; ++k) CHECK(k * (2 * n + 1) - k - 2 * n * (k - 1) == 2 * n);
  }
}

TEST_CASE("full verification") {
  using maps::MonadSpec;
  cohomology::VerifyOptions opts;
  opts.seed = 5;
  opts.samples = 5;
  opts.curve_samples = 5;
  std::mt19937_64 rng(17);

  const auto r = cohomology::full_verification(MonadSpec::random(2, 3, rng), opts);
  CHECK(r.pass());
  CHECK(r.ext2_computed == 3);
  CHECK(r.ext2_formula == 3);
  CHECK(r.character_match);
  CHECK(r.cross_construction);
  CHECK(r.epsilon_in_kernel);
  CHECK(r.reduction_ok);
  CHECK(r.chern_ok);
  CHECK(r.phi_rank == 61);
  CHECK(r.epsilon_rank == 3);
  CHECK(r.monad.complex_zero);
  CHECK(r.monad.fiber_a_full);
  CHECK(r.monad.fiber_b_full);
  CHECK(r.dim_a == 3);
  CHECK(r.dim_c == 8);
  CHECK(r.failures.empty());

  const auto r15 = cohomology::full_verification(MonadSpec::random(1, 5, rng), opts);
  CHECK(r15.pass());
  CHECK(r15.ext2_computed == 0);

  const auto r32 = cohomology::full_verification(MonadSpec::random(3, 2, rng), opts);
  CHECK(r32.pass());
  CHECK(r32.ext2_computed == 0);
  CHECK(r32.epsilon_rank == 0);
  CHECK(maps::epsilon(2, 3).cols() == 0);
}

TEST_CASE("failures are reported, not thrown") {
  // A rank-one alpha violates the subbundle condition everywhere.
  maps::MonadSpec s{2, 3, {}};
  for (int j = 0; j < 9; ++j) s.alpha.push_back(1);
  cohomology::VerifyOptions opts;
  opts.samples = 3;
  opts.curve_samples = 2;
  cohomology::DimensionReport r;
  CHECK_NOTHROW(r = cohomology::full_verification(s, opts));
  CHECK_FALSE(r.pass());
  CHECK_FALSE(r.monad.fiber_a_full);
  CHECK(r.monad.fiber_a_failures == 5);
  CHECK(r.ext2_computed == 3);
  CHECK(r.failures.size() == 1);
}

TEST_CASE("verification is deterministic in the seed") {
  std::mt19937_64 a(3), b(3);
  cohomology::VerifyOptions opts;
  opts.seed = 9;
  opts.samples = 4;
  const auto r1 = cohomology::full_verification(maps::MonadSpec::random(2, 4, a), opts);
  opts.jobs = 3;
  const auto r2 = cohomology::full_verification(maps::MonadSpec::random(2, 4, b), opts);
  CHECK(r1.alpha == r2.alpha);
  CHECK(r1.phi_rank == r2.phi_rank);
  CHECK(r1.failures == r2.failures);
  CHECK(cohomology::cell_seed(1, 2, 3) == cohomology::cell_seed(1, 2, 3));
  CHECK(cohomology::cell_seed(1, 2, 3) != cohomology::cell_seed(1, 3, 2));
  CHECK(cohomology::cell_seed(1, 2, 3) != cohomology::cell_seed(2, 2, 3));
}
