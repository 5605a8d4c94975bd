#include "instanton/cohomology.hpp"

#include <chrono>
#include <random>
#include <sstream>
#include <stdexcept>

namespace instanton::cohomology {

using exactla::ExactMatrix;

TruncatedSeries::TruncatedSeries(std::size_t order, std::vector<Rational> coeffs) : coeffs_(order) {
  for (std::size_t i = 0; i < std::min(order, coeffs.size()); ++i) coeffs_[i] = coeffs[i];
}

TruncatedSeries TruncatedSeries::linear(std::size_t order, const Rational& c) {
  return TruncatedSeries(order, {Rational(1), c});
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
  if (order() != o.order()) throw std::invalid_argument("TruncatedSeries: order mismatch");
  TruncatedSeries out(order());
  for (std::size_t i = 0; i < order(); ++i) {
    if (coeffs_[i] == 0) continue;
    for (std::size_t j = 0; i + j < order(); ++j) out.coeffs_[i + j] += coeffs_[i] * o.coeffs_[j];
  }
  return out;
}

// Recurrence: b_0 = 1/a_0, b_m = -(1/a_0) sum_{i=1..m} a_i b_{m-i}.
TruncatedSeries TruncatedSeries::inverse() const {
  if (order() == 0) return *this;
  if (coeffs_[0] == 0) throw std::domain_error("TruncatedSeries::inverse: constant term is zero");
  TruncatedSeries out(order());
  const Rational inv0 = 1 / coeffs_[0];
  out.coeffs_[0] = inv0;
  for (std::size_t m = 1; m < order(); ++m) {
    Rational acc = 0;
    for (std::size_t i = 1; i <= m; ++i) acc += coeffs_[i] * out.coeffs_[m - i];
    out.coeffs_[m] = -inv0 * acc;
  }
  return out;
}

TruncatedSeries TruncatedSeries::pow(std::int64_t e) const {
  TruncatedSeries base = e < 0 ? inverse() : *this;
  std::uint64_t k = e < 0 ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
  TruncatedSeries out = one(order());
  while (k) {
    if (k & 1) out = out * base;
    base = base * base;
    k >>= 1;
  }
  return out;
}

std::string TruncatedSeries::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << coeffs_[i].get_str();
    if (i) os << "h^" << i;
  }
  if (first) os << "0";
  os << " mod h^" << coeffs_.size();
  return os.str();
}

std::int64_t binom2(std::int64_t m) { return m * (m - 1) / 2; }

std::int64_t ext2_dim_formula(int n, int k) {
  const std::int64_t d = k - 2;
  return d * d * binom2(2 * n - 1);
}

std::int64_t ext1_dim_formula(int n, int k) {
  return 4 * static_cast<std::int64_t>(k) * (3 * n - 1) + static_cast<std::int64_t>(2 * n - 5) * (2 * n - 1);
}

std::int64_t euler_formula(int n, int k) {
  const std::int64_t kk = k, nn = n;
  return -kk * kk * binom2(2 * nn - 1) + 8 * kk * nn * nn - 4 * nn * nn + 1;
}

// c(Omega^1(1))^k c(O(-1))^{-k} c(O)^{-2n(k-1)} with c(Omega^1(1)) = (1+h)^{-1}.
TruncatedSeries chern_from_monad(int n, int k) {
  const std::size_t order = static_cast<std::size_t>(2 * n + 2);
  const TruncatedSeries omega = TruncatedSeries::linear(order, 1).inverse();
  const TruncatedSeries line_minus = TruncatedSeries::linear(order, -1);
  const TruncatedSeries trivial = TruncatedSeries::one(order);
  return omega.pow(k) * line_minus.pow(-k) * trivial.pow(-2 * static_cast<std::int64_t>(n) * (k - 1));
}

TruncatedSeries chern_expected(int n, int k) {
  const std::size_t order = static_cast<std::size_t>(2 * n + 2);
  return TruncatedSeries(order, {Rational(1), Rational(0), Rational(-1)}).pow(-k);
}

bool chern_check(int n, int k) {
  const auto c = chern_from_monad(n, k);
  if (!(c == chern_expected(n, k))) return false;
  if (c[2] != k) return false;
  for (std::size_t i = 1; i < c.order(); i += 2)
    if (c[i] != 0) return false;
  return true;
}

std::uint64_t cell_seed(std::uint64_t seed, int n, int k) {
  // splitmix64 finalizer over the run seed and the cell coordinates
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(n) * 1000003ULL +
                                                     static_cast<std::uint64_t>(k) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

DimensionReport full_verification(const maps::MonadSpec& spec, const VerifyOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  spec.validate();
  const int n = spec.n, k = spec.k;

  DimensionReport r;
  r.n = n;
  r.k = k;
  r.alpha = spec.alpha;
  r.ext2_formula = ext2_dim_formula(n, k);
  r.ext1_formula = ext1_dim_formula(n, k);
  r.euler = euler_formula(n, k);
  r.dim_a = static_cast<std::size_t>(k);
  r.dim_b = static_cast<std::size_t>(k);
  r.dim_c = static_cast<std::size_t>(2 * n * (k - 1));
  auto fail = [&](std::string what) { r.failures.push_back(std::move(what)); };

  if (r.ext1_formula - r.ext2_formula != r.euler) fail("ext1 - ext2 != euler formula");

  const ExactMatrix phi_dual = maps::phi_dual_explicit(k, n);
  const auto row_w = phi_dual.codomain().weights();
  const auto col_w = phi_dual.domain().weights();
  r.phi_rank = exactla::blockwise_rank(phi_dual, row_w, col_w, opts.jobs);
  r.ext2_computed = static_cast<std::int64_t>(phi_dual.cols() - r.phi_rank);
  r.phi_kernel_dim = phi_dual.rows() - r.phi_rank;
  if (r.ext2_computed != r.ext2_formula)
    fail("dim Ker(Phi^v) = " + std::to_string(r.ext2_computed) + ", formula gives " + std::to_string(r.ext2_formula));

  r.cross_construction = maps::phi(k, n).transpose() == phi_dual;
  if (!r.cross_construction) fail("transpose(Phi) differs from explicit Phi^v");

  const ExactMatrix eps = maps::epsilon(k, n);
  r.epsilon_rank = exactla::rank(eps);
  r.epsilon_in_kernel = exactla::compose(phi_dual, eps).is_zero();
  if (!r.epsilon_in_kernel) fail("Phi^v o eps != 0");
  if (r.epsilon_rank != eps.cols()) fail("eps is not injective");
  if (static_cast<std::int64_t>(r.epsilon_rank) != r.ext2_computed) fail("rank eps != dim Ker(Phi^v)");

  const auto kc = maps::ext2_character(k, n, opts.jobs);
  r.character_match = kc.match;
  if (!r.character_match)
    fail("kernel character " + kc.kernel.to_string() + " != expected " + kc.expected.to_string());

  try {
    const auto kernel = exactla::kernel_basis(phi_dual);
    std::vector<exactla::Vector> preimages;
    bool ok = true;
    for (const auto& xi : kernel) {
      const auto cert = maps::reduce_mod_epsilon(k, n, xi);
      if (eps.apply(cert.preimage) != xi) ok = false;
      preimages.push_back(cert.preimage);
    }
    if (!preimages.empty() &&
        exactla::rank(exactla::from_columns(eps.domain(), preimages)) != preimages.size())
      ok = false;
    r.reduction_ok = ok;
    if (!ok) fail("structured reduction did not reconstruct independent preimages");
  } catch (const std::exception& e) {
    r.reduction_ok = false;
    fail(std::string("structured reduction: ") + e.what());
  }

  r.chern_ok = chern_check(n, k);
  if (!r.chern_ok) fail("Chern series mismatch");

  const auto monad = maps::special_monad(spec);
  r.monad.complex_zero = maps::monad_complex_check(monad);
  if (!r.monad.complex_zero) fail("monad composite is not zero");
  std::mt19937_64 rng(opts.seed);
  r.monad.samples = opts.samples;
  r.monad.curve_samples = opts.curve_samples;
  std::vector<exactla::Vector> points;
  for (std::size_t i = 0; i < opts.samples; ++i) points.push_back(maps::random_point(n, rng));
  for (std::size_t i = 0; i < opts.curve_samples; ++i)
    points.push_back(maps::curve_point(n, Rational(maps::curve_parameter(i))));
  const std::size_t full_b = static_cast<std::size_t>(2 * n * (k - 1));
  for (const auto& v : points) {
    if (maps::fiber_check_a(monad, v) != static_cast<std::size_t>(k)) ++r.monad.fiber_a_failures;
    if (maps::fiber_check_b(k, n, v) != full_b) ++r.monad.fiber_b_failures;
  }
  r.monad.fiber_a_full = r.monad.fiber_a_failures == 0;
  r.monad.fiber_b_full = r.monad.fiber_b_failures == 0;
  if (!r.monad.fiber_a_full)
    fail("a not injective at " + std::to_string(r.monad.fiber_a_failures) + " sampled points");
  if (!r.monad.fiber_b_full)
    fail("b not surjective at " + std::to_string(r.monad.fiber_b_failures) + " sampled points");

  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace instanton::cohomology
