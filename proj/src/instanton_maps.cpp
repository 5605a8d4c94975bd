#include "instanton/instanton_maps.hpp"

#include <algorithm>
#include <sstream>

namespace instanton::maps {

using exactla::compose;
using exactla::kron;
using rep::Factor;
using rep::strict_pair_index;
using rep::v_dim;
using rep::weak_pair_index;

namespace {

std::size_t v_index(int m, bool bar, int mu) { return static_cast<std::size_t>((bar ? m + 1 : 0) + mu); }

struct VBasis {
  bool bar;
  int mu;
};

VBasis v_split(int m, std::size_t i) {
  const auto half = static_cast<std::size_t>(m + 1);
  if (i >= half) return {true, static_cast<int>(i - half)};
  return {false, static_cast<int>(i)};
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// The same matrix read on dual spaces (not the transpose).
ExactMatrix on_duals(const ExactMatrix& m) { return m.with_spaces(m.codomain().dual(), m.domain().dual()); }

// Adds coeff * (p ^ q) in the ordered wedge basis.
void add_wedge(ExactMatrix::Builder& b, const TensorSpace& cod, std::size_t g1, std::size_t g2, std::size_t d,
               std::size_t p, std::size_t q, std::size_t col, int coeff) {
  if (p == q) return;
  if (p < q)
    b.add(cod.index({g1, g2, strict_pair_index(d, p, q)}), col, coeff);
  else
    b.add(cod.index({g1, g2, strict_pair_index(d, q, p)}), col, -coeff);
}

TensorSpace phi_dual_domain(int k, int n) {
  return TensorSpace{Factor::S(k - 2), Factor::S(k - 2), Factor::V(n - 1), Factor::V(n - 1)};
}

TensorSpace epsilon_domain(int k, int n) {
  return TensorSpace{Factor::S(k - 3), Factor::S(k - 3), Factor::Sym2V(n - 2)};
}

// s or t applied to a basis monomial: t raises the t-exponent.
enum class Op { s, t };
int shift(Op op) { return op == Op::t ? 1 : 0; }

struct Term {
  Op g1, g2, v1, v2;
  int sign;
};

}  // namespace

void MonadSpec::validate() const {
  if (n < 1) throw InvalidSpec("n must be >= 1");
  if (k < 2) throw InvalidSpec("k must be >= 2");
  if (alpha.size() != alpha_length(n, k))
    throw InvalidSpec("alpha must have " + std::to_string(alpha_length(n, k)) + " coefficients (2n+2k-1), got " +
                      std::to_string(alpha.size()));
  if (exactla::is_zero_vector(alpha)) throw InvalidSpec("alpha must be nonzero");
}

MonadSpec MonadSpec::random(int n, int k, std::mt19937_64& rng) {
  MonadSpec spec{n, k, {}};
  std::uniform_int_distribution<int> dist(-10, 10);
  do {
    spec.alpha.assign(alpha_length(n, k), Rational(0));
    for (auto& a : spec.alpha) a = dist(rng);
  } while (exactla::is_zero_vector(spec.alpha));
  return spec;
}

MonadMatrices::Dims MonadMatrices::dims() const {
  return {static_cast<std::size_t>(k), static_cast<std::size_t>(k), static_cast<std::size_t>(2 * n * (k - 1))};
}

ExactMatrix special_b(int k, int n) {
  require(k >= 2 && n >= 1, "special_b: need k >= 2, n >= 1");
  return rep::cg_beta_twisted(k - 1, n).transpose();
}

ExactMatrix catalecticant(const MonadSpec& spec) {
  spec.validate();
  const int n = spec.n, k = spec.k;
  const TensorSpace dom{Factor::S(k - 1)};
  const TensorSpace cod{Factor::S(2 * n + k - 1).dualized()};
  ExactMatrix::Builder b(cod, dom);
  for (std::size_t i = 0; i < cod.dim(); ++i)
    for (std::size_t j = 0; j < dom.dim(); ++j) b.add(i, j, spec.alpha[i + j]);
  return std::move(b).build();
}

ExactMatrix kappa_dual(int k, int n) {
  require(k >= 1 && n >= 1, "kappa_dual: need k, n >= 1");
  const TensorSpace dom{Factor::S(k - 1), Factor::Wedge2V(n)};
  const TensorSpace cod{Factor::S(2 * n + k - 1)};
  const std::size_t d = v_dim(n);
  ExactMatrix::Builder b(cod, dom);
  for (std::size_t f = 0; f < static_cast<std::size_t>(k); ++f)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) {
        const auto u = v_split(n, i), v = v_split(n, j);
        if (u.bar == v.bar) continue;  // det(s,s) = det(t,t) = 0
        // i < j forces u = s, v = t.
        b.add(f + static_cast<std::size_t>(u.mu + v.mu), dom.index({f, strict_pair_index(d, i, j)}), 1);
      }
  return std::move(b).build();
}

ExactMatrix kappa(int k, int n) { return kappa_dual(k, n).transpose(); }

ExactMatrix special_a(const MonadSpec& spec) {
  spec.validate();
  return compose(kappa(spec.k, spec.n), catalecticant(spec));
}

MonadMatrices special_monad(const MonadSpec& spec) {
  spec.validate();
  return {spec.n, spec.k, special_a(spec), special_b(spec.k, spec.n)};
}

ExactMatrix monad_composite(const MonadMatrices& m) {
  const int n = m.n;
  const TensorSpace bspace{Factor::S(m.k - 1).dualized()};
  const TensorSpace vdual{Factor::V(n).dualized()};
  const ExactMatrix sigma_dual = on_duals(rep::desym_sigma(n));
  const ExactMatrix to_tensor = kron(ExactMatrix::identity(bspace), sigma_dual);
  const ExactMatrix apply_b = kron(m.b, ExactMatrix::identity(vdual));
  return compose(apply_b, compose(to_tensor, m.a));
}

bool monad_complex_check(const MonadMatrices& m) { return monad_composite(m).is_zero(); }

ExactMatrix wedge_contraction(int n, std::span<const Rational> v) {
  const std::size_t d = v_dim(n);
  require(v.size() == d, "wedge_contraction: point must have 2n+2 coordinates");
  const TensorSpace dom{Factor::Wedge2V(n).dualized()};
  const TensorSpace cod{Factor::V(n).dualized()};
  ExactMatrix::Builder b(cod, dom);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const std::size_t col = strict_pair_index(d, i, j);
      b.add(j, col, v[i]);
      b.add(i, col, -v[j]);
    }
  return std::move(b).build();
}

ExactMatrix annihilator(int n, std::span<const Rational> v) {
  const std::size_t d = v_dim(n);
  require(v.size() == d, "annihilator: point must have 2n+2 coordinates");
  if (exactla::is_zero_vector(v)) throw std::invalid_argument("annihilator: zero vector");
  const std::size_t p = static_cast<std::size_t>(
      std::find_if(v.begin(), v.end(), [](const Rational& q) { return q != 0; }) - v.begin());
  const TensorSpace cod{Factor::V(n).dualized()};
  ExactMatrix::Builder b(cod, TensorSpace::plain(d - 1));
  std::size_t col = 0;
  for (std::size_t j = 0; j < d; ++j) {
    if (j == p) continue;
    b.add(j, col, 1);
    b.add(p, col, -v[j] / v[p]);
    ++col;
  }
  return std::move(b).build();
}

std::size_t fiber_check_a(const MonadMatrices& m, std::span<const Rational> v) {
  if (exactla::is_zero_vector(v)) throw std::invalid_argument("fiber_check_a: zero vector");
  const TensorSpace bspace{Factor::S(m.k - 1).dualized()};
  const ExactMatrix contract = kron(ExactMatrix::identity(bspace), wedge_contraction(m.n, v));
  return exactla::rank(compose(contract, m.a));
}

std::size_t fiber_check_b(int k, int n, std::span<const Rational> v) {
  if (exactla::is_zero_vector(v)) throw std::invalid_argument("fiber_check_b: zero vector");
  const TensorSpace bspace{Factor::S(k - 1).dualized()};
  const ExactMatrix restrict_to = kron(ExactMatrix::identity(bspace), annihilator(n, v));
  return exactla::rank(compose(special_b(k, n), restrict_to));
}

ExactMatrix phi(int k, int n) {
  require(k >= 2 && n >= 1, "phi: need k >= 2, n >= 1");
  const ExactMatrix b = special_b(k, n);
  const TensorSpace bb{Factor::S(k - 1).dualized(), Factor::S(k - 1).dualized()};
  const ExactMatrix id_sigma = kron(ExactMatrix::identity(bb), on_duals(rep::desym_sigma(n)));
  // B B V V -> B V B V, apply b (x) b, then C-factors back to S S V V.
  const ExactMatrix interleave = rep::factor_permutation(id_sigma.codomain(), {0, 2, 1, 3});
  const ExactMatrix bb_map = kron(b, b);
  const ExactMatrix regroup = rep::factor_permutation(bb_map.codomain(), {0, 2, 1, 3});
  return compose(regroup, compose(bb_map, compose(interleave, id_sigma)));
}

ExactMatrix phi_dual_explicit(int k, int n) {
  require(k >= 2 && n >= 1, "phi_dual_explicit: need k >= 2, n >= 1");
  const TensorSpace dom = phi_dual_domain(k, n);
  const TensorSpace cod{Factor::S(k - 1), Factor::S(k - 1), Factor::Wedge2V(n)};
  const std::size_t dv = v_dim(n);
  // sg sg' (tv ^ tv') - sg tg' (tv ^ sv') - tg sg' (sv ^ tv') + tg tg' (sv ^ sv')
  static constexpr Term terms[] = {{Op::s, Op::s, Op::t, Op::t, 1},
                                   {Op::s, Op::t, Op::t, Op::s, -1},
                                   {Op::t, Op::s, Op::s, Op::t, -1},
                                   {Op::t, Op::t, Op::s, Op::s, 1}};
  ExactMatrix::Builder b(cod, dom);
  for (std::size_t col = 0; col < dom.dim(); ++col) {
    const auto parts = dom.split(col);
    const auto v1 = v_split(n - 1, parts[2]);
    const auto v2 = v_split(n - 1, parts[3]);
    for (const auto& term : terms) {
      const std::size_t g1 = parts[0] + shift(term.g1);
      const std::size_t g2 = parts[1] + shift(term.g2);
      const std::size_t p = v_index(n, v1.bar, v1.mu + shift(term.v1));
      const std::size_t q = v_index(n, v2.bar, v2.mu + shift(term.v2));
      add_wedge(b, cod, g1, g2, dv, p, q, col, term.sign);
    }
  }
  return std::move(b).build();
}

ExactMatrix epsilon_prime(int k, int n) {
  require(k >= 2 && n >= 1, "epsilon_prime: need k >= 2, n >= 1");
  const TensorSpace dom{Factor::S(k - 3), Factor::S(k - 3), Factor::V(n - 2), Factor::V(n - 2)};
  const TensorSpace cod = phi_dual_domain(k, n);
  // sf sf' tu tu' - sf tf' su tu' - tf sf' tu su' + tf tf' su su'
  static constexpr Term terms[] = {{Op::s, Op::s, Op::t, Op::t, 1},
                                   {Op::s, Op::t, Op::s, Op::t, -1},
                                   {Op::t, Op::s, Op::t, Op::s, -1},
                                   {Op::t, Op::t, Op::s, Op::s, 1}};
  ExactMatrix::Builder b(cod, dom);
  for (std::size_t col = 0; col < dom.dim(); ++col) {
    const auto parts = dom.split(col);
    const auto u1 = v_split(n - 2, parts[2]);
    const auto u2 = v_split(n - 2, parts[3]);
    for (const auto& term : terms) {
      const std::size_t row =
          cod.index({parts[0] + shift(term.g1), parts[1] + shift(term.g2),
                     v_index(n - 1, u1.bar, u1.mu + shift(term.v1)), v_index(n - 1, u2.bar, u2.mu + shift(term.v2))});
      b.add(row, col, term.sign);
    }
  }
  return std::move(b).build();
}

ExactMatrix epsilon_prime_via_kron(int k, int n) {
  if (k < 3 || n < 2) return epsilon_prime(k, n);
  const ExactMatrix beta = rep::cg_beta_twisted(k - 2, n - 1);
  const TensorSpace dom{Factor::S(k - 3), Factor::S(k - 3), Factor::V(n - 2), Factor::V(n - 2)};
  // (f, f', u, u') -> (f, u', f', u): beta' pairs f with u' and f' with u.
  const ExactMatrix pair_up = rep::factor_permutation(dom, {0, 2, 3, 1});
  const ExactMatrix bb = kron(beta, beta);
  // (f, u', f', u) images -> (f, f', u, u').
  const ExactMatrix unpair = rep::factor_permutation(bb.codomain(), {0, 3, 1, 2});
  return compose(unpair, compose(bb, pair_up));
}

ExactMatrix epsilon(int k, int n) {
  require(k >= 2 && n >= 1, "epsilon: need k >= 2, n >= 1");
  const TensorSpace dom = epsilon_domain(k, n);
  if (k < 3 || n < 2) return ExactMatrix(phi_dual_domain(k, n), dom);
  const TensorSpace ss{Factor::S(k - 3), Factor::S(k - 3)};
  const ExactMatrix desym = kron(ExactMatrix::identity(ss), rep::sym_iota(n - 2));
  return compose(epsilon_prime(k, n), desym);
}

std::string PhiDualIndex::to_string() const {
  std::ostringstream os;
  os << "(" << alpha << ", " << beta << ", " << mu << (mu_bar ? "bar" : "") << ", " << nu << (nu_bar ? "bar" : "")
     << ")";
  return os.str();
}

PhiDualIndex split_phi_dual_index(int k, int n, std::size_t index) {
  const auto parts = phi_dual_domain(k, n).split(index);
  const auto v1 = v_split(n - 1, parts[2]);
  const auto v2 = v_split(n - 1, parts[3]);
  return {static_cast<int>(parts[0]), static_cast<int>(parts[1]), v1.bar, v1.mu, v2.bar, v2.mu};
}

namespace {

std::optional<std::size_t> first_nonzero(std::span<const Rational> v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) return i;
  return std::nullopt;
}

std::string shape_violation(const PhiDualIndex& t) {
  if (!t.mu_bar && !t.nu_bar) {
    if (t.mu == 0 || t.mu > t.nu) return "(i) leading (alpha, beta, mu, nu) needs 0 < mu <= nu";
  } else if (!t.mu_bar && t.nu_bar) {
    if (t.mu == 0 || t.nu == 0) return "(ii) leading (alpha, beta, mu, nubar) needs mu, nu != 0";
  } else if (t.mu_bar && !t.nu_bar) {
    return "(iii) leading (alpha, beta, mubar, nu) is impossible";
  } else {
    if (t.mu == 0 || t.mu > t.nu) return "(iv) leading (alpha, beta, mubar, nubar) needs 0 < mu <= nu";
  }
  return {};
}

}  // namespace

std::string reduction_shape_violation(int k, int n, std::span<const Rational> xi) {
  const auto lead = first_nonzero(xi);
  if (!lead) return {};
  return shape_violation(split_phi_dual_index(k, n, *lead));
}

ReductionCertificate reduce_mod_epsilon(int k, int n, std::span<const Rational> xi) {
  const ExactMatrix phi_dual = phi_dual_explicit(k, n);
  if (xi.size() != phi_dual.cols())
    throw exactla::DimensionMismatch("reduce_mod_epsilon: xi has length " + std::to_string(xi.size()) +
                                     ", expected " + std::to_string(phi_dual.cols()));
  if (!exactla::is_zero_vector(phi_dual.apply(xi))) throw NotInKernel("reduce_mod_epsilon: xi is not in Ker(Phi^v)");

  const ExactMatrix eps = epsilon(k, n);
  // Row j of the transpose is column j of eps.
  const ExactMatrix eps_cols = eps.transpose();
  const TensorSpace dom = epsilon_domain(k, n);

  ReductionCertificate cert;
  cert.preimage.assign(eps.cols(), Rational(0));
  Vector rest(xi.begin(), xi.end());
  while (const auto lead = first_nonzero(rest)) {
    const PhiDualIndex t = split_phi_dual_index(k, n, *lead);
    if (const auto why = shape_violation(t); !why.empty())
      throw ReductionStuck("reduce_mod_epsilon: leading index " + t.to_string() + " violates " + why);
    if (t.alpha > k - 3 || t.beta > k - 3)
      throw ReductionStuck("reduce_mod_epsilon: leading index " + t.to_string() + " has no S_{k-3} preimage");
    const std::size_t w1 = v_index(n - 2, t.mu_bar, t.mu - 1);
    const std::size_t w2 = v_index(n - 2, t.nu_bar, t.nu - 1);
    const std::size_t pre = dom.index({static_cast<std::size_t>(t.alpha), static_cast<std::size_t>(t.beta),
                                       weak_pair_index(v_dim(n - 2), w1, w2)});
    const auto& column = eps_cols.row(pre);
    if (column.empty() || column.front().col != *lead)
      throw ReductionStuck("reduce_mod_epsilon: eps image of the preimage does not lead at " + t.to_string());
    const Rational c = rest[*lead] / column.front().value;
    for (const auto& e : column) rest[e.col] -= c * e.value;
    cert.preimage[pre] += c;
    cert.steps.push_back({*lead, t, pre, c});
  }
  return cert;
}

Rational kernel_coefficient(int k, int n, std::span<const Rational> xi, int alpha, int beta, int mu, int nu,
                             CoefficientReading reading) {
  const TensorSpace dom = phi_dual_domain(k, n);
  // c(a, b, [bar]m, [bar]q); zero outside [0, k-2] x [0, n-1].
  auto c = [&](int a, int b, bool mbar, int m, bool qbar, int q) -> Rational {
    if (a < 0 || b < 0 || a > k - 2 || b > k - 2) return 0;
    if (m < 0 || q < 0 || m > n - 1 || q > n - 1) return 0;
    return xi[dom.index({static_cast<std::size_t>(a), static_cast<std::size_t>(b), v_index(n - 1, mbar, m),
                         v_index(n - 1, qbar, q)})];
  };
  Rational sum = c(alpha, beta, false, mu - 1, true, nu - 1) - c(alpha, beta, true, nu - 1, false, mu - 1);
  sum += -c(alpha, beta - 1, false, mu - 1, true, nu) + c(alpha, beta - 1, true, nu - 1, false, mu);
  sum += -c(alpha - 1, beta, false, mu, true, nu - 1);
  sum += +c(alpha - 1, beta - 1, false, mu, true, nu);
  if (reading == CoefficientReading::Corrected) {
    sum += c(alpha - 1, beta, true, nu, false, mu - 1);
    sum -= c(alpha - 1, beta - 1, true, nu, false, mu);
  } else {
    sum += c(alpha - 1, beta, true, nu, false, mu);
    sum -= c(alpha - 1, beta - 1, true, nu, true, mu);
  }
  return sum;
}

std::vector<CoefficientMismatch> coefficient_mismatches(int k, int n, std::span<const Rational> xi, CoefficientReading reading) {
  const ExactMatrix phi_dual = phi_dual_explicit(k, n);
  const Vector image = phi_dual.apply(xi);
  const TensorSpace& cod = phi_dual.codomain();
  const std::size_t dv = v_dim(n);
  std::vector<CoefficientMismatch> out;
  for (int a = 0; a <= k - 1; ++a)
    for (int b = 0; b <= k - 1; ++b)
      for (int mu = 0; mu <= n; ++mu)
        for (int nu = 0; nu <= n; ++nu) {
          const std::size_t row = cod.index({static_cast<std::size_t>(a), static_cast<std::size_t>(b),
                                             strict_pair_index(dv, v_index(n, false, mu), v_index(n, true, nu))});
          const Rational formula = kernel_coefficient(k, n, xi, a, b, mu, nu, reading);
          if (formula != image[row]) out.push_back({a, b, mu, nu, image[row], formula});
        }
  return out;
}

KernelCharacter ext2_character(int k, int n, unsigned jobs) {
  const ExactMatrix phi_dual = phi_dual_explicit(k, n);
  const auto row_w = phi_dual.codomain().weights();
  const auto col_w = phi_dual.domain().weights();
  const auto dims = exactla::blockwise_kernel_dims(phi_dual, row_w, col_w, jobs);
  std::map<int, std::int64_t> coeffs;
  for (const auto& [w, d] : dims) coeffs[w] = static_cast<std::int64_t>(d);
  KernelCharacter out;
  out.kernel = rep::Character(std::move(coeffs));
  out.expected = rep::character(epsilon_domain(k, n));
  out.match = out.kernel == out.expected;
  return out;
}

bool ext2_character_check(int k, int n, unsigned jobs) { return ext2_character(k, n, jobs).match; }

Vector random_point(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(-10, 10);
  Vector v(v_dim(n));
  do {
    for (auto& x : v) x = dist(rng);
  } while (exactla::is_zero_vector(v));
  return v;
}

Vector curve_point(int n, const Rational& lambda) {
  Vector v(v_dim(n));
  Rational binom = 1;
  Rational power = 1;
  for (int mu = 0; mu <= n; ++mu) {
    v[v_index(n, false, mu)] = binom * power;
    v[v_index(n, true, mu)] = binom * power * lambda;
    binom = binom * (n - mu) / (mu + 1);
    power *= lambda;
  }
  return v;
}

std::int64_t curve_parameter(std::size_t i) {
  const auto half = static_cast<std::int64_t>((i + 1) / 2);
  return (i % 2 == 1) ? half : -half;
}

}  // namespace instanton::maps
