#include "instanton/rep.hpp"

#include <sstream>

namespace instanton::rep {

using exactla::Rational;

namespace {

// V(m) index of u (x) s^{m-mu} t^mu; bar selects u = t.
std::size_t v_index(int m, bool bar, int mu) {
  return static_cast<std::size_t>((bar ? m + 1 : 0) + mu);
}

struct VBasis {
  bool bar;
  int mu;
};

VBasis v_split(int m, std::size_t i) {
  const auto half = static_cast<std::size_t>(m + 1);
  if (i >= half) return {true, static_cast<int>(i - half)};
  return {false, static_cast<int>(i)};
}

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

TensorSpace build_space(std::vector<Factor> factors) { return TensorSpace(std::move(factors)); }

ExactMatrix cg_beta(int k, int n) {
  require(k >= 1 && n >= 1, "cg_beta: need k, n >= 1");
  const TensorSpace dom{Factor::S(k - 1), Factor::S(n - 1)};
  const TensorSpace cod{Factor::S(k), Factor::S(n)};
  ExactMatrix::Builder b(cod, dom);
  for (std::size_t a = 0; a < static_cast<std::size_t>(k); ++a)
    for (std::size_t c = 0; c < static_cast<std::size_t>(n); ++c) {
      const std::size_t col = dom.index({a, c});
      b.add(cod.index({a, c + 1}), col, 1);   // sf (x) tg
      b.add(cod.index({a + 1, c}), col, -1);  // tf (x) sg
    }
  return std::move(b).build();
}

ExactMatrix cg_mu(int k, int n) {
  require(k >= 0 && n >= 0, "cg_mu: need k, n >= 0");
  const TensorSpace dom{Factor::S(k), Factor::S(n)};
  const TensorSpace cod{Factor::S(k + n)};
  ExactMatrix::Builder b(cod, dom);
  for (std::size_t a = 0; a <= static_cast<std::size_t>(k); ++a)
    for (std::size_t c = 0; c <= static_cast<std::size_t>(n); ++c) b.add(a + c, dom.index({a, c}), 1);
  return std::move(b).build();
}

ExactMatrix cg_beta_twisted(int k, int n) {
  require(k >= 1 && n >= 1, "cg_beta_twisted: need k, n >= 1");
  const TensorSpace dom{Factor::S(k - 1), Factor::V(n - 1)};
  const TensorSpace cod{Factor::S(k), Factor::V(n)};
  ExactMatrix::Builder b(cod, dom);
  for (std::size_t a = 0; a < static_cast<std::size_t>(k); ++a)
    for (std::size_t i = 0; i < v_dim(n - 1); ++i) {
      const auto [bar, mu] = v_split(n - 1, i);
      const std::size_t col = dom.index({a, i});
      b.add(cod.index({a, v_index(n, bar, mu + 1)}), col, 1);
      b.add(cod.index({a + 1, v_index(n, bar, mu)}), col, -1);
    }
  return std::move(b).build();
}

ExactMatrix cg_mu_twisted(int k, int n) {
  require(k >= 0 && n >= 0, "cg_mu_twisted: need k, n >= 0");
  const TensorSpace dom{Factor::S(k), Factor::V(n)};
  const TensorSpace cod{Factor::V(k + n)};
  ExactMatrix::Builder b(cod, dom);
  for (std::size_t a = 0; a <= static_cast<std::size_t>(k); ++a)
    for (std::size_t i = 0; i < v_dim(n); ++i) {
      const auto [bar, mu] = v_split(n, i);
      b.add(v_index(k + n, bar, mu + static_cast<int>(a)), dom.index({a, i}), 1);
    }
  return std::move(b).build();
}

ExactMatrix desym_sigma(int m) {
  require(m >= 0, "desym_sigma: need m >= 0");
  const TensorSpace dom{Factor::Wedge2V(m)};
  const TensorSpace cod{Factor::V(m), Factor::V(m)};
  const std::size_t d = v_dim(m);
  ExactMatrix::Builder b(cod, dom);
  for (std::size_t p = 0; p < dom.dim(); ++p) {
    const auto [i, j] = strict_pair(d, p);
    b.add(cod.index({i, j}), p, 1);
    b.add(cod.index({j, i}), p, -1);
  }
  return std::move(b).build();
}

ExactMatrix sym_iota(int m) {
  require(m >= 0, "sym_iota: need m >= 0");
  const TensorSpace dom{Factor::Sym2V(m)};
  const TensorSpace cod{Factor::V(m), Factor::V(m)};
  const std::size_t d = v_dim(m);
  ExactMatrix::Builder b(cod, dom);
  for (std::size_t p = 0; p < dom.dim(); ++p) {
    const auto [i, j] = weak_pair(d, p);
    b.add(cod.index({i, j}), p, 1);
    b.add(cod.index({j, i}), p, 1);  // diagonal pairs accumulate to 2
  }
  return std::move(b).build();
}

ExactMatrix sym_projection(int m) {
  require(m >= 0, "sym_projection: need m >= 0");
  const TensorSpace dom{Factor::V(m), Factor::V(m)};
  const TensorSpace cod{Factor::Sym2V(m)};
  const std::size_t d = v_dim(m);
  ExactMatrix::Builder b(cod, dom);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) b.add(weak_pair_index(d, std::min(i, j), std::max(i, j)), dom.index({i, j}), 1);
  return std::move(b).build();
}

ExactMatrix factor_permutation(const TensorSpace& source, const std::vector<std::size_t>& perm) {
  const auto& fs = source.factors();
  require(perm.size() == fs.size(), "factor_permutation: permutation length");
  std::vector<Factor> target(fs.size());
  std::vector<bool> seen(fs.size(), false);
  for (std::size_t f = 0; f < fs.size(); ++f) {
    require(perm[f] < fs.size() && !seen[perm[f]], "factor_permutation: not a permutation");
    seen[perm[f]] = true;
    target[perm[f]] = fs[f];
  }
  const TensorSpace cod(target);
  ExactMatrix::Builder b(cod, source);
  std::vector<std::size_t> parts(fs.size());
  for (std::size_t idx = 0; idx < source.dim(); ++idx) {
    const auto src = source.split(idx);
    for (std::size_t f = 0; f < fs.size(); ++f) parts[perm[f]] = src[f];
    b.add(cod.index(parts), idx, 1);
  }
  return std::move(b).build();
}

Character::Character(std::map<int, std::int64_t> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

void Character::normalize() {
  std::erase_if(coeffs_, [](const auto& kv) { return kv.second == 0; });
}

Character Character::irreducible(int m) {
  std::map<int, std::int64_t> c;
  for (int i = 0; i <= m; ++i) c[m - 2 * i] = 1;
  return Character(std::move(c));
}

std::int64_t Character::at(int w) const {
  auto it = coeffs_.find(w);
  return it == coeffs_.end() ? 0 : it->second;
}

std::int64_t Character::dimension() const {
  std::int64_t d = 0;
  for (const auto& [w, c] : coeffs_) d += c;
  return d;
}

bool Character::is_palindromic() const {
  for (const auto& [w, c] : coeffs_)
    if (at(-w) != c) return false;
  return true;
}

bool Character::is_nonnegative() const {
  for (const auto& [w, c] : coeffs_)
    if (c < 0) return false;
  return true;
}

Character Character::operator+(const Character& o) const {
  auto c = coeffs_;
  for (const auto& [w, m] : o.coeffs_) c[w] += m;
  return Character(std::move(c));
}

Character Character::operator-(const Character& o) const {
  auto c = coeffs_;
  for (const auto& [w, m] : o.coeffs_) c[w] -= m;
  return Character(std::move(c));
}

Character Character::operator*(const Character& o) const {
  std::map<int, std::int64_t> c;
  for (const auto& [w1, m1] : coeffs_)
    for (const auto& [w2, m2] : o.coeffs_) c[w1 + w2] += m1 * m2;
  return Character(std::move(c));
}

Character Character::adams(int p) const {
  std::map<int, std::int64_t> c;
  for (const auto& [w, m] : coeffs_) c[w * p] += m;
  return Character(std::move(c));
}

Character Character::dual() const { return adams(-1); }

Character Character::sym2() const {
  auto twice = (*this) * (*this) + adams(2);
  std::map<int, std::int64_t> c;
  for (const auto& [w, m] : twice.coeffs_) c[w] = m / 2;
  return Character(std::move(c));
}

Character Character::wedge2() const {
  auto twice = (*this) * (*this) - adams(2);
  std::map<int, std::int64_t> c;
  for (const auto& [w, m] : twice.coeffs_) c[w] = m / 2;
  return Character(std::move(c));
}

std::string Character::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    const auto [w, m] = *it;
    if (!first) os << (m < 0 ? " - " : " + ");
    else if (m < 0) os << "-";
    first = false;
    const auto a = m < 0 ? -m : m;
    if (a != 1 || w == 0) os << a;
    if (w != 0) os << "z^" << w;
  }
  return os.str();
}

Character character_of_weights(const std::vector<int>& weights) {
  std::map<int, std::int64_t> c;
  for (int w : weights) ++c[w];
  return Character(std::move(c));
}

Character character(const TensorSpace& space) {
  Character total(std::map<int, std::int64_t>{{0, 1}});
  for (const auto& f : space.factors()) {
    std::map<int, std::int64_t> c;
    for (std::size_t i = 0; i < f.dim(); ++i) ++c[f.weight(i)];
    total = total * Character(std::move(c));
  }
  return total;
}

std::map<int, std::int64_t> decompose_character(const Character& c) {
  if (!c.is_nonnegative()) throw NotACharacter("decompose_character: negative multiplicity in " + c.to_string());
  std::map<int, std::int64_t> out;
  Character rest = c;
  while (!rest.empty()) {
    const auto [top, mult] = *rest.coefficients().rbegin();
    if (top < 0 || mult < 0)
      throw NotACharacter("decompose_character: " + c.to_string() + " is not a sum of irreducible characters");
    out[top] += mult;
    std::map<int, std::int64_t> strip;
    for (int i = 0; i <= top; ++i) strip[top - 2 * i] = mult;
    rest = rest - Character(std::move(strip));
    if (!rest.is_nonnegative())
      throw NotACharacter("decompose_character: " + c.to_string() + " is not a sum of irreducible characters");
  }
  return out;
}

std::string format_decomposition(const std::map<int, std::int64_t>& irreps) {
  if (irreps.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = irreps.rbegin(); it != irreps.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    if (it->second != 1) os << it->second << "*";
    os << "S_" << it->first;
  }
  return os.str();
}

}  // namespace instanton::rep
