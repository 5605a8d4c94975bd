#include "instanton/space.hpp"

#include <stdexcept>

namespace instanton::rep {

std::size_t v_dim(int m) { return m < 0 ? 0 : 2 * static_cast<std::size_t>(m + 1); }

std::size_t strict_pair_index(std::size_t d, std::size_t i, std::size_t j) {
  if (i >= j || j >= d) throw std::out_of_range("strict_pair_index: need i < j < d");
  return i * d - i * (i + 1) / 2 + (j - i - 1);
}

std::size_t weak_pair_index(std::size_t d, std::size_t i, std::size_t j) {
  if (i > j || j >= d) throw std::out_of_range("weak_pair_index: need i <= j < d");
  return i * d - (i * (i + 1) / 2 - i) + (j - i);
}

std::pair<std::size_t, std::size_t> strict_pair(std::size_t d, std::size_t index) {
  for (std::size_t i = 0; i + 1 < d; ++i) {
    const std::size_t row = d - i - 1;
    if (index < row) return {i, i + 1 + index};
    index -= row;
  }
  throw std::out_of_range("strict_pair: index out of range");
}

std::pair<std::size_t, std::size_t> weak_pair(std::size_t d, std::size_t index) {
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t row = d - i;
    if (index < row) return {i, i + index};
    index -= row;
  }
  throw std::out_of_range("weak_pair: index out of range");
}

namespace {

int v_weight(int m, std::size_t i) {
  const auto half = static_cast<std::size_t>(m + 1);
  const bool bar = i >= half;
  const int mu = static_cast<int>(bar ? i - half : i);
  return (bar ? -1 : 1) + m - 2 * mu;
}

}  // namespace

std::size_t Factor::dim() const {
  switch (kind) {
    case FactorKind::Sym:
      return m < 0 ? 0 : static_cast<std::size_t>(m + 1);
    case FactorKind::V:
      return v_dim(m);
    case FactorKind::Wedge2V: {
      const std::size_t d = v_dim(m);
      return d * (d - (d > 0 ? 1 : 0)) / 2;
    }
    case FactorKind::Sym2V: {
      const std::size_t d = v_dim(m);
      return d * (d + 1) / 2;
    }
    case FactorKind::Plain:
      return m < 0 ? 0 : static_cast<std::size_t>(m);
  }
  return 0;
}

int Factor::weight(std::size_t i) const {
  int w = 0;
  switch (kind) {
    case FactorKind::Sym:
      w = m - 2 * static_cast<int>(i);
      break;
    case FactorKind::V:
      w = v_weight(m, i);
      break;
    case FactorKind::Wedge2V: {
      const auto [a, b] = strict_pair(v_dim(m), i);
      w = v_weight(m, a) + v_weight(m, b);
      break;
    }
    case FactorKind::Sym2V: {
      const auto [a, b] = weak_pair(v_dim(m), i);
      w = v_weight(m, a) + v_weight(m, b);
      break;
    }
    case FactorKind::Plain:
      w = 0;
      break;
  }
  return dual ? -w : w;
}

std::string Factor::label() const {
  std::string base;
  switch (kind) {
    case FactorKind::Sym: base = "S(" + std::to_string(m) + ")"; break;
    case FactorKind::V: base = "V(" + std::to_string(m) + ")"; break;
    case FactorKind::Wedge2V: base = "Wedge2(V(" + std::to_string(m) + "))"; break;
    case FactorKind::Sym2V: base = "Sym2(V(" + std::to_string(m) + "))"; break;
    case FactorKind::Plain: base = "K^" + std::to_string(m); break;
  }
  return dual ? "Dual(" + base + ")" : base;
}

TensorSpace::TensorSpace(std::vector<Factor> factors) : factors_(std::move(factors)) {
  dims_.reserve(factors_.size());
  dim_ = 1;
  for (const auto& f : factors_) {
    dims_.push_back(f.dim());
    dim_ *= dims_.back();
  }
}

std::size_t TensorSpace::index(std::span<const std::size_t> parts) const {
  if (parts.size() != factors_.size()) {
    throw std::invalid_argument("TensorSpace::index: wrong number of factor indices");
  }
  std::size_t idx = 0;
  for (std::size_t f = 0; f < parts.size(); ++f) {
    if (parts[f] >= dims_[f]) throw std::out_of_range("TensorSpace::index: factor index out of range");
    idx = idx * dims_[f] + parts[f];
  }
  return idx;
}

std::vector<std::size_t> TensorSpace::split(std::size_t index) const {
  if (index >= dim_) throw std::out_of_range("TensorSpace::split: index out of range");
  std::vector<std::size_t> parts(factors_.size());
  for (std::size_t f = factors_.size(); f-- > 0;) {
    parts[f] = index % dims_[f];
    index /= dims_[f];
  }
  return parts;
}

int TensorSpace::weight(std::size_t index) const {
  const auto parts = split(index);
  int w = 0;
  for (std::size_t f = 0; f < parts.size(); ++f) w += factors_[f].weight(parts[f]);
  return w;
}

std::vector<int> TensorSpace::weights() const {
  std::vector<int> out(dim_, 0);
  if (dim_ == 0) return out;
  // Accumulate factor by factor over the mixed-radix layout.
  std::size_t inner = dim_;
  std::size_t outer = 1;
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    inner /= dims_[f];
    std::vector<int> fw(dims_[f]);
    for (std::size_t i = 0; i < dims_[f]; ++i) fw[i] = factors_[f].weight(i);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t i = 0; i < dims_[f]; ++i)
        for (std::size_t r = 0; r < inner; ++r) out[(o * dims_[f] + i) * inner + r] += fw[i];
    outer *= dims_[f];
  }
  return out;
}

TensorSpace TensorSpace::dual() const {
  std::vector<Factor> fs;
  fs.reserve(factors_.size());
  for (const auto& f : factors_) fs.push_back(f.dualized());
  return TensorSpace(std::move(fs));
}

TensorSpace TensorSpace::tensor(const TensorSpace& other) const {
  std::vector<Factor> fs = factors_;
  fs.insert(fs.end(), other.factors_.begin(), other.factors_.end());
  return TensorSpace(std::move(fs));
}

std::string TensorSpace::label() const {
  if (factors_.empty()) return "K";
  std::string out;
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    if (f) out += " * ";
    out += factors_[f].label();
  }
  return out;
}

}  // namespace instanton::rep
