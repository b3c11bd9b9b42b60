#include "toroidal/fock.hpp"

#include <algorithm>
#include <stdexcept>

namespace toroidal {

LevelBasis::LevelBasis(bool with_verma, int families, int level)
    : with_verma_(with_verma), families_(families), level_(level) {
  if (level < 0) throw std::invalid_argument("LevelBasis: negative level");
  if (families < 0) throw std::invalid_argument("LevelBasis: negative family count");
  const int factors = families + (with_verma ? 1 : 0);
  for (auto& tuple : enumerate_tuples(factors, level)) {
    BasisState s;
    auto it = tuple.begin();
    if (with_verma) s.vir = *it++;
    s.heis.assign(it, tuple.end());
    lookup_.emplace(s, static_cast<int>(states_.size()));
    states_.push_back(std::move(s));
  }
}

int LevelBasis::index_of(const BasisState& state) const {
  auto it = lookup_.find(state);
  return it == lookup_.end() ? -1 : it->second;
}

LevelBasis tensor_level_basis(const VermaSpec&, const OscillatorSpec& fock, int level) {
  return LevelBasis(true, fock.families, level);
}

namespace {

Partition with_part(const Partition& p, int part) {
  std::vector<int> parts = p.parts();
  parts.insert(std::upper_bound(parts.begin(), parts.end(), part, std::greater<>()), part);
  return Partition(std::move(parts));
}

Partition without_part_at(const Partition& p, int index) {
  std::vector<int> parts = p.parts();
  parts.erase(parts.begin() + index);
  return Partition(std::move(parts));
}

void check_levels(const LevelBasis& source, const LevelBasis& target, int lowering) {
  if (target.level() != source.level() - lowering) throw std::invalid_argument("operator level mismatch");
  if (target.with_verma() != source.with_verma() || target.families() != source.families())
    throw std::invalid_argument("operator between incompatible bases");
}

}  // namespace

DenseMatrix heisenberg_action(const OscillatorSpec& spec, int family, int mode, const LevelBasis& source,
                              const LevelBasis& target) {
  check_levels(source, target, mode);
  if (mode == 0) throw std::invalid_argument("heisenberg_action: zero mode is not part of the algebra");
  if (family < 0 || family >= source.families()) throw std::invalid_argument("heisenberg_action: bad family");
  DenseMatrix out = DenseMatrix::Zero(target.dimension(), source.dimension());
  for (int col = 0; col < source.dimension(); ++col) {
    const BasisState& s = source.state(col);
    if (mode < 0) {
      BasisState image = s;
      image.heis[family] = with_part(s.heis[family], -mode);
      out(target.index_of(image), col) += 1.0;
      continue;
    }
    for (int j = 0; j < source.families(); ++j) {
      const auto& parts = s.heis[j].parts();
      for (int k = 0; k < static_cast<int>(parts.size()); ++k) {
        if (parts[k] != mode) continue;
        BasisState image = s;
        image.heis[j] = without_part_at(s.heis[j], k);
        out(target.index_of(image), col) += spec.pairing(family, j, mode);
      }
    }
  }
  return out;
}

const VermaAlgebra::Combination& VermaAlgebra::apply(int n, const Word& word) {
  const auto key = std::make_pair(n, word);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  Combination result;
  int level = 0;
  for (int part : word) level += part;

  if (n == 0) {
    result[word] = spec_.delta + static_cast<double>(level);
  } else if (word.empty()) {
    if (n < 0) result[Word{-n}] = 1.0;
  } else if (n < 0 && -n >= word.front()) {
    Word w{-n};
    w.insert(w.end(), word.begin(), word.end());
    result[w] = 1.0;
  } else {
    // L_n L_{-a} rest = L_{-a} (L_n rest) + [L_n, L_{-a}] rest
    const int a = word.front();
    const Word rest(word.begin() + 1, word.end());
    Combination inner = apply(n, rest);
    for (auto& [w, c] : apply_to(-a, inner)) result[w] += c;
    const double coeff = static_cast<double>(n + a);
    if (coeff != 0.0)
      for (const auto& [w, c] : apply(n - a, rest)) result[w] += coeff * c;
    if (n == a) {
      const std::complex<double> central = spec_.c / 12.0 * static_cast<double>(n * (n * n - 1));
      if (central != 0.0) result[rest] += central;
    }
  }
  for (auto it = result.begin(); it != result.end();)
    it = (it->second == 0.0) ? result.erase(it) : std::next(it);
  return memo_.emplace(key, std::move(result)).first->second;
}

VermaAlgebra::Combination VermaAlgebra::apply_to(int n, const Combination& vector) {
  Combination out;
  for (const auto& [w, c] : vector)
    for (const auto& [w2, c2] : apply(n, w)) out[w2] += c * c2;
  return out;
}

DenseMatrix virasoro_action(const VermaSpec& spec, int n, const LevelBasis& source, const LevelBasis& target) {
  check_levels(source, target, n);
  if (!source.with_verma()) throw std::invalid_argument("virasoro_action: basis has no Verma factor");
  VermaAlgebra algebra(spec);
  DenseMatrix out = DenseMatrix::Zero(target.dimension(), source.dimension());
  for (int col = 0; col < source.dimension(); ++col) {
    const BasisState& s = source.state(col);
    for (const auto& [w, c] : algebra.apply(n, s.vir.parts())) {
      BasisState image = s;
      image.vir = Partition(w);
      out(target.index_of(image), col) += c;
    }
  }
  return out;
}

}  // namespace toroidal
