#pragma once

#include "toroidal/numerics.hpp"
#include "toroidal/partitions.hpp"

#include <complex>
#include <functional>
#include <map>
#include <vector>

namespace toroidal {

inline constexpr int kDefaultLevelBound = 8;

/// Heisenberg families b^i_m with [b^i_m, b^j_{-m}] = pairing(i, j, m) for m > 0
/// (families 0-based); all other commutators vanish.
struct OscillatorSpec {
  int families = 1;
  std::function<std::complex<double>(int i, int j, int m)> pairing;
};

/// Verma module of central charge c and highest weight delta.
struct VermaSpec {
  std::complex<double> c;
  std::complex<double> delta;
};

/// One basis vector: L_{-vir_1} ... L_{-vir_k} |delta> tensor prod_i prod_parts b^i_{-part} |0>.
struct BasisState {
  Partition vir;
  std::vector<Partition> heis;
  auto operator<=>(const BasisState&) const = default;
};

/// Ordered basis of the level-N subspace of (optional Verma) x (Heisenberg families).
class LevelBasis {
 public:
  LevelBasis(bool with_verma, int families, int level);

  int level() const { return level_; }
  bool with_verma() const { return with_verma_; }
  int families() const { return families_; }
  int dimension() const { return static_cast<int>(states_.size()); }
  const std::vector<BasisState>& states() const { return states_; }
  const BasisState& state(int index) const { return states_[index]; }
  /// -1 when the state is not in this basis.
  int index_of(const BasisState& state) const;

 private:
  bool with_verma_;
  int families_;
  int level_;
  std::vector<BasisState> states_;
  std::map<BasisState, int> lookup_;
};

/// Verma basis at level N tensored with one Fock family.
LevelBasis tensor_level_basis(const VermaSpec& verma, const OscillatorSpec& fock, int level);

/// Matrix of b^family_mode from `source` to `target` (target level = source level - mode).
DenseMatrix heisenberg_action(const OscillatorSpec& spec, int family, int mode, const LevelBasis& source,
                              const LevelBasis& target);

/// Matrix of L_n from `source` to `target` (target level = source level - n).
DenseMatrix virasoro_action(const VermaSpec& spec, int n, const LevelBasis& source, const LevelBasis& target);

/// Memoized action of L_n on PBW monomials L_{-l_1}...L_{-l_k}|delta>, l weakly decreasing.
class VermaAlgebra {
 public:
  using Word = std::vector<int>;
  using Combination = std::map<Word, std::complex<double>>;

  explicit VermaAlgebra(VermaSpec spec) : spec_(spec) {}
  const Combination& apply(int n, const Word& word);

 private:
  Combination apply_to(int n, const Combination& vector);
  VermaSpec spec_;
  std::map<std::pair<int, Word>, Combination> memo_;
};

}  // namespace toroidal
