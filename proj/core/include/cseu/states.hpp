#pragma once

#include "cseu/cmat.hpp"
#include "cseu/rng.hpp"

namespace cseu {

// Normalized state vector on a d-dimensional system.
class PureState {
 public:
  PureState(CVec amplitudes);

  int dim() const { return static_cast<int>(amp_.size()); }
  const CVec& vec() const { return amp_; }
  // Rank-1 projector |psi><psi|.
  CMat projector() const;

  static PureState basis(int d, int index);

 private:
  CVec amp_;
};

// Density operator: Hermitian, unit trace, nonnegative spectrum.
class DensityOp {
 public:
  DensityOp(CMat matrix);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const CMat& matrix() const { return mat_; }
  double purity() const;

  static DensityOp maximally_mixed(int d);
  static DensityOp from_pure(const PureState& psi);

 private:
  CMat mat_;
};

class UnitaryOp {
 public:
  UnitaryOp(CMat matrix);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const CMat& matrix() const { return mat_; }
  PureState apply(const PureState& psi) const;
  CMat conjugate(const CMat& a) const;  // U A U^dag

  static UnitaryOp identity_op(int d);

 private:
  CMat mat_;
};

// Unnormalized Choi operator of a channel; trace d, rank 1 for unitaries.
class ChoiOp {
 public:
  ChoiOp(int d, CMat matrix);

  int dim() const { return d_; }
  const CMat& matrix() const { return mat_; }

 private:
  int d_;
  CMat mat_;
};

// Haar unitary via complex-Ginibre orthonormalization with the diagonal
// phase fix.
UnitaryOp haar_unitary(int d, CounterRng& rng);
PureState haar_state(int d, CounterRng& rng);

// (U (x) I)|Phi><Phi|(U (x) I)^dag with |Phi> = sum_i |ii> unnormalized;
// equals [(U (x) U^dag) T_(1,2)]^T2.
ChoiOp choi_of_unitary(const UnitaryOp& u);

// The swap operator T_(1,2) on H (x) H.
CMat swap_operator(int d);

}  // namespace cseu
