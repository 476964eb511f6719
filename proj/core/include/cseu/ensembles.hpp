#pragma once

#include <string>
#include <vector>

#include "cseu/cmat.hpp"
#include "cseu/rng.hpp"
#include "cseu/states.hpp"

namespace cseu {

// Weighted ensemble of pure states, with the design order the caller
// claims for it (checked by verify_design, not trusted).
struct StateEnsemble {
  int dim = 0;
  std::vector<PureState> states;
  std::vector<double> weights;  // uniform if empty
  int design_order_claimed = 0;

  static StateEnsemble single_qubit_stabilizers();
  std::vector<double> effective_weights() const;
};

struct DesignReport {
  double max_dev = 0.0;
};

// Max entrywise deviation between sum_i w_i psi_i^{(x)t} and the Haar
// t-th moment. Exact t-designs report < 1e-9.
DesignReport verify_design(const StateEnsemble& e, int t);

// Hermitian observable with its norm certificates.
class Observable {
 public:
  explicit Observable(CMat matrix);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const CMat& matrix() const { return mat_; }
  double frobenius_sq() const { return frobenius_sq_; }
  double op_norm() const { return op_norm_; }
  // Membership in Obs(B): Tr(O^2) <= B and ||O||_inf <= 1.
  bool certified_for(double budget, double tol = 1e-9) const;

 private:
  CMat mat_;
  double frobenius_sq_;
  double op_norm_;
};

enum class ObservableStyle { Gue, Pauli, ScaledIdentity };

ObservableStyle observable_style_from_string(const std::string& s);

// Random member of Obs(B); scaled-identity returns sqrt(B/d) I exactly.
Observable random_observable(int d, double budget, CounterRng& rng,
                             ObservableStyle style = ObservableStyle::Gue);

// Uniformly random element of the n-qubit Clifford group (n <= 3) as a
// dense unitary. Sampling is exactly uniform over the group mod global
// phase: the images of the Pauli generators are drawn uniformly subject
// to the commutation constraints, then realized as a matrix.
UnitaryOp random_clifford(int n, CounterRng& rng);

// rho = Tr_env |phi><phi| for a Haar pure state on H_d (x) H_lambda.
DensityOp induced_density(int d, int lambda, CounterRng& rng);

}  // namespace cseu
