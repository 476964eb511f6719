#pragma once

#include "cseu/estimator.hpp"

namespace cseu {

// W, V pair for out-of-time-order correlation, with the initial state.
// The infinite-temperature mode pins state = I/d and requires W, V to be
// unitary, traceless and Hermitian; the variance bound applies only there.
struct OtocTask {
  Observable w;
  Observable v;
  DensityOp state;
  bool infinite_temperature = false;

  static OtocTask at_infinite_temperature(Observable w, Observable v);
  static OtocTask general(Observable w, Observable v, DensityOp state);
};

// Tr(rho W_U V^dag W_U V) with W_U = U^dag W U, computed densely.
double exact_otoc(const UnitaryOp& u, const OtocTask& task);

// One ordered term Tr[(X_i (x) X_j)(W (x) (V^dag)^T (x) W (x) (V rho)^T) T_(1,3)],
// evaluated by the scalar expansion.
Complex otoc_pair_ordered(const Snapshot& si, const Snapshot& sj, const OtocTask& task);

// Pair estimator over all ordered pairs of distinct snapshots.
EstimateReport otoc_estimate(const ShadowData& shadow, const OtocTask& task,
                             const Calibration& cal = default_calibration(), int threads = 1);

}  // namespace cseu
