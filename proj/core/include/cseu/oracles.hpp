#pragma once

#include "cseu/estimator.hpp"

namespace cseu {

enum class MomentOrder { First, Second, SnapshotPair };

// Closed-form expectation operators for the learning-round statistics.
struct MomentOperator {
  MomentOrder order;
  CMat matrix;
  int d = 0;
  int s = 1;
};

// Tr(O U rho U^dag), the estimand itself.
double exact_linear_expectation(const UnitaryOp& u, const PredictionTask& task);

// E[phi (x) psi] = [(d+1+s)(I (x) I) + s (U (x) U^dag) T_(1,2)] / (d(d+1)(d+s)).
MomentOperator first_moment_matrix(const UnitaryOp& u, int d, int s);

// E[phi^(x)2 (x) psi^(x)2], assembled from symmetric projectors on four
// factors.
MomentOperator second_moment_matrix(const UnitaryOp& u, int d, int s);

// E[phi | measured state] = (I + s |out><out|) / (d + s).
CMat conditional_outcome_mean(const PureState& output, int d, int s);

// E[X (x) X] for the snapshot operator X: the seven-term assembly with
// partial transposes on factors 2 and 4.
MomentOperator snapshot_second_moment(const UnitaryOp& u, int d, int s);

// Exact Var[Z] for one batch of q snapshots at d = 2, by enumerating the
// covariance cases with their combinatorial multiplicities.
double exact_batch_variance(const UnitaryOp& u, const PredictionTask& task, int d, int s,
                        std::uint64_t q);

// The four exact second-moment contractions behind exact_batch_variance,
// exposed for the covariance-pattern checks. Index patterns follow the
// (i,j),(k,l) matching structure of the pair estimator.
struct PairSecondMoments {
  Complex same_first;   // E[L_ij L_il], shared first index
  Complex same_second;  // E[L_ij L_kj], shared second index
  Complex cross_jk;     // E[L_ij L_jl], shared index in different slots
  Complex cross_il;     // E[L_ij L_ki]
  Complex same_order;   // E[L_ij L_ij]
  Complex swapped;      // E[L_ij L_ji]
  double mean;          // E[L_ij] = d Tr(O U(rho))
};
PairSecondMoments pair_second_moments(const UnitaryOp& u, const PredictionTask& task, int d,
                                      int s);

}  // namespace cseu
