#include "cseu/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace cseu {

namespace {

CMat observable_rho_t(const PredictionTask& task) {
  return tensor_product(task.observable.matrix(), CMat(task.state.matrix().transpose()));
}

double pow_int(double base, int e) {
  double v = 1.0;
  for (int k = 0; k < e; ++k) v *= base;
  return v;
}

}  // namespace

double exact_linear_expectation(const UnitaryOp& u, const PredictionTask& task) {
  if (u.dim() != task.state.dim())
    throw std::invalid_argument("exact_linear_expectation: dimension mismatch");
  return (task.observable.matrix() * u.conjugate(task.state.matrix())).trace().real();
}

MomentOperator first_moment_matrix(const UnitaryOp& u, int d, int s) {
  if (d > 8) throw std::invalid_argument("first_moment_matrix: d must be <= 8");
  if (u.dim() != d) throw std::invalid_argument("first_moment_matrix: dimension mismatch");
  const CMat ud = u.matrix().adjoint();
  const CMat num = (d + 1.0 + s) * identity(d * d) +
                   static_cast<double>(s) * tensor_product(u.matrix(), ud) * swap_operator(d);
  return {MomentOrder::First, CMat(num / (d * (d + 1.0) * (d + s))), d, s};
}

MomentOperator second_moment_matrix(const UnitaryOp& u, int d, int s) {
  if (pow_int(d, 4) > 4096.0)
    throw std::invalid_argument("second_moment_matrix: d^4 exceeds 4096");
  if (u.dim() != d) throw std::invalid_argument("second_moment_matrix: dimension mismatch");
  const CMat uu = u.matrix();
  const CMat ud = uu.adjoint();
  const CMat p2 = sym_projector(2, d);
  const CMat p3 = sym_projector(3, d);
  const CMat p4 = sym_projector(4, d);
  const double k2 = sym_subspace_dim(2, d);
  const double k3 = sym_subspace_dim(3, d);
  const double k4 = sym_subspace_dim(4, d);

  // Factors 0,1 hold the two outcome copies, factors 2,3 the two prepared
  // copies.
  const CMat delta1 = tensor_product(p2, p2);
  const CMat delta2 = embed_on_systems(uu, {1}, 4, d) * embed_on_systems(p3, {1, 2, 3}, 4, d) *
                      embed_on_systems(ud, {1}, 4, d) * embed_on_systems(p2, {0, 1}, 4, d);
  const CMat delta3 = embed_on_systems(uu, {0}, 4, d) * embed_on_systems(p3, {0, 2, 3}, 4, d) *
                      embed_on_systems(ud, {0}, 4, d) * embed_on_systems(p2, {0, 1}, 4, d);
  const CMat delta4 = embed_on_systems(tensor_product(uu, uu), {0, 1}, 4, d) * p4 *
                      embed_on_systems(tensor_product(ud, ud), {0, 1}, 4, d);

  CMat out = delta1 / k2 + (s / k3) * (delta2 + delta3) + (s * (s - 1.0) / (2.0 * k4)) * delta4;
  out *= 2.0 / ((d + s) * (d + s + 1.0));
  return {MomentOrder::Second, std::move(out), d, s};
}

CMat conditional_outcome_mean(const PureState& output, int d, int s) {
  if (output.dim() != d)
    throw std::invalid_argument("conditional_outcome_mean: dimension mismatch");
  return (identity(d) + static_cast<double>(s) * output.projector()) / (d + s);
}

MomentOperator snapshot_second_moment(const UnitaryOp& u, int d, int s) {
  if (d != 2 && d != 4)
    throw std::invalid_argument("snapshot_second_moment: supported at d = 2 or d = 4");
  if (u.dim() != d) throw std::invalid_argument("snapshot_second_moment: dimension mismatch");
  const CMat uu = u.matrix();
  const CMat ud = uu.adjoint();
  const CMat p2 = sym_projector(2, d);
  const CMat p3 = sym_projector(3, d);
  const CMat p4 = sym_projector(4, d);
  const double k2 = sym_subspace_dim(2, d);
  const double k3 = sym_subspace_dim(3, d);
  const double k4 = sym_subspace_dim(4, d);
  const std::vector<int> tpose = {1, 3};

  // Factor layout: (0,1) first snapshot, (2,3) second snapshot; factors 0
  // and 2 are outcome slots, 1 and 3 prepared slots.
  const CMat p2_02 = embed_on_systems(p2, {0, 2}, 4, d);
  const CMat t1 = p2_02 * embed_on_systems(p2, {1, 3}, 4, d);
  const CMat t2 = partial_transpose_multi(
      CMat(embed_on_systems(uu, {2}, 4, d) * embed_on_systems(p3, {1, 2, 3}, 4, d) *
           embed_on_systems(ud, {2}, 4, d) * p2_02),
      tpose, 4, d);
  const CMat t3 = partial_transpose_multi(
      CMat(embed_on_systems(uu, {0}, 4, d) * embed_on_systems(p3, {0, 1, 3}, 4, d) *
           embed_on_systems(ud, {0}, 4, d) * p2_02),
      tpose, 4, d);
  const CMat u02 = embed_on_systems(uu, {0}, 4, d) * embed_on_systems(uu, {2}, 4, d);
  const CMat t4 = partial_transpose_multi(CMat(u02 * p4 * u02.adjoint()), tpose, 4, d);

  const CMat upsilon = choi_of_unitary(u).matrix();
  const CMat t5 = tensor_product(upsilon, identity(d * d));
  const CMat t6 = tensor_product(identity(d * d), upsilon);

  const double pref =
      2.0 * d * d * (d + 1.0) * (d + 1.0) * (d + s) / (s * static_cast<double>(s) * (d + s + 1.0));
  const double c1 = (d + 1.0 + s) / s;
  CMat out = pref * (t1 / k2 + (s / k3) * (t2 + t3) + (s * (s - 1.0) / (2.0 * k4)) * t4);
  out -= c1 * (t5 + t6);
  out -= c1 * c1 * CMat(identity(d * d * d * d));
  return {MomentOrder::SnapshotPair, std::move(out), d, s};
}

PairSecondMoments pair_second_moments(const UnitaryOp& u, const PredictionTask& task, int d,
                                      int s) {
  if (d != 2)
    throw std::invalid_argument("pair_second_moments: exact assembly implemented at d = 2");
  if (u.dim() != d || task.state.dim() != d)
    throw std::invalid_argument("pair_second_moments: dimension mismatch");

  const CMat a = observable_rho_t(task);
  const CMat upsilon = choi_of_unitary(u).matrix();
  const CMat m2 = snapshot_second_moment(u, d, s).matrix;
  const CMat aa = tensor_product(a, a);
  const CMat uu = tensor_product(upsilon, upsilon);
  const CMat au = a * upsilon;
  const CMat ua = upsilon * a;

  PairSecondMoments out;
  out.mean = d * exact_linear_expectation(u, task);
  out.same_first = (aa * m2 * uu).trace();
  out.same_second = (aa * uu * m2).trace();
  out.cross_jk = (tensor_product(au, ua) * m2).trace();
  out.cross_il = (tensor_product(ua, au) * m2).trace();
  out.same_order = (aa * m2 * m2).trace();

  // Both indices matching with the product order swapped couples the two
  // snapshot moments through six factors: M2 acts on (2,3,4,5) and on
  // (0,1,2,3), and the trace closes through the permutation (0,4)(1,5).
  const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;
  const CMat a6 = tensor_product(aa, identity(static_cast<int>(d2)));
  const CMat m2_tail = tensor_product(identity(static_cast<int>(d2)), m2);
  const CMat m2_head = tensor_product(m2, identity(static_cast<int>(d2)));
  const CMat perm = permutation_operator({4, 5, 2, 3, 0, 1}, d);
  out.swapped = (a6 * m2_tail * m2_head * perm).trace();
  return out;
}

double exact_batch_variance(const UnitaryOp& u, const PredictionTask& task, int d, int s,
                        std::uint64_t q) {
  if (d != 2) throw std::invalid_argument("exact_batch_variance: implemented at d = 2");
  if (q < 2) throw std::invalid_argument("exact_batch_variance: q must be >= 2");
  const auto mom = pair_second_moments(u, task, d, s);
  const double c0 = mom.mean * mom.mean;
  const double qq = static_cast<double>(q);

  // Ordered-quadruple counts: q(q-1) for each both-match orientation,
  // q(q-1)(q-2) for each of the four one-match orientations; quadruples
  // with all indices distinct contribute zero covariance.
  const double both = std::real(mom.same_order + mom.swapped) - 2.0 * c0;
  const double one =
      std::real(mom.same_first + mom.same_second + mom.cross_jk + mom.cross_il) - 4.0 * c0;
  const double total = qq * (qq - 1.0) * both + qq * (qq - 1.0) * (qq - 2.0) * one;
  const double norm = qq * (qq - 1.0) * d;
  return total / (norm * norm);
}

}  // namespace cseu
