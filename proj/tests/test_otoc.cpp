#include "cseu/otoc.hpp"

#include "cseu/stats.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace cseu;

namespace {

OtocTask xz_task() {
  return OtocTask::at_infinite_temperature(Observable(CMat(pauli('X'))),
                                           Observable(CMat(pauli('Z'))));
}

CMat dense_snapshot(const Snapshot& snap) {
  const auto co = snapshot_coefficients(snap.d, snap.s);
  return CMat(co.a * tensor_product(snap.phi.projector(),
                                    CMat(snap.psi.projector().transpose())) -
              co.b * identity(snap.d * snap.d));
}

// Dense 4-factor contraction oracle for one ordered pair term.
Complex dense_pair_term(const Snapshot& si, const Snapshot& sj, const OtocTask& task) {
  const int d = si.d;
  const CMat obs = tensor_product(
      tensor_product(task.w.matrix(), CMat(task.v.matrix().adjoint().transpose())),
      tensor_product(task.w.matrix(),
                     CMat((task.v.matrix() * task.state.matrix()).transpose())));
  const CMat perm = permutation_operator({2, 1, 0, 3}, d);
  return (tensor_product(dense_snapshot(si), dense_snapshot(sj)) * obs * perm).trace();
}

}  // namespace

TEST_CASE("otoc task validation") {
  CHECK_THROWS(OtocTask::at_infinite_temperature(Observable(CMat(pauli('I'))),
                                                 Observable(CMat(pauli('Z')))));
  CHECK_THROWS(OtocTask::at_infinite_temperature(
      Observable(CMat(0.5 * pauli('X'))), Observable(CMat(pauli('Z')))));
  CHECK(xz_task().infinite_temperature);
}

TEST_CASE("exact otoc trivial cases") {
  const UnitaryOp id2 = UnitaryOp::identity_op(2);
  CHECK(exact_otoc(id2, xz_task()) == doctest::Approx(-1.0));

  const OtocTask zz = OtocTask::at_infinite_temperature(Observable(CMat(pauli('Z'))),
                                                        Observable(CMat(pauli('Z'))));
  CHECK(exact_otoc(id2, zz) == doctest::Approx(1.0));

  // Norm bound at n = 2.
  CounterRng rng(71);
  const OtocTask task = OtocTask::at_infinite_temperature(
      Observable(CMat(pauli_string("XI"))), Observable(CMat(pauli_string("ZZ"))));
  for (int rep = 0; rep < 20; ++rep) {
    const double c = exact_otoc(haar_unitary(4, rng), task);
    CHECK(c >= -1.0 - 1e-9);
    CHECK(c <= 1.0 + 1e-9);
  }
}

TEST_CASE("pair term matches the dense contraction") {
  CounterRng rng(72);
  for (int d : {2, 4}) {
    const int n = d == 2 ? 1 : 2;
    const OtocTask task = OtocTask::at_infinite_temperature(
        Observable(CMat(pauli_string(n == 1 ? "X" : "XI"))),
        Observable(CMat(pauli_string(n == 1 ? "Z" : "ZX"))));
    const UnitaryOp u = haar_unitary(d, rng);
    const CollectiveMeasurementSpec spec{1, MeasurementMode::ContinuousHaar};
    for (int rep = 0; rep < 50; ++rep) {
      const Snapshot si = learning_round(u, spec, rng);
      const Snapshot sj = learning_round(u, spec, rng);
      const Complex expansion = otoc_pair_ordered(si, sj, task);
      const Complex dense = dense_pair_term(si, sj, task);
      CHECK(std::abs(expansion - dense) < 1e-7 * (1.0 + std::abs(dense)));

      // Exchange symmetry and realness at infinite temperature.
      const Complex swapped = otoc_pair_ordered(sj, si, task);
      CHECK(std::abs(expansion - swapped) < 1e-7 * (1.0 + std::abs(expansion)));
      CHECK(std::abs(expansion.imag()) < 1e-7 * (1.0 + std::abs(expansion.real())));
    }
  }
}

TEST_CASE("otoc estimator is unbiased") {
  CounterRng rng(73);
  const int d = 2;
  const UnitaryOp u = haar_unitary(d, rng);
  const OtocTask task = xz_task();
  const double truth = exact_otoc(u, task);

  RunningStats stats;
  const CollectiveMeasurementSpec spec{1, MeasurementMode::ContinuousHaar};
  for (int k = 0; k < 1200; ++k) {
    const ShadowData shadow = run_learning(u, spec, 12, 30000 + k);
    stats.add(otoc_estimate(shadow, task).estimate);
  }
  CHECK(std::abs(stats.mean - truth) < 5.0 * stats.standard_error());
}

TEST_CASE("otoc estimator agrees with the naive pairwise average") {
  CounterRng rng(74);
  const int d = 2;
  const UnitaryOp u = haar_unitary(d, rng);
  const OtocTask task = xz_task();
  const ShadowData shadow = run_learning(u, {1, MeasurementMode::ContinuousHaar}, 9, 606);

  Complex naive = 0.0;
  const std::size_t m = shadow.rounds();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      naive += otoc_pair_ordered(shadow.snapshots[i], shadow.snapshots[j], task);
    }
  naive /= static_cast<double>(m * (m - 1));
  const auto rep = otoc_estimate(shadow, task);
  CHECK(rep.estimate == doctest::Approx(naive.real()).epsilon(1e-10));

  // Thread count does not change the sum.
  const auto rep4 = otoc_estimate(shadow, task, default_calibration(), 4);
  CHECK(rep4.estimate == rep.estimate);
}

TEST_CASE("many otoc tasks reuse one shadow") {
  CounterRng rng(75);
  const UnitaryOp u = haar_unitary(4, rng);
  const ShadowData shadow = run_learning(u, {1, MeasurementMode::ContinuousHaar}, 40, 11);
  const OtocTask t1 = OtocTask::at_infinite_temperature(
      Observable(CMat(pauli_string("XI"))), Observable(CMat(pauli_string("IZ"))));
  const OtocTask t2 = OtocTask::at_infinite_temperature(
      Observable(CMat(pauli_string("YY"))), Observable(CMat(pauli_string("ZX"))));
  const auto r1 = otoc_estimate(shadow, t1);
  const auto r2 = otoc_estimate(shadow, t2);
  CHECK(r1.queries == 40);
  CHECK(r2.queries == 40);
  CHECK(r1.estimate != r2.estimate);
  CHECK(r1.analytic_bound == r2.analytic_bound);
}

TEST_CASE("otoc query budgets") {
  // s = 1, d = 2, eps = 0.1, unit constant: 4/0.01 + 8/0.1 = 480.
  CHECK(otoc_query_budget(2, 1, 0.1, 1.0) == 480);
  // Collective budget never exceeds the single-copy budget.
  for (int d : {2, 4, 8})
    for (double eps : {0.05, 0.2, 0.9})
      CHECK(otoc_query_budget(d, d, eps, 1.0) <= otoc_query_budget(d, 1, eps, 1.0));
}

TEST_CASE("calibrated budget meets the target success rate") {
  const int d = 2;
  const double eps = 0.35;
  CounterRng rng(77);
  const UnitaryOp u = haar_unitary(d, rng);
  const OtocTask task = xz_task();
  const double truth = exact_otoc(u, task);
  const std::uint64_t m = otoc_query_budget(d, 1, eps, default_calibration().otoc_budget_c);
  int ok = 0;
  const int reps = 150;
  for (int k = 0; k < reps; ++k) {
    const ShadowData shadow =
        run_learning(u, {1, MeasurementMode::ContinuousHaar}, m, 500000 + k);
    if (std::abs(otoc_estimate(shadow, task).estimate - truth) < eps) ++ok;
  }
  CHECK(static_cast<double>(ok) / reps >= 0.9);
}

TEST_CASE("general-state estimator stays unbiased") {
  CounterRng rng(76);
  const int d = 2;
  const UnitaryOp u = haar_unitary(d, rng);
  const DensityOp rho = induced_density(d, 2, rng);
  const OtocTask task =
      OtocTask::general(Observable(CMat(pauli('X'))), Observable(CMat(pauli('Z'))), rho);
  const double truth = exact_otoc(u, task);

  RunningStats stats;
  for (int k = 0; k < 1500; ++k) {
    const ShadowData shadow = run_learning(u, {1, MeasurementMode::ContinuousHaar}, 10,
                                           40000 + k);
    stats.add(otoc_estimate(shadow, task).estimate);
  }
  CHECK(std::abs(stats.mean - truth) < 5.0 * stats.standard_error());
}
