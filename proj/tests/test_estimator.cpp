#include "cseu/estimator.hpp"

#include "cseu/oracles.hpp"
#include "cseu/stats.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace cseu;

namespace {

PredictionTask zero_state_z_task() {
  return PredictionTask(Observable(CMat(pauli('Z'))),
                        DensityOp::from_pure(PureState::basis(2, 0)), 2.0);
}

Snapshot make_snapshot(const PureState& psi, const PureState& phi, int s) {
  return Snapshot{psi, phi, psi.dim(), s};
}

CMat dense_snapshot(const Snapshot& snap) {
  const auto co = snapshot_coefficients(snap.d, snap.s);
  return CMat(co.a * tensor_product(snap.phi.projector(),
                                    CMat(snap.psi.projector().transpose())) -
              co.b * identity(snap.d * snap.d));
}

PredictionTask random_task(int d, double budget, CounterRng& rng, int lambda = 1) {
  Observable o = random_observable(d, budget, rng, ObservableStyle::Gue);
  DensityOp rho = lambda == 1 ? DensityOp::from_pure(haar_state(d, rng))
                              : induced_density(d, lambda, rng);
  return PredictionTask(std::move(o), std::move(rho), budget);
}

}  // namespace

TEST_CASE("snapshot coefficients") {
  auto c = snapshot_coefficients(2, 1);
  CHECK(c.a == doctest::Approx(18.0));
  CHECK(c.b == doctest::Approx(4.0));
  c = snapshot_coefficients(2, 2);
  CHECK(c.a == doctest::Approx(12.0));
  CHECK(c.b == doctest::Approx(2.5));
  c = snapshot_coefficients(4, 4);
  CHECK(c.a == doctest::Approx(40.0));
  CHECK(c.b == doctest::Approx(2.25));
}

TEST_CASE("linear single estimator") {
  const auto task = zero_state_z_task();
  const Snapshot snap = make_snapshot(PureState::basis(2, 0), PureState::basis(2, 0), 1);
  CHECK(linear_single(snap, task) == doctest::Approx(18.0));

  // Unbiasedness at U = I.
  CounterRng rng(61);
  const UnitaryOp u = UnitaryOp::identity_op(2);
  const auto t2 = random_task(2, 1.0, rng, 2);
  RunningStats stats;
  const CollectiveMeasurementSpec spec{1, MeasurementMode::ContinuousHaar};
  for (int k = 0; k < 40000; ++k) stats.add(linear_single(learning_round(u, spec, rng), t2));
  CHECK(std::abs(stats.mean - exact_linear_expectation(u, t2)) < 5.0 * stats.standard_error());
}

TEST_CASE("linear single worst-case variance closed form") {
  // O = sqrt(B/d) I against a pure state: Var = B(d^2-1)(d+s)^2/(d s^2).
  CounterRng rng(62);
  for (const auto& [d, s] : std::vector<std::pair<int, int>>{{2, 1}, {4, 2}}) {
    const double budget = 1.0;
    const PredictionTask task(
        Observable(CMat(std::sqrt(budget / d) * identity(d))),
        DensityOp::from_pure(haar_state(d, rng)), budget);
    const UnitaryOp u = haar_unitary(d, rng);
    const CollectiveMeasurementSpec spec{s, MeasurementMode::ContinuousHaar};
    std::vector<double> values;
    for (int k = 0; k < 40000; ++k)
      values.push_back(linear_single(learning_round(u, spec, rng), task));
    RunningStats stats, groups;
    for (double v : values) stats.add(v);
    for (int g = 0; g < 20; ++g) {
      RunningStats gs;
      for (int i = g * 2000; i < (g + 1) * 2000; ++i) gs.add(values[i]);
      groups.add(gs.variance());
    }
    const double dd = d, ss = s;
    const double exact = budget * (dd * dd - 1.0) * (dd + ss) * (dd + ss) / (dd * ss * ss);
    CHECK(std::abs(stats.variance() - exact) < 5.0 * groups.standard_error());
  }
}

TEST_CASE("quadratic pair matches the dense contraction") {
  CounterRng rng(63);
  for (int d : {2, 4}) {
    const UnitaryOp u = haar_unitary(d, rng);
    const auto task = random_task(d, static_cast<double>(d) / 2 + 0.5, rng, 2);
    const CMat a = tensor_product(task.observable.matrix(),
                                  CMat(task.state.matrix().transpose()));
    const CollectiveMeasurementSpec spec{2, MeasurementMode::ContinuousHaar};
    for (int rep = 0; rep < 100; ++rep) {
      const Snapshot si = learning_round(u, spec, rng);
      const Snapshot sj = learning_round(u, spec, rng);
      const Complex dense =
          (a * dense_snapshot(si) * dense_snapshot(sj)).trace() / static_cast<double>(d);
      CHECK(std::abs(quadratic_pair_ordered(si, sj, task) - dense) < 1e-8);
      const double sym = 0.5 * (dense + std::conj(dense)).real();
      CHECK(std::abs(quadratic_pair(si, sj, task) - sym) < 1e-8);
    }
  }
}

TEST_CASE("quadratic pair is unbiased in the known case") {
  // U = I, O = Z, rho = |0><0|: expectation over pairs is Tr(Z rho) = 1.
  CounterRng rng(163);
  const auto task = zero_state_z_task();
  const UnitaryOp u = UnitaryOp::identity_op(2);
  const CollectiveMeasurementSpec spec{1, MeasurementMode::ContinuousHaar};
  RunningStats stats;
  for (int k = 0; k < 30000; ++k) {
    const Snapshot si = learning_round(u, spec, rng);
    const Snapshot sj = learning_round(u, spec, rng);
    stats.add(quadratic_pair(si, sj, task));
  }
  CHECK(std::abs(stats.mean - 1.0) < 5.0 * stats.standard_error());
}

TEST_CASE("quadratic pair rejects degenerate input") {
  CounterRng rng(64);
  const UnitaryOp u = haar_unitary(2, rng);
  const auto task = random_task(2, 1.0, rng);
  const Snapshot snap = learning_round(u, {1, MeasurementMode::ContinuousHaar}, rng);
  CHECK_THROWS(quadratic_pair(snap, snap, task));
  const Snapshot other{snap.psi, snap.phi, 2, 3};  // mismatched s
  CHECK_THROWS(quadratic_pair(snap, other, task));
}

TEST_CASE("batch mean") {
  CounterRng rng(65);
  const UnitaryOp u = haar_unitary(2, rng);
  const auto task = random_task(2, 1.0, rng);
  const CollectiveMeasurementSpec spec{1, MeasurementMode::ContinuousHaar};

  // q = 2 equals the symmetric pair value.
  const ShadowData two = run_learning(u, spec, 2, 31337);
  CHECK(batch_mean(two.snapshots, task) ==
        doctest::Approx(quadratic_pair(two.snapshots[0], two.snapshots[1], task)));

  // Unbiasedness over 1000 batches.
  RunningStats stats;
  for (int k = 0; k < 1000; ++k) {
    const ShadowData shadow = run_learning(u, spec, 6, 80000 + k);
    stats.add(batch_mean(shadow.snapshots, task));
  }
  CHECK(std::abs(stats.mean - exact_linear_expectation(u, task)) <
        5.0 * stats.standard_error());

  CHECK_THROWS(batch_mean({two.snapshots[0]}, task));
}

TEST_CASE("median of means mechanics") {
  CHECK(sample_median({1.0, 2.0, 3.0}) == doctest::Approx(2.0));

  CounterRng rng(66);
  const UnitaryOp u = haar_unitary(2, rng);
  const auto task = random_task(2, 1.0, rng);
  const CollectiveMeasurementSpec spec{1, MeasurementMode::ContinuousHaar};
  const ShadowData shadow = run_learning(u, spec, 11, 515);

  // R = 1: the estimate is the single batch mean over q = m snapshots.
  const auto r1 = median_of_means(shadow, task, EstimatorParams{1, true});
  CHECK(r1.batches == 1);
  CHECK(r1.estimate == doctest::Approx(batch_mean(shadow.snapshots, task)));

  // R = 4 is bumped to 5; q = floor(11/5) = 2, remainder dropped.
  const auto r5 = median_of_means(shadow, task, EstimatorParams{4, true});
  CHECK(r5.batches == 5);
  CHECK(r5.batch_size == 2);
  CHECK(r5.batch_values.size() == 5);
  CHECK(r5.estimate == doctest::Approx(sample_median(r5.batch_values)));
  std::vector<Snapshot> slice(shadow.snapshots.begin() + 2, shadow.snapshots.begin() + 4);
  CHECK(r5.batch_values[1] == doctest::Approx(batch_mean(slice, task)));

  // Strict mode wants m to be a multiple of R.
  CHECK_THROWS(median_of_means(shadow, task, EstimatorParams{3, false}));
  // m < 2R is rejected.
  CHECK_THROWS(median_of_means(shadow, task, EstimatorParams{7, true}));
}

TEST_CASE("direct mean estimate") {
  CounterRng rng(67);
  const UnitaryOp u = haar_unitary(2, rng);
  const auto task = random_task(2, 1.0, rng);
  const CollectiveMeasurementSpec spec{1, MeasurementMode::ContinuousHaar};

  RunningStats means;
  for (int k = 0; k < 300; ++k) {
    const ShadowData shadow = run_learning(u, spec, 32, 91000 + k);
    means.add(direct_mean_estimate(shadow, task).estimate);
  }
  CHECK(std::abs(means.mean - exact_linear_expectation(u, task)) <
        5.0 * means.standard_error());

  // Variance scales as 1/m: slope on log-log within 10% of -1.
  RunningStats small_m, large_m;
  for (int k = 0; k < 1500; ++k) {
    small_m.add(direct_mean_estimate(run_learning(u, spec, 50, 660000 + k), task).estimate);
    large_m.add(direct_mean_estimate(run_learning(u, spec, 400, 770000 + k), task).estimate);
  }
  const double slope =
      std::log(large_m.variance() / small_m.variance()) / std::log(400.0 / 50.0);
  CHECK(slope > -1.1);
  CHECK(slope < -0.9);
}

TEST_CASE("predict_many reuses data identically") {
  CounterRng rng(68);
  const UnitaryOp u = haar_unitary(2, rng);
  std::vector<PredictionTask> tasks;
  for (int k = 0; k < 4; ++k) tasks.push_back(random_task(2, 1.0, rng, k % 2 ? 2 : 1));
  const ShadowData shadow = run_learning(u, {1, MeasurementMode::ContinuousHaar}, 30, 2024);
  const EstimatorParams params{3, true};

  const auto many = predict_many(shadow, tasks, params);
  REQUIRE(many.size() == tasks.size());
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto solo = median_of_means(shadow, tasks[t], params);
    CHECK(many[t].estimate == solo.estimate);  // bit-for-bit
    CHECK(many[t].batch_values == solo.batch_values);
  }

  const auto single = predict_many(shadow, {tasks[0]}, params);
  CHECK(single[0].estimate == median_of_means(shadow, tasks[0], params).estimate);
}

TEST_CASE("gram and aggregated pair-sum routes agree") {
  CounterRng rng(70);
  for (int d : {2, 4}) {
    const UnitaryOp u = haar_unitary(d, rng);
    const auto task = random_task(d, 1.0, rng, 2);
    // q = 80 crosses the aggregated-route threshold at both dimensions.
    const ShadowData shadow = run_learning(u, {1, MeasurementMode::ContinuousHaar}, 80, 3141);
    const double fast = batch_mean(shadow.snapshots, task);
    // reference: plain pairwise loop over ordered pairs
    Complex slow = 0.0;
    for (std::size_t i = 0; i < 80; ++i)
      for (std::size_t j = 0; j < 80; ++j) {
        if (i == j) continue;
        slow += quadratic_pair_ordered(shadow.snapshots[i], shadow.snapshots[j], task);
      }
    slow /= 80.0 * 79.0;
    CHECK(std::abs(fast - slow.real()) < 1e-9 * (1.0 + std::abs(fast)));
  }
}

TEST_CASE("reports carry bounds and accounting") {
  CounterRng rng(69);
  const UnitaryOp u = haar_unitary(2, rng);
  const auto task = random_task(2, 1.0, rng);
  const ShadowData shadow = run_learning(u, {2, MeasurementMode::ContinuousHaar}, 20, 5);
  const auto rep = median_of_means(shadow, task, EstimatorParams{3, true});
  CHECK(rep.queries == 40);
  CHECK(rep.analytic_bound ==
        doctest::Approx(batch_variance_bound(2, 2, rep.batch_size, task.budget, task.purity,
                                    default_calibration().batch_var_c)));
  CHECK(rep.imag_residual < 1e-6 * std::abs(rep.estimate) + 1e-9);
}
