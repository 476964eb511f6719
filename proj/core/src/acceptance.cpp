#include "cseu/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cseu/oracles.hpp"
#include "cseu/otoc.hpp"
#include "cseu/parallel.hpp"
#include "cseu/stats.hpp"

namespace cseu::acceptance {

namespace {

constexpr std::uint32_t kAcceptStream = 9;

struct EntryStats {
  // mean and SE accumulation for complex matrix entries
  Eigen::MatrixXd sum_re, sum_im, sq_re, sq_im;
  long n = 0;
  explicit EntryStats(Eigen::Index rows, Eigen::Index cols)
      : sum_re(Eigen::MatrixXd::Zero(rows, cols)), sum_im(Eigen::MatrixXd::Zero(rows, cols)),
        sq_re(Eigen::MatrixXd::Zero(rows, cols)), sq_im(Eigen::MatrixXd::Zero(rows, cols)) {}
  void add(const CMat& x) {
    ++n;
    sum_re += x.real();
    sum_im += x.imag();
    sq_re += x.real().cwiseProduct(x.real());
    sq_im += x.imag().cwiseProduct(x.imag());
  }
  double max_sigma_dev(const CMat& target) const {
    const double nn = n;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < sum_re.rows(); ++i)
      for (Eigen::Index j = 0; j < sum_re.cols(); ++j) {
        const double mre = sum_re(i, j) / nn, mim = sum_im(i, j) / nn;
        const double se_re =
            std::sqrt(std::max(0.0, sq_re(i, j) / nn - mre * mre) / (nn - 1)) + 1e-12;
        const double se_im =
            std::sqrt(std::max(0.0, sq_im(i, j) / nn - mim * mim) / (nn - 1)) + 1e-12;
        worst = std::max(worst, std::abs(mre - target(i, j).real()) / se_re);
        worst = std::max(worst, std::abs(mim - target(i, j).imag()) / se_im);
      }
    return worst;
  }
};

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << v;
  return ss.str();
}

PredictionTask random_task(int d, double budget, CounterRng& rng, ObservableStyle style,
                           int lambda) {
  Observable o = random_observable(d, budget, rng, style);
  DensityOp rho = lambda == 1 ? DensityOp::from_pure(haar_state(d, rng))
                              : induced_density(d, lambda, rng);
  return PredictionTask(std::move(o), std::move(rho), budget);
}

CMat dense_snapshot(const Snapshot& snap) {
  const auto co = snapshot_coefficients(snap.d, snap.s);
  return CMat(co.a * tensor_product(snap.phi.projector(),
                                    CMat(snap.psi.projector().transpose())) -
              co.b * identity(snap.d * snap.d));
}

// SE of a sample variance via grouped variances.
double grouped_variance_se(const std::vector<double>& values, int groups) {
  const std::size_t per = values.size() / groups;
  RunningStats gv;
  for (int g = 0; g < groups; ++g) {
    RunningStats s;
    for (std::size_t i = g * per; i < (g + 1) * per; ++i) s.add(values[i]);
    gv.add(s.variance());
  }
  return gv.standard_error();
}

std::pair<Observable, Observable> random_anticommuting_paulis(int n, CounterRng& rng) {
  for (;;) {
    std::string wl, vl;
    for (int q = 0; q < n; ++q) wl.push_back("IXYZ"[rng.below(4)]);
    for (int q = 0; q < n; ++q) vl.push_back("IXYZ"[rng.below(4)]);
    if (wl.find_first_not_of('I') == std::string::npos) continue;
    if (vl.find_first_not_of('I') == std::string::npos) continue;
    const CMat w = pauli_string(wl), v = pauli_string(vl);
    if (max_abs(CMat(w * v + v * w)) < 1e-12)
      return {Observable(w), Observable(v)};
  }
}

}  // namespace

CriterionResult unbiasedness(std::uint64_t seed, int threads,
                             const AcceptanceLimits& lim) {
  // 20 random (U, O, rho) triples cycled over (d, s) in {2,4} x {1,2,4};
  // grand mean of the batch mean over 1000 shadows vs Tr(O U(rho)).
  const int dims[2] = {2, 4};
  const int copies[3] = {1, 2, 4};
  double worst = 0.0;
  CounterRng rng = CounterRng(seed).derive(kAcceptStream, 1);
  for (int combo = 0; combo < 20; ++combo) {
    const int d = dims[combo % 2];
    const int s = copies[(combo / 2) % 3];
    const UnitaryOp u = haar_unitary(d, rng);
    const ObservableStyle style =
        combo % 3 == 0 ? ObservableStyle::Gue
                       : (combo % 3 == 1 ? ObservableStyle::Pauli : ObservableStyle::ScaledIdentity);
    const auto task = random_task(d, 1.0 + (combo % 2), rng, style, combo % 4 == 0 ? d : 1);
    const double truth = exact_linear_expectation(u, task);

    const CollectiveMeasurementSpec spec{s, MeasurementMode::ContinuousHaar};
    const int shadows = 1000;
    std::vector<double> values(shadows);
    parallel_for(shadows, threads, [&, d, s](std::size_t k) {
      const ShadowData sh = run_learning(
          u, spec, 6, seed ^ (0xC1000ull + combo * 4096ull + k));
      values[k] = batch_mean(sh.snapshots, task);
    });
    RunningStats stats;
    for (double v : values) stats.add(v);
    worst = std::max(worst, std::abs(stats.mean - truth) / stats.standard_error());
  }
  return {"1 unbiasedness of the pair estimator", worst < lim.sigma_limit,
          "max |grand mean - truth| = " + fmt(worst) + " SE (limit " + fmt(lim.sigma_limit) +
              ")"};
}

CriterionResult sampler_correctness(std::uint64_t seed, const AcceptanceLimits& lim) {
  CounterRng rng = CounterRng(seed).derive(kAcceptStream, 2);
  bool pass = true;
  std::ostringstream detail;

  // KS of the overlap against Beta(s+1, d-1), N = 1e5, through the full
  // learning round (overlap measured against U psi).
  for (const auto& [d, s] : std::vector<std::pair<int, int>>{{2, 1}, {4, 2}}) {
    const UnitaryOp u = haar_unitary(d, rng);
    const CollectiveMeasurementSpec spec{s, MeasurementMode::ContinuousHaar};
    std::vector<double> overlaps(100000);
    for (auto& x : overlaps) {
      const Snapshot snap = learning_round(u, spec, rng);
      const CVec rotated = u.matrix() * snap.psi.vec();
      x = std::norm(rotated.dot(snap.phi.vec()));
    }
    const auto ks =
        ks_test(overlaps, [s = s, d = d](double x) { return beta_cdf_int(s + 1, d - 1, x); });
    pass = pass && ks.p_value > lim.ks_p_min;
    detail << "KS p(d=" << d << ",s=" << s << ")=" << fmt(ks.p_value) << " ";
  }

  // Conditional mean against (I + s out)/(d + s).
  for (const auto& [d, s] : std::vector<std::pair<int, int>>{{2, 1}, {4, 4}}) {
    const PureState out = haar_state(d, rng);
    EntryStats stats(d, d);
    for (int k = 0; k < 30000; ++k)
      stats.add(sample_collective_outcome(out, s, rng).projector());
    const double dev = stats.max_sigma_dev(conditional_outcome_mean(out, d, s));
    pass = pass && dev < lim.sigma_limit;
    detail << "mean dev(d=" << d << ",s=" << s << ")=" << fmt(dev) << "SE ";
  }
  return {"2 measurement sampler correctness", pass, detail.str()};
}

CriterionResult moment_oracles(std::uint64_t seed, const AcceptanceLimits& lim) {
  const int d = 2;
  CounterRng rng = CounterRng(seed).derive(kAcceptStream, 3);
  double worst = 0.0;
  for (int s : {1, 2, 3}) {
    const UnitaryOp u = haar_unitary(d, rng);
    const CollectiveMeasurementSpec spec{s, MeasurementMode::ContinuousHaar};
    EntryStats first(d * d, d * d), second(16, 16), xx(16, 16);
    for (int k = 0; k < 60000; ++k) {
      const Snapshot snap = learning_round(u, spec, rng);
      first.add(tensor_product(snap.phi.projector(), snap.psi.projector()));
      const CVec v2 =
          tensor_product(tensor_power(snap.phi.vec(), 2), tensor_power(snap.psi.vec(), 2));
      second.add(CMat(v2 * v2.adjoint()));
      const CMat x = dense_snapshot(snap);
      xx.add(tensor_product(x, x));
    }
    worst = std::max(worst, first.max_sigma_dev(first_moment_matrix(u, d, s).matrix));
    worst = std::max(worst, second.max_sigma_dev(second_moment_matrix(u, d, s).matrix));
    worst = std::max(worst, xx.max_sigma_dev(snapshot_second_moment(u, d, s).matrix));
  }
  return {"3 moment oracle agreement (1st, 2nd, snapshot-pair)", worst < lim.sigma_limit,
          "max entrywise deviation = " + fmt(worst) + " SE over s in {1,2,3} (limit " +
              fmt(lim.sigma_limit) + ")"};
}

CriterionResult exact_variance(std::uint64_t seed, const Calibration& cal,
                               const AcceptanceLimits& lim) {
  CounterRng rng = CounterRng(seed).derive(kAcceptStream, 4);
  bool pass = true;
  std::ostringstream detail;

  // (a) Empirical Var[Z] vs the exact assembly at d=2.
  {
    const int d = 2;
    const UnitaryOp u = haar_unitary(d, rng);
    const auto task = random_task(d, 1.0, rng, ObservableStyle::Gue, 2);
    double worst = 0.0;
    for (int s : {1, 2}) {
      const CollectiveMeasurementSpec spec{s, MeasurementMode::ContinuousHaar};
      for (std::uint64_t q : {2ull, 4ull, 8ull}) {
        std::vector<double> values(10000);
        for (std::size_t k = 0; k < values.size(); ++k) {
          const ShadowData sh =
              run_learning(u, spec, q, seed ^ (0xC4000ull + s * 65536ull + q * 4096ull + k));
          values[k] = batch_mean(sh.snapshots, task);
        }
        RunningStats stats;
        for (double v : values) stats.add(v);
        const double exact = exact_batch_variance(u, task, d, s, q);
        const double se = grouped_variance_se(values, 25);
        worst = std::max(worst, std::abs(stats.variance() - exact) / se);
      }
    }
    pass = pass && worst < lim.sigma_limit;
    detail << "exact-vs-MC dev=" << fmt(worst) << "SE ";
  }

  // (b) Calibrated batch-variance bound across the grid.
  {
    double worst_ratio = 0.0;
    int cell = 0;
    for (int d : {2, 4, 8})
      for (int s : {1, 2, 4})
        for (std::uint64_t q : {2ull, 16ull})
          for (double budget : {1.0, static_cast<double>(d)})
            for (int lambda : {1, d}) {
              ++cell;
              const UnitaryOp u = haar_unitary(d, rng);
              const auto task = random_task(d, budget, rng,
                                            cell % 2 ? ObservableStyle::Gue
                                                     : ObservableStyle::ScaledIdentity,
                                            lambda);
              const CollectiveMeasurementSpec spec{s, MeasurementMode::ContinuousHaar};
              RunningStats stats;
              for (int k = 0; k < 600; ++k) {
                const ShadowData sh = run_learning(
                    u, spec, q, seed ^ (0xC4B00ull + cell * 2048ull + k));
                stats.add(batch_mean(sh.snapshots, task));
              }
              const double bound = batch_variance_bound(d, s, q, budget, task.purity, cal.batch_var_c);
              worst_ratio = std::max(worst_ratio, stats.variance() / bound);
            }
    pass = pass && worst_ratio <= 1.0;
    detail << "max Var/bound over grid = " << fmt(worst_ratio) << " (limit 1)";
  }
  return {"4 exact variance + calibrated batch bound", pass, detail.str()};
}

CriterionResult estimator_separation(std::uint64_t seed, int threads) {
  // d = 4, rho pure, O = sqrt(B/d) I with B = 4, budget m s = 1e4 at s = 1.
  const int d = 4;
  const double budget = 4.0;
  CounterRng rng = CounterRng(seed).derive(kAcceptStream, 5);
  const UnitaryOp u = haar_unitary(d, rng);
  const PredictionTask task(Observable(CMat(identity(d))),
                            DensityOp::from_pure(haar_state(d, rng)), budget);
  const double truth = exact_linear_expectation(u, task);
  const CollectiveMeasurementSpec spec{1, MeasurementMode::ContinuousHaar};
  const std::size_t m = 10000;
  const int repeats = 100, inner = 8;

  std::vector<int> wins(repeats, 0);
  parallel_for(repeats, threads, [&](std::size_t rep) {
    double mse_quad = 0.0, mse_direct = 0.0;
    for (int k = 0; k < inner; ++k) {
      const ShadowData sh =
          run_learning(u, spec, m, seed ^ (0xC50000ull + rep * 64ull + k));
      const auto quad = median_of_means(sh, task, EstimatorParams{5, true});
      const auto direct = direct_mean_estimate(sh, task);
      mse_quad += (quad.estimate - truth) * (quad.estimate - truth);
      mse_direct += (direct.estimate - truth) * (direct.estimate - truth);
    }
    wins[rep] = mse_quad < mse_direct ? 1 : 0;
  });
  int total = 0;
  for (int w : wins) total += w;
  return {"5 quadratic beats direct mean at equal query budget", total >= 95,
          "RMSE(quad) < RMSE(direct) in " + std::to_string(total) + "/100 repeats (need 95)"};
}

CriterionResult variance_scaling(std::uint64_t seed) {
  // d = 8, q = 50 fixed: Var at s = 8 at least 3x below Var at s = 1.
  const int d = 8;
  const std::uint64_t q = 50;
  CounterRng rng = CounterRng(seed).derive(kAcceptStream, 6);
  const UnitaryOp u = haar_unitary(d, rng);
  const auto task = random_task(d, 1.0, rng, ObservableStyle::Gue, 1);

  auto variance_at = [&](int s) {
    const CollectiveMeasurementSpec spec{s, MeasurementMode::ContinuousHaar};
    RunningStats stats;
    for (int k = 0; k < 1000; ++k) {
      const ShadowData sh =
          run_learning(u, spec, q, seed ^ (0xC60000ull + s * 8192ull + k));
      stats.add(batch_mean(sh.snapshots, task));
    }
    return stats.variance();
  };
  const double v1 = variance_at(1);
  const double v8 = variance_at(8);
  const double ratio = v1 / v8;
  return {"6 variance drops with s (d=8, q=50)", ratio >= 3.0,
          "Var(s=1)/Var(s=8) = " + fmt(ratio) + " (need >= 3)"};
}

CriterionResult median_suppression(std::uint64_t seed, int threads) {
  // M = 16 tasks, R = ceil(ln(M/delta)/D(1/2||3/4)), delta = 0.05.
  const int d = 2, s = 1;
  const double delta = 0.05;
  const int m_tasks = 16;
  const int r = chernoff_batch_count(m_tasks, delta);
  const std::uint64_t q = 12;
  const std::size_t m = static_cast<std::size_t>(r) * q;
  CounterRng rng = CounterRng(seed).derive(kAcceptStream, 7);
  const UnitaryOp u = haar_unitary(d, rng);
  std::vector<PredictionTask> tasks;
  for (int t = 0; t < m_tasks; ++t)
    tasks.push_back(random_task(d, 1.0, rng,
                                t % 2 ? ObservableStyle::Gue : ObservableStyle::Pauli,
                                t % 4 == 0 ? 2 : 1));
  std::vector<double> truths;
  for (const auto& t : tasks) truths.push_back(exact_linear_expectation(u, t));
  const CollectiveMeasurementSpec spec{s, MeasurementMode::ContinuousHaar};
  const EstimatorParams params{r, true};

  // Pilot run pins epsilon_l = 2 * batch std per task.
  std::vector<double> eps(tasks.size());
  {
    std::vector<RunningStats> pilot(tasks.size());
    for (int k = 0; k < 400; ++k) {
      const ShadowData sh = run_learning(u, spec, q, seed ^ (0xC7AAAull + k));
      for (std::size_t t = 0; t < tasks.size(); ++t)
        pilot[t].add(batch_mean(sh.snapshots, tasks[t]));
    }
    for (std::size_t t = 0; t < tasks.size(); ++t)
      eps[t] = 2.0 * std::sqrt(pilot[t].variance());
  }

  const int repeats = 1000;
  std::vector<char> joint_fail(repeats, 0);
  std::vector<std::uint64_t> batch_fail(repeats, 0), batch_count(repeats, 0);
  parallel_for(repeats, threads, [&](std::size_t rep) {
    const ShadowData sh = run_learning(u, spec, m, seed ^ (0xC70000ull + rep));
    const auto reports = predict_many(sh, tasks, params);
    bool fail = false;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      if (std::abs(reports[t].estimate - truths[t]) >= eps[t]) fail = true;
      for (double z : reports[t].batch_values) {
        ++batch_count[rep];
        if (std::abs(z - truths[t]) >= eps[t]) ++batch_fail[rep];
      }
    }
    joint_fail[rep] = fail ? 1 : 0;
  });
  std::uint64_t fails = 0, bf = 0, bc = 0;
  for (int rep = 0; rep < repeats; ++rep) {
    fails += joint_fail[rep];
    bf += batch_fail[rep];
    bc += batch_count[rep];
  }
  const double joint = static_cast<double>(fails) / repeats;
  const double per_batch = static_cast<double>(bf) / static_cast<double>(bc);
  const bool pass = per_batch <= 0.25 && joint <= delta;
  return {"7 median-of-means suppression (M=16, R=" + std::to_string(r) + ")", pass,
          "per-batch failure " + fmt(per_batch) + " (<=0.25), joint failure " + fmt(joint) +
              " (<= " + fmt(delta) + ")"};
}

CriterionResult average_case(std::uint64_t seed, const Calibration& cal) {
  const int d = 2, s = 1, lambda = 2;
  const double budget = 1.0;
  CounterRng rng = CounterRng(seed).derive(kAcceptStream, 8);
  const UnitaryOp u = haar_unitary(d, rng);
  const Observable obs = random_observable(d, budget, rng, ObservableStyle::Gue);

  // Pick the smallest m whose average-case bound meets delta eps^2 / 4.
  const double eps = 0.5, delta = 0.25;
  const double target = delta * eps * eps / 4.0;
  std::uint64_t m = 2;
  while (avgcase_variance_bound(d, s, lambda, budget, m, cal.avgcase_c) > target) ++m;

  // (a) Mean of the exact per-state variance over induced states.
  RunningStats avg_var;
  for (int k = 0; k < 300; ++k) {
    const PredictionTask task(obs, induced_density(d, lambda, rng), budget);
    avg_var.add(exact_batch_variance(u, task, d, s, m));
  }
  const double bound = avgcase_variance_bound(d, s, lambda, budget, m, cal.avgcase_c);
  const bool bound_ok = avg_var.mean <= bound;

  // (b) Xi < eps with frequency >= 1 - delta over repeated shadows.
  const CollectiveMeasurementSpec spec{s, MeasurementMode::ContinuousHaar};
  int success = 0;
  const int shadows = 300, states = 48;
  for (int k = 0; k < shadows; ++k) {
    const ShadowData sh = run_learning(u, spec, m, seed ^ (0xC80000ull + k));
    CounterRng srng = CounterRng(seed ^ 0xC8F00ull).derive(kAcceptStream, 1000 + k);
    double xi = 0.0;
    std::vector<PredictionTask> tasks;
    for (int t = 0; t < states; ++t)
      tasks.emplace_back(obs, induced_density(d, lambda, srng), budget);
    const auto reports = predict_many(sh, tasks, EstimatorParams{1, true});
    for (int t = 0; t < states; ++t)
      xi += std::abs(reports[t].estimate - exact_linear_expectation(u, tasks[t]));
    xi /= states;
    if (xi < eps) ++success;
  }
  const double freq = static_cast<double>(success) / shadows;
  const bool xi_ok = freq >= 1.0 - delta;
  return {"8 average case (variance bound + mean-abs-error criterion, m=" + std::to_string(m) + ")",
          bound_ok && xi_ok,
          "avg Var " + fmt(avg_var.mean) + " <= " + fmt(bound) + "; Xi<eps freq " + fmt(freq) +
              " (need >= " + fmt(1.0 - delta) + ")"};
}

CriterionResult otoc_checks(std::uint64_t seed, const AcceptanceLimits& lim) {
  const int n = 2, d = 4;
  CounterRng rng = CounterRng(seed).derive(kAcceptStream, 10);
  auto [w, v] = random_anticommuting_paulis(n, rng);
  const OtocTask task = OtocTask::at_infinite_temperature(w, v);
  const UnitaryOp u = haar_unitary(d, rng);
  const double truth = exact_otoc(u, task);
  const CollectiveMeasurementSpec spec{1, MeasurementMode::ContinuousHaar};
  bool pass = true;
  std::ostringstream detail;

  // Unbiasedness over 1000 shadows.
  {
    RunningStats stats;
    for (int k = 0; k < 1000; ++k) {
      const ShadowData sh = run_learning(u, spec, 16, seed ^ (0xC9000ull + k));
      stats.add(otoc_estimate(sh, task).estimate);
    }
    const double dev = std::abs(stats.mean - truth) / stats.standard_error();
    pass = pass && dev < lim.sigma_limit;
    detail << "mean dev=" << fmt(dev) << "SE ";
  }

  // Variance scaling in m: log-log slope within [-2.2, -0.8].
  {
    std::vector<double> logm, logv;
    for (std::size_t m : {8ull, 16ull, 32ull, 64ull}) {
      RunningStats stats;
      for (int k = 0; k < 500; ++k) {
        const ShadowData sh =
            run_learning(u, spec, m, seed ^ (0xC9A00ull + m * 1024ull + k));
        stats.add(otoc_estimate(sh, task).estimate);
      }
      logm.push_back(std::log(static_cast<double>(m)));
      logv.push_back(std::log(stats.variance()));
    }
    double mx = 0, my = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < logm.size(); ++i) {
      mx += logm[i];
      my += logv[i];
    }
    mx /= logm.size();
    my /= logm.size();
    for (std::size_t i = 0; i < logm.size(); ++i) {
      sxx += (logm[i] - mx) * (logm[i] - mx);
      sxy += (logm[i] - mx) * (logv[i] - my);
    }
    const double slope = sxy / sxx;
    pass = pass && slope > -2.2 && slope < -0.8;
    detail << "var slope=" << fmt(slope) << " ";
  }

  // Trivial cases at U = I: anticommuting gives -1, commuting gives +1.
  {
    const UnitaryOp id4 = UnitaryOp::identity_op(d);
    const OtocTask anti = task;
    const OtocTask comm = OtocTask::at_infinite_temperature(w, w);
    RunningStats sa, sc;
    for (int k = 0; k < 300; ++k) {
      const ShadowData sh = run_learning(id4, spec, 16, seed ^ (0xC9B00ull + k));
      sa.add(otoc_estimate(sh, anti).estimate);
      sc.add(otoc_estimate(sh, comm).estimate);
    }
    const double da = std::abs(sa.mean + 1.0) / sa.standard_error();
    const double dc = std::abs(sc.mean - 1.0) / sc.standard_error();
    pass = pass && da < lim.sigma_limit && dc < lim.sigma_limit;
    detail << "U=I devs " << fmt(da) << "/" << fmt(dc) << "SE";
  }
  return {"9 OTOC estimation", pass, detail.str()};
}

CriterionResult expansion_vs_dense(std::uint64_t seed) {
  CounterRng rng = CounterRng(seed).derive(kAcceptStream, 11);
  double worst = 0.0;
  for (int d : {2, 4}) {
    const UnitaryOp u = haar_unitary(d, rng);
    const auto task = random_task(d, 1.0 + d / 4.0, rng, ObservableStyle::Gue, 2);
    const CMat a =
        tensor_product(task.observable.matrix(), CMat(task.state.matrix().transpose()));
    const int n = d == 2 ? 1 : 2;
    auto [w, v] = random_anticommuting_paulis(n, rng);
    const OtocTask ot = OtocTask::at_infinite_temperature(w, v);
    const CMat otoc_obs = tensor_product(
        tensor_product(ot.w.matrix(), CMat(ot.v.matrix().adjoint().transpose())),
        tensor_product(ot.w.matrix(), CMat((ot.v.matrix() * ot.state.matrix()).transpose())));
    const CMat t13 = permutation_operator({2, 1, 0, 3}, d);

    const CollectiveMeasurementSpec spec{2, MeasurementMode::ContinuousHaar};
    for (int rep = 0; rep < 100; ++rep) {
      const Snapshot si = learning_round(u, spec, rng);
      const Snapshot sj = learning_round(u, spec, rng);
      const CMat xi = dense_snapshot(si), xj = dense_snapshot(sj);

      const double lin = linear_single(si, task);
      const double lin_dense = (a * xi).trace().real();
      worst = std::max(worst, std::abs(lin - lin_dense));

      const Complex quad = quadratic_pair_ordered(si, sj, task);
      const Complex quad_dense = (a * xi * xj).trace() / static_cast<double>(d);
      worst = std::max(worst, std::abs(quad - quad_dense));

      const Complex pair = otoc_pair_ordered(si, sj, ot);
      const Complex pair_dense = (tensor_product(xi, xj) * otoc_obs * t13).trace();
      worst = std::max(worst, std::abs(pair - pair_dense) / (1.0 + std::abs(pair_dense)));
    }
  }
  return {"10 scalar expansions vs dense contractions", worst < 1e-7,
          "max |expansion - dense| = " + fmt(worst) + " (limit 1e-7)"};
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed, int threads,
                                            const Calibration& cal,
                                            const AcceptanceLimits& lim) {
  std::vector<CriterionResult> out;
  out.push_back(unbiasedness(seed, threads, lim));
  out.push_back(sampler_correctness(seed, lim));
  out.push_back(moment_oracles(seed, lim));
  out.push_back(exact_variance(seed, cal, lim));
  out.push_back(estimator_separation(seed, threads));
  out.push_back(variance_scaling(seed));
  out.push_back(median_suppression(seed, threads));
  out.push_back(average_case(seed, cal));
  out.push_back(otoc_checks(seed, lim));
  out.push_back(expansion_vs_dense(seed));
  return out;
}

}  // namespace cseu::acceptance
