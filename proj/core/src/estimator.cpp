#include "cseu/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cseu {

namespace {

constexpr double kImagRelTol = 1e-6;

double require_real(Complex z) {
  if (std::abs(z.imag()) > kImagRelTol * std::abs(z.real()) + 1e-9)
    throw std::runtime_error("estimator: imaginary residual exceeds tolerance");
  return z.real();
}

double median_of(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median_of: empty input");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  if (values.size() % 2 == 1) return values[mid];
  const double hi = values[mid];
  const double lo = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lo + hi);
}

// Per-batch Gram data that does not depend on the task.
struct BatchGrams {
  CMat phi;  // d x q, outcome columns
  CMat psi;  // d x q, prepared columns
  CMat f;    // <phi_i|phi_j>
  CMat g;    // <psi_i|psi_j>
};

BatchGrams make_batch_grams(const std::vector<Snapshot>& snaps, std::size_t begin,
                            std::size_t count) {
  const int d = snaps[begin].d;
  BatchGrams b;
  b.phi.resize(d, count);
  b.psi.resize(d, count);
  for (std::size_t k = 0; k < count; ++k) {
    b.phi.col(k) = snaps[begin + k].phi.vec();
    b.psi.col(k) = snaps[begin + k].psi.vec();
  }
  b.f = b.phi.adjoint() * b.phi;
  b.g = b.psi.adjoint() * b.psi;
  return b;
}

// Complex batch sum of the ordered quadratic forms, divided by q(q-1)d,
// from the Gram matrices (O(q^2 d + q d^2) arithmetic).
Complex batch_mean_value(const BatchGrams& b, const PredictionTask& task,
                         const SnapshotCoefficients& co) {
  const std::size_t q = static_cast<std::size_t>(b.f.rows());
  if (q < 2) throw std::invalid_argument("batch_mean: batch needs at least 2 snapshots");
  const int d = task.state.dim();
  const CMat ophi = b.phi.adjoint() * (task.observable.matrix() * b.phi);
  const CMat rpsi = b.psi.adjoint() * (task.state.matrix() * b.psi);

  Complex pair_sum = 0.0;
  double linear_sum = 0.0;
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      if (i == j) continue;
      pair_sum += ophi(j, i) * b.f(i, j) * rpsi(i, j) * b.g(j, i);
    }
    linear_sum += ophi(i, i).real() * rpsi(i, i).real();
  }
  const double tr_o = task.observable.matrix().trace().real();
  const double qq = static_cast<double>(q);
  const Complex total = co.a * co.a * pair_sum -
                        2.0 * co.a * co.b * (qq - 1.0) * linear_sum +
                        qq * (qq - 1.0) * co.b * co.b * tr_o;
  return total / (qq * (qq - 1.0) * d);
}

// Aggregated route for large batches: since each phi (x) psi^T factor is a
// projector pair, sum_{i != j} Tr[A P_i P_j] = Tr[A S^2] - sum_i Tr[A P_i]
// with S = sum_i P_i, costing O(q d^4 + d^6). Used when q outgrows the
// Gram route; both routes agree to roundoff.
struct BatchAggregate {
  CMat s_sum;  // sum of phi_i proj (x) (psi_i proj)^T
  std::size_t q = 0;
};

BatchAggregate make_batch_aggregate(const std::vector<Snapshot>& snaps, std::size_t begin,
                                    std::size_t count) {
  const int d = snaps[begin].d;
  BatchAggregate agg;
  agg.q = count;
  agg.s_sum = CMat::Zero(d * d, d * d);
  for (std::size_t k = 0; k < count; ++k) {
    const auto& snap = snaps[begin + k];
    const CVec& phi = snap.phi.vec();
    const CVec psi_conj = snap.psi.vec().conjugate();
    // (phi phi^dag) (x) (psi psi^dag)^T accumulated entrywise.
    for (int r1 = 0; r1 < d; ++r1)
      for (int r2 = 0; r2 < d; ++r2)
        for (int c1 = 0; c1 < d; ++c1)
          for (int c2 = 0; c2 < d; ++c2)
            agg.s_sum(r1 * d + r2, c1 * d + c2) +=
                phi(r1) * std::conj(phi(c1)) * psi_conj(r2) * std::conj(psi_conj(c2));
  }
  return agg;
}

Complex batch_mean_value_aggregated(const std::vector<Snapshot>& snaps, std::size_t begin,
                                    const BatchAggregate& agg, const PredictionTask& task,
                                    const SnapshotCoefficients& co) {
  const std::size_t q = agg.q;
  const int d = task.state.dim();
  const CMat a = tensor_product(task.observable.matrix(), CMat(task.state.matrix().transpose()));
  Complex pair_sum = (a * agg.s_sum * agg.s_sum).trace();
  double linear_sum = 0.0;
  for (std::size_t k = 0; k < q; ++k) {
    const auto& snap = snaps[begin + k];
    const Complex o = snap.phi.vec().dot(task.observable.matrix() * snap.phi.vec());
    const Complex r = snap.psi.vec().dot(task.state.matrix() * snap.psi.vec());
    pair_sum -= o * r;
    linear_sum += o.real() * r.real();
  }
  const double tr_o = task.observable.matrix().trace().real();
  const double qq = static_cast<double>(q);
  const Complex total = co.a * co.a * pair_sum -
                        2.0 * co.a * co.b * (qq - 1.0) * linear_sum +
                        qq * (qq - 1.0) * co.b * co.b * tr_o;
  return total / (qq * (qq - 1.0) * d);
}

// The Gram route wins for small batches, the aggregated route for large
// ones; the crossover tracks q d^4 vs q^2 d.
bool use_aggregated_route(std::size_t q, int d) {
  return q >= 64 && q >= static_cast<std::size_t>(d) * d * d;
}

double fill_report_stats(EstimateReport& report) {
  if (report.batch_values.size() >= 2) {
    double mean = 0.0;
    for (double v : report.batch_values) mean += v;
    mean /= static_cast<double>(report.batch_values.size());
    double ss = 0.0;
    for (double v : report.batch_values) ss += (v - mean) * (v - mean);
    report.empirical_variance = ss / static_cast<double>(report.batch_values.size() - 1);
  } else {
    report.empirical_variance = 0.0;
  }
  return report.empirical_variance;
}

}  // namespace

PredictionTask::PredictionTask(Observable o, DensityOp rho, double b)
    : observable(std::move(o)), state(std::move(rho)), budget(b), purity(state.purity()) {
  if (observable.dim() != state.dim())
    throw std::invalid_argument("PredictionTask: dimension mismatch");
  if (!observable.certified_for(budget))
    throw std::invalid_argument("PredictionTask: observable is not in Obs(B)");
  const double lo = 1.0 / state.dim();
  if (purity < lo - 1e-9 || purity > 1.0 + 1e-9)
    throw std::invalid_argument("PredictionTask: purity outside [1/d, 1]");
}

int EstimatorParams::normalized_batches() const {
  if (batches < 1) throw std::invalid_argument("EstimatorParams: batches must be >= 1");
  return batches % 2 == 1 ? batches : batches + 1;
}

SnapshotCoefficients snapshot_coefficients(int d, int s) {
  if (d < 2 || s < 1) throw std::invalid_argument("snapshot_coefficients: need d >= 2, s >= 1");
  const double dd = d, ss = s;
  return {dd * (dd + 1.0) * (dd + ss) / ss, (dd + 1.0 + ss) / ss};
}

double linear_single(const Snapshot& snap, const PredictionTask& task) {
  if (snap.d != task.state.dim()) throw std::invalid_argument("linear_single: dimension mismatch");
  const auto co = snapshot_coefficients(snap.d, snap.s);
  const Complex o = snap.phi.vec().dot(task.observable.matrix() * snap.phi.vec());
  const Complex r = snap.psi.vec().dot(task.state.matrix() * snap.psi.vec());
  const double tr_o = task.observable.matrix().trace().real();
  return require_real(co.a * o * r - co.b * tr_o);
}

Complex quadratic_pair_ordered(const Snapshot& si, const Snapshot& sj,
                               const PredictionTask& task) {
  if (&si == &sj) throw std::invalid_argument("quadratic_pair: snapshots must be distinct");
  if (si.d != sj.d || si.s != sj.s)
    throw std::invalid_argument("quadratic_pair: snapshots from different runs");
  if (si.d != task.state.dim())
    throw std::invalid_argument("quadratic_pair: dimension mismatch");
  const auto co = snapshot_coefficients(si.d, si.s);
  const CMat& o = task.observable.matrix();
  const CMat& rho = task.state.matrix();
  const Complex o_ji = sj.phi.vec().dot(o * si.phi.vec());
  const Complex f_ij = si.phi.vec().dot(sj.phi.vec());
  const Complex r_ij = si.psi.vec().dot(rho * sj.psi.vec());
  const Complex g_ji = sj.psi.vec().dot(si.psi.vec());
  const Complex oi = si.phi.vec().dot(o * si.phi.vec());
  const Complex oj = sj.phi.vec().dot(o * sj.phi.vec());
  const Complex ri = si.psi.vec().dot(rho * si.psi.vec());
  const Complex rj = sj.psi.vec().dot(rho * sj.psi.vec());
  const double tr_o = o.trace().real();
  const Complex lambda = co.a * co.a * o_ji * f_ij * r_ij * g_ji -
                         co.a * co.b * (oi * ri + oj * rj) + co.b * co.b * tr_o;
  return lambda / static_cast<double>(si.d);
}

double quadratic_pair(const Snapshot& si, const Snapshot& sj, const PredictionTask& task) {
  const Complex fwd = quadratic_pair_ordered(si, sj, task);
  const Complex bwd = quadratic_pair_ordered(sj, si, task);
  return require_real(0.5 * (fwd + bwd));
}

double batch_mean(const std::vector<Snapshot>& batch, const PredictionTask& task) {
  if (batch.size() < 2) throw std::invalid_argument("batch_mean: need q >= 2");
  const auto co = snapshot_coefficients(batch.front().d, batch.front().s);
  if (use_aggregated_route(batch.size(), batch.front().d)) {
    const auto agg = make_batch_aggregate(batch, 0, batch.size());
    return require_real(batch_mean_value_aggregated(batch, 0, agg, task, co));
  }
  const auto grams = make_batch_grams(batch, 0, batch.size());
  return require_real(batch_mean_value(grams, task, co));
}

namespace {

struct SplitPlan {
  int batches = 0;
  std::size_t batch_size = 0;
};

SplitPlan plan_split(const ShadowData& shadow, const EstimatorParams& params) {
  const int r = params.normalized_batches();
  const std::size_t m = shadow.rounds();
  if (m < 2 * static_cast<std::size_t>(r))
    throw std::invalid_argument("median_of_means: need m >= 2R snapshots");
  const std::size_t q = m / static_cast<std::size_t>(r);
  if (!params.drop_remainder && m % static_cast<std::size_t>(r) != 0)
    throw std::invalid_argument("median_of_means: m is not a multiple of R");
  return {r, q};
}

EstimateReport report_shell(const ShadowData& shadow) {
  EstimateReport rep;
  rep.d = shadow.dim();
  rep.s = shadow.spec.s;
  rep.rounds = shadow.rounds();
  rep.queries = shadow.queries();
  return rep;
}

}  // namespace

EstimateReport median_of_means(const ShadowData& shadow, const PredictionTask& task,
                               const EstimatorParams& params, const Calibration& cal) {
  const auto plan = plan_split(shadow, params);
  const auto co = snapshot_coefficients(shadow.dim(), shadow.spec.s);

  EstimateReport rep = report_shell(shadow);
  rep.batches = plan.batches;
  rep.batch_size = plan.batch_size;
  rep.batch_values.reserve(plan.batches);
  const bool aggregated = use_aggregated_route(plan.batch_size, shadow.dim());
  double worst_imag = 0.0;
  for (int r = 0; r < plan.batches; ++r) {
    const std::size_t begin = static_cast<std::size_t>(r) * plan.batch_size;
    const Complex z = [&] {
      if (aggregated) {
        const auto agg = make_batch_aggregate(shadow.snapshots, begin, plan.batch_size);
        return batch_mean_value_aggregated(shadow.snapshots, begin, agg, task, co);
      }
      return batch_mean_value(make_batch_grams(shadow.snapshots, begin, plan.batch_size), task,
                              co);
    }();
    worst_imag = std::max(worst_imag, std::abs(z.imag()));
    rep.batch_values.push_back(require_real(z));
  }
  rep.estimate = median_of(rep.batch_values);
  rep.imag_residual = worst_imag;
  fill_report_stats(rep);
  rep.analytic_bound = batch_variance_bound(rep.d, rep.s, rep.batch_size, task.budget,
                                            task.purity, cal.batch_var_c);
  rep.bound_pass = rep.empirical_variance <= rep.analytic_bound;
  return rep;
}

EstimateReport direct_mean_estimate(const ShadowData& shadow, const PredictionTask& task,
                                    const Calibration& cal) {
  if (shadow.rounds() < 1) throw std::invalid_argument("direct_mean_estimate: empty shadow");
  EstimateReport rep = report_shell(shadow);
  rep.batches = 1;
  rep.batch_size = shadow.rounds();
  double sum = 0.0, sumsq = 0.0;
  for (const auto& snap : shadow.snapshots) {
    const double v = linear_single(snap, task);
    sum += v;
    sumsq += v * v;
  }
  const double m = static_cast<double>(shadow.rounds());
  rep.estimate = sum / m;
  rep.batch_values = {rep.estimate};
  rep.empirical_variance =
      shadow.rounds() >= 2 ? (sumsq - sum * sum / m) / ((m - 1.0) * m) : 0.0;
  const double dd = rep.d, ss = rep.s;
  rep.analytic_bound =
      cal.direct_c * (1.0 + dd * dd / (ss * ss)) * dd * task.budget / m;
  rep.bound_pass = rep.empirical_variance <= rep.analytic_bound;
  rep.imag_residual = 0.0;
  return rep;
}

std::vector<EstimateReport> predict_many(const ShadowData& shadow,
                                         const std::vector<PredictionTask>& tasks,
                                         const EstimatorParams& params, const Calibration& cal) {
  if (tasks.empty()) throw std::invalid_argument("predict_many: no tasks");
  const auto plan = plan_split(shadow, params);
  const auto co = snapshot_coefficients(shadow.dim(), shadow.spec.s);

  const bool aggregated = use_aggregated_route(plan.batch_size, shadow.dim());
  std::vector<BatchGrams> grams;
  std::vector<BatchAggregate> aggregates;
  for (int r = 0; r < plan.batches; ++r) {
    const std::size_t begin = static_cast<std::size_t>(r) * plan.batch_size;
    if (aggregated)
      aggregates.push_back(make_batch_aggregate(shadow.snapshots, begin, plan.batch_size));
    else
      grams.push_back(make_batch_grams(shadow.snapshots, begin, plan.batch_size));
  }

  std::vector<EstimateReport> out;
  out.reserve(tasks.size());
  for (const auto& task : tasks) {
    EstimateReport rep = report_shell(shadow);
    rep.batches = plan.batches;
    rep.batch_size = plan.batch_size;
    double worst_imag = 0.0;
    for (int r = 0; r < plan.batches; ++r) {
      const std::size_t begin = static_cast<std::size_t>(r) * plan.batch_size;
      const Complex z = aggregated
                            ? batch_mean_value_aggregated(shadow.snapshots, begin,
                                                          aggregates[r], task, co)
                            : batch_mean_value(grams[r], task, co);
      worst_imag = std::max(worst_imag, std::abs(z.imag()));
      rep.batch_values.push_back(require_real(z));
    }
    rep.estimate = median_of(rep.batch_values);
    rep.imag_residual = worst_imag;
    fill_report_stats(rep);
    rep.analytic_bound = batch_variance_bound(rep.d, rep.s, rep.batch_size, task.budget,
                                              task.purity, cal.batch_var_c);
    rep.bound_pass = rep.empirical_variance <= rep.analytic_bound;
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace cseu
