#include "cseu/otoc.hpp"

#include <cmath>
#include <stdexcept>

#include "cseu/parallel.hpp"

namespace cseu {

namespace {

void require_unitary_traceless(const Observable& o, const char* name) {
  const int d = o.dim();
  const CMat sq = o.matrix() * o.matrix();
  if (max_abs(CMat(sq - identity(d))) > 1e-9)
    throw std::invalid_argument(std::string("OtocTask: ") + name + " must square to I");
  if (std::abs(o.matrix().trace()) > 1e-9)
    throw std::invalid_argument(std::string("OtocTask: ") + name + " must be traceless");
}

}  // namespace

OtocTask OtocTask::at_infinite_temperature(Observable w, Observable v) {
  if (w.dim() != v.dim()) throw std::invalid_argument("OtocTask: dimension mismatch");
  require_unitary_traceless(w, "W");
  require_unitary_traceless(v, "V");
  const int d = w.dim();
  return OtocTask{std::move(w), std::move(v), DensityOp::maximally_mixed(d), true};
}

OtocTask OtocTask::general(Observable w, Observable v, DensityOp state) {
  if (w.dim() != v.dim() || w.dim() != state.dim())
    throw std::invalid_argument("OtocTask: dimension mismatch");
  return OtocTask{std::move(w), std::move(v), std::move(state), false};
}

double exact_otoc(const UnitaryOp& u, const OtocTask& task) {
  if (u.dim() != task.w.dim()) throw std::invalid_argument("exact_otoc: dimension mismatch");
  const CMat wu = u.matrix().adjoint() * task.w.matrix() * u.matrix();
  const Complex c =
      (task.state.matrix() * wu * task.v.matrix().adjoint() * wu * task.v.matrix()).trace();
  if (task.infinite_temperature && std::abs(c.imag()) > 1e-9 * (1.0 + std::abs(c.real())))
    throw std::runtime_error("exact_otoc: imaginary residual in infinite-temperature mode");
  return c.real();
}

Complex otoc_pair_ordered(const Snapshot& si, const Snapshot& sj, const OtocTask& task) {
  if (&si == &sj) throw std::invalid_argument("otoc_pair_ordered: snapshots must be distinct");
  if (si.d != task.w.dim()) throw std::invalid_argument("otoc_pair_ordered: dimension mismatch");
  const auto co = snapshot_coefficients(si.d, si.s);
  const CMat& w = task.w.matrix();
  const CMat w2 = w * w;
  const CMat vdag = task.v.matrix().adjoint();
  const CMat vrho = task.v.matrix() * task.state.matrix();

  const Complex wij = si.phi.vec().dot(w * sj.phi.vec());
  const Complex wji = sj.phi.vec().dot(w * si.phi.vec());
  const Complex v2_i = si.psi.vec().dot(vdag * si.psi.vec());
  const Complex v4_j = sj.psi.vec().dot(vrho * sj.psi.vec());
  const Complex w2_i = si.phi.vec().dot(w2 * si.phi.vec());
  const Complex w2_j = sj.phi.vec().dot(w2 * sj.phi.vec());
  const Complex tr_vdag = vdag.trace();
  const Complex tr_vrho = vrho.trace();
  const Complex tr_w2 = w2.trace();

  return co.a * co.a * wij * wji * v2_i * v4_j - co.a * co.b * w2_i * v2_i * tr_vrho -
         co.a * co.b * w2_j * tr_vdag * v4_j + co.b * co.b * tr_w2 * tr_vdag * tr_vrho;
}

EstimateReport otoc_estimate(const ShadowData& shadow, const OtocTask& task,
                             const Calibration& cal, int threads) {
  const std::size_t m = shadow.rounds();
  if (m < 2) throw std::invalid_argument("otoc_estimate: need at least 2 snapshots");
  const int d = shadow.dim();
  if (d != task.w.dim()) throw std::invalid_argument("otoc_estimate: dimension mismatch");
  const auto co = snapshot_coefficients(d, shadow.spec.s);

  const CMat& w = task.w.matrix();
  const CMat w2 = w * w;
  const CMat vdag = task.v.matrix().adjoint();
  const CMat vrho = task.v.matrix() * task.state.matrix();
  const Complex tr_vdag = vdag.trace();
  const Complex tr_vrho = vrho.trace();
  const Complex tr_w2 = w2.trace();

  CMat phi(d, m), wphi(d, m);
  std::vector<Complex> v2(m), v4(m), w2diag(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& snap = shadow.snapshots[i];
    phi.col(i) = snap.phi.vec();
    v2[i] = snap.psi.vec().dot(vdag * snap.psi.vec());
    v4[i] = snap.psi.vec().dot(vrho * snap.psi.vec());
    w2diag[i] = snap.phi.vec().dot(w2 * snap.phi.vec());
  }
  wphi = w * phi;

  // The coupled term runs over all ordered pairs; fixed-size index blocks
  // with compensated partial sums keep the result independent of the
  // evaluation schedule.
  constexpr std::size_t kBlock = 256;
  const std::size_t blocks = (m + kBlock - 1) / kBlock;
  std::vector<Complex> partial(blocks, Complex(0, 0));
  parallel_for(blocks, threads, [&](std::size_t bi) {
    const std::size_t lo = bi * kBlock;
    const std::size_t hi = std::min(m, lo + kBlock);
    const CMat gram = phi.middleCols(lo, hi - lo).adjoint() * wphi;  // (hi-lo) x m
    KahanSum re, im;
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        const Complex g = gram(i - lo, j);
        const Complex gr = std::conj(g);  // <phi_j|W|phi_i> for Hermitian W
        const Complex term = g * gr * v2[i] * v4[j];
        re.add(term.real());
        im.add(term.imag());
      }
    }
    partial[bi] = Complex(re.value(), im.value());
  });
  KahanSum re_total, im_total;
  for (const Complex& p : partial) {
    re_total.add(p.real());
    im_total.add(p.imag());
  }
  const Complex pair_sum(re_total.value(), im_total.value());

  Complex lin_i = 0.0, lin_j = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    lin_i += w2diag[i] * v2[i];
    lin_j += w2diag[i] * v4[i];
  }
  const double mm = static_cast<double>(m);
  const Complex total = co.a * co.a * pair_sum -
                        co.a * co.b * (mm - 1.0) * (lin_i * tr_vrho + tr_vdag * lin_j) +
                        mm * (mm - 1.0) * co.b * co.b * tr_w2 * tr_vdag * tr_vrho;
  const Complex estimate = total / (mm * (mm - 1.0));

  if (task.infinite_temperature &&
      std::abs(estimate.imag()) > 1e-7 * std::abs(estimate.real()) + 1e-9)
    throw std::runtime_error("otoc_estimate: imaginary residual exceeds tolerance");

  EstimateReport rep;
  rep.d = d;
  rep.s = shadow.spec.s;
  rep.rounds = m;
  rep.batches = 1;
  rep.batch_size = m;
  rep.queries = shadow.queries();
  rep.estimate = estimate.real();
  rep.batch_values = {rep.estimate};
  rep.imag_residual = std::abs(estimate.imag());
  rep.analytic_bound = otoc_variance_bound(d, shadow.spec.s, m, cal.otoc_var_c);
  rep.bound_pass = rep.empirical_variance <= rep.analytic_bound;
  return rep;
}

}  // namespace cseu
