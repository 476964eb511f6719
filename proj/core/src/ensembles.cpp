#include "cseu/ensembles.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cseu {

StateEnsemble StateEnsemble::single_qubit_stabilizers() {
  const double s = 1.0 / std::sqrt(2.0);
  StateEnsemble e;
  e.dim = 2;
  e.design_order_claimed = 3;
  auto add = [&e](Complex a, Complex b) {
    CVec v(2);
    v << a, b;
    e.states.emplace_back(std::move(v));
  };
  add(1, 0);
  add(0, 1);
  add(s, s);
  add(s, -s);
  add(s, Complex(0, 1) * s);
  add(s, Complex(0, -1) * s);
  return e;
}

std::vector<double> StateEnsemble::effective_weights() const {
  if (weights.empty())
    return std::vector<double>(states.size(), 1.0 / static_cast<double>(states.size()));
  return weights;
}

DesignReport verify_design(const StateEnsemble& e, int t) {
  if (e.states.empty()) throw std::invalid_argument("verify_design: empty ensemble");
  double n = 1.0;
  for (int k = 0; k < t; ++k) {
    n *= e.dim;
    if (n > 4096.0) throw std::invalid_argument("verify_design: d^t exceeds 4096");
  }
  const auto w = e.effective_weights();
  if (w.size() != e.states.size())
    throw std::invalid_argument("verify_design: weight count mismatch");
  const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
  if (std::abs(wsum - 1.0) > 1e-12)
    throw std::invalid_argument("verify_design: weights must sum to 1");

  const Eigen::Index nn = static_cast<Eigen::Index>(n);
  CMat moment = CMat::Zero(nn, nn);
  for (size_t i = 0; i < e.states.size(); ++i) {
    const CVec v = tensor_power(e.states[i].vec(), t);
    moment.noalias() += w[i] * (v * v.adjoint());
  }
  const CMat target = sym_projector(t, e.dim) / sym_subspace_dim(t, e.dim);
  return DesignReport{max_abs(CMat(moment - target))};
}

Observable::Observable(CMat matrix) : mat_(std::move(matrix)) {
  if (mat_.rows() != mat_.cols()) throw std::invalid_argument("Observable: matrix must be square");
  if (!is_hermitian(mat_, 1e-9)) throw std::invalid_argument("Observable: matrix must be Hermitian");
  frobenius_sq_ = (mat_.adjoint() * mat_).trace().real();
  op_norm_ = operator_norm(mat_);
}

bool Observable::certified_for(double budget, double tol) const {
  return frobenius_sq_ <= budget + tol && op_norm_ <= 1.0 + tol;
}

ObservableStyle observable_style_from_string(const std::string& s) {
  if (s == "gue") return ObservableStyle::Gue;
  if (s == "pauli") return ObservableStyle::Pauli;
  if (s == "scaled-identity") return ObservableStyle::ScaledIdentity;
  throw std::invalid_argument("unknown observable style: " + s);
}

Observable random_observable(int d, double budget, CounterRng& rng, ObservableStyle style) {
  if (budget < 1.0 || budget > static_cast<double>(d))
    throw std::invalid_argument("random_observable: budget must lie in [1, d]");
  switch (style) {
    case ObservableStyle::ScaledIdentity:
      return Observable(CMat(std::sqrt(budget / d) * CMat::Identity(d, d)));
    case ObservableStyle::Pauli: {
      int n = 0;
      while ((1 << n) < d) ++n;
      if ((1 << n) != d)
        throw std::invalid_argument("random_observable: pauli style needs d = 2^n");
      std::string labels;
      do {
        labels.clear();
        for (int q = 0; q < n; ++q) labels.push_back("IXYZ"[rng.below(4)]);
      } while (labels.find_first_not_of('I') == std::string::npos);
      // Pauli strings square to I, so Tr(P^2) = d and ||P|| = 1; scaling by
      // min(1, sqrt(B/d)) certifies Tr(O^2) = min(B, d).
      const double c = std::min(1.0, std::sqrt(budget / d));
      return Observable(CMat(c * pauli_string(labels)));
    }
    case ObservableStyle::Gue: {
      CMat g(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
      CMat h = 0.5 * (g + CMat(g.adjoint()));
      const double fro2 = (h.adjoint() * h).trace().real();
      const double norm = operator_norm(h);
      const double scale = std::max({1.0, norm * (1.0 + 1e-7), std::sqrt(fro2 / budget)});
      return Observable(CMat(h / scale));
    }
  }
  throw std::logic_error("random_observable: unreachable");
}

namespace {

// Paulis over GF(2): x and z bit masks plus a sign. The Hermitian matrix
// realization is sign * i^{|x&z|} X^x Z^z.
struct SignedPauli {
  unsigned x = 0;
  unsigned z = 0;
  int sign = 1;
};

inline int parity(unsigned v) { return __builtin_popcount(v) & 1; }

inline bool commutes(const SignedPauli& a, const SignedPauli& b) {
  return ((parity(a.x & b.z) + parity(a.z & b.x)) & 1) == 0;
}

CMat pauli_matrix(const SignedPauli& p, int n) {
  const int d = 1 << n;
  CMat out = CMat::Zero(d, d);
  const int c = __builtin_popcount(p.x & p.z) & 3;
  const Complex phases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex scale = static_cast<double>(p.sign) * phases[c];
  for (int col = 0; col < d; ++col) {
    const int row = col ^ static_cast<int>(p.x);
    const double zsign = parity(static_cast<unsigned>(col) & p.z) ? -1.0 : 1.0;
    out(row, col) = scale * zsign;
  }
  return out;
}

}  // namespace

UnitaryOp random_clifford(int n, CounterRng& rng) {
  if (n < 1 || n > 3) throw std::invalid_argument("random_clifford: n must be 1, 2, or 3");
  const unsigned full = 1u << n;
  std::vector<SignedPauli> xs(n), zs(n);
  for (int i = 0; i < n; ++i) {
    // Image of X_i: uniform nonzero Pauli commuting with all earlier images.
    for (;;) {
      SignedPauli cand{static_cast<unsigned>(rng.below(full)),
                       static_cast<unsigned>(rng.below(full)), 1};
      if (cand.x == 0 && cand.z == 0) continue;
      bool ok = true;
      for (int j = 0; j < i && ok; ++j)
        ok = commutes(cand, xs[j]) && commutes(cand, zs[j]);
      if (!ok) continue;
      xs[i] = cand;
      break;
    }
    // Image of Z_i: commutes with earlier images, anticommutes with X_i's.
    for (;;) {
      SignedPauli cand{static_cast<unsigned>(rng.below(full)),
                       static_cast<unsigned>(rng.below(full)), 1};
      if (commutes(cand, xs[i])) continue;
      bool ok = true;
      for (int j = 0; j < i && ok; ++j)
        ok = commutes(cand, xs[j]) && commutes(cand, zs[j]);
      if (!ok) continue;
      zs[i] = cand;
      break;
    }
    xs[i].sign = rng.below(2) ? 1 : -1;
    zs[i].sign = rng.below(2) ? 1 : -1;
  }

  const int d = 1 << n;
  // |phi_0> is the joint +1 eigenstate of the Z images; the columns are
  // X-image products applied to it.
  CMat proj = CMat::Identity(d, d);
  for (int i = 0; i < n; ++i)
    proj = CMat(0.5 * (proj + pauli_matrix(zs[i], n) * proj));
  CVec phi0;
  for (int k = 0; k < d; ++k) {
    phi0 = proj.col(k);
    if (phi0.norm() > 1e-6) break;
  }
  phi0 /= phi0.norm();

  std::vector<CMat> xmats(n);
  for (int i = 0; i < n; ++i) xmats[i] = pauli_matrix(xs[i], n);
  CMat u(d, d);
  for (int b = 0; b < d; ++b) {
    CVec col = phi0;
    for (int i = 0; i < n; ++i)
      if ((b >> (n - 1 - i)) & 1) col = xmats[i] * col;
    u.col(b) = col;
  }
  return UnitaryOp(std::move(u));
}

DensityOp induced_density(int d, int lambda, CounterRng& rng) {
  if (d < 1 || lambda < 1)
    throw std::invalid_argument("induced_density: dimensions must be >= 1");
  if (d * lambda < 2) return DensityOp(CMat(CMat::Ones(1, 1)));
  const PureState phi = haar_state(d * lambda, rng);
  CMat rho = partial_trace(phi.projector(), 0, d, lambda);
  rho = CMat(0.5 * (rho + CMat(rho.adjoint())));  // exact Hermiticity for the ctor
  return DensityOp(std::move(rho));
}

}  // namespace cseu
