#include "cseu/states.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace cseu {

PureState::PureState(CVec amplitudes) : amp_(std::move(amplitudes)) {
  if (amp_.size() < 1) throw std::invalid_argument("PureState: empty amplitude vector");
  const double n2 = amp_.squaredNorm();
  if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kConstructTol)
    throw std::invalid_argument("PureState: squared norm must be 1 within 1e-10");
}

CMat PureState::projector() const { return amp_ * amp_.adjoint(); }

PureState PureState::basis(int d, int index) {
  if (index < 0 || index >= d) throw std::invalid_argument("PureState::basis: index out of range");
  CVec v = CVec::Zero(d);
  v(index) = 1.0;
  return PureState(std::move(v));
}

DensityOp::DensityOp(CMat matrix) : mat_(std::move(matrix)) {
  if (mat_.rows() != mat_.cols()) throw std::invalid_argument("DensityOp: matrix must be square");
  if (!is_hermitian(mat_, kConstructTol * mat_.rows()))
    throw std::invalid_argument("DensityOp: matrix must be Hermitian");
  if (std::abs(mat_.trace().real() - 1.0) > 1e-9 || std::abs(mat_.trace().imag()) > 1e-9)
    throw std::invalid_argument("DensityOp: trace must be 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw std::invalid_argument("DensityOp: negative eigenvalue");
}

double DensityOp::purity() const { return (mat_ * mat_).trace().real(); }

DensityOp DensityOp::maximally_mixed(int d) {
  return DensityOp(CMat(CMat::Identity(d, d) / static_cast<double>(d)));
}

DensityOp DensityOp::from_pure(const PureState& psi) { return DensityOp(psi.projector()); }

UnitaryOp::UnitaryOp(CMat matrix) : mat_(std::move(matrix)) {
  if (mat_.rows() != mat_.cols()) throw std::invalid_argument("UnitaryOp: matrix must be square");
  const CMat g = mat_.adjoint() * mat_;
  if (max_abs(CMat(g - CMat::Identity(mat_.rows(), mat_.cols()))) > 1e-9)
    throw std::invalid_argument("UnitaryOp: U^dag U must be the identity within 1e-9");
}

PureState UnitaryOp::apply(const PureState& psi) const {
  CVec v = mat_ * psi.vec();
  v /= v.norm();  // kill roundoff drift
  return PureState(std::move(v));
}

CMat UnitaryOp::conjugate(const CMat& a) const { return mat_ * a * mat_.adjoint(); }

UnitaryOp UnitaryOp::identity_op(int d) { return UnitaryOp(CMat(CMat::Identity(d, d))); }

ChoiOp::ChoiOp(int d, CMat matrix) : d_(d), mat_(std::move(matrix)) {
  if (mat_.rows() != static_cast<Eigen::Index>(d) * d || mat_.rows() != mat_.cols())
    throw std::invalid_argument("ChoiOp: matrix must be d^2 x d^2");
  if (!is_hermitian(mat_, 1e-8)) throw std::invalid_argument("ChoiOp: matrix must be Hermitian");
  if (std::abs(mat_.trace().real() - d) > 1e-8)
    throw std::invalid_argument("ChoiOp: trace must equal d");
}

UnitaryOp haar_unitary(int d, CounterRng& rng) {
  if (d < 2) throw std::invalid_argument("haar_unitary: d must be >= 2");
  Eigen::MatrixXcd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  // QR of a complex Ginibre matrix; rephasing columns so the R diagonal is
  // positive makes the distribution exactly Haar.
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    q.col(j) *= (rjj == Complex(0, 0)) ? Complex(1, 0) : rjj / std::abs(rjj);
  }
  return UnitaryOp(CMat(q));
}

PureState haar_state(int d, CounterRng& rng) {
  if (d < 2) throw std::invalid_argument("haar_state: d must be >= 2");
  CVec v(d);
  for (int i = 0; i < d; ++i) v(i) = Complex(rng.normal(), rng.normal());
  v /= v.norm();
  return PureState(std::move(v));
}

ChoiOp choi_of_unitary(const UnitaryOp& u) {
  const int d = u.dim();
  CVec phi = CVec::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) phi(i * d + i) = 1.0;
  const CMat ui = tensor_product(u.matrix(), CMat(CMat::Identity(d, d)));
  const CVec out = ui * phi;
  return ChoiOp(d, CMat(out * out.adjoint()));
}

CMat swap_operator(int d) { return permutation_operator({1, 0}, d); }

}  // namespace cseu
