#include "cseu/states.hpp"

#include "cseu/stats.hpp"

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "test_support.hpp"

using namespace cseu;
using test::MatrixMoment;

TEST_CASE("type invariants are enforced") {
  CVec bad(2);
  bad << 1.0, 1.0;  // norm sqrt(2)
  CHECK_THROWS(PureState(bad));

  CMat not_herm(2, 2);
  not_herm << 1, Complex(0, 1), Complex(0, 1), 0;
  CHECK_THROWS(DensityOp(not_herm));
  CHECK_THROWS(DensityOp(CMat(2.0 * identity(2))));  // trace 2
  CMat neg(2, 2);
  neg << 1.5, 0, 0, -0.5;
  CHECK_THROWS(DensityOp(neg));

  CHECK_THROWS(UnitaryOp(CMat(2.0 * identity(2))));
  CHECK(DensityOp::maximally_mixed(4).purity() == doctest::Approx(0.25));
}

TEST_CASE("haar unitary is unitary and first moments match") {
  CounterRng rng(21);
  for (int d : {2, 3, 5}) {
    const UnitaryOp u = haar_unitary(d, rng);
    CHECK(max_abs(CMat(u.matrix().adjoint() * u.matrix() - identity(d))) < 1e-10);
  }

  // Monte Carlo vs the Schur-orthogonality first moment at d = 2:
  // E[U (x) U^dag] = T_(1,2)/d and E|U_00|^2 = 1/d.
  const int d = 2;
  MatrixMoment moment(4, 4);
  RunningStats u00;
  CounterRng mc(22);
  for (int k = 0; k < 100000; ++k) {
    const UnitaryOp u = haar_unitary(d, mc);
    moment.add(tensor_product(u.matrix(), CMat(u.matrix().adjoint())));
    u00.add(std::norm(u.matrix()(0, 0)));
  }
  const CMat target = swap_operator(d) / static_cast<double>(d);
  CHECK(moment.max_sigma_deviation(target) < 5.0);
  CHECK(std::abs(u00.mean - 1.0 / d) < 5.0 * u00.standard_error());
}

TEST_CASE("haar state moments") {
  const int d = 3;
  CounterRng rng(23);
  MatrixMoment first(d, d);
  MatrixMoment second(d * d, d * d);
  for (int k = 0; k < 100000; ++k) {
    const PureState psi = haar_state(d, rng);
    CHECK(std::abs(psi.vec().squaredNorm() - 1.0) < 1e-10);
    const CMat proj = psi.projector();
    first.add(proj);
    if (k < 40000) second.add(tensor_product(proj, proj));
  }
  CHECK(first.max_sigma_deviation(CMat(identity(d) / static_cast<double>(d))) < 5.0);
  CHECK(second.max_sigma_deviation(CMat(sym_projector(2, d) / sym_subspace_dim(2, d))) < 5.0);
}

TEST_CASE("choi operator of a unitary") {
  CVec phi = CVec::Zero(4);
  phi(0) = phi(3) = 1.0;

  const ChoiOp c_id = choi_of_unitary(UnitaryOp::identity_op(2));
  CHECK(max_abs(CMat(c_id.matrix() - phi * phi.adjoint())) < 1e-12);
  CHECK(c_id.matrix().trace().real() == doctest::Approx(2.0));

  const CMat x = pauli('X');
  const ChoiOp c_x = choi_of_unitary(UnitaryOp(x));
  const CMat xi = tensor_product(x, identity(2));
  CHECK(max_abs(CMat(c_x.matrix() - xi * (phi * phi.adjoint()) * xi.adjoint())) < 1e-12);

  CounterRng rng(24);
  for (int d : {2, 4}) {
    for (int rep = 0; rep < 50; ++rep) {
      const UnitaryOp u = haar_unitary(d, rng);
      const CMat ups = choi_of_unitary(u).matrix();
      CHECK(std::abs(ups.trace().real() - d) < 1e-9);

      // Rank 1 and positive semidefinite: top eigenvalue d, rest ~ 0.
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ups, Eigen::EigenvaluesOnly);
      const auto& ev = es.eigenvalues();
      CHECK(std::abs(ev(ev.size() - 1) - d) < 1e-6);
      CHECK(ev(0) > -1e-9);
      CHECK(std::abs(ev(ev.size() - 2)) < 1e-8);

      // Alternative route: [(U (x) U^dag) T_(1,2)]^T2.
      const CMat alt = partial_transpose(
          CMat(tensor_product(u.matrix(), CMat(u.matrix().adjoint())) * swap_operator(d)), 1, d,
          d);
      CHECK(max_abs(CMat(ups - alt)) < 1e-10);
    }
  }
}
