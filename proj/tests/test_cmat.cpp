#include "cseu/cmat.hpp"

#include "doctest.h"
#include "test_support.hpp"

using namespace cseu;
using test::random_cmat;
using test::random_hermitian;
using test::random_permutation;

namespace {

CMat swap4() {
  CMat m = CMat::Zero(4, 4);
  m(0, 0) = m(3, 3) = 1;
  m(1, 2) = m(2, 1) = 1;
  return m;
}

}  // namespace

TEST_CASE("tensor product basics") {
  CHECK(max_abs(CMat(tensor_product(identity(2), identity(2)) - identity(4))) == 0.0);

  const CMat zz = tensor_product(pauli('Z'), pauli('Z'));
  CMat diag = CMat::Zero(4, 4);
  diag(0, 0) = 1;
  diag(1, 1) = -1;
  diag(2, 2) = -1;
  diag(3, 3) = 1;
  CHECK(max_abs(CMat(zz - diag)) == 0.0);

  CMat e00 = CMat::Zero(2, 2), e11 = CMat::Zero(2, 2);
  e00(0, 0) = 1;
  e11(1, 1) = 1;
  CMat expected = CMat::Zero(4, 4);
  expected(1, 1) = 1;
  CHECK(max_abs(CMat(tensor_product(e00, e11) - expected)) == 0.0);
}

TEST_CASE("partial trace") {
  // Maximally entangled marginal at d = 2.
  CVec phi = CVec::Zero(4);
  phi(0) = phi(3) = 1.0;
  const CMat marg = partial_trace(CMat((phi * phi.adjoint()) / 2.0), 0, 2, 2);
  CHECK(max_abs(CMat(marg - 0.5 * identity(2))) < 1e-14);

  CounterRng rng(11);
  const CMat a = random_cmat(3, 3, rng);
  const CMat b = random_cmat(2, 2, rng);
  const CMat ab = tensor_product(a, b);
  CHECK(max_abs(CMat(partial_trace(ab, 0, 3, 2) - b.trace() * a)) < 1e-12);
  CHECK(max_abs(CMat(partial_trace(ab, 1, 3, 2) - a.trace() * b)) < 1e-12);
  CHECK(std::abs(partial_trace(ab, 0, 3, 2).trace() - ab.trace()) < 1e-12);

  CHECK_THROWS(partial_trace(a, 0, 2, 2));
}

TEST_CASE("partial transpose") {
  CVec phi = CVec::Zero(4);
  phi(0) = phi(3) = 1.0;
  const CMat pt = partial_transpose(CMat(phi * phi.adjoint()), 1, 2, 2);
  CHECK(max_abs(CMat(pt - swap4())) < 1e-14);

  CounterRng rng(12);
  const CMat a = random_cmat(2, 2, rng);
  const CMat b = random_cmat(3, 3, rng);
  const CMat ab = tensor_product(a, b);
  CHECK(max_abs(CMat(partial_transpose(ab, 1, 2, 3) -
                     tensor_product(a, CMat(b.transpose())))) < 1e-12);

  const CMat m = random_cmat(6, 6, rng);
  CHECK(max_abs(CMat(partial_transpose(partial_transpose(m, 0, 2, 3), 0, 2, 3) - m)) == 0.0);
  CHECK(max_abs(CMat(partial_transpose(partial_transpose(m, 1, 2, 3), 1, 2, 3) - m)) == 0.0);
}

TEST_CASE("permutation operators") {
  CHECK(max_abs(CMat(permutation_operator({0, 1, 2}, 2) - identity(8))) == 0.0);

  const CMat swap = permutation_operator({1, 0}, 2);
  CHECK(max_abs(CMat(swap - swap4())) == 0.0);

  // Trace of a transposition equals d, by brute force on the constructed
  // matrix.
  CHECK(swap.trace().real() == doctest::Approx(2.0));

  CounterRng rng(13);
  for (int t = 2; t <= 4; ++t) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto p1 = random_permutation(t, rng);
      const auto p2 = random_permutation(t, rng);
      std::vector<int> comp(t);
      for (int i = 0; i < t; ++i) comp[i] = p1[p2[i]];
      const CMat lhs = permutation_operator(p1, 2) * permutation_operator(p2, 2);
      CHECK(max_abs(CMat(lhs - permutation_operator(comp, 2))) < 1e-12);
    }
  }
}

TEST_CASE("symmetric projector") {
  for (int d : {2, 3, 4}) {
    for (int t = 1; t <= 4; ++t) {
      const CMat p = sym_projector(t, d);
      CHECK(max_abs(CMat(p - p.adjoint())) < 1e-12);
      CHECK(frobenius_norm(CMat(p * p - p)) < 1e-9);
      CHECK(std::abs(p.trace().real() - sym_subspace_dim(t, d)) < 1e-9);
    }
  }
  CHECK(sym_projector(2, 2).trace().real() == doctest::Approx(3.0));
  CHECK(sym_projector(3, 2).trace().real() == doctest::Approx(4.0));
  CHECK(sym_projector(4, 2).trace().real() == doctest::Approx(5.0));
}

TEST_CASE("embed and multi-system helpers") {
  CounterRng rng(14);
  const CMat a = random_cmat(2, 2, rng);
  CHECK(max_abs(CMat(embed_on_systems(a, {0}, 2, 2) - tensor_product(a, identity(2)))) == 0.0);
  CHECK(max_abs(CMat(embed_on_systems(a, {1}, 2, 2) - tensor_product(identity(2), a))) == 0.0);

  // Embedding a two-factor operator on out-of-order positions agrees with
  // conjugating the in-order embedding by the swap of those positions.
  const CMat ab = random_cmat(4, 4, rng);
  const CMat direct = embed_on_systems(ab, {2, 0}, 3, 2);
  const CMat inorder = embed_on_systems(ab, {0, 2}, 3, 2);
  const CMat sw02 = permutation_operator({2, 1, 0}, 2);
  CHECK(max_abs(CMat(direct - sw02 * inorder * sw02.adjoint())) < 1e-12);
  CHECK(std::abs(direct.trace() - ab.trace() * 2.0) < 1e-12);

  const CMat big = random_cmat(8, 8, rng);
  CHECK(max_abs(CMat(partial_trace_multi(big, {2}, 3, 2) - partial_trace(big, 0, 4, 2))) <
        1e-12);
  CHECK(max_abs(CMat(partial_transpose_multi(big, {2}, 3, 2) -
                     partial_transpose(big, 1, 4, 2))) < 1e-12);
}

TEST_CASE("operator norm") {
  CHECK(operator_norm(pauli('Z')) == doctest::Approx(1.0));
  CHECK(operator_norm(CMat(3.0 * identity(2))) == doctest::Approx(3.0));

  // Full-spectrum oracle.
  CounterRng rng(15);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 2 + static_cast<int>(rng.below(6));
    const CMat h = random_hermitian(n, rng);
    const double oracle = test::max_abs_eigenvalue(h);
    CHECK(std::abs(operator_norm(h) - oracle) < 1e-7 * std::max(1.0, oracle));
  }
}

TEST_CASE("pauli strings") {
  CHECK(max_abs(CMat(pauli_string("XX") - tensor_product(pauli('X'), pauli('X')))) == 0.0);
  CHECK(pauli_string("XYZ").rows() == 8);
  CHECK(std::abs(pauli_string("XYZ").trace()) < 1e-14);
  CHECK_THROWS(pauli_string("Q"));
}
