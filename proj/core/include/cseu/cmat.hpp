#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace cseu {

using Complex = std::complex<double>;

// Dense complex matrices in row-major order. Dimensions up to d^4 <= 4096
// are the supported envelope; everything here is plain value semantics.
using CMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVec = Eigen::VectorXcd;

// Construction-time tolerance for Hermiticity / normalization checks, and a
// looser one for values that went through long contractions.
inline constexpr double kConstructTol = 1e-10;
inline constexpr double kArithmeticTol = 1e-8;

bool all_finite(const CMat& m);
bool is_hermitian(const CMat& m, double tol = 1e-9);

double max_abs(const CMat& m);
double frobenius_norm(const CMat& m);

// Kronecker product, shape (ra*rb) x (ca*cb).
CMat tensor_product(const CMat& a, const CMat& b);
CVec tensor_product(const CVec& a, const CVec& b);

// t-fold Kronecker power.
CMat tensor_power(const CMat& a, int t);
CVec tensor_power(const CVec& a, int t);

// Trace out one tensor factor of an operator on H_A (x) H_B.
// keep = 0 keeps A (traces B), keep = 1 keeps B.
CMat partial_trace(const CMat& m, int keep, int dim_a, int dim_b);

// Transpose the chosen factor (0 or 1) of an operator on H_A (x) H_B.
CMat partial_transpose(const CMat& m, int subsystem, int dim_a, int dim_b);

// Transpose an arbitrary subset of t equal-dimension factors.
CMat partial_transpose_multi(const CMat& m, const std::vector<int>& systems, int t, int d);

// Trace out an arbitrary subset of t equal-dimension factors.
CMat partial_trace_multi(const CMat& m, const std::vector<int>& traced, int t, int d);

// T_pi on H^{(x)t}: T_pi |v_1 ... v_t> = |v_{pi^-1(1)} ... v_{pi^-1(t)}>.
// perm[i] = pi(i), 0-based.
CMat permutation_operator(const std::vector<int>& perm, int d);

// Projector onto the symmetric subspace of H^{(x)t}; trace is
// binomial(t+d-1, t).
CMat sym_projector(int t, int d);
double sym_subspace_dim(int t, int d);

// Embed an operator acting on k factors into H^{(x)t} at the given
// positions, identity elsewhere. positions.size() must match the factor
// count of `op` (op is d^k x d^k).
CMat embed_on_systems(const CMat& op, const std::vector<int>& positions, int t, int d);

// Largest singular value by power iteration on m^dag m, relative accuracy
// 1e-8. Throws std::runtime_error if the iteration fails to settle.
double operator_norm(const CMat& m);

CMat identity(int n);

// Single-qubit Paulis and n-qubit Pauli strings. Labels use characters
// 'I', 'X', 'Y', 'Z'; string index 0 is the most significant qubit.
CMat pauli(char label);
CMat pauli_string(const std::string& labels);

}  // namespace cseu
