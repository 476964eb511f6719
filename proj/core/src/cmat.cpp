#include "cseu/cmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cseu {

bool all_finite(const CMat& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex& z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

bool is_hermitian(const CMat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(CMat(m - m.adjoint())) <= tol;
}

double max_abs(const CMat& m) {
  double mx = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) mx = std::max(mx, std::abs(m.data()[i]));
  return mx;
}

double frobenius_norm(const CMat& m) { return m.norm(); }

CMat tensor_product(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVec tensor_product(const CVec& a, const CVec& b) {
  CVec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CMat tensor_power(const CMat& a, int t) {
  if (t < 1) throw std::invalid_argument("tensor_power: t must be >= 1");
  CMat out = a;
  for (int k = 1; k < t; ++k) out = tensor_product(out, a);
  return out;
}

CVec tensor_power(const CVec& a, int t) {
  if (t < 1) throw std::invalid_argument("tensor_power: t must be >= 1");
  CVec out = a;
  for (int k = 1; k < t; ++k) out = tensor_product(out, a);
  return out;
}

CMat partial_trace(const CMat& m, int keep, int dim_a, int dim_b) {
  const Eigen::Index n = static_cast<Eigen::Index>(dim_a) * dim_b;
  if (m.rows() != n || m.cols() != n)
    throw std::invalid_argument("partial_trace: dimension mismatch");
  if (keep != 0 && keep != 1) throw std::invalid_argument("partial_trace: keep must be 0 or 1");
  if (keep == 0) {
    CMat out = CMat::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i)
      for (int j = 0; j < dim_a; ++j)
        for (int k = 0; k < dim_b; ++k) out(i, j) += m(i * dim_b + k, j * dim_b + k);
    return out;
  }
  CMat out = CMat::Zero(dim_b, dim_b);
  for (int i = 0; i < dim_b; ++i)
    for (int j = 0; j < dim_b; ++j)
      for (int k = 0; k < dim_a; ++k) out(i, j) += m(k * dim_b + i, k * dim_b + j);
  return out;
}

CMat partial_transpose(const CMat& m, int subsystem, int dim_a, int dim_b) {
  const Eigen::Index n = static_cast<Eigen::Index>(dim_a) * dim_b;
  if (m.rows() != n || m.cols() != n)
    throw std::invalid_argument("partial_transpose: dimension mismatch");
  if (subsystem != 0 && subsystem != 1)
    throw std::invalid_argument("partial_transpose: subsystem must be 0 or 1");
  CMat out(n, n);
  for (int ia = 0; ia < dim_a; ++ia)
    for (int ib = 0; ib < dim_b; ++ib)
      for (int ja = 0; ja < dim_a; ++ja)
        for (int jb = 0; jb < dim_b; ++jb) {
          if (subsystem == 0)
            out(ja * dim_b + ib, ia * dim_b + jb) = m(ia * dim_b + ib, ja * dim_b + jb);
          else
            out(ia * dim_b + jb, ja * dim_b + ib) = m(ia * dim_b + ib, ja * dim_b + jb);
        }
  return out;
}

namespace {

// Split a flat index over t base-d digits, most significant first.
inline void split_digits(Eigen::Index idx, int t, int d, int* digits) {
  for (int k = t - 1; k >= 0; --k) {
    digits[k] = static_cast<int>(idx % d);
    idx /= d;
  }
}

inline Eigen::Index join_digits(const int* digits, int t, int d) {
  Eigen::Index idx = 0;
  for (int k = 0; k < t; ++k) idx = idx * d + digits[k];
  return idx;
}

Eigen::Index pow_ll(int d, int t) {
  Eigen::Index n = 1;
  for (int k = 0; k < t; ++k) n *= d;
  return n;
}

}  // namespace

CMat partial_transpose_multi(const CMat& m, const std::vector<int>& systems, int t, int d) {
  const Eigen::Index n = pow_ll(d, t);
  if (m.rows() != n || m.cols() != n)
    throw std::invalid_argument("partial_transpose_multi: dimension mismatch");
  std::vector<bool> flip(t, false);
  for (int s : systems) {
    if (s < 0 || s >= t) throw std::invalid_argument("partial_transpose_multi: bad system index");
    flip[s] = true;
  }
  CMat out(n, n);
  std::vector<int> r(t), c(t), rr(t), cc(t);
  for (Eigen::Index row = 0; row < n; ++row) {
    split_digits(row, t, d, r.data());
    for (Eigen::Index col = 0; col < n; ++col) {
      split_digits(col, t, d, c.data());
      for (int k = 0; k < t; ++k) {
        rr[k] = flip[k] ? c[k] : r[k];
        cc[k] = flip[k] ? r[k] : c[k];
      }
      out(join_digits(rr.data(), t, d), join_digits(cc.data(), t, d)) = m(row, col);
    }
  }
  return out;
}

CMat partial_trace_multi(const CMat& m, const std::vector<int>& traced, int t, int d) {
  const Eigen::Index n = pow_ll(d, t);
  if (m.rows() != n || m.cols() != n)
    throw std::invalid_argument("partial_trace_multi: dimension mismatch");
  std::vector<bool> drop(t, false);
  for (int s : traced) {
    if (s < 0 || s >= t) throw std::invalid_argument("partial_trace_multi: bad system index");
    drop[s] = true;
  }
  std::vector<int> kept;
  for (int k = 0; k < t; ++k)
    if (!drop[k]) kept.push_back(k);
  const int tk = static_cast<int>(kept.size());
  const Eigen::Index nk = pow_ll(d, tk);
  CMat out = CMat::Zero(nk, nk);
  std::vector<int> r(t), c(t);
  for (Eigen::Index row = 0; row < n; ++row) {
    split_digits(row, t, d, r.data());
    for (Eigen::Index col = 0; col < n; ++col) {
      split_digits(col, t, d, c.data());
      bool diag = true;
      for (int k = 0; k < t && diag; ++k)
        if (drop[k] && r[k] != c[k]) diag = false;
      if (!diag) continue;
      Eigen::Index ro = 0, co = 0;
      for (int k : kept) {
        ro = ro * d + r[k];
        co = co * d + c[k];
      }
      out(ro, co) += m(row, col);
    }
  }
  return out;
}

CMat permutation_operator(const std::vector<int>& perm, int d) {
  const int t = static_cast<int>(perm.size());
  std::vector<int> seen(t, 0), inv(t, 0);
  for (int i = 0; i < t; ++i) {
    if (perm[i] < 0 || perm[i] >= t || seen[perm[i]]++)
      throw std::invalid_argument("permutation_operator: not a permutation");
    inv[perm[i]] = i;
  }
  const Eigen::Index n = pow_ll(d, t);
  CMat out = CMat::Zero(n, n);
  std::vector<int> digits(t), moved(t);
  for (Eigen::Index col = 0; col < n; ++col) {
    split_digits(col, t, d, digits.data());
    // output digit at position k is the input digit at position pi^-1(k)
    for (int k = 0; k < t; ++k) moved[k] = digits[inv[k]];
    out(join_digits(moved.data(), t, d), col) = 1.0;
  }
  return out;
}

namespace {

void permutations_rec(std::vector<int>& cur, std::vector<bool>& used,
                      std::vector<std::vector<int>>& all) {
  const int t = static_cast<int>(cur.size());
  const int pos = static_cast<int>(std::count(used.begin(), used.end(), true));
  if (pos == t) {
    all.push_back(cur);
    return;
  }
  for (int v = 0; v < t; ++v) {
    if (used[v]) continue;
    used[v] = true;
    cur[pos] = v;
    permutations_rec(cur, used, all);
    used[v] = false;
  }
}

}  // namespace

CMat sym_projector(int t, int d) {
  if (t < 1) throw std::invalid_argument("sym_projector: t must be >= 1");
  const Eigen::Index n = pow_ll(d, t);
  std::vector<std::vector<int>> perms;
  std::vector<int> cur(t);
  std::vector<bool> used(t, false);
  permutations_rec(cur, used, perms);
  CMat out = CMat::Zero(n, n);
  for (const auto& p : perms) out += permutation_operator(p, d);
  out /= static_cast<double>(perms.size());
  return out;
}

double sym_subspace_dim(int t, int d) {
  // binomial(t+d-1, t)
  double v = 1.0;
  for (int k = 1; k <= t; ++k) v = v * (d - 1 + k) / k;
  return std::round(v);
}

CMat embed_on_systems(const CMat& op, const std::vector<int>& positions, int t, int d) {
  const int k = static_cast<int>(positions.size());
  const Eigen::Index nk = pow_ll(d, k);
  if (op.rows() != nk || op.cols() != nk)
    throw std::invalid_argument("embed_on_systems: operator size does not match positions");
  std::vector<int> pos_of(t, -1);
  for (int i = 0; i < k; ++i) {
    if (positions[i] < 0 || positions[i] >= t || pos_of[positions[i]] != -1)
      throw std::invalid_argument("embed_on_systems: bad positions");
    pos_of[positions[i]] = i;
  }
  const Eigen::Index n = pow_ll(d, t);
  CMat out = CMat::Zero(n, n);
  std::vector<int> r(t), c(t), ro(k), co(k);
  for (Eigen::Index row = 0; row < n; ++row) {
    split_digits(row, t, d, r.data());
    for (Eigen::Index col = 0; col < n; ++col) {
      split_digits(col, t, d, c.data());
      bool rest_diag = true;
      for (int q = 0; q < t && rest_diag; ++q)
        if (pos_of[q] == -1 && r[q] != c[q]) rest_diag = false;
      if (!rest_diag) continue;
      for (int i = 0; i < k; ++i) {
        ro[i] = r[positions[i]];
        co[i] = c[positions[i]];
      }
      out(row, col) = op(join_digits(ro.data(), k, d), join_digits(co.data(), k, d));
    }
  }
  return out;
}

double operator_norm(const CMat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("operator_norm: matrix must be square");
  const Eigen::Index n = m.rows();
  if (n == 0) return 0.0;
  const CMat g = m.adjoint() * m;
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(g(i, i).real()));
  if (scale == 0.0) return 0.0;

  // Power iteration on m^dag m; deterministic start vector with a nudge to
  // avoid landing in an invariant subspace.
  CVec v = CVec::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) += Complex(0.0, 1e-3 * static_cast<double>(i + 1));
  v.normalize();
  double lambda = 0.0;
  const int max_iter = 10000;
  for (int it = 0; it < max_iter; ++it) {
    CVec w = g * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    w /= norm;
    const double next = std::real(Complex(w.adjoint() * g * w));
    if (it > 0 && std::abs(next - lambda) <= 1e-9 * std::max(next, scale)) {
      return std::sqrt(std::max(next, 0.0));
    }
    lambda = next;
    v.swap(w);
  }
  throw std::runtime_error("operator_norm: power iteration did not converge");
}

CMat identity(int n) { return CMat::Identity(n, n); }

CMat pauli(char label) {
  CMat m(2, 2);
  switch (label) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli: label must be one of I,X,Y,Z");
  }
  return m;
}

CMat pauli_string(const std::string& labels) {
  if (labels.empty()) throw std::invalid_argument("pauli_string: empty label");
  CMat out = pauli(labels[0]);
  for (size_t i = 1; i < labels.size(); ++i) out = tensor_product(out, pauli(labels[i]));
  return out;
}

}  // namespace cseu
