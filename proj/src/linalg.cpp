#include "dln/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dln {

double ComplexMatrix::norm_inf() const {
  double best = 0.0;
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < cols; ++j) s += std::abs(at(i, j));
    best = std::max(best, s);
  }
  return best;
}

LuInfo lu_factor_inplace(Complex* a, int n, int* piv, double threshold) {
  LuInfo info;
  info.min_pivot = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(a[static_cast<size_t>(k) * n + k]);
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(a[static_cast<size_t>(i) * n + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    piv[k] = p;
    if (p != k)
      for (int j = 0; j < n; ++j)
        std::swap(a[static_cast<size_t>(k) * n + j], a[static_cast<size_t>(p) * n + j]);
    info.min_pivot = std::min(info.min_pivot, best);
    if (best < threshold) {
      info.bad_pivot = k;
      return info;
    }
    const Complex pivot = a[static_cast<size_t>(k) * n + k];
    for (int i = k + 1; i < n; ++i) {
      const Complex m = a[static_cast<size_t>(i) * n + k] / pivot;
      a[static_cast<size_t>(i) * n + k] = m;
      if (m != Complex(0.0, 0.0)) {
        const Complex* rk = a + static_cast<size_t>(k) * n;
        Complex* ri = a + static_cast<size_t>(i) * n;
        for (int j = k + 1; j < n; ++j) ri[j] -= m * rk[j];
      }
    }
  }
  if (n == 0) info.min_pivot = 0.0;
  return info;
}

void lu_solve_inplace(const Complex* a, int n, const int* piv, Complex* b) {
  // The factorization swaps whole rows, so the stored multipliers live at their
  // final (permuted) positions. All row interchanges must therefore hit b before
  // forward substitution starts; interleaving them corrupts the solution
  // whenever a later pivot displaces an already-eliminated row.
  for (int k = 0; k < n; ++k)
    if (piv[k] != k) std::swap(b[k], b[piv[k]]);
  for (int k = 0; k < n; ++k) {
    const Complex bk = b[k];
    if (bk != Complex(0.0, 0.0))
      for (int i = k + 1; i < n; ++i) b[i] -= a[static_cast<size_t>(i) * n + k] * bk;
  }
  for (int i = n - 1; i >= 0; --i) {
    Complex s = b[i];
    const Complex* ri = a + static_cast<size_t>(i) * n;
    for (int j = i + 1; j < n; ++j) s -= ri[j] * b[j];
    b[i] = s / ri[i];
  }
}

std::vector<Complex> lu_solve(const ComplexMatrix& A, const std::vector<Complex>& b) {
  if (A.rows != A.cols) throw std::invalid_argument("lu_solve requires a square matrix");
  if (static_cast<int>(b.size()) != A.rows)
    throw std::invalid_argument("lu_solve dimension mismatch");
  const int n = A.rows;
  std::vector<Complex> lu = A.a;
  std::vector<int> piv(n);
  const double threshold = 1e-14 * A.norm_inf();
  const LuInfo info = lu_factor_inplace(lu.data(), n, piv.data(), threshold);
  if (!info.ok()) throw SingularMatrixError(info.bad_pivot, info.min_pivot);
  std::vector<Complex> x = b;
  lu_solve_inplace(lu.data(), n, piv.data(), x.data());
  return x;
}

SymmetricRealMatrix SymmetricRealMatrix::from_nearly_symmetric(
    int n, const std::vector<double>& data) {
  if (static_cast<int>(data.size()) != n * n)
    throw std::invalid_argument("symmetric matrix data size mismatch");
  SymmetricRealMatrix M(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double ij = data[static_cast<size_t>(i) * n + j];
      const double ji = data[static_cast<size_t>(j) * n + i];
      if (std::abs(ij - ji) > 1e-10 * (1.0 + std::abs(ij)))
        throw std::invalid_argument("matrix is not symmetric within tolerance");
      M.at(i, j) = 0.5 * (ij + ji);
    }
  }
  return M;
}

double SymmetricRealMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < n; ++i) t += at(i, i);
  return t;
}

double SymmetricRealMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const double v : a) s += v * v;
  return std::sqrt(s);
}

namespace {

double offdiag_frobenius(const std::vector<double>& a, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) s += a[static_cast<size_t>(i) * n + j] * a[static_cast<size_t>(i) * n + j];
  return std::sqrt(s);
}

}  // namespace

std::vector<double> sym_eigenvalues(const SymmetricRealMatrix& M) {
  const int n = M.n;
  std::vector<double> a = M.a;
  const double target = 1e-12 * M.frobenius_norm();
  auto idx = [n](int i, int j) { return static_cast<size_t>(i) * n + j; };

  int sweeps = 0;
  while (offdiag_frobenius(a, n) > target) {
    if (++sweeps > 100) throw NumericError("jacobi eigensolver did not converge in 100 sweeps");
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[idx(p, q)];
        if (apq == 0.0) continue;
        const double app = a[idx(p, p)], aqq = a[idx(q, q)];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a[idx(k, p)], akq = a[idx(k, q)];
          a[idx(k, p)] = c * akp - s * akq;
          a[idx(k, q)] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[idx(p, k)], aqk = a[idx(q, k)];
          a[idx(p, k)] = c * apk - s * aqk;
          a[idx(q, k)] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = a[idx(i, i)];
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace dln
