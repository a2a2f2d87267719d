#pragma once

// Dense complex LU with partial pivoting and a cyclic Jacobi eigensolver for
// real symmetric matrices.  Raw in-place kernels are exposed for the tracker
// hot path; the throwing wrappers implement the public contracts.

#include <complex>
#include <vector>

#include "dln/errors.hpp"
#include "dln/poly.hpp"

namespace dln {

struct ComplexMatrix {
  int rows = 0, cols = 0;
  std::vector<Complex> a;  // row-major

  ComplexMatrix() = default;
  ComplexMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
  Complex& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const Complex& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
  // Infinity norm: max absolute row sum.
  double norm_inf() const;
};

struct LuInfo {
  double min_pivot = 0.0;  // smallest |pivot| seen, including a failing one
  int bad_pivot = -1;      // first pivot index below threshold, -1 if none
  bool ok() const { return bad_pivot < 0; }
};

// Factor the n x n row-major matrix in place (L below diagonal, U on and
// above), recording row swaps in piv[0..n-1].  Elimination stops at the
// first pivot whose magnitude falls below `threshold`.
LuInfo lu_factor_inplace(Complex* a, int n, int* piv, double threshold);

// Solve L U x = P b for a factorization produced above; b is overwritten.
void lu_solve_inplace(const Complex* a, int n, const int* piv, Complex* b);

// Public contract: solves A x = b, throwing SingularMatrixError (with the
// failing pivot index) when a pivot magnitude drops below 1e-14 * ||A||_inf.
std::vector<Complex> lu_solve(const ComplexMatrix& A, const std::vector<Complex>& b);

struct SymmetricRealMatrix {
  int n = 0;
  std::vector<double> a;  // row-major, exactly symmetric

  SymmetricRealMatrix() = default;
  explicit SymmetricRealMatrix(int n) : n(n), a(static_cast<size_t>(n) * n, 0.0) {}
  double& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  const double& at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

  // Validates |a_ij - a_ji| <= 1e-10 * (1 + |a_ij|) entrywise, then stores
  // the symmetrized average.  Throws std::invalid_argument on violation.
  static SymmetricRealMatrix from_nearly_symmetric(int n, const std::vector<double>& data);

  double trace() const;
  double frobenius_norm() const;
};

// All eigenvalues, ascending, via cyclic Jacobi rotations.  Converged when
// the off-diagonal Frobenius norm drops below 1e-12 * ||M||_F; throws
// NumericError if 100 sweeps do not get there.
std::vector<double> sym_eigenvalues(const SymmetricRealMatrix& M);

}  // namespace dln
