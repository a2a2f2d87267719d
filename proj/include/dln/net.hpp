#pragma once

// Deep linear network model: loss and gradient polynomial builders for
//
//   L(w) = 1/2 sum_s ||(W_{H+1}...W_1 X)_{.,s} - Y_{.,s}||^2
//        + 1/2 sum_{i,j,k} lambda_{i,j,k} w_{i,j,k}^2
//
// whose gradient w.r.t. W_i is  U_i^T (W X X^T - Y X^T) V_i^T + Lambda_i o W_i
// with W = W_{H+1}...W_1, U_i = W_{H+1}...W_{i+1}, V_i = W_{i-1}...W_1.
//
// Flat variable layout (frozen): layers ascending (W_1 block first), entries
// row-major within each layer.

#include <complex>
#include <cstdint>
#include <vector>

#include "dln/linalg.hpp"
#include "dln/poly.hpp"

namespace dln {

struct NetworkSpec {
  int H = 1;                // number of hidden layers
  int dx = 1;               // input dimension
  int dy = 1;               // output dimension
  std::vector<int> hidden;  // d_1 .. d_H
  int m = 1;                // training samples

  void validate() const;

  // Rows/cols of W_i for 1-based layer i in 1..H+1 (d_0 = dx, d_{H+1} = dy).
  int layer_rows(int i) const;
  int layer_cols(int i) const;
  int layer_offset(int i) const;  // flat index of W_i's (0,0) entry
  int layer_size(int i) const { return layer_rows(i) * layer_cols(i); }
  int var_index(int layer, int row, int col) const;

  int nvars() const;
  int min_hidden() const;  // k = min over hidden widths, reporting only
};

struct DataMatrices {
  std::vector<double> X;  // dx x m, row-major
  std::vector<double> Y;  // dy x m, row-major
};

struct RegMatrices {
  // lambdas[i-1] has the shape of W_i, row-major.
  std::vector<std::vector<double>> lambdas;

  static RegMatrices uniform(const NetworkSpec& spec, double lambda);
  void validate(const NetworkSpec& spec) const;
};

using WeightPoint = std::vector<Complex>;

Polynomial build_loss(const NetworkSpec& spec, const DataMatrices& data,
                      const RegMatrices& reg);

// Gradient components in flat variable order; every component has total
// degree 2H+1 for generic data.
PolySystem build_gradient(const NetworkSpec& spec, const DataMatrices& data,
                          const RegMatrices& reg);

// Complex-parameter variants used for generic family members (parameter
// homotopy pre-solves, genericity tests).  Shapes match DataMatrices /
// RegMatrices with complex entries.
struct ComplexFamilyMember {
  std::vector<Complex> X, Y;
  std::vector<std::vector<Complex>> lambdas;
};
Polynomial build_loss_complex(const NetworkSpec& spec, const ComplexFamilyMember& fam);
PolySystem build_gradient_complex(const NetworkSpec& spec, const ComplexFamilyMember& fam);

// Hessian of the loss at a real point; both triangles of the evaluated
// Jacobian must agree to 1e-10 and are averaged.
SymmetricRealMatrix build_hessian_at(const NetworkSpec& spec, const DataMatrices& data,
                                     const RegMatrices& reg,
                                     const std::vector<double>& point);

// Negate row i of W_j and column i of W_{j+1}; j in 1..H, i in 1..d_j
// (1-based, matching the hidden-unit indexing of the symmetry group).
WeightPoint sign_flip(const NetworkSpec& spec, const WeightPoint& point, int j, int i);

// Diagonal rescaling (A_1 W_1, A_2 W_2 A_1^{-1}, ..., W_{H+1} A_H^{-1});
// scales[j-1] holds the d_j diagonal entries of A_j, all nonzero.
WeightPoint scale_transform(const NetworkSpec& spec, const WeightPoint& point,
                            const std::vector<std::vector<double>>& scales);

// Residual of the printed flat critical family of the fixed 2x2x2, m=3
// instance (X rows (1,2,3),(1,2,3); Y rows (1,2,3),(1,-3,2)):
//   W_1 = [[a,a],[g,g]],  W_2 = sqrt(2/197) [[14a,14g],[a,g]],
//   g(a,lam) = sqrt(sqrt(394)/56 - a^2 - lam/28).
// The printed family satisfies the gradient with uniform reg coefficient
// 2*lam (the adapter constant: the source states the family for the
// single-lambda penalty lam*sum||W_i||^2, whose honest gradient term is
// 2*lam*W_i).  Throws std::domain_error when g is not real.
double verify_flat_family_ex3(double a, double lam);

// Max over components of |fd - analytic| / (1 + |analytic|), central
// differences of build_loss at the given step size.
double fd_gradient_check(const NetworkSpec& spec, const DataMatrices& data,
                         const RegMatrices& reg, const std::vector<double>& point,
                         double h);

}  // namespace dln
