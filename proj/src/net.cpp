#include "dln/net.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dln {

void NetworkSpec::validate() const {
  if (H < 1) throw std::invalid_argument("H must be >= 1");
  if (static_cast<int>(hidden.size()) != H)
    throw std::invalid_argument("hidden width list must have H entries");
  if (dx < 1 || dy < 1 || m < 1) throw std::invalid_argument("dimensions must be >= 1");
  for (const int d : hidden)
    if (d < 1) throw std::invalid_argument("hidden widths must be >= 1");
}

int NetworkSpec::layer_rows(int i) const {
  if (i < 1 || i > H + 1) throw std::invalid_argument("layer index out of range");
  return i == H + 1 ? dy : hidden[i - 1];
}

int NetworkSpec::layer_cols(int i) const {
  if (i < 1 || i > H + 1) throw std::invalid_argument("layer index out of range");
  return i == 1 ? dx : hidden[i - 2];
}

int NetworkSpec::layer_offset(int i) const {
  int off = 0;
  for (int l = 1; l < i; ++l) off += layer_size(l);
  return off;
}

int NetworkSpec::var_index(int layer, int row, int col) const {
  return layer_offset(layer) + row * layer_cols(layer) + col;
}

int NetworkSpec::nvars() const {
  int n = 0;
  for (int i = 1; i <= H + 1; ++i) n += layer_size(i);
  return n;
}

int NetworkSpec::min_hidden() const {
  int k = hidden.empty() ? 0 : hidden[0];
  for (const int d : hidden) k = std::min(k, d);
  return k;
}

RegMatrices RegMatrices::uniform(const NetworkSpec& spec, double lambda) {
  RegMatrices reg;
  for (int i = 1; i <= spec.H + 1; ++i)
    reg.lambdas.emplace_back(spec.layer_size(i), lambda);
  return reg;
}

void RegMatrices::validate(const NetworkSpec& spec) const {
  if (static_cast<int>(lambdas.size()) != spec.H + 1)
    throw std::invalid_argument("reg must have H+1 layer matrices");
  for (int i = 1; i <= spec.H + 1; ++i)
    if (static_cast<int>(lambdas[i - 1].size()) != spec.layer_size(i))
      throw std::invalid_argument("reg layer " + std::to_string(i) + " size mismatch");
}

namespace {

void validate_data_sizes(const NetworkSpec& spec, size_t xs, size_t ys) {
  if (xs != static_cast<size_t>(spec.dx) * spec.m)
    throw std::invalid_argument("X must be dx*m entries, row-major");
  if (ys != static_cast<size_t>(spec.dy) * spec.m)
    throw std::invalid_argument("Y must be dy*m entries, row-major");
}

// Symbolic weight matrix W_i with variable entries.
PolyMatrix weight_matrix(const NetworkSpec& spec, int i) {
  const int n = spec.nvars();
  PolyMatrix W(spec.layer_rows(i), spec.layer_cols(i), n);
  for (int r = 0; r < W.rows; ++r)
    for (int c = 0; c < W.cols; ++c)
      W.at(r, c) = Polynomial::variable(n, spec.var_index(i, r, c));
  return W;
}

PolyMatrix const_matrix(int nvars, int rows, int cols, const std::vector<Complex>& data) {
  PolyMatrix M(rows, cols, nvars);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      M.at(r, c) = Polynomial::constant(nvars, data[static_cast<size_t>(r) * cols + c]);
  return M;
}

PolyMatrix matmul(const PolyMatrix& A, const PolyMatrix& B) {
  if (A.cols != B.rows) throw std::invalid_argument("polynomial matmul shape mismatch");
  const int nv = A.entries.empty() ? (B.entries.empty() ? 0 : B.entries[0].nvars())
                                   : A.entries[0].nvars();
  PolyMatrix C(A.rows, B.cols, nv);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < B.cols; ++j) {
      Polynomial s(nv);
      for (int k = 0; k < A.cols; ++k) s = s + A.at(i, k) * B.at(k, j);
      C.at(i, j) = s;
    }
  return C;
}

PolyMatrix transpose(const PolyMatrix& A) {
  const int nv = A.entries.empty() ? 0 : A.entries[0].nvars();
  PolyMatrix T(A.cols, A.rows, nv);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
  return T;
}

PolyMatrix sub(const PolyMatrix& A, const PolyMatrix& B) {
  PolyMatrix C = A;
  for (size_t k = 0; k < C.entries.size(); ++k) C.entries[k] = A.entries[k] - B.entries[k];
  return C;
}

// X X^T (dx x dx) and Y X^T (dy x dx) from row-major complex data.
std::vector<Complex> gram_xxt(const std::vector<Complex>& X, int dx, int m) {
  std::vector<Complex> g(static_cast<size_t>(dx) * dx);
  for (int i = 0; i < dx; ++i)
    for (int j = 0; j < dx; ++j) {
      Complex s(0.0, 0.0);
      for (int k = 0; k < m; ++k)
        s += X[static_cast<size_t>(i) * m + k] * X[static_cast<size_t>(j) * m + k];
      g[static_cast<size_t>(i) * dx + j] = s;
    }
  return g;
}

std::vector<Complex> gram_yxt(const std::vector<Complex>& Y, const std::vector<Complex>& X,
                              int dy, int dx, int m) {
  std::vector<Complex> g(static_cast<size_t>(dy) * dx);
  for (int i = 0; i < dy; ++i)
    for (int j = 0; j < dx; ++j) {
      Complex s(0.0, 0.0);
      for (int k = 0; k < m; ++k)
        s += Y[static_cast<size_t>(i) * m + k] * X[static_cast<size_t>(j) * m + k];
      g[static_cast<size_t>(i) * dx + j] = s;
    }
  return g;
}

Polynomial loss_impl(const NetworkSpec& spec, const std::vector<Complex>& X,
                     const std::vector<Complex>& Y,
                     const std::vector<std::vector<Complex>>& lambdas) {
  spec.validate();
  const int n = spec.nvars();

  PolyMatrix W = weight_matrix(spec, 1);
  for (int i = 2; i <= spec.H + 1; ++i) W = matmul(weight_matrix(spec, i), W);
  const PolyMatrix P = matmul(W, const_matrix(n, spec.dx, spec.m, X));

  Polynomial loss(n);
  for (int r = 0; r < spec.dy; ++r)
    for (int s = 0; s < spec.m; ++s) {
      const Polynomial diff =
          P.at(r, s) - Polynomial::constant(n, Y[static_cast<size_t>(r) * spec.m + s]);
      loss = loss + diff * diff * Complex(0.5, 0.0);
    }
  for (int i = 1; i <= spec.H + 1; ++i) {
    const int off = spec.layer_offset(i);
    for (int k = 0; k < spec.layer_size(i); ++k) {
      const Complex lam = lambdas[i - 1][k];
      if (lam != Complex(0.0, 0.0)) {
        const Polynomial w = Polynomial::variable(n, off + k);
        loss = loss + w * w * (lam * 0.5);
      }
    }
  }
  return loss;
}

PolySystem gradient_impl(const NetworkSpec& spec, const std::vector<Complex>& X,
                         const std::vector<Complex>& Y,
                         const std::vector<std::vector<Complex>>& lambdas) {
  spec.validate();
  const int n = spec.nvars();

  std::vector<PolyMatrix> Wmat(spec.H + 2);
  for (int i = 1; i <= spec.H + 1; ++i) Wmat[i] = weight_matrix(spec, i);

  PolyMatrix W = Wmat[1];
  for (int i = 2; i <= spec.H + 1; ++i) W = matmul(Wmat[i], W);

  const PolyMatrix XXt = const_matrix(n, spec.dx, spec.dx, gram_xxt(X, spec.dx, spec.m));
  const PolyMatrix YXt =
      const_matrix(n, spec.dy, spec.dx, gram_yxt(Y, X, spec.dy, spec.dx, spec.m));
  const PolyMatrix R = sub(matmul(W, XXt), YXt);  // dy x dx

  PolySystem sys;
  sys.nvars = n;
  sys.polys.resize(n, Polynomial(n));
  for (int i = 1; i <= spec.H + 1; ++i) {
    // U_i^T = W_{i+1}^T ... W_{H+1}^T,  V_i^T = W_1^T ... W_{i-1}^T.
    PolyMatrix G = R;
    if (i < spec.H + 1) {
      PolyMatrix UiT = transpose(Wmat[i + 1]);
      for (int j = i + 2; j <= spec.H + 1; ++j) UiT = matmul(UiT, transpose(Wmat[j]));
      G = matmul(UiT, R);
    }
    if (i > 1) {
      PolyMatrix ViT = transpose(Wmat[1]);
      for (int j = 2; j <= i - 1; ++j) ViT = matmul(ViT, transpose(Wmat[j]));
      G = matmul(G, ViT);
    }
    const int off = spec.layer_offset(i);
    for (int r = 0; r < spec.layer_rows(i); ++r)
      for (int c = 0; c < spec.layer_cols(i); ++c) {
        Polynomial g = G.at(r, c);
        const int vi = off + r * spec.layer_cols(i) + c;
        const Complex lam = lambdas[i - 1][static_cast<size_t>(r) * spec.layer_cols(i) + c];
        if (lam != Complex(0.0, 0.0)) g = g + Polynomial::variable(n, vi) * lam;
        sys.polys[vi] = g;
      }
  }
  return sys;
}

std::vector<Complex> to_complex(const std::vector<double>& v) {
  return {v.begin(), v.end()};
}

std::vector<std::vector<Complex>> to_complex(const std::vector<std::vector<double>>& v) {
  std::vector<std::vector<Complex>> out;
  out.reserve(v.size());
  for (const auto& row : v) out.emplace_back(row.begin(), row.end());
  return out;
}

}  // namespace

Polynomial build_loss(const NetworkSpec& spec, const DataMatrices& data,
                      const RegMatrices& reg) {
  validate_data_sizes(spec, data.X.size(), data.Y.size());
  reg.validate(spec);
  return loss_impl(spec, to_complex(data.X), to_complex(data.Y), to_complex(reg.lambdas));
}

PolySystem build_gradient(const NetworkSpec& spec, const DataMatrices& data,
                          const RegMatrices& reg) {
  validate_data_sizes(spec, data.X.size(), data.Y.size());
  reg.validate(spec);
  return gradient_impl(spec, to_complex(data.X), to_complex(data.Y), to_complex(reg.lambdas));
}

Polynomial build_loss_complex(const NetworkSpec& spec, const ComplexFamilyMember& fam) {
  validate_data_sizes(spec, fam.X.size(), fam.Y.size());
  return loss_impl(spec, fam.X, fam.Y, fam.lambdas);
}

PolySystem build_gradient_complex(const NetworkSpec& spec, const ComplexFamilyMember& fam) {
  validate_data_sizes(spec, fam.X.size(), fam.Y.size());
  return gradient_impl(spec, fam.X, fam.Y, fam.lambdas);
}

SymmetricRealMatrix build_hessian_at(const NetworkSpec& spec, const DataMatrices& data,
                                     const RegMatrices& reg,
                                     const std::vector<double>& point) {
  const PolySystem grad = build_gradient(spec, data, reg);
  if (static_cast<int>(point.size()) != grad.nvars)
    throw std::invalid_argument("point dimension mismatch");
  const PolyMatrix J = jacobian(grad);
  const int n = grad.nvars;
  std::vector<double> h(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      h[static_cast<size_t>(i) * n + j] = J.at(i, j).eval_real(point);
  return SymmetricRealMatrix::from_nearly_symmetric(n, h);
}

WeightPoint sign_flip(const NetworkSpec& spec, const WeightPoint& point, int j, int i) {
  spec.validate();
  if (static_cast<int>(point.size()) != spec.nvars())
    throw std::invalid_argument("point dimension mismatch");
  if (j < 1 || j > spec.H) throw std::invalid_argument("sign_flip layer out of range");
  if (i < 1 || i > spec.hidden[j - 1]) throw std::invalid_argument("sign_flip row out of range");
  WeightPoint out = point;
  const int r = i - 1;
  for (int c = 0; c < spec.layer_cols(j); ++c) out[spec.var_index(j, r, c)] *= -1.0;
  for (int rr = 0; rr < spec.layer_rows(j + 1); ++rr)
    out[spec.var_index(j + 1, rr, r)] *= -1.0;
  return out;
}

WeightPoint scale_transform(const NetworkSpec& spec, const WeightPoint& point,
                            const std::vector<std::vector<double>>& scales) {
  spec.validate();
  if (static_cast<int>(point.size()) != spec.nvars())
    throw std::invalid_argument("point dimension mismatch");
  if (static_cast<int>(scales.size()) != spec.H)
    throw std::invalid_argument("scales must have H vectors");
  for (int j = 1; j <= spec.H; ++j) {
    if (static_cast<int>(scales[j - 1].size()) != spec.hidden[j - 1])
      throw std::invalid_argument("scales[" + std::to_string(j - 1) + "] size mismatch");
    for (const double s : scales[j - 1])
      if (s == 0.0) throw std::invalid_argument("zero scale entry");
  }
  WeightPoint out = point;
  // W_i entry (r, c) maps to a_{i,r} / a_{i-1,c} * w, with a_0 = a_{H+1} = 1.
  for (int i = 1; i <= spec.H + 1; ++i) {
    for (int r = 0; r < spec.layer_rows(i); ++r) {
      const double num = (i <= spec.H) ? scales[i - 1][r] : 1.0;
      for (int c = 0; c < spec.layer_cols(i); ++c) {
        const double den = (i >= 2) ? scales[i - 2][c] : 1.0;
        out[spec.var_index(i, r, c)] *= num / den;
      }
    }
  }
  return out;
}

double verify_flat_family_ex3(double a, double lam) {
  if (a < 0.0) throw std::invalid_argument("a must be >= 0");
  const double lam_max = std::sqrt(197.0 / 2.0);
  if (lam <= 0.0 || lam >= lam_max)
    throw std::invalid_argument("lam must lie in (0, sqrt(197/2))");
  const double radicand = std::sqrt(394.0) / 56.0 - a * a - lam / 28.0;
  if (radicand < 0.0)
    throw std::domain_error("flat family parameter outside the real domain");
  const double g = std::sqrt(radicand);
  const double c = std::sqrt(2.0 / 197.0);

  NetworkSpec spec{.H = 1, .dx = 2, .dy = 2, .hidden = {2}, .m = 3};
  DataMatrices data{.X = {1, 2, 3, 1, 2, 3}, .Y = {1, 2, 3, 1, -3, 2}};
  // Adapter constant 2: see header.
  const RegMatrices reg = RegMatrices::uniform(spec, 2.0 * lam);
  const PolySystem grad = build_gradient(spec, data, reg);

  const WeightPoint w = {a,          a,          g,     g,
                         c * 14 * a, c * 14 * g, c * a, c * g};
  return grad.residual(w);
}

double fd_gradient_check(const NetworkSpec& spec, const DataMatrices& data,
                         const RegMatrices& reg, const std::vector<double>& point,
                         double h) {
  const Polynomial loss = build_loss(spec, data, reg);
  const PolySystem grad = build_gradient(spec, data, reg);
  if (static_cast<int>(point.size()) != grad.nvars)
    throw std::invalid_argument("point dimension mismatch");
  if (h <= 0.0) throw std::invalid_argument("step size must be positive");
  double worst = 0.0;
  std::vector<double> p = point;
  for (int i = 0; i < grad.nvars; ++i) {
    const double saved = p[i];
    p[i] = saved + h;
    const double up = loss.eval_real(p);
    p[i] = saved - h;
    const double dn = loss.eval_real(p);
    p[i] = saved;
    const double fd = (up - dn) / (2.0 * h);
    const double an = grad.polys[i].eval_real(point);
    worst = std::max(worst, std::abs(fd - an) / (1.0 + std::abs(an)));
  }
  return worst;
}

}  // namespace dln
