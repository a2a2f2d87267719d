#pragma once

// Sparse multivariate polynomials over complex coefficients.
//
// Canonical form: terms sorted in descending graded-lex order (higher total
// degree first, ties by exponent comparison from variable 0), like monomials
// merged, exact-zero coefficients removed.  All routines return canonical
// polynomials, so structural equality is meaningful.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dln {

using Complex = std::complex<double>;

struct Monomial {
  // (variable, exponent) pairs sorted by variable index; exponents >= 1.
  std::vector<std::pair<std::int32_t, std::int32_t>> exps;

  int total_degree() const {
    int d = 0;
    for (const auto& [v, e] : exps) d += e;
    return d;
  }
  int exponent_of(int var) const {
    for (const auto& [v, e] : exps)
      if (v == var) return e;
    return 0;
  }
  Monomial times(const Monomial& other) const;
  bool operator==(const Monomial&) const = default;
};

// True if a strictly precedes b in the canonical (descending graded-lex)
// term order.
bool grlex_precedes(const Monomial& a, const Monomial& b);

struct Term {
  Complex coeff;
  Monomial mono;
  bool operator==(const Term&) const = default;
};

class Polynomial {
 public:
  explicit Polynomial(int nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(int nvars, Complex c);
  static Polynomial variable(int nvars, int var);
  // Canonicalizes: validates indices, merges like terms, prunes exact zeros.
  static Polynomial from_terms(int nvars, std::vector<Term> terms);

  int nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Maximum total degree of any term; 0 for the zero polynomial.
  int degree() const;

  Complex eval(std::span<const Complex> point) const;
  double eval_real(std::span<const double> point) const;

  Polynomial differentiate(int var) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(Complex s) const;
  Polynomial operator-() const;

  std::string to_string() const;
  bool operator==(const Polynomial&) const = default;

 private:
  int nvars_;
  std::vector<Term> terms_;
};

struct PolySystem {
  int nvars = 0;
  std::vector<Polynomial> polys;

  std::vector<int> degrees() const;
  std::vector<Complex> eval(std::span<const Complex> point) const;
  // Infinity norm of the system value at the point.
  double residual(std::span<const Complex> point) const;
};

struct PolyMatrix {
  int rows = 0, cols = 0;
  std::vector<Polynomial> entries;  // row-major

  PolyMatrix() = default;
  PolyMatrix(int r, int c, int nvars)
      : rows(r), cols(c), entries(static_cast<size_t>(r) * c, Polynomial(nvars)) {}
  Polynomial& at(int i, int j) { return entries[static_cast<size_t>(i) * cols + j]; }
  const Polynomial& at(int i, int j) const {
    return entries[static_cast<size_t>(i) * cols + j];
  }
};

// Jacobian matrix: entry (i, j) = d polys[i] / d x_j.
PolyMatrix jacobian(const PolySystem& f);

// Degree-d homogenization: every term is padded up to the polynomial's total
// degree with powers of a fresh variable appended at index nvars, so
// homogenize(p)(x, 1) == p(x).  The system form lifts each row to its own
// degree.
Polynomial homogenize(const Polynomial& p);
PolySystem homogenize(const PolySystem& f);

}  // namespace dln
