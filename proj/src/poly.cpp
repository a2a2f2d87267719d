#include "dln/poly.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace dln {

Monomial Monomial::times(const Monomial& other) const {
  Monomial out;
  out.exps.reserve(exps.size() + other.exps.size());
  auto a = exps.begin(), b = other.exps.begin();
  while (a != exps.end() && b != other.exps.end()) {
    if (a->first < b->first) {
      out.exps.push_back(*a++);
    } else if (b->first < a->first) {
      out.exps.push_back(*b++);
    } else {
      out.exps.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  out.exps.insert(out.exps.end(), a, exps.end());
  out.exps.insert(out.exps.end(), b, other.exps.end());
  return out;
}

bool grlex_precedes(const Monomial& a, const Monomial& b) {
  const int da = a.total_degree(), db = b.total_degree();
  if (da != db) return da > db;
  // Equal degree: compare exponents from variable 0 upward; the first
  // variable where they differ decides, larger exponent first.
  auto ia = a.exps.begin(), ib = b.exps.begin();
  while (ia != a.exps.end() && ib != b.exps.end()) {
    if (ia->first != ib->first) {
      // The monomial owning the smaller variable index has a positive
      // exponent there while the other has zero.
      return ia->first < ib->first;
    }
    if (ia->second != ib->second) return ia->second > ib->second;
    ++ia;
    ++ib;
  }
  return ia != a.exps.end();
}

Polynomial Polynomial::constant(int nvars, Complex c) {
  Polynomial p(nvars);
  if (c != Complex(0.0, 0.0)) p.terms_.push_back({c, Monomial{}});
  return p;
}

Polynomial Polynomial::variable(int nvars, int var) {
  if (var < 0 || var >= nvars) throw std::invalid_argument("variable index out of range");
  Polynomial p(nvars);
  p.terms_.push_back({Complex(1.0, 0.0), Monomial{{{var, 1}}}});
  return p;
}

Polynomial Polynomial::from_terms(int nvars, std::vector<Term> terms) {
  for (auto& t : terms) {
    auto& e = t.mono.exps;
    // Accept unsorted and zero-exponent input, normalize here.
    std::sort(e.begin(), e.end());
    std::erase_if(e, [](const auto& ve) { return ve.second == 0; });
    for (size_t k = 0; k < e.size(); ++k) {
      if (e[k].first < 0 || e[k].first >= nvars)
        throw std::invalid_argument("variable index out of range");
      if (e[k].second < 0) throw std::invalid_argument("negative exponent");
      if (k > 0 && e[k].first == e[k - 1].first)
        throw std::invalid_argument("duplicate variable in monomial");
    }
  }
  std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) {
    return grlex_precedes(x.mono, y.mono);
  });
  Polynomial p(nvars);
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coeff += t.coeff;
      if (p.terms_.back().coeff == Complex(0.0, 0.0)) p.terms_.pop_back();
    } else if (t.coeff != Complex(0.0, 0.0)) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.total_degree());
  return d;
}

namespace {

// Power tables: powers[v] holds x_v^0 .. x_v^maxexp(v).
template <typename Scalar>
std::vector<std::vector<Scalar>> power_tables(const std::vector<Term>& terms,
                                              std::span<const Scalar> point) {
  std::vector<int> maxexp(point.size(), 0);
  for (const auto& t : terms)
    for (const auto& [v, e] : t.mono.exps)
      maxexp[v] = std::max(maxexp[v], static_cast<int>(e));
  std::vector<std::vector<Scalar>> powers(point.size());
  for (size_t v = 0; v < point.size(); ++v) {
    powers[v].resize(maxexp[v] + 1);
    powers[v][0] = Scalar(1.0);
    for (int e = 1; e <= maxexp[v]; ++e) powers[v][e] = powers[v][e - 1] * point[v];
  }
  return powers;
}

}  // namespace

Complex Polynomial::eval(std::span<const Complex> point) const {
  if (static_cast<int>(point.size()) != nvars_)
    throw std::invalid_argument("point dimension mismatch");
  const auto powers = power_tables<Complex>(terms_, point);
  Complex acc(0.0, 0.0);
  for (const auto& t : terms_) {
    Complex m = t.coeff;
    for (const auto& [v, e] : t.mono.exps) m *= powers[v][e];
    acc += m;
  }
  return acc;
}

double Polynomial::eval_real(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != nvars_)
    throw std::invalid_argument("point dimension mismatch");
  const auto powers = power_tables<double>(terms_, point);
  double acc = 0.0;
  for (const auto& t : terms_) {
    if (t.coeff.imag() != 0.0)
      throw std::invalid_argument("eval_real on polynomial with complex coefficients");
    double m = t.coeff.real();
    for (const auto& [v, e] : t.mono.exps) m *= powers[v][e];
    acc += m;
  }
  return acc;
}

Polynomial Polynomial::differentiate(int var) const {
  if (var < 0 || var >= nvars_) throw std::invalid_argument("variable index out of range");
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    const int e = t.mono.exponent_of(var);
    if (e == 0) continue;
    Term d;
    d.coeff = t.coeff * static_cast<double>(e);
    d.mono = t.mono;
    for (auto& ve : d.mono.exps) {
      if (ve.first == var) {
        ve.second -= 1;
        break;
      }
    }
    out.push_back(std::move(d));
  }
  return from_terms(nvars_, std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (nvars_ != o.nvars_) throw std::invalid_argument("nvars mismatch");
  std::vector<Term> t = terms_;
  t.insert(t.end(), o.terms_.begin(), o.terms_.end());
  return from_terms(nvars_, std::move(t));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto& t : p.terms_) t.coeff = -t.coeff;
  return p;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (nvars_ != o.nvars_) throw std::invalid_argument("nvars mismatch");
  std::vector<Term> prod;
  prod.reserve(terms_.size() * o.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : o.terms_)
      prod.push_back({a.coeff * b.coeff, a.mono.times(b.mono)});
  return from_terms(nvars_, std::move(prod));
}

Polynomial Polynomial::operator*(Complex s) const {
  if (s == Complex(0.0, 0.0)) return Polynomial(nvars_);
  Polynomial p = *this;
  for (auto& t : p.terms_) t.coeff *= s;
  return p;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  char buf[64];
  for (size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    if (i > 0) out += " + ";
    if (t.coeff.imag() == 0.0) {
      std::snprintf(buf, sizeof buf, "%.17g", t.coeff.real());
      out += buf;
    } else {
      std::snprintf(buf, sizeof buf, "(%.17g%+.17gi)", t.coeff.real(), t.coeff.imag());
      out += buf;
    }
    for (const auto& [v, e] : t.mono.exps) {
      out += "*x" + std::to_string(v);
      if (e > 1) out += "^" + std::to_string(e);
    }
  }
  return out;
}

std::vector<int> PolySystem::degrees() const {
  std::vector<int> d;
  d.reserve(polys.size());
  for (const auto& p : polys) d.push_back(p.degree());
  return d;
}

std::vector<Complex> PolySystem::eval(std::span<const Complex> point) const {
  std::vector<Complex> out;
  out.reserve(polys.size());
  for (const auto& p : polys) out.push_back(p.eval(point));
  return out;
}

double PolySystem::residual(std::span<const Complex> point) const {
  double r = 0.0;
  for (const auto& p : polys) r = std::max(r, std::abs(p.eval(point)));
  return r;
}

PolyMatrix jacobian(const PolySystem& f) {
  PolyMatrix J(static_cast<int>(f.polys.size()), f.nvars, f.nvars);
  for (int i = 0; i < J.rows; ++i)
    for (int j = 0; j < J.cols; ++j) J.at(i, j) = f.polys[i].differentiate(j);
  return J;
}

Polynomial homogenize(const Polynomial& p) {
  const int n = p.nvars();
  const int D = p.degree();
  std::vector<Term> out;
  out.reserve(p.terms().size());
  for (const auto& t : p.terms()) {
    Term lifted = t;
    const int gap = D - t.mono.total_degree();
    if (gap > 0) lifted.mono.exps.emplace_back(n, gap);
    out.push_back(std::move(lifted));
  }
  return Polynomial::from_terms(n + 1, std::move(out));
}

PolySystem homogenize(const PolySystem& f) {
  PolySystem out;
  out.nvars = f.nvars + 1;
  out.polys.reserve(f.polys.size());
  for (const auto& p : f.polys) out.polys.push_back(homogenize(p));
  return out;
}

}  // namespace dln
