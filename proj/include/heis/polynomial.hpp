#pragma once

#include <map>
#include <string>
#include <vector>

namespace heis {

/// Sparse real polynomial in a fixed number of variables.
///
/// Monomials are keyed by their exponent vectors. Coefficients are doubles;
/// every coefficient used by the frame conventions (0, ±1/2, ±1) is exact in
/// binary floating point, so derivative and commutator computations are exact.
class Polynomial {
 public:
  using Exponents = std::vector<int>;

  explicit Polynomial(int num_vars = 0);

  static Polynomial constant(int num_vars, double c);
  static Polynomial variable(int num_vars, int index);
  static Polynomial monomial(const Exponents& exps, double c = 1.0);

  int num_vars() const { return num_vars_; }
  const std::map<Exponents, double>& terms() const { return terms_; }

  void add_term(const Exponents& exps, double c);

  Polynomial derivative(int index) const;
  double evaluate(const std::vector<double>& x) const;
  int total_degree() const;

  /// Coefficient of the constant monomial.
  double constant_term() const;

  bool is_zero(double tol = 0.0) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;

  std::string to_string() const;

 private:
  void prune();

  int num_vars_;
  std::map<Exponents, double> terms_;
};

/// First-order differential operator sum_i c_i(x) d/dx_i with polynomial
/// coefficients.
class VectorField {
 public:
  explicit VectorField(std::vector<Polynomial> coefficients);

  int num_vars() const { return static_cast<int>(coeffs_.size()); }
  const Polynomial& coefficient(int i) const { return coeffs_.at(i); }

  Polynomial apply(const Polynomial& f) const;

  /// Plain-text coefficient table, one line per partial derivative.
  std::string to_string() const;

 private:
  std::vector<Polynomial> coeffs_;
};

/// [A, B] f = A(B f) - B(A f).
Polynomial apply_commutator(const VectorField& a, const VectorField& b,
                            const Polynomial& f);

/// All monomials of total degree <= max_degree in num_vars variables.
std::vector<Polynomial> monomial_basis(int num_vars, int max_degree);

}  // namespace heis
