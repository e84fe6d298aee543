#include "heis/polynomial.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace heis {

Polynomial::Polynomial(int num_vars) : num_vars_(num_vars) {
  if (num_vars < 0) throw std::invalid_argument("Polynomial: negative variable count");
}

Polynomial Polynomial::constant(int num_vars, double c) {
  Polynomial p(num_vars);
  p.add_term(Exponents(num_vars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int num_vars, int index) {
  if (index < 0 || index >= num_vars) throw std::out_of_range("Polynomial::variable");
  Exponents e(num_vars, 0);
  e[index] = 1;
  return monomial(e);
}

Polynomial Polynomial::monomial(const Exponents& exps, double c) {
  Polynomial p(static_cast<int>(exps.size()));
  p.add_term(exps, c);
  return p;
}

void Polynomial::add_term(const Exponents& exps, double c) {
  if (static_cast<int>(exps.size()) != num_vars_)
    throw std::invalid_argument("Polynomial::add_term: exponent length mismatch");
  if (c == 0.0) return;
  auto& slot = terms_[exps];
  slot += c;
  if (slot == 0.0) terms_.erase(exps);
}

void Polynomial::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second == 0.0)
      it = terms_.erase(it);
    else
      ++it;
  }
}

Polynomial Polynomial::derivative(int index) const {
  if (index < 0 || index >= num_vars_) throw std::out_of_range("Polynomial::derivative");
  Polynomial out(num_vars_);
  for (const auto& [e, c] : terms_) {
    if (e[index] == 0) continue;
    Exponents d = e;
    d[index] -= 1;
    out.add_term(d, c * e[index]);
  }
  return out;
}

double Polynomial::evaluate(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != num_vars_)
    throw std::invalid_argument("Polynomial::evaluate: dimension mismatch");
  double s = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = c;
    for (int i = 0; i < num_vars_; ++i) m *= std::pow(x[i], e[i]);
    s += m;
  }
  return s;
}

int Polynomial::total_degree() const {
  int deg = -1;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int k : e) d += k;
    deg = std::max(deg, d);
  }
  return deg;
}

double Polynomial::constant_term() const {
  auto it = terms_.find(Exponents(num_vars_, 0));
  return it == terms_.end() ? 0.0 : it->second;
}

bool Polynomial::is_zero(double tol) const {
  for (const auto& [e, c] : terms_)
    if (std::abs(c) > tol) return false;
  return true;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (o.num_vars_ != num_vars_) throw std::invalid_argument("Polynomial: variable count mismatch");
  Polynomial out = *this;
  for (const auto& [e, c] : o.terms_) out.add_term(e, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (o.num_vars_ != num_vars_) throw std::invalid_argument("Polynomial: variable count mismatch");
  Polynomial out(num_vars_);
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : o.terms_) {
      Exponents e(num_vars_);
      for (int i = 0; i < num_vars_; ++i) e[i] = e1[i] + e2[i];
      out.add_term(e, c1 * c2);
    }
  }
  return out;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial out = *this;
  for (auto& [e, c] : out.terms_) c *= s;
  out.prune();
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    os << std::abs(c);
    for (int i = 0; i < num_vars_; ++i) {
      if (e[i] == 0) continue;
      os << "*x" << i;
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

VectorField::VectorField(std::vector<Polynomial> coefficients) : coeffs_(std::move(coefficients)) {
  for (const auto& c : coeffs_)
    if (c.num_vars() != num_vars())
      throw std::invalid_argument("VectorField: coefficient dimension mismatch");
}

Polynomial VectorField::apply(const Polynomial& f) const {
  if (f.num_vars() != num_vars()) throw std::invalid_argument("VectorField::apply: dimension mismatch");
  Polynomial out(num_vars());
  for (int i = 0; i < num_vars(); ++i) {
    if (coeffs_[i].terms().empty()) continue;
    out = out + coeffs_[i] * f.derivative(i);
  }
  return out;
}

std::string VectorField::to_string() const {
  std::ostringstream os;
  for (int i = 0; i < num_vars(); ++i) {
    if (coeffs_[i].terms().empty()) continue;
    os << "d/dx" << i << " : " << coeffs_[i].to_string() << "\n";
  }
  return os.str();
}

Polynomial apply_commutator(const VectorField& a, const VectorField& b, const Polynomial& f) {
  return a.apply(b.apply(f)) - b.apply(a.apply(f));
}

std::vector<Polynomial> monomial_basis(int num_vars, int max_degree) {
  std::vector<Polynomial> out;
  Polynomial::Exponents e(num_vars, 0);
  std::function<void(int, int)> rec = [&](int var, int remaining) {
    if (var == num_vars) {
      out.push_back(Polynomial::monomial(e));
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      e[var] = k;
      rec(var + 1, remaining - k);
    }
    e[var] = 0;
  };
  rec(0, max_degree);
  return out;
}

}  // namespace heis
