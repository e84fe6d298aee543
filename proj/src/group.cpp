#include "heis/group.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace heis {

FrameConvention FrameConvention::from_name(const std::string& name) {
  if (name == "section2") return section2();
  if (name == "section5") return section5();
  throw std::invalid_argument("unknown frame convention '" + name + "'");
}

GroupElement::GroupElement(int n, Eigen::VectorXd coords) : n_(n), coords_(std::move(coords)) {
  if (n < 1) throw std::invalid_argument("GroupElement: n must be >= 1");
  if (coords_.size() != 2 * n + 1)
    throw std::invalid_argument("GroupElement: expected 2n+1 coordinates");
}

GroupElement GroupElement::identity(int n) { return GroupElement(n, Eigen::VectorXd::Zero(2 * n + 1)); }

Covector::Covector(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() < 1) throw std::invalid_argument("Covector: empty");
}

namespace {

GroupElement mul_scaled(const GroupElement& x, const GroupElement& y, double s) {
  if (x.n() != y.n()) throw std::invalid_argument("group_mul: dimension mismatch");
  const int n = x.n();
  Eigen::VectorXd z = x.coords() + y.coords();
  double twist = 0.0;
  for (int j = 1; j <= n; ++j) twist += x[n + j] * y[j] - x[j] * y[n + j];
  z(0) += s * twist;
  return GroupElement(n, z);
}

}  // namespace

GroupElement group_mul(const GroupElement& x, const GroupElement& y) { return mul_scaled(x, y, 1.0); }

GroupElement group_mul(const GroupElement& x, const GroupElement& y, const FrameConvention& conv) {
  return mul_scaled(x, y, conv.field_coefficient());
}

GroupElement group_inverse(const GroupElement& x) { return GroupElement(x.n(), -x.coords()); }

Covector dilate(double t, const Covector& xi) {
  if (!(t > 0.0)) throw std::invalid_argument("dilate: t must be positive");
  Eigen::VectorXd c = xi.coords() * t;
  c(0) = t * t * xi[0];
  return Covector(c);
}

double homogeneous_norm(const Covector& xi) {
  double s = xi[0] * xi[0];
  for (int i = 1; i < xi.dim(); ++i) s += std::pow(xi[i], 4);
  return std::pow(s, 0.25);
}

VectorField left_invariant_field(int n, int j, const FrameConvention& conv) {
  if (n < 1) throw std::invalid_argument("left_invariant_field: n must be >= 1");
  if (j < 0 || j > 2 * n) throw std::out_of_range("left_invariant_field: index out of range");
  const int nv = 2 * n + 1;
  std::vector<Polynomial> coeffs(nv, Polynomial(nv));
  coeffs[j] = Polynomial::constant(nv, 1.0);
  const double a = conv.field_coefficient();
  if (j >= 1 && j <= n) {
    coeffs[0] = Polynomial::variable(nv, n + j) * a;
  } else if (j > n) {
    coeffs[0] = Polynomial::variable(nv, j - n) * (-a);
  }
  return VectorField(std::move(coeffs));
}

Eigen::MatrixXd levi_form(int n, const FrameConvention& conv) {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  const double c = conv.bracket_constant();
  for (int j = 0; j < n; ++j) {
    L(j, n + j) = c;
    L(n + j, j) = -c;
  }
  return L;
}

GradedVector tangent_group_mul(const GradedVector& x, const GradedVector& y, const Eigen::MatrixXd& levi) {
  if (x.grade1.size() != y.grade1.size() || levi.rows() != x.grade1.size() || levi.cols() != levi.rows())
    throw std::invalid_argument("tangent_group_mul: dimension mismatch");
  GradedVector z;
  z.grade2 = x.grade2 + y.grade2 + 0.5 * x.grade1.dot(levi * y.grade1);
  z.grade1 = x.grade1 + y.grade1;
  return z;
}

GradedVector dilate(double t, const GradedVector& x) {
  if (!(t > 0.0)) throw std::invalid_argument("dilate: t must be positive");
  return {t * t * x.grade2, t * x.grade1};
}

GroupElement TrivialChart::apply(const GroupElement& x) const {
  return group_mul(group_inverse(base), x);
}

std::string dump_frame(int n, const FrameConvention& conv) {
  std::ostringstream os;
  os << "# frame " << conv.name() << " n=" << n << "\n";
  for (int j = 0; j <= 2 * n; ++j) {
    os << "X" << j << ":\n" << left_invariant_field(n, j, conv).to_string();
  }
  return os.str();
}

}  // namespace heis
