#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "heis/polynomial.hpp"

namespace heis {

/// Normalization of the left-invariant frame of H^{2n+1}.
///
/// `section2`: X_j = d_j + x_{n+j} d_0, X_{n+j} = d_{n+j} - x_j d_0, so that
/// [X_j, X_{n+j}] = -2 X_0.
/// `section5`: the same fields with coefficient 1/2, giving [X_j, X_{n+j}] = -X_0.
enum class FrameKind { section2, section5 };

struct FrameConvention {
  FrameKind kind = FrameKind::section5;

  static FrameConvention section2() { return {FrameKind::section2}; }
  static FrameConvention section5() { return {FrameKind::section5}; }

  /// c in [X_j, X_{n+j}] = c X_0.
  double bracket_constant() const { return kind == FrameKind::section2 ? -2.0 : -1.0; }
  /// Coefficient of the x_0-derivative in the horizontal fields.
  double field_coefficient() const { return kind == FrameKind::section2 ? 1.0 : 0.5; }
  std::string name() const { return kind == FrameKind::section2 ? "section2" : "section5"; }
  static FrameConvention from_name(const std::string& name);

  bool operator==(const FrameConvention&) const = default;
};

/// Point of H^{2n+1} in exponential coordinates (x_0, x_1, ..., x_{2n}).
class GroupElement {
 public:
  GroupElement(int n, Eigen::VectorXd coords);
  static GroupElement identity(int n);

  int n() const { return n_; }
  const Eigen::VectorXd& coords() const { return coords_; }
  double operator[](int i) const { return coords_(i); }

 private:
  int n_;
  Eigen::VectorXd coords_;
};

/// Element (xi_0, xi_1, ..., xi_d) of the dual of the Lie algebra.
class Covector {
 public:
  explicit Covector(Eigen::VectorXd coords);

  int dim() const { return static_cast<int>(coords_.size()); }
  const Eigen::VectorXd& coords() const { return coords_; }
  double operator[](int i) const { return coords_(i); }

 private:
  Eigen::VectorXd coords_;
};

/// Group law x.y = (x_0 + y_0 + s * sum_j (x_{n+j} y_j - x_j y_{n+j}), x' + y').
/// The default scale s = 1 is the law whose left-invariant fields are the
/// section2 frame; the section5 frame corresponds to s = 1/2.
GroupElement group_mul(const GroupElement& x, const GroupElement& y);
GroupElement group_mul(const GroupElement& x, const GroupElement& y, const FrameConvention& conv);
GroupElement group_inverse(const GroupElement& x);

/// t.xi = (t^2 xi_0, t xi_1, ..., t xi_d).
Covector dilate(double t, const Covector& xi);

/// (xi_0^2 + xi_1^4 + ... + xi_d^4)^{1/4}.
double homogeneous_norm(const Covector& xi);

/// Coefficient table of X_j (j = 0..2n) for the given convention, acting on
/// polynomials in (x_0, ..., x_{2n}).
VectorField left_invariant_field(int n, int j, const FrameConvention& conv);

/// Antisymmetric Levi form on the horizontal space, L(e_i, e_k) = coefficient
/// of X_0 in [X_i, X_k] for i, k = 1..2n (indexed 0..2n-1 here).
Eigen::MatrixXd levi_form(int n, const FrameConvention& conv);

/// Element of the tangent group: grade-2 part (one-dimensional on contact
/// manifolds) plus the horizontal grade-1 part.
struct GradedVector {
  double grade2 = 0.0;
  Eigen::VectorXd grade1;
};

/// (X_0 + X').(Y_0 + Y') = X_0 + Y_0 + L(X', Y')/2 + X' + Y'.
GradedVector tangent_group_mul(const GradedVector& x, const GradedVector& y,
                               const Eigen::MatrixXd& levi);

/// t.(X_0 + X') = t^2 X_0 + t X'.
GradedVector dilate(double t, const GradedVector& x);

/// The flat model's privileged chart at a: a translation, with unit Jacobian.
struct TrivialChart {
  GroupElement base;
  GroupElement apply(const GroupElement& x) const;
  double jacobian() const { return 1.0; }
};

/// Debug dump of the whole frame, one block per field.
std::string dump_frame(int n, const FrameConvention& conv);

}  // namespace heis
