#pragma once

#include <variant>

#include "heis/exterior.hpp"
#include "heis/symbol.hpp"

namespace heis {

/// Homogeneous symbol with values in Hom(fiber_in, fiber_out). Each sector is
/// stored as one matrix in fiber-major order: row f_out·D + i, column
/// f_in·D + j, with D the Fock truncation size. Block (r, c) is the scalar
/// symbol coupling fiber basis vector c to r.
///
/// Ungraded symbols are exact on Fock levels <= reliable_level in every fiber
/// component. Graded symbols preserve w = level + μ·offset(f) and are exact on
/// all states with w <= reliable_level; compositions of graded symbols lose
/// nothing.
class FormSymbol {
 public:
  FormSymbol(Fiber in, Fiber out, int order, Eigen::MatrixXcd plus, Eigen::MatrixXcd minus, TruncationPtr trunc,
             FrameConvention conv, int reliable_level);

  /// F ⊗ s: a constant fiber map times a scalar symbol.
  static FormSymbol tensor(const Fiber& in, const Fiber& out, const Eigen::MatrixXcd& F, const HomogeneousSymbol& s);
  static FormSymbol identity(const Fiber& f, const TruncationPtr& t, const FrameConvention& conv);
  static FormSymbol zero(const Fiber& in, const Fiber& out, int order, const TruncationPtr& t,
                         const FrameConvention& conv);

  const Fiber& fiber_in() const { return in_; }
  const Fiber& fiber_out() const { return out_; }
  int order() const { return order_; }
  const Eigen::MatrixXcd& sector(int mu) const;
  const FockTruncation& trunc() const { return *trunc_; }
  const TruncationPtr& trunc_ptr() const { return trunc_; }
  const FrameConvention& convention() const { return conv_; }
  int reliable_level() const { return reliable_level_; }
  bool graded() const { return graded_; }
  FormSymbol with_grading(bool graded) const;

  HomogeneousSymbol block(int r, int c) const;
  /// Sector restricted to the reliable Fock block of every fiber component.
  Eigen::MatrixXcd reliable_block(int mu) const;
  /// Indices of the reliable rows of a fiber in sector μ.
  std::vector<int> reliable_indices(const Fiber& f, int mu) const;

  FormSymbol with_reliable_level(int level) const;
  FormSymbol adjoint() const;

 private:
  Fiber in_, out_;
  int order_;
  Eigen::MatrixXcd plus_, minus_;
  TruncationPtr trunc_;
  FrameConvention conv_;
  int reliable_level_;
  bool graded_ = false;
};

/// a ∘ b.
FormSymbol compose(const FormSymbol& a, const FormSymbol& b);
FormSymbol operator+(const FormSymbol& a, const FormSymbol& b);
FormSymbol operator-(const FormSymbol& a, const FormSymbol& b);
FormSymbol operator*(cplx s, const FormSymbol& a);

double reliable_distance(const FormSymbol& a, const FormSymbol& b);
double reliable_norm(const FormSymbol& a);

std::variant<FormSymbol, NotInvertible> invert(const FormSymbol& p);
std::pair<double, double> sector_sigma_min(const FormSymbol& p);
FormSymbol kernel_projector(const FormSymbol& p, double tol = -1.0);
FormSymbol spectral_pseudo_inverse(const FormSymbol& p, double tol = -1.0);
/// Smallest eigenvalue over both sectors of a self-adjoint symbol.
double min_eigenvalue(const FormSymbol& p);
/// Trace of each sector of a projector on the reliable block.
std::pair<double, double> projector_ranks(const FormSymbol& p);

}  // namespace heis
