#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "heis/fock.hpp"
#include "heis/group.hpp"

namespace heis {

using TruncationPtr = std::shared_ptr<const FockTruncation>;

class SymbolMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SpectralGapError : public std::runtime_error {
 public:
  SpectralGapError(double eigenvalue, double tol);
  double eigenvalue() const { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// Principal symbol of a left-invariant homogeneous operator of order m on the
/// flat model, stored as its two Fock-sector matrices (μ = +1 and μ = −1).
///
/// Only the leading block of levels <= reliable_level is exact; entries
/// outside it are truncation artifacts and all identities are checked on the
/// leading block.
class HomogeneousSymbol {
 public:
  HomogeneousSymbol(int order, Eigen::MatrixXcd plus, Eigen::MatrixXcd minus, TruncationPtr trunc,
                    FrameConvention conv, int reliable_level);

  int order() const { return order_; }
  const Eigen::MatrixXcd& plus() const { return plus_; }
  const Eigen::MatrixXcd& minus() const { return minus_; }
  const Eigen::MatrixXcd& sector(int mu) const;
  const FockTruncation& trunc() const { return *trunc_; }
  const TruncationPtr& trunc_ptr() const { return trunc_; }
  const FrameConvention& convention() const { return conv_; }
  int reliable_level() const { return reliable_level_; }
  /// Dimension of the reliable leading block.
  int reliable_size() const;
  /// Sector restricted to the reliable block.
  Eigen::MatrixXcd reliable_block(int mu) const;

  HomogeneousSymbol with_reliable_level(int level) const;

 private:
  int order_;
  Eigen::MatrixXcd plus_, minus_;
  TruncationPtr trunc_;
  FrameConvention conv_;
  int reliable_level_;
};

TruncationPtr make_truncation(int n, int N);

HomogeneousSymbol identity_symbol(const TruncationPtr& t, const FrameConvention& conv);

/// Symbol of −iX_j: order 1 for j >= 1, order 2 for j = 0.
HomogeneousSymbol field_symbol(int j, const TruncationPtr& t, const FrameConvention& conv);

/// Sectorwise matrix product; order adds. The reliable level drops by the
/// largest non-negative order, which bounds how far either factor moves the
/// Hermite level.
HomogeneousSymbol star(const HomogeneousSymbol& p, const HomogeneousSymbol& q);

/// Sum of symbols of equal order.
HomogeneousSymbol operator+(const HomogeneousSymbol& a, const HomogeneousSymbol& b);
HomogeneousSymbol operator-(const HomogeneousSymbol& a, const HomogeneousSymbol& b);
HomogeneousSymbol operator*(cplx s, const HomogeneousSymbol& a);

/// Largest entry of a − b over both sectors on the common reliable block.
double reliable_distance(const HomogeneousSymbol& a, const HomogeneousSymbol& b);
/// Largest spectral norm over both sectors on the reliable block.
double reliable_norm(const HomogeneousSymbol& a);

struct FollandSteinParams {
  cplx lambda = 0.0;
  int n = 1;
};

/// Symbol of −½Σ X_j² + iλ X_0: sectors ½Σ dΓ_μ(−iX_j)² − λμ·I.
HomogeneousSymbol folland_stein_symbol(const FollandSteinParams& params, const TruncationPtr& t,
                                       const FrameConvention& conv);

inline constexpr double kSingularityTolerance = 1e-8;

struct NotInvertible {
  double sigma_min_plus = 0.0;
  double sigma_min_minus = 0.0;
  bool plus_singular = false;
  bool minus_singular = false;
};

/// Sectorwise inverse on the reliable block, or NotInvertible when a sector's
/// condition number exceeds 1/kSingularityTolerance.
std::variant<HomogeneousSymbol, NotInvertible> invert(const HomogeneousSymbol& p);

/// Smallest singular value of each sector on the reliable block.
std::pair<double, double> sector_sigma_min(const HomogeneousSymbol& p);

/// Orthogonal projectors onto eigenvectors with |eigenvalue| <= tol; a
/// negative tol selects 1e-6·reliable_norm(p). Throws SpectralGapError when an
/// eigenvalue sits in (tol, 10·tol].
HomogeneousSymbol kernel_projector(const HomogeneousSymbol& p, double tol = -1.0);

/// Inverse on the orthogonal complement of the kernel, zero on the kernel.
HomogeneousSymbol spectral_pseudo_inverse(const HomogeneousSymbol& p, double tol = -1.0);

inline constexpr double kSliceEpsilon = 0.05;

/// Scalar value p(ξ) = |ξ_0|^{m/2} · W_μ(η) with μ = sign ξ_0 and
/// η = ξ' / sqrt(|c|·|ξ_0|), where W_μ is the Weyl symbol of the μ-sector.
cplx scalar_slice(const HomogeneousSymbol& p, const Eigen::VectorXd& xi);

/// Symbol of the operator whose symbol is ξ ↦ p(−ξ).
HomogeneousSymbol swap_symbol(const HomogeneousSymbol& p);
/// Symbol of C P C with C complex conjugation: ξ ↦ conj p(−ξ).
HomogeneousSymbol conjugate_symbol(const HomogeneousSymbol& p);
/// Formal adjoint: sectorwise conjugate transpose.
HomogeneousSymbol adjoint_symbol(const HomogeneousSymbol& p);

/// Finite asymptotic sum of homogeneous terms, kept as a list.
struct SymbolExpansion {
  std::vector<HomogeneousSymbol> terms;
  /// Term of the given order, or nullptr.
  const HomogeneousSymbol* term(int order) const;
};

/// Product of expansions; terms of equal order are added.
SymbolExpansion star(const SymbolExpansion& p, const SymbolExpansion& q);

}  // namespace heis
