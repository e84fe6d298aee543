#pragma once

#include <string>
#include <vector>

#include "heis/form_symbol.hpp"

namespace heis {

/// Horizontal forms Λ^k(H*) of H^{2n+1} in the orthonormal complex coframe
/// φ^j = (e^j + i e^{n+j})/√2, φ̄^j = (e^j − i e^{n+j})/√2. Basis monomials have
/// a bidegree (p, q), used as the grading offset q − p.
class HorizontalFiber {
 public:
  HorizontalFiber(int n, int k, const FrameConvention& conv);

  int n() const { return n_; }
  int k() const { return k_; }
  int dim() const { return static_cast<int>(offsets_.size()); }
  Fiber descriptor() const;
  /// Hermitian inner product in this basis (the identity).
  Eigen::MatrixXcd metric() const { return Eigen::MatrixXcd::Identity(dim(), dim()); }
  /// ε(dθ): Λ^k → Λ^{k+2}.
  const Eigen::MatrixXcd& eps() const { return eps_; }
  /// ι(dθ): Λ^k → Λ^{k−2}.
  const Eigen::MatrixXcd& iota() const { return iota_; }
  /// Columns: the e-basis coordinates of the complex basis monomials.
  const Eigen::MatrixXcd& change_of_basis() const { return basis_change_; }
  int offset(int i) const { return offsets_.at(i); }

 private:
  int n_, k_;
  FrameConvention conv_;
  std::vector<int> offsets_;
  Eigen::MatrixXcd eps_, iota_, basis_change_;
};

/// ε(dθ) on the real orthonormal coframe: |c|·Σ_j e^j ∧ e^{n+j} ∧ ·.
Eigen::MatrixXd real_eps(int n, int k, const FrameConvention& conv);

enum class RuminSide { lambda1, lambda2 };

/// Λ₁^k = ker ι(dθ) ∩ Λ^k or Λ₂^k = ker ε(dθ) ∩ Λ^k, with a bidegree-pure
/// orthonormal basis.
struct RuminSpace {
  int n = 1;
  int k = 0;
  RuminSide side = RuminSide::lambda1;
  Eigen::MatrixXcd projector;
  /// Columns form an orthonormal basis of the subspace.
  Eigen::MatrixXcd basis;
  std::vector<int> offsets;
  int dim() const { return static_cast<int>(basis.cols()); }
  Fiber descriptor() const;
};

RuminSpace rumin_space(int n, int k, RuminSide side, const FrameConvention& conv);

struct RuminContext {
  int n = 1;
  TruncationPtr trunc;
  FrameConvention conv = FrameConvention::section5();
  /// Graded reliability bound N − n.
  int reliable_level() const { return trunc->N() - n; }
};

RuminContext make_rumin_context(int n, int N, const FrameConvention& conv = FrameConvention::section5());

/// d_b = Σ_a (e^a ∧ ·) ⊗ X_a on full horizontal fibers, Λ^k → Λ^{k+1}.
FormSymbol db_symbol(const RuminContext& ctx, int k);
/// Symbol of L_{X_0} on Λ^k: i·dΓ(−iX_0) = iμ.
FormSymbol lie_x0_symbol(const RuminContext& ctx, int k);
/// ε(dθ) ⊗ 1 as an order-0 symbol Λ^k → Λ^{k+2}.
FormSymbol eps_symbol(const RuminContext& ctx, int k);

/// Source space of d_{R,k}: Λ₁^k for k <= n, Λ₂^k for k >= n (k = n: Λ₂).
/// Used internally; exposed for tests.
RuminSpace rumin_domain(const RuminContext& ctx, int k);
RuminSpace rumin_codomain(const RuminContext& ctx, int k);

/// d_{R,k}: π₁∘d_b for k <= n−1, d_b on Λ₂ for k >= n.
FormSymbol d_R(const RuminContext& ctx, int k);

/// D_{R,n} = L_{X_0} + d_b ε(dθ)^{−1} d_b : Λ₁^n → Λ₂^n.
FormSymbol D_R_middle(const RuminContext& ctx);
/// The same operator on the full fiber Λ^n before restriction.
FormSymbol D_R_full(const RuminContext& ctx);

/// Weights (a_k, b_k) with Δ_k = a_k d d* + b_k d* d for k ≠ n.
std::pair<double, double> contact_laplacian_weights(int n, int k);
/// Alternative upper-half weights (k−n−1, k−n); reported for comparison.
std::pair<double, double> alternative_upper_weights(int n, int k);

/// Δ_{R,k} for k ≠ n; for k = n, j selects Δ_{R,n1} (j = 1) or Δ_{R,n2} (j = 2).
FormSymbol contact_laplacian(const RuminContext& ctx, int k, int j = 0);
/// a·d d* + b·d* d on degree k ≠ n with arbitrary weights.
FormSymbol weighted_contact_laplacian(const RuminContext& ctx, int k, double a, double b);

struct RuminProjection {
  std::string name;
  int k = 0;
  FormSymbol value;
  /// Distance to the kernel projector of the operator, computed independently.
  double residual = 0.0;
  double idempotence = 0.0;
  double self_adjointness = 0.0;
  /// Residual of the reciprocal coefficient variant, when that coefficient is
  /// defined; negative when not applicable.
  double reciprocal_residual = -1.0;
};

struct RuminProjections {
  std::vector<RuminProjection> d_projections;
  RuminProjection D_projection;
};

RuminProjections rumin_projections(const RuminContext& ctx);

}  // namespace heis
