#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "heis/form_symbol.hpp"

namespace heis {

/// Shared inputs of the model ∂̄_b computations.
struct KohnContext {
  int n = 1;
  TruncationPtr trunc;
  FrameConvention conv = FrameConvention::section5();
};

KohnContext make_kohn_context(int n, int N, const FrameConvention& conv = FrameConvention::section5());

/// Symbol of Z̄_j = ½(X_j + iX_{n+j}) (j = 0..n−1), order 1.
HomogeneousSymbol zbar_symbol(const KohnContext& ctx, int j);
/// Symbol of Z_j = ½(X_j − iX_{n+j}), order 1.
HomogeneousSymbol z_symbol(const KohnContext& ctx, int j);

/// ∂̄_{p,q} = Σ_j (θ̄^j ∧ ·) ⊗ Z̄_j : Λ^{p,q} → Λ^{p,q+1}.
FormSymbol dbar_symbol(const KohnContext& ctx, int p, int q);
/// ∂_{p,q} = Σ_j (θ^j ∧ ·) ⊗ Z_j : Λ^{p,q} → Λ^{p+1,q}.
FormSymbol del_symbol(const KohnContext& ctx, int p, int q);

/// □_{p,q} = ∂̄*∂̄ + ∂̄∂̄*, with the missing term dropped at q = n or q = 0.
FormSymbol kohn_laplacian_symbol(const KohnContext& ctx, int p, int q);

/// □_{0,0} = ½·folland_stein(λ = |c|n/2): the recorded convention constant.
inline constexpr double kKohnConventionConstant = 0.5;

struct LeviSignature {
  int kappa_plus = 0;
  int kappa_minus = 0;
};

/// Signature of the flat model: κ₊ = n, κ₋ = 0.
LeviSignature model_signature(int n);

/// true iff q avoids {κ₋,…,n−κ₊} ∪ {κ₊,…,n−κ₋}.
bool y_condition(int q, const LeviSignature& sig, int n);

struct ParametrixWitness {
  bool exists = false;
  double sigma_min_plus = 0.0;
  double sigma_min_minus = 0.0;
  bool plus_singular = false;
  bool minus_singular = false;
  /// max(‖□G − 1‖, ‖G□ − 1‖) on the reliable block when the inverse exists.
  double residual = 0.0;
  std::optional<FormSymbol> inverse;
};

ParametrixWitness parametrix_exists(const KohnContext& ctx, int p, int q);

class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SzegoProjections {
  FormSymbol S;
  FormSymbol Pi0_dbar;
  FormSymbol Pi0_dbar_star;
  FormSymbol N_partial;
  /// ‖S − (Π₀(∂̄) + Π₀(∂̄*) − 1)‖ on the common reliable block.
  double identity_residual = 0.0;
  /// ‖N□ − (1 − S)‖ and ‖□N − (1 − S)‖, maximum.
  double partial_inverse_residual = 0.0;
  /// Largest pairwise overlap ‖A·B‖ among S, Π₀(∂̄)−S, Π₀(∂̄*)−S.
  double orthogonality_residual = 0.0;
  int rank_plus = 0;
  int rank_minus = 0;
};

/// Projections behind ker ∂̄ = ker □ ⊕ im ∂̄. With strict = true the
/// neighbouring Laplacians must be invertible (Y(q±1)); otherwise they are
/// inverted spectrally.
SzegoProjections szego_projection_symbols(const KohnContext& ctx, int p, int q, bool strict = false);

/// s_k: kernel projector of the scalar Kohn Laplacian plus ikX_0, that is of
/// folland_stein(λ = |c|(n/2 + k)).
HomogeneousSymbol szego_symbol_level(const KohnContext& ctx, int k);

struct FlipCheck {
  bool flip_ok = false;
  double flip_distance = 0.0;
  bool conformal_ok = false;
  double conformal_distance = 0.0;
  double rescale = 0.0;
};

/// Rebuilds s_k from flipped data (X_0 ↦ −X_0, X_{n+j} ↦ −X_{n+j}) and from
/// conformally rescaled data (θ ↦ cθ) and compares with swap(s_k) and s_k.
FlipCheck sector_flip_check(const KohnContext& ctx, int k, double rescale = 4.0, double tol = 1e-10);

}  // namespace heis
