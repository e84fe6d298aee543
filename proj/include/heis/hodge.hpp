#pragma once

#include <map>
#include <utility>
#include <vector>

#include "heis/kohn.hpp"
#include "heis/residue.hpp"

namespace heis {

/// Fiber data of the flat model for the Hodge operator and the τ map, in the
/// orthonormal monomial bases of PQFiber.
struct HodgeData {
  int n = 1;
  /// ν = volume_phase · θ¹∧θ̄¹∧…∧θⁿ∧θ̄ⁿ in α ∧ conj(*β) = h(α, β) ν.
  cplx volume_phase = 1.0;
  /// *: Λ^{p,q} → Λ^{n−q,n−p}.
  std::map<std::pair<int, int>, Eigen::MatrixXcd> star;
  /// Matrix part of complex conjugation Λ^{p,q} → Λ^{q,p}; the map is
  /// α ↦ C·conj(α).
  std::map<std::pair<int, int>, Eigen::MatrixXd> conjugation;
  /// τ = ζ ∧ ·: Λ^{0,q} → Λ^{n,q}, ζ = θ¹∧…∧θⁿ.
  std::map<int, Eigen::MatrixXd> tau;
};

/// Builds * from α ∧ conj(*β) = h(α, β) ν, with the phase of ν fixed so that
/// *² = (−1)^{p+q} on every Λ^{p,q}.
HodgeData hodge_data(int n);

/// Symbol of α ↦ C·conj(P(C⁻¹·conj α)) for a form-valued symbol P.
FormSymbol conjugate_form_symbol(const FormSymbol& P, const Eigen::MatrixXd& C_in, const Eigen::MatrixXd& C_out,
                                 const Fiber& in, const Fiber& out);

struct HodgeReport {
  int n = 1;
  cplx volume_phase = 1.0;
  /// Every *² = (−1)^{p+q} holds exactly.
  bool star_square_exact = false;
  double unitarity = 0.0;
  /// ∂̄* = −*∂* on each Λ^{p,q+1}.
  double adjoint_formula = 0.0;
  /// ∂̄ = C ∂ C.
  double conjugation = 0.0;
  /// τ⁻¹ ∂̄_{n,q} τ = (−1)ⁿ ∂̄_{0,q}.
  double tau_intertwining = 0.0;
  /// Π₀(∂_{0,0}) against the conjugate of S_{0,0}.
  double conjugate_projection = 0.0;
  /// Res of S_{0,0}, Π₀(∂_{0,0}), S_{0,n}; all exactly homogeneous of order 0.
  std::vector<ResidueValue> flat_residues;
  double tolerance = 1e-10;
  bool passed = false;
};

HodgeReport hodge_tau_checks(int n, int N = 10, const FrameConvention& conv = FrameConvention::section5());

}  // namespace heis
