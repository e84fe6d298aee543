#pragma once

#include <string>
#include <vector>

#include "heis/symbol.hpp"

namespace heis {

enum class ResidueMethod {
  /// Weyl trace identity: ∫_{‖ξ‖=1} p dω = 2(2π|c|)^n Σ_μ Tr p_μ, with the
  /// level sums beyond the reliable block extrapolated from their asymptotics.
  sector_trace,
  /// Direct quadrature of scalar_slice over the part of the sphere with
  /// |ξ_0| >= ε_slice inside the reliability radius (n = 1 only).
  sphere,
};

struct ResidueQuadrature {
  ResidueMethod method = ResidueMethod::sector_trace;
  /// Levels used for the tail fit (sector_trace).
  int fit_levels = 7;
  /// Powers (k+1)^{-2}, (k+1)^{-3}, ... in the tail model.
  int fit_terms = 5;
  /// Gauss–Legendre nodes for the sphere method.
  int radial_nodes = 48;
  int angular_nodes = 64;
};

struct ResidueValue {
  cplx value = 0.0;
  double quadrature_error = 0.0;
  /// Bound on the part of the sphere not covered by the quadrature.
  double band_bound = 0.0;
  int truncation = 0;
};

/// Density ∫_{‖ξ‖=1} p(ξ) dω for p of order −(2n+2). The surface measure comes
/// from dξ = r^{2n+1} dr dω under the anisotropic dilations.
ResidueValue residue_density(const HomogeneousSymbol& p, const ResidueQuadrature& quad = {});

/// Volume times the density of the degree −(2n+2) term; exactly 0 without one.
ResidueValue res(const SymbolExpansion& P, double volume = 1.0, const ResidueQuadrature& quad = {});

/// L = −2·Res.
double hirachi_bridge(const ResidueValue& r);

inline constexpr double kTraceTolerance = 1e-6;

struct TraceTrial {
  cplx res_pq = 0.0;
  cplx res_qp = 0.0;
  /// |Res(p*q) − Res(q*p)| / max(1, |Res(p*q)|).
  double deviation = 0.0;
  /// Distance between p*q and q*p, to show the pair does not commute.
  double commutator = 0.0;
};

struct TraceTestReport {
  std::vector<TraceTrial> trials;
  double max_deviation = 0.0;
  double tolerance = kTraceTolerance;
  bool passed = false;
};

/// Res(p*q) against Res(q*p) for pairs of complementary order.
TraceTestReport trace_property_test(const std::vector<std::pair<HomogeneousSymbol, HomogeneousSymbol>>& pairs,
                                    double tolerance = kTraceTolerance);

/// Random pair (p, q) of banded symbols: p a polynomial in the fields of order
/// order_p, q a product of Folland–Stein parametrices and fields of order
/// −(2n+2) − order_p. Reproducible from the seed.
std::pair<HomogeneousSymbol, HomogeneousSymbol> random_band_pair(const TruncationPtr& t, const FrameConvention& conv,
                                                                 int order_p, unsigned long long seed);

/// (FS(λ))^{-k} computed on the reliable block.
HomogeneousSymbol folland_stein_power(double lambda, int k, const TruncationPtr& t, const FrameConvention& conv);

struct LogFitOptions {
  double r_min = 1e-3;
  double r_max = 1e-1;
  int samples = 9;
  /// Direction of y, normalized to ‖y‖ = 1 internally.
  std::vector<double> direction = {0.6, 0.5, -0.3};
  int radial_nodes = 40;
  int angular_nodes = 48;
  /// Phase at which the oscillatory integral is cut and closed by parts.
  double phase_cut = 40.0;
};

struct LogFit {
  cplx a = 0.0;
  cplx b = 0.0;
  double fit_residual = 0.0;
  std::vector<double> radii;
  std::vector<cplx> kernel;
};

/// Kernel k(0, y) = (2π)^{-(2n+1)} ∫ e^{i⟨y,ξ⟩} p(ξ) dξ on |ξ| >= 1, synthesized
/// from scalar_slice on dyadic shells, fitted to a + b·log‖y‖ (n = 1 only).
LogFit fit_log_coefficient(const HomogeneousSymbol& p, const LogFitOptions& opt = {});

struct LogCheckRow {
  std::string label;
  cplx density = 0.0;
  cplx fitted_b = 0.0;
  cplx predicted_b = 0.0;
  double error = 0.0;
  double fit_residual = 0.0;
  bool ok = false;
};

struct LogCheckReport {
  /// b = γ·density, fixed by the first family member.
  cplx gamma = 0.0;
  std::vector<LogCheckRow> rows;
  double tolerance = 0.05;
  bool passed = false;
};

/// The first member calibrates γ. Other members must satisfy
/// |b − γ·density| <= 5% of |γ·density|; members whose prediction is below 5%
/// of the family scale are held to 5% of that scale instead.
LogCheckReport log_coefficient_crosscheck(const std::vector<std::pair<std::string, HomogeneousSymbol>>& family,
                                          const LogFitOptions& opt = {});

}  // namespace heis
