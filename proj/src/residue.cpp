#include "heis/residue.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "heis/quadrature.hpp"
#include "heis/weyl.hpp"

namespace heis {

namespace {

constexpr double kPi = std::numbers::pi;

void require_residue_order(const HomogeneousSymbol& p) {
  const int n = p.trunc().n();
  if (p.order() != -(2 * n + 2))
    throw std::invalid_argument("residue: symbol order " + std::to_string(p.order()) + " is not -(2n+2) = " +
                                std::to_string(-(2 * n + 2)));
}

// Hurwitz zeta sum_{m>=0} (a+m)^{-s}, s >= 2, a >= 1.
double hurwitz_zeta(double s, double a) {
  constexpr int M = 24;
  double sum = 0.0;
  for (int m = 0; m < M; ++m) sum += std::pow(a + m, -s);
  const double x = a + M;
  sum += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s) + s / 12.0 * std::pow(x, -s - 1.0) -
         s * (s + 1.0) * (s + 2.0) / 720.0 * std::pow(x, -s - 3.0);
  return sum;
}

// Least-squares fit t_k ≈ Σ_j A_j (k+1)^{-(2+j)} on the last levels, summed
// over all levels beyond the reliable block.
cplx tail_sum(const std::vector<cplx>& t, int fit_levels, int terms, double& misfit) {
  const int L = static_cast<int>(t.size()) - 1;
  const int F = std::min(fit_levels, L);
  const int first = L - F + 1;
  Eigen::MatrixXd A(F, terms);
  Eigen::VectorXcd rhs(F);
  for (int i = 0; i < F; ++i) {
    const double x = first + i + 1.0;
    for (int j = 0; j < terms; ++j) A(i, j) = std::pow(x, -(2.0 + j));
    rhs(i) = t[first + i];
  }
  Eigen::VectorXcd coef = A.cast<cplx>().colPivHouseholderQr().solve(rhs);
  misfit = (A.cast<cplx>() * coef - rhs).cwiseAbs().maxCoeff();
  cplx tail = 0.0;
  for (int j = 0; j < terms; ++j) tail += coef(j) * hurwitz_zeta(2.0 + j, L + 2.0);
  return tail;
}

ResidueValue sector_trace_density(const HomogeneousSymbol& p, const ResidueQuadrature& quad) {
  const auto& t = p.trunc();
  const int n = t.n();
  const int L = p.reliable_level();
  if (L < 3) throw std::invalid_argument("residue_density: reliable level too small for the tail fit");
  std::vector<cplx> levels(L + 1, 0.0);
  double scale = 0.0;
  for (int mu : {1, -1}) {
    const auto& M = p.sector(mu);
    for (int i = 0; i < p.reliable_size(); ++i) {
      levels[t.level(i)] += M(i, i);
      scale += std::abs(M(i, i));
    }
  }
  cplx partial = 0.0;
  for (const auto& v : levels) partial += v;
  double misfit2 = 0.0, misfit3 = 0.0;
  const cplx tail2 = tail_sum(levels, quad.fit_levels, quad.fit_terms - 1, misfit2);
  const cplx tail3 = tail_sum(levels, quad.fit_levels, quad.fit_terms, misfit3);
  const double norm = 2.0 * std::pow(2.0 * kPi * std::abs(p.convention().bracket_constant()), n);
  ResidueValue r;
  r.value = norm * (partial + tail3);
  r.quadrature_error = norm * (std::abs(tail3 - tail2) + misfit3 * L + 1e-15 * scale);
  r.band_bound = 0.0;
  r.truncation = t.N();
  return r;
}

struct SliceGrid {
  std::vector<Eigen::Vector2d> eta;
  std::vector<double> weight;
  std::vector<cplx> value[2];
  double radius = 0.0;
};

double slice_disc_radius(const HomogeneousSymbol& p) {
  const double c = std::abs(p.convention().bracket_constant());
  const double eps_radius = std::pow(1.0 / (kSliceEpsilon * kSliceEpsilon) - 1.0, 0.25);
  return std::min(eps_radius, 0.999 * p.trunc().reliability_radius(p.reliable_level()) * std::sqrt(c));
}

// p(μ, η) on a polar grid of the disc |η| <= radius in the ξ_0 = ±1 planes.
SliceGrid slice_grid(const HomogeneousSymbol& p, int radial, int angular) {
  if (p.trunc().n() != 1) throw std::invalid_argument("slice quadrature is implemented for n = 1");
  SliceGrid g;
  g.radius = slice_disc_radius(p);
  const auto rule = gauss_legendre(radial, 0.0, g.radius);
  for (int i = 0; i < radial; ++i) {
    for (int j = 0; j < angular; ++j) {
      const double th = 2.0 * kPi * j / angular;
      const double r = rule.nodes[i];
      g.eta.emplace_back(r * std::cos(th), r * std::sin(th));
      g.weight.push_back(rule.weights[i] * r * 2.0 * kPi / angular);
    }
  }
  for (int s = 0; s < 2; ++s) {
    const double mu = s == 0 ? 1.0 : -1.0;
    for (const auto& e : g.eta) g.value[s].push_back(scalar_slice(p, Eigen::Vector3d(mu, e(0), e(1))));
  }
  return g;
}

double sphere_scale(const Eigen::Vector2d& e) {
  return 1.0 / std::sqrt(1.0 + std::pow(e(0), 4) + std::pow(e(1), 4));
}

// Measure of {|η| > radius} in both half-spheres, weight s(η)^2 dη.
double excluded_measure(double radius) {
  const auto rule = gauss_legendre(64, 0.0, 1.0);
  const int angular = 128;
  double m = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = rule.nodes[i];
    const double r = radius / u;
    for (int j = 0; j < angular; ++j) {
      const double th = 2.0 * kPi * j / angular;
      const double s = sphere_scale({r * std::cos(th), r * std::sin(th)});
      m += rule.weights[i] * (radius / (u * u)) * r * (2.0 * kPi / angular) * s * s;
    }
  }
  return 2.0 * 2.0 * m;
}

cplx disc_integral(const SliceGrid& g) {
  cplx sum = 0.0;
  for (int s = 0; s < 2; ++s)
    for (size_t i = 0; i < g.eta.size(); ++i) sum += g.weight[i] * g.value[s][i];
  return 2.0 * sum;
}

ResidueValue sphere_density(const HomogeneousSymbol& p, const ResidueQuadrature& quad) {
  SliceGrid fine = slice_grid(p, quad.radial_nodes, quad.angular_nodes);
  SliceGrid coarse = slice_grid(p, std::max(4, quad.radial_nodes / 2), std::max(4, quad.angular_nodes / 2));
  double sup = 0.0;
  for (int s = 0; s < 2; ++s)
    for (size_t i = 0; i < fine.eta.size(); ++i)
      sup = std::max(sup, std::pow(sphere_scale(fine.eta[i]), 2) * std::abs(fine.value[s][i]));
  ResidueValue r;
  r.value = disc_integral(fine);
  r.quadrature_error = std::abs(r.value - disc_integral(coarse));
  r.band_bound = sup * excluded_measure(fine.radius);
  r.truncation = p.trunc().N();
  return r;
}

}  // namespace

ResidueValue residue_density(const HomogeneousSymbol& p, const ResidueQuadrature& quad) {
  require_residue_order(p);
  return quad.method == ResidueMethod::sector_trace ? sector_trace_density(p, quad) : sphere_density(p, quad);
}

ResidueValue res(const SymbolExpansion& P, double volume, const ResidueQuadrature& quad) {
  if (!(volume > 0.0)) throw std::invalid_argument("res: volume must be positive");
  if (P.terms.empty()) return {};
  const int n = P.terms.front().trunc().n();
  const HomogeneousSymbol* t = P.term(-(2 * n + 2));
  if (!t) return {0.0, 0.0, 0.0, P.terms.front().trunc().N()};
  ResidueValue r = residue_density(*t, quad);
  r.value *= volume;
  r.quadrature_error *= volume;
  r.band_bound *= volume;
  return r;
}

double hirachi_bridge(const ResidueValue& r) { return -2.0 * r.value.real() + 0.0; }

TraceTestReport trace_property_test(const std::vector<std::pair<HomogeneousSymbol, HomogeneousSymbol>>& pairs,
                                    double tolerance) {
  TraceTestReport rep;
  rep.tolerance = tolerance;
  for (const auto& [p, q] : pairs) {
    const auto pq = star(p, q), qp = star(q, p);
    TraceTrial t;
    t.res_pq = residue_density(pq).value;
    t.res_qp = residue_density(qp).value;
    t.deviation = std::abs(t.res_pq - t.res_qp) / std::max(1.0, std::abs(t.res_pq));
    t.commutator = reliable_distance(pq, qp);
    rep.max_deviation = std::max(rep.max_deviation, t.deviation);
    rep.trials.push_back(t);
  }
  rep.passed = rep.max_deviation <= tolerance;
  return rep;
}

HomogeneousSymbol folland_stein_power(double lambda, int k, const TruncationPtr& t, const FrameConvention& conv) {
  if (k < 1) throw std::invalid_argument("folland_stein_power: k must be positive");
  auto inv = invert(folland_stein_symbol({lambda, t->n()}, t, conv));
  if (std::holds_alternative<NotInvertible>(inv))
    throw std::invalid_argument("folland_stein_power: lambda sits on a threshold");
  const auto& r = std::get<HomogeneousSymbol>(inv);
  HomogeneousSymbol out = r;
  for (int i = 1; i < k; ++i) out = star(out, r);
  return out;
}

std::pair<HomogeneousSymbol, HomogeneousSymbol> random_band_pair(const TruncationPtr& t, const FrameConvention& conv,
                                                                 int order_p, unsigned long long seed) {
  if (order_p < 0 || order_p > 2) throw std::invalid_argument("random_band_pair: order_p must be 0, 1 or 2");
  const int n = t->n();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto coeff = [&] { return cplx(unit(rng), unit(rng)); };
  std::uniform_int_distribution<int> field(1, 2 * n);
  const double c = std::abs(conv.bracket_constant());
  auto lambda = [&] { return 0.4 * c * unit(rng); };

  HomogeneousSymbol p = identity_symbol(t, conv);
  if (order_p == 0) {
    p = coeff() * p;
  } else if (order_p == 1) {
    p = coeff() * field_symbol(1, t, conv);
    for (int j = 2; j <= 2 * n; ++j) p = p + coeff() * field_symbol(j, t, conv);
  } else {
    p = coeff() * field_symbol(0, t, conv);
    for (int i = 1; i <= 2 * n; ++i)
      for (int j = i; j <= 2 * n; ++j) p = p + coeff() * star(field_symbol(i, t, conv), field_symbol(j, t, conv));
  }

  const int mq = -(2 * n + 2) - order_p;
  auto chain = [&] {
    // Parametrices interleaved with one or two fields.
    const int fields = (mq % 2 != 0) ? 1 : 2;
    const int powers = (fields - mq) / 2;
    HomogeneousSymbol q = folland_stein_power(lambda(), 1, t, conv);
    int placed = 0;
    for (int i = 1; i < powers; ++i) {
      if (placed < fields) {
        q = star(q, field_symbol(field(rng), t, conv));
        ++placed;
      }
      q = star(q, folland_stein_power(lambda(), 1, t, conv));
    }
    while (placed < fields) {
      q = star(field_symbol(field(rng), t, conv), q);
      ++placed;
    }
    return q;
  };
  HomogeneousSymbol q = coeff() * chain();
  q = q + coeff() * chain();
  return {p, q};
}

namespace {

// ∫_{u0}^∞ e^{i(a u² + b u)} du / u, cut where the phase passes phase_cut and
// closed by one integration by parts.
cplx oscillatory_tail_integral(double a, double b, double u0, double phase_cut, const QuadratureRule& rule) {
  const double U = std::max({std::sqrt(phase_cut / std::abs(a)), 4.0 * std::abs(b) / std::abs(a), 2.0 * u0});
  auto phase = [&](double u) { return a * u * u + b * u; };
  cplx sum = 0.0;
  double v = std::log(u0);
  const double vend = std::log(U);
  while (v < vend) {
    double next = std::min(v + std::log(2.0), vend);
    while (std::abs(phase(std::exp(next)) - phase(std::exp(v))) > 1.5 && next - v > 1e-6) next = 0.5 * (v + next);
    const double h = next - v;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = v + 0.5 * h * (rule.nodes[i] + 1.0);
      sum += 0.5 * h * rule.weights[i] * std::exp(cplx(0.0, phase(std::exp(x))));
    }
    v = next;
  }
  const double dphi = 2.0 * a * U + b;
  sum -= std::exp(cplx(0.0, phase(U))) / (cplx(0.0, dphi) * U);
  return sum;
}

}  // namespace

LogFit fit_log_coefficient(const HomogeneousSymbol& p, const LogFitOptions& opt) {
  require_residue_order(p);
  if (opt.direction.size() != 3) throw std::invalid_argument("fit_log_coefficient: direction needs 3 entries");
  if (!(opt.r_min > 0.0 && opt.r_max > opt.r_min) || opt.samples < 3)
    throw std::invalid_argument("fit_log_coefficient: bad radius range");
  const SliceGrid g = slice_grid(p, opt.radial_nodes, opt.angular_nodes);
  Eigen::Vector3d dir(opt.direction[0], opt.direction[1], opt.direction[2]);
  if (dir(0) == 0.0) throw std::invalid_argument("fit_log_coefficient: direction needs a nonzero y_0");
  const double nrm = std::pow(dir(0) * dir(0) + std::pow(dir(1), 4) + std::pow(dir(2), 4), 0.25);
  dir(0) /= nrm * nrm;
  dir(1) /= nrm;
  dir(2) /= nrm;
  const auto rule = gauss_legendre(8);
  const double pref = 2.0 / std::pow(2.0 * kPi, 3);

  LogFit fit;
  Eigen::MatrixXd A(opt.samples, 2);
  Eigen::VectorXcd rhs(opt.samples);
  for (int k = 0; k < opt.samples; ++k) {
    const double r = opt.r_min * std::pow(opt.r_max / opt.r_min, double(k) / (opt.samples - 1));
    const double y0 = r * r * dir(0);
    cplx kern = 0.0;
    for (int s = 0; s < 2; ++s) {
      const double mu = s == 0 ? 1.0 : -1.0;
      for (size_t i = 0; i < g.eta.size(); ++i) {
        const double b = r * (dir(1) * g.eta[i](0) + dir(2) * g.eta[i](1));
        const double u0 = std::sqrt(sphere_scale(g.eta[i]));
        kern += g.weight[i] * g.value[s][i] * oscillatory_tail_integral(mu * y0, b, u0, opt.phase_cut, rule);
      }
    }
    kern *= pref;
    fit.radii.push_back(r);
    fit.kernel.push_back(kern);
    A(k, 0) = 1.0;
    A(k, 1) = std::log(r);
    rhs(k) = kern;
  }
  Eigen::VectorXcd coef = A.cast<cplx>().colPivHouseholderQr().solve(rhs);
  fit.a = coef(0);
  fit.b = coef(1);
  fit.fit_residual = (A.cast<cplx>() * coef - rhs).cwiseAbs().maxCoeff();
  return fit;
}

LogCheckReport log_coefficient_crosscheck(const std::vector<std::pair<std::string, HomogeneousSymbol>>& family,
                                          const LogFitOptions& opt) {
  if (family.size() < 2) throw std::invalid_argument("log_coefficient_crosscheck: need a calibration member and more");
  LogCheckReport rep;
  for (const auto& [label, p] : family) {
    LogCheckRow row;
    row.label = label;
    row.density = residue_density(p).value;
    const LogFit f = fit_log_coefficient(p, opt);
    row.fitted_b = f.b;
    row.fit_residual = f.fit_residual;
    rep.rows.push_back(row);
  }
  if (std::abs(rep.rows[0].density) == 0.0)
    throw std::invalid_argument("log_coefficient_crosscheck: calibration member has zero density");
  rep.gamma = rep.rows[0].fitted_b / rep.rows[0].density;
  double scale = 0.0;
  for (auto& row : rep.rows) {
    row.predicted_b = rep.gamma * row.density;
    scale = std::max(scale, std::abs(row.predicted_b));
  }
  rep.passed = true;
  for (auto& row : rep.rows) {
    const double ref = std::abs(row.predicted_b) >= rep.tolerance * scale ? std::abs(row.predicted_b) : scale;
    row.error = std::abs(row.fitted_b - row.predicted_b) / ref;
    row.ok = row.error <= rep.tolerance;
    rep.passed = rep.passed && row.ok;
  }
  return rep;
}

}  // namespace heis
