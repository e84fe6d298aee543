#include "heis/kohn.hpp"

#include <cmath>

namespace heis {

KohnContext make_kohn_context(int n, int N, const FrameConvention& conv) { return {n, make_truncation(n, N), conv}; }

namespace {

// dΓ(X) = i·dΓ(−iX).
HomogeneousSymbol field(const KohnContext& ctx, int j) { return cplx(0, 1) * field_symbol(j, ctx.trunc, ctx.conv); }

void check_degrees(const KohnContext& ctx, int p, int q) {
  if (p < 0 || p > ctx.n || q < 0 || q > ctx.n) throw std::out_of_range("form degree out of range");
}

// Scalar symbol built from possibly modified frame symbols: ½Σ A_j² − λ·A_0.
HomogeneousSymbol sublaplacian_family(const std::vector<HomogeneousSymbol>& fields, const HomogeneousSymbol& x0,
                                      double lambda) {
  HomogeneousSymbol s = cplx(0.5) * star(fields[0], fields[0]);
  for (size_t j = 1; j < fields.size(); ++j) s = s + cplx(0.5) * star(fields[j], fields[j]);
  return s - cplx(lambda) * x0.with_reliable_level(s.reliable_level());
}

}  // namespace

HomogeneousSymbol zbar_symbol(const KohnContext& ctx, int j) {
  if (j < 0 || j >= ctx.n) throw std::out_of_range("zbar_symbol: index out of range");
  return cplx(0.5) * (field(ctx, j + 1) + cplx(0, 1) * field(ctx, ctx.n + j + 1));
}

HomogeneousSymbol z_symbol(const KohnContext& ctx, int j) {
  if (j < 0 || j >= ctx.n) throw std::out_of_range("z_symbol: index out of range");
  return cplx(0.5) * (field(ctx, j + 1) - cplx(0, 1) * field(ctx, ctx.n + j + 1));
}

FormSymbol dbar_symbol(const KohnContext& ctx, int p, int q) {
  check_degrees(ctx, p, q);
  if (q >= ctx.n) throw std::out_of_range("dbar_symbol: q must be <= n-1");
  const Fiber in = PQFiber(ctx.n, p, q).descriptor(), out = PQFiber(ctx.n, p, q + 1).descriptor();
  FormSymbol d = FormSymbol::zero(in, out, 1, ctx.trunc, ctx.conv);
  for (int j = 0; j < ctx.n; ++j)
    d = d + FormSymbol::tensor(in, out, wedge_theta_bar(ctx.n, p, q, j).cast<cplx>(), zbar_symbol(ctx, j));
  return d;
}

FormSymbol del_symbol(const KohnContext& ctx, int p, int q) {
  check_degrees(ctx, p, q);
  if (p >= ctx.n) throw std::out_of_range("del_symbol: p must be <= n-1");
  const Fiber in = PQFiber(ctx.n, p, q).descriptor(), out = PQFiber(ctx.n, p + 1, q).descriptor();
  FormSymbol d = FormSymbol::zero(in, out, 1, ctx.trunc, ctx.conv);
  for (int j = 0; j < ctx.n; ++j)
    d = d + FormSymbol::tensor(in, out, wedge_theta(ctx.n, p, q, j).cast<cplx>(), z_symbol(ctx, j));
  return d;
}

FormSymbol kohn_laplacian_symbol(const KohnContext& ctx, int p, int q) {
  check_degrees(ctx, p, q);
  const Fiber f = PQFiber(ctx.n, p, q).descriptor();
  FormSymbol box = FormSymbol::zero(f, f, 2, ctx.trunc, ctx.conv);
  if (q < ctx.n) {
    auto d = dbar_symbol(ctx, p, q);
    box = box + compose(d.adjoint(), d);
  }
  if (q > 0) {
    auto d = dbar_symbol(ctx, p, q - 1);
    box = box + compose(d, d.adjoint());
  }
  return box.with_reliable_level(ctx.trunc->N() - 1);
}

LeviSignature model_signature(int n) { return {n, 0}; }

bool y_condition(int q, const LeviSignature& sig, int n) {
  if (q < 0 || q > n) throw std::out_of_range("y_condition: q out of range");
  auto in = [q](int lo, int hi) { return lo <= q && q <= hi; };
  return !(in(sig.kappa_minus, n - sig.kappa_plus) || in(sig.kappa_plus, n - sig.kappa_minus));
}

ParametrixWitness parametrix_exists(const KohnContext& ctx, int p, int q) {
  auto box = kohn_laplacian_symbol(ctx, p, q);
  ParametrixWitness w;
  auto inv = invert(box);
  if (auto* ni = std::get_if<NotInvertible>(&inv)) {
    w.sigma_min_plus = ni->sigma_min_plus;
    w.sigma_min_minus = ni->sigma_min_minus;
    w.plus_singular = ni->plus_singular;
    w.minus_singular = ni->minus_singular;
    return w;
  }
  const auto& G = std::get<FormSymbol>(inv);
  std::tie(w.sigma_min_plus, w.sigma_min_minus) = sector_sigma_min(box);
  const auto I = FormSymbol::identity(box.fiber_in(), ctx.trunc, ctx.conv);
  w.exists = true;
  w.residual = std::max(reliable_distance(compose(box, G).with_reliable_level(box.reliable_level()), I),
                        reliable_distance(compose(G, box).with_reliable_level(box.reliable_level()), I));
  w.inverse = G;
  return w;
}

namespace {

double overlap(const FormSymbol& a, const FormSymbol& b) {
  return reliable_norm(compose(a, b).with_reliable_level(std::min(a.reliable_level(), b.reliable_level())));
}

}  // namespace

SzegoProjections szego_projection_symbols(const KohnContext& ctx, int p, int q, bool strict) {
  check_degrees(ctx, p, q);
  const auto sig = model_signature(ctx.n);
  auto neighbour_inverse = [&](int qq) {
    auto box = kohn_laplacian_symbol(ctx, p, qq);
    if (strict) {
      if (!y_condition(qq, sig, ctx.n))
        throw PreconditionError("szego_projection_symbols: Y(" + std::to_string(qq) +
                                ") fails, so the neighbouring Kohn Laplacian is not invertible");
      auto inv = invert(box);
      if (auto* g = std::get_if<FormSymbol>(&inv)) return *g;
      throw PreconditionError("szego_projection_symbols: Kohn Laplacian at q=" + std::to_string(qq) +
                              " is numerically singular");
    }
    return spectral_pseudo_inverse(box);
  };
  const Fiber f = PQFiber(ctx.n, p, q).descriptor();
  const auto box = kohn_laplacian_symbol(ctx, p, q);
  const auto I = FormSymbol::identity(f, ctx.trunc, ctx.conv);
  auto S = kernel_projector(box);
  auto N = spectral_pseudo_inverse(box);

  FormSymbol pi_dbar = I;
  if (q < ctx.n) {
    auto d = dbar_symbol(ctx, p, q);
    auto Nn = neighbour_inverse(q + 1);
    pi_dbar = I - compose(d.adjoint(), compose(Nn, d));
  }
  FormSymbol pi_dbar_star = I;
  if (q > 0) {
    auto d = dbar_symbol(ctx, p, q - 1);
    auto Nn = neighbour_inverse(q - 1);
    pi_dbar_star = I - compose(d, compose(Nn, d.adjoint()));
  }
  const int lvl = std::min(pi_dbar.reliable_level(), pi_dbar_star.reliable_level());
  SzegoProjections out{S, pi_dbar, pi_dbar_star, N};
  out.identity_residual = reliable_distance(S.with_reliable_level(lvl), pi_dbar + pi_dbar_star - I);
  const auto one_minus_s = I - S;
  out.partial_inverse_residual = std::max(reliable_distance(compose(N, box), one_minus_s),
                                          reliable_distance(compose(box, N), one_minus_s));
  auto A = S.with_reliable_level(lvl), B = (pi_dbar - S).with_reliable_level(lvl),
       C = (pi_dbar_star - S).with_reliable_level(lvl);
  out.orthogonality_residual = std::max({overlap(A, B), overlap(A, C), overlap(B, C)});
  const auto [rp, rm] = projector_ranks(S);
  out.rank_plus = static_cast<int>(std::lround(rp));
  out.rank_minus = static_cast<int>(std::lround(rm));
  return out;
}

HomogeneousSymbol szego_symbol_level(const KohnContext& ctx, int k) {
  if (k < 0) throw std::invalid_argument("szego_symbol_level: k must be >= 0");
  const double c = std::abs(ctx.conv.bracket_constant());
  return kernel_projector(folland_stein_symbol({c * (ctx.n / 2.0 + k), ctx.n}, ctx.trunc, ctx.conv));
}

FlipCheck sector_flip_check(const KohnContext& ctx, int k, double rescale, double tol) {
  if (!(rescale > 0.0)) throw std::invalid_argument("sector_flip_check: rescale must be positive");
  const int n = ctx.n;
  const double c = std::abs(ctx.conv.bracket_constant());
  const double lambda = c * (n / 2.0 + k);
  const auto sk = szego_symbol_level(ctx, k);

  std::vector<HomogeneousSymbol> fields;
  for (int j = 1; j <= 2 * n; ++j) fields.push_back(field_symbol(j, ctx.trunc, ctx.conv));
  const auto x0 = field_symbol(0, ctx.trunc, ctx.conv);

  // (θ, J) → (−θ, −J): the Reeb field and the J-images X_{n+j} change sign.
  std::vector<HomogeneousSymbol> flipped = fields;
  for (int j = n; j < 2 * n; ++j) flipped[j] = cplx(-1.0) * fields[j];
  const auto flipped_proj = kernel_projector(sublaplacian_family(flipped, cplx(-1.0) * x0, lambda));

  // θ → cθ: X_0 → X_0 / c and the horizontal frame → frame / sqrt(c).
  std::vector<HomogeneousSymbol> scaled = fields;
  for (auto& s : scaled) s = cplx(1.0 / std::sqrt(rescale)) * s;
  const auto scaled_proj = kernel_projector(sublaplacian_family(scaled, cplx(1.0 / rescale) * x0, lambda));

  FlipCheck out;
  out.rescale = rescale;
  out.flip_distance = reliable_distance(flipped_proj, swap_symbol(sk));
  out.flip_ok = out.flip_distance <= tol;
  out.conformal_distance = reliable_distance(scaled_proj, sk);
  out.conformal_ok = out.conformal_distance <= tol;
  return out;
}

}  // namespace heis
