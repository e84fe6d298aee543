#include "heis/sandbox.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace heis {

namespace {

struct Unimodular {
  Eigen::MatrixXd P, Pinv;
};

// Product of random elementary integer row operations and its exact inverse.
Unimodular random_unimodular(int m, std::mt19937_64& rng) {
  Unimodular u{Eigen::MatrixXd::Identity(m, m), Eigen::MatrixXd::Identity(m, m)};
  if (m < 2) return u;
  std::uniform_int_distribution<int> idx(0, m - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int s = 0; s < m + 1; ++s) {
    const int i = idx(rng);
    int j = idx(rng);
    if (i == j) j = (j + 1) % m;
    const double k = coin(rng) ? 1.0 : -1.0;
    u.P.row(i) += k * u.P.row(j);
    u.Pinv.col(j) -= k * u.Pinv.col(i);
  }
  return u;
}

Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& G) {
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("sandbox: metric is not positive definite");
  return llt.matrixL();
}

// Orthogonal projector onto the kernel of a symmetric positive semidefinite matrix.
Eigen::MatrixXd psd_kernel_projector(const Eigen::MatrixXd& A, double& scale) {
  const int m = static_cast<int>(A.rows());
  if (m == 0) return A;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    if (std::abs(es.eigenvalues()(i)) <= 1e-10 * scale)
      P += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose();
  return P;
}

Eigen::MatrixXd psd_partial_inverse(const Eigen::MatrixXd& A) {
  const int m = static_cast<int>(A.rows());
  if (m == 0) return A;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    if (std::abs(es.eigenvalues()(i)) > 1e-10 * scale)
      N += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose() / es.eigenvalues()(i);
  return N;
}

double max_abs(const Eigen::MatrixXd& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

SandboxComplex sandbox_build(const std::vector<int>& dims, unsigned long long seed, const SandboxOptions& opt) {
  if (dims.size() < 3) throw std::invalid_argument("sandbox_build: need at least three spaces");
  for (int d : dims)
    if (d < 0) throw std::invalid_argument("sandbox_build: negative dimension");
  const int m = static_cast<int>(dims.size()) - 1;
  std::mt19937_64 rng(seed);
  SandboxComplex c;
  c.dims = dims;
  c.ranks.assign(m, 0);
  int prev = 0;
  for (int q = 0; q < m; ++q) {
    const int hi = std::min(dims[q] - prev, dims[q + 1]);
    if (opt.exact) {
      c.ranks[q] = dims[q] - prev;
      if (c.ranks[q] > dims[q + 1]) throw std::invalid_argument("sandbox_build: no exact complex with these dims");
    } else {
      c.ranks[q] = std::uniform_int_distribution<int>(0, std::max(0, hi))(rng);
    }
    prev = c.ranks[q];
  }
  if (opt.exact && dims[m] != prev) throw std::invalid_argument("sandbox_build: no exact complex with these dims");

  std::vector<Unimodular> P;
  for (int d : dims) P.push_back(random_unimodular(d, rng));
  for (int q = 0; q < m; ++q) {
    const int r = c.ranks[q];
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(dims[q + 1], dims[q]);
    if (r > 0) E.block(0, dims[q] - r, r, r) = random_unimodular(r, rng).P;
    c.differentials.push_back(P[q + 1].P * E * P[q].Pinv);
  }
  std::normal_distribution<double> normal;
  for (int d : dims) {
    Eigen::MatrixXd G = Eigen::MatrixXd::Identity(d, d);
    if (opt.random_metric && d > 0) {
      Eigen::MatrixXd A(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) A(i, j) = normal(rng);
      G += A * A.transpose() / d;
    }
    c.metrics.push_back(G);
  }
  return c;
}

Eigen::MatrixXd sandbox_adjoint(const SandboxComplex& c, int q) {
  return c.metrics[q].ldlt().solve(c.differentials[q].transpose() * c.metrics[q + 1]);
}

SandboxReport sandbox_verify(const SandboxComplex& c, double tolerance) {
  const int m = static_cast<int>(c.dims.size()) - 1;
  // Orthonormal coordinates y = Lᵀx, G = LLᵀ; traces are unchanged.
  std::vector<Eigen::MatrixXd> d(m), ds(m);
  for (int q = 0; q < m; ++q) {
    const Eigen::MatrixXd Lin = cholesky_factor(c.metrics[q]), Lout = cholesky_factor(c.metrics[q + 1]);
    d[q] = Lout.transpose() * c.differentials[q] *
           Lin.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(c.dims[q], c.dims[q]));
    ds[q] = d[q].transpose();
  }
  auto I = [&](int q) { return Eigen::MatrixXd::Identity(c.dims[q], c.dims[q]); };
  std::vector<Eigen::MatrixXd> box(m + 1), N(m + 1), S(m + 1), pi0(m + 1), pi0s(m + 1);
  std::vector<int> kerbox(m + 1);
  SandboxReport rep;
  rep.tolerance = tolerance;
  for (int q = 0; q <= m; ++q) {
    box[q] = Eigen::MatrixXd::Zero(c.dims[q], c.dims[q]);
    if (q > 0) box[q] += d[q - 1] * ds[q - 1];
    if (q < m) box[q] += ds[q] * d[q];
    double scale = 1.0;
    S[q] = psd_kernel_projector(box[q], scale);
    kerbox[q] = static_cast<int>(std::lround(S[q].trace()));
    N[q] = psd_partial_inverse(box[q]);
  }
  for (int q = 0; q <= m; ++q) {
    pi0[q] = I(q);
    if (q < m) pi0[q] -= ds[q] * N[q + 1] * d[q];
    pi0s[q] = I(q);
    if (q > 0) pi0s[q] -= d[q - 1] * N[q - 1] * ds[q - 1];
    double s = 1.0;
    SandboxLevel lv;
    lv.q = q;
    lv.kernel_dim = kerbox[q];
    const Eigen::MatrixXd ker_d = q < m ? psd_kernel_projector(ds[q] * d[q], s) : I(q);
    const Eigen::MatrixXd ker_ds = q > 0 ? psd_kernel_projector(d[q - 1] * ds[q - 1], s) : I(q);
    lv.pi0_residual = max_abs(pi0[q] - ker_d);
    lv.pi0_star_residual = max_abs(pi0s[q] - ker_ds);
    lv.szego_residual = max_abs(S[q] - (pi0[q] + pi0s[q] - I(q)));
    rep.max_residual = std::max({rep.max_residual, lv.pi0_residual, lv.pi0_star_residual, lv.szego_residual});
    rep.levels.push_back(lv);
  }
  for (int q = 0; q + 2 <= m; ++q) {
    SandboxStep st;
    st.q = q;
    const double t_pi0 = pi0[q].trace() - c.dims[q];
    const double a1 = -(ds[q] * N[q + 1] * d[q]).trace(), a2 = -(d[q] * ds[q] * N[q + 1]).trace();
    st.cyclic_pi0 = std::max(std::abs(t_pi0 - a1), std::abs(a1 - a2));
    const double t_pi0s = pi0s[q + 2].trace() - c.dims[q + 2];
    const double b1 = -(d[q + 1] * N[q + 1] * ds[q + 1]).trace(), b2 = -(ds[q + 1] * d[q + 1] * N[q + 1]).trace();
    st.cyclic_pi0_star = std::max(std::abs(t_pi0s - b1), std::abs(b1 - b2));
    const double boxN = ((d[q] * ds[q] + ds[q + 1] * d[q + 1]) * N[q + 1]).trace();
    st.cyclic_box = std::max(std::abs(a2 + b2 + boxN), std::abs(boxN - (c.dims[q + 1] - kerbox[q + 1])));
    st.master = std::abs(t_pi0 + t_pi0s + (c.dims[q + 1] - kerbox[q + 1]));
    st.closing = std::abs(pi0[q + 2].trace() + pi0s[q + 2].trace() - c.dims[q + 2] - kerbox[q + 2]);
    rep.max_residual = std::max({rep.max_residual, st.cyclic_pi0, st.cyclic_pi0_star, st.cyclic_box, st.master, st.closing});
    rep.steps.push_back(st);
  }
  rep.passed = rep.max_residual <= tolerance;
  return rep;
}

}  // namespace heis
