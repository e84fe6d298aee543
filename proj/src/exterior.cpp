#include "heis/exterior.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace heis {

namespace {

std::vector<std::vector<int>> lex_subsets(const std::vector<int>& pool, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(size_t)> rec = [&](size_t start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (size_t i = start; i < pool.size(); ++i) {
      cur.push_back(pool[i]);
      rec(i + 1);
      cur.pop_back();
    }
  };
  if (k >= 0 && k <= static_cast<int>(pool.size())) rec(0);
  return out;
}

std::string subset_label(const std::vector<int>& s, const std::string& prefix) {
  if (s.empty()) return "1";
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) out += (i ? "^" : "") + prefix + std::to_string(s[i] + 1);
  return out;
}

}  // namespace

ExteriorAlgebra::ExteriorAlgebra(int generators) : g_(generators) {
  if (generators < 0) throw std::invalid_argument("ExteriorAlgebra: negative generator count");
  std::vector<int> pool(g_);
  for (int i = 0; i < g_; ++i) pool[i] = i;
  for (int k = 0; k <= g_; ++k) basis_.push_back(lex_subsets(pool, k));
}

const std::vector<std::vector<int>>& ExteriorAlgebra::basis(int k) const {
  static const std::vector<std::vector<int>> empty;
  if (k < 0 || k > g_) return empty;
  return basis_[k];
}

int ExteriorAlgebra::dim(int k) const { return static_cast<int>(basis(k).size()); }

int ExteriorAlgebra::index_of(const std::vector<int>& subset) const {
  const auto& b = basis(static_cast<int>(subset.size()));
  auto it = std::lower_bound(b.begin(), b.end(), subset);
  if (it == b.end() || *it != subset) return -1;
  return static_cast<int>(it - b.begin());
}

Eigen::MatrixXd ExteriorAlgebra::wedge(int i, int k) const {
  if (i < 0 || i >= g_) throw std::out_of_range("ExteriorAlgebra::wedge: generator out of range");
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(dim(k + 1), dim(k));
  const auto& src = basis(k);
  for (size_t c = 0; c < src.size(); ++c) {
    const auto& s = src[c];
    if (std::binary_search(s.begin(), s.end(), i)) continue;
    std::vector<int> t = s;
    auto pos = std::lower_bound(t.begin(), t.end(), i);
    const int before = static_cast<int>(pos - t.begin());
    t.insert(pos, i);
    W(index_of(t), c) = (before % 2 == 0) ? 1.0 : -1.0;
  }
  return W;
}

Eigen::MatrixXd ExteriorAlgebra::contract(int i, int k) const {
  if (k < 1 || k > g_) return Eigen::MatrixXd::Zero(std::max(dim(k - 1), 0), dim(k));
  return wedge(i, k - 1).transpose();
}

PQFiber::PQFiber(int n, int p, int q) : n_(n), p_(p), q_(q) {
  if (n < 1) throw std::invalid_argument("PQFiber: n must be >= 1");
  if (p < 0 || p > n || q < 0 || q > n) throw std::out_of_range("PQFiber: degree out of range");
  std::vector<int> holo(n), anti(n);
  for (int j = 0; j < n; ++j) {
    holo[j] = j;
    anti[j] = n + j;
  }
  for (const auto& J : lex_subsets(holo, p)) {
    for (const auto& K : lex_subsets(anti, q)) {
      std::vector<int> s = J;
      s.insert(s.end(), K.begin(), K.end());
      basis_.push_back(s);
    }
  }
}

Fiber PQFiber::descriptor() const {
  Fiber f{"pq(" + std::to_string(n_) + "," + std::to_string(p_) + "," + std::to_string(q_) + ")", dim(), {}};
  for (const auto& s : basis_) {
    std::vector<int> J, K;
    for (int i : s) (i < n_ ? J : K).push_back(i < n_ ? i : i - n_);
    std::string label = subset_label(J, "t");
    if (!K.empty()) label = (J.empty() ? "" : label + "^") + subset_label(K, "tb");
    f.labels.push_back(label);
  }
  return f;
}

Eigen::MatrixXd PQFiber::embedding() const {
  ExteriorAlgebra A(2 * n_);
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(A.dim(p_ + q_), dim());
  for (int i = 0; i < dim(); ++i) E(A.index_of(basis_[i]), i) = 1.0;
  return E;
}

namespace {

Eigen::MatrixXd fiber_wedge(int n, int p, int q, int generator, int dp, int dq) {
  PQFiber src(n, p, q), dst(n, p + dp, q + dq);
  ExteriorAlgebra A(2 * n);
  return dst.embedding().transpose() * A.wedge(generator, p + q) * src.embedding();
}

}  // namespace

Eigen::MatrixXd wedge_theta_bar(int n, int p, int q, int j) {
  if (j < 0 || j >= n) throw std::out_of_range("wedge_theta_bar: index out of range");
  if (q >= n) throw std::out_of_range("wedge_theta_bar: q must be <= n-1");
  return fiber_wedge(n, p, q, n + j, 0, 1);
}

Eigen::MatrixXd wedge_theta(int n, int p, int q, int j) {
  if (j < 0 || j >= n) throw std::out_of_range("wedge_theta: index out of range");
  if (p >= n) throw std::out_of_range("wedge_theta: p must be <= n-1");
  return fiber_wedge(n, p, q, j, 1, 0);
}

Fiber horizontal_descriptor(int n, int k) {
  ExteriorAlgebra A(2 * n);
  Fiber f{"horizontal(" + std::to_string(n) + "," + std::to_string(k) + ")", A.dim(k), {}};
  for (const auto& s : A.basis(k)) f.labels.push_back(subset_label(s, "e"));
  return f;
}

}  // namespace heis
