#include "rmm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rmm/errors.hpp"

namespace rmm::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::vector<std::size_t> descending_order(const std::vector<double>& values) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return idx;
}

// Column-major scratch storage; one-sided Jacobi touches whole columns.
using Columns = std::vector<std::vector<double>>;

Columns to_columns(const Matrix& a) {
  Columns c(a.cols(), std::vector<double>(a.rows()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c[j][i] = a(i, j);
  return c;
}

double col_dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void rotate(std::vector<double>& p, std::vector<double>& q, double c, double s) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double xp = p[i];
    const double xq = q[i];
    p[i] = c * xp - s * xq;
    q[i] = s * xp + c * xq;
  }
}

// Appends a unit vector orthogonal to every column in `basis`.
std::vector<double> orthogonal_complement_vector(const Columns& basis, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> e(n, 0.0);
    e[k] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const double proj = col_dot(b, e);
        for (std::size_t i = 0; i < n; ++i) e[i] -= proj * b[i];
      }
    }
    const double nrm = std::sqrt(col_dot(e, e));
    if (nrm > 1e-8) {
      for (double& v : e) v /= nrm;
      return e;
    }
  }
  throw NumericalError("thin_svd: could not complete orthonormal basis");
}

constexpr double kTinyNorm2 = std::numeric_limits<double>::min() / kEps;

SvdResult tall_svd(const Matrix& a) {
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  Columns g = to_columns(a);
  Columns v(m, std::vector<double>(m, 0.0));
  for (std::size_t j = 0; j < m; ++j) v[j][j] = 1.0;

  const double tol = kEps * static_cast<double>(std::max<std::size_t>(n, 1));
  constexpr int kMaxSweeps = 80;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        const double alpha = col_dot(g[p], g[p]);
        const double beta = col_dot(g[q], g[q]);
        // columns scaled into the subnormal range carry no usable direction
        if (alpha < kTinyNorm2 || beta < kTinyNorm2) continue;
        const double gamma = col_dot(g[p], g[q]);
        if (std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate(g[p], g[q], c, s);
        rotate(v[p], v[q], c, s);
      }
    }
  }
  if (!converged) throw NumericalError("thin_svd: one-sided Jacobi did not converge");

  std::vector<double> sigma(m);
  for (std::size_t j = 0; j < m; ++j) sigma[j] = std::sqrt(col_dot(g[j], g[j]));
  const auto order = descending_order(sigma);

  SvdResult r;
  r.sigma.resize(m);
  r.u = Matrix(n, m);
  r.v = Matrix(m, m);
  const double smax = m == 0 ? 0.0 : sigma[order[0]];
  const double zero_class = static_cast<double>(std::max(n, m)) * kEps * smax;

  Columns ucols;
  ucols.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t j = order[k];
    r.sigma[k] = sigma[j];
    if (sigma[j] > zero_class && sigma[j] > 0.0) {
      ++r.rank;
      std::vector<double> u = g[j];
      for (double& x : u) x /= sigma[j];
      ucols.push_back(std::move(u));
    }
  }
  for (std::size_t k = r.rank; k < m; ++k) ucols.push_back(orthogonal_complement_vector(ucols, n));
  for (std::size_t k = 0; k < m; ++k) {
    r.u.set_col(k, ucols[k]);
    r.v.set_col(k, v[order[k]]);
  }
  return r;
}

}  // namespace

EigenResult sym_eig(const Matrix& s, const JacobiOptions& opts) {
  const std::size_t n = s.rows();
  if (s.cols() != n) throw DimensionError("sym_eig: matrix is not square");
  if (!all_finite(s.data())) throw DataError("sym_eig: non-finite entries");
  const double scale = max_abs(s);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(s(i, j) - s(j, i)) > 1e-12 * scale)
        throw DataError("sym_eig: matrix is not symmetric at (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");

  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (s(i, j) + s(j, i));
  Matrix v = Matrix::identity(n);

  const double fro = frobenius(a);
  EigenResult r;
  auto off_norm = [&] {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) acc += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(acc);
  };

  bool converged = fro == 0.0;
  while (!converged) {
    if (off_norm() <= opts.rel_tol * fro) {
      converged = true;
      break;
    }
    if (r.sweeps >= opts.max_sweeps) break;
    ++r.sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          const double np = c * akp - sn * akq;
          const double nq = sn * akp + c * akq;
          a(k, p) = np;
          a(p, k) = np;
          a(k, q) = nq;
          a(q, k) = nq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) throw NumericalError("sym_eig: Jacobi sweeps exhausted before convergence");

  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);
  const auto order = descending_order(diag);
  r.values.resize(n);
  r.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    r.values[k] = diag[order[k]];
    for (std::size_t i = 0; i < n; ++i) r.vectors(i, k) = v(i, order[k]);
  }
  const double top = n == 0 ? 0.0 : std::abs(r.values[0]);
  for (double& lam : r.values)
    if (lam < 0.0 && lam >= -1e-10 * top) lam = 0.0;
  return r;
}

SvdResult thin_svd(const Matrix& a) {
  if (!all_finite(a.data())) throw DataError("thin_svd: non-finite entries");
  if (a.rows() >= a.cols()) return tall_svd(a);
  SvdResult t = tall_svd(a.transposed());
  std::swap(t.u, t.v);
  return t;
}

std::optional<Matrix> cholesky(const Matrix& s) {
  const std::size_t n = s.rows();
  if (s.cols() != n) throw DimensionError("cholesky: matrix is not square");
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = s(j, j);
    auto lj = l.row(j);
    for (std::size_t k = 0; k < j; ++k) d -= lj[k] * lj[k];
    if (!(d > 0.0) || !std::isfinite(d)) return std::nullopt;
    const double ljj = std::sqrt(d);
    lj[j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      auto li = l.row(i);
      double acc = s(i, j);
      for (std::size_t k = 0; k < j; ++k) acc -= li[k] * lj[k];
      li[j] = acc / ljj;
    }
  }
  return l;
}

Matrix cholesky_solve(const Matrix& lower, const Matrix& b) {
  const std::size_t n = lower.rows();
  if (b.rows() != n) throw DimensionError("cholesky_solve: row mismatch");
  Matrix x = b;
  const std::size_t q = b.cols();
  // forward: L y = b
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = x.row(i);
    for (std::size_t k = 0; k < i; ++k) {
      const double lik = lower(i, k);
      auto xk = x.row(k);
      for (std::size_t c = 0; c < q; ++c) xi[c] -= lik * xk[c];
    }
    for (std::size_t c = 0; c < q; ++c) xi[c] /= lower(i, i);
  }
  // backward: Lᵀ x = y
  for (std::size_t ii = n; ii-- > 0;) {
    auto xi = x.row(ii);
    for (std::size_t k = ii + 1; k < n; ++k) {
      const double lki = lower(k, ii);
      auto xk = x.row(k);
      for (std::size_t c = 0; c < q; ++c) xi[c] -= lki * xk[c];
    }
    for (std::size_t c = 0; c < q; ++c) xi[c] /= lower(ii, ii);
  }
  return x;
}

RidgeResult ridge_solve_gram(const Matrix& g, const Matrix& xty, double lambda) {
  const std::size_t p = g.rows();
  if (g.cols() != p || xty.rows() != p) throw DimensionError("ridge_solve_gram: shape mismatch");
  if (!(lambda > 0.0)) throw ConfigError("ridge_solve_gram: requires lambda > 0");

  Matrix reg = g;
  for (std::size_t i = 0; i < p; ++i) reg(i, i) += lambda;
  RidgeResult r;
  if (auto l = cholesky(reg)) {
    r.coef = cholesky_solve(*l, xty);
    r.method = RidgeResult::Method::Cholesky;
    r.rank = p;
    return r;
  }
  const EigenResult e = sym_eig(g);
  const double top = e.values.empty() ? 0.0 : std::max(e.values[0], 0.0);
  Matrix proj = matmul_tn(e.vectors, xty);  // Vᵀ XᵀY
  for (std::size_t i = 0; i < p; ++i) {
    const double d = std::max(e.values[i], 0.0);
    if (d > static_cast<double>(p) * kEps * top) ++r.rank;
    for (double& x : proj.row(i)) x /= d + lambda;
  }
  r.coef = matmul(e.vectors, proj);
  r.method = RidgeResult::Method::Svd;
  return r;
}

RidgeResult ridge_solve(const Matrix& x, const Matrix& y, double lambda) {
  if (x.rows() == 0) throw DimensionError("ridge_solve: X has no rows");
  if (x.rows() != y.rows()) throw DimensionError("ridge_solve: X and Y row counts differ");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("ridge_solve: lambda must be finite and >= 0");
  if (!all_finite(x.data()) || !all_finite(y.data())) throw DataError("ridge_solve: non-finite entries");

  if (lambda > 0.0) return ridge_solve_gram(gram(x), matmul_tn(x, y), lambda);

  const SvdResult svd = thin_svd(x);
  const std::size_t k = svd.sigma.size();
  Matrix uty = matmul_tn(svd.u, y);  // k×q
  for (std::size_t i = 0; i < k; ++i) {
    const double scale = i < svd.rank ? 1.0 / svd.sigma[i] : 0.0;
    for (double& v : uty.row(i)) v *= scale;
  }
  RidgeResult r;
  r.coef = matmul(svd.v, uty);
  r.method = RidgeResult::Method::Svd;
  r.rank = svd.rank;
  r.minimal_norm = svd.rank < x.cols();
  return r;
}

}  // namespace rmm::numerics
