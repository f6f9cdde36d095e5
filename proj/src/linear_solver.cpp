// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blochrough/linear_solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <sstream>
#include "blochrough/errors.hpp"
#include "blochrough/log.hpp"

namespace blochrough
{

void validate(const SolverOptions &opts)
{
  if (!(opts.tol > 0.0 && opts.tol < 1.0) || opts.restart < 1 || opts.maxit < 1)
  {
    throw ParameterError("solver options need 0 < tol < 1, restart >= 1 and maxit >= 1");
  }
}

void Ilu0Factor::solve(const cplx *r, cplx *z) const
{
  const int n = LU.rows;
  for (int i = 0; i < n; i++)
  {
    cplx acc = r[i];
    for (int p = LU.row_ptr[i]; p < diag[i]; p++)
    {
      acc -= LU.values[p] * z[LU.col_idx[p]];
    }
    z[i] = acc;
  }
  for (int i = n - 1; i >= 0; i--)
  {
    cplx acc = z[i];
    for (int p = diag[i] + 1; p < LU.row_ptr[i + 1]; p++)
    {
      acc -= LU.values[p] * z[LU.col_idx[p]];
    }
    z[i] = acc / LU.values[diag[i]];
  }
}

CsrMatrix Ilu0Factor::lower() const
{
  CsrMatrix L = LU;
  for (int i = 0; i < L.rows; i++)
  {
    for (int p = L.row_ptr[i]; p < L.row_ptr[i + 1]; p++)
    {
      const int j = L.col_idx[p];
      L.values[p] = j < i ? LU.values[p] : (j == i ? cplx(1.0) : cplx(0.0));
    }
  }
  return L;
}

CsrMatrix Ilu0Factor::upper() const
{
  CsrMatrix U = LU;
  for (int i = 0; i < U.rows; i++)
  {
    for (int p = U.row_ptr[i]; p < U.row_ptr[i + 1]; p++)
    {
      if (U.col_idx[p] < i)
      {
        U.values[p] = 0.0;
      }
    }
  }
  return U;
}

Ilu0Factor ilu0(const CsrMatrix &A, int block)
{
  if (A.rows != A.cols)
  {
    throw ParameterError("ILU(0) needs a square matrix");
  }
  Ilu0Factor f;
  f.LU = A;
  CsrMatrix &LU = f.LU;
  const int n = A.rows;
  f.diag.assign(n, -1);
  for (int i = 0; i < n; i++)
  {
    f.diag[i] = LU.find(i, i);
    if (f.diag[i] < 0)
    {
      throw PivotError(block, i);
    }
  }
  std::vector<int> where(n, -1);
  for (int i = 0; i < n; i++)
  {
    for (int p = LU.row_ptr[i]; p < LU.row_ptr[i + 1]; p++)
    {
      where[LU.col_idx[p]] = p;
    }
    for (int p = LU.row_ptr[i]; p < f.diag[i]; p++)
    {
      const int k = LU.col_idx[p];
      const cplx pivot = LU.values[f.diag[k]];
      if (pivot == 0.0)
      {
        throw PivotError(block, k);
      }
      const cplx lik = LU.values[p] / pivot;
      LU.values[p] = lik;
      for (int t = f.diag[k] + 1; t < LU.row_ptr[k + 1]; t++)
      {
        const int w = where[LU.col_idx[t]];
        if (w >= 0)
        {
          LU.values[w] -= lik * LU.values[t];
        }
      }
    }
    for (int p = LU.row_ptr[i]; p < LU.row_ptr[i + 1]; p++)
    {
      where[LU.col_idx[p]] = -1;
    }
    if (LU.values[f.diag[i]] == 0.0)
    {
      throw PivotError(block, i);
    }
  }
  return f;
}

BlockIlu0::BlockIlu0(const std::vector<CsrMatrix> &blocks)
{
  factors_.resize(blocks.size());
  offsets_.assign(blocks.size() + 1, 0);
  for (std::size_t j = 0; j < blocks.size(); j++)
  {
    offsets_[j + 1] = offsets_[j] + blocks[j].rows;
  }
  // Exceptions must not escape an OpenMP region; collect the first one.
  std::vector<std::string> failure(blocks.size());
  std::vector<int> fail_row(blocks.size(), -1);
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < static_cast<int>(blocks.size()); j++)
  {
    try
    {
      factors_[j] = ilu0(blocks[j], j);
    }
    catch (const PivotError &e)
    {
      fail_row[j] = e.row();
    }
  }
  for (std::size_t j = 0; j < blocks.size(); j++)
  {
    if (fail_row[j] >= 0)
    {
      throw PivotError(static_cast<int>(j), fail_row[j]);
    }
  }
}

void BlockIlu0::apply(const cplx *r, cplx *z) const
{
#pragma omp parallel for schedule(static)
  for (int j = 0; j < num_blocks(); j++)
  {
    factors_[j].solve(r + offsets_[j], z + offsets_[j]);
  }
}

BlockIlu0 block_ilu0(const std::vector<CsrMatrix> &blocks)
{
  return BlockIlu0(blocks);
}

struct BlockLu::Impl
{
  using Sparse = Eigen::SparseMatrix<cplx, Eigen::ColMajor, int>;
  std::vector<std::unique_ptr<Eigen::SparseLU<Sparse>>> lu;
  std::vector<std::size_t> offsets;
};

BlockLu::BlockLu(const std::vector<CsrMatrix> &blocks) : impl_(std::make_unique<Impl>())
{
  impl_->lu.resize(blocks.size());
  impl_->offsets.assign(blocks.size() + 1, 0);
  for (std::size_t j = 0; j < blocks.size(); j++)
  {
    const CsrMatrix &A = blocks[j];
    impl_->offsets[j + 1] = impl_->offsets[j] + A.rows;
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(A.nnz());
    for (int i = 0; i < A.rows; i++)
    {
      for (int p = A.row_ptr[i]; p < A.row_ptr[i + 1]; p++)
      {
        trip.emplace_back(i, A.col_idx[p], A.values[p]);
      }
    }
    Impl::Sparse S(A.rows, A.cols);
    S.setFromTriplets(trip.begin(), trip.end());
    S.makeCompressed();
    auto &f = impl_->lu[j];
    f = std::make_unique<Eigen::SparseLU<Impl::Sparse>>();
    f->compute(S);
    if (f->info() != Eigen::Success)
    {
      throw PivotError(static_cast<int>(j), -1);
    }
  }
}

BlockLu::~BlockLu() = default;
BlockLu::BlockLu(BlockLu &&) noexcept = default;

void BlockLu::apply(const cplx *r, cplx *z) const
{
  for (std::size_t j = 0; j < impl_->lu.size(); j++)
  {
    const auto n = static_cast<Eigen::Index>(impl_->offsets[j + 1] - impl_->offsets[j]);
    Eigen::Map<const Eigen::VectorXcd> in(r + impl_->offsets[j], n);
    Eigen::Map<Eigen::VectorXcd> out(z + impl_->offsets[j], n);
    out = impl_->lu[j]->solve(in);
  }
}

namespace
{

double norm(const std::vector<cplx> &v)
{
  double s = 0.0;
  for (const cplx &a : v)
  {
    s += std::norm(a);
  }
  return std::sqrt(s);
}

cplx dot(const std::vector<cplx> &a, const std::vector<cplx> &b)
{
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); i++)
  {
    s += std::conj(a[i]) * b[i];
  }
  return s;
}

}  // namespace

GmresResult gmres_solve(const LinearOperator &A, const LinearOperator &precond,
                        std::span<const cplx> rhs, const SolverOptions &opts,
                        std::span<const cplx> x0)
{
  validate(opts);
  const std::size_t n = rhs.size();
  if (!x0.empty() && x0.size() != n)
  {
    throw ParameterError("initial guess size does not match the right-hand side");
  }
  GmresResult out;
  out.x.assign(n, 0.0);
  if (!x0.empty())
  {
    out.x.assign(x0.begin(), x0.end());
  }
  const std::vector<cplx> b(rhs.begin(), rhs.end());
  const double bnorm = norm(b);
  if (bnorm == 0.0)
  {
    out.x.assign(n, 0.0);
    out.converged = true;
    return out;
  }
  auto apply_prec = [&](const std::vector<cplx> &in, std::vector<cplx> &o) {
    if (precond)
    {
      precond(in.data(), o.data());
    }
    else
    {
      o = in;
    }
  };
  std::vector<cplx> r(n), z(n), w(n);
  apply_prec(b, z);
  const double pbnorm = norm(z);

  // r = b - A x, z = P^{-1} r; returns the unpreconditioned relative residual.
  auto residual = [&]() {
    A(out.x.data(), r.data());
    for (std::size_t i = 0; i < n; i++)
    {
      r[i] = b[i] - r[i];
    }
    apply_prec(r, z);
    return norm(r) / bnorm;
  };

  const int m = opts.restart;
  std::vector<std::vector<cplx>> V(m + 1, std::vector<cplx>(n));
  std::vector<cplx> H(std::size_t(m + 1) * m), g(m + 1), sn(m);
  std::vector<double> cs(m);
  auto h = [&](int i, int j) -> cplx & { return H[std::size_t(i) * m + j]; };

  double true_rel = residual();
  double beta = norm(z);
  double target = opts.tol;
  double prev = beta / pbnorm;
  while (true)
  {
    out.residual = beta / pbnorm;
    out.true_residual = true_rel;
    if (out.residual <= opts.tol && true_rel <= opts.tol)
    {
      out.converged = true;
      break;
    }
    if (out.iterations >= opts.maxit)
    {
      break;
    }
    if (out.residual <= opts.tol)
    {
      // The preconditioned target is met but the true residual is not; tighten.
      target = std::min(target, out.residual) * 0.5 * opts.tol / true_rel;
    }
    for (std::size_t i = 0; i < n; i++)
    {
      V[0][i] = z[i] / beta;
    }
    std::fill(g.begin(), g.end(), cplx(0.0));
    g[0] = beta;
    int k = 0;
    while (k < m && out.iterations < opts.maxit)
    {
      A(V[k].data(), r.data());
      apply_prec(r, w);
      for (int l = 0; l <= k; l++)
      {
        h(l, k) = dot(V[l], w);
        for (std::size_t i = 0; i < n; i++)
        {
          w[i] -= h(l, k) * V[l][i];
        }
      }
      const double hn = norm(w);
      h(k + 1, k) = hn;
      if (hn > 0.0)
      {
        for (std::size_t i = 0; i < n; i++)
        {
          V[k + 1][i] = w[i] / hn;
        }
      }
      for (int l = 0; l < k; l++)
      {
        const cplx t = cs[l] * h(l, k) + sn[l] * h(l + 1, k);
        h(l + 1, k) = -std::conj(sn[l]) * h(l, k) + cs[l] * h(l + 1, k);
        h(l, k) = t;
      }
      const cplx a = h(k, k), c = h(k + 1, k);
      const double t = std::hypot(std::abs(a), std::abs(c));
      if (std::abs(a) == 0.0)
      {
        cs[k] = 0.0;
        sn[k] = 1.0;
      }
      else
      {
        cs[k] = std::abs(a) / t;
        sn[k] = a / std::abs(a) * std::conj(c) / t;
      }
      h(k, k) = cs[k] * a + sn[k] * c;
      h(k + 1, k) = 0.0;
      g[k + 1] = -std::conj(sn[k]) * g[k];
      g[k] = cs[k] * g[k];
      k++;
      out.iterations++;
      const double rel = std::abs(g[k]) / pbnorm;
      out.history.push_back(rel);
      if (log::verbosity() >= 1)
      {
        std::ostringstream msg;
        msg << "gmres " << out.iterations << " " << rel;
        log::info(msg.str());
      }
      if (rel <= target || hn == 0.0)
      {
        break;
      }
    }
    // Back substitution and update.
    std::vector<cplx> y(k);
    for (int i = k - 1; i >= 0; i--)
    {
      cplx acc = g[i];
      for (int l = i + 1; l < k; l++)
      {
        acc -= h(i, l) * y[l];
      }
      y[i] = acc / h(i, i);
    }
    for (int l = 0; l < k; l++)
    {
      for (std::size_t i = 0; i < n; i++)
      {
        out.x[i] += y[l] * V[l][i];
      }
    }
    true_rel = residual();
    beta = norm(z);
    const double now = beta / pbnorm;
    if (now >= prev * (1.0 - 1e-12) && !(now <= opts.tol && true_rel <= opts.tol))
    {
      out.residual = now;
      out.true_residual = true_rel;
      out.stagnated = true;
      std::ostringstream msg;
      msg << "GMRES stagnated after " << out.iterations << " iterations at relative residual "
          << now;
      log::warning(msg.str());
      break;
    }
    prev = now;
  }
  return out;
}

}  // namespace blochrough
