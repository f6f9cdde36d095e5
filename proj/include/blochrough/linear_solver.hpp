// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BLOCHROUGH_LINEAR_SOLVER_HPP
#define BLOCHROUGH_LINEAR_SOLVER_HPP

#include <functional>
#include <memory>
#include <span>
#include <vector>
#include "blochrough/sparse.hpp"
#include "blochrough/types.hpp"

namespace blochrough
{

struct SolverOptions
{
  double tol = 1e-8;
  int restart = 50;
  int maxit = 2000;

  bool operator==(const SolverOptions &) const = default;
};

// Throws ParameterError unless tol in (0, 1), restart >= 1 and maxit >= 1.
void validate(const SolverOptions &opts);

// ILU(0) of one block stored in place: strict lower part holds L (unit diagonal implied),
// the rest holds U. The pattern is that of the input.
struct Ilu0Factor
{
  CsrMatrix LU;
  std::vector<int> diag;

  // Solves L U z = r.
  void solve(const cplx *r, cplx *z) const;
  CsrMatrix lower() const;  // with explicit unit diagonal
  CsrMatrix upper() const;
};

// Throws PivotError(block, row) on a zero pivot.
Ilu0Factor ilu0(const CsrMatrix &A, int block = 0);

// Block-diagonal ILU(0) over consecutive blocks of equal size.
class BlockIlu0
{
public:
  explicit BlockIlu0(const std::vector<CsrMatrix> &blocks);

  int num_blocks() const { return static_cast<int>(factors_.size()); }
  const Ilu0Factor &factor(int j) const { return factors_[j]; }

  // z = (LU)^{-1} r blockwise.
  void apply(const cplx *r, cplx *z) const;

private:
  std::vector<Ilu0Factor> factors_;
  std::vector<std::size_t> offsets_;
};

BlockIlu0 block_ilu0(const std::vector<CsrMatrix> &blocks);

// Exact sparse LU of every diagonal block. Costs far more memory than ILU(0) but keeps the
// GMRES iteration count nearly independent of h.
class BlockLu
{
public:
  explicit BlockLu(const std::vector<CsrMatrix> &blocks);
  ~BlockLu();
  BlockLu(BlockLu &&) noexcept;

  void apply(const cplx *r, cplx *z) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// y = op(x) for vectors of the system size.
using LinearOperator = std::function<void(const cplx *x, cplx *y)>;

struct GmresResult
{
  std::vector<cplx> x;
  int iterations = 0;
  double residual = 0.0;       // relative preconditioned residual
  double true_residual = 0.0;  // ||b - A x|| / ||b|| from a fresh application
  bool converged = false;
  bool stagnated = false;
  std::vector<double> history;  // preconditioned relative residual per iteration
};

// Restarted GMRES with left preconditioning (precond may be empty). Converged means both the
// preconditioned and the unpreconditioned relative residual are at most tol.
GmresResult gmres_solve(const LinearOperator &A, const LinearOperator &precond,
                        std::span<const cplx> rhs, const SolverOptions &opts,
                        std::span<const cplx> x0 = {});

}  // namespace blochrough

#endif  // BLOCHROUGH_LINEAR_SOLVER_HPP
