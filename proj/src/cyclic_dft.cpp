// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blochrough/cyclic_dft.hpp"

#include <mutex>
#include <fftw3.h>
#include "blochrough/errors.hpp"

namespace blochrough
{

namespace
{

// FFTW planning is not thread safe.
std::mutex &planner_mutex()
{
  static std::mutex m;
  return m;
}

fftw_complex *as_fftw(cplx *p)
{
  return reinterpret_cast<fftw_complex *>(p);
}

}  // namespace

CyclicDft::CyclicDft(int n, bool use_fft) : n_(n)
{
  if (n < 1)
  {
    throw ParameterError("DFT length must be positive");
  }
  if (use_fft)
  {
    std::vector<cplx> a(n), b(n);
    std::lock_guard lock(planner_mutex());
    // Estimate mode keeps the plan, and therefore the rounding, identical between runs.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd_ = fftw_plan_dft_1d(n, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft_1d(n, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
    if (!fwd_ || !bwd_)
    {
      throw Error("FFTW planning failed");
    }
  }
  else
  {
    twiddle_.resize(n);
    for (int k = 0; k < n; k++)
    {
      twiddle_[k] = std::polar(1.0, -2.0 * pi * k / n);
    }
  }
}

CyclicDft::~CyclicDft()
{
  if (fwd_ || bwd_)
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  }
}

void CyclicDft::forward(const cplx *in, cplx *out) const
{
  if (fwd_)
  {
    fftw_execute_dft(static_cast<fftw_plan>(fwd_), as_fftw(const_cast<cplx *>(in)), as_fftw(out));
  }
  else
  {
    direct(in, out, false);
  }
}

void CyclicDft::backward(const cplx *in, cplx *out) const
{
  if (bwd_)
  {
    fftw_execute_dft(static_cast<fftw_plan>(bwd_), as_fftw(const_cast<cplx *>(in)), as_fftw(out));
  }
  else
  {
    direct(in, out, true);
  }
}

void CyclicDft::direct(const cplx *in, cplx *out, bool conj) const
{
  for (int r = 0; r < n_; r++)
  {
    cplx acc = 0.0;
    int k = 0;
    for (int j = 0; j < n_; j++)
    {
      acc += in[j] * (conj ? std::conj(twiddle_[k]) : twiddle_[k]);
      k += r;
      if (k >= n_)
      {
        k -= n_;
      }
    }
    out[r] = acc;
  }
}

}  // namespace blochrough
