// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BLOCHROUGH_CYCLIC_DFT_HPP
#define BLOCHROUGH_CYCLIC_DFT_HPP

#include <vector>
#include "blochrough/types.hpp"

namespace blochrough
{

// Length-n cyclic DFT, forward out[r] = sum_j in[j] exp(-2 pi i j r / n) and backward with
// the opposite sign, unnormalized. Uses FFTW when use_fft is set and direct summation
// otherwise. Execution is reentrant; in and out must not alias.
class CyclicDft
{
public:
  CyclicDft(int n, bool use_fft);
  ~CyclicDft();
  CyclicDft(const CyclicDft &) = delete;
  CyclicDft &operator=(const CyclicDft &) = delete;

  int size() const { return n_; }
  bool uses_fft() const { return fwd_ != nullptr; }

  void forward(const cplx *in, cplx *out) const;
  void backward(const cplx *in, cplx *out) const;

private:
  void direct(const cplx *in, cplx *out, bool conj) const;

  int n_;
  std::vector<cplx> twiddle_;
  void *fwd_ = nullptr;
  void *bwd_ = nullptr;
};

}  // namespace blochrough

#endif  // BLOCHROUGH_CYCLIC_DFT_HPP
