#pragma once

#include <span>

#include "lesbox/field.hpp"

namespace lesbox {

// Compensated summation; keeps every reduction deterministic to the last bit
// for a fixed traversal order.
template <class T = double>
struct KahanSum {
  T sum{};
  T carry{};
  void add(T x) {
    const T y = x - carry;
    const T t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  T value() const { return sum; }
};

struct SobolevIndex {
  double s = 0.0;
  bool homogeneous = false; // weight |k|^(2s) instead of (1+|k|^2)^s
};

// Norms use Parseval on the coefficient lattice:
//   ||f||^2 = period^3 * sum_k weight(k) |f_hat(k)|^2.
// The homogeneous weight skips k = 0.
double sobolev_norm(const SpectralField& f, SobolevIndex idx);

// Real L2 inner product, period^3 * sum Re(a conj(b)), component-wise.
double inner_l2(const SpectralField& a, const SpectralField& b);

SpectralField derivative(const SpectralField& f, int axis);

// Contraction on the first tensor slot: (div T)_m = sum_j i k_j T_{jm}.
// For a vector argument returns the scalar divergence.
SpectralField divergence(const SpectralField& f);

SpectralField gradient(const SpectralField& scalar);

// Removes the component parallel to k at every mode; k = 0 is untouched.
SpectralField leray_project(const SpectralField& v);

// Pointwise product of the represented real fields, truncated to the dealias
// mask.  Equals the exact truncated convolution of the masked inputs: when
// 3*dealias_kmax >= n the product is formed on a zero-padded lattice so no
// aliased triad can land inside the mask.  Components combine as an outer
// product, slot t = j * b.components + m.
SpectralField dealiased_product(const SpectralField& a,
                                const SpectralField& b);

SpectralField transpose_tensor(const SpectralField& t);

void apply_dealias_mask(SpectralField& f);
void enforce_zero_mean(SpectralField& f);

// Projects onto the conjugate-symmetric (real-valued) subspace.
void symmetrize(SpectralField& f);
double max_conjugate_asymmetry(const SpectralField& f);

// max_k |k . v_hat(k)|, the spectral divergence residual of a vector field.
double max_divergence(const SpectralField& v);

SpectralField add(const SpectralField& a, const SpectralField& b);
SpectralField subtract(const SpectralField& a, const SpectralField& b);
SpectralField scale(const SpectralField& a, double factor);

} // namespace lesbox
