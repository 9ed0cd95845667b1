#pragma once

#include <vector>

#include "lesbox/field.hpp"

namespace lesbox::fft {

// Real-space samples of every component on the grid's own n^3 lattice,
// component-major.  The field must be (numerically) conjugate symmetric;
// imaginary parts of the synthesis are dropped.
std::vector<double> to_real(const SpectralField& f);

// Analysis of real samples (component-major, n^3 per component) back to
// spectral coefficients with the 1/n^3 normalization.
SpectralField from_real(const TorusGrid& g, int components,
                        const std::vector<double>& values);

// Low-level access for the product path: in-place complex transforms on a
// cached, thread-local m^3 buffer.  Plans use FFTW_ESTIMATE so results do not
// depend on planner timing.  FFTW planning is serialized internally; execution
// is thread-safe because every thread owns its buffers.
cplx* buffer(int m);
void forward(int m, cplx* data);  // analysis, scales by 1/m^3
void backward(int m, cplx* data); // synthesis, unnormalized

} // namespace lesbox::fft
