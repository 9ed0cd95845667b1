#include "lesbox/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace lesbox::fft {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanSet {
  int m = 0;
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  PlanSet() = default;
  PlanSet(const PlanSet&) = delete;
  PlanSet& operator=(const PlanSet&) = delete;

  explicit PlanSet(int size) : m(size) {
    const std::size_t total =
        static_cast<std::size_t>(m) * m * m;
    buf = fftw_alloc_complex(total);
    if (!buf) throw std::bad_alloc();
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd = fftw_plan_dft_3d(m, m, m, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_3d(m, m, m, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!fwd || !bwd) throw std::runtime_error("fft: planning failed");
  }
  ~PlanSet() {
    if (fwd || bwd || buf) {
      std::lock_guard<std::mutex> lock(planner_mutex());
      if (fwd) fftw_destroy_plan(fwd);
      if (bwd) fftw_destroy_plan(bwd);
      if (buf) fftw_free(buf);
    }
  }
};

PlanSet& plans_for(int m) {
  thread_local std::map<int, PlanSet> cache;
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.try_emplace(m, m).first;
  return it->second;
}

} // namespace

cplx* buffer(int m) {
  return reinterpret_cast<cplx*>(plans_for(m).buf);
}

void forward(int m, cplx* data) {
  PlanSet& p = plans_for(m);
  if (data != reinterpret_cast<cplx*>(p.buf))
    throw std::invalid_argument("fft: data must come from fft::buffer");
  fftw_execute(p.fwd);
  const std::size_t total = static_cast<std::size_t>(m) * m * m;
  const double scale = 1.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < total; ++i) data[i] *= scale;
}

void backward(int m, cplx* data) {
  PlanSet& p = plans_for(m);
  if (data != reinterpret_cast<cplx*>(p.buf))
    throw std::invalid_argument("fft: data must come from fft::buffer");
  fftw_execute(p.bwd);
}

std::vector<double> to_real(const SpectralField& f) {
  const int m = f.grid.n;
  const std::size_t total = f.site_count();
  std::vector<double> out(static_cast<std::size_t>(f.components) * total);
  cplx* buf = buffer(m);
  for (int c = 0; c < f.components; ++c) {
    std::memcpy(buf, f.comp(c).data(), total * sizeof(cplx));
    backward(m, buf);
    double* dst = out.data() + static_cast<std::size_t>(c) * total;
    for (std::size_t i = 0; i < total; ++i) dst[i] = buf[i].real();
  }
  return out;
}

SpectralField from_real(const TorusGrid& g, int components,
                        const std::vector<double>& values) {
  const std::size_t total = g.site_count();
  if (values.size() != static_cast<std::size_t>(components) * total)
    throw std::invalid_argument("fft: sample count mismatch");
  SpectralField f = SpectralField::zeros(g, components);
  cplx* buf = buffer(g.n);
  for (int c = 0; c < components; ++c) {
    const double* src = values.data() + static_cast<std::size_t>(c) * total;
    for (std::size_t i = 0; i < total; ++i) buf[i] = cplx{src[i], 0.0};
    forward(g.n, buf);
    std::memcpy(f.comp(c).data(), buf, total * sizeof(cplx));
  }
  return f;
}

} // namespace lesbox::fft
