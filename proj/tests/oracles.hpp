#pragma once
// Independent reference implementations used only by tests. Everything here is
// computed by direct summation or closed forms, never by the library code paths
// under test.
#include <complex>
#include <random>

#include "tfp/grid_signal.hpp"

namespace oracle {

using tfp::cd;
using tfp::CVec;
using tfp::Grid1D;
using tfp::SampledSignal;

inline SampledSignal random_signal(const Grid1D& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  CVec v(g.N);
  for (int j = 0; j < g.N; ++j) v[j] = cd(dist(rng), dist(rng));
  return SampledSignal(g, std::move(v));
}

// Direct O(N^2) sum fhat_k = dx * sum_n f_n e^{-2pi i x_n xi_k}.
inline SampledSignal naive_fourier(const SampledSignal& f, int sign = -1) {
  Grid1D dual = f.grid.dual();
  CVec out(f.grid.N);
  double w = f.grid.dx();
  for (int k = 0; k < f.grid.N; ++k) {
    cd acc = 0;
    for (int n = 0; n < f.grid.N; ++n) {
      acc += f.values[n] * std::polar(1.0, sign * 2 * M_PI * f.grid.x(n) * dual.x(k));
    }
    out[k] = w * acc;
  }
  return SampledSignal(dual, std::move(out));
}

// Direct sum for the centered fractional kernel sum_k c_k e^{2pi i b (j-M/2)(k-N/2)}.
inline CVec naive_fractional(const CVec& c, double beta, int out_size) {
  int n = int(c.size());
  CVec g(out_size);
  for (int j = 0; j < out_size; ++j) {
    cd acc = 0;
    for (int k = 0; k < n; ++k) {
      acc += c[k] * std::polar(1.0, 2 * M_PI * beta * (j - out_size / 2) * (k - n / 2));
    }
    g[j] = acc;
  }
  return g;
}

// Closed-form transform of the chirped gaussian e^{-pi(1-ic)x^2}:
// (1-ic)^{-1/2} e^{-pi xi^2/(1-ic)}, principal square root.
inline cd chirped_gaussian_hat(double c, double xi) {
  cd a(1.0, -c);
  return std::exp(-M_PI * xi * xi / a) / std::sqrt(a);
}

// Direct midpoint quadrature of int f(v) conj(g(v - z1)) e^{-2pi i v z2} dv
// for analytically given f and g; independent of the grid code paths.
template <class F, class G>
cd quadrature_stft(F&& f, G&& g, tfp::PhasePoint z, double R = 12.0, int M = 20000) {
  double h = 2 * R / M;
  cd acc = 0;
  for (int i = 0; i < M; ++i) {
    double v = -R + (i + 0.5) * h;
    acc += f(v) * std::conj(g(v - z.x)) * std::polar(1.0, -2 * M_PI * v * z.xi);
  }
  return h * acc;
}

// e^{-pi x^2} sampled without normalization; its self-STFT has the closed
// form 2^{-1/2} e^{-pi|z|^2/2} (up to phase).
inline SampledSignal plain_gaussian(const Grid1D& g) {
  CVec v(g.N);
  for (int j = 0; j < g.N; ++j) v[j] = std::exp(-M_PI * g.x(j) * g.x(j));
  return SampledSignal(g, std::move(v));
}

}  // namespace oracle
