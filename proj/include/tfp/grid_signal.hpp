#pragma once
#include <Eigen/Dense>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfp {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : Error {
  using Error::Error;
};

// Centered sampling grid on [-L/2, L/2): x_j = -L/2 + j*dx, dx = L/N.
// Frequencies live on the dual grid xi_k = (k - N/2)/L, spanning a band of
// width N/L. The grid is self-dual (dx == dxi) exactly when L^2 == N.
struct Grid1D {
  double L = 0;
  int N = 0;

  Grid1D() = default;
  Grid1D(double length, int count);

  double dx() const { return L / N; }
  double dxi() const { return 1.0 / L; }
  double band() const { return N / L; }
  double x(int j) const { return (j - N / 2) * dx(); }
  double xi(int k) const { return (k - N / 2) * dxi(); }
  Grid1D dual() const { return Grid1D(band(), N); }
  bool self_dual(double tol = 1e-9) const { return std::abs(L * L - N) < tol * N; }
  bool operator==(const Grid1D& o) const { return N == o.N && L == o.L; }
  bool operator!=(const Grid1D& o) const { return !(*this == o); }
};

struct PhasePoint {
  double x = 0;
  double xi = 0;
};

struct SampledSignal {
  Grid1D grid;
  CVec values;
  // Advisory flags attached by operations that detect wrap or aliasing risk;
  // transforms start their outputs with a clean slate.
  std::vector<std::string> notes;

  SampledSignal() = default;
  SampledSignal(Grid1D g, CVec v);

  int size() const { return grid.N; }
  // L^2 norm with the grid quadrature weight, sqrt(dx * sum |v|^2).
  double norm() const;
  double sup_norm() const;
};

// dx-weighted inner product, linear in f, conjugate-linear in g.
cd inner(const SampledSignal& f, const SampledSignal& g);

// Unitary Fourier transform onto the dual grid,
// fhat(xi_k) = dx * sum_n f(x_n) e^{-2pi i x_n xi_k}.
SampledSignal fourier(const SampledSignal& f);
SampledSignal inverse_fourier(const SampledSignal& f);

// Time-frequency shift pi(z) = M_xi T_x. The translation is snapped to the
// nearest grid index (cyclic); the modulation is pointwise with the exact xi.
// |z.x| > L/2 wraps and emits a warning on stderr.
SampledSignal tf_shift(const SampledSignal& f, PhasePoint z);

// Evaluate the trigonometric (bandlimited periodic) interpolant of f at y.
cd eval_interpolant(const SampledSignal& f, double y);
// Same, from precomputed spectrum fhat = fourier(f); O(N) per point.
cd eval_interpolant_spectrum(const SampledSignal& fhat, double y);

// Bandlimited resample onto another grid. Frequencies outside the target band
// are dropped; the discarded energy fraction is returned through *lost.
SampledSignal resample(const SampledSignal& f, const Grid1D& target, double* lost = nullptr);

using SignalParams = std::map<std::string, double>;

// kinds: gaussian(width), plane_wave(xi0, snapped to the frequency grid),
// chirp(c), constant, gabor_atom(x, xi), hermite(n<=2, width),
// eigenmode(n, mu) of the perturbed oscillator (1/4pi)D^2 - pi x^2 + |sin x|^mu.
SampledSignal make_test_signal(const std::string& kind, const SignalParams& params, const Grid1D& g);

}  // namespace tfp
