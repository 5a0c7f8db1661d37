#include "tfp/grid_signal.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <iostream>

#include "tfp/fft.hpp"

namespace tfp {

namespace {

const cd I(0, 1);

// e^{i pi n} for integer n, exact.
double parity(long long n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// e^{i s pi N/2}, exact for even N.
cd half_turn(int N, int s) {
  if (N % 2 == 0) return cd(parity(s * (N / 2)), 0);
  return std::polar(1.0, s * M_PI * N / 2.0);
}

double get_param(const SignalParams& p, const std::string& key, double def) {
  auto it = p.find(key);
  return it == p.end() ? def : it->second;
}

}  // namespace

Grid1D::Grid1D(double length, int count) : L(length), N(count) {
  if (count <= 0 || !(length > 0)) throw ConfigError("grid: need N > 0 and L > 0");
}

SampledSignal::SampledSignal(Grid1D g, CVec v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.N) throw Error("signal: value count does not match grid");
}

double SampledSignal::norm() const { return std::sqrt(grid.dx() * values.squaredNorm()); }

double SampledSignal::sup_norm() const {
  return values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
}

cd inner(const SampledSignal& f, const SampledSignal& g) {
  if (f.grid != g.grid) throw Error("inner: signals live on different grids");
  return f.grid.dx() * g.values.dot(f.values);
}

SampledSignal fourier(const SampledSignal& f) {
  const int N = f.grid.N;
  CVec in(N);
  for (int n = 0; n < N; ++n) in[n] = f.values[n] * parity(n);
  CVec raw = fft::forward(in);
  const cd c0 = f.grid.dx() * half_turn(N, -1);
  CVec out(N);
  for (int k = 0; k < N; ++k) out[k] = c0 * parity(k) * raw[k];
  return SampledSignal(f.grid.dual(), std::move(out));
}

SampledSignal inverse_fourier(const SampledSignal& f) {
  const int N = f.grid.N;
  CVec in(N);
  for (int k = 0; k < N; ++k) in[k] = f.values[k] * parity(k);
  CVec raw = fft::backward(in);
  const cd c0 = f.grid.dx() * half_turn(N, 1);
  CVec out(N);
  for (int n = 0; n < N; ++n) out[n] = c0 * parity(n) * raw[n];
  return SampledSignal(f.grid.dual(), std::move(out));
}

SampledSignal tf_shift(const SampledSignal& f, PhasePoint z) {
  const int N = f.grid.N;
  const double dx = f.grid.dx();
  const long long j0 = std::llround(z.x / dx);
  if (std::abs(z.x) > f.grid.L / 2 + dx / 2) {
    std::cerr << "tf_shift: translation " << z.x << " exceeds half the period, wraps around\n";
  }
  CVec out(N);
  for (int n = 0; n < N; ++n) {
    long long src = (n - j0) % N;
    if (src < 0) src += N;
    out[n] = f.values[src] * std::polar(1.0, 2 * M_PI * f.grid.x(n) * z.xi);
  }
  return SampledSignal(f.grid, std::move(out));
}

cd eval_interpolant_spectrum(const SampledSignal& fhat, double y) {
  cd acc = 0;
  for (int k = 0; k < fhat.grid.N; ++k) {
    acc += fhat.values[k] * std::polar(1.0, 2 * M_PI * y * fhat.grid.x(k));
  }
  return fhat.grid.dx() * acc;
}

cd eval_interpolant(const SampledSignal& f, double y) {
  return eval_interpolant_spectrum(fourier(f), y);
}

SampledSignal resample(const SampledSignal& f, const Grid1D& target, double* lost) {
  SampledSignal fhat = fourier(f);
  const int N = f.grid.N;
  const double half_band = target.band() / 2;
  double kept = 0, dropped = 0;
  CVec spec = fhat.values;
  for (int k = 0; k < N; ++k) {
    double xi = fhat.grid.x(k);
    double e = std::norm(spec[k]);
    if (xi < -half_band - 1e-12 * target.band() || xi >= half_band - 1e-12 * target.band()) {
      dropped += e;
      spec[k] = 0;
    } else {
      kept += e;
    }
  }
  if (lost) *lost = (kept + dropped > 0) ? dropped / (kept + dropped) : 0.0;
  // out_j = dxi_src * sum_k spec_k e^{2pi i y_j xi_k} is a fractional DFT with
  // beta = dx_target * dxi_src.
  const double beta = target.dx() * f.grid.dxi();
  CVec out = fhat.grid.dx() * fft::centered_fractional(spec, beta, target.N);
  return SampledSignal(target, std::move(out));
}

namespace {

// Orthonormal eigenfunctions of the quadratic oscillator, phi_0 = 2^{1/4} e^{-pi x^2},
// phi_{m+1} = (2 sqrt(pi) x phi_m - sqrt(m) phi_{m-1}) / sqrt(m+1).
Eigen::MatrixXd hermite_columns(const Grid1D& g, int K) {
  Eigen::MatrixXd phi(g.N, K);
  for (int j = 0; j < g.N; ++j) {
    double x = g.x(j);
    phi(j, 0) = std::pow(2.0, 0.25) * std::exp(-M_PI * x * x);
    if (K > 1) phi(j, 1) = 2 * std::sqrt(M_PI) * x * phi(j, 0);
  }
  for (int m = 1; m + 1 < K; ++m) {
    for (int j = 0; j < g.N; ++j) {
      double x = g.x(j);
      phi(j, m + 1) =
          (2 * std::sqrt(M_PI) * x * phi(j, m) - std::sqrt(double(m)) * phi(j, m - 1)) /
          std::sqrt(double(m + 1));
    }
  }
  return phi;
}

// Eigenmode n of (1/(4pi)) d^2/dx^2 - pi x^2 + |sin x|^mu, counted from the top of
// the spectrum, via a truncated oscillator-mode basis.
SampledSignal perturbed_eigenmode(const Grid1D& g, int n, double mu) {
  int K = std::min({400, int(std::floor(M_PI * std::pow(0.4 * std::min(g.L, g.band()), 2))), g.N});
  if (K < n + 8) throw ConfigError("eigenmode: grid too small for requested mode");
  Eigen::MatrixXd phi = hermite_columns(g, K);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(K, K);
  for (int m = 0; m < K; ++m) H(m, m) = -(2.0 * m + 1.0) / 2.0;
  if (mu > 0) {
    Eigen::VectorXd v(g.N);
    for (int j = 0; j < g.N; ++j) v[j] = std::pow(std::abs(std::sin(g.x(j))), mu);
    Eigen::MatrixXd V = phi.transpose() * (g.dx() * v.asDiagonal() * phi);
    H += 0.5 * (V + V.transpose());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  Eigen::VectorXd coef = es.eigenvectors().col(K - 1 - n);
  int imax = 0;
  coef.cwiseAbs().maxCoeff(&imax);
  if (coef[imax] < 0) coef = -coef;
  Eigen::VectorXd vals = phi * coef;
  vals /= std::sqrt(g.dx() * vals.squaredNorm());
  return SampledSignal(g, vals.cast<cd>());
}

}  // namespace

SampledSignal make_test_signal(const std::string& kind, const SignalParams& params,
                               const Grid1D& g) {
  CVec v(g.N);
  if (kind == "gaussian") {
    double w = get_param(params, "width", 1.0);
    if (!(w > 0)) throw ConfigError("gaussian: width must be positive");
    double amp = std::pow(2.0, 0.25) / std::sqrt(w);
    for (int j = 0; j < g.N; ++j) {
      double x = g.x(j) / w;
      v[j] = amp * std::exp(-M_PI * x * x);
    }
  } else if (kind == "plane_wave") {
    double xi0 = get_param(params, "xi0", 0.0);
    double snapped = std::llround(xi0 * g.L) / g.L;
    for (int j = 0; j < g.N; ++j) v[j] = std::polar(1.0, 2 * M_PI * g.x(j) * snapped);
  } else if (kind == "chirp") {
    double c = get_param(params, "c", 1.0);
    for (int j = 0; j < g.N; ++j) {
      double x = g.x(j);
      v[j] = std::polar(1.0, M_PI * c * x * x);
    }
  } else if (kind == "constant") {
    v.setOnes();
  } else if (kind == "gabor_atom") {
    SampledSignal atom = make_test_signal("gaussian", {}, g);
    return tf_shift(atom, {get_param(params, "x", 0.0), get_param(params, "xi", 0.0)});
  } else if (kind == "hermite") {
    int n = int(get_param(params, "n", 0.0));
    double w = get_param(params, "width", 1.0);
    if (n < 0 || n > 2) throw ConfigError("hermite: n must be 0, 1 or 2");
    if (!(w > 0)) throw ConfigError("hermite: width must be positive");
    for (int j = 0; j < g.N; ++j) {
      double x = g.x(j) / w;
      double base = std::pow(2.0, 0.25) * std::exp(-M_PI * x * x) / std::sqrt(w);
      double poly = 1.0;
      if (n == 1) poly = 2 * std::sqrt(M_PI) * x;
      if (n == 2) poly = (4 * M_PI * x * x - 1) / std::sqrt(2.0);
      v[j] = base * poly;
    }
  } else if (kind == "eigenmode") {
    int n = int(get_param(params, "n", 0.0));
    if (n < 0) throw ConfigError("eigenmode: n must be nonnegative");
    return perturbed_eigenmode(g, n, get_param(params, "mu", 4.0));
  } else {
    throw ConfigError("unknown signal kind: " + kind);
  }
  return SampledSignal(g, std::move(v));
}

}  // namespace tfp
