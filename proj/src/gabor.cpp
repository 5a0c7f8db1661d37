#include "tfp/gabor.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

namespace tfp {

namespace {

int checked_step(double step, double unit, const char* what) {
  double ratio = step / unit;
  long long r = std::llround(ratio);
  if (r <= 0 || std::abs(ratio - r) > 1e-9 * std::max(1.0, std::abs(ratio))) {
    throw ConfigError(std::string(what) + " must be a positive integer multiple of the grid step");
  }
  return int(r);
}

int wrap(int idx, int n) {
  idx %= n;
  return idx < 0 ? idx + n : idx;
}

}  // namespace

GaborSystem make_gabor_system(const SampledSignal& g, double alpha, double beta) {
  if (g.norm() <= 0) throw ConfigError("gabor system: window must be nonzero");
  GaborSystem sys;
  sys.window = g;
  sys.alpha = alpha;
  sys.beta = beta;
  sys.step_x = checked_step(alpha, g.grid.dx(), "alpha");
  sys.step_xi = checked_step(beta, g.grid.dxi(), "beta");
  if (g.grid.N % sys.step_x != 0 || g.grid.N % sys.step_xi != 0) {
    throw ConfigError("gabor system: lattice steps must divide the grid period");
  }
  sys.count_x = g.grid.N / sys.step_x;
  sys.count_xi = g.grid.N / sys.step_xi;
  return sys;
}

GaborCoefficients stft(const SampledSignal& f, const SampledSignal& g) {
  return stft(f, g, f.grid.dx(), f.grid.dxi());
}

GaborCoefficients stft(const SampledSignal& f, const SampledSignal& g, double alpha, double beta) {
  if (f.grid != g.grid) throw Error("stft: signal and window live on different grids");
  GaborSystem sys = make_gabor_system(g, alpha, beta);
  const int N = f.grid.N;
  GaborCoefficients out;
  out.grid = f.grid;
  out.alpha = alpha;
  out.beta = beta;
  out.values.resize(sys.count_x, sys.count_xi);
  CVec prod(N);
  for (int a = 0; a < sys.count_x; ++a) {
    int off = (a - sys.count_x / 2) * sys.step_x;
    for (int v = 0; v < N; ++v) prod[v] = f.values[v] * std::conj(g.values[wrap(v - off, N)]);
    SampledSignal col = fourier(SampledSignal(f.grid, prod));
    for (int b = 0; b < sys.count_xi; ++b) {
      out.values(a, b) = col.values[(b - sys.count_xi / 2) * sys.step_xi + N / 2];
    }
  }
  return out;
}

StftSampler::StftSampler(const SampledSignal& f, const SampledSignal& g) : f_(f), g_(g) {
  if (f.grid != g.grid) throw Error("stft: signal and window live on different grids");
  double cutoff = 1e-17 * g.sup_norm();
  for (int u = 0; u < g.grid.N; ++u) {
    if (std::abs(g.values[u]) > cutoff) support_.push_back(u);
  }
}

cd StftSampler::operator()(PhasePoint z) const {
  const Grid1D& grid = f_.grid;
  const int N = grid.N;
  long long j0 = std::llround(z.x / grid.dx());
  cd acc = 0;
  for (int u : support_) {
    int v = wrap(int((u + j0) % N), N);
    acc += f_.values[v] * std::conj(g_.values[u]) *
           std::polar(1.0, -2 * M_PI * grid.x(v) * z.xi);
  }
  return grid.dx() * acc;
}

SampledSignal istft(const GaborCoefficients& F, const SampledSignal& g) {
  if (F.grid != g.grid) throw Error("istft: coefficients and window live on different grids");
  if (!F.full_resolution()) {
    throw Error("istft: needs full-resolution coefficients; use frame_reconstruct for lattices");
  }
  const int N = g.grid.N;
  double g2 = g.norm() * g.norm();
  if (g2 <= 0) throw ConfigError("istft: window must be nonzero");
  Grid1D dual = g.grid.dual();
  CVec acc = CVec::Zero(N);
  for (int a = 0; a < N; ++a) {
    SampledSignal col = inverse_fourier(SampledSignal(dual, F.values.row(a).transpose()));
    int off = a - N / 2;
    for (int v = 0; v < N; ++v) acc[v] += col.values[v] * g.values[wrap(v - off, N)];
  }
  CVec out = (g.grid.dx() / g2) * acc;
  return SampledSignal(g.grid, std::move(out));
}

namespace {

// Column a of the synthesis map: values of pi(lambda_ab) w as needed.
Eigen::MatrixXcd atom_matrix(const GaborSystem& sys) {
  const int N = sys.window.grid.N;
  Eigen::MatrixXcd G(N, sys.count_x * sys.count_xi);
  int col = 0;
  for (int a = 0; a < sys.count_x; ++a) {
    for (int b = 0; b < sys.count_xi; ++b, ++col) {
      SampledSignal atom = tf_shift(sys.window, {sys.x(a), sys.xi(b)});
      G.col(col) = atom.values;
    }
  }
  return G;
}

Eigen::MatrixXcd frame_matrix(const GaborSystem& sys) {
  Eigen::MatrixXcd G = atom_matrix(sys);
  return sys.window.grid.dx() * (G * G.adjoint());
}

}  // namespace

std::pair<double, double> frame_bounds(const GaborSystem& sys) {
  Eigen::MatrixXcd S = frame_matrix(sys);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S, Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  return {std::max(lo, 0.0), hi};
}

bool is_frame(const std::pair<double, double>& bounds) {
  return bounds.first > 1e-10 * bounds.second;
}

SampledSignal dual_window(const GaborSystem& sys) {
  if (!is_frame(frame_bounds(sys))) throw Error("dual_window: system is not a frame");
  Eigen::MatrixXcd S = frame_matrix(sys);
  CVec gamma = S.ldlt().solve(sys.window.values);
  return SampledSignal(sys.window.grid, std::move(gamma));
}

SampledSignal frame_reconstruct(const GaborCoefficients& F, const SampledSignal& synth) {
  if (F.grid != synth.grid) throw Error("frame_reconstruct: grids differ");
  const int N = synth.grid.N;
  GaborSystem sys = make_gabor_system(synth, F.alpha, F.beta);
  if (sys.count_x != F.count_x() || sys.count_xi != F.count_xi()) {
    throw Error("frame_reconstruct: coefficient shape does not match the lattice");
  }
  CVec acc = CVec::Zero(N);
  for (int a = 0; a < sys.count_x; ++a) {
    for (int b = 0; b < sys.count_xi; ++b) {
      if (F.values(a, b) == cd(0, 0)) continue;
      SampledSignal atom = tf_shift(synth, {sys.x(a), sys.xi(b)});
      acc += F.values(a, b) * atom.values;
    }
  }
  return SampledSignal(synth.grid, std::move(acc));
}

double Weight::operator()(PhasePoint z) const {
  switch (kind) {
    case Kind::constant:
      return 1.0;
    case Kind::vs: {
      Eigen::Vector2d w = pre * Eigen::Vector2d(z.x, z.xi);
      return std::pow(1.0 + w.squaredNorm(), s / 2);
    }
    case Kind::tensor_vs:
      throw ConfigError("tensor weight needs a doubled phase-space argument");
  }
  return 1.0;
}

double Weight::operator()(const Eigen::Vector4d& zw) const {
  if (kind != Kind::tensor_vs) return (*this)(PhasePoint{zw[0], zw[1]});
  return std::pow(1.0 + zw[2] * zw[2] + zw[3] * zw[3], s / 2);
}

Weight weight_vs(double s) { return {Weight::Kind::vs, s}; }
Weight weight_vs_composed(double s, const Eigen::Matrix2d& pre) {
  return {Weight::Kind::vs, s, pre};
}
Weight weight_tensor_vs(double s) { return {Weight::Kind::tensor_vs, s}; }
Weight weight_constant() { return {Weight::Kind::constant, 0}; }

double modulation_norm(const SampledSignal& f, const SampledSignal& g, double p, double q,
                       const Weight& m) {
  if (p < 1 || q < 1) throw ConfigError("modulation norm: p and q must be >= 1");
  if (m.kind == Weight::Kind::tensor_vs) {
    throw ConfigError("modulation norm: tensor weights apply to doubled arguments only");
  }
  if (f.grid != g.grid) throw Error("modulation norm: signal and window live on different grids");
  const int N = f.grid.N;
  const double dx = f.grid.dx(), dxi = f.grid.dxi();
  const bool pinf = std::isinf(p), qinf = std::isinf(q);
  // Accumulate the inner x-sums column by column so the full phase grid is
  // never materialized.
  Eigen::VectorXd inner_acc = Eigen::VectorXd::Zero(N);
  CVec prod(N);
  for (int a = 0; a < N; ++a) {
    int off = a - N / 2;
    for (int v = 0; v < N; ++v) prod[v] = f.values[v] * std::conj(g.values[wrap(v - off, N)]);
    SampledSignal col = fourier(SampledSignal(f.grid, prod));
    double xa = f.grid.x(a);
    for (int b = 0; b < N; ++b) {
      double w = std::abs(col.values[b]) * m(PhasePoint{xa, col.grid.x(b)});
      if (pinf) {
        inner_acc[b] = std::max(inner_acc[b], w);
      } else {
        inner_acc[b] += std::pow(w, p);
      }
    }
  }
  double outer = 0;
  for (int b = 0; b < N; ++b) {
    double colv = pinf ? inner_acc[b] : std::pow(dx * inner_acc[b], 1.0 / p);
    if (qinf) {
      outer = std::max(outer, colv);
    } else {
      outer += std::pow(colv, q);
    }
  }
  return qinf ? outer : std::pow(dxi * outer, 1.0 / q);
}

std::pair<double, double> weight_equivalence_check(const Weight& m, const Eigen::Matrix2d& A,
                                                  const Grid1D& sweep) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (int a = 0; a < sweep.N; ++a) {
    for (int b = 0; b < sweep.N; ++b) {
      PhasePoint z{sweep.x(a), sweep.dual().x(b)};
      Eigen::Vector2d az = A * Eigen::Vector2d(z.x, z.xi);
      double r = m(PhasePoint{az[0], az[1]}) / m(z);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  return {lo, hi};
}

}  // namespace tfp
