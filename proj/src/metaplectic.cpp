#include "tfp/metaplectic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tfp/fft.hpp"

namespace tfp {

namespace {

constexpr double kMarginFraction = 0.45;
constexpr double kTailTolerance = 1e-12;

double tail_fraction(double kept, double dropped) {
  double total = kept + dropped;
  return total > 0 ? dropped / total : 0.0;
}

SampledSignal dilate(double alpha, const SampledSignal& f) {
  const int n = f.grid.N;
  if (alpha == 1.0) return f;
  if (alpha == -1.0) {
    SampledSignal out = f;
    for (int j = 0; j < n; ++j) out.values[j] = f.values[(n - j) % n];
    return out;
  }

  SampledSignal fhat = fourier(f);
  SampledSignal out{f.grid, CVec(n)};
  out.notes = f.notes;
  if (std::abs(alpha) < 1.0) {
    // Frequencies beyond band*|alpha|/2 leave the representable band after the
    // dilation spreads the spectrum.
    double kept = 0, dropped = 0;
    const double cut = 0.5 * f.grid.band() * std::abs(alpha);
    for (int k = 0; k < n; ++k) {
      double e = std::norm(fhat.values[k]);
      (std::abs(fhat.grid.x(k)) <= cut ? kept : dropped) += e;
    }
    if (double frac = tail_fraction(kept, dropped); frac > kTailTolerance) {
      std::ostringstream msg;
      msg << "dilation(" << alpha << ") aliasing: spectral energy fraction " << frac
          << " outside the compressed band";
      out.notes.push_back(msg.str());
    }
  }

  // Sample the bandlimited interpolant at x/alpha: a fractional-step inverse
  // transform with beta = 1/(N alpha).
  const cd scale = fhat.grid.dx() / std::sqrt(cd(alpha, 0.0));
  Eigen::VectorXcd g = fft::centered_fractional(fhat.values, 1.0 / (n * alpha), n);
  for (int j = 0; j < n; ++j) out.values[j] = scale * g[j];

  if (std::abs(alpha) > 1.0) {
    double inside = 0, tail = 0;
    const double cut = kMarginFraction * f.grid.L;
    for (int j = 0; j < n; ++j) {
      double e = std::norm(out.values[j]);
      (std::abs(f.grid.x(j)) <= cut ? inside : tail) += e;
    }
    if (double frac = tail_fraction(inside, tail); frac > kTailTolerance) {
      std::ostringstream msg;
      msg << "dilation(" << alpha << ") support: energy fraction " << frac
          << " beyond the margin window";
      out.notes.push_back(msg.str());
    }
  }
  return out;
}

SampledSignal fourier_factor(const SampledSignal& f) {
  SampledSignal fhat = fourier(f);
  if (fhat.grid.N == f.grid.N && std::abs(fhat.grid.L - f.grid.L) <= 1e-12 * f.grid.L) {
    // Self-dual grid: the transform lives on the same grid up to relabeling.
    SampledSignal out{f.grid, std::move(fhat.values)};
    out.notes = f.notes;
    return out;
  }
  double lost = 0;
  SampledSignal out = resample(fhat, f.grid, &lost);
  out.notes = f.notes;
  if (lost > 1e-15) {
    std::ostringstream msg;
    msg << "fourier factor resampled to the signal grid, spectral fraction " << lost
        << " outside the target band";
    out.notes.push_back(msg.str());
  }
  return out;
}

}  // namespace

SampledSignal apply_generator(const SymplecticFactor& factor, const SampledSignal& f) {
  switch (factor.type) {
    case FactorType::chirp: {
      SampledSignal out = f;
      for (int n = 0; n < f.grid.N; ++n) {
        double x = f.grid.x(n);
        out.values[n] *= std::polar(1.0, -M_PI * factor.param * x * x);
      }
      return out;
    }
    case FactorType::dilation:
      return dilate(factor.param, f);
    case FactorType::fourier:
      return fourier_factor(f);
  }
  throw Error("unknown generator factor");
}

SampledSignal metaplectic_apply_word(const std::vector<SymplecticFactor>& word,
                                     const SampledSignal& f) {
  SampledSignal g = f;
  for (auto it = word.rbegin(); it != word.rend(); ++it) g = apply_generator(*it, g);
  return g;
}

SampledSignal metaplectic_apply(const SymplecticMatrix& A, const SampledSignal& f) {
  return metaplectic_apply_word(factor_symplectic(A), f);
}

LinearOperator metaplectic_operator(const SymplecticMatrix& A, std::string name) {
  auto word = factor_symplectic(A);
  return {std::move(name),
          [word](const SampledSignal& f) { return metaplectic_apply_word(word, f); }, A};
}

cd align_phase(const SampledSignal& a, const SampledSignal& b) {
  cd p = inner(a, b);
  double m = std::abs(p);
  return m > 0 ? p / m : cd(1.0, 0.0);
}

double intertwining_defect(const SymplecticMatrix& A, PhasePoint z, const SampledSignal& g) {
  SampledSignal mg = metaplectic_apply(A, g);
  SampledSignal lhs = tf_shift(mg, A.apply(z));
  SampledSignal rhs = metaplectic_apply(A, tf_shift(g, z));
  cd c = align_phase(lhs, rhs);
  double acc = 0;
  for (int n = 0; n < g.grid.N; ++n) acc += std::norm(lhs.values[n] - c * rhs.values[n]);
  return std::sqrt(g.grid.dx() * acc) / g.norm();
}

GaborMatrixSample gabor_matrix(const LinearOperator& T, const SampledSignal& g,
                               const LatticeSpec& in, const LatticeSpec& out) {
  auto collect = [&](const LatticeSpec& lat) {
    std::vector<PhasePoint> pts;
    pts.reserve(static_cast<size_t>(lat.nx) * lat.nxi);
    for (int a = 0; a < lat.nx; ++a)
      for (int b = 0; b < lat.nxi; ++b) {
        PhasePoint z = lat.point(a, b);
        if (std::abs(z.x) > kMarginFraction * g.grid.L ||
            std::abs(z.xi) > kMarginFraction * g.grid.band())
          throw ConfigError("gabor_matrix lattice extends beyond the margin window");
        pts.push_back(z);
      }
    return pts;
  };

  GaborMatrixSample K;
  K.in_points = collect(in);
  K.out_points = collect(out);

  std::vector<SampledSignal> atoms;
  atoms.reserve(K.out_points.size());
  for (const PhasePoint& w : K.out_points) atoms.push_back(tf_shift(g, w));

  K.values.resize(static_cast<Eigen::Index>(K.out_points.size()),
                  static_cast<Eigen::Index>(K.in_points.size()));
  for (size_t j = 0; j < K.in_points.size(); ++j) {
    SampledSignal column = T.apply(tf_shift(g, K.in_points[j]));
    for (size_t i = 0; i < K.out_points.size(); ++i)
      K.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          inner(column, atoms[i]);
  }
  return K;
}

DecayFit decay_fit(const GaborMatrixSample& K, const SymplecticMatrix& map, double u_cap) {
  std::vector<double> us, mags;
  us.reserve(K.values.size());
  mags.reserve(K.values.size());
  for (size_t j = 0; j < K.in_points.size(); ++j) {
    PhasePoint mz = map.apply(K.in_points[j]);
    for (size_t i = 0; i < K.out_points.size(); ++i) {
      double dx = K.out_points[i].x - mz.x;
      double dxi = K.out_points[i].xi - mz.xi;
      double u = std::sqrt(1.0 + dx * dx + dxi * dxi);
      if (u > u_cap) continue;
      us.push_back(u);
      mags.push_back(std::abs(K.values(static_cast<Eigen::Index>(i),
                                       static_cast<Eigen::Index>(j))));
    }
  }
  if (us.empty()) throw Error("decay_fit: no samples inside the cap");

  const double u_lo = *std::min_element(us.begin(), us.end());
  const double u_hi = *std::max_element(us.begin(), us.end());
  if (u_hi <= u_lo * (1.0 + 1e-12)) throw Error("decay_fit: degenerate radial range");

  constexpr int kShells = 24;
  const double span = std::log(u_hi / u_lo);
  std::vector<double> shell_max(kShells, -1.0), shell_u(kShells, 0.0);
  for (size_t i = 0; i < us.size(); ++i) {
    int s = static_cast<int>(kShells * std::log(us[i] / u_lo) / span);
    s = std::min(std::max(s, 0), kShells - 1);
    if (mags[i] > shell_max[s]) {
      shell_max[s] = mags[i];
      shell_u[s] = us[i];
    }
  }

  int populated = 0;
  double global_max = 0;
  for (int s = 0; s < kShells; ++s) {
    if (shell_max[s] >= 0) ++populated;
    global_max = std::max(global_max, shell_max[s]);
  }
  if (populated < 20) throw Error("decay_fit: fewer than 20 populated radial shells");

  // Shells at the roundoff floor would flatten the fit; drop them.
  std::vector<double> lx, ly;
  for (int s = 0; s < kShells; ++s) {
    if (shell_max[s] < 0 || shell_max[s] < 1e-14 * global_max) continue;
    lx.push_back(std::log(shell_u[s]));
    ly.push_back(std::log(shell_max[s]));
  }
  if (lx.size() < 2) throw Error("decay_fit: fewer than two shells above roundoff");

  const int m = static_cast<int>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < m; ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double det = m * sxx - sx * sx;
  const double slope = (m * sxy - sx * sy) / det;
  const double intercept = (sy - slope * sx) / m;

  DecayFit fit;
  fit.s_fit = -slope;
  fit.C_fit = std::exp(intercept);
  fit.shells_used = m;
  double rss = 0;
  for (int i = 0; i < m; ++i) {
    double r = ly[i] - (intercept + slope * lx[i]);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / m);
  return fit;
}

}  // namespace tfp
