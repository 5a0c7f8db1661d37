#include "tfp/propagators.hpp"

#include <cmath>
#include <vector>

#include "tfp/fft.hpp"

namespace tfp {
namespace {

constexpr double kCausticBand = 0.1;
constexpr double kHermitianTolerance = 1e-8;

double norm_ratio(const SampledSignal& u, const SampledSignal& u0) {
  const double n0 = u0.norm();
  return n0 > 0 ? u.norm() / n0 : 0.0;
}

// Gauss-Legendre nodes and weights on [a, b] by Newton iteration on the
// three-term recurrence.
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n, double a, double b) {
  Eigen::VectorXd x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (t * p0 - p1) / (t * t - 1.0);
      const double step = p0 / dp;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  Eigen::VectorXd xr(n), wr(n);
  for (int i = 0; i < n; ++i) {
    xr[i] = mid + half * x[i];
    wr[i] = half * w[i];
  }
  return {xr, wr};
}

// C(j, k) = integral_0^{r_j} l_k, with l_k the Lagrange basis over the nodes
// r. Each entry is evaluated by a fresh Gauss rule on [0, r_j], exact for the
// degree of the interpolant.
Eigen::MatrixXd cumulative_matrix(const Eigen::VectorXd& r) {
  const int n = int(r.size());
  auto lagrange = [&](int k, double x) {
    double p = 1.0;
    for (int m = 0; m < n; ++m)
      if (m != k) p *= (x - r[m]) / (r[k] - r[m]);
    return p;
  };
  Eigen::MatrixXd C(n, n);
  for (int j = 0; j < n; ++j) {
    auto [q, qw] = gauss_legendre(n, 0.0, r[j]);
    for (int k = 0; k < n; ++k) {
      double acc = 0;
      for (int i = 0; i < n; ++i) acc += qw[i] * lagrange(k, q[i]);
      C(j, k) = acc;
    }
  }
  return C;
}

Eigen::MatrixXcd dense_matrix(const LinearOperator& T, const Grid1D& g) {
  Eigen::MatrixXcd M(g.N, g.N);
  SampledSignal e(g, CVec::Zero(g.N));
  for (int j = 0; j < g.N; ++j) {
    e.values[j] = 1.0;
    M.col(j) = T.apply(e).values;
    e.values[j] = 0.0;
  }
  return M;
}

WeylOperator quantize_perturbation(const SymbolGrid& sigma, const Grid1D& signal_grid) {
  if (!sigma.values.allFinite())
    throw ConfigError("perturbation symbol contains non-finite values");
  WeylOperator op = weyl_quantize(sigma);
  if (op.grid != signal_grid)
    throw ConfigError("perturbation symbol grid does not match the signal grid");
  return op;
}

double caustic_distance(double t) {
  const double r = std::fmod(std::abs(t - M_PI / 2), M_PI);
  return std::min(r, M_PI - r);
}

// mu(A) realized purely with shears: multiplication by e^{i pi gamma x^2} for
// (1 0; gamma 1) and its Fourier conjugate for (1 beta; 0 1). Every piece is
// unimodular pointwise (in x or in xi), so the composition preserves the
// discrete norm exactly. The factored metaplectic word is avoided for
// iterated substeps: its dilation resampling has operator norm slightly above
// one at the band edge, and a split-step loop amplifies that from the
// roundoff floor exponentially.
SampledSignal apply_xshear(double gamma, const SampledSignal& f) {
  if (gamma == 0) return f;
  SampledSignal out = f;
  const cd iunit(0, 1);
  for (int j = 0; j < out.grid.N; ++j) {
    const double x = out.grid.x(j);
    out.values[j] *= std::exp(iunit * M_PI * gamma * x * x);
  }
  return out;
}

SampledSignal apply_fshear(double beta, const SampledSignal& f) {
  if (beta == 0) return f;
  SampledSignal fh = fourier(f);
  const cd iunit(0, 1);
  for (int k = 0; k < fh.grid.N; ++k) {
    const double xi = fh.grid.x(k);
    fh.values[k] *= std::exp(-iunit * M_PI * beta * xi * xi);
  }
  return inverse_fourier(fh);
}

SampledSignal apply_shear_flow(const Eigen::Matrix2d& m, const SampledSignal& f) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  if (std::abs(b) > 1e-9 * scale) {
    // (a b; c d) = (1 0; g2 1)(1 b; 0 1)(1 0; g1 1)
    return apply_xshear((d - 1) / b, apply_fshear(b, apply_xshear((a - 1) / b, f)));
  }
  if (std::abs(c) > 1e-9 * scale) {
    // (a b; c d) = (1 b2; 0 1)(1 0; c 1)(1 b1; 0 1)
    return apply_fshear((a - 1) / c, apply_xshear(c, apply_fshear((d - 1) / c, f)));
  }
  if (std::abs(a - 1.0) < 1e-12) return f;
  // Diagonal flow: conjugate with the quarter rotation, whose middle factor
  // regains an off-diagonal block, then recurse on shear-decomposable pieces.
  Eigen::Matrix2d rot;
  const double h = std::sqrt(0.5);
  rot << h, h, -h, h;
  const Eigen::Matrix2d mid = rot.transpose() * m * rot;
  return apply_shear_flow(rot, apply_shear_flow(mid, apply_shear_flow(rot.transpose(), f)));
}

// One Strang step is half.apply, perturbation exponential, half.apply. The
// perturbation exponential is pointwise for multiplication symbols and a
// 4th-order truncated matrix exponential of i*dt*dx*K otherwise; both are
// built once since every substep shares dt.
struct Stepper {
  LinearOperator half;
  int steps = 0;
  std::optional<CVec> phase;
  std::optional<Eigen::MatrixXcd> dense_exp;
  double kernel_hermitian_defect = 0;

  SampledSignal run(const SampledSignal& u0) const {
    SampledSignal u = u0;
    for (int k = 0; k < steps; ++k) {
      u = half.apply(u);
      if (phase)
        u.values.array() *= phase->array();
      else if (dense_exp)
        u.values = (*dense_exp) * u.values;
      u = half.apply(u);
    }
    return u;
  }
};

Stepper make_stepper(const HamiltonianSpec& H, const Grid1D& g, double t, int steps) {
  if (steps < 1) throw ConfigError("split_step requires steps >= 1");
  const double dt = t / steps;
  const HamiltonianMatrix gen = quadratic_symbol_to_generator(H.quadratic);
  const SymplecticMatrix half_map = flow(gen, dt / 2);
  Stepper st;
  st.steps = steps;
  st.half = LinearOperator{
      "quadratic half-step",
      [m = half_map.m](const SampledSignal& f) { return apply_shear_flow(m, f); }, half_map};
  if (!H.perturbation) return st;

  WeylOperator op = quantize_perturbation(*H.perturbation, g);
  const double scale = std::max(1.0, op.kernel.cwiseAbs().maxCoeff());
  st.kernel_hermitian_defect = op.hermitian_defect();
  if (st.kernel_hermitian_defect > kHermitianTolerance * scale)
    throw Error("split_step: perturbation kernel is not Hermitian");

  const cd iunit(0, 1);
  if (op.structure == KernelStructure::multiplication) {
    CVec ph(g.N);
    for (int j = 0; j < g.N; ++j) ph[j] = std::exp(iunit * dt * op.diag[j]);
    st.phase = ph;
  } else {
    const Eigen::MatrixXcd A = iunit * dt * g.dx() * op.kernel;
    const Eigen::MatrixXcd A2 = A * A;
    Eigen::MatrixXcd E = Eigen::MatrixXcd::Identity(g.N, g.N);
    E += A + A2 / 2.0 + (A2 * A) / 6.0 + (A2 * A2) / 24.0;
    st.dense_exp = E;
  }
  return st;
}

}  // namespace

QuadraticForm free_particle_symbol() { return {0.0, -8.0 * M_PI * M_PI, 0.0}; }

QuadraticForm harmonic_symbol() { return {0.0, -2.0 * M_PI, 2.0 * M_PI}; }

PropagatorResult free_particle(const SampledSignal& u0, double t) {
  SampledSignal uhat = fourier(u0);
  const cd iunit(0, 1);
  for (int k = 0; k < uhat.size(); ++k) {
    const double xi = uhat.grid.x(k);
    uhat.values[k] *= std::exp(-iunit * 4.0 * M_PI * M_PI * t * xi * xi);
  }
  PropagatorResult out;
  out.t = t;
  out.method = "closed_form";
  out.u_t = inverse_fourier(uhat);
  out.diagnostics["norm_ratio"] = norm_ratio(out.u_t, u0);
  return out;
}

PropagatorResult harmonic_oscillator(const SampledSignal& u0, double t) {
  const double dist = caustic_distance(t);
  if (dist <= kCausticBand) {
    PropagatorResult out = quadratic_propagate(harmonic_symbol(), u0, t);
    out.diagnostics["caustic_distance"] = dist;
    return out;
  }

  // (cos t)^{-1/2} integral e^{2pi i [x xi / cos t - (tan t / 2)(x^2 + xi^2)]}
  // uhat(xi) dxi, evaluated as a centered fractional transform with
  // beta = dx * dxi' / cos t. Discretizing the integral periodizes the result
  // in x with period |cos t| L, which folds copies into the box once
  // |cos t| < 2; zero padding to P L with P >= 2 / |cos t| pushes them out
  // and at the same time samples the xi chirp below Nyquist. The principal
  // square root tracks the metaplectic phase up to the caustic winding, which
  // projective comparisons ignore.
  const Grid1D& g = u0.grid;
  const double c = std::cos(t), tau = std::tan(t);
  int pad = 1;
  while (pad * std::abs(c) < 2.0 && pad < 64) pad *= 2;
  const Grid1D gp{pad * g.L, pad * g.N};
  SampledSignal up(gp, CVec::Zero(gp.N));
  up.values.segment(g.N * (pad - 1) / 2, g.N) = u0.values;
  SampledSignal uhat = fourier(up);
  const cd iunit(0, 1);
  CVec v(gp.N);
  for (int k = 0; k < gp.N; ++k) {
    const double xi = uhat.grid.x(k);
    v[k] = uhat.values[k] * std::exp(-iunit * M_PI * tau * xi * xi);
  }
  CVec s = fft::centered_fractional(v, 1.0 / (gp.N * c), g.N);
  const cd pref = uhat.grid.dx() / std::sqrt(cd(c, 0));
  SampledSignal u(g, CVec(g.N));
  for (int j = 0; j < g.N; ++j) {
    const double x = g.x(j);
    u.values[j] = pref * std::exp(-iunit * M_PI * tau * x * x) * s[j];
  }

  PropagatorResult out;
  out.t = t;
  out.method = "closed_form";
  out.u_t = u;
  out.diagnostics["caustic_distance"] = dist;
  out.diagnostics["norm_ratio"] = norm_ratio(u, u0);
  return out;
}

PropagatorResult quadratic_propagate(const QuadraticForm& q, const SampledSignal& u0, double t) {
  const HamiltonianMatrix gen = quadratic_symbol_to_generator(q);
  PropagatorResult out;
  out.t = t;
  out.method = "metaplectic";
  out.u_t = metaplectic_apply(flow(gen, t), u0);
  out.diagnostics["norm_ratio"] = norm_ratio(out.u_t, u0);
  return out;
}

PropagatorResult split_step(const HamiltonianSpec& H, const SampledSignal& u0, double t,
                            int steps) {
  const Stepper st = make_stepper(H, u0.grid, t, steps);
  PropagatorResult out;
  out.t = t;
  out.method = "split_step";
  out.u_t = st.run(u0);
  out.diagnostics["steps"] = steps;
  out.diagnostics["dt"] = t / steps;
  out.diagnostics["kernel_hermitian_defect"] = st.kernel_hermitian_defect;
  out.diagnostics["norm_ratio"] = norm_ratio(out.u_t, u0);
  return out;
}

PropagatorResult dyson_propagate(const HamiltonianSpec& H, const SampledSignal& u0, double t,
                                 int n_max, int nodes) {
  if (n_max < 0) throw ConfigError("dyson_propagate requires n_max >= 0");
  if (nodes < 2 || nodes > 32) throw ConfigError("dyson_propagate requires 2..32 nodes");
  const HamiltonianMatrix gen = quadratic_symbol_to_generator(H.quadratic);
  const Grid1D& g = u0.grid;

  PropagatorResult out;
  out.t = t;
  out.method = "dyson(" + std::to_string(n_max) + ")";
  out.diagnostics["nodes"] = nodes;

  // Analytic tail estimate: first omitted term of the series bound
  // (|t| M ||sigma||)^n / n! with M = sup_{0<=r<=t} ||A_r||^s.
  const double sigma_sup =
      H.perturbation ? H.perturbation->values.cwiseAbs().maxCoeff() : 0.0;
  double flow_sup = 1.0;
  for (int j = 0; j <= 64; ++j) {
    const Eigen::Matrix2d m = flow(gen, t * j / 64.0).m;
    flow_sup = std::max(flow_sup, m.jacobiSvd().singularValues()(0));
  }
  const double x = std::abs(t) * std::pow(flow_sup, H.class_s) * sigma_sup;
  const double tail = std::pow(x, n_max + 1) / std::tgamma(n_max + 2.0);
  out.diagnostics["sigma_sup"] = sigma_sup;
  out.diagnostics["flow_sup_norm"] = flow_sup;
  out.diagnostics["tail_bound"] = tail;

  if (sigma_sup == 0 || n_max == 0 || t == 0) {
    if (H.perturbation) quantize_perturbation(*H.perturbation, g);
    out.u_t = t == 0 ? u0 : metaplectic_apply(flow(gen, t), u0);
    out.diagnostics["norm_ratio"] = norm_ratio(out.u_t, u0);
    if (tail >= 1.0)
      throw Error("dyson truncation insufficient: tail bound >= 1 at the requested order");
    return out;
  }
  if (tail >= 1.0)
    throw Error("dyson truncation insufficient: tail bound >= 1 at the requested order");

  WeylOperator op = quantize_perturbation(*H.perturbation, g);

  // One shared node set; B(r) = mu(A_{-r}) sigma^w mu(A_r) as a dense matrix
  // per node. The two factorization words carry independent unimodular
  // gauges, which would not cancel inside the series, so each node's phase is
  // fixed on a gaussian probe of the round trip mu(A_{-r}) mu(A_r).
  auto [r, w] = gauss_legendre(nodes, 0.0, t);
  const Eigen::MatrixXd C = cumulative_matrix(r);
  const SampledSignal probe = make_test_signal("gaussian", {{"width", 1.0}}, g);
  double gauge_defect = 0;
  std::vector<Eigen::MatrixXcd> B(nodes);
  for (int k = 0; k < nodes; ++k) {
    const Eigen::MatrixXcd Mf = dense_matrix(metaplectic_operator(flow(gen, r[k])), g);
    const Eigen::MatrixXcd Mb = dense_matrix(metaplectic_operator(flow(gen, -r[k])), g);
    const CVec round = Mb * (Mf * probe.values);
    cd c = probe.values.dot(round) / probe.values.squaredNorm();
    c /= std::abs(c);
    gauge_defect = std::max(
        gauge_defect, std::sqrt(g.dx()) * (round - c * probe.values).norm() / probe.norm());
    if (op.structure == KernelStructure::multiplication)
      B[k] = (Mb * (op.diag.asDiagonal() * Mf)) / c;
    else
      B[k] = (Mb * ((g.dx() * op.kernel) * Mf)) / c;
  }
  out.diagnostics["gauge_defect"] = gauge_defect;

  // P_n(s) = i integral_0^s B P_{n-1}, realized on node values with the
  // cumulative matrix; the full-interval value uses the plain weights.
  const cd iunit(0, 1);
  std::vector<CVec> v(nodes, u0.values);
  CVec total = u0.values;
  for (int n = 1; n <= n_max; ++n) {
    std::vector<CVec> bw(nodes);
    for (int k = 0; k < nodes; ++k) bw[k] = B[k] * v[k];
    CVec term = CVec::Zero(g.N);
    for (int k = 0; k < nodes; ++k) term += w[k] * bw[k];
    term *= iunit;
    out.diagnostics["dyson_term_" + std::to_string(n)] = std::sqrt(g.dx()) * term.norm();
    total += term;
    std::vector<CVec> vn(nodes, CVec::Zero(g.N));
    for (int j = 0; j < nodes; ++j) {
      for (int k = 0; k < nodes; ++k) vn[j] += C(j, k) * bw[k];
      vn[j] *= iunit;
    }
    v = std::move(vn);
  }

  const double term1 = out.diagnostics["dyson_term_1"];
  if (x > 0 && u0.norm() > 0) {
    out.diagnostics["calibration"] = term1 / (x * u0.norm());
    out.diagnostics["tail_calibrated"] = out.diagnostics["calibration"] * tail;
  }

  out.u_t = metaplectic_apply(flow(gen, t), SampledSignal(g, total));
  out.diagnostics["norm_ratio"] = norm_ratio(out.u_t, u0);
  return out;
}

PropagatorStructure propagator_gabor_structure(const HamiltonianSpec& H, double t,
                                               const SampledSignal& g,
                                               const LatticeSpec& in_lattice,
                                               const LatticeSpec& out_lattice, int steps,
                                               double u_cap) {
  const HamiltonianMatrix gen = quadratic_symbol_to_generator(H.quadratic);
  const SymplecticMatrix At = flow(gen, t);
  const Stepper st = make_stepper(H, g.grid, t, steps);

  PropagatorStructure result;
  result.map = At;

  LinearOperator T{H.name + " propagator",
                   [&st](const SampledSignal& f) { return st.run(f); }, At};
  result.sample = gabor_matrix(T, g, in_lattice, out_lattice);
  result.aligned = decay_fit(result.sample, At, u_cap);

  const LinearOperator back = metaplectic_operator(flow(gen, -t), "inverse quadratic flow");
  LinearOperator reduced{"reduced propagator",
                         [&st, &back](const SampledSignal& f) { return back.apply(st.run(f)); },
                         SymplecticMatrix{}};
  result.reduced = decay_fit(gabor_matrix(reduced, g, in_lattice, out_lattice),
                             SymplecticMatrix{}, u_cap);

  result.passes = result.aligned.s_fit >= H.class_s - 0.5;
  return result;
}

}  // namespace tfp
