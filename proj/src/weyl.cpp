#include "tfp/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "tfp/fft.hpp"

namespace tfp {

namespace {

constexpr double kStructureTolerance = 1e-12;
constexpr double kRealTolerance = 1e-14;

Grid1D signal_grid_of(const SymbolGrid& sigma) {
  if (sigma.xgrid.N < 2 || sigma.xgrid.N % 2 != 0)
    throw ConfigError("weyl_quantize: symbol x-grid must be a twice-refined signal grid");
  Grid1D g(sigma.xgrid.L, sigma.xgrid.N / 2);
  if (sigma.xigrid != g.dual())
    throw ConfigError("weyl_quantize: symbol frequency grid is not dual to the signal grid");
  if (sigma.values.rows() != sigma.xgrid.N || sigma.values.cols() != sigma.xigrid.N)
    throw ConfigError("weyl_quantize: symbol value shape does not match its grids");
  return g;
}

SampledSignal corpus_signal(const Grid1D& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> coef;
  std::uniform_real_distribution<double> center(-2.0, 2.0);
  CVec gauss(g.N);
  for (int j = 0; j < g.N; ++j) gauss[j] = std::exp(-M_PI * g.x(j) * g.x(j));
  SampledSignal atom(g, gauss);
  CVec acc = CVec::Zero(g.N);
  for (int a = 0; a < 4; ++a) {
    PhasePoint z{center(rng), center(rng)};
    cd c{coef(rng), coef(rng)};
    acc += c * tf_shift(atom, z).values;
  }
  SampledSignal f(g, acc);
  const double n = f.norm();
  if (n > 0) f.values /= n;
  return f;
}

}  // namespace

SymbolGrid make_symbol(const SymbolFunction& sigma, const Grid1D& signal_grid) {
  SymbolGrid s;
  s.xgrid = Grid1D(signal_grid.L, 2 * signal_grid.N);
  s.xigrid = signal_grid.dual();
  s.values.resize(s.xgrid.N, s.xigrid.N);
  for (int m = 0; m < s.xgrid.N; ++m) {
    const double x = s.xgrid.x(m);
    for (int k = 0; k < s.xigrid.N; ++k) s.values(m, k) = sigma(x, s.xigrid.x(k));
  }
  const double vmax = s.values.cwiseAbs().maxCoeff();
  const double imax = s.values.imag().cwiseAbs().maxCoeff();
  s.real_valued = imax <= kRealTolerance * std::max(1.0, vmax);
  return s;
}

WeylOperator weyl_quantize(const SymbolGrid& sigma, double tau) {
  const bool midpoint = std::abs(tau - 0.5) < 1e-12;
  if (!midpoint && std::abs(tau - 1.0) >= 1e-12)
    throw ConfigError("weyl_quantize: tau must be 1/2 (Weyl) or 1 (Kohn-Nirenberg)");
  const Grid1D g = signal_grid_of(sigma);
  const int n = g.N;

  WeylOperator op;
  op.grid = g;
  op.tau = midpoint ? 0.5 : 1.0;

  const double vmax = sigma.values.cwiseAbs().maxCoeff();
  const double tol = kStructureTolerance * std::max(vmax, 1e-300);
  const bool xi_independent =
      (sigma.values.colwise() - sigma.values.col(0)).cwiseAbs().maxCoeff() <= tol;
  const bool x_independent =
      !xi_independent &&
      (sigma.values.rowwise() - sigma.values.row(0)).cwiseAbs().maxCoeff() <= tol;

  // Row m of the symbol transformed in the frequency index once, reused for
  // every kernel entry whose midpoint lands on that row.
  std::vector<CVec> rows(2 * n - 1);
  for (int m = 0; m < 2 * n - 1; ++m) {
    if (midpoint || m % 2 == 0) rows[m] = fft::backward(sigma.values.row(m).transpose());
  }

  op.kernel.resize(n, n);
  const double dxi = g.dxi();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int m = midpoint ? i + j : 2 * i;
      const int r = i - j;
      const int rm = ((r % n) + n) % n;
      const double sign = (r & 1) ? -1.0 : 1.0;
      op.kernel(i, j) = dxi * sign * rows[m][rm];
    }
  }

  if (xi_independent) {
    op.structure = KernelStructure::multiplication;
    op.diag.resize(n);
    for (int i = 0; i < n; ++i) op.diag[i] = sigma.values(2 * i, 0);
  } else if (x_independent) {
    op.structure = KernelStructure::fourier_multiplier;
    op.diag = sigma.values.row(0).transpose();
  } else {
    op.structure = KernelStructure::dense;
  }
  return op;
}

SampledSignal WeylOperator::apply(const SampledSignal& f) const {
  if (f.grid != grid) throw ConfigError("weyl operator applied to a signal on a different grid");
  switch (structure) {
    case KernelStructure::multiplication:
      return SampledSignal(grid, diag.cwiseProduct(f.values));
    case KernelStructure::fourier_multiplier: {
      SampledSignal fhat = fourier(f);
      fhat.values = diag.cwiseProduct(fhat.values).eval();
      return inverse_fourier(fhat);
    }
    default:
      return apply_dense(f);
  }
}

SampledSignal WeylOperator::apply_dense(const SampledSignal& f) const {
  if (f.grid != grid) throw ConfigError("weyl operator applied to a signal on a different grid");
  return SampledSignal(grid, grid.dx() * (kernel * f.values));
}

SampledSignal WeylOperator::adjoint_apply(const SampledSignal& f) const {
  if (f.grid != grid) throw ConfigError("weyl operator applied to a signal on a different grid");
  return SampledSignal(grid, grid.dx() * (kernel.adjoint() * f.values));
}

double WeylOperator::hermitian_defect() const {
  return (kernel - kernel.adjoint()).cwiseAbs().maxCoeff();
}

LinearOperator WeylOperator::as_linear_operator(std::string name) const {
  auto self = std::make_shared<WeylOperator>(*this);
  LinearOperator op;
  op.name = std::move(name);
  op.apply = [self](const SampledSignal& f) { return self->apply(f); };
  op.expected_map = SymplecticMatrix{};
  return op;
}

SymbolCertificate certify_symbol_class(const LinearOperator& op, double s,
                                       const SampledSignal& window,
                                       const LatticeSpec& in_lattice,
                                       const LatticeSpec& out_lattice, const SymbolGrid* sigma) {
  GaborMatrixSample k = gabor_matrix(op, window, in_lattice, out_lattice);
  SymbolCertificate cert;
  cert.fit = decay_fit(k, SymplecticMatrix{});
  cert.required_s = s;
  cert.passes = cert.fit.s_fit >= s - 0.5;
  if (sigma != nullptr) {
    const double norm = symbol_weighted_sup_norm(*sigma, s);
    if (norm > 0) cert.norm_ratio = cert.fit.C_fit / norm;
  }
  return cert;
}

double symbol_weighted_sup_norm(const SymbolGrid& sigma, double s) {
  const Grid1D& gx = sigma.xgrid;
  const Grid1D& gxi = sigma.xigrid;
  const Grid1D nux = gx.dual();
  const Grid1D nuxi = gxi.dual();
  double worst = 0;
  for (int px = -1; px <= 1; ++px) {
    for (int pxi = -1; pxi <= 1; ++pxi) {
      const double zx = 0.25 * gx.L * px;
      const double zxi = 0.25 * gxi.L * pxi;
      Eigen::MatrixXcd w(gx.N, gxi.N);
      for (int m = 0; m < gx.N; ++m) {
        const double dx = gx.x(m) - zx;
        for (int k = 0; k < gxi.N; ++k) {
          const double dxi = gxi.x(k) - zxi;
          w(m, k) = sigma.values(m, k) * std::exp(-M_PI * (dx * dx + dxi * dxi));
        }
      }
      // Transform columns along x, then rows along the frequency axis.
      Eigen::MatrixXcd half(gx.N, gxi.N);
      for (int k = 0; k < gxi.N; ++k) {
        SampledSignal col(gx, w.col(k));
        half.col(k) = fourier(col).values;
      }
      for (int m = 0; m < gx.N; ++m) {
        SampledSignal row(gxi, half.row(m).transpose());
        CVec spec = fourier(row).values;
        const double zeta_x = nux.x(m);
        for (int k = 0; k < gxi.N; ++k) {
          const double zeta_xi = nuxi.x(k);
          const double weight =
              std::pow(1.0 + zeta_x * zeta_x + zeta_xi * zeta_xi, 0.5 * s);
          worst = std::max(worst, std::abs(spec[k]) * weight);
        }
      }
    }
  }
  return worst;
}

double EnvelopeFunction::l1_weighted(double s) const {
  double acc = 0;
  for (int a = 0; a < diff_lattice.nx; ++a) {
    for (int b = 0; b < diff_lattice.nxi; ++b) {
      const PhasePoint u = diff_lattice.point(a, b);
      acc += values(a, b) * std::pow(1.0 + u.x * u.x + u.xi * u.xi, 0.5 * s);
    }
  }
  return acc * std::abs(diff_lattice.alpha) * std::abs(diff_lattice.beta);
}

EnvelopeFunction envelope_function(const LinearOperator& op, const SampledSignal& window,
                                   const LatticeSpec& lattice) {
  GaborMatrixSample k = gabor_matrix(op, window, lattice, lattice);
  EnvelopeFunction env;
  env.diff_lattice =
      LatticeSpec{lattice.alpha, lattice.beta, 2 * lattice.nx - 1, 2 * lattice.nxi - 1};
  env.values = Eigen::MatrixXd::Zero(env.diff_lattice.nx, env.diff_lattice.nxi);
  const int rows = static_cast<int>(k.out_points.size());
  const int cols = static_cast<int>(k.in_points.size());
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const PhasePoint w = k.out_points[r];
      const PhasePoint z = k.in_points[c];
      const int da =
          lattice.nx > 1 ? static_cast<int>(std::llround((w.x - z.x) / lattice.alpha)) : 0;
      const int db =
          lattice.nxi > 1 ? static_cast<int>(std::llround((w.xi - z.xi) / lattice.beta)) : 0;
      const int ia = da + lattice.nx - 1;
      const int ib = db + lattice.nxi - 1;
      env.values(ia, ib) = std::max(env.values(ia, ib), std::abs(k.values(r, c)));
    }
  }
  return env;
}

namespace {

double weighted_sup(const GaborMatrixSample& k, double s) {
  double sup = 0;
  for (int r = 0; r < k.values.rows(); ++r) {
    for (int c = 0; c < k.values.cols(); ++c) {
      const double ux = k.out_points[r].x - k.in_points[c].x;
      const double uxi = k.out_points[r].xi - k.in_points[c].xi;
      const double w = std::pow(1.0 + ux * ux + uxi * uxi, 0.5 * s);
      sup = std::max(sup, std::abs(k.values(r, c)) * w);
    }
  }
  return sup;
}

}  // namespace

CompositionCheck compose_and_check(const std::vector<SymbolGrid>& factors, double s,
                                   const SampledSignal& window, const LatticeSpec& lattice,
                                   double c0) {
  if (factors.empty()) throw ConfigError("compose_and_check: at least one factor required");
  std::vector<WeylOperator> ops;
  ops.reserve(factors.size());
  for (const SymbolGrid& f : factors) ops.push_back(weyl_quantize(f));
  for (const WeylOperator& op : ops) {
    if (op.grid != ops.front().grid)
      throw ConfigError("compose_and_check: factors live on different grids");
  }

  CompositionCheck out;
  double product = 1;
  for (const WeylOperator& op : ops) {
    GaborMatrixSample k = gabor_matrix(op.as_linear_operator(), window, lattice, lattice);
    product *= weighted_sup(k, s);
    out.factor_fits.push_back(decay_fit(k, SymplecticMatrix{}));
  }

  const double dx = ops.front().grid.dx();
  Eigen::MatrixXcd kernel = ops.front().kernel;
  for (std::size_t i = 1; i < ops.size(); ++i) kernel = (dx * (kernel * ops[i].kernel)).eval();
  WeylOperator composed;
  composed.grid = ops.front().grid;
  composed.kernel = std::move(kernel);
  composed.structure = KernelStructure::dense;

  GaborMatrixSample comp =
      gabor_matrix(composed.as_linear_operator("composition"), window, lattice, lattice);
  out.fit = decay_fit(comp, SymplecticMatrix{});
  out.c_total = weighted_sup(comp, s);
  out.c_bound = c0 * product;
  out.within_bound = out.c_total <= out.c_bound;
  return out;
}

double covariance_defect(const SymbolFunction& sigma, const SymplecticMatrix& map,
                         const Grid1D& grid, int corpus_size) {
  const WeylOperator direct = weyl_quantize(make_symbol(sigma, grid));
  SymbolFunction pulled = [&sigma, map](double x, double xi) {
    const PhasePoint p = map.apply({x, xi});
    return sigma(p.x, p.xi);
  };
  const WeylOperator composed = weyl_quantize(make_symbol(pulled, grid));

  Eigen::Matrix2d inv;
  inv << map.m(1, 1), -map.m(0, 1), -map.m(1, 0), map.m(0, 0);
  const LinearOperator mu = metaplectic_operator(map, "mu");
  const LinearOperator mu_inv = metaplectic_operator(make_symplectic(inv), "mu_inv");

  double worst = 0;
  for (int i = 0; i < corpus_size; ++i) {
    const SampledSignal f = corpus_signal(grid, 1000 + i);
    const SampledSignal lhs = mu_inv.apply(direct.apply(mu.apply(f)));
    const SampledSignal rhs = composed.apply(f);
    const cd c = align_phase(lhs, rhs);
    const double err = std::sqrt(grid.dx() * (lhs.values - c * rhs.values).squaredNorm());
    worst = std::max(worst, err);
  }
  return worst;
}

SampledSignal fio_type1_apply(const SymplecticMatrix& map, const SymbolGrid& sigma,
                              const SampledSignal& f) {
  const double a = map.m(0, 0), b = map.m(0, 1), c = map.m(1, 0);
  if (std::abs(a) <= 1e-8) throw Error("type-I representation unavailable: block A is singular");

  const Grid1D& g = f.grid;
  int stride = 0;
  if (sigma.xgrid == g)
    stride = 1;
  else if (sigma.xgrid == Grid1D(g.L, 2 * g.N))
    stride = 2;
  else
    throw ConfigError("fio_type1_apply: symbol x-grid does not match the signal grid");
  if (sigma.xigrid != g.dual())
    throw ConfigError("fio_type1_apply: symbol frequency grid does not match the dual grid");

  const SampledSignal fhat = fourier(f);
  const double half_ca = 0.5 * c / a;
  const double inv_a = 1.0 / a;
  const double half_ba = 0.5 * b / a;
  CVec out(g.N);
  for (int i = 0; i < g.N; ++i) {
    const double x = g.x(i);
    cd acc = 0;
    for (int k = 0; k < g.N; ++k) {
      const double xi = g.xi(k);
      const double phase = half_ca * x * x + inv_a * x * xi - half_ba * xi * xi;
      acc += sigma.values(i * stride, k) * fhat.values[k] *
             std::polar(1.0, 2.0 * M_PI * phase);
    }
    out[i] = acc * g.dxi();
  }
  return SampledSignal(g, out);
}

}  // namespace tfp
