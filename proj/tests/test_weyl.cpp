#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "tfp/gabor.hpp"
#include "tfp/metaplectic.hpp"
#include "tfp/symplectic.hpp"
#include "tfp/weyl.hpp"

using namespace tfp;

namespace {

const Grid1D kDefault{std::sqrt(512.0), 512};
// |sin x|^3 is pi-periodic; putting the grid length on a multiple of pi keeps
// the wrapped symbol smooth across the seam, which the decay tests need.
const Grid1D kSinGrid{2 * M_PI, 2048};
const Grid1D kSinSmall{2 * M_PI, 512};

SampledSignal normalized(SampledSignal f) {
  double n = f.norm();
  for (int j = 0; j < f.grid.N; ++j) f.values[j] /= n;
  return f;
}

SampledSignal gauss_window(const Grid1D& g, double w) {
  return normalized(make_test_signal("gaussian", {{"width", w}}, g));
}

SampledSignal atom_mix(const Grid1D& g, unsigned seed, double range = 2.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> center(-range, range);
  std::normal_distribution<double> coef(0.0, 1.0);
  SampledSignal phi = oracle::plain_gaussian(g);
  SampledSignal f{g, CVec::Zero(g.N)};
  for (int i = 0; i < 4; ++i) {
    PhasePoint z{center(rng), center(rng)};
    cd c(coef(rng), coef(rng));
    SampledSignal a = tf_shift(phi, z);
    for (int j = 0; j < g.N; ++j) f.values[j] += c * a.values[j];
  }
  return normalized(f);
}

LinearOperator identity_op() {
  LinearOperator op;
  op.name = "identity";
  op.apply = [](const SampledSignal& f) { return f; };
  op.expected_map = SymplecticMatrix{};
  return op;
}

double rel_err(const SampledSignal& got, const SampledSignal& want) {
  double num = 0, den = 0;
  for (int j = 0; j < got.grid.N; ++j) {
    num = std::max(num, std::abs(got.values[j] - want.values[j]));
    den = std::max(den, std::abs(want.values[j]));
  }
  return num / den;
}

const SymbolFunction kSinCubed = [](double x, double) {
  return cd(std::pow(std::abs(std::sin(x)), 3.0), 0.0);
};

SymbolFunction phase_space_bump(double wx, double wxi, double x0 = 0, double xi0 = 0) {
  return [=](double x, double xi) {
    double dx = (x - x0) / wx, dxi = (xi - xi0) / wxi;
    return cd(std::exp(-M_PI * (dx * dx + dxi * dxi)), 0.0);
  };
}

}  // namespace

TEST_CASE("symbol sampling fills the refined grid and flags real data") {
  SymbolGrid s = make_symbol(kSinCubed, kDefault);
  CHECK((s.xgrid == Grid1D{kDefault.L, 2 * kDefault.N}));
  CHECK(s.xigrid == kDefault.dual());
  CHECK(s.values.rows() == 1024);
  CHECK(s.values.cols() == 512);
  CHECK(s.real_valued);
  // Midpoints of the signal grid land on even refined rows.
  CHECK(s.xgrid.x(2 * 100) == doctest::Approx(kDefault.x(100)).epsilon(1e-14));

  SymbolGrid c = make_symbol(
      [](double x, double xi) { return cd(std::cos(x), std::sin(xi)); }, kDefault);
  CHECK_FALSE(c.real_valued);
}

TEST_CASE("quantization rejects malformed symbols and foreign grids") {
  SymbolGrid s = make_symbol(kSinCubed, kDefault);

  SymbolGrid bad_shape = s;
  bad_shape.values = Eigen::MatrixXcd::Ones(10, 10);
  CHECK_THROWS_AS(weyl_quantize(bad_shape), ConfigError);

  SymbolGrid bad_dual = s;
  bad_dual.xigrid = Grid1D{1.0, kDefault.N};
  CHECK_THROWS_AS(weyl_quantize(bad_dual), ConfigError);

  SymbolGrid odd = s;
  odd.xgrid = Grid1D{kDefault.L, 1023};
  CHECK_THROWS_AS(weyl_quantize(odd), ConfigError);

  CHECK_THROWS_AS(weyl_quantize(s, 0.3), ConfigError);

  WeylOperator op = weyl_quantize(s);
  SampledSignal f = atom_mix(Grid1D{16.0, 256}, 5);
  CHECK_THROWS_AS(op.apply(f), ConfigError);
}

TEST_CASE("constant symbol quantizes to the identity") {
  SymbolGrid one = make_symbol([](double, double) { return cd(1, 0); }, kDefault);
  WeylOperator op = weyl_quantize(one);
  CHECK(op.structure == KernelStructure::multiplication);
  for (unsigned seed : {1u, 2u, 3u}) {
    SampledSignal f = atom_mix(kDefault, seed);
    CHECK(rel_err(op.apply(f), f) < 1e-10);
    CHECK(rel_err(op.apply_dense(f), f) < 1e-10);
  }
}

TEST_CASE("x-only symbols act by pointwise multiplication") {
  auto m = [](double x) { return cd(std::cos(2 * x) + 0.3, 0.1 * std::sin(x)); };
  SymbolGrid s = make_symbol([m](double x, double) { return m(x); }, kDefault);
  WeylOperator op = weyl_quantize(s);
  CHECK(op.structure == KernelStructure::multiplication);

  SampledSignal f = atom_mix(kDefault, 7);
  SampledSignal want = f;
  for (int j = 0; j < f.grid.N; ++j) want.values[j] *= m(f.grid.x(j));
  CHECK(rel_err(op.apply(f), want) < 1e-10);
  // The dense kernel is the same operator, not just an approximation.
  CHECK(rel_err(op.apply_dense(f), want) < 1e-10);
}

TEST_CASE("xi-only symbols act as Fourier multipliers; -4pi^2 xi^2 is the Laplacian") {
  SymbolGrid s = make_symbol(
      [](double, double xi) { return cd(-4 * M_PI * M_PI * xi * xi, 0.0); }, kDefault);
  WeylOperator op = weyl_quantize(s);
  CHECK(op.structure == KernelStructure::fourier_multiplier);

  SampledSignal f = oracle::plain_gaussian(kDefault);
  SampledSignal want = f;
  for (int j = 0; j < f.grid.N; ++j) {
    double x = f.grid.x(j);
    want.values[j] = (-2 * M_PI + 4 * M_PI * M_PI * x * x) * std::exp(-M_PI * x * x);
  }
  CHECK(rel_err(op.apply(f), want) < 1e-8);

  SampledSignal fast = op.apply(f);
  SampledSignal dense = op.apply_dense(f);
  double diff = 0;
  for (int j = 0; j < f.grid.N; ++j) diff = std::max(diff, std::abs(fast.values[j] - dense.values[j]));
  CHECK(diff < 1e-9 * dense.sup_norm());
}

TEST_CASE("real symbols give Hermitian kernels; conjugation gives the adjoint") {
  SymbolFunction rough = [](double x, double xi) {
    return cd(std::abs(std::sin(3 * x)) * std::exp(-0.05 * xi * xi), 0.0);
  };
  WeylOperator op = weyl_quantize(make_symbol(rough, kDefault));
  CHECK(op.structure == KernelStructure::dense);
  CHECK(op.hermitian_defect() < 1e-10);

  SymbolFunction sig = [](double x, double xi) {
    return cd(std::cos(x) * std::exp(-0.02 * xi * xi), std::sin(2 * x + 0.5 * xi));
  };
  WeylOperator a = weyl_quantize(make_symbol(sig, kDefault));
  WeylOperator b = weyl_quantize(make_symbol(
      [sig](double x, double xi) { return std::conj(sig(x, xi)); }, kDefault));
  double scale = a.kernel.cwiseAbs().maxCoeff();
  CHECK((b.kernel - a.kernel.adjoint()).cwiseAbs().maxCoeff() < 1e-10 * scale);

  SampledSignal f = atom_mix(kDefault, 11), h = atom_mix(kDefault, 12);
  cd lhs = inner(a.apply_dense(f), h);
  cd rhs = inner(f, a.adjoint_apply(h));
  CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));
}

TEST_CASE("quantization is linear in the symbol") {
  SymbolFunction s1 = phase_space_bump(1.0, 2.0);
  SymbolFunction s2 = [](double x, double xi) { return cd(std::sin(x), std::cos(xi)); };
  cd ca(0.7, -0.3), cb(-1.2, 0.4);
  SymbolGrid combo = make_symbol(
      [&](double x, double xi) { return ca * s1(x, xi) + cb * s2(x, xi); }, kDefault);
  Eigen::MatrixXcd want = ca * weyl_quantize(make_symbol(s1, kDefault)).kernel +
                          cb * weyl_quantize(make_symbol(s2, kDefault)).kernel;
  Eigen::MatrixXcd got = weyl_quantize(combo).kernel;
  CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12 * want.cwiseAbs().maxCoeff());
}

TEST_CASE("quadratic symbols agree with the differential-operator form") {
  QuadraticForm q{0.3, 1.2, -0.7};
  SymbolGrid s = make_symbol([q](double x, double xi) { return cd(q(x, xi), 0.0); }, kDefault);
  WeylOperator op = weyl_quantize(s);
  for (auto kind : {"gaussian", "hermite"}) {
    SampledSignal f = make_test_signal(kind, {{"n", 2}}, kDefault);
    SampledSignal want = quadratic_weyl_apply(q, f);
    CHECK(rel_err(op.apply(f), want) < 1e-8);
  }
}

TEST_CASE("output-point quantization differs from midpoint by the commutator term") {
  SymbolGrid s = make_symbol([](double x, double xi) { return cd(x * xi, 0.0); }, kDefault);
  WeylOperator mid = weyl_quantize(s, 0.5);
  WeylOperator out = weyl_quantize(s, 1.0);
  SampledSignal f = oracle::plain_gaussian(kDefault);
  SampledSignal a = out.apply_dense(f);
  SampledSignal b = mid.apply_dense(f);
  const cd shift = cd(0, 1.0 / (4 * M_PI));
  double err = 0;
  for (int j = 0; j < f.grid.N; ++j)
    err = std::max(err, std::abs(a.values[j] - b.values[j] - shift * f.values[j]));
  CHECK(err < 1e-9 * f.sup_norm());
}

TEST_CASE("smooth bump symbol certifies a steep envelope on the default grid") {
  SymbolGrid s = make_symbol(phase_space_bump(1.0, 1.0), kDefault);
  WeylOperator op = weyl_quantize(s);
  SampledSignal win = gauss_window(kDefault, 1.0);
  LatticeSpec lat{0.5, 0.5, 25, 25};
  SymbolCertificate cert = certify_symbol_class(op.as_linear_operator(), 10.0, win, lat, lat, &s);
  INFO("bump s_fit = ", cert.fit.s_fit, ", C = ", cert.fit.C_fit,
       ", shells = ", cert.fit.shells_used, ", ratio = ", cert.norm_ratio);
  CHECK(cert.fit.s_fit >= 10.0);
  CHECK(cert.passes);
  CHECK(cert.norm_ratio > 0);
}

TEST_CASE("constant symbol certificate saturates the decay cap") {
  SymbolGrid s = make_symbol([](double, double) { return cd(1, 0); }, kDefault);
  WeylOperator op = weyl_quantize(s);
  SampledSignal win = gauss_window(kDefault, 1.0);
  LatticeSpec lat{0.5, 0.5, 17, 17};
  SymbolCertificate cert = certify_symbol_class(op.as_linear_operator(), 10.0, win, lat, lat);
  INFO("identity s_fit = ", cert.fit.s_fit);
  CHECK(cert.fit.s_fit >= 10.0);
  CHECK(cert.passes);
}

TEST_CASE("|sin x|^3 certifies near s = 4 and is window robust") {
  WeylOperator op;
  {
    SymbolGrid s = make_symbol(kSinCubed, kSinGrid);
    op = weyl_quantize(s);
  }
  CHECK(op.structure == KernelStructure::multiplication);
  LinearOperator lin = op.as_linear_operator();
  // Disjoint in/out frequency ranges keep every sampled difference away from
  // the diagonal, where the bounded part of the operator masks the decay. The
  // largest difference stays well under the grid's Nyquist rate so the
  // inner-product quadrature does not fold the far tail back in.
  LatticeSpec in{1.0, 1.0, 1, 57, 0.0, -30.0};
  LatticeSpec out{1.0, 1.0, 1, 57, 0.0, 29.0};

  SymbolCertificate c2 = certify_symbol_class(lin, 4.0, gauss_window(kSinGrid, 2.0), in, out);
  INFO("sin^3 s_fit (w=2) = ", c2.fit.s_fit, ", shells = ", c2.fit.shells_used,
       ", residual = ", c2.fit.residual);
  CHECK(c2.fit.s_fit > 3.5);
  CHECK(c2.fit.s_fit < 4.5);
  CHECK(c2.passes);

  SymbolCertificate c3 = certify_symbol_class(lin, 4.0, gauss_window(kSinGrid, 3.0), in, out);
  INFO("sin^3 s_fit (w=3) = ", c3.fit.s_fit);
  CHECK(std::abs(c2.fit.s_fit - c3.fit.s_fit) < 0.5);
}

TEST_CASE("certificate errors propagate from underfilled shell fits") {
  SymbolGrid s = make_symbol(phase_space_bump(1.0, 1.0), kDefault);
  WeylOperator op = weyl_quantize(s);
  LatticeSpec tiny{0.5, 0.5, 3, 3};
  CHECK_THROWS_AS(
      certify_symbol_class(op.as_linear_operator(), 4.0, gauss_window(kDefault, 1.0), tiny, tiny),
      Error);
}

TEST_CASE("identity envelope matches the closed-form gaussian overlap") {
  Grid1D g{16.0, 512};
  SampledSignal win = oracle::plain_gaussian(g);
  LatticeSpec lat{0.5, 0.5, 9, 9};
  EnvelopeFunction env = envelope_function(identity_op(), win, lat);
  CHECK(env.diff_lattice.nx == 17);
  CHECK(env.diff_lattice.nxi == 17);
  for (int a = 0; a < env.diff_lattice.nx; ++a) {
    for (int b = 0; b < env.diff_lattice.nxi; ++b) {
      PhasePoint u = env.diff_lattice.point(a, b);
      double want = std::exp(-0.5 * M_PI * (u.x * u.x + u.xi * u.xi)) / std::sqrt(2.0);
      CHECK(std::abs(env.values(a, b) - want) < 1e-7);
    }
  }
  CHECK(env.l1_weighted(0) > 0);
}

TEST_CASE("time-frequency shifts translate the envelope") {
  Grid1D g{16.0, 512};
  SampledSignal win = oracle::plain_gaussian(g);
  PhasePoint z0{1.0, 2.0};
  LinearOperator shift;
  shift.name = "tf_shift";
  shift.apply = [z0](const SampledSignal& f) { return tf_shift(f, z0); };
  LatticeSpec lat{0.5, 0.5, 9, 9};
  EnvelopeFunction env = envelope_function(shift, win, lat);
  for (int a = 0; a < env.diff_lattice.nx; ++a) {
    for (int b = 0; b < env.diff_lattice.nxi; ++b) {
      PhasePoint u = env.diff_lattice.point(a, b);
      double rx = u.x - z0.x, rxi = u.xi - z0.xi;
      double want = std::exp(-0.5 * M_PI * (rx * rx + rxi * rxi)) / std::sqrt(2.0);
      CHECK(std::abs(env.values(a, b) - want) < 1e-8);
    }
  }
}

TEST_CASE("|sin x|^3 envelope weighted norms converge below the class index") {
  WeylOperator op = weyl_quantize(make_symbol(kSinCubed, kSinSmall));
  SampledSignal win = gauss_window(kSinSmall, 1.0);
  EnvelopeFunction narrow = envelope_function(op.as_linear_operator(), win,
                                              LatticeSpec{0.5, 1.0, 5, 17});
  EnvelopeFunction wide = envelope_function(op.as_linear_operator(), win,
                                            LatticeSpec{0.5, 1.0, 5, 33});
  double r_low = wide.l1_weighted(1.0) / narrow.l1_weighted(1.0);
  double r_high = wide.l1_weighted(6.0) / narrow.l1_weighted(6.0);
  INFO("ratio at s=1: ", r_low, ", at s=6: ", r_high);
  CHECK(r_low < 1.3);
  CHECK(r_high > 2.0);
}

TEST_CASE("envelopes of in-class symbols concentrate on the diagonal") {
  auto far_over_center = [](const WeylOperator& op, const Grid1D& g) {
    EnvelopeFunction env = envelope_function(op.as_linear_operator(), gauss_window(g, 1.0),
                                             LatticeSpec{0.5, 0.5, 9, 17});
    double center = env.values(8, 16);
    double far = 0;
    for (int a = 0; a < env.diff_lattice.nx; ++a) {
      for (int b = 0; b < env.diff_lattice.nxi; ++b) {
        PhasePoint u = env.diff_lattice.point(a, b);
        if (std::hypot(u.x, u.xi) >= 3.0) far = std::max(far, env.values(a, b));
      }
    }
    return far / center;
  };
  CHECK(far_over_center(weyl_quantize(make_symbol(kSinCubed, kSinSmall)), kSinSmall) < 0.1);
  CHECK(far_over_center(weyl_quantize(make_symbol(phase_space_bump(1.0, 1.0), kDefault)),
                        kDefault) < 0.1);
}

TEST_CASE("composing two constant symbols keeps the identity envelope") {
  std::vector<SymbolGrid> factors(2, make_symbol([](double, double) { return cd(1, 0); },
                                                 kDefault));
  CompositionCheck chk = compose_and_check(factors, 4.0, gauss_window(kDefault, 1.0),
                                           LatticeSpec{0.5, 0.5, 9, 9});
  INFO("identity composition s_fit = ", chk.fit.s_fit, ", c_total = ", chk.c_total,
       ", c_bound = ", chk.c_bound);
  CHECK(chk.fit.s_fit >= 10.0);
  CHECK(chk.within_bound);
}

TEST_CASE("composing smooth bumps preserves the per-factor decay") {
  std::vector<SymbolGrid> factors;
  factors.push_back(make_symbol(phase_space_bump(1.0, 1.0), kDefault));
  factors.push_back(make_symbol(phase_space_bump(1.3, 1.3), kDefault));
  CompositionCheck chk = compose_and_check(factors, 10.0, gauss_window(kDefault, 1.0),
                                           LatticeSpec{0.5, 0.5, 17, 17});
  double fmin = std::min(chk.factor_fits[0].s_fit, chk.factor_fits[1].s_fit);
  INFO("factors = ", chk.factor_fits[0].s_fit, ", ", chk.factor_fits[1].s_fit,
       ", composition = ", chk.fit.s_fit);
  // Per-factor fits pick up extra steepness near the lattice edge (the shell
  // max runs out of midpoints there), so the composed fit is compared with a
  // slack of 2 while still demanding a super-polynomial envelope.
  CHECK(chk.fit.s_fit >= fmin - 2.0);
  CHECK(chk.fit.s_fit >= 10.0);
  CHECK(chk.within_bound);
}

TEST_CASE("mixed rough composition stays within the product bound") {
  std::vector<SymbolGrid> factors;
  factors.push_back(make_symbol(kSinCubed, kSinSmall));
  factors.push_back(make_symbol(phase_space_bump(1.0, 2.0), kSinSmall));
  factors.push_back(make_symbol(
      [](double, double xi) { return cd(std::exp(-M_PI * xi * xi / 16), 0.0); }, kSinSmall));
  CompositionCheck chk = compose_and_check(factors, 4.0, gauss_window(kSinSmall, 1.0),
                                           LatticeSpec{0.5, 0.5, 9, 17});
  INFO("c_total = ", chk.c_total, ", c_bound = ", chk.c_bound);
  CHECK(chk.within_bound);
  CHECK(chk.c_total > 0);
}

TEST_CASE("conjugation by metaplectic operators matches symbol pullback") {
  SymbolFunction bump = phase_space_bump(1.0, 1.5);
  CHECK(covariance_defect(bump, SymplecticMatrix{}, kDefault) < 1e-10);

  SymplecticMatrix j = make_symplectic(standard_J());
  CHECK(covariance_defect(bump, j, kDefault) < 1e-5);

  double t = M_PI / 4;
  Eigen::Matrix2d rot;
  rot << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
  SymbolFunction radial = [](double x, double xi) {
    double r2 = x * x + xi * xi;
    return cd(std::exp(-0.5 * M_PI * r2) * (1 + 0.5 * std::exp(-r2)), 0.0);
  };
  CHECK(covariance_defect(radial, make_symplectic(rot), kDefault) < 1e-5);
}

TEST_CASE("type-I phase form reproduces known propagators") {
  SampledSignal f = atom_mix(kDefault, 21);

  SUBCASE("identity blocks give back the input") {
    SymbolGrid one;
    one.xgrid = kDefault;
    one.xigrid = kDefault.dual();
    one.values = Eigen::MatrixXcd::Ones(kDefault.N, kDefault.N);
    SampledSignal got = fio_type1_apply(SymplecticMatrix{}, one, f);
    CHECK(rel_err(got, f) < 1e-10);
  }

  SUBCASE("upper-shear blocks give the free-particle multiplier") {
    double t = 0.3;
    Eigen::Matrix2d m;
    m << 1.0, 4 * M_PI * t, 0.0, 1.0;
    SymbolGrid one = make_symbol([](double, double) { return cd(1, 0); }, kDefault);
    SampledSignal got = fio_type1_apply(make_symplectic(m), one, f);
    SampledSignal fhat = fourier(f);
    for (int k = 0; k < kDefault.N; ++k) {
      double xi = kDefault.xi(k);
      fhat.values[k] *= std::polar(1.0, -4 * M_PI * M_PI * t * xi * xi);
    }
    CHECK(rel_err(got, inverse_fourier(fhat)) < 1e-6);
  }

  SUBCASE("rotation blocks match direct quadrature and the unitary operator") {
    double t = M_PI / 6;
    Eigen::Matrix2d rot;
    rot << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
    SymplecticMatrix map = make_symplectic(rot);
    SymbolGrid one;
    one.xgrid = kDefault;
    one.xigrid = kDefault.dual();
    one.values = Eigen::MatrixXcd::Ones(kDefault.N, kDefault.N);
    SampledSignal got = fio_type1_apply(map, one, f);

    SampledSignal fhat = fourier(f);
    const double ct = std::cos(t), tt = std::tan(t);
    SampledSignal quad{kDefault, CVec::Zero(kDefault.N)};
    for (int i = 0; i < kDefault.N; ++i) {
      double x = kDefault.x(i);
      cd acc = 0;
      for (int k = 0; k < kDefault.N; ++k) {
        double xi = kDefault.xi(k);
        double phase = x * xi / ct - 0.5 * tt * (x * x + xi * xi);
        acc += fhat.values[k] * std::polar(1.0, 2 * M_PI * phase);
      }
      quad.values[i] = acc * kDefault.dxi() / std::sqrt(ct);
    }
    SampledSignal scaled = got;
    scaled.values /= std::sqrt(ct);
    CHECK(rel_err(scaled, quad) < 1e-10);

    SampledSignal mf = metaplectic_operator(map).apply(f);
    cd c = mf.values.dot(got.values) / cd(mf.values.squaredNorm(), 0);
    double num = 0;
    for (int j = 0; j < kDefault.N; ++j)
      num = std::max(num, std::abs(got.values[j] - c * mf.values[j]));
    CHECK(num / got.sup_norm() < 1e-5);
    CHECK(std::abs(std::abs(c) - std::sqrt(ct)) < 1e-5);
  }

  SUBCASE("vanishing upper-left block is rejected") {
    SymbolGrid one = make_symbol([](double, double) { return cd(1, 0); }, kDefault);
    CHECK_THROWS_WITH_AS(fio_type1_apply(make_symplectic(standard_J()), one, f),
                         doctest::Contains("type-I representation unavailable"), Error);
  }

  SUBCASE("foreign symbol grids are rejected") {
    SymbolGrid off = make_symbol([](double, double) { return cd(1, 0); }, Grid1D{16.0, 256});
    CHECK_THROWS_AS(fio_type1_apply(SymplecticMatrix{}, off, f), ConfigError);
  }
}

TEST_CASE("rough multiplication symbols stay bounded on weighted coefficient norms") {
  WeylOperator op = weyl_quantize(make_symbol(kSinCubed, kSinSmall));
  SampledSignal win = gauss_window(kSinSmall, 1.0);
  for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
    for (double r : {0.0, 1.0}) {
      double worst = 0;
      for (unsigned seed = 40; seed < 46; ++seed) {
        SampledSignal f = atom_mix(kSinSmall, seed, 1.5);
        double num = modulation_norm(op.apply(f), win, p, p, weight_vs(r));
        double den = modulation_norm(f, win, p, p, weight_vs(r));
        worst = std::max(worst, num / den);
      }
      INFO("p = ", p, ", r = ", r, ", worst ratio = ", worst);
      CHECK(worst < 10.0);
    }
  }
}
