#include "tfp/grid_signal.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "tfp/fft.hpp"

using namespace tfp;

namespace {
const Grid1D kSelfDual(std::sqrt(512.0), 512);

double rel_err(const CVec& a, const CVec& b) {
  double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return scale > 0 ? (a - b).cwiseAbs().maxCoeff() / scale : 0.0;
}
}  // namespace

TEST_CASE("grid coordinates are centered and duality is an involution") {
  Grid1D g(8.0, 64);
  CHECK(g.x(32) == doctest::Approx(0.0));
  CHECK(g.x(0) == doctest::Approx(-4.0));
  CHECK(g.dx() == doctest::Approx(0.125));
  CHECK(g.dxi() == doctest::Approx(0.125));
  CHECK(g.self_dual());
  Grid1D h(8.0, 128);
  CHECK(!h.self_dual());
  CHECK(h.dual().L == doctest::Approx(16.0));
  CHECK(h.dual().dual() == h);
  CHECK(kSelfDual.self_dual());
  CHECK_THROWS_AS(Grid1D(-1.0, 16), ConfigError);
  CHECK_THROWS_AS(Grid1D(1.0, 0), ConfigError);
}

TEST_CASE("transform matches the direct quadrature sum") {
  Grid1D g(8.0, 64);
  SampledSignal f = oracle::random_signal(g, 11);
  CHECK(rel_err(fourier(f).values, oracle::naive_fourier(f).values) < 1e-13);
  CHECK(rel_err(inverse_fourier(f).values, oracle::naive_fourier(f, +1).values) < 1e-13);
  Grid1D h(5.0, 48);
  SampledSignal u = oracle::random_signal(h, 12);
  CHECK(rel_err(fourier(u).values, oracle::naive_fourier(u).values) < 1e-13);
}

TEST_CASE("transform is unitary and inverts exactly") {
  for (Grid1D g : {kSelfDual, Grid1D(8 * M_PI, 512)}) {
    SampledSignal f = oracle::random_signal(g, 21);
    SampledSignal fh = fourier(f);
    CHECK(fh.norm() == doctest::Approx(f.norm()).epsilon(1e-14));
    SampledSignal back = inverse_fourier(fh);
    CHECK(back.grid == g);
    CHECK(rel_err(back.values, f.values) < 1e-14);
    SampledSignal g2 = oracle::random_signal(g, 22);
    cd lhs = inner(fourier(f), fourier(g2));
    cd rhs = inner(f, g2);
    CHECK(std::abs(lhs - rhs) < 1e-13 * f.norm() * g2.norm());
  }
}

TEST_CASE("inner product weights and sesquilinearity") {
  SampledSignal f = oracle::random_signal(kSelfDual, 31);
  SampledSignal g = oracle::random_signal(kSelfDual, 32);
  CHECK(std::abs(inner(f, f) - cd(f.norm() * f.norm(), 0)) < 1e-12);
  SampledSignal fi(f.grid, cd(0, 1) * f.values);
  SampledSignal gi(g.grid, cd(0, 1) * g.values);
  CHECK(std::abs(inner(fi, g) - cd(0, 1) * inner(f, g)) < 1e-12);
  CHECK(std::abs(inner(f, gi) + cd(0, 1) * inner(f, g)) < 1e-12);
  SampledSignal other = oracle::random_signal(Grid1D(4.0, 512), 33);
  CHECK_THROWS_AS(inner(f, other), Error);
}

TEST_CASE("gaussian is invariant under the transform on a self-dual grid") {
  SampledSignal phi = make_test_signal("gaussian", {}, kSelfDual);
  CHECK(phi.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rel_err(fourier(phi).values, phi.values) < 1e-13);
}

TEST_CASE("chirped gaussian transforms to its closed form") {
  for (double c : {1.0, -2.0}) {
    CVec v(kSelfDual.N);
    for (int j = 0; j < kSelfDual.N; ++j) {
      double x = kSelfDual.x(j);
      v[j] = std::exp(-M_PI * x * x) * std::polar(1.0, M_PI * c * x * x);
    }
    SampledSignal fh = fourier(SampledSignal(kSelfDual, v));
    CVec expect(kSelfDual.N);
    for (int k = 0; k < kSelfDual.N; ++k) {
      expect[k] = oracle::chirped_gaussian_hat(c, fh.grid.x(k));
    }
    CHECK(rel_err(fh.values, expect) < 1e-12);
  }
}

TEST_CASE("plane wave transforms to a point mass at the snapped frequency") {
  SampledSignal f = make_test_signal("plane_wave", {{"xi0", 3.01}}, kSelfDual);
  SampledSignal fh = fourier(f);
  double snapped = std::llround(3.01 * kSelfDual.L) / kSelfDual.L;
  int k0 = int(std::llround(snapped * kSelfDual.L)) + kSelfDual.N / 2;
  CHECK(std::abs(fh.values[k0] - cd(kSelfDual.L, 0)) < 1e-10 * kSelfDual.L);
  fh.values[k0] = 0;
  CHECK(fh.sup_norm() < 1e-10 * kSelfDual.L);
}

TEST_CASE("hermite functions are transform eigenvectors") {
  const cd eig[3] = {cd(1, 0), cd(0, -1), cd(-1, 0)};
  for (int n = 0; n <= 2; ++n) {
    SampledSignal h = make_test_signal("hermite", {{"n", double(n)}}, kSelfDual);
    CHECK(h.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rel_err(fourier(h).values, CVec(eig[n] * h.values)) < 1e-12);
  }
  CHECK_THROWS_AS(make_test_signal("hermite", {{"n", 3.0}}, kSelfDual), ConfigError);
}

TEST_CASE("time-frequency shift translates, modulates, and composes") {
  Grid1D g(16.0, 256);
  SampledSignal f = oracle::random_signal(g, 41);
  PhasePoint z{5 * g.dx(), 7 * g.dxi()};
  SampledSignal shifted = tf_shift(f, z);
  for (int n = 0; n < g.N; ++n) {
    int src = (n - 5 + g.N) % g.N;
    cd expect = f.values[src] * std::polar(1.0, 2 * M_PI * g.x(n) * z.xi);
    CHECK(std::abs(shifted.values[n] - expect) < 1e-12);
  }
  PhasePoint w{-3 * g.dx(), 2 * g.dxi()};
  SampledSignal lhs = tf_shift(shifted, w);
  SampledSignal rhs = tf_shift(f, {z.x + w.x, z.xi + w.xi});
  cd phase = std::polar(1.0, -2 * M_PI * w.x * z.xi);
  CHECK(rel_err(lhs.values, CVec(phase * rhs.values)) < 1e-12);
}

TEST_CASE("interpolant reproduces samples and off-grid bandlimited values") {
  SampledSignal f = oracle::random_signal(kSelfDual, 51);
  SampledSignal fh = fourier(f);
  for (int j : {0, 100, 300, 511}) {
    CHECK(std::abs(eval_interpolant_spectrum(fh, kSelfDual.x(j)) - f.values[j]) < 1e-11);
  }
  double xi0 = std::llround(2.5 * kSelfDual.L) / kSelfDual.L;
  SampledSignal pw = make_test_signal("plane_wave", {{"xi0", xi0}}, kSelfDual);
  double y = 0.3123 * kSelfDual.dx();
  CHECK(std::abs(eval_interpolant(pw, y) - std::polar(1.0, 2 * M_PI * y * xi0)) < 1e-11);
}

TEST_CASE("fractional kernel matches the direct sum and the inverse kernel") {
  Grid1D g(8.0, 64);
  SampledSignal f = oracle::random_signal(g, 61);
  CVec direct = oracle::naive_fractional(f.values, 1.0 / 64, 64);
  CVec fast = tfp::fft::centered_fractional(f.values, 1.0 / 64);
  CHECK(rel_err(fast, direct) < 1e-12);
  CVec direct2 = oracle::naive_fractional(f.values, 0.0173, 96);
  CVec fast2 = tfp::fft::centered_fractional(f.values, 0.0173, 96);
  CHECK(rel_err(fast2, direct2) < 1e-12);
}

TEST_CASE("resampling preserves in-band content and reports dropped energy") {
  SampledSignal phi = make_test_signal("gaussian", {}, kSelfDual);
  double lost = -1;
  SampledSignal up = resample(phi, Grid1D(32.0, 1024), &lost);
  CHECK(lost < 1e-14);
  SampledSignal back = resample(up, kSelfDual, &lost);
  CHECK(lost < 1e-13);
  CHECK(rel_err(back.values, phi.values) < 1e-11);
  CHECK(up.norm() == doctest::Approx(phi.norm()).epsilon(1e-9));

  SampledSignal same = resample(phi, kSelfDual, &lost);
  CHECK(rel_err(same.values, phi.values) < 1e-12);

  SampledSignal pw = make_test_signal("plane_wave", {{"xi0", 10.0}}, kSelfDual);
  resample(pw, Grid1D(16.0, 128), &lost);
  CHECK(lost > 0.99);
}

TEST_CASE("oscillator eigenmodes reduce to hermite functions without perturbation") {
  Grid1D g(16.0, 256);
  for (int n = 0; n <= 2; ++n) {
    SampledSignal mode = make_test_signal("eigenmode", {{"n", double(n)}, {"mu", 0.0}}, g);
    SampledSignal h = make_test_signal("hermite", {{"n", double(n)}}, g);
    CHECK(mode.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rel_err(mode.values, h.values) < 1e-9);
  }
}

TEST_CASE("perturbed eigenmode is deterministic, normalized, and even") {
  Grid1D g(16.0, 256);
  SampledSignal a = make_test_signal("eigenmode", {{"n", 0.0}, {"mu", 4.0}}, g);
  SampledSignal b = make_test_signal("eigenmode", {{"n", 0.0}, {"mu", 4.0}}, g);
  CHECK(rel_err(a.values, b.values) == 0.0);
  CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-12));
  for (int j = 1; j < g.N; ++j) {
    CHECK(std::abs(a.values[j] - a.values[g.N - j]) < 1e-9);
  }
}

TEST_CASE("unknown signal kinds are rejected") {
  CHECK_THROWS_AS(make_test_signal("nope", {}, kSelfDual), ConfigError);
  CHECK_THROWS_AS(make_test_signal("gaussian", {{"width", -1.0}}, kSelfDual), ConfigError);
}
