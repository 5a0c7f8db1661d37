#include "tfp/wavefront.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "tfp/gabor.hpp"

namespace tfp {

namespace {

constexpr double kMargin = 2.0;
constexpr double kExemptCapFactor = 32.0;
constexpr double kGrowth = 1.5;
constexpr double kBaselineFactor = 1e4;
constexpr double kRoundoffRel = 1e-13;
constexpr double kVacuousRho = 1e6;

struct Cell {
  PhasePoint z;
  double weight = 0;
  int shell = 0;
  int ray = 0;
  double r = 0;
};

// Radius beyond which the window's samples fall under the support cutoff of
// the STFT sampler. Mesh cells keep this distance from the box edge so no
// evaluation ever wraps window mass around the torus; a wrapped tail picks up
// position-dependent phases that scramble the magnitude wherever the true
// value is small.
double window_cutoff_radius(const SampledSignal& win) {
  double sup = 0;
  for (int j = 0; j < win.grid.N; ++j) sup = std::max(sup, std::abs(win.values[j]));
  double rad = 0;
  for (int j = 0; j < win.grid.N; ++j)
    if (std::abs(win.values[j]) > 1e-17 * sup) rad = std::max(rad, std::abs(win.grid.x(j)));
  return rad + win.grid.dx();
}

struct SectorMesh {
  std::vector<std::vector<Cell>> cells;
  std::vector<std::vector<double>> shell_radius;
  std::vector<double> reach;
};

void validate_sectors(const SectorGrid& sec) {
  if (sec.K < 8 || sec.K % 2 != 0)
    throw ConfigError("sector count must be even and at least 8");
  if (sec.shells < 4) throw ConfigError("at least 4 radial shells are required");
  if (!(sec.r0 > 0)) throw ConfigError("inner radius must be positive");
}

// Polar sampling of the annular sectors: three rays per sector, two radii per
// logarithmic shell, quadrature weight r dr dtheta. The reach is the largest
// radius every ray of the sector can attain without leaving the margin-safe
// part of the phase-space box. The x margin is at least the window's support
// radius, so no cell's STFT evaluation wraps window mass around the box edge.
// x-independent signals are exempt from the x margin entirely: their sector
// statistics use the frequency profile alone, so cells sit at (0, r sin th)
// and are capped only by the frequency margin and a grid-proportional
// ceiling.
SectorMesh build_mesh(const SampledSignal& win, const SectorGrid& sec, bool x_exempt) {
  validate_sectors(sec);
  const Grid1D& g = win.grid;
  const double xlim = g.L / 2 - std::max(kMargin, window_cutoff_radius(win));
  const double xilim = g.band() / 2 - kMargin;
  if ((!x_exempt && xlim <= 0) || xilim <= 0)
    throw ConfigError("grid too small for the sector margins");
  const double cap = kExemptCapFactor * std::max(g.L, g.band());
  const double dth = 2 * M_PI / sec.K;

  SectorMesh mesh;
  mesh.cells.resize(sec.K);
  mesh.shell_radius.resize(sec.K);
  mesh.reach.resize(sec.K);
  for (int k = 0; k < sec.K; ++k) {
    const double center = k * dth;
    const double offs[3] = {-dth / 3, 0.0, dth / 3};
    double R = sec.R > 0 ? sec.R : std::numeric_limits<double>::infinity();
    for (double o : offs) {
      const double c = std::abs(std::cos(center + o));
      const double s = std::abs(std::sin(center + o));
      double lim = std::min(xilim / std::max(s, 1e-12), cap);
      if (!x_exempt) lim = std::min(lim, xlim / std::max(c, 1e-12));
      R = std::min(R, lim);
    }
    if (!(R > sec.r0 * 1.2))
      throw ConfigError("sector reach does not clear the inner radius; enlarge the grid or shrink r0");
    mesh.reach[k] = R;
    const double lstep = std::log(R / sec.r0) / sec.shells;
    for (int j = 0; j < sec.shells; ++j) {
      mesh.shell_radius[k].push_back(sec.r0 * std::exp((j + 0.5) * lstep));
      const double e0 = sec.r0 * std::exp(j * lstep);
      const double mid = sec.r0 * std::exp((j + 0.5) * lstep);
      const double e1 = sec.r0 * std::exp((j + 1) * lstep);
      const double rs[2] = {sec.r0 * std::exp((j + 0.25) * lstep),
                            sec.r0 * std::exp((j + 0.75) * lstep)};
      const double dr[2] = {mid - e0, e1 - mid};
      for (int q = 0; q < 2; ++q) {
        for (int a = 0; a < 3; ++a) {
          const double th = center + offs[a];
          const double x = x_exempt ? 0.0 : rs[q] * std::cos(th);
          mesh.cells[k].push_back(
              {{x, rs[q] * std::sin(th)}, rs[q] * dr[q] * dth / 3, j, a, rs[q]});
        }
      }
    }
  }
  return mesh;
}

// The window refined onto the doubled box: zero-extended at the original
// sample step, then interpolated to the refined rate. Plain resampling would
// tile the window L-periodically and park a full copy at the refined box
// edge, where its wrapped tail scrambles small STFT values and its support
// swallows the whole x margin.
SampledSignal refine_window(const SampledSignal& g, const Grid1D& fine) {
  const double rad = window_cutoff_radius(g);
  const Grid1D mid{fine.L, 2 * g.grid.N};
  SampledSignal z(mid, CVec::Zero(mid.N));
  z.values.segment(g.grid.N / 2, g.grid.N) = g.values;
  SampledSignal out = resample(z, fine);
  // Interpolation ringing sits just above the support cutoff; clamping
  // beyond the base window's support radius keeps the refined support, and
  // with it the refined x margin, proportionate to the true window.
  for (int j = 0; j < fine.N; ++j)
    if (std::abs(fine.x(j)) > rad) out.values[j] = 0;
  return out;
}

SampledSignal normalized_copy(const SampledSignal& f, const char* what) {
  const double n = f.norm();
  if (!(n > 0)) throw ConfigError(std::string(what) + " must have positive norm");
  SampledSignal out = f;
  out.values /= n;
  return out;
}

// |V_g u| is probed at several translations for a few frequencies around the
// spectral peak; exact flatness across x identifies torus-periodic inputs
// (constants, plane waves) whose sector statistics may ignore the x margin.
// Probe positions stay clear of the box edge by the window support radius,
// since wrapped window mass breaks the exact flatness.
bool x_independent_magnitude(const StftSampler& V, const SampledSignal& u,
                             const SampledSignal& win) {
  const Grid1D& g = u.grid;
  SampledSignal uh = fourier(u);
  int kp = 0;
  double best = -1;
  for (int k = 0; k < g.N; ++k) {
    if (std::abs(uh.values[k]) > best) {
      best = std::abs(uh.values[k]);
      kp = k;
    }
  }
  const double xip = uh.grid.x(kp);
  const double xis[3] = {xip, xip + g.band() / 16, xip - g.band() / 16};
  const double q = 0.85 * (g.L / 2 - window_cutoff_radius(win));
  if (!(q > 0)) return false;
  const double xs[5] = {0.0, q, -q, q / 2, -q / 3};
  double worst = 0, scale = 0;
  for (double xi : xis) {
    double mn = std::numeric_limits<double>::infinity(), mx = 0;
    for (double x : xs) {
      const double a = std::abs(V({x, xi}));
      mn = std::min(mn, a);
      mx = std::max(mx, a);
      scale = std::max(scale, a);
    }
    worst = std::max(worst, mx - mn);
  }
  return worst <= 1e-9 * std::max(scale, 1e-300);
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = int(x.size());
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double num = 0, den = 0;
  for (int i = 0; i < n; ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return den > 0 ? num / den : 0.0;
}

// Weighted modulation statistic over the sector's cells; rmin restricts to
// the annulus beyond it (used for the refined mesh's added reach).
double sector_statistic(const std::vector<Cell>& cells, const StftSampler& V, double p, double r,
                        double rmin = 0) {
  if (std::isinf(p)) {
    double sup = 0;
    for (const Cell& c : cells) {
      if (c.r <= rmin) continue;
      sup = std::max(sup, std::abs(V(c.z)) * std::pow(1.0 + c.r * c.r, r / 2));
    }
    return sup;
  }
  double acc = 0;
  for (const Cell& c : cells) {
    if (c.r <= rmin) continue;
    acc += std::pow(std::abs(V(c.z)), p) * std::pow(1.0 + c.r * c.r, p * r / 2) * c.weight;
  }
  return acc;
}

// The same statistic for the gaussian envelope e^{-pi r^2 / 2}; its value on
// the identical mesh calibrates the divergence threshold.
double baseline_statistic(const std::vector<Cell>& cells, double p, double r) {
  if (std::isinf(p)) {
    double sup = 0;
    for (const Cell& c : cells)
      sup = std::max(sup, std::exp(-M_PI * c.r * c.r / 2) * std::pow(1.0 + c.r * c.r, r / 2));
    return sup;
  }
  double acc = 0;
  for (const Cell& c : cells)
    acc += std::pow(std::exp(-M_PI * c.r * c.r / 2), p) * std::pow(1.0 + c.r * c.r, p * r / 2) *
           c.weight;
  return acc;
}

// Flags of a with no flag of b within one sector.
std::vector<int> unmatched_flags(const SectorGrid& sec, const std::vector<int>& a,
                                 const std::vector<int>& b) {
  std::vector<int> out;
  for (int ka : a) {
    bool near = false;
    for (int kb : b)
      if (sector_distance(sec, ka, kb) <= 1) near = true;
    if (!near) out.push_back(ka);
  }
  return out;
}

// Separable bandlimited resampling of a sampled symbol onto the layout
// make_symbol would use for signal_grid; the periodic extension tiles both
// axes, which is exact for multiplication symbols built from periodic data
// and a reasonable default elsewhere. Exact treatment goes through the
// callable providers.
SymbolGrid resample_symbol(const SymbolGrid& s, const Grid1D& signal_grid) {
  const Grid1D xg{signal_grid.L, 2 * signal_grid.N};
  const Grid1D xig = signal_grid.dual();
  Eigen::MatrixXcd mid(xg.N, s.values.cols());
  for (int j = 0; j < s.values.cols(); ++j) {
    SampledSignal line(s.xgrid, s.values.col(j));
    mid.col(j) = resample(line, xg).values;
  }
  Eigen::MatrixXcd out(xg.N, xig.N);
  for (int i = 0; i < xg.N; ++i) {
    SampledSignal line(s.xigrid, mid.row(i).transpose());
    out.row(i) = resample(line, xig).values.transpose();
  }
  if (s.real_valued) out = out.real().cast<cd>();
  SymbolGrid r;
  r.xgrid = xg;
  r.xigrid = xig;
  r.values = std::move(out);
  r.real_valued = s.real_valued;
  return r;
}

HamiltonianSpec refit_hamiltonian(const HamiltonianSpec& H, const Grid1D& g) {
  HamiltonianSpec out = H;
  if (H.perturbation) out.perturbation = resample_symbol(*H.perturbation, g);
  return out;
}

}  // namespace

std::vector<int> WaveFrontEstimate::singular_sectors() const {
  std::vector<int> out;
  for (int k = 0; k < int(records.size()); ++k)
    if (records[k].singular) out.push_back(k);
  return out;
}

int sector_of(const SectorGrid& sectors, const Eigen::Vector2d& dir) {
  const double dth = 2 * M_PI / sectors.K;
  const long long k = std::llround(std::atan2(dir.y(), dir.x()) / dth);
  return int(((k % sectors.K) + sectors.K) % sectors.K);
}

int sector_distance(const SectorGrid& sectors, int a, int b) {
  const int d = std::abs(a - b) % sectors.K;
  return std::min(d, sectors.K - d);
}

WaveFrontEstimate wavefront_global(const SampledSignal& u, const SampledSignal& g,
                                   const SectorGrid& sectors, double rho_threshold) {
  if (u.grid != g.grid) throw ConfigError("signal and window must share a grid");
  const SampledSignal un = normalized_copy(u, "signal");
  const SampledSignal gn = normalized_copy(g, "window");
  const StftSampler V(un, gn);
  const bool exempt = x_independent_magnitude(V, un, gn);
  const SectorMesh mesh = build_mesh(gn, sectors, exempt);
  const double dth = 2 * M_PI / sectors.K;

  std::vector<std::vector<std::array<double, 3>>> smax(
      sectors.K, std::vector<std::array<double, 3>>(sectors.shells, {0.0, 0.0, 0.0}));
  double peak = 0;
  for (int k = 0; k < sectors.K; ++k) {
    for (const Cell& c : mesh.cells[k]) {
      const double a = std::abs(V(c.z));
      smax[k][c.shell][c.ray] = std::max(smax[k][c.shell][c.ray], a);
      peak = std::max(peak, a);
    }
  }
  const double floor = kRoundoffRel * std::max(peak, 1e-300);

  WaveFrontEstimate est;
  est.sectors = sectors;
  est.rho_threshold = rho_threshold;
  for (int k = 0; k < sectors.K; ++k) {
    SectorRecord rec;
    rec.angle_deg = k * 360.0 / sectors.K;
    rec.dir = {std::cos(k * dth), std::sin(k * dth)};
    // Each ray is fitted on its own: a sector is as singular as its slowest
    // ray, and pooling rays would let a neighboring ray's profile (a plane
    // wave's tooth crossed at large radius) bury the flat evidence of the
    // ray that actually points along the singularity. Per ray, the fit
    // starts at the first shell reaching half the profile maximum: the
    // conic definition is asymptotic, so transient growth before the peak
    // is excluded, while the half-max rule keeps the start of a flat
    // profile insensitive to snapping jitter in the shell values.
    double rho = std::numeric_limits<double>::infinity();
    bool informative = false;
    for (int a = 0; a < 3; ++a) {
      double pmax = 0;
      for (int j = 0; j < sectors.shells; ++j) pmax = std::max(pmax, smax[k][j][a]);
      if (pmax <= floor) continue;
      int jstart = 0;
      while (smax[k][jstart][a] < 0.5 * pmax) ++jstart;
      std::vector<double> xs, ys;
      for (int j = jstart; j < sectors.shells; ++j) {
        if (smax[k][j][a] > floor) {
          const double r = mesh.shell_radius[k][j];
          xs.push_back(0.5 * std::log1p(r * r));
          ys.push_back(std::log(smax[k][j][a]));
        }
      }
      if (int(xs.size()) < 3) continue;
      rho = std::min(rho, -lsq_slope(xs, ys));
      informative = true;
    }
    if (!informative) {
      rec.rho = kVacuousRho;
      rec.singular = false;
    } else {
      rec.rho = rho;
      rec.singular = rec.rho < rho_threshold;
    }
    if (rec.singular) est.singular_directions.push_back(rec.dir);
    est.records.push_back(rec);
  }
  return est;
}

WaveFrontEstimate wavefront_sobolev(const SampledSignal& u, const SampledSignal& g, double p,
                                    double r, const SectorGrid& sectors,
                                    const RefineProvider& refine) {
  if (!(r > 0)) throw ConfigError("sobolev wave front requires a positive weight exponent r");
  if (!(p >= 1)) throw ConfigError("sobolev wave front requires p >= 1 (infinity selects the sup)");
  if (u.grid != g.grid) throw ConfigError("signal and window must share a grid");
  const double cu = u.norm(), cg = g.norm();
  if (!(cu > 0) || !(cg > 0)) throw ConfigError("signal and window must have positive norm");
  SampledSignal un = u;
  un.values /= cu;
  SampledSignal gn = g;
  gn.values /= cg;
  const StftSampler V(un, gn);
  const bool exempt = x_independent_magnitude(V, un, gn);
  const SectorMesh base = build_mesh(gn, sectors, exempt);

  // Refined companion: doubled box, quadrupled sample count, so both the x
  // and the frequency margins grow and every divergent direction gains
  // reach. The provider receives the refined grid and returns the same
  // (unnormalized) function on it; scaling reuses the base norms so the two
  // statistics are directly comparable.
  const Grid1D fine_grid{2 * u.grid.L, 4 * u.grid.N};
  SampledSignal u2 = refine ? refine(fine_grid) : resample(u, fine_grid);
  if (u2.grid != fine_grid) throw ConfigError("refine provider returned a signal on the wrong grid");
  u2.values /= cu;
  SampledSignal g2 = refine_window(g, fine_grid);
  g2.values /= cg;
  const StftSampler V2(u2, g2);
  SectorGrid fine_sec = sectors;
  if (sectors.R > 0) fine_sec.R = 2 * sectors.R;
  const SectorMesh fine = build_mesh(g2, fine_sec, exempt);

  const double dth = 2 * M_PI / sectors.K;
  WaveFrontEstimate est;
  est.sectors = sectors;
  est.p = p;
  est.r = r;
  for (int k = 0; k < sectors.K; ++k) {
    SectorRecord rec;
    rec.angle_deg = k * 360.0 / sectors.K;
    rec.dir = {std::cos(k * dth), std::sin(k * dth)};
    rec.integral = sector_statistic(base.cells[k], V, p, r);
    // Divergence shows up as mass the refined mesh picks up beyond the base
    // reach. Comparing whole-mesh statistics instead would re-bin the
    // convergent core on different radii, and for steeply decaying
    // integrands that quadrature jitter alone can fake the growth ratio.
    rec.refined_integral = sector_statistic(fine.cells[k], V2, p, r, base.reach[k]);
    rec.threshold = kBaselineFactor * baseline_statistic(base.cells[k], p, r);
    const double growth = std::isinf(p) ? std::pow(2.0, r / 2) : kGrowth - 1;
    rec.singular = rec.integral > rec.threshold &&
                   rec.refined_integral > growth * rec.integral;
    if (rec.singular) est.singular_directions.push_back(rec.dir);
    est.records.push_back(rec);
  }
  return est;
}

WaveFrontEstimate propagate_wavefront(const WaveFrontEstimate& wf, const SymplecticMatrix& A) {
  WaveFrontEstimate out;
  out.sectors = wf.sectors;
  out.p = wf.p;
  out.r = wf.r;
  out.rho_threshold = wf.rho_threshold;
  const double dth = 2 * M_PI / wf.sectors.K;
  out.records.resize(wf.sectors.K);
  for (int k = 0; k < wf.sectors.K; ++k) {
    out.records[k].angle_deg = k * 360.0 / wf.sectors.K;
    out.records[k].dir = {std::cos(k * dth), std::sin(k * dth)};
  }
  for (const Eigen::Vector2d& v : wf.singular_directions) {
    Eigen::Vector2d w = A.m * v;
    const double n = w.norm();
    if (!(n > 0)) continue;
    w /= n;
    out.singular_directions.push_back(w);
    out.records[sector_of(wf.sectors, w)].singular = true;
  }
  return out;
}

PropagationReport verify_propagation(const HamiltonianSpec& H, const SampledSignal& u0,
                                     const SampledSignal& g, double t, double p, double r,
                                     const SectorGrid& sectors, int steps,
                                     const std::function<HamiltonianSpec(const Grid1D&)>& refine_h,
                                     const RefineProvider& refine_u0) {
  if (!(r > 0) || !(2 * r < H.class_s - 2))
    throw ConfigError("propagation law requires 0 < 2r < s - 2 for the perturbation class s");

  const RefineProvider u0_refine =
      refine_u0 ? refine_u0 : RefineProvider([&u0](const Grid1D& gg) { return resample(u0, gg); });

  PropagationReport rep;
  rep.initial = wavefront_sobolev(u0, g, p, r, sectors, u0_refine);

  const PropagatorResult evolved = split_step(H, u0, t, steps);
  const RefineProvider evolved_refine = [&](const Grid1D& gg) {
    const HamiltonianSpec Hr = refine_h ? refine_h(gg) : refit_hamiltonian(H, gg);
    return split_step(Hr, u0_refine(gg), t, steps).u_t;
  };
  rep.evolved = wavefront_sobolev(evolved.u_t, g, p, r, sectors, evolved_refine);

  const SymplecticMatrix At = flow(quadratic_symbol_to_generator(H.quadratic), t);
  rep.predicted = propagate_wavefront(rep.initial, At);

  const std::vector<int> after = rep.evolved.singular_sectors();
  const std::vector<int> want = rep.predicted.singular_sectors();
  rep.unexplained_evolved = unmatched_flags(sectors, after, want);
  rep.unmatched_predicted = unmatched_flags(sectors, want, after);
  rep.pass = rep.unexplained_evolved.empty() && rep.unmatched_predicted.empty();
  return rep;
}

MicrolocalityReport verify_microlocality(const SymbolFunction& sigma, double class_s,
                                         const SampledSignal& u, const SampledSignal& g,
                                         double p, double r, const SectorGrid& sectors) {
  if (!(r > 0) || !(2 * r < class_s - 2))
    throw ConfigError("microlocality requires 0 < 2r < s - 2 for the symbol class s");

  MicrolocalityReport rep;
  rep.input = wavefront_sobolev(u, g, p, r, sectors);
  const std::vector<int> in_flags = rep.input.singular_sectors();

  for (double tau : {0.5, 1.0}) {
    const WeylOperator op = weyl_quantize(make_symbol(sigma, u.grid), tau);
    const SampledSignal out = op.apply(u);
    const RefineProvider refine = [&sigma, &u, tau](const Grid1D& gg) {
      const WeylOperator opr = weyl_quantize(make_symbol(sigma, gg), tau);
      return opr.apply(resample(u, gg));
    };
    const WaveFrontEstimate est = wavefront_sobolev(out, g, p, r, sectors, refine);
    const std::vector<int> flags = est.singular_sectors();
    const std::vector<int> bad = unmatched_flags(sectors, flags, in_flags);
    if (tau == 0.5) {
      rep.weyl_output = est;
      rep.weyl_violations = bad;
      rep.weyl_pass = bad.empty();
    } else {
      rep.kn_output = est;
      rep.kn_violations = bad;
      rep.kn_pass = bad.empty();
    }
  }
  rep.pass = rep.weyl_pass && rep.kn_pass;
  return rep;
}

}  // namespace tfp
