#pragma once
#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "tfp/grid_signal.hpp"
#include "tfp/propagators.hpp"
#include "tfp/symplectic.hpp"
#include "tfp/weyl.hpp"

namespace tfp {

// Conic decomposition of phase space into K angular sectors (centers at
// k * 360/K degrees, width 360/K) crossed with logarithmic radial shells on
// r0 <= |z| <= R. R = 0 selects the margin-limited reach per direction.
struct SectorGrid {
  int K = 72;
  double r0 = 2.0;
  double R = 0.0;
  int shells = 12;
};

struct SectorRecord {
  double angle_deg = 0;
  Eigen::Vector2d dir = Eigen::Vector2d::UnitX();
  // Fitted decay exponent of the shell maxima (rapid-decay estimate); huge
  // when every usable shell sits at roundoff.
  double rho = 0;
  // Weighted p-integral over the sector annulus (Sobolev estimate), with its
  // refined-grid companion and calibration threshold.
  double integral = 0;
  double refined_integral = 0;
  double threshold = 0;
  bool singular = false;
};

struct WaveFrontEstimate {
  SectorGrid sectors;
  // p = 0 marks the rapid-decay (global) estimate; otherwise the weighted
  // integral parameters.
  double p = 0;
  double r = 0;
  double rho_threshold = 0;
  std::vector<SectorRecord> records;
  // The exact directions behind the flags. Propagation pushes these and only
  // re-bins for the flags, so pushing by A2 A1 equals pushing by A1 then A2
  // with no quantization drift.
  std::vector<Eigen::Vector2d> singular_directions;

  std::vector<int> singular_sectors() const;
};

int sector_of(const SectorGrid& sectors, const Eigen::Vector2d& dir);
// Distance on the sector circle Z_K.
int sector_distance(const SectorGrid& sectors, int a, int b);

// Rapid-decay wave front estimate: per sector, regress log shell-max of
// |V_g u| against log <z> over the monotone tail (shells past the profile
// peak) and flag the sector when the fitted exponent stays below
// rho_threshold. Signals whose |V_g u| is x-independent on the torus
// (constants, plane waves) are analyzed through their frequency profile:
// the x margin imposes no reach limit for them.
WaveFrontEstimate wavefront_global(const SampledSignal& u, const SampledSignal& g,
                                   const SectorGrid& sectors = {}, double rho_threshold = 3.0);

// Supplies the analyzed signal on a refined grid. The refinement used by the
// two-grid tests doubles the box and quadruples the sample count, so both
// margins grow; the default provider is the periodic bandlimited extension.
using RefineProvider = std::function<SampledSignal(const Grid1D&)>;

// Weighted-integrability estimate: per sector, the discrete integral of
// |V_g u|^p <z>^{pr} over the annular sector (weighted sup for infinite p).
// A sector is flagged singular when the integral exceeds a baseline
// calibrated on the gaussian envelope e^{-pi |z|^2 / 2} and keeps growing
// under grid refinement.
WaveFrontEstimate wavefront_sobolev(const SampledSignal& u, const SampledSignal& g, double p,
                                    double r, const SectorGrid& sectors = {},
                                    const RefineProvider& refine = {});

// Pushes every singular direction v to Av/|Av| and re-bins the flags; exact
// at direction level, so it is a group action.
WaveFrontEstimate propagate_wavefront(const WaveFrontEstimate& wf, const SymplecticMatrix& A);

struct PropagationReport {
  WaveFrontEstimate initial, evolved, predicted;
  // Flags on one side with no counterpart within one sector on the other.
  std::vector<int> unexplained_evolved;
  std::vector<int> unmatched_predicted;
  bool pass = false;
};

// Checks WF(e^{itH} u0) = A_t(WF(u0)) at sector resolution: evolves u0 by
// split-stepping, estimates both wave front sets, and compares the evolved
// flags against the pushed-forward initial flags with one sector of slack on
// each side. The refine providers feed the two-grid test; by default u0 is
// extended periodically and the perturbation is resampled separably.
PropagationReport verify_propagation(const HamiltonianSpec& H, const SampledSignal& u0,
                                     const SampledSignal& g, double t, double p, double r,
                                     const SectorGrid& sectors = {}, int steps = 128,
                                     const std::function<HamiltonianSpec(const Grid1D&)>& refine_h = {},
                                     const RefineProvider& refine_u0 = {});

struct MicrolocalityReport {
  WaveFrontEstimate input;
  WaveFrontEstimate weyl_output, kn_output;
  // Output flags with no input flag within one sector.
  std::vector<int> weyl_violations, kn_violations;
  bool weyl_pass = false;
  bool kn_pass = false;
  bool pass = false;
};

// Checks that quantizing sigma cannot enlarge the wave front set:
// WF(sigma^w u) and WF(sigma(x,D) u) are both compared against WF(u) with one
// sector of slack. The symbol is a callable so the refined run resamples it
// exactly; class_s gates the admissible weight exponents 0 < 2r < class_s - 2.
MicrolocalityReport verify_microlocality(const SymbolFunction& sigma, double class_s,
                                         const SampledSignal& u, const SampledSignal& g,
                                         double p, double r, const SectorGrid& sectors = {});

}  // namespace tfp
