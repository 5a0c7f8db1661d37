#pragma once
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tfp/grid_signal.hpp"
#include "tfp/symplectic.hpp"

namespace tfp {

// A black-box operator on signals together with what is known about its
// phase-space map (std::nullopt = unknown).
struct LinearOperator {
  std::string name;
  std::function<SampledSignal(const SampledSignal&)> apply;
  std::optional<SymplecticMatrix> expected_map;
};

// Rectangular lattice centered at (x0, xi0):
// point(a, b) = ((a - nx/2) alpha + x0, (b - nxi/2) beta + xi0).
struct LatticeSpec {
  double alpha = 0, beta = 0;
  int nx = 0, nxi = 0;
  double x0 = 0, xi0 = 0;

  PhasePoint point(int a, int b) const {
    return {(a - nx / 2) * alpha + x0, (b - nxi / 2) * beta + xi0};
  }
};

struct GaborMatrixSample {
  std::vector<PhasePoint> in_points, out_points;
  // values(w, z): out rows, in columns.
  Eigen::MatrixXcd values;
};

struct DecayFit {
  double s_fit = 0;
  double C_fit = 0;
  double residual = 0;
  int shells_used = 0;
};

// One factor of the canonical generating set. dilation(alpha):
// alpha^{-1/2} f(x/alpha) via spectral interpolation; chirp(C): multiplication
// by e^{-i pi C x^2}; fourier: the forward transform (the phase-space map J).
SampledSignal apply_generator(const SymplecticFactor& factor, const SampledSignal& f);

// mu(A) as the composition of the factorization word; projective (all
// comparisons are modulo a global unimodular phase).
SampledSignal metaplectic_apply(const SymplecticMatrix& A, const SampledSignal& f);
SampledSignal metaplectic_apply_word(const std::vector<SymplecticFactor>& word,
                                     const SampledSignal& f);

// Wraps mu(A) as a LinearOperator; the factorization word is computed once.
LinearOperator metaplectic_operator(const SymplecticMatrix& A, std::string name = "metaplectic");

// Unimodular c minimizing ||a - c b||_2 (inner-product alignment).
cd align_phase(const SampledSignal& a, const SampledSignal& b);

// min over |c|=1 of ||pi(Az) mu(A) g - c mu(A) pi(z) g|| / ||g||.
double intertwining_defect(const SymplecticMatrix& A, PhasePoint z, const SampledSignal& g);

// Dense k(w, z) = <T pi(z) g, pi(w) g> over the two lattices.
GaborMatrixSample gabor_matrix(const LinearOperator& T, const SampledSignal& g,
                               const LatticeSpec& in, const LatticeSpec& out);

// Envelope regression of log shell-max |k| against log <w - map z> over 24
// logarithmic shells; entries with <w - map z> above u_cap are ignored when a
// finite cap is given. Shell maxima below 1e-14 of the global peak are
// treated as roundoff and dropped from the fit.
DecayFit decay_fit(const GaborMatrixSample& K, const SymplecticMatrix& map,
                   double u_cap = std::numeric_limits<double>::infinity());

}  // namespace tfp
