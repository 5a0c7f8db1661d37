#pragma once
#include <vector>

#include "tfp/grid_signal.hpp"

namespace tfp {

// Standard symplectic form J = (0 1; -1 0) at d = 1.
Eigen::Matrix2d standard_J();

struct SymplecticMatrix {
  Eigen::Matrix2d m = Eigen::Matrix2d::Identity();

  PhasePoint apply(PhasePoint z) const {
    Eigen::Vector2d w = m * Eigen::Vector2d(z.x, z.xi);
    return {w[0], w[1]};
  }
};

// Defect of tM J M = J, scaled by max(1, |M|^2) so the test stays meaningful
// for matrices with large entries.
double symplectic_defect(const Eigen::Matrix2d& m);
bool is_symplectic(const Eigen::Matrix2d& m, double tol = 1e-10);
SymplecticMatrix make_symplectic(const Eigen::Matrix2d& m);

// Element (a b; c -a) of the symplectic Lie algebra, stored blockwise.
struct HamiltonianMatrix {
  double a = 0, b = 0, c = 0;
  Eigen::Matrix2d matrix() const;
};

// P(x, xi) = (b/2) xi^2 + a xi x - (c/2) x^2.
struct QuadraticForm {
  double a = 0, b = 0, c = 0;
  double operator()(double x, double xi) const;
};

// e^{t A} by scaling-and-squaring, with a determinant cleanup if the
// symplectic defect drifts.
SymplecticMatrix flow(const HamiltonianMatrix& gen, double t);

// Generator whose flow is the phase-space propagation of e^{it q^w}; the
// naive blockwise correspondence q -> (a b; c -a) is rescaled by -1/(2pi),
// the normalization forced by the free-particle and oscillator anchors.
HamiltonianMatrix quadratic_symbol_to_generator(const QuadraticForm& q);

// Factorization alphabet. chirp(C) is the matrix (1 0; -C 1) (the map whose
// operator counterpart multiplies by e^{-i pi C x^2}), dilation(alpha) is
// (alpha 0; 0 1/alpha), fourier is J itself.
enum class FactorType { dilation, chirp, fourier };

struct SymplecticFactor {
  FactorType type = FactorType::fourier;
  double param = 0;
  Eigen::Matrix2d matrix() const;
};

// Word whose matrix product, taken in list order (last entry acts first on
// phase space), equals the input to 1e-9; at most 5 factors. Among the
// equivalent routes the one minimizing the largest factor parameter wins,
// keeping dilations away from 0 and infinity and chirps shallow.
std::vector<SymplecticFactor> factor_symplectic(const SymplecticMatrix& A);

// (q)^w f = -(1/8pi^2) b f'' - (i/2pi) a x f' - (i/4pi) a f - (c/2) x^2 f,
// derivatives taken spectrally.
SampledSignal quadratic_weyl_apply(const QuadraticForm& q, const SampledSignal& f);

}  // namespace tfp
