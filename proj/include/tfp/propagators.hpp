#pragma once
#include <limits>
#include <map>
#include <optional>
#include <string>

#include "tfp/grid_signal.hpp"
#include "tfp/metaplectic.hpp"
#include "tfp/symplectic.hpp"
#include "tfp/weyl.hpp"

namespace tfp {

// H = q^w + sigma^w: a real quadratic part plus a bounded rough perturbation.
// class_s is the decay class of the perturbation's Gabor envelope; it enters
// structure certificates and the Dyson tail estimate, never the evolution.
struct HamiltonianSpec {
  QuadraticForm quadratic;
  std::optional<SymbolGrid> perturbation;
  double class_s = 4.0;
  std::string name = "hamiltonian";
};

struct PropagatorResult {
  double t = 0;
  SampledSignal u_t;
  // closed_form | metaplectic | split_step | dyson(n)
  std::string method;
  std::map<std::string, double> diagnostics;
};

// Quadratic symbols whose evolutions have closed forms: e^{it q^w} is the
// Fourier multiplier e^{-4 pi^2 i t xi^2} for the first, and the rotation
// kernel with ground state 2^{1/4} e^{-pi x^2} (eigenvalue -1/2) for the
// second.
QuadraticForm free_particle_symbol();
QuadraticForm harmonic_symbol();

PropagatorResult free_particle(const SampledSignal& u0, double t);

// Direct oscillatory quadrature of the rotation kernel away from the
// caustics t = pi/2 + k pi (distance > 0.1); inside that band the metaplectic
// route is used, which is well defined for every t.
PropagatorResult harmonic_oscillator(const SampledSignal& u0, double t);

// mu(A_t) u0 with A_t the phase-space flow of the quadratic symbol. Equality
// with the closed forms above is projective (one unimodular constant).
PropagatorResult quadratic_propagate(const QuadraticForm& q, const SampledSignal& u0, double t);

// Strang splitting: half-step quadratic flow, full-step perturbation
// exponential, half-step quadratic flow. Multiplication perturbations
// exponentiate pointwise (exactly); general kernels use a 4th-order truncated
// matrix exponential. Second order in t/steps.
PropagatorResult split_step(const HamiltonianSpec& H, const SampledSignal& u0, double t,
                            int steps);

// Truncated Dyson-Phillips series for P(t) = mu(A_{-t}) e^{itH}: the n-th
// term iterates s -> i * integral_0^s B P_{n-1} with B(r) the flow-conjugated
// perturbation, evaluated on one shared Gauss-Legendre node set with the
// exact cumulative-integration matrix of the nodal interpolant; mu(A_t) is
// applied last. Errors out when the analytic tail estimate
// (t M ||sigma||)^{n_max+1}/(n_max+1)! reaches 1.
PropagatorResult dyson_propagate(const HamiltonianSpec& H, const SampledSignal& u0, double t,
                                 int n_max, int nodes = 8);

// Gabor-matrix structure of e^{itH} (split-step realization): `aligned` fits
// the envelope against the quadratic flow map A_t, `reduced` fits
// mu(A_{-t}) e^{itH} against the identity. The raw sample is kept so callers
// can refit with deliberately wrong maps or tighter radius caps.
struct PropagatorStructure {
  DecayFit aligned;
  DecayFit reduced;
  bool passes = false;
  SymplecticMatrix map;
  GaborMatrixSample sample;
};

PropagatorStructure propagator_gabor_structure(
    const HamiltonianSpec& H, double t, const SampledSignal& g, const LatticeSpec& in_lattice,
    const LatticeSpec& out_lattice, int steps = 128,
    double u_cap = std::numeric_limits<double>::infinity());

}  // namespace tfp
