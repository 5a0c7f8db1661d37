#pragma once
#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "tfp/grid_signal.hpp"
#include "tfp/metaplectic.hpp"
#include "tfp/symplectic.hpp"

namespace tfp {

// Symbol samples on a separable phase-space grid; rows follow the x-grid,
// columns the frequency grid.
struct SymbolGrid {
  Grid1D xgrid{1.0, 1};
  Grid1D xigrid{1.0, 1};
  Eigen::MatrixXcd values;
  bool real_valued = false;
};

using SymbolFunction = std::function<cd(double, double)>;

// Sample sigma on the twice-refined x-grid paired with the dual frequency
// grid of signal_grid. Quantization midpoints (x_i + y_j)/2 then land on
// symbol rows exactly, so no interpolation enters the kernel.
SymbolGrid make_symbol(const SymbolFunction& sigma, const Grid1D& signal_grid);

enum class KernelStructure { dense, multiplication, fourier_multiplier };

// Quantized operator. The dense N x N kernel is always built and is the
// source of truth for operator algebra (products, adjoints); the structure
// tag only selects a faster equivalent route inside apply().
struct WeylOperator {
  Grid1D grid{1.0, 1};
  double tau = 0.5;
  KernelStructure structure = KernelStructure::dense;
  Eigen::MatrixXcd kernel;
  CVec diag;

  SampledSignal apply(const SampledSignal& f) const;
  SampledSignal apply_dense(const SampledSignal& f) const;
  SampledSignal adjoint_apply(const SampledSignal& f) const;
  double hermitian_defect() const;
  LinearOperator as_linear_operator(std::string name = "weyl") const;
};

// tau = 1/2 evaluates the symbol at midpoints (Weyl); tau = 1 at the output
// point (Kohn-Nirenberg). Other values are rejected.
WeylOperator weyl_quantize(const SymbolGrid& sigma, double tau = 0.5);

struct SymbolCertificate {
  DecayFit fit;
  double required_s = 0;
  bool passes = false;
  // C_fit over the weighted sup-norm of the symbol's phase-space spectrum;
  // 0 when no symbol was supplied.
  double norm_ratio = 0;
};

// Envelope certificate for a quantized (or otherwise pseudodifferential)
// operator: fits the Gabor matrix over in/out lattices against the identity
// map and passes when s_fit >= s - 0.5. Distinct lattices let the caller
// keep the sampled differences w - z away from the diagonal, where the
// bounded part of the operator would otherwise dominate the regression.
SymbolCertificate certify_symbol_class(const LinearOperator& op, double s,
                                       const SampledSignal& window,
                                       const LatticeSpec& in_lattice,
                                       const LatticeSpec& out_lattice,
                                       const SymbolGrid* sigma = nullptr);

// Sup over a coarse set of phase-space window positions of |V sigma| times
// the weight (1 + |zeta|^2)^{s/2} on the spectral side.
double symbol_weighted_sup_norm(const SymbolGrid& sigma, double s);

// Shell-max profile H(u) = max over lattice pairs with w - z = u of
// |<T pi(z) g, pi(w) g>|, on the difference lattice of the sampling lattice.
struct EnvelopeFunction {
  LatticeSpec diff_lattice;
  Eigen::MatrixXd values;

  double l1_weighted(double s) const;
};

EnvelopeFunction envelope_function(const LinearOperator& op, const SampledSignal& window,
                                   const LatticeSpec& lattice);

struct CompositionCheck {
  DecayFit fit;
  std::vector<DecayFit> factor_fits;
  double c_total = 0;
  double c_bound = 0;
  bool within_bound = false;
};

// Quantizes each factor, multiplies the dense kernels, and fits the composed
// Gabor matrix. The bound check uses fixed-exponent constants
// C = sup |K(w,z)| <w-z>^s so that the per-factor and composed constants are
// comparable: c_total <= c0 * prod(C_j). factor_fits keep the free fits.
CompositionCheck compose_and_check(const std::vector<SymbolGrid>& factors, double s,
                                   const SampledSignal& window, const LatticeSpec& lattice,
                                   double c0 = 10.0);

// max over a deterministic atom-mix corpus of
// ||mu(A)^{-1} sigma^w mu(A) f - (sigma o A)^w f|| after unimodular phase
// alignment; the corpus signals are normalized. The symbol is supplied as a
// callable so sigma o A is sampled exactly rather than resampled.
double covariance_defect(const SymbolFunction& sigma, const SymplecticMatrix& map,
                         const Grid1D& grid, int corpus_size = 20);

// Type-I integral operator sum_xi e^{2 pi i Phi(x, xi)} sigma(x, xi) fhat(xi) dxi
// with Phi = (C/2A) x^2 + xi x / A - (B/2A) xi^2 built from the matrix blocks.
// Requires |A| > 1e-8; the symbol may be sampled on the signal grid or on its
// twice-refined x-grid.
SampledSignal fio_type1_apply(const SymplecticMatrix& map, const SymbolGrid& sigma,
                              const SampledSignal& f);

}  // namespace tfp
