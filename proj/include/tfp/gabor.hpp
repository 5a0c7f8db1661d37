#pragma once
#include <utility>
#include <vector>

#include "tfp/grid_signal.hpp"

namespace tfp {

// Separable lattice alpha*Z x beta*Z inside the sampling grid. Steps must be
// positive integer multiples of dx (resp. dxi) whose counts divide N, so the
// lattice closes up under the cyclic group structure.
struct GaborSystem {
  SampledSignal window;
  double alpha = 0, beta = 0;
  int step_x = 1, step_xi = 1;
  int count_x = 0, count_xi = 0;

  double x(int a) const { return (a - count_x / 2) * alpha; }
  double xi(int b) const { return (b - count_xi / 2) * beta; }
};

GaborSystem make_gabor_system(const SampledSignal& g, double alpha, double beta);

struct GaborCoefficients {
  Grid1D grid;
  double alpha = 0, beta = 0;
  // values(a, b) at phase-space point (x(a), xi(b)).
  Eigen::MatrixXcd values;

  int count_x() const { return int(values.rows()); }
  int count_xi() const { return int(values.cols()); }
  double x(int a) const { return (a - count_x() / 2) * alpha; }
  double xi(int b) const { return (b - count_xi() / 2) * beta; }
  bool full_resolution() const {
    return count_x() == grid.N && count_xi() == grid.N;
  }
};

// V_g f(z) = dx * sum_v f(v) conj(g(v - z1)) e^{-2pi i x_v z2}, one FFT per
// time column. The two-argument form samples the full phase grid.
GaborCoefficients stft(const SampledSignal& f, const SampledSignal& g);
GaborCoefficients stft(const SampledSignal& f, const SampledSignal& g, double alpha, double beta);

// Pointwise STFT with the translation snapped to the grid; the sum runs over
// the window's numerical support only.
class StftSampler {
 public:
  StftSampler(const SampledSignal& f, const SampledSignal& g);
  cd operator()(PhasePoint z) const;

 private:
  SampledSignal f_, g_;
  std::vector<int> support_;
};

// Adjoint-based inversion with the ||g||^{-2} normalization; requires
// full-resolution coefficients (coarse lattices go through frame_reconstruct).
SampledSignal istft(const GaborCoefficients& F, const SampledSignal& g);

// Extreme eigenvalues (A, B) of the dense frame operator
// S = sum_lattice <., pi(lambda) g> pi(lambda) g.
std::pair<double, double> frame_bounds(const GaborSystem& sys);

// True when the lower bound is meaningfully positive (A > 1e-10 B).
bool is_frame(const std::pair<double, double>& bounds);

// Canonical dual window S^{-1} g; throws when the system is not a frame.
SampledSignal dual_window(const GaborSystem& sys);

// sum_lattice F(a,b) pi(lambda_ab) synth; with analysis window g and synthesis
// window dual_window the composition reproduces the input.
SampledSignal frame_reconstruct(const GaborCoefficients& F, const SampledSignal& synth);

// Polynomial weights on phase space. vs: <z>^s = (1+|z|^2)^{s/2}; constant: 1;
// tensor_vs: <w>^s on the second phase-space block of a doubled argument.
// A vs weight may carry a linear pre-composition, evaluating <Mz>^s.
struct Weight {
  enum class Kind { vs, tensor_vs, constant };
  Kind kind = Kind::constant;
  double s = 0;
  Eigen::Matrix2d pre = Eigen::Matrix2d::Identity();

  double operator()(PhasePoint z) const;
  double operator()(const Eigen::Vector4d& zw) const;
};

Weight weight_vs(double s);
Weight weight_vs_composed(double s, const Eigen::Matrix2d& pre);
Weight weight_tensor_vs(double s);
Weight weight_constant();

// Discrete mixed-norm || |V_g f| m ||_{p,q}: inner x with dx weight, outer
// frequency with dxi weight; infinity selects the grid max.
double modulation_norm(const SampledSignal& f, const SampledSignal& g, double p, double q,
                       const Weight& m);

// Empirical (min, max) of m(Az)/m(z) over a phase-grid sweep.
std::pair<double, double> weight_equivalence_check(const Weight& m, const Eigen::Matrix2d& A,
                                                  const Grid1D& sweep);

}  // namespace tfp
