#include "tfp/symplectic.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>

namespace tfp {

Eigen::Matrix2d standard_J() {
  Eigen::Matrix2d J;
  J << 0, 1, -1, 0;
  return J;
}

double symplectic_defect(const Eigen::Matrix2d& m) {
  Eigen::Matrix2d J = standard_J();
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m.transpose() * J * m - J).cwiseAbs().maxCoeff() / (scale * scale);
}

bool is_symplectic(const Eigen::Matrix2d& m, double tol) { return symplectic_defect(m) < tol; }

SymplecticMatrix make_symplectic(const Eigen::Matrix2d& m) {
  if (!is_symplectic(m)) throw Error("matrix is not symplectic");
  if (std::abs(m.determinant() - 1) > 1e-8 * std::pow(std::max(1.0, m.cwiseAbs().maxCoeff()), 2)) {
    throw Error("matrix determinant is not 1");
  }
  return {m};
}

Eigen::Matrix2d HamiltonianMatrix::matrix() const {
  Eigen::Matrix2d m;
  m << a, b, c, -a;
  return m;
}

double QuadraticForm::operator()(double x, double xi) const {
  return 0.5 * b * xi * xi + a * xi * x - 0.5 * c * x * x;
}

SymplecticMatrix flow(const HamiltonianMatrix& gen, double t) {
  Eigen::Matrix2d m = (t * gen.matrix()).exp();
  if (symplectic_defect(m) > 1e-10) m /= std::sqrt(m.determinant());
  return {m};
}

HamiltonianMatrix quadratic_symbol_to_generator(const QuadraticForm& q) {
  const double scale = -1.0 / (2 * M_PI);
  return {scale * q.a, scale * q.b, scale * q.c};
}

Eigen::Matrix2d SymplecticFactor::matrix() const {
  Eigen::Matrix2d m;
  switch (type) {
    case FactorType::dilation:
      m << param, 0, 0, 1 / param;
      break;
    case FactorType::chirp:
      m << 1, 0, -param, 1;
      break;
    case FactorType::fourier:
      m = standard_J();
      break;
  }
  return m;
}

namespace {

void push_chirp(std::vector<SymplecticFactor>& word, double C) {
  if (std::abs(C) > 1e-14) word.push_back({FactorType::chirp, C});
}

void push_dilation(std::vector<SymplecticFactor>& word, double alpha) {
  if (std::abs(alpha - 1) > 1e-14) word.push_back({FactorType::dilation, alpha});
}

// A = (a b; c d) with b != 0 factors as L(d/b) D(b) J L(a/b), where
// L(s) = (1 0; s 1) is chirp(-s).
std::vector<SymplecticFactor> factor_with_b(const Eigen::Matrix2d& m) {
  std::vector<SymplecticFactor> word;
  double a = m(0, 0), b = m(0, 1), d = m(1, 1);
  push_chirp(word, -d / b);
  push_dilation(word, b);
  word.push_back({FactorType::fourier, 0});
  push_chirp(word, -a / b);
  return word;
}

// A = (a 0; c d) factors as L(c/a) D(a).
std::vector<SymplecticFactor> factor_lower(const Eigen::Matrix2d& m) {
  std::vector<SymplecticFactor> word;
  push_chirp(word, -m(1, 0) / m(0, 0));
  push_dilation(word, m(0, 0));
  return word;
}

// Numerical badness of a word: extreme dilations resample poorly, and large
// chirp parameters mean steep quadratic phases whose instantaneous frequency
// leaves the band.
double word_score(const std::vector<SymplecticFactor>& word) {
  double s = 0;
  for (const SymplecticFactor& f : word) {
    if (f.type == FactorType::dilation) s = std::max(s, std::abs(std::log(std::abs(f.param))));
    if (f.type == FactorType::chirp) s = std::max(s, std::abs(f.param));
  }
  return s;
}

}  // namespace

std::vector<SymplecticFactor> factor_symplectic(const SymplecticMatrix& A) {
  const Eigen::Matrix2d m = A.m;
  const Eigen::Matrix2d J = standard_J();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double a = m(0, 0), b = m(0, 1), d = m(1, 1);

  // Triangular shortcut; an off-diagonal residue below the factorization
  // tolerance is absorbed rather than routed through extra fourier factors.
  if (std::abs(b) <= 1e-12 * scale) return factor_lower(m);

  std::vector<std::vector<SymplecticFactor>> candidates;
  candidates.push_back(factor_with_b(m));
  if (std::abs(a) > 1e-12 * scale) {
    // A = (A J^{-1}) J, and A J^{-1} has -a in the upper-right slot.
    std::vector<SymplecticFactor> word = factor_with_b(m * J.transpose());
    word.push_back({FactorType::fourier, 0});
    candidates.push_back(std::move(word));
  }
  if (std::abs(d) > 1e-12 * scale) {
    // A = J (J^{-1} A), and J^{-1} A has -d in the upper-right slot.
    std::vector<SymplecticFactor> word = factor_with_b(J.transpose() * m);
    word.insert(word.begin(), {FactorType::fourier, 0});
    candidates.push_back(std::move(word));
  }

  size_t best = 0;
  for (size_t i = 1; i < candidates.size(); ++i) {
    if (word_score(candidates[i]) < word_score(candidates[best])) best = i;
  }
  return candidates[best];
}

SampledSignal quadratic_weyl_apply(const QuadraticForm& q, const SampledSignal& f) {
  const Grid1D& g = f.grid;
  SampledSignal fhat = fourier(f);
  CVec bterm(g.N), dterm(g.N);
  for (int k = 0; k < g.N; ++k) {
    double xi = fhat.grid.x(k);
    bterm[k] = 0.5 * q.b * xi * xi * fhat.values[k];
    dterm[k] = cd(0, 2 * M_PI * xi) * fhat.values[k];
  }
  CVec out = inverse_fourier(SampledSignal(fhat.grid, bterm)).values;
  if (q.a != 0) {
    CVec df = inverse_fourier(SampledSignal(fhat.grid, dterm)).values;
    for (int j = 0; j < g.N; ++j) {
      out[j] += cd(0, -q.a / (2 * M_PI)) * g.x(j) * df[j] + cd(0, -q.a / (4 * M_PI)) * f.values[j];
    }
  }
  for (int j = 0; j < g.N; ++j) {
    out[j] += -0.5 * q.c * g.x(j) * g.x(j) * f.values[j];
  }
  return SampledSignal(g, std::move(out));
}

}  // namespace tfp
