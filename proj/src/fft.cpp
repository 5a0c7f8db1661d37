#include "tfp/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace tfp::fft {

namespace {

std::mutex plan_mutex;

fftw_plan get_plan(int n, int sign) {
  static std::map<std::pair<int, int>, fftw_plan> cache;
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  fftw_plan p = fftw_plan_dft_1d(n, nullptr, nullptr, sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache[key] = p;
  return p;
}

Eigen::VectorXcd run(const Eigen::VectorXcd& in, int sign) {
  Eigen::VectorXcd out(in.size());
  std::lock_guard<std::mutex> lock(plan_mutex);
  fftw_plan p = get_plan(static_cast<int>(in.size()), sign);
  fftw_execute_dft(p,
                   reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

Eigen::VectorXcd forward(const Eigen::VectorXcd& in) { return run(in, FFTW_FORWARD); }
Eigen::VectorXcd backward(const Eigen::VectorXcd& in) { return run(in, FFTW_BACKWARD); }

Eigen::VectorXcd centered_fractional(const Eigen::VectorXcd& c, double beta, int out_size) {
  const int n = static_cast<int>(c.size());
  const int no = out_size < 0 ? n : out_size;
  const std::complex<double> I(0, 1);
  // Bluestein: e^{2pi i b j'k'} = e^{pi i b j'^2} e^{pi i b k'^2} e^{-pi i b (j'-k')^2}
  // with j' = j - no/2, k' = k - n/2. The cross term is a linear convolution over
  // u = j - k, evaluated by zero-padded cyclic FFT.
  int m = 1;
  while (m < n + no - 1) m <<= 1;
  const double shift = (n - no) / 2.0;
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(m);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(m);
  for (int k = 0; k < n; ++k) {
    double kk = k - n / 2;
    a[k] = c[k] * std::exp(I * (M_PI * beta * kk * kk));
  }
  for (int u = -(n - 1); u <= no - 1; ++u) {
    double d = u + shift;
    b[(u + m) % m] = std::exp(-I * (M_PI * beta * d * d));
  }
  Eigen::VectorXcd fa = forward(a), fb = forward(b);
  Eigen::VectorXcd conv = backward(fa.cwiseProduct(fb)) / static_cast<double>(m);
  Eigen::VectorXcd g(no);
  for (int j = 0; j < no; ++j) {
    double jj = j - no / 2;
    g[j] = std::exp(I * (M_PI * beta * jj * jj)) * conv[j];
  }
  return g;
}

}  // namespace tfp::fft
