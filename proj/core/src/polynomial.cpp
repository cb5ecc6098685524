#include "hetform/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hetform {
namespace {

Complex horner(const std::vector<double>& a, Complex z, Complex* derivative) {
  Complex p = a[0];
  Complex dp = 0.0;
  for (std::size_t i = 1; i < a.size(); ++i) {
    dp = dp * z + p;
    p = p * z + a[i];
  }
  if (derivative) *derivative = dp;
  return p;
}

}  // namespace

Eigen::VectorXd characteristic_polynomial(const Eigen::MatrixXd& A) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw std::invalid_argument("characteristic_polynomial: square matrix required");
  Eigen::VectorXd c(n + 1);
  c(0) = 1.0;
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    if (k > 1) M = A * M + c(k - 1) * Eigen::MatrixXd::Identity(n, n);
    c(k) = -(A * M).trace() / static_cast<double>(k);
  }
  return c;
}

std::vector<Complex> polynomial_roots(const std::vector<double>& coeffs) {
  std::size_t lead = 0;
  while (lead < coeffs.size() && coeffs[lead] == 0.0) ++lead;
  if (lead == coeffs.size()) throw std::invalid_argument("polynomial_roots: zero polynomial");
  std::vector<double> a(coeffs.begin() + static_cast<std::ptrdiff_t>(lead), coeffs.end());
  const double a0 = a[0];
  for (double& v : a) v /= a0;
  const std::size_t n = a.size() - 1;
  if (n == 0) return {};

  double bound = 0.0;
  for (std::size_t i = 1; i <= n; ++i) bound = std::max(bound, std::abs(a[i]));
  const double radius = std::max(1e-3, std::min(1.0 + bound, 2.0 * std::pow(bound, 1.0 / n) + 1e-3));

  std::vector<Complex> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double ang = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.25) / static_cast<double>(n) + 0.4;
    z[k] = std::polar(radius, ang);
  }

  for (int it = 0; it < 500; ++it) {
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      Complex dp;
      const Complex p = horner(a, z[k], &dp);
      if (p == 0.0) continue;
      const Complex ratio = p / dp;
      Complex repulse = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) repulse += 1.0 / (z[k] - z[j]);
      }
      const Complex step = ratio / (1.0 - ratio * repulse);
      if (std::isfinite(step.real()) && std::isfinite(step.imag())) {
        z[k] -= step;
        worst = std::max(worst, std::abs(step) / std::max(1.0, std::abs(z[k])));
      }
    }
    if (worst < 1e-15) break;
  }

  for (Complex& r : z) {
    for (int it = 0; it < 3; ++it) {
      Complex dp;
      const Complex p = horner(a, r, &dp);
      if (dp == 0.0) break;
      const Complex next = r - p / dp;
      if (!(std::abs(horner(a, next, nullptr)) < std::abs(p))) break;
      r = next;
    }
  }
  sort_spectrum(z);
  return z;
}

std::vector<Complex> numeric_eigenvalues(const Eigen::MatrixXd& A) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(A, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("numeric_eigenvalues: eigen decomposition failed");
  }
  std::vector<Complex> out(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + solver.eigenvalues().size());
  sort_spectrum(out);
  return out;
}

std::array<Complex, 2> quadratic_roots(double b, double c) {
  const double disc = b * b - 4.0 * c;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    const double q = -0.5 * (b + std::copysign(s, b));
    if (q == 0.0) return {Complex(0.0), Complex(0.0)};
    return {Complex(q), Complex(c / q)};
  }
  const double im = 0.5 * std::sqrt(-disc);
  return {Complex(-0.5 * b, -im), Complex(-0.5 * b, im)};
}

void sort_spectrum(std::vector<Complex>& v) {
  std::sort(v.begin(), v.end(), [](const Complex& l, const Complex& r) {
    if (l.real() != r.real()) return l.real() < r.real();
    return l.imag() < r.imag();
  });
}

}  // namespace hetform
