#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace hetform {

using Complex = std::complex<double>;

/// Coefficients of det(lambda I - A) as [1, c1, ..., cn] (Faddeev-LeVerrier).
Eigen::VectorXd characteristic_polynomial(const Eigen::MatrixXd& A);

/// Roots of a polynomial with coefficients in descending order. Aberth
/// iteration from fixed starting points, then Newton polishing.
std::vector<Complex> polynomial_roots(const std::vector<double>& coeffs);

/// Eigenvalues from Eigen's real Schur decomposition, sorted by real part
/// then imaginary part.
std::vector<Complex> numeric_eigenvalues(const Eigen::MatrixXd& A);

/// Roots of lambda^2 + b lambda + c.
std::array<Complex, 2> quadratic_roots(double b, double c);

void sort_spectrum(std::vector<Complex>& v);

}  // namespace hetform
