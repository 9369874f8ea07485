#pragma once

#include <Eigen/Dense>
#include <complex>

namespace covml {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Kronecker product with the first factor on the slow index:
/// out[i1*rows(b)+i2, j1*cols(b)+j2] = a(i1,j1) * b(i2,j2).
Matrix kron(const Matrix& a, const Matrix& b);

/// exp(-i t H) for Hermitian H, built from the eigendecomposition so the
/// result is unitary to machine precision.
Matrix unitary_exp(const Matrix& hermitian, double t = 1.0);

/// Hermitian part (a + a†)/2.
Matrix hermitian_part(const Matrix& a);

// column stacking and its inverse
Vector vec(const Matrix& a);
Matrix unvec(const Vector& v, int rows, int cols);

/// ‖a†a − 1‖_F, the unitarity defect.
double unitarity_defect(const Matrix& a);

/// Base-2 entropy of a probability vector; entries below the floor count zero.
double entropy_bits(const Eigen::VectorXd& p, double floor = 1e-15);

} // namespace covml
