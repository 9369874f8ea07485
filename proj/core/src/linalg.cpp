#include "covml/linalg.hpp"

#include <cmath>

namespace covml {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix unitary_exp(const Matrix& hermitian, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian);
    const Eigen::VectorXd& w = es.eigenvalues();
    Vector phases(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k)
        phases(k) = std::polar(1.0, -t * w(k));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

Vector vec(const Matrix& a) {
    return Eigen::Map<const Vector>(a.data(), a.size());
}

Matrix unvec(const Vector& v, int rows, int cols) {
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

double unitarity_defect(const Matrix& a) {
    return (a.adjoint() * a - Matrix::Identity(a.cols(), a.cols())).norm();
}

double entropy_bits(const Eigen::VectorXd& p, double floor) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p(i) > floor) s -= p(i) * std::log2(p(i));
    return s;
}

} // namespace covml
