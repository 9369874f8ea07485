#include "covml/fock.hpp"

#include "covml/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace covml {

FockSpace::FockSpace(int n_max_levels) : n_max(n_max_levels) {
    if (n_max < 8)
        throw validation_error("FockSpace: cutoff below 8 gives truncation garbage");
}

Matrix annihilation(const FockSpace& space) {
    Matrix a = Matrix::Zero(space.dim(), space.dim());
    for (int n = 1; n <= space.n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Matrix displacement(cd alpha, const FockSpace& space) {
    if (std::abs(alpha) > space.validity_radius() + 1e-12) {
        std::ostringstream os;
        os << "displacement: |alpha| = " << std::abs(alpha) << " outside validity radius "
           << space.validity_radius();
        throw truncation_error(os.str());
    }
    Matrix a = annihilation(space);
    Matrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
    return gen.exp();
}

cd displacement_element(int m, int n, cd alpha) {
    // <m|D(alpha)|n> = sqrt(n!/m!) alpha^{m-n} e^{-|alpha|²/2} L_n^{(m-n)}(|alpha|²)
    // for m >= n; the m < n case follows from D(alpha)† = D(-alpha).
    if (m < n) return std::conj(displacement_element(n, m, -alpha));
    const int k = m - n;
    const double s = std::norm(alpha);
    // generalized Laguerre L_n^{(k)}(s) by the stable three-term recurrence
    double l_prev = 1.0;           // L_0
    double l = 1.0 + k - s;        // L_1
    if (n == 0) l = 1.0;
    for (int j = 2; j <= n; ++j) {
        double next = ((2.0 * j - 1.0 + k - s) * l - (j - 1.0 + k) * l_prev) / j;
        l_prev = l;
        l = next;
    }
    // sqrt(n!/m!) = exp(-(lgamma(m+1)-lgamma(n+1))/2)
    double ratio = std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)));
    cd pow_alpha = std::pow(alpha, k);
    return ratio * pow_alpha * std::exp(-0.5 * s) * l;
}

Matrix beamsplitter_v(const FockSpace& space) {
    const int d = space.dim();
    const int dim2 = d * d;
    Matrix v = Matrix::Zero(dim2, dim2);
    // number sectors n1 + n2 = s are invariant; exponentiate each small block
    for (int s = 0; s <= 2 * space.n_max; ++s) {
        std::vector<int> members;  // flat indices with n1 + n2 == s
        for (int n1 = std::max(0, s - space.n_max); n1 <= std::min(space.n_max, s); ++n1)
            members.push_back(n1 * d + (s - n1));
        const int b = static_cast<int>(members.size());
        Matrix gen = Matrix::Zero(b, b);
        for (int i = 0; i < b; ++i) {
            int n1 = members[static_cast<std::size_t>(i)] / d;
            int n2 = members[static_cast<std::size_t>(i)] % d;
            // a1† a2 |n1, n2> = sqrt((n1+1) n2) |n1+1, n2-1>; the sign is fixed
            // by the mixing relation D(α)⊗D(α) = V† (D(√2 α) ⊗ 1) V on the
            // n1-slow index layout
            if (n1 + 1 <= space.n_max && n2 - 1 >= 0) {
                double amp = std::sqrt(static_cast<double>((n1 + 1) * n2));
                gen(i + 1, i) += std::numbers::pi / 4.0 * amp;   // members sorted by n1
                gen(i, i + 1) += -std::numbers::pi / 4.0 * amp;  // minus a1 a2†
            }
        }
        Matrix block = gen.exp();
        for (int i = 0; i < b; ++i)
            for (int j = 0; j < b; ++j)
                v(members[static_cast<std::size_t>(i)], members[static_cast<std::size_t>(j)]) =
                    block(i, j);
    }
    return v;
}

double mixer_intertwining_residual(const FockSpace& space, cd alpha) {
    const int d = space.dim();
    Matrix v = beamsplitter_v(space);
    Matrix da = displacement(alpha, space);
    Matrix dsq = displacement(std::sqrt(2.0) * alpha, space);
    const int half = space.n_max / 2;

    // compare the two sides column by column on inputs (and outputs) with
    // total level <= N_max/2; the truncation boundary breaks the identity on
    // the top levels by construction
    std::vector<int> kept;
    for (int c1 = 0; c1 <= half; ++c1)
        for (int c2 = 0; c1 + c2 <= half; ++c2) kept.push_back(c1 * d + c2);

    Matrix inputs = Matrix::Zero(d * d, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t k = 0; k < kept.size(); ++k) inputs(kept[k], static_cast<Eigen::Index>(k)) = 1.0;

    Matrix mixed = v * inputs;
    for (Eigen::Index col = 0; col < mixed.cols(); ++col) {
        Matrix page = Eigen::Map<const Matrix>(mixed.col(col).data(), d, d);
        // (D ⊗ 1) on the n1-slow layout multiplies the slow index: rows of
        // the column-major page are the fast n2 index, so right-multiply
        Matrix displaced = page * dsq.transpose();
        mixed.col(col) = Eigen::Map<const Vector>(displaced.data(), d * d);
    }
    Matrix rhs = v.adjoint() * mixed;

    double r2 = 0.0;
    for (std::size_t k = 0; k < kept.size(); ++k) {
        int c1 = kept[k] / d, c2 = kept[k] % d;
        Vector lhs_col = Vector::Zero(d * d);
        for (int r1 = 0; r1 < d; ++r1)
            for (int r2i = 0; r2i < d; ++r2i)
                lhs_col(r1 * d + r2i) = da(r1, c1) * da(r2i, c2);
        for (int r1 = 0; r1 <= half; ++r1)
            for (int r2i = 0; r1 + r2i <= half; ++r2i)
                r2 += std::norm(lhs_col(r1 * d + r2i) -
                                rhs(r1 * d + r2i, static_cast<Eigen::Index>(k)));
    }
    return std::sqrt(r2);
}

void gauss_legendre(int order, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
    // Golub-Welsch on the Jacobi matrix of the Legendre recurrence
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(order, order);
    for (int i = 1; i < order; ++i) {
        double beta = i / std::sqrt(4.0 * i * i - 1.0);
        jac(i, i - 1) = beta;
        jac(i - 1, i) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    nodes.resize(static_cast<std::size_t>(order));
    weights.resize(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) {
        double x = es.eigenvalues()(i);                  // on [-1, 1]
        double w = 2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
        nodes[static_cast<std::size_t>(i)] = 0.5 * (b - a) * x + 0.5 * (a + b);
        weights[static_cast<std::size_t>(i)] = 0.5 * (b - a) * w;
    }
}

double formal_dimension_numeric(const std::function<Matrix(cd)>& evaluator,
                                const FockSpace& space, int radial_order, const Vector& psi_in,
                                const Vector& phi_in) {
    Vector psi = psi_in;
    Vector phi = phi_in;
    if (psi.size() == 0) {
        psi = Vector::Zero(space.dim());
        psi(0) = 1.0;
    }
    if (phi.size() == 0) {
        phi = Vector::Zero(space.dim());
        phi(0) = 1.0;
    }
    if (psi.size() != space.dim() || phi.size() != space.dim())
        throw validation_error("formal_dimension_numeric: vector dimension mismatch");

    const double r_max = space.validity_radius();
    const int angular = 64;
    std::vector<double> rn, rw;
    gauss_legendre(radial_order, 0.0, r_max, rn, rw);

    double integral = 0.0;
    double peak = 0.0;
    double tail = 0.0;
    for (int k = 0; k < angular; ++k) {
        double theta = 2.0 * std::numbers::pi * k / angular;
        cd dir = std::polar(1.0, theta);
        for (int i = 0; i < radial_order; ++i) {
            double r = rn[static_cast<std::size_t>(i)];
            double f = std::norm(psi.dot(evaluator(r * dir) * phi));
            peak = std::max(peak, f);
            // d²α/π in polar: (1/π) r dr dθ with the 2π/angular trapezoid weight
            integral += f * r * rw[static_cast<std::size_t>(i)] * (2.0 / angular);
        }
        tail = std::max(tail, std::norm(psi.dot(evaluator(r_max * dir) * phi)));
    }
    if (peak <= 0.0)
        throw validation_error("formal_dimension_numeric: integrand vanishes identically");
    if (tail > 1e-6 * peak) {
        std::ostringstream os;
        os << "formal_dimension_numeric: integrand at the radial cutoff is " << tail / peak
           << " of its peak; increase the cutoff";
        throw truncation_error(os.str());
    }
    return 1.0 / integral;
}

} // namespace covml
