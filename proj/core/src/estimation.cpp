#include "covml/estimation.hpp"

#include "covml/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace covml {

namespace {

constexpr double kSchmidtFloor = 1e-12;  // lambda below this does not count toward r

// gauge fix: rotate each Schmidt pair so the largest-magnitude entry of the
// left vector is real positive, then order degenerate clusters by the left
// vectors' entries
void canonicalize_schmidt(Eigen::VectorXd& lambda, Matrix& left, Matrix& right) {
    const int r = static_cast<int>(lambda.size());
    for (int m = 0; m < r; ++m) {
        Eigen::Index imax = 0;
        left.col(m).cwiseAbs().maxCoeff(&imax);
        cd pivot = left(imax, m);
        if (std::abs(pivot) > 0.0) {
            cd phase = pivot / std::abs(pivot);
            left.col(m) /= phase;
            right.col(m) *= phase;
        }
    }
    auto lex_less = [&](int a, int b) {
        for (Eigen::Index i = 0; i < left.rows(); ++i) {
            cd za = left(i, a), zb = left(i, b);
            if (za.real() != zb.real()) return za.real() < zb.real();
            if (za.imag() != zb.imag()) return za.imag() < zb.imag();
        }
        return false;
    };
    // cluster ids precomputed over the descending spectrum keep the
    // comparator a strict weak ordering
    std::vector<int> cluster(static_cast<std::size_t>(r), 0);
    for (int m = 1; m < r; ++m)
        cluster[static_cast<std::size_t>(m)] =
            cluster[static_cast<std::size_t>(m - 1)] +
            (lambda(m - 1) - lambda(m) > 1e-10 ? 1 : 0);
    std::vector<int> order(static_cast<std::size_t>(r));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (cluster[static_cast<std::size_t>(a)] != cluster[static_cast<std::size_t>(b)])
            return cluster[static_cast<std::size_t>(a)] < cluster[static_cast<std::size_t>(b)];
        return lex_less(a, b);
    });
    Eigen::VectorXd l2(r);
    Matrix left2(left.rows(), r), right2(right.rows(), r);
    for (int m = 0; m < r; ++m) {
        l2(m) = lambda(order[static_cast<std::size_t>(m)]);
        left2.col(m) = left.col(order[static_cast<std::size_t>(m)]);
        right2.col(m) = right.col(order[static_cast<std::size_t>(m)]);
    }
    lambda = l2;
    left = left2;
    right = right2;
}

} // namespace

Vector StateDecomposition::reconstruct(const IsotypicDecomposition& iso) const {
    Vector psi = Vector::Zero(iso.dim);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const SchmidtBlock& sb = blocks[b];
        if (sb.r == 0) continue;
        const IrrepBlock& blk = iso.blocks[b];
        Vector coords = Vector::Zero(blk.d * blk.m);
        for (int m = 0; m < sb.r; ++m)
            for (int i = 0; i < blk.d; ++i)
                for (int n = 0; n < blk.m; ++n)
                    coords(i * blk.m + n) +=
                        std::sqrt(sb.lambda(m)) * sb.left(i, m) * sb.right(n, m);
        psi += blk.basis * (sb.c * coords);
    }
    return psi;
}

StateDecomposition decompose_state(const Vector& psi, const IsotypicDecomposition& iso) {
    if (psi.size() != iso.dim)
        throw validation_error("decompose_state: state dimension mismatch");
    if (std::abs(psi.norm() - 1.0) > 1e-10)
        throw validation_error("decompose_state: state is not normalized");

    StateDecomposition sd;
    double dropped = 0.0;  // weight legitimately lost to sub-threshold Schmidt values
    for (const auto& blk : iso.blocks) {
        SchmidtBlock sb;
        Vector coords = blk.basis.adjoint() * psi;  // length d*m, index i*m + n
        double weight = coords.norm();
        if (weight > kSchmidtFloor) {
            sb.c = weight;  // real >= 0; phases absorbed into the Schmidt vectors
            Matrix bipartite(blk.d, blk.m);
            for (int i = 0; i < blk.d; ++i)
                for (int n = 0; n < blk.m; ++n) bipartite(i, n) = coords(i * blk.m + n) / weight;
            Eigen::JacobiSVD<Matrix> svd(bipartite, Eigen::ComputeThinU | Eigen::ComputeThinV);
            const auto& sv = svd.singularValues();
            int r = 0;
            while (r < sv.size() && sv(r) * sv(r) > kSchmidtFloor) ++r;
            sb.r = r;
            sb.lambda = sv.head(r).array().square();
            sb.left = svd.matrixU().leftCols(r);
            // |Psi>> = Σ sqrt(lambda) |psi>|phi> needs M = Σ sqrt(lambda) psi phi^T,
            // so the right vectors are the conjugated V columns
            sb.right = svd.matrixV().leftCols(r).conjugate();
            canonicalize_schmidt(sb.lambda, sb.left, sb.right);
            double kept = sb.lambda.sum();
            dropped += weight * weight * std::max(0.0, 1.0 - kept);
        } else {
            dropped += weight * weight;
        }
        sd.blocks.push_back(std::move(sb));
    }

    if ((sd.reconstruct(iso) - psi).norm() > 1e-9 + std::sqrt(dropped))
        throw decomposition_error("decompose_state: reconstruction residual above 1e-9");
    return sd;
}

CovariantSeed optimal_seed(const StateDecomposition& sd, const IsotypicDecomposition& iso) {
    bool any = false;
    for (const auto& sb : sd.blocks) any = any || sb.r > 0;
    if (!any) throw validation_error("optimal_seed: empty state decomposition");

    CovariantSeed seed;
    seed.eta = Vector::Zero(iso.dim);
    seed.orbit_projector = Matrix::Zero(iso.dim, iso.dim);
    for (std::size_t b = 0; b < sd.blocks.size(); ++b) {
        const SchmidtBlock& sb = sd.blocks[b];
        if (sb.r == 0) continue;
        const IrrepBlock& blk = iso.blocks[b];
        cd phase = sb.c / std::abs(sb.c);
        Vector coords = Vector::Zero(blk.d * blk.m);
        Matrix mult_proj = Matrix::Zero(blk.m, blk.m);
        for (int m = 0; m < sb.r; ++m) {
            for (int i = 0; i < blk.d; ++i)
                for (int n = 0; n < blk.m; ++n)
                    coords(i * blk.m + n) += sb.left(i, m) * sb.right(n, m);
            mult_proj += sb.right.col(m) * sb.right.col(m).adjoint();
        }
        seed.eta += blk.basis * (std::sqrt(static_cast<double>(blk.d)) * phase * coords);
        seed.orbit_projector +=
            blk.basis * kron(Matrix::Identity(blk.d, blk.d), mult_proj) * blk.basis.adjoint();
    }
    seed.origin = CovariantSeed::Origin::Analytic;
    return seed;
}

double optimal_likelihood(const StateDecomposition& sd, const IsotypicDecomposition& iso) {
    double total = 0.0;
    for (std::size_t b = 0; b < sd.blocks.size(); ++b) {
        const SchmidtBlock& sb = sd.blocks[b];
        if (sb.r == 0) continue;
        double inner = 0.0;
        for (int m = 0; m < sb.r; ++m)
            inner += std::sqrt(sb.lambda(m) * static_cast<double>(iso.blocks[b].d));
        total += std::abs(sb.c) * inner;
    }
    return total * total;
}

double likelihood_density(const CovariantSeed& seed, const Vector& psi, const GroupElement& g,
                          const GroupElement& g_hat, const Representation& rep) {
    if (psi.size() != rep.dim() || seed.eta.size() != rep.dim())
        throw validation_error("likelihood_density: dimension mismatch");
    Vector psi_g = rep.evaluate(g) * psi;
    Vector eta_hat = rep.evaluate(g_hat) * seed.eta;
    return std::norm(eta_hat.dot(psi_g));
}

int orbit_dimension(const StateDecomposition& sd, const IsotypicDecomposition& iso) {
    int d_psi = 0;
    for (std::size_t b = 0; b < sd.blocks.size(); ++b)
        d_psi += iso.blocks[b].d * sd.blocks[b].r;
    return d_psi;
}

std::pair<Vector, double> optimal_input_state(const IsotypicDecomposition& iso,
                                              const std::vector<double>& phases) {
    if (!phases.empty() && phases.size() != iso.blocks.size())
        throw validation_error("optimal_input_state: one phase per block expected");
    double L = 0.0;
    for (const auto& blk : iso.blocks) L += blk.d * std::min(blk.d, blk.m);

    Vector psi = Vector::Zero(iso.dim);
    for (std::size_t b = 0; b < iso.blocks.size(); ++b) {
        const IrrepBlock& blk = iso.blocks[b];
        const int k = std::min(blk.d, blk.m);
        cd phase = phases.empty() ? cd(1.0, 0.0) : std::polar(1.0, phases[b]);
        // canonical diagonal maximally entangled state (1/sqrt k) Σ |m>|m>
        Vector coords = Vector::Zero(blk.d * blk.m);
        for (int m = 0; m < k; ++m) coords(m * blk.m + m) = 1.0 / std::sqrt(static_cast<double>(k));
        double amp = std::sqrt(static_cast<double>(blk.d * k) / L);
        psi += blk.basis * (amp * phase * coords);
    }
    return {psi, L};
}

SaturationCertificate state_saturates_bound(const StateDecomposition& sd,
                                            const IsotypicDecomposition& iso) {
    const double tol = 1e-8;
    SaturationCertificate cert;
    const int d_psi = orbit_dimension(sd, iso);
    for (std::size_t b = 0; b < sd.blocks.size(); ++b) {
        const SchmidtBlock& sb = sd.blocks[b];
        const IrrepBlock& blk = iso.blocks[b];
        double target = std::sqrt(static_cast<double>(blk.d * sb.r) / d_psi);
        if (std::abs(std::abs(sb.c) - target) > tol) {
            std::ostringstream os;
            os << "block " << b << ": |c| = " << std::abs(sb.c) << ", required "
               << target;
            cert.violations.push_back(os.str());
        }
        for (int m = 0; m < sb.r; ++m) {
            if (std::abs(sb.lambda(m) - 1.0 / sb.r) > tol) {
                std::ostringstream os;
                os << "block " << b << ": lambda_" << m << " = " << sb.lambda(m)
                   << ", required " << 1.0 / sb.r;
                cert.violations.push_back(os.str());
            }
        }
    }
    cert.saturates = cert.violations.empty();
    return cert;
}

double holevo_chi(const StateDecomposition& sd, const IsotypicDecomposition& iso) {
    // twirl spectrum: |c|^2 lambda_m / d, each d-fold degenerate
    std::vector<double> probs;
    for (std::size_t b = 0; b < sd.blocks.size(); ++b) {
        const SchmidtBlock& sb = sd.blocks[b];
        const int d = iso.blocks[b].d;
        for (int m = 0; m < sb.r; ++m) {
            double p = std::norm(sb.c) * sb.lambda(m) / d;
            for (int i = 0; i < d; ++i) probs.push_back(p);
        }
    }
    if (probs.empty()) return 0.0;
    Eigen::VectorXd p = Eigen::Map<Eigen::VectorXd>(probs.data(), static_cast<Eigen::Index>(probs.size()));
    return entropy_bits(p);
}

CovariantSeed sqrt_measurement_seed(const Vector& psi, const IsotypicDecomposition& iso) {
    if (std::abs(psi.norm() - 1.0) > 1e-10)
        throw validation_error("sqrt_measurement_seed: state is not normalized");
    Matrix frame = group_average(psi * psi.adjoint(), iso);
    Eigen::SelfAdjointEigenSolver<Matrix> es(frame);
    const Eigen::VectorXd& w = es.eigenvalues();

    // pseudo-inverse square root on the support
    Vector inv_sqrt(w.size());
    Matrix support = Matrix::Zero(iso.dim, iso.dim);
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (w(i) > kSchmidtFloor) {
            inv_sqrt(i) = 1.0 / std::sqrt(w(i));
            support += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
        } else {
            inv_sqrt(i) = 0.0;
        }
    }
    Matrix f_inv_sqrt =
        es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint();

    CovariantSeed seed;
    seed.eta = f_inv_sqrt * psi;
    seed.orbit_projector = support;
    seed.origin = CovariantSeed::Origin::SqrtMeasurement;
    return seed;
}

long long ReferenceRequirements::L_prime(int d_R) const {
    if (d_R < 1) throw validation_error("L_prime: reference dimension must be >= 1");
    long long total = 0;
    for (const auto& [d, m] : blocks_)
        total += static_cast<long long>(d) *
                 std::min<long long>(d, static_cast<long long>(m) * d_R);
    return total;
}

ReferenceRequirements reference_requirements(const IsotypicDecomposition& iso) {
    ReferenceRequirements req;
    for (const auto& blk : iso.blocks) {
        req.blocks_.push_back({blk.d, blk.m});
        req.L_max += static_cast<long long>(blk.d) * blk.d;
        int need = (blk.d + blk.m - 1) / blk.m;  // ceil(d/m)
        req.d_R_bar = std::max(req.d_R_bar, need);
    }
    for (int d_R = 1; d_R <= req.d_R_bar + 1; ++d_R)
        req.L_prime_table.push_back({d_R, req.L_prime(d_R)});
    return req;
}

} // namespace covml
