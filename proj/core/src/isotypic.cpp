#include "covml/isotypic.hpp"

#include "covml/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace covml {

namespace {

// stacked map X -> [X, U_k] over all constraint unitaries, acting on vec(X)
Matrix stacked_commutator_map(const std::vector<Matrix>& unitaries, int n) {
    Matrix stacked(static_cast<Eigen::Index>(unitaries.size()) * n * n, n * n);
    const Matrix id = Matrix::Identity(n, n);
    for (std::size_t k = 0; k < unitaries.size(); ++k) {
        // vec(XU - UX) = (U^T ⊗ 1 - 1 ⊗ U) vec(X), column-major vec
        stacked.middleRows(static_cast<Eigen::Index>(k) * n * n, n * n) =
            kron(unitaries[k].transpose(), id) - kron(id, unitaries[k]);
    }
    return stacked;
}

std::vector<Matrix> constraint_unitaries(const Representation& rep) {
    std::vector<Matrix> out;
    for (const auto& g : rep.constraint_elements()) out.push_back(rep.evaluate(g));
    return out;
}

// orthonormal basis (columns) of the span of the columns of m, tolerance-rank
Matrix column_space(const Matrix& m, double rel_tol) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) return Matrix(m.rows(), 0);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > rel_tol * sv(0)) ++rank;
    return svd.matrixU().leftCols(rank);
}

// restriction of each unitary to an invariant subspace with orthonormal basis q
std::vector<Matrix> restrict_all(const std::vector<Matrix>& us, const Matrix& q) {
    std::vector<Matrix> out;
    out.reserve(us.size());
    for (const auto& u : us) out.push_back(q.adjoint() * u * q);
    return out;
}

// dimension of {T : A_k T = T B_k for all k} together with one nullspace vector
std::pair<int, Matrix> intertwiner_space(const std::vector<Matrix>& as,
                                         const std::vector<Matrix>& bs, int s) {
    Matrix stacked(static_cast<Eigen::Index>(as.size()) * s * s, s * s);
    const Matrix id = Matrix::Identity(s, s);
    for (std::size_t k = 0; k < as.size(); ++k)
        stacked.middleRows(static_cast<Eigen::Index>(k) * s * s, s * s) =
            kron(id, as[k]) - kron(bs[k].transpose(), id);
    Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    double tol = 1e-8 * std::max(1.0, sv(0));
    int nullity = 0;
    for (Eigen::Index i = sv.size() - 1; i >= 0 && sv(i) <= tol; --i) ++nullity;
    Matrix t;
    if (nullity > 0) t = unvec(svd.matrixV().col(sv.size() - 1), s, s);
    return {nullity, t};
}

// commutant dimension of a set of unitaries restricted to a subspace
int commutant_dimension(const std::vector<Matrix>& us, double rel_tol) {
    int s = static_cast<int>(us[0].rows());
    Matrix stacked = stacked_commutator_map(us, s);
    Eigen::JacobiSVD<Matrix> svd(stacked);
    const auto& sv = svd.singularValues();
    double tol = rel_tol * sv(0);
    int nullity = 0;
    for (Eigen::Index i = sv.size() - 1; i >= 0 && sv(i) <= tol; --i) ++nullity;
    return nullity;
}

struct IrrepCopy {
    Matrix basis;  // dim x s, orthonormal, invariant
};

// one attempt at splitting the space into irreducible copies along the
// eigenspaces of a random Hermitian commutant element
bool split_into_copies(const std::vector<Matrix>& us, const CommutantBasis& comm, int dim,
                       std::mt19937_64& rng, std::vector<IrrepCopy>& copies) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix y = Matrix::Zero(dim, dim);
    for (const auto& b : comm.ops) {
        cd coeff(normal(rng), normal(rng));
        y += coeff * b;
    }
    Matrix h = hermitian_part(y);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    double scale = std::max(std::abs(es.eigenvalues()(0)),
                            std::abs(es.eigenvalues()(dim - 1)));
    if (scale <= 0.0) return false;
    Eigen::VectorXd w = es.eigenvalues() / scale;  // unit spectral norm

    // cluster eigenvalues at absolute tolerance 1e-8; require clean gaps
    const double cluster_tol = 1e-8;
    const double min_gap = 1e-6;
    std::vector<std::pair<int, int>> clusters;  // [first, last]
    int start = 0;
    for (int i = 1; i <= dim; ++i) {
        if (i == dim || w(i) - w(i - 1) > cluster_tol) {
            clusters.push_back({start, i - 1});
            if (i < dim && w(i) - w(i - 1) < min_gap) return false;  // ambiguous gap
            start = i;
        }
    }

    copies.clear();
    for (auto [lo, hi] : clusters) {
        IrrepCopy copy;
        copy.basis = es.eigenvectors().middleCols(lo, hi - lo + 1);
        // a cluster must be a single irreducible copy: invariant with a
        // trivial commutant on the restriction
        for (const auto& u : us) {
            Matrix ub = u * copy.basis;
            double leak = (ub - copy.basis * (copy.basis.adjoint() * ub)).norm();
            if (leak > 1e-8) return false;
        }
        if (commutant_dimension(restrict_all(us, copy.basis), 1e-8) != 1) return false;
        copies.push_back(std::move(copy));
    }
    return true;
}

} // namespace

int IsotypicDecomposition::block_offset(std::size_t b) const {
    int at = 0;
    for (std::size_t i = 0; i < b; ++i) at += blocks[i].d * blocks[i].m;
    return at;
}

CommutantBasis compute_commutant(const Representation& rep) {
    const int n = rep.dim();
    std::vector<Matrix> us = constraint_unitaries(rep);
    Matrix stacked = stacked_commutator_map(us, n);

    Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double threshold = 1e-10 * sv(0);

    CommutantBasis out;
    out.threshold = threshold;
    Eigen::Index nullity = 0;
    for (Eigen::Index i = sv.size() - 1; i >= 0 && sv(i) <= threshold; --i) ++nullity;
    Eigen::Index kept = sv.size() - nullity;
    out.smallest_kept_sv = kept > 0 ? sv(kept - 1) : 0.0;
    if (kept > 0 && out.smallest_kept_sv < 10.0 * threshold) out.degenerate_warning = true;

    // right singular vectors of the nullspace are Hilbert-Schmidt orthonormal
    for (Eigen::Index i = 0; i < nullity; ++i)
        out.ops.push_back(unvec(svd.matrixV().col(sv.size() - 1 - i), n, n));
    return out;
}

IsotypicDecomposition isotypic_decompose(const Representation& rep, std::uint64_t seed) {
    const int dim = rep.dim();
    std::vector<Matrix> us = constraint_unitaries(rep);
    CommutantBasis comm = compute_commutant(rep);

    std::mt19937_64 rng(seed);
    std::vector<IrrepCopy> copies;
    bool split = false;
    for (int attempt = 0; attempt < 8 && !split; ++attempt)
        split = split_into_copies(us, comm, dim, rng, copies);
    if (!split)
        throw decomposition_error(
            "failed to split a degenerate eigenspace after 8 random commutant elements");

    // group copies into equivalence classes by nonzero intertwiner space
    struct CopyClass {
        int d = 0;
        std::vector<Matrix> reference;  // restricted unitaries of the first copy
        std::vector<Matrix> bases;      // aligned bases, one per copy
        std::vector<double> fingerprint;
    };
    std::vector<CopyClass> classes;
    for (auto& copy : copies) {
        const int s = static_cast<int>(copy.basis.cols());
        std::vector<Matrix> restricted = restrict_all(us, copy.basis);
        bool placed = false;
        for (auto& cls : classes) {
            if (cls.d != s) continue;
            auto [nullity, t] = intertwiner_space(restricted, cls.reference, s);
            if (nullity == 0) continue;
            if (nullity > 1)
                throw decomposition_error("intertwiner space has dimension > 1 (copy not irreducible)");
            // Schur: T†T ∝ 1, the polar factor removes the scale
            Eigen::JacobiSVD<Matrix> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
            Matrix polar = svd.matrixU() * svd.matrixV().adjoint();
            cls.bases.push_back(copy.basis * polar);
            placed = true;
            break;
        }
        if (!placed) {
            CopyClass cls;
            cls.d = s;
            cls.reference = restricted;
            cls.bases.push_back(copy.basis);
            for (const auto& u : restricted) {
                cd tr = u.trace();
                cls.fingerprint.push_back(tr.real());
                cls.fingerprint.push_back(tr.imag());
            }
            classes.push_back(std::move(cls));
        }
    }

    // deterministic block order: dimension, then character fingerprint
    std::sort(classes.begin(), classes.end(), [](const CopyClass& a, const CopyClass& b) {
        if (a.d != b.d) return a.d < b.d;
        for (std::size_t i = 0; i < a.fingerprint.size(); ++i) {
            double diff = a.fingerprint[i] - b.fingerprint[i];
            if (std::abs(diff) > 1e-6) return diff < 0.0;
        }
        return false;
    });

    IsotypicDecomposition iso;
    iso.dim = dim;
    iso.W = Matrix(dim, dim);
    int at = 0;
    for (const auto& cls : classes) {
        IrrepBlock block;
        block.d = cls.d;
        block.m = static_cast<int>(cls.bases.size());
        block.basis = Matrix(dim, cls.d * block.m);
        for (int i = 0; i < cls.d; ++i)
            for (int n = 0; n < block.m; ++n)
                block.basis.col(i * block.m + n) = cls.bases[static_cast<std::size_t>(n)].col(i);
        iso.W.middleCols(at, block.basis.cols()) = block.basis;
        at += static_cast<int>(block.basis.cols());
        iso.blocks.push_back(std::move(block));
    }

    if (at != dim)
        throw decomposition_error("block dimensions do not add up to dim(H)");
    if (unitarity_defect(iso.W) > 1e-10 * dim)
        throw decomposition_error("assembled change of basis is not unitary");
    if (comm.degenerate_warning)
        throw decomposition_error("commutant nullspace is ill-conditioned (degenerate gap)");

    // postcondition: in the new basis every constraint unitary is
    // (irrep block) ⊗ identity with the declared sizes
    for (const auto& u : us) {
        for (std::size_t b = 0; b < iso.blocks.size(); ++b) {
            const IrrepBlock& blk = iso.blocks[b];
            Matrix inside = blk.basis.adjoint() * u * blk.basis;
            // recover the d x d irrep matrix from the m-fast layout
            Matrix irrep(blk.d, blk.d);
            for (int i = 0; i < blk.d; ++i)
                for (int j = 0; j < blk.d; ++j)
                    irrep(i, j) = inside(i * blk.m, j * blk.m);
            if ((inside - kron(irrep, Matrix::Identity(blk.m, blk.m))).norm() > 1e-8)
                throw decomposition_error("block does not act as irrep ⊗ identity");
            Matrix outside = iso.W.adjoint() * u * blk.basis;
            outside.middleRows(iso.block_offset(b), blk.d * blk.m).setZero();
            if (outside.norm() > 1e-8)
                throw decomposition_error("block is not invariant under the group action");
        }
    }
    return iso;
}

Matrix group_average(const Matrix& a, const IsotypicDecomposition& iso) {
    if (a.rows() != iso.dim || a.cols() != iso.dim)
        throw validation_error("group_average: dimension mismatch");
    Matrix out = Matrix::Zero(iso.dim, iso.dim);
    for (const auto& blk : iso.blocks) {
        Matrix inside = blk.basis.adjoint() * a * blk.basis;  // (d*m) x (d*m)
        Matrix reduced = Matrix::Zero(blk.m, blk.m);          // Tr over the irrep factor
        for (int i = 0; i < blk.d; ++i)
            reduced += inside.block(i * blk.m, i * blk.m, blk.m, blk.m);
        reduced /= static_cast<double>(blk.d);
        out += blk.basis * kron(Matrix::Identity(blk.d, blk.d), reduced) * blk.basis.adjoint();
    }
    return out;
}

TwirlResult twirl_oracle(const Matrix& a, const Representation& rep, HaarSampler& sampler,
                         std::int64_t n) {
    if (n < 1) throw validation_error("twirl_oracle: sample count must be >= 1");
    TwirlResult result;
    if (rep.spec().is_finite()) {
        Matrix sum = Matrix::Zero(rep.dim(), rep.dim());
        for (int g = 0; g < rep.spec().order; ++g) {
            Matrix u = rep.evaluate(GroupElement::index(g));
            sum += u * a * u.adjoint();
        }
        result.mean = sum / static_cast<double>(rep.spec().order);
        result.exact = true;
        result.samples = rep.spec().order;
        return result;
    }
    // fixed-size partial sums keep the result independent of any later
    // partitioning across workers; conjugation preserves the Frobenius norm,
    // so the spread follows from sum-of-squares bookkeeping in one pass
    constexpr std::int64_t kChunk = 1024;
    Matrix sum = Matrix::Zero(rep.dim(), rep.dim());
    Matrix chunk = Matrix::Zero(rep.dim(), rep.dim());
    double sumsq = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        Matrix u = rep.evaluate(sampler.next());
        Matrix term = u * a * u.adjoint();
        sumsq += term.squaredNorm();
        chunk += term;
        if ((i + 1) % kChunk == 0) {
            sum += chunk;
            chunk.setZero();
        }
    }
    sum += chunk;
    result.mean = sum / static_cast<double>(n);
    double var = std::max(0.0, sumsq - static_cast<double>(n) * result.mean.squaredNorm());
    result.std_error = n > 1 ? std::sqrt(var / (static_cast<double>(n) * (n - 1))) : 0.0;
    result.samples = n;
    return result;
}

} // namespace covml
