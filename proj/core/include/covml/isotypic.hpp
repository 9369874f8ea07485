#pragma once

#include "covml/haar.hpp"
#include "covml/linalg.hpp"
#include "covml/representation.hpp"

#include <cstdint>
#include <vector>

namespace covml {

/// One isotypic component: an irreducible representation of dimension d
/// occurring with multiplicity m. The basis has dim(H) x (d*m) orthonormal
/// columns ordered so column (i*m + n) spans (irrep basis vector i) ⊗
/// (multiplicity vector n); in this basis the group acts as U^mu ⊗ 1_m.
struct IrrepBlock {
    int d = 0;
    int m = 0;
    Matrix basis;
};

struct IsotypicDecomposition {
    std::vector<IrrepBlock> blocks;
    Matrix W;  // all block bases side by side, unitary
    int dim = 0;

    /// Starting column of block b inside W.
    int block_offset(std::size_t b) const;
};

/// Hilbert-Schmidt-orthonormal basis of {X : [X, U_g] = 0 for all g}.
struct CommutantBasis {
    std::vector<Matrix> ops;
    bool degenerate_warning = false;  // nullspace gap under 10x threshold
    double threshold = 0.0;
    double smallest_kept_sv = 0.0;
};

/// Nullspace of the stacked commutator map over the representation's
/// constraint elements, via singular-value thresholding at relative 1e-10.
CommutantBasis compute_commutant(const Representation& rep);

/// Splits H into aligned isotypic blocks. Equivalent irrep copies share the
/// same matrix form of the action (residual <= 1e-8 on sampled elements).
/// The seed fixes the random commutant element used for splitting.
IsotypicDecomposition isotypic_decompose(const Representation& rep, std::uint64_t seed = 42);

/// Closed-form group average: ⊕_mu 1_d ⊗ Tr_{H_mu}[A]/d_mu, expressed in the
/// original basis.
Matrix group_average(const Matrix& a, const IsotypicDecomposition& iso);

struct TwirlResult {
    Matrix mean;
    double std_error = 0.0;  // Frobenius-norm standard error of the mean
    std::int64_t samples = 0;
    bool exact = false;  // finite groups sum over all elements
};

/// Monte-Carlo (or exact, for finite groups) estimate of the group average.
TwirlResult twirl_oracle(const Matrix& a, const Representation& rep, HaarSampler& sampler,
                         std::int64_t n);

} // namespace covml
