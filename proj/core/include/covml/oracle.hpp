#pragma once

#include "covml/estimation.hpp"
#include "covml/isotypic.hpp"

#include <cstdint>
#include <vector>

namespace covml {

/// Record of one projected-ascent run.
struct AscentTrace {
    int iterations = 0;
    std::vector<double> objective;  // value at every iterate
    double final_constraint_residual = 0.0;
    double final_objective = 0.0;
    bool conclusive = false;  // constraint residual reached 1e-8
};

struct OracleResult {
    Matrix xi;       // best feasible iterate
    double value = 0.0;
    AscentTrace trace;
};

/// Direct numerical maximization of Tr[rho Xi] over positive operators with
/// the per-block partial-trace constraint Tr_{H_mu}[Xi] = d_mu 1_{m_mu}:
/// gradient steps with a diminishing, periodically restarted schedule, each
/// followed by eigenvalue clipping onto the positive cone and the exact
/// affine rebalance of each block's reduced matrix. Reported values come
/// from fully rebalanced iterates only. Deterministic for a fixed seed.
OracleResult maximize_likelihood_numeric(const Matrix& rho, const IsotypicDecomposition& iso,
                                         std::uint64_t seed, int iters);

enum class NormalizationMode { ClosedForm, MonteCarlo };

struct ResidualReport {
    double residual = 0.0;
    double std_error = 0.0;  // Monte-Carlo only
    bool pass = false;
    std::int64_t samples = 0;
};

/// ‖<|eta><eta|>_G − P_orbit‖_F, the normalization defect of the covariant
/// family on the orbit support; closed form or twirl estimate. rng_seed
/// drives the Monte-Carlo sampler.
ResidualReport verify_normalization(const CovariantSeed& seed, const Representation& rep,
                                    const IsotypicDecomposition& iso, NormalizationMode mode,
                                    std::int64_t n = 0,
                                    std::uint64_t rng_seed = 0x9e3779b97f4a7c15ull);

/// max over 20 sampled (g, h) of ‖U_h M(g) U_h† − M(hg)‖_F with
/// M(g) = U_g |eta><eta| U_g†.
ResidualReport verify_covariance(const CovariantSeed& seed, const Representation& rep,
                                 HaarSampler& sampler);

} // namespace covml
