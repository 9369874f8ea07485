#pragma once

#include "covml/isotypic.hpp"

#include <string>
#include <vector>

namespace covml {

/// Per-block Schmidt data of a pure state. The amplitude c is kept real and
/// nonnegative; phases live in the Schmidt vectors (the seed vector below is
/// invariant under this gauge choice).
struct SchmidtBlock {
    cd c = 0.0;              // amplitude of the block component
    int r = 0;               // Schmidt rank (values above 1e-12)
    Eigen::VectorXd lambda;  // Schmidt coefficients, descending, sum 1
    Matrix left;             // d x r, orthonormal columns
    Matrix right;            // m x r, orthonormal columns
};

struct StateDecomposition {
    std::vector<SchmidtBlock> blocks;  // aligned with IsotypicDecomposition::blocks

    /// Rebuilds the state in the original basis.
    Vector reconstruct(const IsotypicDecomposition& iso) const;
};

/// Seed operator data of a covariant measurement family M(g) = U_g Ξ U_g†
/// with Ξ = |eta><eta| on the orbit support.
struct CovariantSeed {
    enum class Origin { Analytic, SqrtMeasurement, NumericOracle };

    Vector eta;               // in the original basis
    Matrix orbit_projector;   // projector onto span of the orbit
    Origin origin = Origin::Analytic;
};

StateDecomposition decompose_state(const Vector& psi, const IsotypicDecomposition& iso);

/// Theorem-optimal seed: |eta> = ⊕_mu sqrt(d_mu) e^{i arg c_mu} Σ_m |psi_m><phi_m|.
/// Blocks with c_mu = 0 contribute nothing; the measurement is specified only
/// on the orbit support.
CovariantSeed optimal_seed(const StateDecomposition& sd, const IsotypicDecomposition& iso);

/// (Σ_mu |c_mu| Σ_m sqrt(lambda_m d_mu))².
double optimal_likelihood(const StateDecomposition& sd, const IsotypicDecomposition& iso);

/// p(g_hat | g) = <psi_g| U_ghat |eta><eta| U_ghat† |psi_g> with psi_g = U_g psi.
double likelihood_density(const CovariantSeed& seed, const Vector& psi, const GroupElement& g,
                          const GroupElement& g_hat, const Representation& rep);

/// Σ_mu d_mu r_mu, the dimension of the span of the orbit.
int orbit_dimension(const StateDecomposition& sd, const IsotypicDecomposition& iso);

/// Best input state: maximally entangled across every block, amplitudes
/// proportional to sqrt(d_mu k_mu) with k_mu = min(d_mu, m_mu). Returns the
/// state and its likelihood L = Σ_mu d_mu k_mu.
std::pair<Vector, double> optimal_input_state(const IsotypicDecomposition& iso,
                                              const std::vector<double>& phases = {});

struct SaturationCertificate {
    bool saturates = false;
    std::vector<std::string> violations;
};

/// Whether the state attains likelihood = orbit dimension: |c_mu| =
/// sqrt(d_mu r_mu / d_Psi) and flat Schmidt spectra, each within 1e-8.
SaturationCertificate state_saturates_bound(const StateDecomposition& sd,
                                            const IsotypicDecomposition& iso);

/// Base-2 von Neumann entropy of the group-averaged state (pure inputs):
/// the twirl has eigenvalue |c_mu|² lambda_m / d_mu with multiplicity d_mu.
double holevo_chi(const StateDecomposition& sd, const IsotypicDecomposition& iso);

/// Square-root-measurement seed F^{-1/2}|psi> from the frame operator
/// F = <|psi><psi|>_G; coincides with optimal_seed's vector.
CovariantSeed sqrt_measurement_seed(const Vector& psi, const IsotypicDecomposition& iso);

struct ReferenceRequirements {
    int d_R_bar = 1;       // smallest reference dimension that saturates
    long long L_max = 0;   // Σ_mu d_mu², the saturated likelihood
    std::vector<std::pair<int, long long>> L_prime_table;  // d_R -> L'(d_R), d_R = 1..d_R_bar+1

    long long L_prime(int d_R) const;

private:
    friend ReferenceRequirements reference_requirements(const IsotypicDecomposition&);
    std::vector<std::pair<int, int>> blocks_;  // (d, m)
};

/// How much an external reference system can help: d_R_bar = max ceil(d/m),
/// L'(d_R) = Σ d_mu min(d_mu, m_mu d_R), L_max = Σ d_mu².
ReferenceRequirements reference_requirements(const IsotypicDecomposition& iso);

/// Scalar summary of one estimation scenario, serialized by the CLI.
struct EstimationReport {
    double likelihood = 0.0;
    int orbit_dim = 0;
    double chi_bits = 0.0;
    long long L = 0;
    long long L_max = 0;
    int d_R_bar = 1;
    double residual_normalization = 0.0;
    double residual_covariance = 0.0;
    double residual_sqrt_equiv = 0.0;
    bool orbit_support_only = true;  // no measurement completion off the orbit support
    std::string provenance = "analytic";
};

} // namespace covml
