#pragma once

#include "covml/fock.hpp"

#include <string>
#include <vector>

namespace covml {

/// Phase-space estimation scenario on a truncated two-mode Fock space.
/// Grid entries are estimate offsets relative to the true displacement.
struct CVScenario {
    enum class Kind { Identical, Conjugated, Squeezed };

    Kind kind = Kind::Identical;
    int cutoff = 40;
    std::vector<cd> grid;  // offsets alpha_hat - alpha
    double x = 0.0;        // squeezing weight, [0, 1)
    int workers = 1;       // grid points evaluated independently in parallel

    static CVScenario identical(int cutoff, std::vector<cd> grid = default_grid(1.5));
    static CVScenario conjugated(int cutoff, std::vector<cd> grid = default_grid(1.5));
    static CVScenario squeezed(int cutoff, double x);

    /// 5x5 square grid covering |offset| <= radius.
    static std::vector<cd> default_grid(double radius);

    void validate() const;
};

struct GridPoint {
    cd alpha_hat;    // offset from the true displacement
    double density = 0.0;
    double target = 0.0;
    double abs_err = 0.0;
};

struct ScenarioReport {
    std::string kind;
    int cutoff = 0;
    double x = 0.0;
    std::vector<GridPoint> grid;
    double likelihood = 0.0;
    double target_likelihood = 0.0;
    double grid_tolerance = 1e-3;
    std::vector<int> flagged;           // grid indices exceeding the tolerance
    double alt_povm_max_discrepancy = 0.0;  // identical only: M vs M-tilde

    bool within_tolerance() const { return flagged.empty(); }
};

/// Two copies of the same unknown coherent state; both optimal measurement
/// families (the correlated projector family and the split heterodyne one)
/// are evaluated and must agree on the Gaussian density 2 exp(-2|δ|²).
ScenarioReport identical_scenario(const CVScenario& s);

/// Coherent state paired with its conjugate; seed 2 Σ (-1)^n |n,n>, density
/// 4 exp(-4|δ|²).
ScenarioReport conjugated_scenario(const CVScenario& s);

/// Doubly-squeezed input; likelihood 2 (1+x)/(1-x).
ScenarioReport squeezed_scenario(const CVScenario& s);

/// Closed-form truncated seed for the conjugated pair: 2 Σ (-1)^n |n,n>.
Vector conjugated_seed_closed_form(const FockSpace& space);

/// Independent oracle for the same seed: direct two-dimensional polar
/// quadrature of the displacement-vector integral, with matrix elements in
/// closed form (no shared path with the matrix exponential).
Vector conjugated_seed_quadrature(const FockSpace& space, int radial_order = 200,
                                  int angular = 64);

} // namespace covml
