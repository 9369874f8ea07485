#pragma once

#include "covml/linalg.hpp"

#include <functional>

namespace covml {

/// Single-mode Fock space truncated at level N_max (dimension N_max + 1).
struct FockSpace {
    int n_max = 0;

    explicit FockSpace(int n_max_levels);
    int dim() const { return n_max + 1; }
    /// Displacements are trusted for |alpha| up to this radius.
    double validity_radius() const { return n_max / 8.0; }
};

/// Truncated annihilation operator a.
Matrix annihilation(const FockSpace& space);

/// Truncated displacement D(alpha) = exp(alpha a† − alpha* a), scaling-and-
/// squaring on the dense generator. Throws range_error outside the validity
/// region.
Matrix displacement(cd alpha, const FockSpace& space);

/// Matrix element <m|D(alpha)|n> of the untruncated displacement operator,
/// evaluated in closed form (associated Laguerre). Independent of the matrix
/// exponential path; used by quadrature oracles.
cd displacement_element(int m, int n, cd alpha);

/// Two-mode 50/50 mixer V = exp[−π/4 (a1† a2 − a1 a2†)] on the tensor index
/// n1*(N_max+1) + n2. The generator conserves total particle number, so the
/// exponential is taken exactly on each number sector.
Matrix beamsplitter_v(const FockSpace& space);

/// Residual of the mixing relation D(alpha)⊗D(alpha) = V†(D(√2 alpha) ⊗ 1)V,
/// restricted to total level <= N_max/2 on both sides (the truncation
/// boundary breaks the identity on the top levels by construction).
double mixer_intertwining_residual(const FockSpace& space, cd alpha);

/// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int order, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

/// Formal dimension (∫ d²α/π |<psi|U(α)|phi>|²)^{-1} by polar quadrature:
/// Gauss-Legendre radially on [0, N_max/8], 64-point trapezoid angularly.
/// psi and phi default to the vacuum. Throws truncation_error when the
/// integrand has not decayed at the radial cutoff.
double formal_dimension_numeric(const std::function<Matrix(cd)>& evaluator,
                                const FockSpace& space, int radial_order,
                                const Vector& psi = Vector(), const Vector& phi = Vector());

} // namespace covml
