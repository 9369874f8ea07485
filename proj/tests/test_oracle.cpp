#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "covml/errors.hpp"
#include "covml/json_io.hpp"
#include "covml/oracle.hpp"
#include "helpers.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace covml;
using namespace covml::testing;

namespace {

Vector basis_state(int dim, int k) {
    Vector v = Vector::Zero(dim);
    v(k) = 1.0;
    return v;
}

const double kAntiparallel = 2.0 + std::sqrt(3.0);

} // namespace

TEST_CASE("maximize_likelihood_numeric attains the analytic optimum") {
    Representation rep = spin_pair_rep();
    IsotypicDecomposition iso = isotypic_decompose(rep);

    SUBCASE("anti-parallel spins reach (1+sqrt(3))^2/2 within 1e-4") {
        Vector ud = basis_state(4, 1);
        OracleResult r = maximize_likelihood_numeric(ud * ud.adjoint(), iso, 1, 5000);
        CHECK(r.trace.conclusive);
        CHECK(r.value == doctest::Approx(kAntiparallel).epsilon(1e-4 / kAntiparallel));
        CHECK(r.value <= kAntiparallel + 1e-6);
    }
    SUBCASE("parallel spins reach 3 within 1e-4") {
        Vector uu = basis_state(4, 0);
        OracleResult r = maximize_likelihood_numeric(uu * uu.adjoint(), iso, 1, 5000);
        CHECK(r.value == doctest::Approx(3.0).epsilon(1e-4 / 3.0));
        CHECK(r.value <= 3.0 + 1e-6);
    }
    SUBCASE("maximally mixed state on Z_3: the objective is pinned to 1") {
        Representation z3 = regular_rep(GroupSpec::cyclic(3));
        IsotypicDecomposition iso3 = isotypic_decompose(z3);
        Matrix mixed = Matrix::Identity(3, 3) / 3.0;
        OracleResult r = maximize_likelihood_numeric(mixed, iso3, 1, 500);
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-4));
    }
    SUBCASE("constraint residual certified below 1e-8") {
        Vector ud = basis_state(4, 1);
        OracleResult r = maximize_likelihood_numeric(ud * ud.adjoint(), iso, 1, 1000);
        CHECK(r.trace.final_constraint_residual <= 1e-8);
        // the returned operator really is positive with the right block traces
        Eigen::SelfAdjointEigenSolver<Matrix> es(r.xi);
        CHECK(es.eigenvalues().minCoeff() >= -1e-9);
    }
}

TEST_CASE("oracle never beats theory") {
    std::mt19937_64 rng(101);
    for (Representation rep : {spin_pair_rep(), regular_rep(GroupSpec::cyclic(3)),
                               regular_rep(GroupSpec::cyclic(5)), regular_rep(s3_spec())}) {
        IsotypicDecomposition iso = isotypic_decompose(rep);
        for (int trial = 0; trial < 8; ++trial) {
            Vector psi = random_unit_state(iso.dim, rng);
            double analytic = optimal_likelihood(decompose_state(psi, iso), iso);
            OracleResult r = maximize_likelihood_numeric(psi * psi.adjoint(), iso, 1, 800);
            CHECK(r.value <= analytic + 1e-6);
        }
    }
}

TEST_CASE("oracle attains theory on small instances at 5000 iterations") {
    std::mt19937_64 rng(55);
    Representation rep = regular_rep(s3_spec());
    IsotypicDecomposition iso = isotypic_decompose(rep);
    for (int trial = 0; trial < 5; ++trial) {
        Vector psi = random_unit_state(6, rng);
        double analytic = optimal_likelihood(decompose_state(psi, iso), iso);
        OracleResult r = maximize_likelihood_numeric(psi * psi.adjoint(), iso, 1, 5000);
        CHECK(r.value >= analytic - 1e-3);
    }
}

TEST_CASE("pure states dominate mixtures") {
    Representation rep = spin_pair_rep();
    IsotypicDecomposition iso = isotypic_decompose(rep);
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 5; ++trial) {
        Vector a = random_unit_state(4, rng);
        Vector b = random_unit_state(4, rng);
        Matrix rho = 0.4 * a * a.adjoint() + 0.6 * b * b.adjoint();
        double best_pure = std::max(optimal_likelihood(decompose_state(a, iso), iso),
                                    optimal_likelihood(decompose_state(b, iso), iso));
        OracleResult r = maximize_likelihood_numeric(rho, iso, 1, 2000);
        CHECK(r.value <= best_pure + 1e-6);
    }
}

TEST_CASE("ascent traces are deterministic") {
    Representation rep = spin_pair_rep();
    IsotypicDecomposition iso = isotypic_decompose(rep);
    Vector ud = basis_state(4, 1);
    OracleResult a = maximize_likelihood_numeric(ud * ud.adjoint(), iso, 3, 400);
    OracleResult b = maximize_likelihood_numeric(ud * ud.adjoint(), iso, 3, 400);
    REQUIRE(a.trace.objective.size() == b.trace.objective.size());
    for (std::size_t i = 0; i < a.trace.objective.size(); ++i)
        CHECK(a.trace.objective[i] == b.trace.objective[i]);
    CHECK(a.value == b.value);
}

TEST_CASE("trace exports to CSV") {
    Representation rep = regular_rep(GroupSpec::cyclic(3));
    IsotypicDecomposition iso = isotypic_decompose(rep);
    Vector psi = basis_state(3, 0);
    OracleResult r = maximize_likelihood_numeric(psi * psi.adjoint(), iso, 1, 10);
    std::string csv = io::ascent_trace_to_csv(r.trace);
    CHECK(csv.find("iteration,objective,residual") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);  // header + 10 iterates
}

TEST_CASE("verify_normalization") {
    Representation rep = spin_pair_rep();
    IsotypicDecomposition iso = isotypic_decompose(rep);
    Vector ud = basis_state(4, 1);
    CovariantSeed seed = optimal_seed(decompose_state(ud, iso), iso);

    SUBCASE("closed form residual vanishes for the analytic seed") {
        ResidualReport r = verify_normalization(seed, rep, iso, NormalizationMode::ClosedForm);
        CHECK(r.residual <= 1e-12);
        CHECK(r.pass);
    }
    SUBCASE("monte carlo residual within four standard errors") {
        ResidualReport r =
            verify_normalization(seed, rep, iso, NormalizationMode::MonteCarlo, 100000);
        CHECK(r.residual <= 4.0 * r.std_error);
        CHECK(r.pass);
    }
    SUBCASE("a seed scaled by 1.1 fails with residual 0.21 |P|") {
        CovariantSeed corrupted = seed;
        corrupted.eta *= 1.1;
        ResidualReport r =
            verify_normalization(corrupted, rep, iso, NormalizationMode::ClosedForm);
        double expected = 0.21 * corrupted.orbit_projector.norm();
        CHECK(r.residual == doctest::Approx(expected).epsilon(1e-6));
        CHECK_FALSE(r.pass);
    }
    SUBCASE("exact finite-group twirl mode") {
        Representation z3 = regular_rep(GroupSpec::cyclic(3));
        IsotypicDecomposition iso3 = isotypic_decompose(z3);
        auto [psi, L] = optimal_input_state(iso3);
        CovariantSeed s3seed = optimal_seed(decompose_state(psi, iso3), iso3);
        ResidualReport r =
            verify_normalization(s3seed, z3, iso3, NormalizationMode::MonteCarlo, 10);
        CHECK(r.residual <= 1e-12);
        CHECK(r.pass);
    }
}

TEST_CASE("verify_covariance") {
    Representation rep = spin_pair_rep();
    IsotypicDecomposition iso = isotypic_decompose(rep);
    Vector ud = basis_state(4, 1);
    CovariantSeed seed = optimal_seed(decompose_state(ud, iso), iso);

    SUBCASE("analytic seeds pass") {
        HaarSampler sampler(rep.spec(), 31);
        ResidualReport r = verify_covariance(seed, rep, sampler);
        CHECK(r.residual <= 1e-9);
        CHECK(r.pass);
    }
    SUBCASE("conjugation-defined families are covariant for any seed") {
        Representation z3 = regular_rep(GroupSpec::cyclic(3));
        CovariantSeed delta;
        delta.eta = basis_state(3, 0);
        delta.orbit_projector = Matrix::Identity(3, 3);
        HaarSampler sampler(z3.spec(), 5);
        ResidualReport r = verify_covariance(delta, z3, sampler);
        CHECK(r.residual <= 1e-9);
        CHECK(r.pass);
    }
    SUBCASE("a non-homomorphic evaluator fails") {
        GroupSpec z3 = GroupSpec::cyclic(3);
        std::vector<Matrix> mats;
        for (int g = 0; g < 3; ++g)
            mats.push_back(regular_rep(z3).evaluate(GroupElement::index(g)));
        // replace one matrix by the Fourier unitary: U(1)U(1) != U(2) now
        Matrix dft(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                dft(i, j) = std::polar(1.0 / std::sqrt(3.0), 2.0 * std::numbers::pi * i * j / 3.0);
        mats[2] = dft;
        Representation faulty = Representation::finite_unchecked(z3, std::move(mats));
        CovariantSeed delta;
        delta.eta = basis_state(3, 0);
        delta.orbit_projector = Matrix::Identity(3, 3);
        HaarSampler sampler(z3, 5);
        ResidualReport r = verify_covariance(delta, faulty, sampler);
        CHECK(r.residual > 1e-3);
        CHECK_FALSE(r.pass);
    }
}
