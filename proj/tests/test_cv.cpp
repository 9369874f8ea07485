#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "covml/cv_scenarios.hpp"
#include "covml/errors.hpp"
#include "covml/fock.hpp"

#include <cmath>
#include <numbers>

using namespace covml;

namespace {

Matrix exact_displacement(cd beta, int dim) {
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) m(r, c) = displacement_element(r, c, beta);
    return m;
}

double max_grid_error(const ScenarioReport& report) {
    double m = 0.0;
    for (const auto& pt : report.grid) m = std::max(m, pt.abs_err);
    return m;
}

} // namespace

TEST_CASE("displacement") {
    FockSpace space(40);
    SUBCASE("alpha = 0 is the identity") {
        CHECK((displacement(0.0, space) - Matrix::Identity(41, 41)).norm() < 1e-14);
    }
    SUBCASE("vacuum overlap matches the coherent closed form") {
        Matrix d = displacement(1.0, space);
        CHECK(std::abs(d(0, 0).real() - std::exp(-0.5)) < 1e-8);
        CHECK(std::abs(d(0, 0).imag()) < 1e-12);
    }
    SUBCASE("D(alpha) D(-alpha) = 1") {
        cd alpha(0.7, 0.3);
        Matrix prod = displacement(alpha, space) * displacement(-alpha, space);
        CHECK((prod - Matrix::Identity(41, 41)).norm() < 1e-8);
    }
    SUBCASE("outside the validity region is a range error") {
        CHECK_THROWS_AS(displacement(6.0, space), truncation_error);
    }
    SUBCASE("matrix exponential agrees with the closed-form elements") {
        cd alpha(0.4, -0.9);
        Matrix viaexp = displacement(alpha, space);
        Matrix viaformula = exact_displacement(alpha, 41);
        // compare on the lower half of the levels, where truncation is inert
        CHECK((viaexp - viaformula).topLeftCorner(20, 20).norm() < 1e-10);
    }
    SUBCASE("cutoffs below 8 are rejected") {
        CHECK_THROWS_AS(FockSpace(5), validation_error);
    }
}

TEST_CASE("beamsplitter_v") {
    FockSpace space(40);
    Matrix v = beamsplitter_v(space);
    SUBCASE("unitary") { CHECK(unitarity_defect(v) < 1e-10); }
    SUBCASE("vacuum invariance") {
        Vector vac = Vector::Zero(41 * 41);
        vac(0) = 1.0;
        CHECK((v * vac - vac).norm() < 1e-10);
    }
    SUBCASE("number conservation") {
        // |1,0> must stay inside the single-quantum sector
        Vector in = Vector::Zero(41 * 41);
        in(1 * 41 + 0) = 1.0;
        Vector out = v * in;
        for (int n1 = 0; n1 < 41; ++n1)
            for (int n2 = 0; n2 < 41; ++n2)
                if (n1 + n2 != 1) CHECK(std::abs(out(n1 * 41 + n2)) < 1e-14);
    }
    SUBCASE("mixing relation against the sqrt(2)-displaced single mode") {
        CHECK(mixer_intertwining_residual(space, 0.5) < 1e-6);
        CHECK(mixer_intertwining_residual(space, cd(0.3, 0.8)) < 1e-6);
    }
}

TEST_CASE("formal_dimension_numeric") {
    FockSpace space(40);
    auto doubled = [](cd a) { return exact_displacement(std::sqrt(2.0) * a, 41); };
    auto plain = [](cd a) { return exact_displacement(a, 41); };

    SUBCASE("the sqrt(2)-displaced irrep has formal dimension 2") {
        CHECK(formal_dimension_numeric(doubled, space, 80) == doctest::Approx(2.0).epsilon(5e-4));
    }
    SUBCASE("the plain displacement has formal dimension 1") {
        CHECK(formal_dimension_numeric(plain, space, 80) == doctest::Approx(1.0).epsilon(1e-3));
    }
    SUBCASE("independent of the matrix-element vectors") {
        Vector one = Vector::Zero(41);
        one(1) = 1.0;
        double d = formal_dimension_numeric(doubled, space, 80, one);
        CHECK(d == doctest::Approx(2.0).epsilon(1e-3));
    }
    SUBCASE("a non-decaying integrand is flagged as truncation error") {
        auto constant = [](cd) { return Matrix::Identity(41, 41); };
        CHECK_THROWS_AS(formal_dimension_numeric(constant, space, 20), truncation_error);
    }
}

TEST_CASE("identical coherent pair") {
    ScenarioReport report = identical_scenario(CVScenario::identical(40));
    SUBCASE("likelihood 2 and Gaussian density 2 exp(-2|d|^2)") {
        CHECK(report.likelihood == doctest::Approx(2.0).epsilon(5e-4));
        CHECK(max_grid_error(report) < 1e-3);
        CHECK(report.within_tolerance());
    }
    SUBCASE("the two optimal measurement families agree on the density") {
        CHECK(report.alt_povm_max_discrepancy < 1e-3);
    }
    SUBCASE("named density values") {
        // delta = 0 -> 2, |delta| = 1 -> 2 e^{-2}
        CVScenario s = CVScenario::identical(40, {cd(0.0, 0.0), cd(1.0, 0.0)});
        ScenarioReport r = identical_scenario(s);
        CHECK(r.grid[0].density == doctest::Approx(2.0).epsilon(1e-6));
        CHECK(r.grid[1].density == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-6));
    }
}

TEST_CASE("conjugated coherent pair") {
    ScenarioReport report = conjugated_scenario(CVScenario::conjugated(40));
    SUBCASE("likelihood 4 and Gaussian density 4 exp(-4|d|^2)") {
        CHECK(report.likelihood == doctest::Approx(4.0).epsilon(2.5e-4));
        CHECK(max_grid_error(report) < 1e-3);
        CHECK(report.within_tolerance());
    }
    SUBCASE("named density values") {
        CVScenario s = CVScenario::conjugated(40, {cd(0.0, 0.0), cd(1.0, 0.0)});
        ScenarioReport r = conjugated_scenario(s);
        CHECK(r.grid[0].density == doctest::Approx(4.0).epsilon(1e-6));
        CHECK(r.grid[1].density == doctest::Approx(4.0 * std::exp(-4.0)).epsilon(1e-6));
    }
    SUBCASE("truncated seed matches the quadrature oracle at cutoff 20") {
        FockSpace f20(20);
        Vector closed = conjugated_seed_closed_form(f20);
        Vector oracle = conjugated_seed_quadrature(f20);
        CHECK((closed - oracle).norm() < 1e-2);
    }
}

TEST_CASE("squeezed pair") {
    SUBCASE("x = 0 recovers the identical-state likelihood 2") {
        ScenarioReport r = squeezed_scenario(CVScenario::squeezed(40, 0.0));
        CHECK(r.likelihood == doctest::Approx(2.0).epsilon(1e-9));
    }
    SUBCASE("x = 0.5 gives 6 within 0.006") {
        ScenarioReport r = squeezed_scenario(CVScenario::squeezed(40, 0.5));
        CHECK(std::abs(r.likelihood - 6.0) < 0.006);
    }
    SUBCASE("x = 0.6 gives 8 within 0.008") {
        ScenarioReport r = squeezed_scenario(CVScenario::squeezed(40, 0.6));
        CHECK(std::abs(r.likelihood - 8.0) < 0.008);
    }
    SUBCASE("likelihood is monotone increasing in x") {
        double prev = 0.0;
        for (double x : {0.0, 0.15, 0.3, 0.45, 0.6}) {
            ScenarioReport r = squeezed_scenario(CVScenario::squeezed(40, x));
            CHECK(r.likelihood > prev);
            prev = r.likelihood;
        }
    }
    SUBCASE("x too large for the cutoff raises a truncation error") {
        CHECK_THROWS_AS(squeezed_scenario(CVScenario::squeezed(40, 0.8)), truncation_error);
    }
    SUBCASE("x outside [0,1) is invalid") {
        CHECK_THROWS_AS(CVScenario::squeezed(40, 1.0), validation_error);
    }
}

TEST_CASE("scenario invariants") {
    SUBCASE("cutoff convergence: 30 vs 40 agree within the reported tolerance") {
        for (auto make : {+[](int c) { return identical_scenario(CVScenario::identical(c)); },
                          +[](int c) { return conjugated_scenario(CVScenario::conjugated(c)); }}) {
            ScenarioReport a = make(30);
            ScenarioReport b = make(40);
            CHECK(std::abs(a.likelihood - b.likelihood) < a.grid_tolerance);
            for (std::size_t i = 0; i < a.grid.size(); ++i)
                CHECK(std::abs(a.grid[i].density - b.grid[i].density) < a.grid_tolerance);
        }
        ScenarioReport s30 = squeezed_scenario(CVScenario::squeezed(30, 0.5));
        ScenarioReport s40 = squeezed_scenario(CVScenario::squeezed(40, 0.5));
        CHECK(std::abs(s30.likelihood - s40.likelihood) < s30.grid_tolerance);
    }
    SUBCASE("conjugated pairs always beat identical pairs") {
        for (int cutoff : {30, 40}) {
            double ident = identical_scenario(CVScenario::identical(cutoff)).likelihood;
            double conj = conjugated_scenario(CVScenario::conjugated(cutoff)).likelihood;
            CHECK(conj > ident);
        }
    }
    SUBCASE("densities integrate to one against the invariant measure") {
        // polar quadrature of p(d) over |d| <= 3
        std::vector<double> rn, rw;
        gauss_legendre(24, 0.0, 3.0, rn, rw);
        const int angular = 32;
        for (int kind = 0; kind < 2; ++kind) {
            std::vector<cd> grid;
            for (int a = 0; a < angular; ++a)
                for (std::size_t i = 0; i < rn.size(); ++i)
                    grid.push_back(std::polar(rn[i], 2.0 * std::numbers::pi * a / angular));
            CVScenario s = kind == 0 ? CVScenario::identical(40, grid)
                                     : CVScenario::conjugated(40, grid);
            ScenarioReport r =
                kind == 0 ? identical_scenario(s) : conjugated_scenario(s);
            double integral = 0.0;
            std::size_t at = 0;
            for (int a = 0; a < angular; ++a)
                for (std::size_t i = 0; i < rn.size(); ++i, ++at)
                    integral += r.grid[at].density * rn[i] * rw[i] * (2.0 / angular);
            CHECK(std::abs(integral - 1.0) < 2e-2);
        }
    }
    SUBCASE("densities depend only on the offset: nonzero true displacement") {
        // direct construction of p(a_hat | a) at a != 0 for both pairs,
        // compared against the offset-grid report
        FockSpace space(40);
        const int d = space.dim();
        cd alpha(0.4, 0.2), delta(0.5, -0.3);
        auto two_mode = [&](const Matrix& a, const Matrix& b, const Vector& v) {
            Matrix page(d, d);
            for (int n1 = 0; n1 < d; ++n1)
                for (int n2 = 0; n2 < d; ++n2) page(n1, n2) = v(n1 * d + n2);
            Matrix out = a * page * b.transpose();
            Vector w(d * d);
            for (int n1 = 0; n1 < d; ++n1)
                for (int n2 = 0; n2 < d; ++n2) w(n1 * d + n2) = out(n1, n2);
            return w;
        };
        Vector vac = Vector::Zero(d * d);
        vac(0) = 1.0;

        // identical pair: bra from the correlated projector family at a_hat
        Matrix v = beamsplitter_v(space);
        Matrix da = displacement(alpha, space);
        Matrix dhat = displacement(alpha + delta, space);
        Vector state = two_mode(da, da, vac);
        Vector z = v * two_mode(dhat.adjoint(), dhat.adjoint(), state);
        cd diag_sum = 0.0;
        for (int n = 0; n < d; ++n) diag_sum += z(n * d + n);
        double p_direct = 2.0 * std::norm(diag_sum);
        ScenarioReport ref = identical_scenario(CVScenario::identical(40, {delta}));
        CHECK(p_direct == doctest::Approx(ref.grid[0].density).epsilon(1e-9));

        // conjugated pair: second mode carries the conjugated parameter
        Vector eta = conjugated_seed_closed_form(space);
        Matrix db = displacement(std::conj(alpha), space);
        Matrix dbhat = displacement(std::conj(alpha + delta), space);
        Vector state_c = two_mode(da, db, vac);
        Vector eta_hat = two_mode(dhat, dbhat, eta);
        double p_conj = std::norm(eta_hat.dot(state_c));
        ScenarioReport refc = conjugated_scenario(CVScenario::conjugated(40, {delta}));
        CHECK(p_conj == doctest::Approx(refc.grid[0].density).epsilon(1e-9));
    }
    SUBCASE("the conjugated density is twice as narrow as the identical one") {
        // least-squares slope of -log(p/p0) against |d|^2 along the real axis
        auto width = [](auto make_report, auto make_scenario) {
            std::vector<cd> grid;
            for (double d = 0.1; d <= 0.8; d += 0.1) grid.push_back(cd(d, 0.0));
            ScenarioReport r = make_report(make_scenario(40, grid));
            double p0 = r.likelihood;
            double sxx = 0.0, sxy = 0.0;
            for (const auto& pt : r.grid) {
                double x = std::norm(pt.alpha_hat);
                double y = -std::log(pt.density / p0);
                sxx += x * x;
                sxy += x * y;
            }
            return sxy / sxx;  // decay rate; variance ~ 1/rate
        };
        double rate_ident = width(identical_scenario, CVScenario::identical);
        double rate_conj = width(conjugated_scenario, CVScenario::conjugated);
        CHECK(rate_conj / rate_ident == doctest::Approx(2.0).epsilon(0.02));
    }
}
