#include "covml/cv_scenarios.hpp"

#include "covml/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

namespace covml {

namespace {

// evaluates one grid point per slot; results are positionally stored, so the
// outcome does not depend on the worker count
template <typename F>
void for_each_point(std::size_t count, int workers, F&& body) {
    const int n = std::max(1, workers);
    if (n == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < n; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = static_cast<std::size_t>(w); i < count; i += static_cast<std::size_t>(n))
                body(i);
        });
    for (auto& t : pool) t.join();
}

// row-major reshape of a two-mode vector: M(n1, n2) = v[n1*d + n2]
Matrix as_modes(const Vector& v, int d) {
    Matrix m(d, d);
    for (int n1 = 0; n1 < d; ++n1)
        for (int n2 = 0; n2 < d; ++n2) m(n1, n2) = v(n1 * d + n2);
    return m;
}

Vector flatten(const Matrix& m) {
    const int d = static_cast<int>(m.rows());
    Vector v(d * d);
    for (int n1 = 0; n1 < d; ++n1)
        for (int n2 = 0; n2 < d; ++n2) v(n1 * d + n2) = m(n1, n2);
    return v;
}

// (A ⊗ B) v on the n1-slow layout
Vector apply_modes(const Matrix& a, const Matrix& b, const Vector& v) {
    return flatten(a * as_modes(v, static_cast<int>(a.rows())) * b.transpose());
}

Vector two_mode_vacuum(int d) {
    Vector v = Vector::Zero(d * d);
    v(0) = 1.0;
    return v;
}

Vector pair_diagonal(int d, const std::function<cd(int)>& coeff) {
    Vector v = Vector::Zero(d * d);
    for (int n = 0; n < d; ++n) v(n * d + n) = coeff(n);
    return v;
}

} // namespace

std::vector<cd> CVScenario::default_grid(double radius) {
    std::vector<cd> grid;
    const double half = radius / std::numbers::sqrt2;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            grid.push_back(cd(-half + i * half / 2.0, -half + j * half / 2.0));
    return grid;
}

CVScenario CVScenario::identical(int cutoff, std::vector<cd> grid) {
    CVScenario s;
    s.kind = Kind::Identical;
    s.cutoff = cutoff;
    s.grid = std::move(grid);
    s.validate();
    return s;
}

CVScenario CVScenario::conjugated(int cutoff, std::vector<cd> grid) {
    CVScenario s;
    s.kind = Kind::Conjugated;
    s.cutoff = cutoff;
    s.grid = std::move(grid);
    s.validate();
    return s;
}

CVScenario CVScenario::squeezed(int cutoff, double x) {
    CVScenario s;
    s.kind = Kind::Squeezed;
    s.cutoff = cutoff;
    s.x = x;
    s.validate();
    return s;
}

void CVScenario::validate() const {
    FockSpace space(cutoff);  // checks cutoff >= 8
    for (const auto& a : grid) {
        if (std::abs(a) > space.validity_radius()) {
            std::ostringstream os;
            os << "grid: |alpha| = " << std::abs(a) << " outside the validity region "
               << space.validity_radius();
            throw validation_error(os.str());
        }
    }
    if (x < 0.0 || x >= 1.0) throw validation_error("x: squeezing weight must be in [0, 1)");
    if (kind == Kind::Squeezed && x > 0.8)
        throw validation_error("x: above 0.8 the truncation is not trustworthy");
}

ScenarioReport identical_scenario(const CVScenario& s) {
    if (s.kind != CVScenario::Kind::Identical)
        throw validation_error("identical_scenario: wrong scenario kind");
    const FockSpace space(s.cutoff);
    const int d = space.dim();

    Matrix v = beamsplitter_v(space);
    Vector psi = two_mode_vacuum(d);

    // only 2d rows of V are ever read: the diagonal ones for the correlated
    // projector family, the n1 = 0 slice for the split heterodyne one
    Matrix v_diag(d, d * d);
    for (int n = 0; n < d; ++n) v_diag.row(n) = v.row(n * d + n);
    Matrix v_top = v.topRows(d);

    ScenarioReport report;
    report.kind = "identical";
    report.cutoff = s.cutoff;

    auto densities = [&](cd delta) {
        // z = V (D(-δ) ⊗ D(-δ)) |0,0>
        Matrix disp = displacement(-delta, space);
        Vector w = apply_modes(disp, disp, psi);
        double p_m = 2.0 * std::norm((v_diag * w).sum());
        double p_alt = 2.0 * (v_top * w).squaredNorm();
        return std::make_pair(p_m, p_alt);
    };

    report.grid.resize(s.grid.size());
    std::vector<double> alt(s.grid.size());
    for_each_point(s.grid.size(), s.workers, [&](std::size_t i) {
        cd delta = s.grid[i];
        auto [p_m, p_alt] = densities(delta);
        GridPoint& pt = report.grid[i];
        pt.alpha_hat = delta;
        pt.density = p_m;
        pt.target = 2.0 * std::exp(-2.0 * std::norm(delta));
        pt.abs_err = std::abs(pt.density - pt.target);
        alt[i] = p_alt;
    });
    for (std::size_t i = 0; i < report.grid.size(); ++i) {
        report.alt_povm_max_discrepancy = std::max(
            report.alt_povm_max_discrepancy, std::abs(report.grid[i].density - alt[i]));
        if (report.grid[i].abs_err > report.grid_tolerance)
            report.flagged.push_back(static_cast<int>(i));
    }
    report.likelihood = densities(0.0).first;
    report.target_likelihood = 2.0;
    return report;
}

ScenarioReport conjugated_scenario(const CVScenario& s) {
    if (s.kind != CVScenario::Kind::Conjugated)
        throw validation_error("conjugated_scenario: wrong scenario kind");
    const FockSpace space(s.cutoff);
    const int d = space.dim();

    Vector eta = conjugated_seed_closed_form(space);
    Matrix eta_modes = as_modes(eta, d);
    Vector psi = two_mode_vacuum(d);

    ScenarioReport report;
    report.kind = "conjugated";
    report.cutoff = s.cutoff;

    auto density = [&](cd delta) {
        // representation α -> D(α) ⊗ D(α*); true value 0, estimate δ
        Matrix da = displacement(delta, space);
        Matrix db = displacement(std::conj(delta), space);
        Vector eta_hat = flatten(da * eta_modes * db.transpose());
        return std::norm(eta_hat.dot(psi));
    };

    report.grid.resize(s.grid.size());
    for_each_point(s.grid.size(), s.workers, [&](std::size_t i) {
        cd delta = s.grid[i];
        GridPoint& pt = report.grid[i];
        pt.alpha_hat = delta;
        pt.density = density(delta);
        pt.target = 4.0 * std::exp(-4.0 * std::norm(delta));
        pt.abs_err = std::abs(pt.density - pt.target);
    });
    for (std::size_t i = 0; i < report.grid.size(); ++i)
        if (report.grid[i].abs_err > report.grid_tolerance)
            report.flagged.push_back(static_cast<int>(i));
    report.likelihood = density(0.0);
    report.target_likelihood = 4.0;
    return report;
}

ScenarioReport squeezed_scenario(const CVScenario& s) {
    if (s.kind != CVScenario::Kind::Squeezed)
        throw validation_error("squeezed_scenario: wrong scenario kind");
    const FockSpace space(s.cutoff);
    const int d = space.dim();
    const double x = s.x;

    double tail = std::pow(x, 2 * (space.n_max + 1));
    if (tail > 1e-8) {
        std::ostringstream os;
        os << "squeezed: tail mass " << tail << " beyond the cutoff exceeds 1e-8";
        throw truncation_error(os.str());
    }

    Matrix v = beamsplitter_v(space);
    Vector psi = v.adjoint() * pair_diagonal(d, [&](int n) {
                     return std::sqrt(1.0 - x * x) * std::pow(x, n);
                 });
    psi /= psi.norm();
    Vector eta = std::numbers::sqrt2 *
                 (v.adjoint() * pair_diagonal(d, [](int) { return cd(1.0); }));

    ScenarioReport report;
    report.kind = "squeezed";
    report.cutoff = s.cutoff;
    report.x = x;
    report.likelihood = std::norm(eta.dot(psi));
    report.target_likelihood = 2.0 * (1.0 + x) / (1.0 - x);
    report.grid_tolerance = 1e-3 * report.target_likelihood;
    if (std::abs(report.likelihood - report.target_likelihood) > report.grid_tolerance &&
        x <= 0.6)
        report.flagged.push_back(0);
    return report;
}

Vector conjugated_seed_closed_form(const FockSpace& space) {
    return pair_diagonal(space.dim(), [](int n) { return cd(n % 2 == 0 ? 2.0 : -2.0); });
}

Vector conjugated_seed_quadrature(const FockSpace& space, int radial_order, int angular) {
    const int d = space.dim();
    // the integrand's radial factor is e^{-s/2} L_n(s) with s = r²; it has
    // decayed by s ≈ 4 n_max + 60 for every level kept
    const double r_max = std::sqrt(4.0 * space.n_max + 60.0);
    std::vector<double> rn, rw;
    gauss_legendre(radial_order, 0.0, r_max, rn, rw);

    Vector eta = Vector::Zero(d * d);
    for (int k = 0; k < angular; ++k) {
        double theta = 2.0 * std::numbers::pi * k / angular;
        cd dir = std::polar(1.0, theta);
        for (int i = 0; i < radial_order; ++i) {
            cd beta = rn[static_cast<std::size_t>(i)] * dir;
            double w = rn[static_cast<std::size_t>(i)] * rw[static_cast<std::size_t>(i)] *
                       (2.0 / angular);
            // (D(β) ⊗ 1) Σ_m |m,m> has component <n1|D(β)|n2> at (n1, n2)
            for (int n1 = 0; n1 < d; ++n1)
                for (int n2 = 0; n2 < d; ++n2)
                    eta(n1 * d + n2) += w * displacement_element(n1, n2, beta);
        }
    }
    return eta;
}

} // namespace covml
