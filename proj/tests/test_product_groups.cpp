#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "covml/errors.hpp"
#include "covml/estimation.hpp"
#include "covml/json_io.hpp"
#include "helpers.hpp"

#include <cmath>
#include <numbers>

using namespace covml;
using namespace covml::testing;

namespace {

GroupSpec u1_x_z2() { return GroupSpec::product({GroupSpec::u1(), GroupSpec::cyclic(2)}); }

// number representation on 3 levels times the two-dimensional regular
// representation of Z_2: six inequivalent one-dimensional characters
Representation product_rep() {
    GroupSpec spec = u1_x_z2();
    return Representation::outer_tensor(
        spec, {u1_number_rep(3), regular_rep(GroupSpec::cyclic(2))});
}

} // namespace

TEST_CASE("product-group representations decompose and estimate") {
    Representation rep = product_rep();
    CHECK(rep.dim() == 6);

    HaarSampler sampler(rep.spec(), 3);
    CHECK(verify_representation(rep, sampler).max_residual < 1e-10);

    IsotypicDecomposition iso = isotypic_decompose(rep);
    SUBCASE("six one-dimensional blocks") {
        REQUIRE(iso.blocks.size() == 6);
        for (const auto& blk : iso.blocks) {
            CHECK(blk.d == 1);
            CHECK(blk.m == 1);
        }
    }
    SUBCASE("commutant dimension matches the character count") {
        CHECK(compute_commutant(rep).ops.size() == 6);
    }
    SUBCASE("the optimal input state reaches L = 6") {
        auto [psi, L] = optimal_input_state(iso);
        CHECK(L == doctest::Approx(6.0));
        StateDecomposition sd = decompose_state(psi, iso);
        CHECK(optimal_likelihood(sd, iso) == doctest::Approx(6.0).epsilon(1e-10));
        CHECK(orbit_dimension(sd, iso) == 6);
    }
    SUBCASE("covariance of the optimal family under sampled product elements") {
        auto [psi, L] = optimal_input_state(iso);
        CovariantSeed seed = optimal_seed(decompose_state(psi, iso), iso);
        HaarSampler cov_sampler(rep.spec(), 11);
        for (int k = 0; k < 10; ++k) {
            GroupElement g = cov_sampler.next(), h = cov_sampler.next();
            double p1 = likelihood_density(seed, psi, g, g, rep);
            GroupElement hg = rep.spec().compose(h, g);
            double p2 = likelihood_density(seed, psi, hg, hg, rep);
            CHECK(std::abs(p1 - p2) < 1e-9);
        }
    }
}

TEST_CASE("product representations load from documents") {
    GroupSpec spec = io::load_group_spec_text(
        R"({"kind":"product","components":[{"kind":"u1"},
            {"kind":"finite","order":2,"table":[[0,1],[1,0]]}]})");

    SUBCASE("tensor composition") {
        io::json doc = {
            {"composition", "tensor"},
            {"components",
             io::json::array(
                 {{{"dimension", 2},
                   {"generators", io::json::array({io::json::array(
                        {io::json::array({io::json::array({0.0, 0.0}), io::json::array({0.0, 0.0})}),
                         io::json::array({io::json::array({0.0, 0.0}),
                                          io::json::array({1.0, 0.0})})})})}},
                  {{"dimension", 2},
                   {"matrices",
                    io::json::array(
                        {io::json::array({io::json::array({io::json::array({1.0, 0.0}),
                                                           io::json::array({0.0, 0.0})}),
                                          io::json::array({io::json::array({0.0, 0.0}),
                                                           io::json::array({1.0, 0.0})})}),
                         io::json::array({io::json::array({io::json::array({0.0, 0.0}),
                                                           io::json::array({1.0, 0.0})}),
                                          io::json::array({io::json::array({1.0, 0.0}),
                                                           io::json::array({0.0, 0.0})})})})}}})}};
        Representation rep = io::load_representation(doc, spec);
        CHECK(rep.dim() == 4);
        // element (theta, flip): evaluates to diag-phase ⊗ swap
        GroupElement g = GroupElement::tuple(
            {GroupElement::angle(std::numbers::pi), GroupElement::index(1)});
        Matrix u = rep.evaluate(g);
        CHECK(std::abs(u(0, 1) - cd(1.0, 0.0)) < 1e-12);  // swap in the Z2 slot
        CHECK(std::abs(u(2, 3) - cd(-1.0, 0.0)) < 1e-12);  // phase from the u1 slot
    }
    SUBCASE("direct-sum composition") {
        io::json doc = {
            {"composition", "direct_sum"},
            {"components",
             io::json::array(
                 {{{"dimension", 1},
                   {"generators",
                    io::json::array({io::json::array(
                        {io::json::array({io::json::array({1.0, 0.0})})})})}},
                  {{"dimension", 1},
                   {"matrices",
                    io::json::array({io::json::array({io::json::array(
                                         {io::json::array({1.0, 0.0})})}),
                                     io::json::array({io::json::array(
                                         {io::json::array({-1.0, 0.0})})})})}}})}};
        Representation rep = io::load_representation(doc, spec);
        CHECK(rep.dim() == 2);
        GroupElement g = GroupElement::tuple(
            {GroupElement::angle(std::numbers::pi / 2.0), GroupElement::index(1)});
        Matrix u = rep.evaluate(g);
        CHECK(std::abs(u(0, 0) - cd(0.0, 1.0)) < 1e-12);   // e^{i theta} block
        CHECK(std::abs(u(1, 1) - cd(-1.0, 0.0)) < 1e-12);  // sign character block
    }
    SUBCASE("component count mismatch is rejected") {
        io::json doc = {{"composition", "tensor"}, {"components", io::json::array()}};
        CHECK_THROWS_AS(io::load_representation(doc, spec), validation_error);
    }
}

TEST_CASE("decomposition JSON round trip preserves the basis") {
    Representation rep = regular_rep(s3_spec());
    IsotypicDecomposition iso = isotypic_decompose(rep);
    io::json doc = io::decomposition_to_json(iso);
    IsotypicDecomposition back = io::decomposition_from_json(doc);
    CHECK(back.dim == iso.dim);
    REQUIRE(back.blocks.size() == iso.blocks.size());
    CHECK((back.W - iso.W).norm() == 0.0);  // numbers survive serialization exactly
    for (std::size_t b = 0; b < iso.blocks.size(); ++b) {
        CHECK(back.blocks[b].d == iso.blocks[b].d);
        CHECK(back.blocks[b].m == iso.blocks[b].m);
        CHECK((back.blocks[b].basis - iso.blocks[b].basis).norm() == 0.0);
    }
    SUBCASE("tampered W is rejected") {
        io::json bad = doc;
        bad["W"][0][0] = io::json::array({0.5, 0.0});
        CHECK_THROWS_AS(io::decomposition_from_json(bad), validation_error);
    }
}
