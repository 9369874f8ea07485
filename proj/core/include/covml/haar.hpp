#pragma once

#include "covml/group.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace covml {

/// Deterministic Haar-measure sampler. Two samplers built from the same
/// (spec, seed) produce the same element stream. Finite groups draw uniform
/// indices, U(1) a uniform angle, SU(2) a normalized 4-dimensional Gaussian
/// (uniform on S^3), products sample componentwise.
///
/// Not thread-safe; use one sampler per thread with distinct seeds.
class HaarSampler {
public:
    HaarSampler(GroupSpec spec, std::uint64_t seed);

    GroupElement next();
    std::vector<GroupElement> sample(std::int64_t count);

    const GroupSpec& spec() const { return spec_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

private:
    GroupElement draw(const GroupSpec& spec);
    double uniform01();          // [0, 1)
    double gaussian();           // standard normal, Box-Muller
    std::uint64_t uniform_index(std::uint64_t n);

    GroupSpec spec_;
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace covml
