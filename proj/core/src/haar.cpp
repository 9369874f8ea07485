#include "covml/haar.hpp"

#include "covml/errors.hpp"

#include <cmath>
#include <numbers>

namespace covml {

HaarSampler::HaarSampler(GroupSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)), seed_(seed), engine_(seed) {}

double HaarSampler::uniform01() {
    // 53 mantissa bits; distribution-class-free so streams are portable
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double HaarSampler::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u = 1.0 - uniform01();  // (0, 1]
    double v = uniform01();
    double r = std::sqrt(-2.0 * std::log(u));
    double a = 2.0 * std::numbers::pi * v;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

std::uint64_t HaarSampler::uniform_index(std::uint64_t n) {
    // rejection sampling, bias-free
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

GroupElement HaarSampler::draw(const GroupSpec& spec) {
    switch (spec.kind) {
        case GroupKind::Finite:
            return GroupElement::index(
                static_cast<int>(uniform_index(static_cast<std::uint64_t>(spec.order))));
        case GroupKind::U1:
            return GroupElement::angle(2.0 * std::numbers::pi * uniform01());
        case GroupKind::SU2: {
            double w, x, y, z, n2;
            do {
                w = gaussian();
                x = gaussian();
                y = gaussian();
                z = gaussian();
                n2 = w * w + x * x + y * y + z * z;
            } while (n2 < 1e-30);
            double n = std::sqrt(n2);
            return GroupElement::quaternion({w / n, x / n, y / n, z / n});
        }
        case GroupKind::Product: {
            std::vector<GroupElement> parts;
            parts.reserve(spec.components.size());
            for (const auto& c : spec.components) parts.push_back(draw(c));
            return GroupElement::tuple(std::move(parts));
        }
    }
    throw error("unreachable");
}

GroupElement HaarSampler::next() {
    ++counter_;
    return draw(spec_);
}

std::vector<GroupElement> HaarSampler::sample(std::int64_t count) {
    if (count < 1) throw validation_error("sample: count must be >= 1");
    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) out.push_back(next());
    return out;
}

} // namespace covml
