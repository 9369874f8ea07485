#include "covml/group.hpp"

#include "covml/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace covml {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    return t;
}
} // namespace

std::string to_string(GroupKind k) {
    switch (k) {
        case GroupKind::Finite: return "finite";
        case GroupKind::U1: return "u1";
        case GroupKind::SU2: return "su2";
        case GroupKind::Product: return "product";
    }
    return "?";
}

double Quaternion::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Quaternion Quaternion::operator*(const Quaternion& o) const {
    return {w * o.w - x * o.x - y * o.y - z * o.z,
            w * o.x + x * o.w + y * o.z - z * o.y,
            w * o.y - x * o.z + y * o.w + z * o.x,
            w * o.z + x * o.y - y * o.x + z * o.w};
}

GroupSpec GroupSpec::finite(std::vector<std::vector<int>> table) {
    GroupSpec s;
    s.kind = GroupKind::Finite;
    s.order = static_cast<int>(table.size());
    s.table = std::move(table);
    s.validate();
    return s;
}

GroupSpec GroupSpec::u1() {
    GroupSpec s;
    s.kind = GroupKind::U1;
    return s;
}

GroupSpec GroupSpec::su2() {
    GroupSpec s;
    s.kind = GroupKind::SU2;
    return s;
}

GroupSpec GroupSpec::product(std::vector<GroupSpec> components) {
    GroupSpec s;
    s.kind = GroupKind::Product;
    s.components = std::move(components);
    s.validate();
    return s;
}

GroupSpec GroupSpec::cyclic(int n) {
    if (n < 1) throw validation_error("cyclic: order must be positive");
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
    return finite(std::move(table));
}

bool GroupSpec::is_lie() const {
    if (kind == GroupKind::U1 || kind == GroupKind::SU2) return true;
    if (kind == GroupKind::Product) {
        for (const auto& c : components)
            if (c.is_lie()) return true;
    }
    return false;
}

void GroupSpec::validate() const {
    switch (kind) {
        case GroupKind::Finite: {
            if (order < 1) throw validation_error("table: group order must be >= 1");
            if (static_cast<int>(table.size()) != order)
                throw validation_error("table: row count does not match order");
            for (int r = 0; r < order; ++r) {
                if (static_cast<int>(table[r].size()) != order) {
                    std::ostringstream os;
                    os << "table: row " << r << " has wrong length";
                    throw validation_error(os.str());
                }
                std::vector<bool> seen(order, false);
                for (int c = 0; c < order; ++c) {
                    int v = table[r][c];
                    if (v < 0 || v >= order || seen[v]) {
                        std::ostringstream os;
                        os << "table: row " << r << " is not a permutation (entry " << v << ")";
                        throw validation_error(os.str());
                    }
                    seen[v] = true;
                }
            }
            // columns of a Latin square are permutations too
            for (int c = 0; c < order; ++c) {
                std::vector<bool> seen(order, false);
                for (int r = 0; r < order; ++r) {
                    int v = table[r][c];
                    if (seen[v]) {
                        std::ostringstream os;
                        os << "table: column " << c << " repeats entry " << v;
                        throw validation_error(os.str());
                    }
                    seen[v] = true;
                }
            }
            // identity at index 0
            for (int g = 0; g < order; ++g)
                if (table[0][g] != g || table[g][0] != g)
                    throw validation_error("table: element 0 is not the identity");
            // every element has an inverse (guaranteed by Latin square + identity,
            // but check explicitly so the error names the element)
            for (int g = 0; g < order; ++g) {
                bool has_inverse = false;
                for (int h = 0; h < order; ++h)
                    if (table[g][h] == 0 && table[h][g] == 0) { has_inverse = true; break; }
                if (!has_inverse) {
                    std::ostringstream os;
                    os << "table: element " << g << " has no inverse";
                    throw validation_error(os.str());
                }
            }
            // a Latin square with identity and inverses can still be a
            // non-associative loop; require an actual group
            for (int a = 0; a < order; ++a)
                for (int b = 0; b < order; ++b)
                    for (int c = 0; c < order; ++c)
                        if (table[table[a][b]][c] != table[a][table[b][c]]) {
                            std::ostringstream os;
                            os << "table: not associative at (" << a << ", " << b << ", " << c
                               << ")";
                            throw validation_error(os.str());
                        }
            break;
        }
        case GroupKind::U1:
        case GroupKind::SU2:
            break;
        case GroupKind::Product:
            if (components.empty())
                throw validation_error("components: product group needs at least one component");
            for (const auto& c : components) c.validate();
            break;
    }
}

GroupElement GroupElement::angle(double theta) { return {wrap_angle(theta)}; }

GroupElement GroupElement::quaternion(const Quaternion& q) {
    if (std::abs(q.norm() - 1.0) > 1e-12)
        throw validation_error("quaternion: norm deviates from 1 by more than 1e-12");
    return {q};
}

GroupElement GroupSpec::identity() const {
    switch (kind) {
        case GroupKind::Finite: return GroupElement::index(0);
        case GroupKind::U1: return GroupElement::angle(0.0);
        case GroupKind::SU2: return GroupElement::quaternion({1.0, 0.0, 0.0, 0.0});
        case GroupKind::Product: {
            std::vector<GroupElement> parts;
            parts.reserve(components.size());
            for (const auto& c : components) parts.push_back(c.identity());
            return GroupElement::tuple(std::move(parts));
        }
    }
    throw error("unreachable");
}

GroupElement GroupSpec::compose(const GroupElement& a, const GroupElement& b) const {
    if (!a.matches(*this) || !b.matches(*this))
        throw validation_error("compose: element kind does not match group");
    switch (kind) {
        case GroupKind::Finite: return GroupElement::index(table[a.as_index()][b.as_index()]);
        case GroupKind::U1: return GroupElement::angle(a.as_angle() + b.as_angle());
        case GroupKind::SU2: {
            Quaternion q = a.as_quaternion() * b.as_quaternion();
            double n = q.norm();
            return GroupElement::quaternion({q.w / n, q.x / n, q.y / n, q.z / n});
        }
        case GroupKind::Product: {
            std::vector<GroupElement> parts;
            parts.reserve(components.size());
            for (std::size_t i = 0; i < components.size(); ++i)
                parts.push_back(components[i].compose(a.as_tuple()[i], b.as_tuple()[i]));
            return GroupElement::tuple(std::move(parts));
        }
    }
    throw error("unreachable");
}

GroupElement GroupSpec::inverse(const GroupElement& a) const {
    if (!a.matches(*this))
        throw validation_error("inverse: element kind does not match group");
    switch (kind) {
        case GroupKind::Finite: {
            int g = a.as_index();
            for (int h = 0; h < order; ++h)
                if (table[g][h] == 0) return GroupElement::index(h);
            throw validation_error("inverse: no inverse found (invalid table)");
        }
        case GroupKind::U1: return GroupElement::angle(-a.as_angle());
        case GroupKind::SU2: return GroupElement::quaternion(a.as_quaternion().conjugated());
        case GroupKind::Product: {
            std::vector<GroupElement> parts;
            parts.reserve(components.size());
            for (std::size_t i = 0; i < components.size(); ++i)
                parts.push_back(components[i].inverse(a.as_tuple()[i]));
            return GroupElement::tuple(std::move(parts));
        }
    }
    throw error("unreachable");
}

bool GroupSpec::same_structure(const GroupSpec& other) const {
    if (kind != other.kind) return false;
    switch (kind) {
        case GroupKind::Finite: return order == other.order && table == other.table;
        case GroupKind::U1:
        case GroupKind::SU2: return true;
        case GroupKind::Product: {
            if (components.size() != other.components.size()) return false;
            for (std::size_t i = 0; i < components.size(); ++i)
                if (!components[i].same_structure(other.components[i])) return false;
            return true;
        }
    }
    return false;
}

bool GroupElement::matches(const GroupSpec& spec) const {
    switch (spec.kind) {
        case GroupKind::Finite:
            return std::holds_alternative<int>(value) && as_index() >= 0 &&
                   as_index() < spec.order;
        case GroupKind::U1: return std::holds_alternative<double>(value);
        case GroupKind::SU2: return std::holds_alternative<Quaternion>(value);
        case GroupKind::Product: {
            if (!std::holds_alternative<std::vector<GroupElement>>(value)) return false;
            const auto& parts = as_tuple();
            if (parts.size() != spec.components.size()) return false;
            for (std::size_t i = 0; i < parts.size(); ++i)
                if (!parts[i].matches(spec.components[i])) return false;
            return true;
        }
    }
    return false;
}

std::string GroupElement::describe() const {
    std::ostringstream os;
    if (std::holds_alternative<int>(value)) {
        os << "g[" << as_index() << "]";
    } else if (std::holds_alternative<double>(value)) {
        os << "theta=" << as_angle();
    } else if (std::holds_alternative<Quaternion>(value)) {
        const auto& q = as_quaternion();
        os << "q=(" << q.w << "," << q.x << "," << q.y << "," << q.z << ")";
    } else {
        os << "(";
        const auto& parts = as_tuple();
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) os << ", ";
            os << parts[i].describe();
        }
        os << ")";
    }
    return os.str();
}

} // namespace covml
