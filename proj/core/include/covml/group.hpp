#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace covml {

enum class GroupKind { Finite, U1, SU2, Product };

std::string to_string(GroupKind k);

/// Unit quaternion w + xi + yj + zk; the double cover of rotations.
struct Quaternion {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

    double norm() const;
    Quaternion operator*(const Quaternion& o) const;
    Quaternion conjugated() const { return {w, -x, -y, -z}; }
};

struct GroupElement;

/// A concrete group: a finite multiplication table, the circle group, the
/// unit quaternions, or a finite direct product of these.
struct GroupSpec {
    GroupKind kind = GroupKind::Finite;
    int order = 0;                        // finite only
    std::vector<std::vector<int>> table;  // finite only, table[g][h] = g*h
    std::vector<GroupSpec> components;    // product only

    static GroupSpec finite(std::vector<std::vector<int>> table);
    static GroupSpec u1();
    static GroupSpec su2();
    static GroupSpec product(std::vector<GroupSpec> components);
    /// Cyclic group of order n with the canonical addition table.
    static GroupSpec cyclic(int n);

    bool is_finite() const { return kind == GroupKind::Finite; }
    bool is_lie() const;  // contains a U1 or SU2 factor anywhere

    /// Checks the structural invariants (Latin square, identity at index 0,
    /// inverses, valid components); throws validation_error.
    void validate() const;

    GroupElement identity() const;
    GroupElement compose(const GroupElement& a, const GroupElement& b) const;
    GroupElement inverse(const GroupElement& a) const;

    bool same_structure(const GroupSpec& other) const;
};

/// One element of a group, in the parametrization of its GroupSpec.
/// Lie elements are stored as parameters, never as matrices, so the same
/// element can be evaluated in different representations.
struct GroupElement {
    std::variant<int, double, Quaternion, std::vector<GroupElement>> value;

    static GroupElement index(int i) { return {i}; }
    static GroupElement angle(double theta);
    static GroupElement quaternion(const Quaternion& q);
    static GroupElement tuple(std::vector<GroupElement> parts) { return {std::move(parts)}; }

    int as_index() const { return std::get<int>(value); }
    double as_angle() const { return std::get<double>(value); }
    const Quaternion& as_quaternion() const { return std::get<Quaternion>(value); }
    const std::vector<GroupElement>& as_tuple() const {
        return std::get<std::vector<GroupElement>>(value);
    }

    bool matches(const GroupSpec& spec) const;
    std::string describe() const;
};

} // namespace covml
