#pragma once

#include "covml/group.hpp"
#include "covml/linalg.hpp"
#include "covml/representation.hpp"

#include <random>
#include <vector>

namespace covml::testing {

inline Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0, cd(0, -1), cd(0, 1), 0;
    return m;
}

inline Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline std::vector<Matrix> spin_half_generators() {
    return {0.5 * pauli_x(), 0.5 * pauli_y(), 0.5 * pauli_z()};
}

inline std::vector<Matrix> spin_one_generators() {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix jx(3, 3), jy(3, 3), jz(3, 3);
    jx << 0, s, 0, s, 0, s, 0, s, 0;
    jy << 0, cd(0, -s), 0, cd(0, s), 0, cd(0, -s), 0, cd(0, s), 0;
    jz << 1, 0, 0, 0, 0, 0, 0, 0, -1;
    return {jx, jy, jz};
}

inline Representation spin_half_rep() {
    return Representation::lie(GroupSpec::su2(), spin_half_generators());
}

inline Representation spin_one_rep() {
    return Representation::lie(GroupSpec::su2(), spin_one_generators());
}

/// Two spin-1/2 systems rotated together: U_g ⊗ U_g on C^4.
inline Representation spin_pair_rep() {
    return Representation::tensor(spin_half_rep(), spin_half_rep());
}

/// The symmetric group S_3, permutations of {0,1,2} in lexicographic
/// one-line order: 012, 021, 102, 120, 201, 210.
inline GroupSpec s3_spec() {
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                             {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    auto find = [&](const int p[3]) {
        for (int k = 0; k < 6; ++k)
            if (perms[k][0] == p[0] && perms[k][1] == p[1] && perms[k][2] == p[2]) return k;
        return -1;
    };
    std::vector<std::vector<int>> table(6, std::vector<int>(6));
    for (int g = 0; g < 6; ++g)
        for (int h = 0; h < 6; ++h) {
            int comp[3];  // (g ∘ h)(x) = g(h(x))
            for (int x = 0; x < 3; ++x) comp[x] = perms[g][perms[h][x]];
            table[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)] = find(comp);
        }
    return GroupSpec::finite(std::move(table));
}

/// Left regular representation: U(g)|h> = |gh>.
inline Representation regular_rep(const GroupSpec& spec) {
    std::vector<Matrix> mats;
    for (int g = 0; g < spec.order; ++g) {
        Matrix m = Matrix::Zero(spec.order, spec.order);
        for (int h = 0; h < spec.order; ++h) m(spec.table[g][h], h) = 1.0;
        mats.push_back(std::move(m));
    }
    return Representation::finite(spec, std::move(mats));
}

/// Number representation of U(1) on `levels` oscillator levels:
/// theta -> diag(1, e^{i theta}, ..., e^{i (levels-1) theta}).
inline Representation u1_number_rep(int levels) {
    Matrix n = Matrix::Zero(levels, levels);
    for (int k = 0; k < levels; ++k) n(k, k) = static_cast<double>(k);
    return Representation::lie(GroupSpec::u1(), {n});
}

inline Vector random_unit_state(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = cd(normal(rng), normal(rng));
    return v / v.norm();
}

} // namespace covml::testing
