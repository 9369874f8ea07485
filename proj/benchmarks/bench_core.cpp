#include "covml/cv_scenarios.hpp"
#include "covml/estimation.hpp"
#include "covml/fock.hpp"
#include "covml/oracle.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace covml;

namespace {

GroupSpec s3_spec() {
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
            int comp[3];
            for (int x = 0; x < 3; ++x) comp[x] = perms[g][perms[h][x]];
            table[g][h] = find(comp);
        }
    return GroupSpec::finite(std::move(table));
}

Representation regular_rep(const GroupSpec& spec) {
    std::vector<Matrix> mats;
    for (int g = 0; g < spec.order; ++g) {
        Matrix m = Matrix::Zero(spec.order, spec.order);
        for (int h = 0; h < spec.order; ++h) m(spec.table[g][h], h) = 1.0;
        mats.push_back(std::move(m));
    }
    return Representation::finite(spec, std::move(mats));
}

void bench_isotypic_decompose_s3(benchmark::State& state) {
    Representation rep = regular_rep(s3_spec());
    for (auto _ : state) {
        IsotypicDecomposition iso = isotypic_decompose(rep);
        benchmark::DoNotOptimize(iso.W);
    }
}
BENCHMARK(bench_isotypic_decompose_s3);

void bench_group_average(benchmark::State& state) {
    Representation rep = regular_rep(s3_spec());
    IsotypicDecomposition iso = isotypic_decompose(rep);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal;
    Matrix a(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) a(i, j) = cd(normal(rng), normal(rng));
    a = hermitian_part(a);
    for (auto _ : state) {
        Matrix avg = group_average(a, iso);
        benchmark::DoNotOptimize(avg);
    }
}
BENCHMARK(bench_group_average);

void bench_oracle_ascent(benchmark::State& state) {
    Representation rep = regular_rep(s3_spec());
    IsotypicDecomposition iso = isotypic_decompose(rep);
    Vector psi = Vector::Zero(6);
    psi(0) = 1.0;
    Matrix rho = psi * psi.adjoint();
    const int iters = static_cast<int>(state.range(0));
    for (auto _ : state) {
        OracleResult r = maximize_likelihood_numeric(rho, iso, 1, iters);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(bench_oracle_ascent)->Arg(250)->Arg(1000);

void bench_displacement_exp(benchmark::State& state) {
    FockSpace space(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        Matrix d = displacement(cd(0.7, 0.4), space);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(bench_displacement_exp)->Arg(20)->Arg(40);

void bench_beamsplitter(benchmark::State& state) {
    FockSpace space(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        Matrix v = beamsplitter_v(space);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(bench_beamsplitter)->Arg(20)->Arg(40);

void bench_conjugated_density_grid(benchmark::State& state) {
    CVScenario s = CVScenario::conjugated(30);
    for (auto _ : state) {
        ScenarioReport r = conjugated_scenario(s);
        benchmark::DoNotOptimize(r.likelihood);
    }
}
BENCHMARK(bench_conjugated_density_grid);

} // namespace

BENCHMARK_MAIN();
