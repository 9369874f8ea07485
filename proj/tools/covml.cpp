// covml: maximum-likelihood estimation of group transformations.
// Subcommands: decompose, estimate, optimal-state, cv, verify.
//
// Exit codes: 0 success, 2 invalid input, 3 decomposition failure,
// 4 oracle inconclusive, 5 truncation tolerance exceeded.

#include "covml/errors.hpp"
#include "covml/json_io.hpp"
#include "covml/version.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

namespace {

using namespace covml;
using covml::io::json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitDecomposition = 3;
constexpr int kExitOracleInconclusive = 4;
constexpr int kExitTruncation = 5;

struct RunConfig {
    std::string command;
    std::string group_path, rep_path, state_path, precomputed_path, out_path;
    std::uint64_t seed = 42;
    std::int64_t mc_samples = 100000;
    int oracle_iters = 5000;
    int cutoff = 40;
    std::string kind = "identical";
    double x = 0.0;
    bool verify = false;
    bool optimal_state = false;

    void check() const {
        if (mc_samples < 1 || mc_samples > 10000000)
            throw validation_error("mc-samples must be in [1, 1e7]");
        if (cutoff > 80) throw validation_error("cutoff must be at most 80");
        for (const std::string* p : {&group_path, &rep_path, &state_path, &precomputed_path})
            if (!p->empty() && !std::filesystem::exists(*p))
                throw validation_error("file does not exist: " + *p);
    }

    // everything that affects the numbers; no paths, so a report is
    // bit-identical whether the decomposition was computed or preloaded
    json to_json() const {
        return json{{"command", command},      {"seed", seed},
                    {"mc_samples", mc_samples}, {"oracle_iters", oracle_iters},
                    {"cutoff", cutoff},         {"kind", kind},
                    {"x", x},                   {"verify", verify},
                    {"optimal_state", optimal_state}};
    }
};

int worker_count() {
    const char* env = std::getenv("COVML_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    return std::clamp(n, 1, std::max(1, hw));
}

void emit(const RunConfig& cfg, json report) {
    report["version"] = kVersion;
    report["config"] = cfg.to_json();
    std::string text = report.dump(2);
    text.push_back('\n');
    if (cfg.out_path.empty())
        std::cout << text;
    else
        io::write_file_atomic(cfg.out_path, text);
}

struct LoadedProblem {
    GroupSpec group;
    Representation rep;
    IsotypicDecomposition iso;
};

LoadedProblem load_problem(const RunConfig& cfg, bool need_decomposition) {
    GroupSpec group = io::load_group_spec(io::read_json_file(cfg.group_path));
    Representation rep = io::load_representation(io::read_json_file(cfg.rep_path), group);
    IsotypicDecomposition iso;
    if (need_decomposition) {
        if (!cfg.precomputed_path.empty()) {
            iso = io::decomposition_from_json(io::read_json_file(cfg.precomputed_path));
            if (iso.dim != rep.dim())
                throw validation_error("precomputed decomposition dimension mismatch");
        } else {
            iso = isotypic_decompose(rep, cfg.seed);
        }
    }
    return {std::move(group), std::move(rep), std::move(iso)};
}

int cmd_decompose(const RunConfig& cfg) {
    LoadedProblem p = load_problem(cfg, true);
    emit(cfg, io::decomposition_to_json(p.iso));
    return kExitOk;
}

json estimate_report_json(const RunConfig& cfg, const LoadedProblem& p, const Vector& psi,
                          bool& oracle_conclusive) {
    StateDecomposition sd = decompose_state(psi, p.iso);
    CovariantSeed seed = optimal_seed(sd, p.iso);
    ReferenceRequirements req = reference_requirements(p.iso);

    EstimationReport report;
    report.provenance = cfg.verify ? "analytic+oracle+mc" : "analytic";
    report.likelihood = optimal_likelihood(sd, p.iso);
    report.orbit_dim = orbit_dimension(sd, p.iso);
    report.chi_bits = holevo_chi(sd, p.iso);
    report.L = req.L_prime(1);
    report.L_max = req.L_max;
    report.d_R_bar = req.d_R_bar;
    report.residual_normalization =
        verify_normalization(seed, p.rep, p.iso, NormalizationMode::ClosedForm).residual;
    HaarSampler cov_sampler(p.rep.spec(), cfg.seed + 1);
    report.residual_covariance = verify_covariance(seed, p.rep, cov_sampler).residual;
    report.residual_sqrt_equiv =
        (sqrt_measurement_seed(psi, p.iso).eta - seed.eta).norm();

    json out = io::estimation_report_to_json(report);
    out["saturates_dimension_bound"] = state_saturates_bound(sd, p.iso).saturates;

    oracle_conclusive = true;
    if (cfg.verify) {
        OracleResult oracle =
            maximize_likelihood_numeric(psi * psi.adjoint(), p.iso, cfg.seed, cfg.oracle_iters);
        oracle_conclusive = oracle.trace.conclusive;
        json j = io::ascent_trace_to_json(oracle.trace);
        j["value"] = oracle.value;
        j["gap_to_analytic"] = report.likelihood - oracle.value;
        out["oracle"] = j;

        ResidualReport mc =
            verify_normalization(seed, p.rep, p.iso, NormalizationMode::MonteCarlo,
                                 cfg.mc_samples, cfg.seed + 2);
        out["mc_normalization"] = {{"residual", mc.residual},
                                   {"std_error", mc.std_error},
                                   {"samples", mc.samples},
                                   {"pass", mc.pass}};
    }
    return out;
}

int cmd_estimate(const RunConfig& cfg) {
    LoadedProblem p = load_problem(cfg, true);
    Vector psi;
    json extra;
    if (cfg.optimal_state) {
        auto [state, L] = optimal_input_state(p.iso);
        psi = state;
        extra = io::vector_to_json(psi);
    } else {
        psi = io::load_state(io::read_json_file(cfg.state_path));
        if (psi.size() != p.rep.dim())
            throw validation_error("state dimension does not match the representation");
    }
    bool conclusive = true;
    json out = estimate_report_json(cfg, p, psi, conclusive);
    if (cfg.optimal_state) out["state"] = extra;
    emit(cfg, out);
    return conclusive ? kExitOk : kExitOracleInconclusive;
}

int cmd_optimal_state(const RunConfig& cfg) {
    LoadedProblem p = load_problem(cfg, true);
    auto [psi, L] = optimal_input_state(p.iso);
    json blocks = json::array();
    for (const auto& blk : p.iso.blocks) blocks.push_back({{"d", blk.d}, {"m", blk.m}});
    emit(cfg, json{{"dimension", p.iso.dim},
                   {"state", io::vector_to_json(psi)},
                   {"L", L},
                   {"blocks", blocks}});
    return kExitOk;
}

int cmd_cv(const RunConfig& cfg) {
    CVScenario scenario;
    if (cfg.kind == "identical")
        scenario = CVScenario::identical(cfg.cutoff);
    else if (cfg.kind == "conjugated")
        scenario = CVScenario::conjugated(cfg.cutoff);
    else if (cfg.kind == "squeezed")
        scenario = CVScenario::squeezed(cfg.cutoff, cfg.x);
    else
        throw validation_error("kind must be identical|conjugated|squeezed");
    scenario.workers = worker_count();

    ScenarioReport report;
    switch (scenario.kind) {
        case CVScenario::Kind::Identical: report = identical_scenario(scenario); break;
        case CVScenario::Kind::Conjugated: report = conjugated_scenario(scenario); break;
        case CVScenario::Kind::Squeezed: report = squeezed_scenario(scenario); break;
    }
    emit(cfg, io::scenario_report_to_json(report));
    return report.within_tolerance() ? kExitOk : kExitTruncation;
}

int cmd_verify(const RunConfig& cfg) {
    GroupSpec group = io::load_group_spec(io::read_json_file(cfg.group_path));
    Representation rep = io::load_representation(io::read_json_file(cfg.rep_path), group);
    HaarSampler sampler(rep.spec(), cfg.seed);
    VerificationReport vrep = verify_representation(rep, sampler);

    json out{{"representation",
              {{"max_residual", vrep.max_residual},
               {"max_unitarity_defect", vrep.max_unitarity_defect},
               {"pairs_checked", vrep.pairs_checked},
               {"pass", true}}}};

    bool conclusive = true;
    if (!cfg.state_path.empty()) {
        RunConfig with_verify = cfg;
        with_verify.verify = true;
        LoadedProblem p{group, rep, isotypic_decompose(rep, cfg.seed)};
        Vector psi = io::load_state(io::read_json_file(cfg.state_path));
        out["estimation"] = estimate_report_json(with_verify, p, psi, conclusive);
    }
    emit(cfg, out);
    return conclusive ? kExitOk : kExitOracleInconclusive;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Maximum-likelihood estimation of group transformations"};
    app.set_version_flag("--version", std::string("covml ") + kVersion);
    app.require_subcommand(1);

    RunConfig cfg;
    auto add_common = [&](CLI::App* sub, bool wants_group) {
        sub->add_option("--seed", cfg.seed, "seed for every stochastic path");
        sub->add_option("--out", cfg.out_path, "output path (atomic write; default stdout)");
        if (wants_group) {
            sub->add_option("--group", cfg.group_path, "group description JSON")->required();
            sub->add_option("--rep", cfg.rep_path, "representation JSON")->required();
        }
    };

    CLI::App* decompose = app.add_subcommand("decompose", "compute the isotypic decomposition");
    add_common(decompose, true);

    CLI::App* estimate = app.add_subcommand("estimate", "optimal measurement for an input state");
    add_common(estimate, true);
    estimate->add_option("--state", cfg.state_path, "input state JSON");
    estimate->add_option("--precomputed-decomposition", cfg.precomputed_path,
                         "reuse a decomposition written by `decompose`");
    estimate->add_flag("--verify", cfg.verify, "run the numeric oracle and Monte-Carlo checks");
    estimate->add_flag("--optimal-state", cfg.optimal_state,
                       "ignore --state and use the optimal input state");
    estimate->add_option("--mc-samples", cfg.mc_samples, "Monte-Carlo twirl samples");
    estimate->add_option("--oracle-iters", cfg.oracle_iters, "ascent iterations");

    CLI::App* optimal = app.add_subcommand("optimal-state", "emit the optimal input state");
    add_common(optimal, true);
    optimal->add_option("--precomputed-decomposition", cfg.precomputed_path,
                        "reuse a decomposition written by `decompose`");

    CLI::App* cv = app.add_subcommand("cv", "truncated-Fock continuous-variable scenarios");
    add_common(cv, false);
    cv->add_option("--kind", cfg.kind, "identical|conjugated|squeezed")->required();
    cv->add_option("--cutoff", cfg.cutoff, "Fock truncation level (8..80)");
    cv->add_option("--x", cfg.x, "squeezing weight for kind=squeezed");

    CLI::App* verify = app.add_subcommand("verify", "verify a representation and optional state");
    add_common(verify, true);
    verify->add_option("--state", cfg.state_path, "input state JSON");
    verify->add_option("--mc-samples", cfg.mc_samples, "Monte-Carlo twirl samples");
    verify->add_option("--oracle-iters", cfg.oracle_iters, "ascent iterations");

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        cfg.check();
        if (decompose->parsed()) return cmd_decompose(cfg);
        if (estimate->parsed()) {
            if (!cfg.optimal_state && cfg.state_path.empty())
                throw validation_error("estimate needs --state or --optimal-state");
            return cmd_estimate(cfg);
        }
        if (optimal->parsed()) return cmd_optimal_state(cfg);
        if (cv->parsed()) return cmd_cv(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
    } catch (const truncation_error& e) {
        std::cerr << "truncation error: " << e.what() << "\n";
        return kExitTruncation;
    } catch (const decomposition_error& e) {
        std::cerr << "decomposition error: " << e.what() << "\n";
        return kExitDecomposition;
    } catch (const validation_error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitInvalid;
}
