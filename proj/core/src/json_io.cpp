#include "covml/json_io.hpp"

#include "covml/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace covml::io {

namespace {

const json& require(const json& doc, const std::string& field) {
    if (!doc.is_object() || !doc.contains(field))
        throw validation_error("missing field '" + field + "'");
    return doc.at(field);
}

} // namespace

json complex_to_json(cd z) { return json::array({z.real(), z.imag()}); }

cd complex_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw validation_error(where + ": complex entries must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw validation_error(where + ": expected a matrix");
    const auto rows = j.size();
    const auto cols = j[0].size();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw validation_error(where + ": ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                complex_from_json(j[i][c], where);
    }
    return m;
}

json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

Vector vector_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw validation_error(where + ": expected an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], where);
    return v;
}

GroupSpec load_group_spec(const json& doc) {
    const std::string kind = require(doc, "kind").get<std::string>();
    if (kind == "finite") {
        const json& table = require(doc, "table");
        int order = require(doc, "order").get<int>();
        if (!table.is_array() || static_cast<int>(table.size()) != order)
            throw validation_error("table: row count must equal order");
        std::vector<std::vector<int>> rows;
        for (const auto& r : table) {
            if (!r.is_array()) throw validation_error("table: rows must be arrays");
            rows.push_back(r.get<std::vector<int>>());
        }
        return GroupSpec::finite(std::move(rows));
    }
    if (kind == "u1") return GroupSpec::u1();
    if (kind == "su2") return GroupSpec::su2();
    if (kind == "product") {
        const json& comps = require(doc, "components");
        if (!comps.is_array() || comps.empty())
            throw validation_error("components: product needs a nonempty array");
        std::vector<GroupSpec> parts;
        for (const auto& c : comps) parts.push_back(load_group_spec(c));
        return GroupSpec::product(std::move(parts));
    }
    throw validation_error("kind: expected finite|u1|su2|product, got '" + kind + "'");
}

GroupSpec load_group_spec_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw validation_error(std::string("group document is not valid JSON: ") + e.what());
    }
    return load_group_spec(doc);
}

json group_spec_to_json(const GroupSpec& spec) {
    json out;
    out["kind"] = to_string(spec.kind);
    if (spec.kind == GroupKind::Finite) {
        out["order"] = spec.order;
        out["table"] = spec.table;
    } else if (spec.kind == GroupKind::Product) {
        json comps = json::array();
        for (const auto& c : spec.components) comps.push_back(group_spec_to_json(c));
        out["components"] = comps;
    }
    return out;
}

Representation load_representation(const json& doc, const GroupSpec& spec) {
    bool projective = doc.is_object() && doc.value("projective", false);
    if (spec.kind == GroupKind::Product) {
        const std::string comp = require(doc, "composition").get<std::string>();
        const json& parts = require(doc, "components");
        if (!parts.is_array() || parts.size() != spec.components.size())
            throw validation_error("components: need one representation per group component");
        std::vector<Representation> reps;
        for (std::size_t i = 0; i < parts.size(); ++i)
            reps.push_back(load_representation(parts[i], spec.components[i]));
        if (comp == "tensor") return Representation::outer_tensor(spec, std::move(reps));
        if (comp == "direct_sum")
            return Representation::outer_direct_sum(spec, std::move(reps));
        throw validation_error("composition: expected tensor|direct_sum, got '" + comp + "'");
    }
    const int dim = require(doc, "dimension").get<int>();
    if (dim < 1) throw validation_error("dimension: must be positive");
    if (spec.kind == GroupKind::Finite) {
        const json& mats = require(doc, "matrices");
        if (!mats.is_array() || static_cast<int>(mats.size()) != spec.order)
            throw validation_error("matrices: need exactly one matrix per group element");
        std::vector<Matrix> matrices;
        for (std::size_t g = 0; g < mats.size(); ++g) {
            Matrix m = matrix_from_json(mats[g], "matrices[" + std::to_string(g) + "]");
            if (m.rows() != dim || m.cols() != dim)
                throw validation_error("matrices[" + std::to_string(g) +
                                       "]: dimension mismatch");
            matrices.push_back(std::move(m));
        }
        Representation rep = Representation::finite(spec, std::move(matrices), projective);
        HaarSampler sampler(spec, 1);
        verify_representation(rep, sampler);  // eager homomorphism check
        return rep;
    }
    const json& gens = require(doc, "generators");
    if (!gens.is_array()) throw validation_error("generators: expected an array");
    std::vector<Matrix> generators;
    for (std::size_t k = 0; k < gens.size(); ++k) {
        Matrix m = matrix_from_json(gens[k], "generators[" + std::to_string(k) + "]");
        if (m.rows() != dim || m.cols() != dim)
            throw validation_error("generators[" + std::to_string(k) + "]: dimension mismatch");
        generators.push_back(std::move(m));
    }
    Representation rep = Representation::lie(spec, std::move(generators), projective);
    HaarSampler sampler(spec, 1);
    verify_representation(rep, sampler);
    return rep;
}

Vector load_state(const json& doc) {
    const int dim = require(doc, "dimension").get<int>();
    Vector v = vector_from_json(require(doc, "vector"), "vector");
    if (v.size() != dim) throw validation_error("vector: length does not match dimension");
    return v;
}

json decomposition_to_json(const IsotypicDecomposition& iso) {
    json blocks = json::array();
    for (const auto& blk : iso.blocks) blocks.push_back({{"d", blk.d}, {"m", blk.m}});
    return json{{"dimension", iso.dim}, {"blocks", blocks}, {"W", matrix_to_json(iso.W)}};
}

IsotypicDecomposition decomposition_from_json(const json& doc) {
    IsotypicDecomposition iso;
    iso.dim = require(doc, "dimension").get<int>();
    iso.W = matrix_from_json(require(doc, "W"), "W");
    if (iso.W.rows() != iso.dim || iso.W.cols() != iso.dim)
        throw validation_error("W: must be dimension x dimension");
    if (unitarity_defect(iso.W) > 1e-10 * iso.dim)
        throw validation_error("W: not unitary within tolerance");
    const json& blocks = require(doc, "blocks");
    int at = 0;
    for (const auto& b : blocks) {
        IrrepBlock blk;
        blk.d = require(b, "d").get<int>();
        blk.m = require(b, "m").get<int>();
        if (blk.d < 1 || blk.m < 1) throw validation_error("blocks: d and m must be positive");
        if (at + blk.d * blk.m > iso.dim)
            throw validation_error("blocks: dimensions exceed dim(H)");
        blk.basis = iso.W.middleCols(at, blk.d * blk.m);
        at += blk.d * blk.m;
        iso.blocks.push_back(std::move(blk));
    }
    if (at != iso.dim) throw validation_error("blocks: dimensions do not add up to dim(H)");
    return iso;
}

json estimation_report_to_json(const EstimationReport& report) {
    return json{{"likelihood", report.likelihood},
                {"orbit_dim", report.orbit_dim},
                {"chi_bits", report.chi_bits},
                {"L", report.L},
                {"L_max", report.L_max},
                {"d_R_bar", report.d_R_bar},
                {"residuals",
                 {{"normalization", report.residual_normalization},
                  {"covariance", report.residual_covariance},
                  {"sqrt_equiv", report.residual_sqrt_equiv}}},
                {"orbit_support_only", report.orbit_support_only},
                {"provenance", report.provenance}};
}

json scenario_report_to_json(const ScenarioReport& report) {
    json grid = json::array();
    for (const auto& pt : report.grid) {
        grid.push_back({{"alpha_hat", complex_to_json(pt.alpha_hat)},
                        {"density", pt.density},
                        {"target", pt.target},
                        {"abs_err", pt.abs_err}});
    }
    json out{{"kind", report.kind},
             {"cutoff", report.cutoff},
             {"grid", grid},
             {"likelihood", report.likelihood},
             {"target_likelihood", report.target_likelihood},
             {"grid_tolerance", report.grid_tolerance},
             {"flagged", report.flagged}};
    if (report.kind == "squeezed") out["x"] = report.x;
    if (report.kind == "identical")
        out["alt_povm_max_discrepancy"] = report.alt_povm_max_discrepancy;
    return out;
}

std::string scenario_grid_to_csv(const ScenarioReport& report) {
    std::ostringstream os;
    os << "alpha_hat_re,alpha_hat_im,density,target,abs_err\n";
    for (const auto& pt : report.grid) {
        os << pt.alpha_hat.real() << ',' << pt.alpha_hat.imag() << ',' << pt.density << ','
           << pt.target << ',' << pt.abs_err << '\n';
    }
    return os.str();
}

json ascent_trace_to_json(const AscentTrace& trace) {
    return json{{"iterations", trace.iterations},
                {"final_objective", trace.final_objective},
                {"final_constraint_residual", trace.final_constraint_residual},
                {"conclusive", trace.conclusive}};
}

std::string ascent_trace_to_csv(const AscentTrace& trace) {
    std::ostringstream os;
    os << "iteration,objective,residual\n";
    for (std::size_t i = 0; i < trace.objective.size(); ++i) {
        os << i + 1 << ',' << trace.objective[i] << ',';
        if (i + 1 == trace.objective.size()) os << trace.final_constraint_residual;
        os << '\n';
    }
    return os.str();
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw validation_error(path + " is not valid JSON: " + e.what());
    }
    return doc;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw error("cannot open output file: " + tmp);
        out << contents;
        if (!out) throw error("failed writing: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw error("failed renaming " + tmp + " to " + path);
}

} // namespace covml::io
