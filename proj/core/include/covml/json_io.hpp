#pragma once

#include "covml/cv_scenarios.hpp"
#include "covml/estimation.hpp"
#include "covml/group.hpp"
#include "covml/isotypic.hpp"
#include "covml/oracle.hpp"
#include "covml/representation.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace covml::io {

using nlohmann::json;

// complex numbers travel as [re, im]; matrices as row arrays of pairs
json complex_to_json(cd z);
cd complex_from_json(const json& j, const std::string& where);
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, const std::string& where);
json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j, const std::string& where);

/// Parses and validates a group description document.
GroupSpec load_group_spec(const json& doc);
GroupSpec load_group_spec_text(const std::string& text);

json group_spec_to_json(const GroupSpec& spec);

/// Parses a representation file against a group: {"dimension", "matrices"}
/// for finite groups, {"dimension", "generators"} for Lie kinds, and
/// {"composition": "tensor"|"direct_sum", "components": [...]} over products.
/// Validates unitarity and the (projective) homomorphism property eagerly.
Representation load_representation(const json& doc, const GroupSpec& spec);

/// {"dimension", "vector"}: a complex state vector.
Vector load_state(const json& doc);

json decomposition_to_json(const IsotypicDecomposition& iso);
IsotypicDecomposition decomposition_from_json(const json& doc);

json estimation_report_to_json(const EstimationReport& report);
json scenario_report_to_json(const ScenarioReport& report);
std::string scenario_grid_to_csv(const ScenarioReport& report);
json ascent_trace_to_json(const AscentTrace& trace);
std::string ascent_trace_to_csv(const AscentTrace& trace);

json read_json_file(const std::string& path);
/// Writes atomically: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& contents);

} // namespace covml::io
