#pragma once

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "abreu/polytope.hpp"

namespace abreu {

using OrderedJson = nlohmann::ordered_json;

/// A polytope file: labelled facets, optional vertices for cross-validation,
/// optional second label set for cone-angle comparisons. Rationals written as
/// "p/q" strings survive exactly into lattice arithmetic.
struct ParsedPolytope {
    LabelledPolytope polytope;
    std::optional<LabelledPolytope> reference_labels;
    bool float_input = false;  // some entry had no exact rational form
};

ParsedPolytope parse_polytope_json(const OrderedJson& j, const std::string& context);
ParsedPolytope parse_polytope_file(const std::string& path);

/// Canonical JSON form (exact entries as "p/q" strings); parse-emit is the
/// identity on canonical files.
OrderedJson emit_polytope(const LabelledPolytope& P,
                          const LabelledPolytope* reference = nullptr);

/// Built-in fixtures: square, simplex, hirzebruch, rectangle.
OrderedJson example_polytope(const std::string& name);

std::string render_text_report(const OrderedJson& j);

}  // namespace abreu
