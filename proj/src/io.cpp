#include "abreu/io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace abreu {

namespace {

struct Entry {
    double value = 0.0;
    std::optional<Rational> exact;
};

Entry parse_entry(const OrderedJson& j, const std::string& where) {
    Entry e;
    if (j.is_string()) {
        auto r = Rational::parse(j.get<std::string>());
        if (!r)
            throw ValidationError("ParseError",
                                  where + ": malformed rational \"" + j.get<std::string>() + "\"");
        e.exact = *r;
        e.value = r->to_double();
    } else if (j.is_number_integer()) {
        e.exact = Rational(j.get<long long>());
        e.value = e.exact->to_double();
    } else if (j.is_number_float()) {
        e.value = j.get<double>();
        e.exact = Rational::from_double(e.value, 1000000, 1e-14);
        if (!e.exact) e.exact.reset();
    } else {
        throw ValidationError("ParseError", where + ": expected number or \"p/q\" string");
    }
    return e;
}

std::vector<HalfSpace> parse_facets(const OrderedJson& arr, int dim, const std::string& where,
                                    bool& float_input) {
    if (!arr.is_array() || arr.empty())
        throw ValidationError("ParseError", where + ": expected a nonempty facet array");
    std::vector<HalfSpace> hs;
    int k = 0;
    for (const auto& f : arr) {
        ++k;
        std::string ctx = where + "[" + std::to_string(k) + "]";
        if (!f.is_object() || !f.contains("normal") || !f.contains("offset"))
            throw ValidationError("ParseError", ctx + ": facet needs \"normal\" and \"offset\"");
        const auto& nj = f.at("normal");
        if (!nj.is_array() || static_cast<int>(nj.size()) != dim)
            throw ValidationError("ParseError", ctx + ": normal must have dim entries");
        HalfSpace h;
        h.normal = Vec(dim);
        std::vector<Rational> ex;
        bool all_exact = true;
        for (int i = 0; i < dim; ++i) {
            Entry e = parse_entry(nj.at(i), ctx + ".normal");
            h.normal[i] = e.value;
            if (e.exact)
                ex.push_back(*e.exact);
            else
                all_exact = false;
        }
        Entry off = parse_entry(f.at("offset"), ctx + ".offset");
        h.offset = off.value;
        if (all_exact && off.exact) {
            h.normal_exact = std::move(ex);
            h.offset_exact = off.exact;
        } else {
            float_input = true;
        }
        hs.push_back(std::move(h));
    }
    return hs;
}

OrderedJson entry_json(double v, const std::optional<Rational>& exact) {
    if (exact) {
        if (exact->is_integer()) return OrderedJson(exact->num());
        return OrderedJson(exact->str());
    }
    return OrderedJson(v);
}

}  // namespace

ParsedPolytope parse_polytope_json(const OrderedJson& j, const std::string& context) {
    if (!j.is_object()) throw ValidationError("ParseError", context + ": expected a JSON object");
    if (!j.contains("dim") || !j.at("dim").is_number_integer())
        throw ValidationError("ParseError", context + ": missing integer field \"dim\"");
    int dim = j.at("dim").get<int>();
    if (!j.contains("facets"))
        throw ValidationError("ParseError", context + ": missing field \"facets\"");

    ParsedPolytope pp;
    bool float_input = false;
    auto hs = parse_facets(j.at("facets"), dim, context + ".facets", float_input);
    pp.polytope = LabelledPolytope::from_halfspaces(dim, std::move(hs));

    if (j.contains("vertices")) {
        const auto& vj = j.at("vertices");
        if (!vj.is_array())
            throw ValidationError("ParseError", context + ": \"vertices\" must be an array");
        if (vj.size() != static_cast<size_t>(pp.polytope.num_vertices()))
            throw ValidationError("ParseError",
                                  context + ": vertex cross-validation failed: file lists " +
                                      std::to_string(vj.size()) + ", polytope has " +
                                      std::to_string(pp.polytope.num_vertices()));
        double tol = kGeomTol * pp.polytope.diameter();
        for (const auto& row : vj) {
            Vec v(dim);
            for (int i = 0; i < dim; ++i) v[i] = parse_entry(row.at(i), context + ".vertices").value;
            bool found = false;
            for (const auto& w : pp.polytope.vertices())
                if ((w - v).norm() <= 10 * tol) found = true;
            if (!found)
                throw ValidationError("ParseError",
                                      context + ": listed vertex does not lie on the polytope");
        }
    }
    if (j.contains("reference_labels")) {
        auto ref = parse_facets(j.at("reference_labels"), dim, context + ".reference_labels",
                                float_input);
        pp.reference_labels = pp.polytope.with_labels(std::move(ref));
    }
    pp.float_input = float_input;
    return pp;
}

ParsedPolytope parse_polytope_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("ParseError", "cannot open " + path);
    OrderedJson j;
    try {
        j = OrderedJson::parse(in);
    } catch (const std::exception& e) {
        throw ValidationError("ParseError", path + ": " + e.what());
    }
    return parse_polytope_json(j, path);
}

OrderedJson emit_polytope(const LabelledPolytope& P, const LabelledPolytope* reference) {
    OrderedJson j;
    j["dim"] = P.dim();
    j["facets"] = OrderedJson::array();
    auto facet_json = [](const HalfSpace& h) {
        OrderedJson f;
        f["normal"] = OrderedJson::array();
        for (int i = 0; i < h.normal.size(); ++i)
            f["normal"].push_back(entry_json(
                h.normal[i], h.normal_exact ? std::optional<Rational>((*h.normal_exact)[i])
                                            : std::nullopt));
        f["offset"] = entry_json(h.offset, h.offset_exact);
        return f;
    };
    for (const auto& h : P.halfspaces()) j["facets"].push_back(facet_json(h));
    j["vertices"] = OrderedJson::array();
    for (const auto& v : P.vertices()) {
        OrderedJson row = OrderedJson::array();
        for (int i = 0; i < v.size(); ++i) {
            auto r = Rational::from_double(v[i], 1000000, 1e-12);
            row.push_back(entry_json(v[i], r));
        }
        j["vertices"].push_back(row);
    }
    if (reference) {
        j["reference_labels"] = OrderedJson::array();
        for (const auto& h : reference->halfspaces())
            j["reference_labels"].push_back(facet_json(h));
    }
    return j;
}

OrderedJson example_polytope(const std::string& name) {
    auto facet = [](std::vector<std::string> normal, std::string offset) {
        OrderedJson f;
        f["normal"] = OrderedJson::array();
        for (auto& s : normal) {
            auto r = Rational::parse(s);
            if (r && r->is_integer())
                f["normal"].push_back(r->num());
            else
                f["normal"].push_back(s);
        }
        auto r = Rational::parse(offset);
        if (r && r->is_integer())
            f["offset"] = r->num();
        else
            f["offset"] = offset;
        return f;
    };
    OrderedJson j;
    j["dim"] = 2;
    j["facets"] = OrderedJson::array();
    if (name == "square") {
        j["facets"].push_back(facet({"1", "0"}, "1"));
        j["facets"].push_back(facet({"-1", "0"}, "1"));
        j["facets"].push_back(facet({"0", "1"}, "1"));
        j["facets"].push_back(facet({"0", "-1"}, "1"));
    } else if (name == "simplex") {
        j["facets"].push_back(facet({"1", "0"}, "0"));
        j["facets"].push_back(facet({"0", "1"}, "0"));
        j["facets"].push_back(facet({"-1", "-1"}, "1"));
    } else if (name == "hirzebruch") {
        j["facets"].push_back(facet({"7/5", "0"}, "-7/5"));
        j["facets"].push_back(facet({"-7/4", "0"}, "7/2"));
        j["facets"].push_back(facet({"0", "1"}, "0"));
        j["facets"].push_back(facet({"1", "-1"}, "0"));
        j["vertices"] = OrderedJson::array({{1, 0}, {1, 1}, {2, 2}, {2, 0}});
        j["reference_labels"] = OrderedJson::array();
        j["reference_labels"].push_back(facet({"1", "0"}, "-1"));
        j["reference_labels"].push_back(facet({"-1", "0"}, "2"));
        j["reference_labels"].push_back(facet({"0", "1"}, "0"));
        j["reference_labels"].push_back(facet({"1", "-1"}, "0"));
    } else if (name == "rectangle") {
        j["facets"].push_back(facet({"1", "0"}, "1"));
        j["facets"].push_back(facet({"-1/3", "0"}, "1"));
        j["facets"].push_back(facet({"0", "1"}, "1"));
        j["facets"].push_back(facet({"0", "-1"}, "1"));
    } else {
        throw ValidationError("ParseError", "unknown example \"" + name +
                                                "\" (square, simplex, hirzebruch, rectangle)");
    }
    return j;
}

namespace {

void render(const OrderedJson& j, const std::string& prefix, std::ostringstream& os) {
    if (j.is_object()) {
        for (const auto& [key, val] : j.items()) {
            std::string next = prefix.empty() ? key : prefix + "." + key;
            render(val, next, os);
        }
    } else if (j.is_array()) {
        bool scalars = std::all_of(j.begin(), j.end(),
                                   [](const OrderedJson& e) { return !e.is_structured(); });
        if (scalars) {
            os << prefix << " = " << j.dump() << "\n";
        } else {
            int i = 0;
            for (const auto& e : j) render(e, prefix + "[" + std::to_string(++i) + "]", os);
        }
    } else {
        os << prefix << " = " << j.dump() << "\n";
    }
}

}  // namespace

std::string render_text_report(const OrderedJson& j) {
    std::ostringstream os;
    render(j, "", os);
    return os.str();
}

}  // namespace abreu
