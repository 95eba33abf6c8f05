#include "rectfree/measure_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "rectfree/errors.hpp"

namespace rectfree {

namespace {

std::vector<double> number_array(const nlohmann::json& node, const char* what)
{
    if (!node.is_array())
        throw InvalidInput(std::string(what) + " must be a JSON array");
    std::vector<double> out;
    out.reserve(node.size());
    for (const auto& v : node) {
        if (!v.is_number())
            throw InvalidInput(std::string(what) + " must contain only numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

DiscreteMeasure parse_measure_json(std::string_view text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what());
    }

    if (doc.is_array())
        return from_singular_values(number_array(doc, "singular value list"));

    if (!doc.is_object() || !doc.contains("atoms"))
        throw InvalidInput("expected an object with an \"atoms\" array or a bare array");
    const auto atoms = number_array(doc.at("atoms"), "atoms");
    if (!doc.contains("weights"))
        return DiscreteMeasure::uniform(atoms);
    const auto weights = number_array(doc.at("weights"), "weights");
    return DiscreteMeasure(atoms, weights);
}

DiscreteMeasure load_measure(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("cannot open measure file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_measure_json(buf.str());
    } catch (const InvalidInput& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

} // namespace rectfree
