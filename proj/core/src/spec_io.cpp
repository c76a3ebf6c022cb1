// JSON spec file parsing. Schema:
//   {"type": "table",         "entries": {"-1": 0.4, "1": 0.6}}
//   {"type": "poisson_prize", "nu": 3, "epsilon": 0.01}
//   {"type": "two_point",     "nu": 2, "mu": 3, "p_loss": 0.5}
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ruincalc/errors.hpp"
#include "ruincalc/payoff.hpp"

namespace ruincalc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
    throw SpecParseError("spec: " + what);
}

const json& field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end())
        fail(std::string("missing field \"") + name + "\"");
    return *it;
}

int int_field(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_number_integer())
        fail(std::string("field \"") + name + "\" must be an integer");
    return v.get<int>();
}

double number_field(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_number())
        fail(std::string("field \"") + name + "\" must be a number");
    return v.get<double>();
}

int parse_offset_key(const std::string& key) {
    int value = 0;
    const char* first = key.data();
    const char* last = key.data() + key.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        fail("entries key \"" + key + "\" is not an integer");
    return value;
}

FamilySpec from_json(const json& j) {
    if (!j.is_object())
        fail("root must be a JSON object");
    const json& type = field(j, "type");
    if (!type.is_string())
        fail("field \"type\" must be a string");
    const std::string t = type.get<std::string>();

    if (t == "table") {
        const json& entries = field(j, "entries");
        if (!entries.is_object())
            fail("field \"entries\" must be an object of {\"k\": p_k}");
        TableSpec s;
        for (const auto& [key, val] : entries.items()) {
            if (!val.is_number())
                fail("entries[\"" + key + "\"] must be a number");
            s.entries[parse_offset_key(key)] = val.get<double>();
        }
        return s;
    }
    if (t == "poisson_prize") {
        PoissonPrizeSpec s;
        s.nu = int_field(j, "nu");
        s.epsilon = number_field(j, "epsilon");
        return s;
    }
    if (t == "two_point") {
        TwoPointSpec s;
        s.nu = int_field(j, "nu");
        s.mu = int_field(j, "mu");
        s.p_loss = number_field(j, "p_loss");
        return s;
    }
    fail("unknown type \"" + t +
         "\" (expected table, poisson_prize or two_point)");
}

} // namespace

FamilySpec parse_spec_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(e.what()); // nlohmann messages carry byte position context
    }
    return from_json(j);
}

FamilySpec parse_spec_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw SpecParseError("cannot open spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_spec_json(buf.str());
    } catch (const SpecParseError& e) {
        throw SpecParseError(std::string(e.what()) + " [file: " + path + "]");
    }
}

} // namespace ruincalc
