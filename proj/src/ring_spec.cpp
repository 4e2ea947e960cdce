#include "homcert/ring_spec.hpp"

#include "homcert/error.hpp"
#include "homcert/hash.hpp"

#include "json.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace homcert {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& where, const std::string& what)
{
    throw Error(ErrorCode::validation_error, where + ": " + what);
}

template <class T>
T get(const json& j, const char* name)
{
    if (!j.contains(name))
        invalid(name, "missing");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception&) {
        invalid(name, "has the wrong type");
    }
}

std::string location(std::string_view text, std::size_t byte)
{
    std::size_t line = 1, column = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

Vec coordinates(const json& j, std::size_t dim, const std::string& where, PrimeField f)
{
    std::vector<std::int64_t> raw;
    try {
        raw = j.get<std::vector<std::int64_t>>();
    } catch (const json::exception&) {
        invalid(where, "must be a list of integers");
    }
    if (raw.size() != dim)
        invalid(where, "has " + std::to_string(raw.size()) + " entries, expected " + std::to_string(dim));
    Vec v(dim);
    for (std::size_t k = 0; k < dim; ++k)
        v[k] = f.from_int(raw[k]);
    return v;
}

json preset_document(const FiniteDimAlgebra& a, const std::string& name)
{
    const FiniteDimAlgebra flat = a.flattened(4096);
    json labels = json::array(), table = json::array(), ideal = json::array();
    for (std::size_t u = 0; u < flat.dim(); ++u) {
        labels.push_back(flat.basis_label(u));
        for (std::size_t v = 0; v < flat.dim(); ++v)
            for (const auto& e : flat.multiply_basis(u, v))
                table.push_back({u, v, e.col, e.value});
    }
    for (const auto& m : flat.maxideal_basis())
        ideal.push_back(m);
    return {{"name", name},
            {"field", {{"p", a.field().p()}}},
            {"type", "structure_constants"},
            {"dim", flat.dim()},
            {"basis_labels", labels},
            {"mult_table", table},
            {"unit", flat.unit()},
            {"maxideal_basis", ideal}};
}

RingSpec finish(FiniteDimAlgebra a, std::string label, const json& doc)
{
    std::string canonical = doc.dump();
    std::string hash = sha256_hex(canonical);
    return {std::move(a), std::move(label), std::move(canonical), std::move(hash)};
}

std::size_t parse_count(std::string_view s, std::string_view preset)
{
    std::size_t value = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || end != s.data() + s.size() || s.empty())
        throw Error(ErrorCode::invalid_argument, "bad number '" + std::string(s) + "' in preset '" + std::string(preset) + "'");
    return value;
}

} // namespace

RingSpec parse_ring_spec(std::string_view document)
{
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::parse_error, location(document, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
    }
    if (!doc.is_object())
        throw Error(ErrorCode::parse_error, "line 1, column 1: ring spec must be a JSON object");

    if (!doc.contains("field") || !doc.at("field").is_object())
        invalid("field", "missing or not an object");
    std::int64_t p = 0;
    try {
        p = doc.at("field").at("p").get<std::int64_t>();
    } catch (const json::exception&) {
        invalid("field.p", "missing or not an integer");
    }
    if (p < 2 || p > PrimeField::max_characteristic || !is_prime(static_cast<std::uint32_t>(p)))
        throw Error(ErrorCode::parse_error, "field.p: " + std::to_string(p) + " is not a prime below 2^31");
    const PrimeField f(static_cast<std::uint32_t>(p));

    const std::string type = get<std::string>(doc, "type");
    std::string label = doc.contains("name") ? get<std::string>(doc, "name") : std::string();

    if (type == "truncated_polynomial") {
        const auto e = get<std::int64_t>(doc, "exponent");
        if (e < 2)
            invalid("exponent", "must be at least 2");
        if (label.empty())
            label = "trunc:" + std::to_string(e);
        return finish(truncated_polynomial_algebra(f, static_cast<std::size_t>(e)), label, doc);
    }
    if (type != "structure_constants")
        invalid("type", "'" + type + "' is neither truncated_polynomial nor structure_constants");

    const auto dim = get<std::int64_t>(doc, "dim");
    if (dim < 1)
        invalid("dim", "must be positive");
    const auto n = static_cast<std::size_t>(dim);
    auto labels = get<std::vector<std::string>>(doc, "basis_labels");
    if (labels.size() != n)
        invalid("basis_labels", "has " + std::to_string(labels.size()) + " entries, expected " + std::to_string(n));

    std::vector<StructureConstant> table;
    const json& rows = doc.contains("mult_table") ? doc.at("mult_table") : json();
    if (!rows.is_array())
        invalid("mult_table", "missing or not a list");
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const std::string where = "mult_table[" + std::to_string(k) + "]";
        std::vector<std::int64_t> r;
        try {
            r = rows[k].get<std::vector<std::int64_t>>();
        } catch (const json::exception&) {
            invalid(where, "must be [u, v, w, scalar]");
        }
        if (r.size() != 4)
            invalid(where, "must be [u, v, w, scalar]");
        for (int c = 0; c < 3; ++c)
            if (r[c] < 0 || r[c] >= dim)
                invalid(where, "basis index " + std::to_string(r[c]) + " out of range");
        table.push_back({static_cast<std::size_t>(r[0]), static_cast<std::size_t>(r[1]), static_cast<std::size_t>(r[2]), r[3]});
    }
    if (!doc.contains("unit"))
        invalid("unit", "missing");
    Vec unit = coordinates(doc.at("unit"), n, "unit", f);
    if (!doc.contains("maxideal_basis") || !doc.at("maxideal_basis").is_array())
        invalid("maxideal_basis", "missing or not a list");
    std::vector<Vec> ideal;
    for (std::size_t k = 0; k < doc.at("maxideal_basis").size(); ++k)
        ideal.push_back(coordinates(doc.at("maxideal_basis")[k], n, "maxideal_basis[" + std::to_string(k) + "]", f));

    std::optional<FiniteDimAlgebra> a;
    try {
        a = FiniteDimAlgebra::from_structure_constants(f, std::move(labels), table, std::move(unit), std::move(ideal));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::parse_error || e.code() == ErrorCode::validation_error)
            throw;
        invalid(e.code() == ErrorCode::not_unital ? "unit" : "mult_table", e.what());
    }
    if (!a->is_local())
        invalid("maxideal_basis", a->locality_failure());
    if (label.empty())
        label = "spec:" + sha256_hex(doc.dump()).substr(0, 12);
    return finish(std::move(*a), label, doc);
}

RingSpec ring_preset(std::string_view name, std::uint32_t p)
{
    const PrimeField f(p);
    const std::string label(name);
    if (name == "field")
        return finish(ground_field_algebra(f), label, preset_document(ground_field_algebra(f), label));
    if (name.starts_with("trunc:")) {
        const std::size_t e = parse_count(name.substr(6), name);
        return finish(truncated_polynomial_algebra(f, e), label,
                      json{{"field", {{"p", p}}}, {"type", "truncated_polynomial"}, {"exponent", e}});
    }
    if (name.starts_with("sqzero:")) {
        const FiniteDimAlgebra a = square_zero_algebra(f, parse_count(name.substr(7), name));
        return finish(a, label, preset_document(a, label));
    }
    if (name.starts_with("trunc2:")) {
        const std::string_view rest = name.substr(7);
        const auto comma = rest.find(',');
        if (comma == std::string_view::npos)
            throw Error(ErrorCode::invalid_argument, "preset '" + label + "' needs two exponents");
        const FiniteDimAlgebra a = tensor_algebra(truncated_polynomial_algebra(f, parse_count(rest.substr(0, comma), name)),
                                                  truncated_polynomial_algebra(f, parse_count(rest.substr(comma + 1), name)));
        return finish(a, label, preset_document(a, label));
    }
    throw Error(ErrorCode::invalid_argument, "unknown ring preset '" + label + "'");
}

RingSpec load_ring(std::string_view preset_or_path, std::uint32_t p)
{
    if (preset_or_path == "field" || preset_or_path.starts_with("trunc:") || preset_or_path.starts_with("sqzero:")
        || preset_or_path.starts_with("trunc2:"))
        return ring_preset(preset_or_path, p);
    std::ifstream in{std::string(preset_or_path)};
    if (!in)
        throw Error(ErrorCode::invalid_argument, "'" + std::string(preset_or_path) + "' is neither a preset nor a readable file");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_ring_spec(text.str());
}

} // namespace homcert
