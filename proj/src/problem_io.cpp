#include "mpecv/problem_io.hpp"

#include "mpecv/errors.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace mpecv {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void invalid(const std::string& where, const std::string& what)
{
    throw ValidationError(where + ": " + what);
}

Rational rational_from_json(const json& j, const std::string& where)
{
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const ValidationError& e) {
            invalid(where, e.what());
        }
    }
    if (j.is_number_integer())
        return Rational(j.get<long long>());
    if (j.is_number())
        invalid(where, "write non-integer rationals as strings such as \"3/2\"");
    invalid(where, "expected a rational");
}

RationalVector vector_from_json(const json& j, const std::string& where)
{
    if (!j.is_array() || j.empty())
        invalid(where, "expected a nonempty array of rationals");
    RationalVector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v[static_cast<Index>(i)] = rational_from_json(j[i], where + "[" + std::to_string(i) + "]");
    return v;
}

ordered_json vector_to_json(const RationalVector& v)
{
    ordered_json out = ordered_json::array();
    for (Index i = 0; i < v.size(); ++i)
        out.push_back(to_string(v[i]));
    return out;
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where)
{
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            invalid(where, "unknown key '" + item.key() + "'");
}

const json& required(const json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key))
        invalid(where, std::string("missing '") + key + "'");
    return j.at(key);
}

Expr expr_at(const json& j, const std::string& where);

std::vector<Expr> expr_list(const json& j, const std::string& where, std::size_t min_size)
{
    if (!j.is_array())
        invalid(where, "expected an array of expressions");
    if (j.size() < min_size)
        invalid(where, "expected at least " + std::to_string(min_size) + " children");
    std::vector<Expr> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(expr_at(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

Expr expr_at(const json& j, const std::string& where)
{
    if (!j.is_object() || j.size() != 1)
        invalid(where, "an expression node is an object with exactly one key");
    const std::string key = j.begin().key();
    const json& body = j.begin().value();
    const std::string path = where + "." + key;
    if (key == "const")
        return constant(rational_from_json(body, path));
    if (key == "var") {
        if (!body.is_number_integer() || body.get<long long>() < 0)
            invalid(path, "variable index must be a nonnegative integer");
        return var(body.get<std::size_t>());
    }
    if (key == "add" || key == "mul" || key == "max" || key == "min") {
        const ExprKind kind = key == "add"   ? ExprKind::Add
                              : key == "mul" ? ExprKind::Mul
                              : key == "max" ? ExprKind::Max
                                             : ExprKind::Min;
        return Expr::nary(kind, expr_list(body, path, 2));
    }
    if (key == "neg")
        return -expr_at(body, path);
    if (key == "abs")
        return abs(expr_at(body, path));
    if (key == "exp")
        return exp(expr_at(body, path));
    if (key == "div") {
        if (!body.is_array() || body.size() != 2)
            invalid(path, "div takes [numerator, denominator]");
        return Expr::quotient(expr_at(body[0], path + "[0]"), expr_at(body[1], path + "[1]"));
    }
    if (key == "pow") {
        only_keys(body, {"base", "exp"}, path);
        const json& e = required(body, "exp", path);
        if (!e.is_number_integer() || e.get<long long>() < 1)
            invalid(path + ".exp", "exponent must be an integer >= 1");
        return pow(expr_at(required(body, "base", path), path + ".base"), e.get<int>());
    }
    invalid(where, "unknown node '" + key + "'");
}

std::vector<Expr> optional_list(const json& doc, const char* key)
{
    if (!doc.contains(key))
        return {};
    return expr_list(doc.at(key), key, 0);
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte)
{
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

} // namespace

Expr expr_from_json(const json& j) { return expr_at(j, "expr"); }

ordered_json expr_to_json(const Expr& e)
{
    auto list = [&]() {
        ordered_json a = ordered_json::array();
        for (const auto& c : e.children())
            a.push_back(expr_to_json(c));
        return a;
    };
    switch (e.kind()) {
    case ExprKind::Const: return {{"const", to_string(e.value())}};
    case ExprKind::Var: return {{"var", e.index()}};
    case ExprKind::Add: return {{"add", list()}};
    case ExprKind::Mul: return {{"mul", list()}};
    case ExprKind::Max: return {{"max", list()}};
    case ExprKind::Min: return {{"min", list()}};
    case ExprKind::Div: return {{"div", list()}};
    case ExprKind::Neg: return {{"neg", expr_to_json(e.child())}};
    case ExprKind::Abs: return {{"abs", expr_to_json(e.child())}};
    case ExprKind::Exp: return {{"exp", expr_to_json(e.child())}};
    case ExprKind::Pow: {
        ordered_json body;
        body["base"] = expr_to_json(e.child());
        body["exp"] = e.exponent();
        return {{"pow", body}};
    }
    }
    return {};
}

MPECProblem parse_problem(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto [line, column] = line_column(text, e.byte);
        std::string reason = e.what();
        if (auto pos = reason.find("parse error"); pos != std::string::npos)
            reason = reason.substr(pos);
        throw ParseError(line, column, reason);
    }
    if (!doc.is_object())
        invalid("problem", "top level must be an object");
    only_keys(doc,
              {"format", "name", "dimension", "objective", "inequalities", "equalities", "G", "H",
               "manual_subdifferentials", "reference_subdifferentials", "points"},
              "problem");
    const json& format = required(doc, "format", "problem");
    if (!format.is_number_integer() || format.get<int>() != problem_format_version)
        invalid("format", "unsupported format, expected " + std::to_string(problem_format_version));

    MPECProblem p;
    if (doc.contains("name")) {
        if (!doc["name"].is_string())
            invalid("name", "expected a string");
        p.name = doc["name"].get<std::string>();
    }
    const json& dim = required(doc, "dimension", "problem");
    if (!dim.is_number_integer() || dim.get<long long>() < 1)
        invalid("dimension", "expected a positive integer");
    p.dimension = dim.get<Index>();
    p.objective = expr_at(required(doc, "objective", "problem"), "objective");
    p.inequalities = optional_list(doc, "inequalities");
    p.equalities = optional_list(doc, "equalities");
    p.g = optional_list(doc, "G");
    p.h = optional_list(doc, "H");

    if (doc.contains("manual_subdifferentials")) {
        const json& list = doc["manual_subdifferentials"];
        if (!list.is_array())
            invalid("manual_subdifferentials", "expected an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string where = "manual_subdifferentials[" + std::to_string(i) + "]";
            only_keys(list[i], {"function", "point", "vertices", "value"}, where);
            ManualEntry m;
            const json& f = required(list[i], "function", where);
            if (!f.is_string())
                invalid(where + ".function", "expected a function id");
            m.function = f.get<std::string>();
            m.point = vector_from_json(required(list[i], "point", where), where + ".point");
            const json& verts = required(list[i], "vertices", where);
            if (!verts.is_array() || verts.empty())
                invalid(where + ".vertices", "expected a nonempty array of points");
            for (std::size_t v = 0; v < verts.size(); ++v)
                m.vertices.push_back(vector_from_json(verts[v], where + ".vertices[" + std::to_string(v) + "]"));
            if (list[i].contains("value"))
                m.value = rational_from_json(list[i]["value"], where + ".value");
            p.manual.push_back(std::move(m));
        }
    }
    if (doc.contains("reference_subdifferentials")) {
        const json& list = doc["reference_subdifferentials"];
        if (!list.is_array())
            invalid("reference_subdifferentials", "expected an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string where = "reference_subdifferentials[" + std::to_string(i) + "]";
            only_keys(list[i], {"function", "point", "points"}, where);
            ReferenceSet r;
            const json& f = required(list[i], "function", where);
            if (!f.is_string())
                invalid(where + ".function", "expected a function id");
            r.function = f.get<std::string>();
            r.point = vector_from_json(required(list[i], "point", where), where + ".point");
            const json& pts = required(list[i], "points", where);
            if (!pts.is_array() || pts.empty())
                invalid(where + ".points", "expected a nonempty array of points");
            for (std::size_t v = 0; v < pts.size(); ++v)
                r.points.push_back(vector_from_json(pts[v], where + ".points[" + std::to_string(v) + "]"));
            p.references.push_back(std::move(r));
        }
    }
    if (doc.contains("points")) {
        const json& list = doc["points"];
        if (!list.is_array())
            invalid("points", "expected an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string where = "points[" + std::to_string(i) + "]";
            only_keys(list[i], {"label", "coords"}, where);
            const json& label = required(list[i], "label", where);
            if (!label.is_string())
                invalid(where + ".label", "expected a string");
            p.points.push_back(
                {label.get<std::string>(), vector_from_json(required(list[i], "coords", where), where + ".coords")});
        }
    }
    p.validate();
    return p;
}

MPECProblem load_problem(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_problem(buffer.str());
}

std::string serialize_problem(const MPECProblem& p)
{
    ordered_json doc;
    doc["format"] = problem_format_version;
    doc["name"] = p.name;
    doc["dimension"] = p.dimension;
    doc["objective"] = expr_to_json(p.objective);
    auto list = [](const std::vector<Expr>& es) {
        ordered_json a = ordered_json::array();
        for (const auto& e : es)
            a.push_back(expr_to_json(e));
        return a;
    };
    doc["inequalities"] = list(p.inequalities);
    doc["equalities"] = list(p.equalities);
    doc["G"] = list(p.g);
    doc["H"] = list(p.h);
    ordered_json manual = ordered_json::array();
    for (const auto& m : p.manual) {
        ordered_json entry;
        entry["function"] = m.function;
        entry["point"] = vector_to_json(m.point);
        entry["vertices"] = ordered_json::array();
        for (const auto& v : m.vertices)
            entry["vertices"].push_back(vector_to_json(v));
        if (m.value)
            entry["value"] = to_string(*m.value);
        manual.push_back(std::move(entry));
    }
    doc["manual_subdifferentials"] = std::move(manual);
    ordered_json refs = ordered_json::array();
    for (const auto& r : p.references) {
        ordered_json entry;
        entry["function"] = r.function;
        entry["point"] = vector_to_json(r.point);
        entry["points"] = ordered_json::array();
        for (const auto& v : r.points)
            entry["points"].push_back(vector_to_json(v));
        refs.push_back(std::move(entry));
    }
    doc["reference_subdifferentials"] = std::move(refs);
    ordered_json points = ordered_json::array();
    for (const auto& pt : p.points)
        points.push_back({{"label", pt.label}, {"coords", vector_to_json(pt.coords)}});
    doc["points"] = std::move(points);
    return doc.dump(2) + "\n";
}

} // namespace mpecv
