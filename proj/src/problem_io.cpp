#include <json.hpp>

#include <algorithm>
#include <initializer_list>
#include <string>

#include "perov/errors.hpp"
#include "perov/problem.hpp"

namespace perov {

namespace {

using json = nlohmann::json;

std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

const json& require_object(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) throw SyntaxError(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw SyntaxError(join(path, key), "unknown key");
        }
    }
    return j;
}

const json& member(const json& j, const std::string& path, std::string_view key) {
    const auto it = j.find(std::string(key));
    if (it == j.end()) throw SyntaxError(join(path, key), "missing");
    return *it;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw SyntaxError(path, "expected a number");
    return j.get<double>();
}

double number_at(const json& j, const std::string& path, std::string_view key) {
    return number(member(j, path, key), join(path, key));
}

std::vector<double> number_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw SyntaxError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

OperatorMatrix matrix_at(const json& j, const std::string& path, std::string_view key) {
    const std::string here = join(path, key);
    const json& m = member(j, path, key);
    if (!m.is_array()) throw SyntaxError(here, "expected an array of rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < m.size(); ++i) rows.push_back(number_list(m[i], here + "[" + std::to_string(i) + "]"));
    try {
        return OperatorMatrix::from_rows(rows);
    } catch (const Error& e) {
        throw ValidationError(here, e.what());
    }
}

PiecewisePolyMap map_from(const json& j, const std::string& path) {
    std::vector<double> def = number_list(member(j, path, "default"), join(path, "default"));
    std::vector<PiecewisePolyMap::Exception> exc;
    if (const auto it = j.find("exceptions"); it != j.end()) {
        const std::string ep = join(path, "exceptions");
        if (!it->is_array()) throw SyntaxError(ep, "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string ip = ep + "[" + std::to_string(i) + "]";
            const json& e = require_object((*it)[i], ip, {"at", "poly"});
            exc.push_back({number_at(e, ip, "at"), number_list(member(e, ip, "poly"), join(ip, "poly"))});
        }
    }
    try {
        return PiecewisePolyMap(std::move(def), std::move(exc));
    } catch (const InvalidArgument& e) {
        throw ValidationError(path, e.what());
    }
}

std::string string_at(const json& j, const std::string& path, std::string_view key) {
    const json& v = member(j, path, key);
    if (!v.is_string()) throw SyntaxError(join(path, key), "expected a string");
    return v.get<std::string>();
}

json map_to_json(const PiecewisePolyMap& m) {
    json exc = json::array();
    for (const auto& e : m.exceptions()) exc.push_back({{"at", e.at}, {"poly", e.poly}});
    return {{"default", m.default_poly()}, {"exceptions", exc}};
}

}  // namespace

ProblemInstance parse_problem_document(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw SyntaxError("", std::string("not valid JSON: ") + e.what());
    }
    require_object(root, "", {"domain", "d", "q", "f", "T", "hypothesis", "tolerances"});

    ProblemInstance p;
    const json& dom = require_object(member(root, "", "domain"), "domain", {"lo", "hi"});
    p.domain = {number_at(dom, "domain", "lo"), number_at(dom, "domain", "hi")};

    const json& d = require_object(member(root, "", "d"), "d", {"p", "alpha", "b"});
    p.d = {number_at(d, "d", "p"), number_at(d, "d", "alpha"), number_at(d, "d", "b")};

    const json& q = require_object(member(root, "", "q"), "q", {"p", "a", "eta"});
    p.q = {number_at(q, "q", "p"), number_at(q, "q", "a"), number_at(q, "q", "eta")};

    const json& f = require_object(member(root, "", "f"), "f", {"default", "exceptions"});
    p.f = map_from(f, "f");

    const json& t = member(root, "", "T");
    if (!t.is_object()) throw SyntaxError("T", "expected an object");
    const std::string kind = string_at(t, "T", "kind");
    if (kind == "identity") {
        require_object(t, "T", {"kind"});
        p.t = TransformSpec::identity();
    } else if (kind == "scaling") {
        require_object(t, "T", {"kind", "lambda"});
        p.t = TransformSpec::scaling(number_at(t, "T", "lambda"));
    } else if (kind == "piecewise") {
        require_object(t, "T", {"kind", "default", "exceptions"});
        p.t = TransformSpec::piecewise(map_from(t, "T"), p.domain);
    } else {
        throw SyntaxError("T.kind", "expected identity, scaling or piecewise, got '" + kind + "'");
    }

    const json& h = member(root, "", "hypothesis");
    if (!h.is_object()) throw SyntaxError("hypothesis", "expected an object");
    const std::string variant = string_at(h, "hypothesis", "variant");
    if (variant == "THR1") {
        require_object(h, "hypothesis", {"variant", "A"});
        p.hypothesis = Thr1{matrix_at(h, "hypothesis", "A")};
    } else if (variant == "THR2") {
        require_object(h, "hypothesis", {"variant", "A1", "A2", "A3"});
        p.hypothesis = Thr2{matrix_at(h, "hypothesis", "A1"), matrix_at(h, "hypothesis", "A2"),
                            matrix_at(h, "hypothesis", "A3")};
    } else {
        throw SyntaxError("hypothesis.variant", "expected THR1 or THR2, got '" + variant + "'");
    }

    if (const auto it = root.find("tolerances"); it != root.end()) {
        require_object(*it, "tolerances", {"order_eps", "match_eps"});
        if (it->contains("order_eps")) p.order.epsilon = number_at(*it, "tolerances", "order_eps");
        if (it->contains("match_eps")) p.match_eps = number_at(*it, "tolerances", "match_eps");
    }
    return p;
}

ProblemInstance parse_problem(std::string_view text) {
    ProblemInstance p = parse_problem_document(text);
    validate_problem(p);
    return p;
}

std::string serialize_problem(const ProblemInstance& p) {
    json root;
    root["domain"] = {{"lo", p.domain.lo}, {"hi", p.domain.hi}};
    root["d"] = {{"p", p.d.p}, {"alpha", p.d.alpha}, {"b", p.d.b}};
    root["q"] = {{"p", p.q.p}, {"a", p.q.a}, {"eta", p.q.eta}};
    root["f"] = map_to_json(p.f);
    json t = {{"kind", std::string(transform_kind_name(p.t.kind))}};
    if (p.t.kind == TransformSpec::Kind::Scaling) t["lambda"] = p.t.lambda;
    if (p.t.kind == TransformSpec::Kind::Piecewise) t.update(map_to_json(*p.t.map));
    root["T"] = t;
    if (const auto* h1 = std::get_if<Thr1>(&p.hypothesis)) {
        root["hypothesis"] = {{"variant", "THR1"}, {"A", h1->a.rows()}};
    } else {
        const auto& h2 = std::get<Thr2>(p.hypothesis);
        root["hypothesis"] = {{"variant", "THR2"}, {"A1", h2.a1.rows()}, {"A2", h2.a2.rows()}, {"A3", h2.a3.rows()}};
    }
    root["tolerances"] = {{"order_eps", p.order.epsilon}, {"match_eps", p.match_eps}};
    return root.dump(2) + "\n";
}

}  // namespace perov
