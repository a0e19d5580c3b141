#include "hko/json_io.hpp"

#include <fstream>

#include <json.hpp>

#include "hko/errors.hpp"
#include "hko/expr.hpp"

namespace hko {

namespace {

using nlohmann::json;

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError(path + ": cannot open file");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw SpecError(path + ": " + e.what());
    }
}

double need_number(const json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_number())
        throw SpecError(ctx + ": missing numeric field '" + std::string(key) + "'");
    return j[key].get<double>();
}

std::string need_string(const json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_string())
        throw SpecError(ctx + ": missing string field '" + std::string(key) + "'");
    return j[key].get<std::string>();
}

Box parse_box_json(const json& j, const std::string& ctx) {
    if (!j.is_array() || j.empty())
        throw SpecError(ctx + ": box must be a nonempty array of [lo, hi] pairs");
    std::vector<double> lo, hi;
    for (const json& iv : j) {
        if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
            throw SpecError(ctx + ": each interval must be a [lo, hi] number pair");
        lo.push_back(iv[0].get<double>());
        hi.push_back(iv[1].get<double>());
    }
    try {
        return Box(lo, hi);
    } catch (const std::exception& e) {
        throw SpecError(ctx + ": " + e.what());
    }
}

FuncExpr builtin_from_json(const json& b, const Box& domain, const std::string& ctx) {
    std::string name = need_string(b, "name", ctx);
    json params = b.value("params", json::object());
    try {
        if (name == "indicator") {
            if (!params.contains("support"))
                throw SpecError("indicator needs params.support");
            Box support = parse_box_json(params["support"], ctx + " (support)");
            double value = params.contains("value") ? need_number(params, "value", ctx) : 1.0;
            return FuncExpr::indicator(support, domain, value);
        }
        if (name == "power") return FuncExpr::power(need_number(params, "p", ctx), domain);
        if (name == "linear") return FuncExpr::linear(domain);
        if (name == "constant") return FuncExpr::constant(need_number(params, "c", ctx), domain);
        if (name == "osc_deriv") return FuncExpr::osc_deriv(domain);
        if (name == "piecewise_const") {
            if (!params.contains("pieces") || !params["pieces"].is_array())
                throw SpecError("piecewise_const needs params.pieces");
            std::vector<std::pair<Box, double>> pieces;
            for (const json& p : params["pieces"])
                pieces.emplace_back(parse_box_json(p.at("box"), ctx + " (piece box)"),
                                    need_number(p, "value", ctx));
            return FuncExpr::piecewise_const(std::move(pieces), domain);
        }
    } catch (const SpecError&) {
        throw;
    } catch (const std::exception& e) {
        throw SpecError(ctx + ": " + e.what());
    }
    throw SpecError(ctx + ": unknown builtin '" + name + "'");
}

FuncExpr fn_from_json(const json& j, const std::string& ctx) {
    if (!j.is_object()) throw SpecError(ctx + ": function spec must be a JSON object");
    std::string kind = need_string(j, "kind", ctx);
    if (!j.contains("domain")) throw SpecError(ctx + ": missing 'domain'");
    Box domain = parse_box_json(j["domain"], ctx + " (domain)");

    if (kind == "expr") {
        std::string text = need_string(j, "expr", ctx);
        std::vector<SingularPoint> singular;
        if (j.contains("singular")) {
            if (!j["singular"].is_array())
                throw SpecError(ctx + ": 'singular' must be an array of coordinate arrays");
            for (const json& pt : j["singular"]) {
                if (!pt.is_array() || pt.size() != static_cast<size_t>(domain.dim()))
                    throw SpecError(ctx + ": singular point has wrong dimension");
                SingularPoint sp;
                for (const json& v : pt) {
                    if (!v.is_number()) throw SpecError(ctx + ": singular coordinates must be numbers");
                    sp.point.push_back(v.get<double>());
                }
                singular.push_back(std::move(sp));
            }
        }
        try {
            return FuncExpr(parse_expr(text, domain.dim()), domain, std::move(singular));
        } catch (const SpecError&) {
            throw;
        } catch (const std::exception& e) {
            throw SpecError(ctx + ": " + e.what());
        }
    }
    if (kind == "builtin") {
        if (j.contains("singular"))
            throw SpecError(ctx + ": 'singular' is only accepted for kind=expr "
                                  "(builtins declare their own)");
        if (!j.contains("builtin") || !j["builtin"].is_object())
            throw SpecError(ctx + ": missing 'builtin' object");
        return builtin_from_json(j["builtin"], domain, ctx);
    }
    throw SpecError(ctx + ": 'kind' must be \"expr\" or \"builtin\"");
}

YoungFn young_from_json(const json& j, const std::string& ctx) {
    if (!j.is_object()) throw SpecError(ctx + ": Young spec must be a JSON object");
    std::string family = need_string(j, "family", ctx);
    json params = j.value("params", json::object());
    try {
        if (family == "power") return YoungFn::power(need_number(params, "p", ctx));
        if (family == "scaled_power")
            return YoungFn::scaled_power(need_number(params, "p", ctx),
                                         need_number(params, "c", ctx));
        if (family == "expm") return YoungFn::expm();
        if (family == "log1p") return YoungFn::log1p_fn();
        if (family == "table") {
            if (!params.contains("nodes") || !params["nodes"].is_array())
                throw SpecError("table needs params.nodes as [[t, value], ...]");
            std::vector<std::pair<double, double>> nodes;
            for (const json& n : params["nodes"]) {
                if (!n.is_array() || n.size() != 2 || !n[0].is_number() || !n[1].is_number())
                    throw SpecError("table nodes must be [t, value] number pairs");
                nodes.emplace_back(n[0].get<double>(), n[1].get<double>());
            }
            bool convex = params.value("convex", true);
            return YoungFn::table(std::move(nodes), convex);
        }
    } catch (const SpecError& e) {
        throw SpecError(ctx + ": " + e.what());
    } catch (const std::exception& e) {
        throw SpecError(ctx + ": " + e.what());
    }
    throw SpecError(ctx + ": unknown family '" + family + "'");
}

} // namespace

FuncExpr load_function_spec(const std::string& path) {
    return fn_from_json(read_json(path), path);
}

YoungFn load_young_spec(const std::string& path) {
    return young_from_json(read_json(path), path);
}

Corpus load_corpus(const std::string& path) {
    json j = read_json(path);
    if (!j.is_object()) throw SpecError(path + ": corpus manifest must be a JSON object");
    Corpus c;
    if (!j.contains("functions") || !j["functions"].is_array() || j["functions"].empty())
        throw SpecError(path + ": manifest needs a nonempty 'functions' array");
    if (!j.contains("youngs") || !j["youngs"].is_array() || j["youngs"].empty())
        throw SpecError(path + ": manifest needs a nonempty 'youngs' array");

    for (const json& e : j["functions"]) {
        std::string name = need_string(e, "name", path);
        if (!e.contains("spec")) throw SpecError(path + ": function '" + name + "' needs a 'spec'");
        c.functions.push_back({name, fn_from_json(e["spec"], path + "#" + name).named(name)});
    }
    for (const json& e : j["youngs"]) {
        std::string name = need_string(e, "name", path);
        if (!e.contains("spec")) throw SpecError(path + ": young '" + name + "' needs a 'spec'");
        NamedYoung ny{name, young_from_json(e["spec"], path + "#" + name), std::nullopt};
        if (e.contains("minorant")) {
            const json& m = e["minorant"];
            if (!m.is_array() || m.size() != 2 || !m[0].is_number() || !m[1].is_number())
                throw SpecError(path + ": minorant must be [r, s]");
            ny.minorant = std::pair{m[0].get<double>(), m[1].get<double>()};
        }
        c.youngs.push_back(std::move(ny));
    }

    if (j.contains("norm_pairs")) {
        for (const json& p : j["norm_pairs"]) {
            if (!p.is_array() || p.size() != 2)
                throw SpecError(path + ": norm_pairs entries must be [function, young]");
            c.norm_pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
        }
    } else {
        for (const NamedFn& f : c.functions)
            for (const NamedYoung& y : c.youngs)
                c.norm_pairs.emplace_back(f.key, y.key);
    }
    auto read_triples = [&](const char* key, std::vector<std::array<std::string, 3>>& out) {
        if (!j.contains(key)) return;
        for (const json& p : j[key]) {
            if (!p.is_array() || p.size() != 3)
                throw SpecError(path + ": " + key + " entries must be 3-element arrays");
            out.push_back({p[0].get<std::string>(), p[1].get<std::string>(),
                           p[2].get<std::string>()});
        }
    };
    read_triples("triangle_pairs", c.triangle_pairs);
    read_triples("holder_pairs", c.holder_pairs);
    if (j.contains("dominance_pairs")) {
        for (const json& p : j["dominance_pairs"]) {
            if (!p.is_array() || p.size() != 3)
                throw SpecError(path + ": dominance_pairs entries must be [y1, y2, C-or-null]");
            Corpus::DominancePair dp{p[0].get<std::string>(), p[1].get<std::string>(), std::nullopt};
            if (!p[2].is_null()) dp.expect_c = p[2].get<double>();
            c.dominance_pairs.push_back(std::move(dp));
        }
    }
    if (j.contains("indicator_cases")) {
        for (const json& p : j["indicator_cases"]) {
            if (!p.is_array() || p.size() != 3)
                throw SpecError(path + ": indicator_cases entries must be [n, r, young]");
            c.indicator_cases.push_back(
                {p[0].get<int>(), p[1].get<double>(), p[2].get<std::string>()});
        }
    }
    if (j.contains("convergence")) {
        for (const json& p : j["convergence"]) {
            c.convergence_seqs.push_back({need_string(p, "h", path),
                                          parse_box_json(p.at("ball"), path + " (ball)"),
                                          need_string(p, "young", path)});
        }
    }
    try {
        c.validate();
    } catch (const std::exception& e) {
        throw SpecError(path + ": " + e.what());
    }
    return c;
}

} // namespace hko
