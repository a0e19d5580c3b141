#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hko/errors.hpp"
#include "hko/hkint.hpp"
#include "hko/json_io.hpp"
#include "hko/norms.hpp"
#include "hko/verify.hpp"
#include "hko/young.hpp"

namespace {

using nlohmann::json;

json json_num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// "lo,hi;lo,hi" -> Box
hko::Box parse_box_flag(const std::string& text) {
    std::vector<double> lo, hi;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t semi = text.find(';', pos);
        std::string axis = text.substr(pos, semi == std::string::npos ? std::string::npos
                                                                      : semi - pos);
        size_t comma = axis.find(',');
        if (comma == std::string::npos)
            throw hko::SpecError("--box: expected \"lo,hi\" per axis, got '" + axis + "'");
        try {
            size_t used = 0;
            double l = std::stod(axis.substr(0, comma), &used);
            if (used != comma) throw std::invalid_argument(axis);
            std::string rest = axis.substr(comma + 1);
            double h = std::stod(rest, &used);
            if (used != rest.size()) throw std::invalid_argument(axis);
            lo.push_back(l);
            hi.push_back(h);
        } catch (const std::exception&) {
            throw hko::SpecError("--box: cannot parse interval '" + axis + "'");
        }
        if (semi == std::string::npos) break;
        pos = semi + 1;
    }
    return hko::Box(lo, hi);
}

void emit(const std::string& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::fputs(payload.c_str(), stdout);
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw hko::SpecError(out_path + ": cannot open for writing");
    out << payload;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> parts;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t comma = s.find(',', pos);
        parts.push_back(s.substr(pos, comma == std::string::npos ? std::string::npos
                                                                 : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return parts;
}

int cmd_integrate(const std::string& fn_path, const std::string& box_flag, double tol,
                  const std::string& out, const std::string& format) {
    hko::FuncExpr f = hko::load_function_spec(fn_path);
    hko::Box box = box_flag.empty() ? f.domain() : parse_box_flag(box_flag);
    hko::IntegralResult r = hko::hk_integrate(f, box, tol);
    if (format == "json") {
        json j;
        j["command"] = "integrate";
        j["fn"] = fn_path;
        j["tol"] = tol;
        j["value"] = json_num(r.value);
        j["error_estimate"] = json_num(r.error_estimate);
        j["cells"] = r.cells;
        emit(j.dump(2) + "\n", out);
    } else {
        emit("value " + fmt(r.value) + "\nerror_estimate " + fmt(r.error_estimate) +
                 "\ncells " + std::to_string(r.cells) + "\n",
             out);
    }
    return 0;
}

int cmd_norm(const std::string& kind, const std::string& fn_path, const std::string& young_path,
             const std::string& box_flag, double tol, const std::string& out,
             const std::string& format) {
    hko::FuncExpr f = hko::load_function_spec(fn_path);
    hko::YoungFn th = hko::load_young_spec(young_path);
    hko::Box box = box_flag.empty() ? f.domain() : parse_box_flag(box_flag);
    hko::NormOptions opt;
    opt.bisect_rel_tol = tol;
    hko::NormResult r = kind == "weak" ? hko::weak_norm(f, th, box, opt)
                                       : hko::luxemburg_norm(f, th, box, opt);
    if (format == "json") {
        json j;
        j["command"] = "norm";
        j["kind"] = kind;
        j["fn"] = fn_path;
        j["young"] = young_path;
        j["value"] = json_num(r.value);
        j["infinite"] = r.infinite;
        j["bracket"] = {json_num(r.bracket_lo), json_num(r.bracket_hi)};
        j["modular_at_value"] = json_num(r.modular_at_value);
        j["iterations"] = r.iterations;
        j["cells"] = r.cells;
        emit(j.dump(2) + "\n", out);
    } else {
        emit((r.infinite ? std::string("inf") : fmt(r.value)) + "\n", out);
    }
    return 0;
}

int cmd_young(const std::string& young_path, const std::string& out, const std::string& format) {
    hko::YoungFn th = hko::load_young_spec(young_path);
    hko::Delta2Result d2 = hko::is_delta2(th);
    hko::DeltaPrimeResult dp = hko::is_delta_prime(th);
    if (format == "json") {
        json j;
        j["command"] = "young";
        j["young"] = young_path;
        j["describe"] = th.describe();
        j["convex"] = th.convex();
        j["delta2"] = {{"holds", d2.holds},
                       {"witness_sup", json_num(d2.witness_sup)},
                       {"extended_sup", json_num(d2.extended_sup)}};
        json ks = json::array();
        for (const auto& w : dp.witnesses)
            ks.push_back({{"k", w.k},
                          {"sup_ratio", json_num(w.sup_ratio)},
                          {"argmax_t", json_num(w.argmax_t)},
                          {"ratio_at_1e6", json_num(w.ratio_at_1e6)}});
        j["delta_prime"] = {{"holds", dp.holds}, {"witnesses", std::move(ks)}};
        j["inverse_at_1"] = json_num(hko::y_inverse(th, 1.0));
        emit(j.dump(2) + "\n", out);
    } else {
        std::string s = th.describe() + "\nconvex " + (th.convex() ? "yes" : "no") +
                        "\ndelta2 " + (d2.holds ? "yes" : "no") + " (sup ratio " +
                        fmt(d2.extended_sup) + ")\ndelta_prime " + (dp.holds ? "yes" : "no") +
                        "\ninverse_at_1 " + fmt(hko::y_inverse(th, 1.0)) + "\n";
        emit(s, out);
    }
    return 0;
}

int cmd_verify(const std::string& suite_flag, const std::string& corpus_flag,
               const std::string& fn_path, const std::string& young_path, double tol,
               const std::string& out, const std::string& format) {
    // Per the run contract, every referenced file must parse before any
    // computation starts, even ones this subcommand does not consume.
    if (!fn_path.empty()) hko::load_function_spec(fn_path);
    if (!young_path.empty()) hko::load_young_spec(young_path);
    hko::Corpus corpus =
        corpus_flag == "default" ? hko::default_corpus() : hko::load_corpus(corpus_flag);
    hko::VerifyOptions opt;
    opt.integrator_tol = tol;
    hko::VerifyReport rep = hko::run_suites(corpus, split_commas(suite_flag), opt);
    emit(format == "json" ? rep.to_json_text() + "\n" : rep.to_text(), out);
    return rep.all_passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gauge-integration toolkit: Henstock-Kurzweil integrals, Young functions, "
                 "strong/weak Luxemburg norms, and inequality verification suites"};
    app.require_subcommand(1);

    std::string fn_path, young_path, box_flag, out_path;
    std::string format = "json";
    std::string kind = "strong";
    std::string suite_flag = "all";
    std::string corpus_flag = "default";
    double tol_integrate = 1e-4;
    double tol_norm = 1e-5;
    double tol_verify = 1e-4;

    CLI::App* integrate = app.add_subcommand("integrate", "Integrate a function spec over a box");
    integrate->add_option("--fn", fn_path, "Function spec JSON path")->required();
    integrate->add_option("--box", box_flag, "Integration box \"lo,hi;lo,hi\" (default: the domain)");
    integrate->add_option("--tol", tol_integrate, "Integrator tolerance")->capture_default_str();
    integrate->add_option("--out", out_path, "Write output to this path instead of stdout");
    integrate->add_option("--format", format, "Output format: json|text")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();

    CLI::App* norm = app.add_subcommand("norm", "Compute a strong or weak Luxemburg norm");
    norm->add_option("--kind", kind, "strong|weak")
        ->check(CLI::IsMember({"strong", "weak"}))
        ->capture_default_str();
    norm->add_option("--fn", fn_path, "Function spec JSON path")->required();
    norm->add_option("--young", young_path, "Young spec JSON path")->required();
    norm->add_option("--box", box_flag, "Norm box \"lo,hi;lo,hi\" (default: the domain)");
    norm->add_option("--tol", tol_norm, "Bisection relative tolerance")->capture_default_str();
    norm->add_option("--out", out_path, "Write output to this path instead of stdout");
    norm->add_option("--format", format, "Output format: json|text")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();

    CLI::App* young = app.add_subcommand("young", "Classify a Young function (convexity, "
                                                  "doubling conditions, inverse)");
    young->add_option("--young", young_path, "Young spec JSON path")->required();
    young->add_option("--out", out_path, "Write output to this path instead of stdout");
    young->add_option("--format", format, "Output format: json|text")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();

    CLI::App* verify = app.add_subcommand("verify", "Run verification suites over a corpus");
    verify->add_option("--suite", suite_flag, "all or comma-separated suite names")
        ->capture_default_str();
    verify->add_option("--corpus", corpus_flag, "default or a corpus manifest path")
        ->capture_default_str();
    verify->add_option("--fn", fn_path, "Extra function spec to validate before running");
    verify->add_option("--young", young_path, "Extra Young spec to validate before running");
    verify->add_option("--tol", tol_verify, "Integrator tolerance")->capture_default_str();
    verify->add_option("--out", out_path, "Write the report to this path instead of stdout");
    verify->add_option("--format", format, "Output format: json|text")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;   // usage problems exit 2; --help exits 0
    }

    try {
        if (integrate->parsed())
            return cmd_integrate(fn_path, box_flag, tol_integrate, out_path, format);
        if (norm->parsed())
            return cmd_norm(kind, fn_path, young_path, box_flag, tol_norm, out_path, format);
        if (young->parsed()) return cmd_young(young_path, out_path, format);
        if (verify->parsed())
            return cmd_verify(suite_flag, corpus_flag, fn_path, young_path, tol_verify,
                              out_path, format);
    } catch (const hko::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const hko::SpecError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
