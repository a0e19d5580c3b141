#include "hko/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "hko/errors.hpp"
#include "hko/hkint.hpp"
#include "hko/measure.hpp"
#include "hko/norms.hpp"

namespace hko {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string box_str(const Box& b) {
    std::string s;
    for (int a = 0; a < b.dim(); ++a) {
        if (a) s += "x";
        s += "[" + fmt(b.lo(a)) + "," + fmt(b.hi(a)) + "]";
    }
    return s;
}

NormOptions norm_opts(const VerifyOptions& opt) {
    NormOptions n;
    n.bisect_rel_tol = opt.norm_rel_tol;
    n.integrator_tol = opt.integrator_tol;
    return n;
}

// Collects records and applies the uniform verdict rule.
struct Recorder {
    std::vector<CheckRecord>& out;

    void asserted(std::string id, std::string inputs, double lhs, double rhs,
                  double tolerance, std::string note = "") {
        CheckRecord r;
        r.id = std::move(id);
        r.inputs = std::move(inputs);
        r.lhs = lhs;
        r.rhs = rhs;
        r.slack = lhs - rhs;
        r.tolerance = tolerance;
        r.verdict = r.slack <= tolerance ? "pass" : "fail";
        r.note = std::move(note);
        out.push_back(std::move(r));
    }

    void measured(std::string id, std::string inputs, double lhs, double rhs,
                  std::string note) {
        CheckRecord r;
        r.id = std::move(id);
        r.inputs = std::move(inputs);
        r.lhs = lhs;
        r.rhs = rhs;
        r.slack = lhs - rhs;
        r.verdict = "pass";
        r.report_only = true;
        r.note = "report-only: " + std::move(note);
        out.push_back(std::move(r));
    }

    void errored(std::string id, std::string inputs, const std::string& what,
                 bool report_only = false) {
        CheckRecord r;
        r.id = std::move(id);
        r.inputs = std::move(inputs);
        r.verdict = "error";
        r.report_only = report_only;
        r.note = what;
        out.push_back(std::move(r));
    }
};

nlohmann::json json_num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

} // namespace

int VerifyReport::count(const std::string& verdict) const {
    int n = 0;
    for (const CheckRecord& r : checks)
        if (r.verdict == verdict) ++n;
    return n;
}

bool VerifyReport::all_passed() const {
    for (const CheckRecord& r : checks)
        if (r.verdict != "pass") return false;
    return true;
}

std::string VerifyReport::to_json_text() const {
    nlohmann::json j;
    j["suite"] = suite;
    nlohmann::json arr = nlohmann::json::array();
    for (const CheckRecord& r : checks) {
        nlohmann::json e;
        e["id"] = r.id;
        e["inputs"] = r.inputs;
        e["lhs"] = json_num(r.lhs);
        e["rhs"] = json_num(r.rhs);
        e["slack"] = json_num(r.slack);
        e["tolerance"] = json_num(r.tolerance);
        e["verdict"] = r.verdict;
        e["note"] = r.note;
        arr.push_back(std::move(e));
    }
    j["checks"] = std::move(arr);
    j["summary"] = {{"pass", count("pass")}, {"fail", count("fail")}, {"error", count("error")}};
    return j.dump(2);
}

std::string VerifyReport::to_text() const {
    std::string s = "suite " + suite + "\n";
    for (const CheckRecord& r : checks) {
        s += r.verdict + "  " + r.id + "  lhs=" + fmt(r.lhs) + " rhs=" + fmt(r.rhs) +
             " slack=" + fmt(r.slack) + " tol=" + fmt(r.tolerance);
        if (!r.note.empty()) s += "  (" + r.note + ")";
        s += "\n";
    }
    s += "summary pass=" + std::to_string(count("pass")) + " fail=" + std::to_string(count("fail")) +
         " error=" + std::to_string(count("error")) + "\n";
    return s;
}

VerifyReport check_weak_le_strong(const Corpus& c, const VerifyOptions& opt) {
    c.validate();
    VerifyReport rep;
    rep.suite = "weak_le_strong";
    Recorder rec{rep.checks};
    NormOptions nopt = norm_opts(opt);
    for (const auto& [fk, yk] : c.norm_pairs) {
        const FuncExpr& f = c.fn(fk);
        const NamedYoung& y = c.young(yk);
        std::string id = "weak_le_strong/" + fk + "|" + yk;
        std::string inputs = "f=" + fk + " theta=" + y.fn.describe() + " box=" + box_str(f.domain());
        try {
            NormResult w = weak_norm(f, y.fn, f.domain(), nopt);
            NormResult s = luxemburg_norm(f, y.fn, f.domain(), nopt);
            if (s.infinite) {
                rec.asserted(id, inputs, 0.0, 0.0, 0.0, "strong norm infinite; inclusion trivial");
                continue;
            }
            double tol = 3.0 * (opt.integrator_tol +
                                opt.norm_rel_tol * (std::fabs(w.value) + std::fabs(s.value)));
            rec.asserted(id, inputs, w.value, s.value, tol,
                         "weak=" + fmt(w.value) + " strong=" + fmt(s.value));
        } catch (const std::exception& e) {
            rec.errored(id, inputs, e.what());
        }
    }
    return rep;
}

VerifyReport check_indicator_formula(const Corpus& c, const VerifyOptions& opt) {
    c.validate();
    VerifyReport rep;
    rep.suite = "indicator_formula";
    Recorder rec{rep.checks};
    NormOptions nopt = norm_opts(opt);
    for (const auto& cs : c.indicator_cases) {
        const NamedYoung& y = c.young(cs.young);
        std::string id = "indicator_formula/n" + std::to_string(cs.n) + "r" + fmt(cs.radius) +
                         "|" + cs.young;
        std::string inputs = "ball radius " + fmt(cs.radius) + " centered in [0,4]^" +
                             std::to_string(cs.n) + " theta=" + y.fn.describe();
        try {
            std::vector<double> lo(cs.n, 0.0), hi(cs.n, 4.0);
            std::vector<double> blo(cs.n, 2.0 - cs.radius), bhi(cs.n, 2.0 + cs.radius);
            Box ambient(lo, hi);
            Box ball(blo, bhi);
            FuncExpr chi = FuncExpr::indicator(ball, ambient);
            double vol = ball_volume(std::vector<double>(cs.n, 2.0), cs.radius, cs.n);
            double closed = 1.0 / y_inverse(y.fn, 1.0 / vol);
            NormResult w = weak_norm(chi, y.fn, ambient, nopt);
            double rel = std::fabs(w.value - closed) / closed;
            rec.asserted(id, inputs, rel, 0.0, 1e-4,
                         "weak=" + fmt(w.value) + " closed=" + fmt(closed) +
                             " (relative difference vs 1e-4)");
        } catch (const std::exception& e) {
            rec.errored(id, inputs, e.what());
        }
    }
    return rep;
}

VerifyReport check_holder(const Corpus& c, const VerifyOptions& opt) {
    c.validate();
    VerifyReport rep;
    rep.suite = "holder";
    Recorder rec{rep.checks};
    NormOptions nopt = norm_opts(opt);
    std::map<std::string, YoungFn> conj;
    for (const auto& pr : c.holder_pairs) {
        const FuncExpr& h = c.fn(pr[0]);
        const FuncExpr& m = c.fn(pr[1]);
        const NamedYoung& y = c.young(pr[2]);
        std::string id = "holder/" + pr[0] + "*" + pr[1] + "|" + pr[2];
        std::string inputs = "h=" + pr[0] + " m=" + pr[1] + " theta=" + y.fn.describe() +
                             " box=" + box_str(h.domain());
        try {
            auto it = conj.find(pr[2]);
            if (it == conj.end()) it = conj.emplace(pr[2], complementary(y.fn)).first;
            const YoungFn& phi = it->second;

            FuncExpr prod = FuncExpr::abs_of(FuncExpr::product(h, m));
            IntegralResult I = hk_integrate(prod, h.domain(), opt.integrator_tol);
            NormResult nh = luxemburg_norm(h, y.fn, h.domain(), nopt);
            NormResult nm = luxemburg_norm(m, phi, m.domain(), nopt);
            double rhs_safe = 2.0 * nh.value * nm.value;
            double tol = 3.0 * (opt.integrator_tol + 1e-3 * (std::fabs(I.value) + rhs_safe));
            rec.asserted(id + "/safe", inputs, I.value, rhs_safe, tol,
                         "int|hm|=" + fmt(I.value) + " norm_h=" + fmt(nh.value) +
                             " conj_norm_m=" + fmt(nm.value));

            double rhs_sharp = nh.value * nm.value;
            std::string note;
            if (rhs_sharp > 0.0) {
                double ratio = I.value / rhs_sharp;
                note = "sharp form without factor 2: ratio=" + fmt(ratio) +
                       (ratio <= 1.0 + tol ? " (held)" : " (exceeded)");
            } else {
                note = "sharp form vacuous: zero product of norms, int|hm|=" + fmt(I.value);
            }
            rec.measured(id + "/sharp", inputs, I.value, rhs_sharp, note);
        } catch (const std::exception& e) {
            rec.errored(id, inputs, e.what());
        }
    }
    return rep;
}

VerifyReport check_triangle_weak(const Corpus& c, const VerifyOptions& opt) {
    c.validate();
    VerifyReport rep;
    rep.suite = "triangle_weak";
    Recorder rec{rep.checks};
    NormOptions nopt = norm_opts(opt);
    double max_k = 0.0;
    std::string max_k_pair = "none";
    for (const auto& pr : c.triangle_pairs) {
        const FuncExpr& f = c.fn(pr[0]);
        const FuncExpr& g = c.fn(pr[1]);
        const NamedYoung& y = c.young(pr[2]);
        std::string id = "triangle_weak/" + pr[0] + "+" + pr[1] + "|" + pr[2];
        std::string inputs = "f=" + pr[0] + " g=" + pr[1] + " theta=" + y.fn.describe() +
                             " box=" + box_str(f.domain());
        try {
            FuncExpr sum = FuncExpr::sum(f, g);
            DistributionFn df(f, f.domain());
            DistributionFn dg(g, g.domain());
            DistributionFn ds(sum, f.domain());
            double vol = f.domain().volume();
            double top = ds.ess_sup();
            double worst = 0.0, worst_t = 0.0;
            if (top > 0.0) {
                for (int i = 0; i < 64; ++i) {
                    double t = top * std::pow(10.0, -3.0 + 3.0 * i / 63.0);
                    double gap = ds(t) - df(0.5 * t) - dg(0.5 * t);
                    if (gap > worst) { worst = gap; worst_t = t; }
                }
            }
            rec.asserted(id + "/dist_subadd", inputs, worst, 0.0, 4e-3 * vol,
                         "max over 64 thresholds of dist(f+g,t)-dist(f,t/2)-dist(g,t/2)" +
                             (worst > 0.0 ? ", worst at t=" + fmt(worst_t) : std::string()));

            NormResult ws = weak_norm(ds, y.fn, nopt);
            NormResult wf = weak_norm(df, y.fn, nopt);
            NormResult wg = weak_norm(dg, y.fn, nopt);
            double denom = wf.value + wg.value;
            double K = denom > 0.0 ? ws.value / denom : (ws.value > 0.0 ? INFINITY : 1.0);
            if (K > max_k) { max_k = K; max_k_pair = pr[0] + "+" + pr[1] + "|" + pr[2]; }
            rec.measured(id + "/K", inputs, K, 1.0,
                         "observed K = |f+g|_w / (|f|_w + |g|_w); the triangle claim corresponds to K <= 1");
        } catch (const std::exception& e) {
            rec.errored(id, inputs, e.what());
        }
    }
    rec.measured("triangle_weak/max_K", "all triangle pairs", max_k, 1.0,
                 "largest observed triangle ratio, at " + max_k_pair);
    return rep;
}

VerifyReport check_dominance_equivalence(const Corpus& c, const VerifyOptions& opt) {
    c.validate();
    VerifyReport rep;
    rep.suite = "dominance_equivalence";
    Recorder rec{rep.checks};
    NormOptions nopt = norm_opts(opt);

    // One distribution estimate per function, shared across all pairs.
    std::map<std::string, DistributionFn> dists;
    for (const NamedFn& nf : c.functions)
        dists.emplace(nf.key, DistributionFn(nf.fn, nf.fn.domain()));

    for (const auto& pr : c.dominance_pairs) {
        const NamedYoung& y1 = c.young(pr.y1);
        const NamedYoung& y2 = c.young(pr.y2);
        std::string base = "dominance_equivalence/" + pr.y1 + "<=" + pr.y2;
        std::string inputs = "theta1=" + y1.fn.describe() + " theta2=" + y2.fn.describe();
        try {
            std::optional<double> C = dominates(y1.fn, y2.fn);
            if (pr.expect_c) {
                if (!C) {
                    rec.asserted(base + "/constant", inputs, 1.0, 0.0, 0.0,
                                 "no dominating constant found; expected C=" + fmt(*pr.expect_c));
                    continue;
                }
                rec.asserted(base + "/constant", inputs, std::fabs(*C - *pr.expect_c), 0.0,
                             1e-9 * std::max(1.0, *pr.expect_c),
                             "C=" + fmt(*C) + " expected=" + fmt(*pr.expect_c));
                for (const NamedFn& nf : c.functions) {
                    const DistributionFn& d = dists.at(nf.key);
                    NormResult w1 = weak_norm(d, y1.fn, nopt);
                    NormResult w2 = weak_norm(d, y2.fn, nopt);
                    double rhs = *C * w2.value;
                    double tol = 3.0 * (opt.norm_rel_tol * (w1.value + rhs) + 1e-12);
                    rec.asserted(base + "/" + nf.key, inputs + " f=" + nf.key, w1.value, rhs, tol,
                                 "weak1=" + fmt(w1.value) + " C*weak2=" + fmt(rhs));
                }
            } else {
                rec.asserted(base + "/constant", inputs, C ? 1.0 : 0.0, 0.0, 0.0,
                             C ? "unexpected dominating constant C=" + fmt(*C)
                               : "no dominating constant, as expected");
                // Reverse direction: find an indicator whose norms violate
                // the inequality even with C = 1e3.
                bool found = false;
                for (double r = 1.0; r <= 1e7; r *= 10.0) {
                    Box ambient({0.0}, {4.0 * r});
                    Box ball({r}, {3.0 * r});
                    FuncExpr chi = FuncExpr::indicator(ball, ambient);
                    NormResult w1 = weak_norm(chi, y1.fn, ambient, nopt);
                    NormResult w2 = weak_norm(chi, y2.fn, ambient, nopt);
                    if (!w1.infinite && !w2.infinite && w1.value > 1e3 * w2.value) {
                        rec.asserted(base + "/witness", inputs + " f=indicator(r=" + fmt(r) + ")",
                                     1e3 * w2.value, w1.value, 0.0,
                                     "norm inequality fails for C=1e3: weak1=" + fmt(w1.value) +
                                         " > 1e3*weak2=" + fmt(1e3 * w2.value));
                        found = true;
                        break;
                    }
                }
                if (!found)
                    rec.asserted(base + "/witness", inputs, 1.0, 0.0, 0.0,
                                 "no indicator witness found for C=1e3 with radius up to 1e7");
            }
        } catch (const std::exception& e) {
            rec.errored(base, inputs, e.what());
        }
    }
    return rep;
}

VerifyReport check_l1_embedding(const Corpus& c, const VerifyOptions& opt) {
    c.validate();
    VerifyReport rep;
    rep.suite = "l1_embedding";
    Recorder rec{rep.checks};

    // |f| integrals and essential sups are reused across all (theta, alpha).
    std::map<std::string, IntegralResult> abs_ints;
    std::map<std::string, double> ess;
    for (const NamedFn& nf : c.functions) {
        abs_ints.emplace(nf.key, hk_integrate(FuncExpr::abs_of(nf.fn), nf.fn.domain(),
                                              opt.integrator_tol));
        ess.emplace(nf.key, DistributionFn(nf.fn, nf.fn.domain()).ess_sup());
    }

    for (const NamedYoung& y : c.youngs) {
        if (!y.minorant) continue;
        auto [r, s] = *y.minorant;
        for (const NamedFn& nf : c.functions) {
            double volK = nf.fn.domain().volume();
            for (double alpha : {0.5, 1.0, 2.0}) {
                std::string id = "l1_embedding/" + y.key + "/" + nf.key + "/a" + fmt(alpha);
                std::string inputs = "theta=" + y.fn.describe() + " minorant r=" + fmt(r) +
                                     " s=" + fmt(s) + " f=" + nf.key + " alpha=" + fmt(alpha);
                try {
                    const IntegralResult& ia = abs_ints.at(nf.key);
                    // Absolute tolerance scaled to the modular's magnitude so
                    // steep integrands (e.g. exponential of the oscillator)
                    // stay within the cell budget.
                    double bound = y.fn(alpha * ess.at(nf.key)) * volK;
                    double mtol = opt.integrator_tol * std::max(1.0, std::isfinite(bound) ? bound : 1e300);
                    PointFn pf;
                    const FuncExpr& f = nf.fn;
                    const YoungFn& th = y.fn;
                    pf.f = [&f, &th, alpha](std::span<const double> x) {
                        double v = th(alpha * std::fabs(f.eval(x)));
                        return std::isfinite(v) ? v : 1e300;
                    };
                    IntegralResult im = hk_integrate(pf, f.domain(), mtol);
                    double lhs = alpha * ia.value;
                    double rhs = (im.value + s * volK) / r;
                    double tol = 3.0 * (alpha * (ia.error_estimate + opt.integrator_tol) +
                                        (im.error_estimate + mtol) / r + 1e-12);
                    rec.asserted(id, inputs, lhs, rhs, tol,
                                 "alpha*int|f|=" + fmt(lhs) + " (modular+s*vol)/r=" + fmt(rhs));
                } catch (const std::exception& e) {
                    rec.errored(id, inputs, e.what());
                }
            }
        }
    }
    return rep;
}

VerifyReport check_convergence_in_measure(const Corpus& c, const VerifyOptions& opt) {
    c.validate();
    VerifyReport rep;
    rep.suite = "convergence_in_measure";
    Recorder rec{rep.checks};
    NormOptions nopt = norm_opts(opt);
    for (const auto& seq : c.convergence_seqs) {
        const FuncExpr& h = c.fn(seq.h);
        const NamedYoung& y = c.young(seq.young);
        std::string base = "convergence_in_measure/" + seq.h + "+chi/" + seq.young;
        std::string inputs = "h=" + seq.h + " ball=" + box_str(seq.ball) + " theta=" +
                             y.fn.describe() + "; h_n = h + (1/n)chi, difference (1/n)chi";
        try {
            FuncExpr chi = FuncExpr::indicator(seq.ball, h.domain());
            double w1 = 0.0;
            std::vector<int> ns = {1, 2, 4, 8, 16, 32, 64, 128, 256};
            for (int n : ns) {
                FuncExpr gn = FuncExpr::scaled(chi, 1.0 / n);
                NormResult wn = weak_norm(gn, y.fn, h.domain(), nopt);
                if (n == 1) w1 = wn.value;
                double ratio = n * wn.value / w1;
                double sym = std::max(ratio, 1.0 / ratio);
                rec.asserted(base + "/n" + std::to_string(n), inputs, sym, 1.0, 0.1,
                             "n*|h_n-h|_w / |h_1-h|_w = " + fmt(ratio) +
                                 " (1/n decay within factor 1.1)");
            }
            double ball_vol = seq.ball.volume();
            for (double t : {0.1, 0.01}) {
                double worst = 0.0;
                for (int n : ns) {
                    if (1.0 / n < t) {
                        FuncExpr gn = FuncExpr::scaled(chi, 1.0 / n);
                        worst = std::max(worst, dist(gn, h.domain(), t));
                    }
                }
                rec.asserted(base + "/vanish_t" + fmt(t), inputs, worst, 0.0, 0.0,
                             "dist(h_n-h, t) once 1/n < t=" + fmt(t));
            }
            double stay = 0.0;
            for (int n : ns) {
                FuncExpr gn = FuncExpr::scaled(chi, 1.0 / n);
                stay = std::max(stay, std::fabs(dist(gn, h.domain(), 1e-3) - ball_vol));
            }
            rec.asserted(base + "/stays_t0.001", inputs, stay, 0.0, 1e-12,
                         "1/n never drops below t=1e-3, so dist stays at the ball volume " +
                             fmt(ball_vol));
        } catch (const std::exception& e) {
            rec.errored(base, inputs, e.what());
        }
    }
    return rep;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "weak_le_strong",        "indicator_formula", "holder",      "triangle_weak",
        "dominance_equivalence", "l1_embedding",      "convergence_in_measure",
    };
    return names;
}

VerifyReport run_suites(const Corpus& c, const std::vector<std::string>& names,
                        const VerifyOptions& opt) {
    using CheckFn = VerifyReport (*)(const Corpus&, const VerifyOptions&);
    static const std::map<std::string, CheckFn> table = {
        {"weak_le_strong", check_weak_le_strong},
        {"indicator_formula", check_indicator_formula},
        {"holder", check_holder},
        {"triangle_weak", check_triangle_weak},
        {"dominance_equivalence", check_dominance_equivalence},
        {"l1_embedding", check_l1_embedding},
        {"convergence_in_measure", check_convergence_in_measure},
    };

    std::vector<std::string> expanded;
    for (const std::string& n : names) {
        if (n == "all") {
            for (const std::string& s : suite_names())
                if (std::find(expanded.begin(), expanded.end(), s) == expanded.end())
                    expanded.push_back(s);
        } else if (table.count(n)) {
            if (std::find(expanded.begin(), expanded.end(), n) == expanded.end())
                expanded.push_back(n);
        } else {
            throw SpecError("unknown suite '" + n + "'");
        }
    }
    if (expanded.empty()) throw SpecError("no suites selected");

    VerifyReport all;
    all.suite = expanded.size() == suite_names().size() ? "all" : "";
    for (size_t i = 0; i < expanded.size(); ++i) {
        if (all.suite != "all") all.suite += (i ? "," : "") + expanded[i];
        VerifyReport r = table.at(expanded[i])(c, opt);
        all.checks.insert(all.checks.end(), r.checks.begin(), r.checks.end());
    }
    return all;
}

} // namespace hko
