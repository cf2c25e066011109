#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nkconf/ops.hpp"
#include "nkconf/search.hpp"
#include "nkconf/systematic.hpp"

namespace {

enum Exit { Ok = 0, ParamError = 1, VerifyFailed = 2, AuditFailed = 3, Unreachable = 4 };

struct Flags {
    int k = 5;
    long long nmax = 0;
    std::uint64_t seed = 0;
    double tol_incidence = 1e-8;
    double tol_separation = 1e-5;
    std::string out, svg, report;
    bool labels = false, pencils = false, no_du2 = false;
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) nk::fail("IOError", "cannot write " + path);
    f << text;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        write_file(path, text);
}

std::string report_text(const nk::Configuration& c, const nk::VerificationReport& rep, const nk::Tolerance& tol) {
    std::string s = rep.summary() + "\n";
    if (rep.passed) {
        auto pr = nk::detect_pencils(c, tol);
        s += fmt::format("pencils: p = {}, q = {}\n", pr.p, pr.q);
    }
    if (!c.meta.expr.empty()) s += "expr: " + c.meta.expr + "\n";
    return s;
}

int cmd_construct(const Flags& fl, const std::string& spec, const nk::Tolerance& tol) {
    nk::Configuration c = nk::construct(nk::parse_expr(spec), fl.seed, tol);
    auto rep = nk::verify(c, tol);
    emit(fl.out, nk::to_json(c));
    if (!fl.svg.empty()) write_file(fl.svg, nk::render_svg(c, {800, fl.labels, fl.pencils}));
    std::string txt = report_text(c, rep, tol);
    if (!fl.report.empty())
        write_file(fl.report, txt);
    else
        std::cerr << txt;
    return rep.passed ? Ok : VerifyFailed;
}

int cmd_verify(const Flags& fl, const std::string& file, const nk::Tolerance& tol) {
    nk::Configuration c = nk::load_json_file(file);
    auto rep = nk::verify(c, tol);
    emit(fl.report, report_text(c, rep, tol));
    return rep.passed ? Ok : VerifyFailed;
}

int cmd_render(const Flags& fl, const std::string& file) {
    nk::Configuration c = nk::load_json_file(file);
    emit(fl.svg.empty() ? fl.out : fl.svg, nk::render_svg(c, {800, fl.labels, fl.pencils}));
    return Ok;
}

nk::SearchState searched(const Flags& fl) {
    nk::SearchOptions o;
    o.k = fl.k;
    o.n_max = fl.nmax > 0 ? fl.nmax : (fl.k == 6 ? 7350 : 576);
    o.du2 = !fl.no_du2;
    return nk::run_search(o);
}

int cmd_search(const Flags& fl) {
    auto s = searched(fl);
    long long lo = nk::search_floor(fl.k);
    auto a = nk::audit(s, lo, s.n_max);
    emit(fl.out, nk::search_summary(s, lo, s.n_max, a));
    if (!fl.report.empty()) write_file(fl.report, nk::search_json(s, lo, s.n_max, a));
    for (const auto& f : a.failures) std::cerr << "audit: " << f << "\n";
    return a.ok() ? Ok : AuditFailed;
}

int cmd_certify(const Flags& fl, long long n) {
    auto s = searched(fl);
    if (n > s.n_max) nk::fail("BadParameter", fmt::format("n = {} exceeds n_max = {}", n, s.n_max));
    if (!s.has(n)) {
        std::cerr << fmt::format("({}_{}) unreachable (in missing list)\n", n, fl.k);
        return Unreachable;
    }
    nk::Expr e = nk::certificate(s, n);
    auto a = nk::audit(s, n, n);
    std::string txt = fmt::format("{}\naudit: {}\n", e.to_string(), a.ok() ? "pass" : a.failures.front());
    emit(fl.out, txt);
    return a.ok() ? Ok : AuditFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geometric and symbolic (n_k) configuration engine"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file supplying any of the global flags");
    Flags fl;
    app.add_option("--k", fl.k, "degree for search and certify");
    app.add_option("--nmax", fl.nmax, "largest n searched (default 576 for k = 5, 7350 for k = 6)");
    app.add_option("--seed", fl.seed, "seed for random free choices");
    app.add_option("--tol-incidence", fl.tol_incidence, "relative incidence residual bound");
    app.add_option("--tol-separation", fl.tol_separation, "relative separation threshold");
    app.add_option("--out", fl.out, "main output path (stdout when omitted)");
    app.add_option("--svg", fl.svg, "SVG output path");
    app.add_option("--report", fl.report, "report output path");
    app.add_flag("--labels", fl.labels, "label elements in SVG output");
    app.add_flag("--pencils", fl.pencils, "highlight detected pencils in SVG output");
    app.add_flag("--no-du2", fl.no_du2, "skip the ad hoc DU2 stage");

    std::string spec, file;
    long long n = 0;
    auto* c_construct = app.add_subcommand("construct", "build and verify a configuration from an expression");
    c_construct->add_option("spec", spec, "expression, e.g. \"(D4 5)\"")->required();
    auto* c_verify = app.add_subcommand("verify", "verify a configuration JSON file");
    c_verify->add_option("file", file)->required();
    auto* c_render = app.add_subcommand("render", "render a configuration JSON file to SVG");
    c_render->add_option("file", file)->required();
    auto* c_search = app.add_subcommand("search", "run the staged bound search");
    auto* c_certify = app.add_subcommand("certify", "print and audit the certificate for one n");
    c_certify->add_option("n", n)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? Ok : ParamError;
    }
    try {
        nk::Tolerance tol{fl.tol_incidence, fl.tol_separation};
        tol.check();
        if ((c_search->parsed() || c_certify->parsed()) && fl.k != 5 && fl.k != 6)
            nk::fail("UnsupportedK", fmt::format("search supports k = 5 and k = 6 (got {})", fl.k));
        if (c_construct->parsed()) return cmd_construct(fl, spec, tol);
        if (c_verify->parsed()) return cmd_verify(fl, file, tol);
        if (c_render->parsed()) return cmd_render(fl, file);
        if (c_search->parsed()) return cmd_search(fl);
        if (c_certify->parsed()) return cmd_certify(fl, n);
    } catch (const nk::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == "VerificationFailure" ? VerifyFailed : ParamError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ParamError;
    }
    return ParamError;
}
