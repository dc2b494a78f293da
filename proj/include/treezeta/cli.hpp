#pragma once

// Command-line front end. run_cli parses argv, runs one subcommand and
// writes results to `out` and diagnostics to `err`. Exit codes: 0 success,
// 1 verification failure, 2 usage or input error, 3 mathematical error.

#include <CLI11.hpp>

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "treezeta/errors.hpp"
#include "treezeta/euler.hpp"
#include "treezeta/lad.hpp"
#include "treezeta/scalar.hpp"
#include "treezeta/suites.hpp"
#include "treezeta/weights.hpp"
#include "treezeta/zeta.hpp"

namespace treezeta::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitMath = 3;

struct Options {
    std::string graph, lad, from, to, at, root, s, x, suite;
    long series = -1;
    std::uint64_t n_max = 0;
    std::uint64_t seed = 0;
    std::size_t instances = 20;
    unsigned jobs = 1;
};

namespace detail {

// Parses "root" or "color:ID" into a diagram source.
inline LadSource parse_source(const LocalActionDiagram& d, const std::string& text) {
    if (text == "root") return LadSource::root();
    const std::string prefix = "color:";
    if (text.rfind(prefix, 0) == 0) return LadSource::at_color(d.color(text.substr(prefix.size())));
    throw ValidationError("--from must be 'root' or 'color:ID', got '" + text + "'");
}

inline long series_horizon(const Options& o) {
    if (o.series < 0) throw ValidationError("--series must be non-negative");
    return o.series;
}

inline int cmd_zeta(const Options& o, std::ostream& out, std::ostream& err) {
    WeightedGraph g = WeightedGraph::load(o.graph);
    const Site u = g.site(o.from), w = g.site(o.to);
    ParsedExponent s = parse_exponent(o.s);
    if (!setting_gamma_ok(g)) err << "note: Setting [Gamma] fails; the value is formal\n";
    if (s.exact) {
        out << format_scalar(zeta_det<Rational>(g, u, w, s.integer)) << "\n";
        if (o.series >= 0)
            out << "series L=" << o.series << " "
                << format_scalar(zeta_series<Rational>(g, u, w, s.integer, series_horizon(o))) << "\n";
    } else {
        out << format_scalar(zeta_det<Complex>(g, u, w, s.value)) << "\n";
        if (o.series >= 0)
            out << "series L=" << o.series << " "
                << format_scalar(zeta_series<Complex>(g, u, w, s.value, series_horizon(o))) << "\n";
    }
    return kExitOk;
}

inline int cmd_coeffs(const Options& o, std::ostream& out) {
    WeightedGraph g = WeightedGraph::load(o.graph);
    CoefficientTable t = dirichlet_coefficients_wlit(g, g.site(o.from), g.site(o.to), o.n_max);
    out << "n\ta_n\tb_n\n" << t.to_tsv();
    return kExitOk;
}

inline int cmd_chi(const Options& o, std::ostream& out) {
    WeightedGraph g = WeightedGraph::load(o.graph);
    out << format_scalar(chi_at(g, g.site(o.at))) << "\n";
    return kExitOk;
}

inline int cmd_unimodular(const Options& o, std::ostream& out) {
    WeightedGraph g = WeightedGraph::load(o.graph);
    out << (is_unimodular(g) ? "true" : "false") << "\n";
    return kExitOk;
}

// Prints det(I − xT) and its reciprocal, the weighted Ihara zeta value.
inline int cmd_ihara(const Options& o, std::ostream& out) {
    WeightedGraph g = WeightedGraph::load(o.graph);
    Matrix<Rational> t = transition_weight(g);
    ParsedExponent x = parse_exponent(o.x);
    if (x.exact) {
        Rational r = ihara_reciprocal(t, Rational(x.integer));
        out << "reciprocal " << format_scalar(r) << "\n";
        if (sgn(r) == 0) throw PoleError("the weighted Ihara zeta function has a pole at x = " + o.x);
        Rational z = 1 / r;
        out << "zeta " << format_scalar(z) << "\n";
    } else {
        Complex r = ihara_reciprocal(t, x.value);
        out << "reciprocal " << format_scalar(r) << "\n";
        if (std::abs(r) <= 1e-12) throw PoleError("the weighted Ihara zeta function has a pole at x = " + o.x);
        out << "zeta " << format_scalar(Complex(1.0) / r) << "\n";
    }
    return kExitOk;
}

inline int cmd_lad_zeta(const Options& o, std::ostream& out) {
    LadInput in = load_lad_file(o.lad);
    const LocalActionDiagram& d = in.diagram;
    const WeightedGraph& g = d.graph();
    const std::size_t c0 = g.vertex(o.root);
    const LadSource r = parse_source(d, o.from);
    const Site u = g.site(o.to);
    ParsedExponent s = parse_exponent(o.s);
    if (s.exact) {
        out << format_scalar(zeta_pclosed<Rational>(d, in.inversion, c0, r, u, s.integer)) << "\n";
        if (o.series >= 0)
            out << "series L=" << o.series << " "
                << format_scalar(zeta_pclosed_series<Rational>(d, in.inversion, c0, r, u, s.integer,
                                                               series_horizon(o)))
                << "\n";
    } else {
        out << format_scalar(zeta_pclosed<Complex>(d, in.inversion, c0, r, u, s.value)) << "\n";
        if (o.series >= 0)
            out << "series L=" << o.series << " "
                << format_scalar(
                       zeta_pclosed_series<Complex>(d, in.inversion, c0, r, u, s.value, series_horizon(o)))
                << "\n";
    }
    return kExitOk;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
    suites::InstanceFn fn = suites::find_suite(o.suite);
    if (o.instances == 0) throw ValidationError("--instances must be positive");
    suites::SuiteOptions opt{o.seed, o.instances, std::max(1u, o.jobs)};
    out << "suite " << o.suite << " seed " << o.seed << " instances " << o.instances << "\n";
    std::vector<Report> reports = suites::run_suite(fn, opt);
    std::size_t checks = 0, failures = 0;
    for (const Report& r : reports) {
        out << r.text();
        checks += r.lines.size();
        failures += r.failures();
    }
    out << "summary checks=" << checks << " failures=" << failures << "\n";
    return failures == 0 ? kExitOk : kExitVerifyFailed;
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Double-coset zeta functions of groups acting on trees from finite local data"};
    app.require_subcommand(1);
    Options o;

    auto add_s = [&](CLI::App* c) {
        c->add_option("--s", o.s, "argument s: an integer (exact) or re[,im] (floating)")->required();
        c->add_option("--series", o.series, "also print the truncated series at horizon L");
    };
    CLI::App* zeta = app.add_subcommand("zeta", "zeta function of an edge-weighted graph");
    zeta->add_option("--graph", o.graph, "graph JSON file")->required();
    zeta->add_option("--from", o.from, "source vertex or edge")->required();
    zeta->add_option("--to", o.to, "target vertex or edge")->required();
    add_s(zeta);

    CLI::App* coeffs = app.add_subcommand("coeffs", "Dirichlet coefficient table a_n, b_n");
    coeffs->add_option("--graph", o.graph, "graph JSON file")->required();
    coeffs->add_option("--from", o.from, "source vertex or edge")->required();
    coeffs->add_option("--to", o.to, "target vertex or edge")->required();
    coeffs->add_option("--n-max", o.n_max, "largest n")->required()->check(CLI::PositiveNumber);

    CLI::App* chi = app.add_subcommand("chi", "Euler-Poincare characteristic at a vertex or edge");
    chi->add_option("--graph", o.graph, "graph JSON file")->required();
    chi->add_option("--at", o.at, "vertex or edge")->required();

    CLI::App* unimod = app.add_subcommand("unimodular", "balanced products on every closed path");
    unimod->add_option("--graph", o.graph, "graph JSON file")->required();

    CLI::App* ihara = app.add_subcommand("ihara", "weighted Ihara zeta function of the transfer operator");
    ihara->add_option("--graph", o.graph, "graph JSON file")->required();
    ihara->add_option("--x", o.x, "argument x: an integer (exact) or re[,im] (floating)")->required();

    CLI::App* lad = app.add_subcommand("lad-zeta", "zeta function of a local action diagram");
    lad->add_option("--lad", o.lad, "diagram JSON file")->required();
    lad->add_option("--root", o.root, "root vertex c0")->required();
    lad->add_option("--from", o.from, "'root' or 'color:ID' with ID a colour at the root")->required();
    lad->add_option("--to", o.to, "target vertex or edge")->required();
    add_s(lad);

    CLI::App* verify = app.add_subcommand("verify", "randomized verification suite");
    verify->add_option("--suite", o.suite, "suite name")->required()->check(CLI::IsMember(suites::suite_names()));
    verify->add_option("--seed", o.seed, "random seed")->default_val(0);
    verify->add_option("--instances", o.instances, "number of instances")->default_val(20);
    verify->add_option("--jobs", o.jobs, "worker threads")->default_val(1)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*zeta) return detail::cmd_zeta(o, out, err);
        if (*coeffs) return detail::cmd_coeffs(o, out);
        if (*chi) return detail::cmd_chi(o, out);
        if (*unimod) return detail::cmd_unimodular(o, out);
        if (*ihara) return detail::cmd_ihara(o, out);
        if (*lad) return detail::cmd_lad_zeta(o, out);
        if (*verify) return detail::cmd_verify(o, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InternalCheckError& e) {
        err << "check failed: " << e.what() << "\n";
        return kExitVerifyFailed;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitMath;
    }
    return kExitUsage;
}

}  // namespace treezeta::cli
