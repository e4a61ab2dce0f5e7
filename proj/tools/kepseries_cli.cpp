#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kepseries.hpp"

namespace ks = kepseries;
namespace io = kepseries::io;

namespace {

struct Options {
    std::string format = "table";
    std::string output;
    int precision = 12;
};

void add_output_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--format", o.format, "table, csv or json")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--output", o.output, "write to this file instead of standard output");
    cmd->add_option("--precision", o.precision, "significant digits, 1..17")
        ->check(CLI::Range(1, 17))
        ->capture_default_str();
}

void emit(const io::Table& table, const Options& o) {
    io::OutputSpec spec;
    spec.format = o.format == "csv" ? io::Format::csv : o.format == "json" ? io::Format::json : io::Format::table;
    spec.precision = o.precision;
    spec.path = o.output;
    if (spec.path.empty()) {
        io::write(std::cout, table, spec);
        return;
    }
    std::ofstream file(spec.path);
    if (!file) throw ks::DomainError("cannot open output file " + spec.path);
    io::write(file, table, spec);
}

int cmd_solve(double c, double u, const std::string& method, double tol, int max_iter, const Options& o) {
    const ks::Orbit orbit(c);
    const ks::SolveReport rep = method == "newton" ? ks::solve_kepler_newton(orbit, u, tol)
                                                   : ks::solve_kepler_fixed_point(orbit, u, tol, max_iter);
    io::Table t{{"theta", "v", "r", "iterations", "residual", "method", "converged"}, {}};
    t.add_row({rep.theta, ks::eccentric_to_true(orbit, rep.theta), ks::radius(orbit, rep.theta),
               static_cast<long long>(rep.iterations), rep.residual, std::string(ks::to_string(rep.method)),
               std::string(rep.converged ? "true" : "false")});
    emit(t, o);
    return rep.converged ? 0 : 2;
}

int cmd_coeffs(const std::string& family_name, double c, int pmax, const std::string& source, const Options& o) {
    const auto family = ks::parse_family(family_name);
    if (!family) throw ks::DomainError("unknown family " + family_name);
    const bool has_closed = *family == ks::Family::eccentric_sine || *family == ks::Family::radius_cosine;
    ks::CoefficientSource src = ks::CoefficientSource::fourier_quadrature;
    if (source == "closed") {
        if (!has_closed) throw ks::DomainError("no closed form for " + family_name);
        src = ks::CoefficientSource::bessel_closed_form;
    } else if (source == "auto" && has_closed) {
        src = ks::CoefficientSource::bessel_closed_form;
    }
    emit(io::coefficient_table(ks::build_table(*family, c, pmax, src)), o);
    return 0;
}

int cmd_limits(const Options& o) {
    io::Table t{{"quantity", "c", "value"}, {}};
    t.add_row({std::string("carlini_laplace_constant"), std::string(""), ks::carlini_laplace_constant(1e-12)});
    t.add_row({std::string("carlini_radius_threshold"), std::string(""), ks::carlini_radius_threshold(1e-12)});
    for (double c : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99})
        t.add_row({std::string("corrected_convergence_margin"), c, ks::corrected_convergence_margin(c)});
    emit(t, o);
    return 0;
}

int cmd_wkb(double p, double sigma, double xmax, int sweep, const Options& o) {
    emit(io::wkb_table(ks::wkb_sweep(ks::WkbProblem{p, sigma, xmax}, sweep)), o);
    return 0;
}

int cmd_perturb(double alpha, double b, double y0, int order, double L, bool scaling, const Options& o) {
    ks::PerturbProblem pr{alpha, b, y0, order, L};
    if (scaling) {
        emit(io::order_scaling_table(ks::order_scaling_report(pr, {alpha, alpha / 2, alpha / 4})), o);
        return 0;
    }
    io::Table t{{"alpha", "N", "sup_error"}, {}};
    t.add_row({alpha, static_cast<long long>(order), ks::cascade_sup_error(pr)});
    emit(t, o);
    return 0;
}

int cmd_xx(std::optional<double> y, std::optional<double> z_opt, int branches, const Options& o) {
    if (y.has_value() == z_opt.has_value()) throw ks::DomainError("give exactly one of --y and --z");
    if (y && !(*y > 0.0)) throw ks::DomainError("--y must be positive");
    const double z = z_opt ? *z_opt : std::log(*y);
    std::vector<ks::BranchRoot> roots;
    const double inv_e = std::exp(-1.0);
    if (z >= -inv_e) {
        const double yy = std::exp(z);
        const auto real_root = [&](ks::XxBranch b) {
            ks::BranchRoot r;
            r.x = ks::xx_newton(yy, b);
            r.residual = std::abs(r.x.real() * std::log(r.x.real()) - z);
            roots.push_back(r);
        };
        real_root(ks::XxBranch::upper);
        if (z < 0.0) real_root(ks::XxBranch::lower);
    }
    const auto complex_roots = z < 0.0 ? ks::xx_complex_roots(z, branches)
                                       : (z == 0.0 ? std::vector<ks::BranchRoot>{} : ks::xx_lambert_roots(z, branches));
    roots.insert(roots.end(), complex_roots.begin(), complex_roots.end());
    emit(io::branch_root_table(roots), o);
    return 0;
}

int cmd_asym(const std::string& family_name, double c, const std::vector<int>& ps, const Options& o) {
    const auto family = ks::parse_family(family_name);
    if (!family) throw ks::DomainError("unknown family " + family_name);
    emit(io::asymptotic_table(ks::asymptotic_sweep(*family, c, ps)), o);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kepler-equation series, their asymptotics and related historical computations"};
    app.require_subcommand(1);
    Options o;

    double c = 0.0, u = 0.0, tol = 1e-14;
    std::string method = "newton";
    int max_iter = 100000;
    auto* solve = app.add_subcommand("solve", "solve Kepler's equation; prints theta, v, r, iterations, residual");
    solve->add_option("--c", c, "eccentricity in [0, 1)")->required();
    solve->add_option("--u", u, "mean anomaly (radians)")->required();
    solve->add_option("--method", method, "newton or fixed")
        ->check(CLI::IsMember({"newton", "fixed"}))
        ->capture_default_str();
    solve->add_option("--tol", tol, "residual tolerance")->capture_default_str();
    solve->add_option("--max-iter", max_iter, "iteration cap for the fixed-point method")->capture_default_str();
    add_output_flags(solve, o);

    std::string family, source = "auto";
    int pmax = 10;
    auto* coeffs = app.add_subcommand("coeffs", "coefficient table; columns family,c,index,value,source");
    coeffs->add_option("--family", family, "eccentric_sine, radius_cosine, true_anomaly_sine or radius_mean_cosine")
        ->required();
    coeffs->add_option("--c", c, "eccentricity in [0, 1)")->required();
    coeffs->add_option("--pmax", pmax, "largest index")->capture_default_str();
    coeffs->add_option("--source", source, "closed, quadrature or auto (closed where available)")
        ->check(CLI::IsMember({"closed", "quadrature", "auto"}))
        ->capture_default_str();
    add_output_flags(coeffs, o);

    auto* limits = app.add_subcommand("limits", "limit constants and convergence margins; columns quantity,c,value");
    add_output_flags(limits, o);

    double p = 50.0, sigma = 1.0, xmax = 1.0;
    int sweep = 1;
    auto* wkb = app.add_subcommand("wkb", "approximation error at x = xmax for p, 2p, ...; columns p,x,series,ode,wkb,rel_error");
    wkb->add_option("--p", p, "large parameter p >= 1")->capture_default_str();
    wkb->add_option("--sigma", sigma, "sigma > 0")->capture_default_str();
    wkb->add_option("--xmax", xmax, "evaluation point")->capture_default_str();
    wkb->add_option("--sweep", sweep, "number of multiples of p")->capture_default_str();
    add_output_flags(wkb, o);

    double alpha = 0.05, b = 1.0, y0 = 1.5, L = 2.0 * std::numbers::pi;
    int order = 3;
    bool scaling = false;
    auto* perturb = app.add_subcommand("perturb", "cascade vs direct integration; columns alpha,N,sup_error");
    perturb->add_option("--alpha", alpha, "small parameter")->capture_default_str();
    perturb->add_option("--b", b, "right-hand side constant")->capture_default_str();
    perturb->add_option("--y0", y0, "initial value")->capture_default_str();
    perturb->add_option("--N", order, "cascade order 0..3")->capture_default_str();
    perturb->add_option("--L", L, "interval length")->capture_default_str();
    perturb->add_flag("--scaling", scaling, "rows for alpha, alpha/2, alpha/4");
    add_output_flags(perturb, o);

    std::optional<double> y, z;
    int branches = 1;
    auto* xx = app.add_subcommand("xx", "roots of x^x = y; columns re,im,k,residual,alpha (k = 0: real root)");
    xx->add_option("--y", y, "right-hand side y > 0");
    xx->add_option("--z", z, "z = ln y");
    xx->add_option("--branches", branches, "number of nonreal conjugate pairs")->capture_default_str();
    add_output_flags(xx, o);

    std::string asym_family = "true_anomaly_sine";
    std::vector<int> ps{50, 100, 200};
    auto* asym = app.add_subcommand("asym", "asymptotic vs exact coefficients; columns p,exact,asymptotic,relative_error");
    asym->add_option("--family", asym_family, "true_anomaly_sine or radius_mean_cosine")->capture_default_str();
    asym->add_option("--c", c, "eccentricity in (0, 1)")->required();
    asym->add_option("--p", ps, "indices")->capture_default_str();
    add_output_flags(asym, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*solve) return cmd_solve(c, u, method, tol, max_iter, o);
        if (*coeffs) return cmd_coeffs(family, c, pmax, source, o);
        if (*limits) return cmd_limits(o);
        if (*wkb) return cmd_wkb(p, sigma, xmax, sweep, o);
        if (*perturb) return cmd_perturb(alpha, b, y0, order, L, scaling, o);
        if (*xx) return cmd_xx(y, z, branches, o);
        if (*asym) return cmd_asym(asym_family, c, ps, o);
    } catch (const ks::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ks::NumericFailure& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
