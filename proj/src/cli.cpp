#include "mallows/cli.hpp"

#include "mallows/acceptance.hpp"
#include "mallows/asep.hpp"
#include "mallows/curieweiss.hpp"
#include "mallows/errors.hpp"
#include "mallows/limits.hpp"
#include "mallows/liouville.hpp"
#include "mallows/meanfield.hpp"
#include "mallows/qstats.hpp"
#include "mallows/sampler.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <unistd.h>

namespace mallows::cli {

namespace {

using json = nlohmann::ordered_json;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Writes `text` to `path` via a temporary file in the same directory and a
// rename, or to `fallback` when no path is given.
void emit(const std::string& text, const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
        fallback << text;
        fallback.flush();
        return;
    }
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        f << text;
        f.close();
        if (!f) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

std::string dump(json j) {
    json out;
    out["version"] = kVersion;
    for (auto& [k, v] : j.items()) out[k] = v;
    return out.dump(2) + "\n";
}

QConvention parse_convention(const std::string& s) {
    if (s == "lin") return QConvention::lin;
    if (s == "exp") return QConvention::exp;
    throw CLI::ValidationError("--convention", "must be lin or exp");
}

struct Args {
    double beta = 0.0;
    int n = 0;
    bool n_given = false;
    std::size_t count = 0;
    std::size_t samples = 0;
    int bins = 10;
    int grid = 0;
    int k = 0;
    double t = 0.0;
    double x = 0.0;
    int spins = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string summary;
    std::string convention = "lin";
    bool profile = false;
    std::string phi, psi, f, g;
    std::optional<double> l1, l2;
    double burn_in = -1.0;
    double grid_h = 1e-2;
    double t_max = 0.8;
    double x_min = -2.0, x_max = 2.0;
    bool no_burgers = false;
    bool quick = false;
    std::vector<int> only;
};

std::string run_pressure(const Args& a) {
    json j;
    if (a.n_given) {
        PressureValue p = pressure_finite(MallowsParams(a.n, a.beta));
        j["n"] = a.n;
        j["beta"] = a.beta;
        j["pressure"] = p.value;
    } else {
        PressureValue p = pressure_limit(a.beta);
        j["n"] = "limit";
        j["beta"] = a.beta;
        j["pressure"] = p.value;
    }
    return dump(j);
}

std::string run_sample(const Args& a) {
    double q = MallowsParams(a.n, a.beta).q(parse_convention(a.convention));
    std::vector<Permutation> draws = sample_mallows_batch(a.n, q, a.count, a.seed);
    std::ostringstream os;
    os << "sample_id,position,value\n";
    for (std::size_t s = 0; s < draws.size(); ++s)
        for (int i = 1; i <= a.n; ++i) os << s << ',' << i << ',' << draws[s](i) << '\n';
    return os.str();
}

std::string run_empirical(const Args& a) {
    double q = MallowsParams(a.n, a.beta).q(parse_convention(a.convention));
    GridFunction2D emp = mallows_histogram(a.n, q, a.samples, a.bins, a.seed);
    GridFunction2D lim = limit_cell_masses(a.bins, a.beta);
    std::ostringstream os;
    os << "x_bin,y_bin,empirical_mass,limit_mass,abs_error\n";
    for (int i = 0; i < a.bins; ++i)
        for (int j = 0; j < a.bins; ++j)
            os << i + 1 << ',' << j + 1 << ',' << num(emp(i, j)) << ',' << num(lim(i, j)) << ','
               << num(std::abs(emp(i, j) - lim(i, j))) << '\n';
    return os.str();
}

std::string run_density(const Args& a) {
    if (a.grid < 2) throw CLI::ValidationError("--grid", "must be at least 2");
    std::ostringstream os;
    os << (a.profile ? "x,y,rho\n" : "x,y,u\n");
    for (int i = 0; i < a.grid; ++i) {
        double x = static_cast<double>(i) / (a.grid - 1);
        for (int j = 0; j < a.grid; ++j) {
            double y = static_cast<double>(j) / (a.grid - 1);
            double v = a.profile ? blocking_profile(x, y, a.beta) : limit_density(x, y, a.beta);
            os << num(x) << ',' << num(y) << ',' << num(v) << '\n';
        }
    }
    return os.str();
}

MarginalDensity load_or_uniform(const std::string& path, std::optional<double> length,
                                bool normalize) {
    if (path.empty()) return MarginalDensity::uniform(length.value_or(1.0));
    MarginalDensity m = read_marginal_csv(path, normalize);
    if (length && std::abs(*length - m.length()) > 1e-12)
        throw CLI::ValidationError("marginal file", "length does not match --l1/--l2");
    return m;
}

std::string run_pde(const Args& a) {
    if (a.grid < 1) throw CLI::ValidationError("--grid", "must be positive");
    if (a.phi.empty() != a.psi.empty())
        throw CLI::ValidationError("--phi/--psi", "give both files or neither");
    CauchyData data(load_or_uniform(a.phi, a.l1, false), load_or_uniform(a.psi, a.l2, false));
    auto cells = static_cast<std::size_t>(a.grid);
    CauchySolution sol = solve_cauchy(data, a.beta, cells, cells);
    GridFunction2D res = liouville_residual(sol.u, a.beta);
    std::ostringstream os;
    os << "x,y,u,residual\n";
    for (std::size_t i = 0; i < sol.u.nx(); ++i)
        for (std::size_t j = 0; j < sol.u.ny(); ++j)
            os << num(sol.u.x(i)) << ',' << num(sol.u.y(j)) << ',' << num(sol.u(i, j)) << ','
               << num(res(i, j)) << '\n';
    return os.str();
}

std::string run_el(const Args& a, std::ostream& err) {
    if (a.grid < 2) throw CLI::ValidationError("--grid", "must be at least 2");
    MarginalDensity f = load_or_uniform(a.f, std::nullopt, true);
    MarginalDensity g = load_or_uniform(a.g, std::nullopt, true);
    if (std::abs(f.length() - 1.0) > 1e-12 || std::abs(g.length() - 1.0) > 1e-12)
        throw CLI::ValidationError("--f/--g", "marginals must live on [0,1]");
    auto cells = static_cast<std::size_t>(a.grid);
    ElSolution sol = solve_euler_lagrange(f, g, a.beta, cells);
    GibbsFunctionalValue value = gibbs_objective(sol.u, f, g, a.beta);
    GeneralLimitDensity closed({a.beta, f, g});
    std::ostringstream os;
    os << "x,y,u,closed_form,abs_error\n";
    for (std::size_t i = 0; i < cells; ++i)
        for (std::size_t j = 0; j < cells; ++j) {
            double x = sol.u.x(i), y = sol.u.y(j);
            double c = closed(x, y);
            os << num(x) << ',' << num(y) << ',' << num(sol.u(i, j)) << ',' << num(c) << ','
               << num(std::abs(sol.u(i, j) - c)) << '\n';
        }
    json summary;
    summary["iterations"] = sol.iterations;
    summary["final_residual"] = sol.final_change;
    summary["fixed_point_residual"] = el_fixed_point_residual(sol.u, f, g, a.beta);
    summary["marginal_error"] = sol.marginal_error;
    summary["objective"] = value.objective;
    summary["entropy"] = value.entropy;
    summary["energy"] = value.energy;
    emit(dump(summary), a.summary, err);
    return os.str();
}

std::string profile_csv(const AsepProfile& p) {
    std::ostringstream os;
    os << "site,frequency,stderr,rho_limit\n";
    for (std::size_t i = 0; i < p.frequency.size(); ++i)
        os << i + 1 << ',' << num(p.frequency[i]) << ',' << num(p.stderr_[i]) << ','
           << num(p.rho_limit[i]) << '\n';
    return os.str();
}

std::string run_cw(const Args& a) {
    CwParams p{a.spins, a.t, a.x};
    p.validate();
    json j;
    j["N"] = a.spins;
    j["t"] = a.t;
    j["x"] = a.x;
    j["pressure_exact"] = cw_pressure_exact(p);
    if (a.t > 0.0)
        j["pressure_hs"] = cw_pressure_hs(p);
    else
        j["pressure_hs"] = nullptr;
    j["magnetization"] = cw_magnetization(p);
    if (a.no_burgers) {
        j["burgers_residual_max"] = nullptr;
    } else {
        if (!(a.grid_h > 0.0) || !(a.t_max > 0.0) || !(a.x_max > a.x_min))
            throw CLI::ValidationError("grid", "need h > 0, t-max > 0 and x-max > x-min");
        int nt = static_cast<int>(std::lround(a.t_max / a.grid_h)) + 1;
        int nx = static_cast<int>(std::lround((a.x_max - a.x_min) / a.grid_h)) + 1;
        j["burgers_residual_max"] =
            burgers_residual(a.spins, {0.0, a.t_max, nt}, {a.x_min, a.x_max, nx}, a.grid_h).max_abs;
    }
    return dump(j);
}

std::string run_validate(const Args& a, std::ostream& err, bool& all_passed) {
    AcceptanceOptions opt;
    opt.quick = a.quick;
    opt.seed = a.seed;
    opt.only = a.only;
    opt.on_result = [&err](const CriterionResult& r) { err << format_result_line(r) << '\n'; };
    std::vector<CriterionResult> results = run_acceptance(opt);
    json list = json::array();
    all_passed = true;
    for (const auto& r : results) {
        json m = json::object();
        for (const auto& [k, v] : r.metrics) m[k] = v;
        list.push_back({{"id", r.id},
                        {"name", r.name},
                        {"status", r.passed ? "pass" : "fail"},
                        {"detail", r.detail},
                        {"seconds", r.seconds},
                        {"metrics", m}});
        all_passed = all_passed && r.passed;
    }
    json j;
    j["quick"] = a.quick;
    j["seed"] = a.seed;
    j["all_passed"] = all_passed;
    j["criteria"] = list;
    return dump(j);
}

json error_object(const std::exception& e) {
    json j;
    j["message"] = e.what();
    if (auto* ev = dynamic_cast<const ExistenceViolated*>(&e)) {
        j["type"] = "ExistenceViolated";
        j["margin"] = ev->margin();
    } else if (auto* nc = dynamic_cast<const NonConvergence*>(&e)) {
        j["type"] = "NonConvergence";
        j["iterations"] = nc->iterations();
        j["last_change"] = nc->last_change();
        j["marginal_error"] = nc->marginal_error();
    } else {
        j["type"] = "SolverError";
    }
    return j;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mallows permutations: sampling, scaling limits, PDE and mean-field solvers"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", kVersion);
    Args a;

    auto add_out = [&](CLI::App* sub) {
        sub->add_option("--out", a.out, "Output file (written atomically); default stdout");
    };
    auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", a.seed, "RNG seed")->capture_default_str(); };
    auto add_conv = [&](CLI::App* sub) {
        sub->add_option("--convention", a.convention, "q = 1 - beta/n (lin) or exp(-beta/(n-1)) (exp)")
            ->check(CLI::IsMember({"lin", "exp"}))
            ->capture_default_str();
    };

    auto* pressure = app.add_subcommand("pressure", "Finite-n or limiting pressure (JSON)");
    pressure->add_option("--beta", a.beta)->required();
    auto* n_opt = pressure->add_option("--n", a.n, "System size; omit for the n -> infinity limit")
                      ->check(CLI::Range(2, 100'000'000));
    add_out(pressure);

    auto* sample = app.add_subcommand("sample", "Exact Mallows draws (CSV)");
    sample->add_option("--n", a.n)->required()->check(CLI::Range(1, 100'000'000));
    sample->add_option("--beta", a.beta)->required();
    sample->add_option("--count", a.count)->required();
    add_seed(sample);
    add_conv(sample);
    add_out(sample);

    auto* empirical = app.add_subcommand("empirical", "Averaged empirical cell masses vs the limit (CSV)");
    empirical->add_option("--n", a.n)->required()->check(CLI::Range(1, 100'000'000));
    empirical->add_option("--beta", a.beta)->required();
    empirical->add_option("--samples", a.samples)->required()->check(CLI::PositiveNumber);
    empirical->add_option("--bins", a.bins)->required()->check(CLI::Range(1, 10000));
    add_seed(empirical);
    add_conv(empirical);
    add_out(empirical);

    auto* density = app.add_subcommand("density", "Limit density or blocking profile on a grid (CSV)");
    density->add_option("--beta", a.beta)->required();
    density->add_option("--grid", a.grid)->required()->check(CLI::Range(2, 100000));
    density->add_flag("--profile", a.profile, "Emit rho(x;y) instead of u(x,y)");
    add_out(density);

    auto* pde = app.add_subcommand("pde", "Liouville Cauchy problem (CSV)");
    pde->add_option("--beta", a.beta)->required();
    pde->add_option("--grid", a.grid, "Cells per side")->required()->check(CLI::Range(1, 100000));
    pde->add_option("--phi", a.phi, "CSV coordinate,value for u(x,0)")->check(CLI::ExistingFile);
    pde->add_option("--psi", a.psi, "CSV coordinate,value for u(0,y)")->check(CLI::ExistingFile);
    pde->add_option("--l1", a.l1)->check(CLI::PositiveNumber);
    pde->add_option("--l2", a.l2)->check(CLI::PositiveNumber);
    add_out(pde);

    auto* el = app.add_subcommand("el", "Euler-Lagrange fixed point (CSV + JSON summary)");
    el->add_option("--beta", a.beta)->required();
    el->add_option("--grid", a.grid, "Cells per side")->required()->check(CLI::Range(2, 100000));
    el->add_option("--f", a.f, "CSV coordinate,value for the x-marginal")->check(CLI::ExistingFile);
    el->add_option("--g", a.g, "CSV coordinate,value for the y-marginal")->check(CLI::ExistingFile);
    el->add_option("--summary", a.summary, "JSON summary file; default stderr");
    add_out(el);

    auto* asep_profile = app.add_subcommand("asep-profile", "Push-forward occupation profile (CSV)");
    auto* asep_dynamics = app.add_subcommand("asep-dynamics", "Time-averaged ASEP profile (CSV)");
    for (auto* sub : {asep_profile, asep_dynamics}) {
        sub->add_option("--n", a.n, "Sites")->required()->check(CLI::Range(1, 10'000'000));
        sub->add_option("--beta", a.beta)->required();
        sub->add_option("--k", a.k, "Particles")->required()->check(CLI::NonNegativeNumber);
        add_seed(sub);
        add_out(sub);
    }
    asep_profile->add_option("--samples", a.samples)->required()->check(CLI::PositiveNumber);
    asep_dynamics->add_option("--t", a.t, "Final time")->required()->check(CLI::PositiveNumber);
    asep_dynamics->add_option("--burn-in", a.burn_in, "Discarded initial time; default t/2");

    auto* cw = app.add_subcommand("cw", "Curie-Weiss pressure, magnetization, Burgers residual (JSON)");
    cw->add_option("--N", a.spins)->required()->check(CLI::Range(1, 10'000'000));
    cw->add_option("--t", a.t)->required()->check(CLI::NonNegativeNumber);
    cw->add_option("--x", a.x)->required();
    cw->add_option("--grid-h", a.grid_h, "Burgers grid spacing")->capture_default_str();
    cw->add_option("--t-max", a.t_max)->capture_default_str();
    cw->add_option("--x-min", a.x_min)->capture_default_str();
    cw->add_option("--x-max", a.x_max)->capture_default_str();
    cw->add_flag("--no-burgers", a.no_burgers, "Skip the residual grid");
    add_out(cw);

    auto* validate = app.add_subcommand("validate", "Acceptance suite (JSON report)");
    validate->add_flag("--quick", a.quick, "Reduced budgets for the expensive criteria");
    validate->add_option("--only", a.only, "Run only these criterion ids")->check(CLI::Range(1, 12));
    add_seed(validate);
    add_out(validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion& e) {
        out << kVersion << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << "run with --help for usage\n";
        return 2;
    }
    a.n_given = n_opt->count() > 0;

    try {
        CLI::App* sub = app.get_subcommands().front();
        std::string name = sub->get_name();
        std::string text;
        int status = 0;
        if (name == "pressure") {
            text = run_pressure(a);
        } else if (name == "sample") {
            text = run_sample(a);
        } else if (name == "empirical") {
            text = run_empirical(a);
        } else if (name == "density") {
            text = run_density(a);
        } else if (name == "pde") {
            text = run_pde(a);
        } else if (name == "el") {
            text = run_el(a, err);
        } else if (name == "asep-profile") {
            text = profile_csv(profile_monte_carlo(AsepParams(a.n, a.k, a.beta), a.samples, a.seed));
        } else if (name == "asep-dynamics") {
            DynamicsOptions opt;
            opt.burn_in = a.burn_in;
            text = profile_csv(simulate_dynamics(AsepParams(a.n, a.k, a.beta), a.t, a.seed, opt).profile);
        } else if (name == "cw") {
            text = run_cw(a);
        } else if (name == "validate") {
            bool all_passed = false;
            text = run_validate(a, err, all_passed);
            status = all_passed ? 0 : 1;
        }
        emit(text, a.out, out);
        return status;
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        json j;
        j["error"] = error_object(e);
        out << dump(j);
        return 1;
    }
}

}  // namespace mallows::cli
