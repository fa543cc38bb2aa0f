#include "hermite/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <fftw3.h>
#include <fmt/format.h>

#include "hermite/corpus.hpp"
#include "hermite/estimator.hpp"
#include "hermite/heat_solver.hpp"
#include "hermite/semigroup.hpp"
#include "hermite/serialization.hpp"

namespace hermite {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* artifact_version = "1.0.0";

struct Subject {
    std::string name;
    HermiteExpansion expansion;
    std::optional<TestFunction> sampled; // set for corpus functions without a finite expansion
};

// Run context: collects artifacts and grid hashes for the manifest.
struct Context {
    const ExperimentConfig& cfg;
    fs::path dir;
    std::vector<fs::path> files;
    std::vector<std::string> grids;

    void note_grid(const PhaseSpaceGrid& g) {
        const auto h = g.hash();
        if (std::find(grids.begin(), grids.end(), h) == grids.end())
            grids.push_back(h);
    }

    std::ofstream open(const std::string& name, bool binary = false) {
        const auto path = dir / name;
        fs::create_directories(path.parent_path());
        std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
        if (!out)
            throw IoError("cannot open " + path.string() + " for writing");
        files.push_back(path);
        return out;
    }

    void write_text(const std::string& name, const std::string& text) {
        auto out = open(name);
        out << text;
        if (!out)
            throw IoError("failed to write " + (dir / name).string());
    }

    void write_json(const std::string& name, const json& j) { write_text(name, j.dump(2) + "\n"); }

    void write_expansion_file(const std::string& name, const HermiteExpansion& e) {
        auto out = open(name, true);
        write_expansion(out, e);
        if (!out)
            throw IoError("failed to write " + (dir / name).string());
    }
};

std::string num(double v) { return fmt::format("{:.17g}", v); }

json number_or_string(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return nullptr;
    return v;
}

int dim_of(const ExperimentConfig& cfg) {
    const long d = cfg.integer("dim");
    if (d < 1 || d > max_dimension)
        throw ValidationError("dim must be 1, 2 or 3");
    return static_cast<int>(d);
}

int degree_of(const ExperimentConfig& cfg) {
    const long n = cfg.integer("degree");
    if (n < 0 || n > 20000)
        throw ValidationError("degree must lie in [0, 20000]");
    return static_cast<int>(n);
}

std::vector<Subject> subjects(const ExperimentConfig& cfg) {
    const int dim = dim_of(cfg);
    const int degree = degree_of(cfg);
    const auto name = cfg.string("function");
    if (name == "ground")
        return {{"ground", HermiteExpansion::basis(MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0)), degree),
                 std::nullopt}};
    if (name == "random") {
        const long modes = cfg.integer("modes");
        const long count = cfg.canonical().contains("count") ? cfg.integer("count") : 1;
        if (modes < 1 || count < 1)
            throw ValidationError("modes and count must be positive");
        const auto draws = random_generic_expansions(dim, static_cast<int>(count), static_cast<int>(modes),
                                                     static_cast<std::uint64_t>(cfg.integer("seed")));
        std::vector<Subject> out;
        for (std::size_t i = 0; i < draws.size(); ++i) {
            if (draws[i].degree() > degree)
                throw ValidationError(fmt::format("degree {} is too small for {} modes", degree, modes));
            out.push_back({fmt::format("random_{}", i), draws[i].with_degree(degree), std::nullopt});
        }
        return out;
    }
    if (dim != 1)
        throw ValidationError("corpus functions are one-dimensional; use function = ground or random for d > 1");
    auto entry = corpus_entry(name);
    auto e = expand(entry, degree);
    std::optional<TestFunction> sampled;
    if (!entry.expansion)
        sampled = std::move(entry);
    return {{name, std::move(e), std::move(sampled)}};
}

PhaseSpaceGrid grid_for(const ExperimentConfig& cfg, const Subject& s) {
    PhaseSpaceGrid g = s.sampled ? PhaseSpaceGrid::covering(s.sampled->radius, s.sampled->bandwidth, 1)
                                 : PhaseSpaceGrid::default_for(s.expansion.degree(), s.expansion.dim());
    if (cfg.integer("nx") > 0)
        g.nx = static_cast<int>(cfg.integer("nx"));
    if (cfg.integer("nxi") > 0)
        g.nxi = static_cast<int>(cfg.integer("nxi"));
    if (cfg.number("x_extent") > 0.0)
        g.x_extent = cfg.number("x_extent");
    if (cfg.number("xi_extent") > 0.0)
        g.xi_extent = cfg.number("xi_extent");
    if (cfg.integer("nx") < 0 || cfg.integer("nxi") < 0 || cfg.number("x_extent") < 0.0 || cfg.number("xi_extent") < 0.0)
        throw ValidationError("grid overrides must be non-negative");
    g.validate();
    return g;
}

NormSpec norm_of(const ExperimentConfig& cfg) {
    NormSpec s;
    s.p = cfg.number("p");
    s.q = cfg.number("q");
    if (cfg.canonical().contains("s"))
        s.s = cfg.number("s");
    s.inner = inner_variable_from_string(cfg.string("inner"));
    s.validate();
    return s;
}

ExponentSet exponents_of(const ExperimentConfig& cfg) {
    ExponentSet x{cfg.number("p1"), cfg.number("q1"), cfg.number("p2"), cfg.number("q2")};
    x.validate();
    return x;
}

SolverConfig solver_of(const ExperimentConfig& cfg) {
    SolverConfig s;
    s.beta = cfg.number("beta");
    s.k = static_cast<int>(cfg.integer("k"));
    s.dim = dim_of(cfg);
    s.degree = degree_of(cfg);
    s.dt = cfg.number("dt");
    s.horizon = cfg.number("T");
    s.picard_tol = cfg.number("picard_tol");
    s.picard_max_iters = static_cast<int>(cfg.integer("picard_max_iters"));
    s.eps = cfg.number("eps");
    s.blowup_threshold = cfg.number("blowup_threshold");
    s.allow_out_of_theory = cfg.boolean("allow_out_of_theory");
    s.window = cfg.string("window");
    if (cfg.canonical().contains("lambda"))
        s.lambda = cdouble(cfg.number("lambda"), cfg.number("lambda_im"));
    return s;
}

json exponents_json(const ExponentSet& x) {
    return {{"p1", number_or_string(x.p1)}, {"q1", number_or_string(x.q1)}, {"p2", number_or_string(x.p2)},
            {"q2", number_or_string(x.q2)}};
}

void run_transform(Context& ctx) {
    const auto window = Window::by_name(ctx.cfg.string("window"));
    const auto format = ctx.cfg.string("format");
    if (format != "csv" && format != "binary")
        throw ValidationError("format must be csv or binary");
    const auto s = subjects(ctx.cfg).front();
    const auto grid = grid_for(ctx.cfg, s);
    ctx.note_grid(grid);
    const auto m = s.sampled ? stft(s.sampled->f, window, grid) : stft(s.expansion, window, grid);
    if (format == "csv") {
        auto out = ctx.open("stft.csv");
        write_phase_space_csv(out, m);
    } else {
        auto out = ctx.open("stft.bin", true);
        write_phase_space_binary(out, m);
    }
    ctx.write_expansion_file("coefficients.bin", s.expansion);
}

void run_semigroup(Context& ctx) {
    const auto s = subjects(ctx.cfg).front();
    const FlowParams params{ctx.cfg.number("beta"), ctx.cfg.number("t"), s.expansion.dim()};
    params.validate();
    const auto out = apply_semigroup(s.expansion, params);
    std::string csv = "alpha,order,re,im,re_t,im_t\n";
    const auto& idx = s.expansion.indices();
    for (std::size_t i = 0; i < s.expansion.size(); ++i) {
        std::string alpha;
        for (int a = 0; a < idx[i].dim(); ++a)
            alpha += (a ? " " : "") + std::to_string(idx[i][a]);
        const auto c = s.expansion.coeffs()[i];
        const auto ct = out.coeffs()[i];
        csv += fmt::format("{},{},{},{},{},{}\n", alpha, idx[i].order(), num(c.real()), num(c.imag()), num(ct.real()),
                           num(ct.imag()));
    }
    ctx.write_text("semigroup.csv", csv);
    ctx.write_expansion_file("semigroup.bin", out);
}

void run_norm(Context& ctx) {
    const auto window = Window::by_name(ctx.cfg.string("window"));
    const auto spec = norm_of(ctx.cfg);
    std::string csv = "function,p,q,s,inner,value\n";
    for (const auto& s : subjects(ctx.cfg)) {
        const auto grid = grid_for(ctx.cfg, s);
        ctx.note_grid(grid);
        const NormSpec specs[] = {spec};
        const double v = s.sampled ? phase_space_norms(s.sampled->f, window, grid, specs)[0]
                                   : phase_space_norms(s.expansion, window, grid, specs)[0];
        csv += fmt::format("{},{},{},{},{},{}\n", s.name, num(spec.p), num(spec.q), num(spec.s), to_string(spec.inner),
                           num(v));
    }
    ctx.write_text("norm.csv", csv);
}

void run_decay(Context& ctx) {
    const auto window = Window::by_name(ctx.cfg.string("window"));
    const auto x = exponents_of(ctx.cfg);
    const double beta = ctx.cfg.number("beta");
    const double t0 = ctx.cfg.number("t_min"), t1 = ctx.cfg.number("t_max");
    const long samples = ctx.cfg.integer("samples");
    if (samples < 5)
        throw ValidationError("decay needs at least five time samples");
    if (t0 < 0.0 || !(t1 > t0))
        throw ValidationError("decay needs 0 ≤ t_min < t_max");
    const auto times = arithmetic_times(t0, t1, static_cast<int>(samples));
    const int dim = dim_of(ctx.cfg);
    const double expected = std::pow(dim, beta);

    std::string csv = "function,t,ratio,theory,ratio/theory,fitted_rate\n";
    json functions = json::array();
    double k_fit = 0.0;
    for (const auto& s : subjects(ctx.cfg)) {
        const auto grid = grid_for(ctx.cfg, s);
        ctx.note_grid(grid);
        const auto r = measure_decay(s.expansion, beta, x, times, grid, window);
        if (std::isnan(r.fitted_large_time_rate))
            throw NumericalError("fewer than two usable samples with t ≥ 1; the large-time rate is undefined");
        for (std::size_t i = 0; i < r.times.size(); ++i)
            csv += fmt::format("{},{},{},{},{},{}\n", s.name, num(r.times[i]), num(r.ratios[i]), num(r.theory[i]),
                               num(r.ratios[i] / r.theory[i]), num(r.fitted_large_time_rate));
        const bool generic = is_generic(s.expansion);
        const bool pass = !generic || std::abs(r.fitted_large_time_rate / expected - 1.0) <= 0.02;
        k_fit = std::max(k_fit, r.sup_bounded_constant);
        functions.push_back({{"function", s.name},
                             {"fitted_rate", r.fitted_large_time_rate},
                             {"expected_rate", expected},
                             {"generic", generic},
                             {"K", r.sup_bounded_constant},
                             {"pass", pass}});
    }
    ctx.write_text("decay.csv", csv);
    ctx.write_json("decay.json", {{"exponents", exponents_json(x)},
                                  {"beta", beta},
                                  {"dim", dim},
                                  {"K", k_fit},
                                  {"functions", functions}});
}

void run_smoothing(Context& ctx) {
    const auto window = Window::by_name(ctx.cfg.string("window"));
    const auto x = exponents_of(ctx.cfg);
    const double beta = ctx.cfg.number("beta");
    const int dim = dim_of(ctx.cfg);
    const double sigma = x.sigma(dim, beta);
    SmallTimeOptions options;
    options.t_min = ctx.cfg.number("t_min");
    options.t_max = ctx.cfg.number("t_max");
    options.samples = static_cast<int>(ctx.cfg.integer("samples"));
    options.refinement = static_cast<int>(ctx.cfg.integer("refinement"));
    options.window = window;
    if (!(options.t_min > 0.0) || options.t_max > 1.0 || !(options.t_max > options.t_min))
        throw ValidationError("smoothing needs 0 < t_min < t_max ≤ 1");
    if (options.samples < 2 || options.refinement < 0)
        throw ValidationError("smoothing needs at least two samples and a non-negative refinement");

    std::string csv = "function,t,ratio,theory,ratio/theory,scaled_ratio\n";
    json functions = json::array();
    for (const auto& s : subjects(ctx.cfg)) {
        DecayReport r;
        if (s.sampled) {
            r = fit_small_time(*s.sampled, beta, x, options);
        } else {
            const auto grid = grid_for(ctx.cfg, s);
            ctx.note_grid(grid);
            r = fit_small_time(s.expansion, beta, x, options.t_min, options.t_max, options.samples, grid, window);
        }
        for (std::size_t i = 0; i < r.times.size(); ++i)
            csv += fmt::format("{},{},{},{},{},{}\n", s.name, num(r.times[i]), num(r.ratios[i]), num(r.theory[i]),
                               num(r.ratios[i] / r.theory[i]), num(std::pow(r.times[i], sigma) * r.ratios[i]));
        const bool pass = std::isfinite(r.sup_scaled_ratio) && r.fitted_small_time_slope >= -sigma - 0.1;
        functions.push_back({{"function", s.name},
                             {"slope", r.fitted_small_time_slope},
                             {"sup_scaled_ratio", r.sup_scaled_ratio},
                             {"K", r.sup_bounded_constant},
                             {"pass", pass}});
    }
    ctx.write_text("smoothing.csv", csv);
    ctx.write_json("smoothing.json",
                   {{"exponents", exponents_json(x)}, {"beta", beta}, {"sigma", sigma}, {"functions", functions}});
}

void run_solve(Context& ctx) {
    const auto solver = solver_of(ctx.cfg);
    const auto spec = norm_of(ctx.cfg);
    solver.validate(spec);
    const long stride = ctx.cfg.integer("snapshot_stride");
    if (stride < 0)
        throw ValidationError("snapshot_stride must be non-negative");
    const auto s = subjects(ctx.cfg).front();
    const auto u0 = cdouble(ctx.cfg.number("amplitude")) * s.expansion;
    const auto tr = picard_solve(u0, solver, spec);
    ctx.note_grid(PhaseSpaceGrid::default_for(solver.degree, solver.dim));

    const double rate = std::pow(static_cast<double>(solver.dim), solver.beta);
    std::string csv = "t,norm,exp(t*d^beta)*norm\n";
    for (std::size_t j = 0; j < tr.times.size(); ++j)
        csv += fmt::format("{},{},{}\n", num(tr.times[j]), num(tr.norms[j]),
                           num(std::exp(rate * tr.times[j]) * tr.norms[j]));
    ctx.write_text("trajectory.csv", csv);
    if (stride > 0)
        for (std::size_t j = 0; j < tr.states.size(); j += static_cast<std::size_t>(stride))
            ctx.write_expansion_file(fmt::format("snapshots/state_{:06d}.bin", j), tr.states[j]);

    json summary = {{"iterations", tr.picard.iterations},
                    {"increments", tr.picard.increments},
                    {"contraction_ratios", tr.picard.contraction_ratios},
                    {"local_mode", tr.picard.local_mode},
                    {"horizon_halvings", tr.picard.horizon_halvings},
                    {"x_estimate", tr.xnorm_running},
                    {"initial_norm", tr.norms.front()},
                    {"final_norm", tr.norms.back()}};
    summary["fixed_point_residual"] =
        tr.picard.local_mode ? json(nullptr) : json(fixed_point_residual(tr, u0, solver, spec));
    ctx.write_json("solve.json", summary);
}

json verdict_json(const BlowupVerdict& v) {
    return {{"blew_up", v.blew_up},
            {"t_star_numeric", v.t_star_numeric ? json(*v.t_star_numeric) : json(nullptr)},
            {"t_star_ode", number_or_string(v.t_star_ode)},
            {"relative_gap", number_or_string(v.relative_gap)},
            {"converged", v.converged},
            {"decays", v.decays},
            {"x_estimate", number_or_string(v.x_estimate)},
            {"initial_norm", v.initial_norm},
            {"final_norm", v.final_norm},
            {"truncation_error", v.truncation_error},
            {"message", v.message}};
}

void run_blowup(Context& ctx) {
    const auto solver = solver_of(ctx.cfg);
    const auto spec = norm_of(ctx.cfg);
    const double a = ctx.cfg.number("a");
    if (!(a >= 0.0))
        throw ValidationError("a must be non-negative");
    const auto verdict = blowup_contrast(a, solver, spec);
    ctx.note_grid(PhaseSpaceGrid::default_for(solver.degree, solver.dim));
    ctx.write_json("blowup.json",
                   {{"a", a}, {"free_run", verdict_json(verdict.free_run)}, {"hermite_run", verdict_json(verdict.hermite_run)}});
}

json versions() {
    return {{"artifact", artifact_version},
            {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
            {"fmt", FMT_VERSION},
            {"boost", BOOST_LIB_VERSION},
            {"fftw", std::string(fftw_version)}};
}

void dispatch(Context& ctx) {
    const auto& c = ctx.cfg.command();
    if (c == "transform")
        run_transform(ctx);
    else if (c == "semigroup")
        run_semigroup(ctx);
    else if (c == "norm")
        run_norm(ctx);
    else if (c == "decay")
        run_decay(ctx);
    else if (c == "smoothing")
        run_smoothing(ctx);
    else if (c == "solve")
        run_solve(ctx);
    else if (c == "blowup")
        run_blowup(ctx);
    else
        throw ValidationError("unknown command '" + c + "'");
}

} // namespace

RunResult run(const ExperimentConfig& config) {
    RunResult result;
    const auto start = std::chrono::steady_clock::now();
    Context ctx{config, fs::path(config.output_dir()), {}, {}};
    try {
        std::error_code ec;
        fs::create_directories(ctx.dir, ec);
        if (ec)
            throw IoError("cannot create output directory " + ctx.dir.string() + ": " + ec.message());
        dispatch(ctx);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json artifacts = json::array();
        for (const auto& f : ctx.files)
            artifacts.push_back(f.lexically_relative(ctx.dir).generic_string());
        ctx.write_json("manifest.json", {{"config", config.canonical()},
                                         {"versions", versions()},
                                         {"grid_hashes", ctx.grids},
                                         {"artifacts", artifacts},
                                         {"wall_time_seconds", wall}});
    } catch (const ValidationError& err) {
        result.status = exit_validation;
        result.message = err.what();
    } catch (const IoError& err) {
        result.status = exit_io;
        result.message = err.what();
    } catch (const fs::filesystem_error& err) {
        result.status = exit_io;
        result.message = err.what();
    } catch (const std::exception& err) {
        result.status = exit_numerical;
        result.message = err.what();
    }
    result.files = std::move(ctx.files);
    return result;
}

RunResult run_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        return {exit_io, "cannot read configuration " + path.string(), {}};
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return run(parse_config(buffer.str()));
    } catch (const ValidationError& err) {
        return {exit_validation, err.what(), {}};
    }
}

} // namespace hermite
