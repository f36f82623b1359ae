#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qkgp/error.hpp"
#include "qkgp/gram_io.hpp"
#include "qkgp/pauli.hpp"
#include "qkgp/rl.hpp"
#include "qkgp/seed.hpp"
#include "qkgp/tasks.hpp"

namespace qkgp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string default_out_dir() {
    const char* env = std::getenv(kOutDirEnv);
    return env && *env ? env : ".";
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

fs::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
    return fs::path(dir);
}

// Config files ----------------------------------------------------------------

// Flat key=value lines; '#' starts a comment. The key "command" names the
// subcommand, every other key is a long option of it.
std::vector<std::pair<std::string, std::string>> read_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    int line_no = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument(path.string() + ":" + std::to_string(line_no) + ": expected key=value");
        }
        entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return entries;
}

// Every option of the subcommand with its effective value, in declaration
// order; re-running with this file reproduces the invocation.
std::string run_config(const CLI::App& sub) {
    std::string out = "command=" + sub.get_name() + "\n";
    for (const CLI::Option* opt : sub.get_options()) {
        const std::string name = opt->get_single_name();
        if (name == "help" || name == "config" || opt->get_lnames().empty()) continue;
        std::string value;
        if (opt->count() > 0) {
            if (opt->get_type_size() == 0) {
                value = "true";
            } else {
                const auto results = opt->reduced_results();
                for (std::size_t i = 0; i < results.size(); ++i) value += (i ? "," : "") + results[i];
            }
        } else {
            value = opt->get_default_str();
            if (value.empty() && opt->get_type_size() == 0) value = "false";
        }
        if (!value.empty() && value.front() == '[' && value.back() == ']') value = value.substr(1, value.size() - 2);
        if (value.empty()) continue;
        out += name + "=" + value + "\n";
    }
    return out;
}

// Subcommand state ------------------------------------------------------------

struct Common {
    std::string out_dir = default_out_dir();
    std::uint64_t seed = 0;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--out-dir", c.out_dir, "Output directory (default $" + std::string(kOutDirEnv) + " or .)");
    sub->add_option("--seed", c.seed, "Seed for every random stream");
}

// Lists are kept as text so a later occurrence replaces an earlier one.
std::vector<double> parse_list(const std::string& text, const char* name) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        while (used < item.size() && item[used] == ' ') ++used;
        if (item.empty() || used != item.size()) {
            throw InvalidArgument(std::string("--") + name + ": bad number '" + item + "'");
        }
        out.push_back(v);
    }
    return out;
}

void add_bounds(CLI::App* sub, const std::string& name, std::string& target, const std::string& help) {
    sub->add_option("--" + name, target, help);
}

gp::Bound to_bound(const std::string& text, const char* name) {
    const auto v = parse_list(text, name);
    if (v.size() != 2) throw InvalidArgument(std::string("--") + name + " needs lo,hi");
    return {v[0], v[1]};
}

struct HwFlags {
    bool enabled = false;
    int shots = 8192;
    double floor = 0.04;
    double background = 0.5;
};

void add_hw(CLI::App* sub, HwFlags& hw) {
    sub->add_flag("--emulate-hw", hw.enabled, "Emulate a shot-noise hardware Gram");
    sub->add_option("--shots", hw.shots, "Shots per Gram entry");
    sub->add_option("--floor", hw.floor, "Weight of the background distribution");
    sub->add_option("--background", hw.background, "Vacuum probability of the background distribution");
}

kernels::HardwareNoise noise_of(const HwFlags& hw) { return {hw.shots, hw.floor, hw.background}; }

json bounds_json(const gp::Bounds& b, bool c, bool d, bool sd) {
    json j = {{"s", {b.s.lo, b.s.hi}}};
    if (c) j["c"] = {b.c.lo, b.c.hi};
    if (d) j["d"] = {b.d.lo, b.d.hi};
    if (sd) j["sigma_d"] = {b.sigma_d.lo, b.sigma_d.hi};
    return j;
}

json hp_json(const kernels::Hyperparams& hp) {
    json j = {{"s", hp.s}, {"c", hp.c}};
    if (!hp.d.empty()) j["d"] = hp.d;
    return j;
}

// decompose ---------------------------------------------------------------------

struct DecomposeArgs {
    Common common;
    int levels = 0;
    std::string out;
};

int cmd_decompose(const DecomposeArgs& a, const CLI::App& sub, std::ostream& out) {
    const auto sum = pauli::decompose(a.levels);
    const double residual = (sum.dense() - fock::displacement_generator(a.levels)).cwiseAbs().maxCoeff();
    json terms = json::array();
    for (const auto& t : sum.terms) terms.push_back({{"coeff", t.coefficient}, {"string", t.symbols}});
    const json j = {{"qubits", sum.qubits}, {"terms", terms}};

    const fs::path dir = prepare_dir(a.common.out_dir);
    const fs::path path = a.out.empty() ? dir / ("pauli_N" + std::to_string(a.levels) + ".json") : fs::path(a.out);
    write_text(path, j.dump(2) + "\n");
    write_text(path.parent_path().empty() ? fs::path("run_config.txt") : path.parent_path() / "run_config.txt",
               run_config(sub));
    out << "terms: " << sum.terms.size() << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", residual);
    out << "residual: " << buf << "\n";
    out << "wrote " << path.string() << "\n";
    return kOk;
}

// regress1d ----------------------------------------------------------------------

struct Regress1dArgs {
    Common common;
    std::string func = "xsinx";
    std::string kernel = "coherent";
    int n_train = 40;
    int n_test = 100;
    int restarts = 4;
    std::string s_bounds = "0.01,100";
    std::string c_bounds = "0.001,1000";
    std::string sigma_d_bounds = "0.001,1000";
    bool discrepancy = false;
    HwFlags hw;
    double hw_c = 2.225;
};

int cmd_regress1d(const Regress1dArgs& a, const CLI::App& sub, std::ostream& out) {
    const auto f = tasks::parse_target(a.func);
    const auto spec = kernels::parse_kernel(a.kernel, 1);
    const auto split = tasks::gen_1d(f, a.n_train, a.common.seed, a.n_test);
    gp::Bounds bounds;
    bounds.s = to_bound(a.s_bounds, "s-bounds");
    bounds.c = to_bound(a.c_bounds, "c-bounds");
    bounds.sigma_d = to_bound(a.sigma_d_bounds, "sigma-d-bounds");

    const fs::path dir = prepare_dir(a.common.out_dir);
    tasks::RegressionResult result;
    if (a.hw.enabled) {
        if (spec.family != kernels::Family::QubitTrotter) {
            throw InvalidArgument("--emulate-hw needs a qubit kernel CQ-N-tm");
        }
        tasks::HardwareOptions ho;
        ho.levels = spec.levels;
        ho.steps = spec.steps;
        ho.c = a.hw_c;
        ho.noise = noise_of(a.hw);
        ho.bounds = bounds;
        ho.restarts = a.restarts;
        const auto hw = tasks::run_hardware_regression(split, ho, a.common.seed);
        kernels::Hyperparams unit{1.0, {a.hw_c}, {}, 0.0};
        kernels::save_gram(hw.simulated, dir / "gram_simulated.csv", {1.0, kernels::label(spec), unit});
        kernels::save_gram(hw.emulated, dir / "gram_emulated.csv", {1.0, kernels::label(spec), unit});
        result = hw.regression;
        result.kernel = kernels::label(spec) + "-hw";
    } else {
        gp::OptimizeOptions opts;
        opts.bounds = bounds;
        opts.restarts = a.restarts;
        opts.seed = a.common.seed;
        opts.discrepancy = a.discrepancy;
        result = tasks::run_regression(spec, split, opts);
    }

    tasks::write_dataset_csv(split.train, dir / "train.csv");
    write_text(dir / "results.json", tasks::results_json(result));
    tasks::write_prediction_csv(result, dir / "predictions.csv");
    write_text(dir / "run_config.txt", run_config(sub));
    char buf[160];
    std::snprintf(buf, sizeof buf, "kernel %s  r2 %.6f  lml %.6f  band coverage %.3f\n", result.kernel.c_str(),
                  result.r2, result.lml, result.band_coverage());
    out << buf;
    return kOk;
}

// dynamics -----------------------------------------------------------------------

struct DynamicsArgs {
    Common common;
    std::string kernel = "coherent";
    int sets = 10;
    int n_train = 128;
    int n_test = 100;
    int restarts = 2;
    int max_evals = 1500;
    std::string s_bounds = "0.001,1000";
    std::string c_bounds = "0.001,20";
    std::string d_bounds = "0,2";
};

int cmd_dynamics(const DynamicsArgs& a, const CLI::App& sub, std::ostream& out) {
    const auto spec = kernels::parse_kernel(a.kernel, 3);
    tasks::DynamicsOptions o;
    o.sets = a.sets;
    o.n_train = a.n_train;
    o.n_test = a.n_test;
    o.optimize.bounds.s = to_bound(a.s_bounds, "s-bounds");
    o.optimize.bounds.c = to_bound(a.c_bounds, "c-bounds");
    o.optimize.bounds.d = to_bound(a.d_bounds, "d-bounds");
    o.optimize.restarts = a.restarts;
    o.optimize.seed = a.common.seed;
    o.optimize.local.max_evaluations = a.max_evals;
    o.baseline_optimize = o.optimize;
    if (spec.family == kernels::Family::Squeezed) {
        // The squeezed search starts from the coherent optimum only.
        o.optimize.restarts = 0;
        o.optimize.centre_start = false;
    }
    const auto results = tasks::run_dynamics(spec, o, a.common.seed);

    const fs::path dir = prepare_dir(a.common.out_dir);
    std::string table = "set,r2_x,r2_v,lml_x,lml_v\n";
    json sets = json::array();
    std::vector<double> rx, rv;
    for (const auto& r : results) {
        table += std::to_string(r.set) + "," + fmt(r.x.r2) + "," + fmt(r.v.r2) + "," + fmt(r.x.lml) + "," +
                 fmt(r.v.lml) + "\n";
        json s = {{"set", r.set},          {"r2_x", r.x.r2},   {"r2_v", r.v.r2}, {"lml_x", r.x.lml},
                  {"lml_v", r.v.lml},      {"hyperparams_x", hp_json(r.x.hp)}, {"hyperparams_v", hp_json(r.v.hp)}};
        if (r.coherent_x) {
            s["coherent"] = {{"r2_x", r.coherent_x->r2},
                             {"r2_v", r.coherent_v->r2},
                             {"lml_x", r.coherent_x->lml},
                             {"lml_v", r.coherent_v->lml}};
        }
        sets.push_back(s);
        rx.push_back(r.x.r2);
        rv.push_back(r.v.r2);
    }
    auto mean_std = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - m) * (x - m);
        const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
        return std::pair{m, sd};
    };
    const auto [mx, sx] = mean_std(rx);
    const auto [mv, sv] = mean_std(rv);
    const json j = {{"kernel", kernels::label(spec)},
                    {"bounds", bounds_json(o.optimize.bounds, true, spec.family == kernels::Family::Squeezed, false)},
                    {"sets", sets},
                    {"mean_r2_x", mx},
                    {"std_r2_x", sx},
                    {"mean_r2_v", mv},
                    {"std_r2_v", sv},
                    {"seed", a.common.seed},
                    {"n_train", a.n_train},
                    {"n_test", a.n_test}};
    write_text(dir / "dynamics_r2.csv", table);
    write_text(dir / "results.json", j.dump(2) + "\n");
    write_text(dir / "run_config.txt", run_config(sub));
    out << table;
    char buf[160];
    std::snprintf(buf, sizeof buf, "mean,%.6f,%.6f\nstd,%.3e,%.3e\n", mx, mv, sx, sv);
    out << buf;
    return kOk;
}

// rl ---------------------------------------------------------------------------------

struct RlArgs {
    Common common;
    std::string kernel = "coherent";
    int steps = 500;
    int grid = 20;
    int n_train = 128;
    int iters = 500;
    int restarts = 1;
    bool refit_value = false;
};

int cmd_rl(const RlArgs& a, const CLI::App& sub, std::ostream& out) {
    const auto spec = kernels::parse_kernel(a.kernel, 3);
    rl::RlOptions o;
    o.grid = a.grid;
    o.n_train = a.n_train;
    o.iters = a.iters;
    o.dynamics_optimize.restarts = a.restarts;
    o.optimize_value = a.refit_value;
    rl::TrainReport report;
    const auto policy = rl::rl_train(spec, o, a.common.seed, &report);
    const auto episode = rl::rl_rollout(policy, o.hill, a.steps, a.common.seed);

    const fs::path dir = prepare_dir(a.common.out_dir);
    write_text(dir / "episode.jsonl", rl::episode_json_lines(episode));
    const json j = {{"kernel", kernels::label(spec)},
                    {"reached_goal", episode.reached_goal},
                    {"steps_to_goal", episode.steps_to_goal},
                    {"goal_steps", episode.goal_steps},
                    {"steps", a.steps},
                    {"value_iterations", report.iterations},
                    {"value_converged", report.converged},
                    {"value_hyperparams", hp_json(policy.value_model().hyperparams())},
                    {"seed", a.common.seed}};
    write_text(dir / "results.json", j.dump(2) + "\n");
    write_text(dir / "run_config.txt", run_config(sub));
    out << "kernel " << kernels::label(spec) << "  reached_goal " << (episode.reached_goal ? "yes" : "no")
        << "  steps_to_goal " << episode.steps_to_goal << "  goal_steps " << episode.goal_steps << "\n";
    return kOk;
}

// gram -------------------------------------------------------------------------------

struct GramArgs {
    Common common;
    std::string kernel = "coherent";
    std::string dataset;
    double s = 1.0;
    std::string c;
    std::string d = "0,0,0";
    HwFlags hw;
};

int cmd_gram(const GramArgs& a, const CLI::App& sub, std::ostream& out) {
    const auto data = tasks::read_dataset_csv(a.dataset);
    const auto spec = kernels::parse_kernel(a.kernel, data.dims());
    kernels::Hyperparams hp;
    hp.s = a.s;
    hp.c = a.c.empty() ? std::vector<double>(static_cast<std::size_t>(data.dims()), 1.0) : parse_list(a.c, "c");
    if (spec.family == kernels::Family::Squeezed) hp.d = parse_list(a.d, "d");
    const kernels::Kernel kernel(spec);
    const auto g = kernels::gram(kernel, hp, data.x);

    const fs::path dir = prepare_dir(a.common.out_dir);
    kernels::save_gram(g, dir / "gram.csv", {hp.s, kernels::label(spec), hp});
    if (a.hw.enabled) {
        const auto e = kernels::emulate_hardware_gram(g, hp.s, noise_of(a.hw), a.common.seed);
        kernels::save_gram(e, dir / "gram_emulated.csv", {hp.s, kernels::label(spec), hp});
        kernels::GramMatrix rel;
        rel.values = (e.values - g.values).cwiseAbs().cwiseQuotient(g.values.cwiseAbs());
        rel.provenance = e.provenance;
        kernels::save_gram(rel, dir / "gram_relerr.csv");
    }
    write_text(dir / "run_config.txt", run_config(sub));
    char buf[160];
    std::snprintf(buf, sizeof buf, "n %ld  diagonal mean %.6g  min %.6g\n", static_cast<long>(g.size()),
                  g.values.diagonal().mean(), g.values.minCoeff());
    out << buf;
    return kOk;
}

// Argument assembly --------------------------------------------------------------------

// Expands --config into --key=value arguments placed right after the
// subcommand name, so flags given on the command line win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> rest;
    std::string config;
    for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--config") {
            if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a file");
            config = args[++i];
        } else if (a.rfind("--config=", 0) == 0) {
            config = a.substr(9);
        } else {
            rest.push_back(a);
        }
    }
    if (config.empty()) {
        rest.insert(rest.begin(), args.empty() ? "qkgp" : args[0]);
        return rest;
    }
    std::string command;
    std::vector<std::string> injected;
    for (const auto& [key, value] : read_config(config)) {
        if (key == "command") {
            command = value;
        } else if (!value.empty()) {
            injected.push_back("--" + key + "=" + value);
        }
    }
    std::vector<std::string> out{args.empty() ? "qkgp" : args[0]};
    std::size_t start = 0;
    if (!rest.empty() && rest.front().rfind("-", 0) != 0) {
        out.push_back(rest.front());
        start = 1;
    } else if (!command.empty()) {
        out.push_back(command);
    }
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(start), rest.end());
    return out;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum-kernel Gaussian-process experiments", "qkgp"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
    app.require_subcommand(1);
    app.set_version_flag("--version", "qkgp 0.1.0");
    app.add_option("--config", "Flat key=value file with a 'command' key and option values");

    DecomposeArgs dec;
    auto* sub_dec = app.add_subcommand("decompose", "Pauli-string expansion of the truncated displacement generator");
    add_common(sub_dec, dec.common);
    sub_dec->add_option("levels,--levels", dec.levels, "Truncation N, a power of two")->required();
    sub_dec->add_option("--out", dec.out, "Output JSON path (default <out-dir>/pauli_N<N>.json)");

    Regress1dArgs reg;
    auto* sub_reg = app.add_subcommand("regress1d", "1-D regression of a test function");
    add_common(sub_reg, reg.common);
    sub_reg->add_option("--func", reg.func, "xsinx, f1 or f2");
    sub_reg->add_option("--kernel", reg.kernel, "coherent, C-N, CQ-N-tm");
    sub_reg->add_option("--n-train", reg.n_train, "Training points");
    sub_reg->add_option("--n-test", reg.n_test, "Test points");
    sub_reg->add_option("--restarts", reg.restarts, "Random optimizer starts");
    add_bounds(sub_reg, "s-bounds", reg.s_bounds, "Bounds for s as lo,hi");
    add_bounds(sub_reg, "c-bounds", reg.c_bounds, "Bounds for c as lo,hi");
    add_bounds(sub_reg, "sigma-d-bounds", reg.sigma_d_bounds, "Bounds for sigma_d as lo,hi");
    sub_reg->add_flag("--discrepancy", reg.discrepancy, "Fit a discrepancy term sigma_d");
    add_hw(sub_reg, reg.hw);
    sub_reg->add_option("--hw-c", reg.hw_c, "Fixed length scale of the emulated hardware Gram");

    DynamicsArgs dyn;
    auto* sub_dyn = app.add_subcommand("dynamics", "Car-on-hill dynamics regression over seeded training sets");
    add_common(sub_dyn, dyn.common);
    sub_dyn->add_option("--kernel", dyn.kernel, "coherent, C-N, CQ-N-tm or squeezed");
    sub_dyn->add_option("--sets", dyn.sets, "Training sets");
    sub_dyn->add_option("--n-train", dyn.n_train, "Training samples per set");
    sub_dyn->add_option("--n-test", dyn.n_test, "Test samples per set");
    sub_dyn->add_option("--restarts", dyn.restarts, "Random optimizer starts");
    sub_dyn->add_option("--max-evals", dyn.max_evals, "Likelihood evaluations per optimizer start");
    add_bounds(sub_dyn, "s-bounds", dyn.s_bounds, "Bounds for s as lo,hi");
    add_bounds(sub_dyn, "c-bounds", dyn.c_bounds, "Bounds for c as lo,hi");
    add_bounds(sub_dyn, "d-bounds", dyn.d_bounds, "Bounds for the squeezing couplings as lo,hi");

    RlArgs rla;
    auto* sub_rl = app.add_subcommand("rl", "GP reinforcement learning on the car-on-hill task");
    add_common(sub_rl, rla.common);
    sub_rl->add_option("--kernel", rla.kernel, "coherent, C-N, CQ-N-tm or squeezed");
    sub_rl->add_option("--steps", rla.steps, "Rollout length");
    sub_rl->add_option("--grid", rla.grid, "Support states per axis of the value model");
    sub_rl->add_option("--n-train", rla.n_train, "Dynamics training samples");
    sub_rl->add_option("--iters", rla.iters, "Maximum value-iteration sweeps");
    sub_rl->add_option("--restarts", rla.restarts, "Random optimizer starts for the dynamics models");
    sub_rl->add_flag("--refit-value", rla.refit_value, "Refit the value model hyperparameters once");

    GramArgs gra;
    auto* sub_gram = app.add_subcommand("gram", "Gram matrix of a dataset, optionally with hardware emulation");
    add_common(sub_gram, gra.common);
    sub_gram->add_option("--kernel", gra.kernel, "coherent, C-N, CQ-N-tm or squeezed");
    sub_gram->add_option("--dataset", gra.dataset, "Dataset CSV with header x1..xD,y,sigma2")->required();
    sub_gram->add_option("--s", gra.s, "Prefactor s");
    sub_gram->add_option("--c", gra.c, "Length scales, one per dimension (default 1)");
    sub_gram->add_option("--d", gra.d, "Squeezing couplings d_xv,d_va,d_xa");
    add_hw(sub_gram, gra.hw);

    try {
        std::vector<std::string> args = expand_config(raw_args);
        std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        const int code = app.exit(e, o, er);
        out << o.str();
        err << er.str();
        return code == 0 ? kOk : kUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (sub_dec->parsed()) return cmd_decompose(dec, *sub_dec, out);
        if (sub_reg->parsed()) return cmd_regress1d(reg, *sub_reg, out);
        if (sub_dyn->parsed()) return cmd_dynamics(dyn, *sub_dyn, out);
        if (sub_rl->parsed()) return cmd_rl(rla, *sub_rl, out);
        if (sub_gram->parsed()) return cmd_gram(gra, *sub_gram, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kNumeric;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    }
    err << "error: no subcommand\n";
    return kUsage;
}

}  // namespace qkgp::cli
