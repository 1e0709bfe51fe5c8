#include "pscb/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "pscb/errors.hpp"
#include "pscb/harness.hpp"
#include "pscb/oracle.hpp"
#include "pscb/report.hpp"
#include "pscb/theory.hpp"

namespace pscb {

namespace {

constexpr std::string_view kBuiltinPrefix = "builtin:";

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write '" + path.string() + "'");
    f << content;
    if (!f) throw InvalidArgument("failed writing '" + path.string() + "'");
}

struct RunOptions {
    std::string env = "builtin:synthetic";
    std::optional<int> horizon;
    std::optional<int> num_arms;
    std::optional<int> num_segments;
    std::uint64_t env_seed = 0;
    std::optional<int> m;
    std::vector<std::string> algos;
    int reps = 100;
    std::uint64_t seed = 1;
    std::string out;
    bool plot = false;
    double alpha = 1.0;
    unsigned threads = 0;

    std::optional<double> p;
    std::optional<double> delta;
    std::optional<int> check_every;
    std::optional<int> w;
    std::optional<double> b;
    std::optional<double> gamma;
    std::optional<double> xi;
    std::optional<double> gamma_m;
};

struct TheoryOptions {
    std::string bound;
    std::optional<int> num_arms;
    std::optional<int> horizon;
    std::optional<int> num_segments;
    std::optional<double> p;
    std::optional<double> delta;
    std::optional<double> delta_change;
    std::string env = "builtin:synthetic";
    std::optional<int> m;
    double alpha = 1.0;
    std::optional<double> lipschitz;
};

BuiltinSizes sizes_from(const std::optional<int>& horizon, const std::optional<int>& num_arms,
                        const std::optional<int>& num_segments, std::uint64_t seed) {
    BuiltinSizes sizes;
    if (horizon) sizes.horizon = *horizon;
    if (num_arms) sizes.num_arms = *num_arms;
    if (num_segments) sizes.num_segments = *num_segments;
    sizes.seed = seed;
    return sizes;
}

int default_m(const std::string& source) { return source == "builtin:synthetic" ? 2 : 1; }

int do_run(const RunOptions& o, std::ostream& out) {
    const int m = o.m.value_or(default_m(o.env));
    BuiltinSizes sizes = sizes_from(o.horizon, o.num_arms, o.num_segments, o.env_seed);
    sizes.m = m;
    const Environment env = resolve_environment(o.env, sizes);

    std::vector<std::string> names = o.algos;
    if (names.empty()) {
        for (auto kind : all_policy_kinds()) names.emplace_back(to_string(kind));
    }

    ExperimentConfig cfg{env, m, {}, o.reps, o.seed, o.alpha, o.threads};
    for (const auto& name : names) {
        auto kind = parse_policy_kind(name);
        if (!kind) throw CLI::ValidationError("--algos", "unknown algorithm '" + name + "'");
        PolicyParams params = default_params(*kind, env.horizon(), env.num_arms(), m,
                                             static_cast<int>(env.table().num_segments()));
        if (o.p) params.p = *o.p;
        if (o.delta) params.delta = *o.delta;
        if (o.check_every) params.check_every = *o.check_every;
        if (o.w) params.w = *o.w;
        if (o.b) params.b = *o.b;
        if (o.gamma) params.gamma_d = *o.gamma;
        if (o.xi) params.xi = *o.xi;
        if (o.gamma_m) params.gamma_m = *o.gamma_m;
        cfg.policies.push_back({name, params});
    }

    const Aggregate agg = run_experiment(cfg);

    const std::filesystem::path dir(o.out);
    std::filesystem::create_directories(dir);
    write_file(dir / "regret.csv", export_csv(agg));

    std::ostringstream summary;
    summary << "label,final_mean,final_std,mean_detections\n";
    for (const auto& c : agg.curves) {
        summary << c.label << ',' << std::setprecision(17) << c.final_mean() << ',' << c.final_std() << ','
                << c.mean_detections << '\n';
    }
    write_file(dir / "summary.csv", summary.str());
    if (o.plot) write_file(dir / "regret.svg", emit_svg(agg));

    out << "horizon " << env.horizon() << ", K=" << env.num_arms() << ", m=" << m << ", segments "
        << env.table().num_segments() << ", replications " << o.reps << '\n';
    out << std::left << std::setw(14) << "algorithm" << std::right << std::setw(14) << "final mean" << std::setw(12)
        << "std" << std::setw(12) << "detections" << '\n';
    out << std::fixed << std::setprecision(2);
    for (const auto& c : agg.curves) {
        out << std::left << std::setw(14) << c.label << std::right << std::setw(14) << c.final_mean() << std::setw(12)
            << c.final_std() << std::setw(12) << c.mean_detections << '\n';
    }
    out << "wrote " << (dir / "regret.csv").string() << '\n';
    return 0;
}

template <typename T>
T require(const std::optional<T>& value, const char* flag) {
    if (!value) throw CLI::RequiredError(flag);
    return *value;
}

int do_theory(const TheoryOptions& o, std::ostream& out) {
    out << std::setprecision(10);
    if (o.bound == "d") {
        out << delay_bound_d(require(o.num_arms, "--K"), require(o.p, "--p"), require(o.delta, "--delta"),
                             require(o.horizon, "--T"), require(o.delta_change, "--delta-change"))
            << '\n';
        return 0;
    }
    if (o.bound == "lower") {
        out << minimax_lower_bound(require(o.num_segments, "--N"), require(o.num_arms, "--K"), require(o.horizon, "--T"))
            << '\n';
        return 0;
    }
    if (o.bound == "tuned") {
        auto tuned = tuned_params(require(o.horizon, "--T"), require(o.num_arms, "--K"), o.num_segments);
        out << "delta=" << tuned.delta << " p=" << tuned.p << '\n';
        return 0;
    }

    const int m = o.m.value_or(default_m(o.env));
    BuiltinSizes sizes = sizes_from(o.horizon, o.num_arms, o.num_segments, 0);
    sizes.m = m;
    const Environment env = resolve_environment(o.env, sizes);
    const auto glr = default_params(PolicyKind::glr_cucb, env.horizon(), env.num_arms(), m,
                                    static_cast<int>(env.table().num_segments()));
    const double p = o.p.value_or(glr.p);
    const double delta = o.delta.value_or(glr.delta);

    if (o.bound == "upper") {
        const double lipschitz = o.lipschitz.value_or(std::sqrt(static_cast<double>(m)));
        const auto b = regret_upper_bound(env.table(), m, o.alpha, p, delta, lipschitz);
        out << "ucb_term=" << b.ucb_term << '\n'
            << "uniform_term=" << b.uniform_term << '\n'
            << "delay_term=" << b.delay_term << '\n'
            << "false_alarm_term=" << b.false_alarm_term << '\n'
            << "total=" << b.total << '\n';
        return 0;
    }
    if (o.bound == "check-gap") {
        const auto report = check_gap_assumption(env.table(), p, delta);
        out << "p=" << p << " delta=" << delta << '\n';
        for (std::size_t i = 0; i < report.delays.size(); ++i) out << "d_" << i + 1 << '=' << report.delays[i] << '\n';
        for (const auto& s : report.segments) {
            out << "segment " << s.segment + 1 << ": length " << s.length << " required " << s.required << ' '
                << (s.satisfied ? "ok" : "VIOLATED") << '\n';
        }
        out << (report.satisfied() ? "assumption satisfied" : "assumption violated") << '\n';
        return 0;
    }
    throw CLI::ValidationError("--bound", "unknown bound '" + o.bound + "'");
}

int do_check_env(const std::string& path, std::ostream& out) {
    const SegmentTable table = load_segment_table_file(path);
    out << path << ": K=" << table.num_arms() << " T=" << table.horizon() << " segments=" << table.num_segments()
        << '\n';
    const auto changes = table.change_points();
    out << "change-points:";
    for (int nu : changes) out << ' ' << nu;
    out << '\n';
    return 0;
}

}  // namespace

Environment resolve_environment(const std::string& source, const BuiltinSizes& sizes) {
    if (source == "builtin:synthetic") {
        return build_synthetic(sizes.horizon, sizes.num_arms, sizes.m, sizes.num_segments, sizes.seed);
    }
    if (source == "builtin:hard") return build_hard_instance(sizes.num_arms, sizes.horizon, sizes.num_segments, sizes.seed);
    if (source.starts_with(kBuiltinPrefix)) throw InvalidArgument("unknown builtin environment '" + source + "'");
    if (!std::filesystem::exists(source)) throw InvalidArgument("segment table '" + source + "' does not exist");
    return Environment(load_segment_table_file(source));
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Piecewise-stationary combinatorial semi-bandit laboratory", "pscb"};
    app.require_subcommand(1);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Monte Carlo regret experiment");
    run_cmd->add_option("--env", run.env, "builtin:synthetic, builtin:hard or a segment-table CSV")
        ->capture_default_str();
    run_cmd->add_option("--T", run.horizon, "horizon of a builtin environment");
    run_cmd->add_option("--K", run.num_arms, "base arms of a builtin environment");
    run_cmd->add_option("--N", run.num_segments, "segments of a builtin environment");
    run_cmd->add_option("--env-seed", run.env_seed, "seed of the hard-instance draw");
    run_cmd->add_option("--m", run.m, "super-arm size (default 2 for synthetic, 1 otherwise)");
    run_cmd->add_option("--algos", run.algos, "comma-separated algorithms")->delimiter(',');
    run_cmd->add_option("--reps", run.reps, "replications per algorithm")->check(CLI::PositiveNumber)->capture_default_str();
    run_cmd->add_option("--seed", run.seed, "base seed")->capture_default_str();
    run_cmd->add_option("--out", run.out, "output directory")->required();
    run_cmd->add_flag("--plot", run.plot, "also write regret.svg");
    run_cmd->add_option("--alpha", run.alpha, "oracle approximation factor")->capture_default_str();
    run_cmd->add_option("--threads", run.threads, "worker threads (0 = all cores)");
    run_cmd->add_option("--p", run.p, "GLR forced-exploration probability");
    run_cmd->add_option("--delta", run.delta, "GLR confidence level");
    run_cmd->add_option("--check-every", run.check_every, "GLR test cadence");
    run_cmd->add_option("--w", run.w, "MUCB window length");
    run_cmd->add_option("--b", run.b, "MUCB detection threshold");
    run_cmd->add_option("--gamma", run.gamma, "DUCB discount factor");
    run_cmd->add_option("--xi", run.xi, "DUCB padding constant");
    run_cmd->add_option("--gamma-m", run.gamma_m, "MUCB forced-exploration rate");

    TheoryOptions theory;
    auto* theory_cmd = app.add_subcommand("theory", "Evaluate delay, regret and tuning formulas");
    theory_cmd->add_option("--bound", theory.bound, "d | upper | lower | tuned | check-gap")
        ->required()
        ->check(CLI::IsMember({"d", "upper", "lower", "tuned", "check-gap"}));
    theory_cmd->add_option("--K", theory.num_arms, "base arms");
    theory_cmd->add_option("--T", theory.horizon, "horizon");
    theory_cmd->add_option("--N", theory.num_segments, "segments");
    theory_cmd->add_option("--p", theory.p, "forced-exploration probability");
    theory_cmd->add_option("--delta", theory.delta, "confidence level");
    theory_cmd->add_option("--delta-change", theory.delta_change, "change magnitude");
    theory_cmd->add_option("--env", theory.env, "environment for upper / check-gap")->capture_default_str();
    theory_cmd->add_option("--m", theory.m, "super-arm size");
    theory_cmd->add_option("--alpha", theory.alpha, "oracle approximation factor")->capture_default_str();
    theory_cmd->add_option("--L", theory.lipschitz, "Lipschitz constant (default sqrt(m))");

    std::string env_path;
    auto* check_cmd = app.add_subcommand("check-env", "Validate a segment-table CSV");
    check_cmd->add_option("path", env_path, "segment table")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help exits 0; every other parse failure is a usage error.
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        if (*run_cmd) return do_run(run, out);
        if (*theory_cmd) return do_theory(theory, out);
        if (*check_cmd) return do_check_env(env_path, out);
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        const std::string& source = *check_cmd ? env_path : (*theory_cmd ? theory.env : run.env);
        err << "error: " << source << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace pscb
