#include "extrema/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <json.hpp>
#include <memory>
#include <ostream>
#include <sstream>

#include "extrema/errors.hpp"
#include "extrema/extremal.hpp"
#include "extrema/parallel.hpp"
#include "extrema/pointproc.hpp"
#include "extrema/skorokhod.hpp"

#ifndef EXTREMA_VERSION
#define EXTREMA_VERSION "0.0.0"
#endif

namespace extrema {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr double kAlphaLevel = 0.01;

ojson config_json(const ExperimentConfig& c, bool with_runtime) {
    ojson j;
    j["map"] = c.map;
    j["alpha"] = c.alpha;
    j["observable"] = c.observable;
    j["obs_alpha"] = c.obs_alpha;
    j["bound_c"] = c.bound_c;
    j["center"] = c.center;
    j["allow_periodic"] = c.allow_periodic;
    j["n"] = c.n;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["windows"] = c.windows;
    j["thresholds"] = c.thresholds;
    j["value_windows"] = c.value_windows;
    j["mode"] = c.mode;
    j["k_blocks"] = c.k_blocks;
    j["x_level"] = c.x_level;
    j["t_start"] = c.t_start;
    j["t_end"] = c.t_end;
    j["sampler"] = c.sampler;
    j["probe_times"] = c.probe_times;
    j["intensity"] = c.intensity;
    j["rate"] = c.rate;
    j["thin_p"] = c.thin_p;
    if (with_runtime) {
        j["output_dir"] = c.output_dir;
        j["threads"] = c.threads;
    }
    return j;
}

template <class T>
void read_field(const ojson& j, const char* key, T& target) {
    if (!j.contains(key)) return;
    try {
        target = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigurationError(std::string("config field '") + key + "': " + e.what());
    }
}

void validate(const ExperimentConfig& c) {
    auto bad = [](const std::string& field, const std::string& why) {
        throw ConfigurationError("config field '" + field + "': " + why);
    };
    if (c.n == 0) bad("n", "must be at least 1");
    if (c.trials == 0) bad("trials", "must be at least 1");
    if (!(c.center >= 0.0 && c.center <= 1.0)) bad("center", "must lie in [0, 1]");
    for (const auto& [a, b] : c.windows)
        if (!(a < b)) bad("windows", "each window needs a < b");
    for (const auto& [a, b] : c.value_windows)
        if (!(a < b)) bad("value_windows", "each window needs a < b");
    for (auto k : c.k_blocks)
        if (k == 0) bad("k_blocks", "block counts must be positive");
    if (!(c.x_level > 0.0)) bad("x_level", "must be positive");
    if (!(c.t_start > 0.0 && c.t_start < c.t_end)) bad("t_start", "need 0 < t_start < t_end");
    if (c.sampler != "jump-chain" && c.sampler != "prm") bad("sampler", "expected jump-chain or prm");
    if (c.intensity != "uniform" && c.intensity != "record-time" && c.intensity != "planar" &&
        c.intensity != "record-value") {
        bad("intensity", "expected uniform, record-time, planar or record-value");
    }
    if (!(c.rate > 0.0)) bad("rate", "must be positive");
    if (!(c.thin_p > 0.0 && c.thin_p <= 1.0)) bad("thin_p", "must lie in (0, 1]");
    if (!c.mode.empty() && c.mode != "forward" && c.mode != "pullback") bad("mode", "expected forward or pullback");
    if (c.threads < 0) bad("threads", "must be nonnegative");
}

ExperimentConfig config_from_json(const ojson& j, bool require_core, std::vector<std::string>* warnings) {
    if (!j.is_object()) throw ConfigurationError("config must be a JSON object");
    if (require_core) {
        for (const char* key : {"map", "observable", "n", "trials", "seed"}) {
            if (!j.contains(key)) throw ConfigurationError(std::string("missing required config field '") + key + "'");
        }
    }
    ExperimentConfig c;
    read_field(j, "map", c.map);
    read_field(j, "alpha", c.alpha);
    read_field(j, "observable", c.observable);
    read_field(j, "obs_alpha", c.obs_alpha);
    read_field(j, "bound_c", c.bound_c);
    read_field(j, "center", c.center);
    read_field(j, "allow_periodic", c.allow_periodic);
    read_field(j, "n", c.n);
    read_field(j, "trials", c.trials);
    read_field(j, "seed", c.seed);
    read_field(j, "windows", c.windows);
    read_field(j, "thresholds", c.thresholds);
    read_field(j, "value_windows", c.value_windows);
    read_field(j, "output_dir", c.output_dir);
    read_field(j, "threads", c.threads);
    read_field(j, "mode", c.mode);
    read_field(j, "k_blocks", c.k_blocks);
    read_field(j, "x_level", c.x_level);
    read_field(j, "t_start", c.t_start);
    read_field(j, "t_end", c.t_end);
    read_field(j, "sampler", c.sampler);
    read_field(j, "probe_times", c.probe_times);
    read_field(j, "intensity", c.intensity);
    read_field(j, "rate", c.rate);
    read_field(j, "thin_p", c.thin_p);
    validate(c);

    if (warnings) {
        const ojson known = config_json(c, true);
        for (const auto& item : j.items())
            if (!known.contains(item.key())) warnings->push_back("unknown config field '" + item.key() + "' ignored");
        auto ignored = [&](const char* key, const std::string& why) {
            if (j.contains(key)) warnings->push_back(std::string("config field '") + key + "' ignored: " + why);
        };
        if (c.map != "lsv") ignored("alpha", "map " + c.map + " has no parameter");
        if (c.map == "iid") {
            ignored("observable", "the iid model uses the uniforms directly");
            ignored("center", "the iid model has no center");
            ignored("mode", "the iid model has no orbit");
        }
        if (c.observable == "neglog" || c.map == "iid") ignored("obs_alpha", "observable has no exponent");
        if (c.observable != "bounded" || c.map == "iid") ignored("bound_c", "observable is not bounded");
    }
    return c;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex16(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

ojson test_json(const TestRecord& t) {
    return ojson{{"test", t.test},       {"statistic", t.statistic}, {"p_value", t.p_value}, {"n", t.n},
                 {"trials", t.trials},   {"seed", t.seed},           {"pass", t.pass}};
}

// One invocation's output directory plus the provenance every file carries.
class Output {
  public:
    Output(const ExperimentConfig& cfg, const std::string& subcommand) : cfg_(cfg) {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        localtime_r(&now, &tm);
        std::ostringstream stamp;
        stamp << std::put_time(&tm, "%Y%m%d-%H%M%S");
        const fs::path root(cfg.output_dir);
        fs::create_directories(root);
        const std::string base = subcommand + "-" + stamp.str();
        dir_ = root / base;
        for (int k = 1; !fs::create_directory(dir_); ++k) dir_ = root / (base + "-" + std::to_string(k));
        provenance_ = {{"tool", "extrema"},
                       {"version", EXTREMA_VERSION},
                       {"subcommand", subcommand},
                       {"seed", cfg.seed},
                       {"config_hash", hex16(config_hash(cfg))}};
    }

    const fs::path& dir() const { return dir_; }

    void write_json(const std::string& name, const ojson& body) const {
        ojson doc;
        doc["provenance"] = provenance_;
        doc["config"] = config_json(cfg_, true);
        for (const auto& item : body.items()) doc[item.key()] = item.value();
        std::ofstream os(dir_ / name);
        os << doc.dump(2) << '\n';
        check(os, name);
    }

    std::ofstream open_csv(const std::string& name, const std::string& columns) const {
        std::ofstream os(dir_ / name);
        os << "# extrema " << EXTREMA_VERSION << " " << provenance_["subcommand"].get<std::string>()
           << " seed=" << cfg_.seed << " config_hash=" << provenance_["config_hash"].get<std::string>() << '\n';
        os << "# config " << config_json(cfg_, true).dump() << '\n';
        if (!columns.empty()) os << columns << '\n';
        return os;
    }

    static void check(const std::ostream& os, const std::string& name) {
        if (!os) throw std::runtime_error("failed writing " + name);
    }

  private:
    ExperimentConfig cfg_;
    fs::path dir_;
    ojson provenance_;
};

struct RunContext {
    ExperimentConfig cfg;
    unsigned threads = 1;
    std::ostream& out;
    std::ostream& err;
    std::string subcommand;
};

// Results of one subcommand: test records plus extra JSON fields.
struct Report {
    std::vector<TestRecord> tests;
    ojson extra = ojson::object();
};

int finish(const RunContext& ctx, const Output& output, const Report& report, const std::string& file,
           bool assert_mode) {
    ojson tests = ojson::array();
    bool all_pass = true;
    for (const auto& t : report.tests) {
        tests.push_back(test_json(t));
        all_pass = all_pass && t.pass;
    }
    ojson body = report.extra;
    body["tests"] = tests;
    output.write_json(file, body);
    for (const auto& t : report.tests) {
        ctx.out << (t.pass ? "PASS " : "FAIL ") << t.test << " statistic=" << format_double(t.statistic)
                << " p=" << format_double(t.p_value) << '\n';
    }
    ctx.out << "output: " << output.dir().string() << '\n';
    if (assert_mode && !all_pass) {
        ctx.err << "assertion failed: at least one statistical check did not pass\n";
        return kExitAssertion;
    }
    return kExitOk;
}

std::string window_label(double a, double b) { return "(" + format_double(a) + "," + format_double(b) + "]"; }

ojson limit_json(const System& sys) {
    return {{"family", sys.limit.name()},
            {"shape", sys.limit.shape()},
            {"theta", sys.limit.theta()},
            {"endpoint", sys.limit.endpoint()},
            {"scaling_a", sys.scaling.a},
            {"scaling_b", sys.scaling.b},
            {"density_at_center", sys.density_at_center},
            {"density_approximate", sys.density_approximate},
            {"source", sys.source.describe()}};
}

int cmd_simulate_max(const RunContext& ctx, bool assert_mode) {
    const auto& c = ctx.cfg;
    const System sys = make_system(c, c.n);
    const MaxResult r = run_max_experiment(sys, c.n, c.trials, c.seed, ctx.threads);
    const Output output(c, ctx.subcommand);
    {
        auto os = output.open_csv("samples.csv", "trial,y");
        for (std::size_t t = 0; t < r.samples.size(); ++t) os << t << ',' << format_double(r.samples[t]) << '\n';
        Output::check(os, "samples.csv");
    }
    Report rep;
    rep.extra["limit"] = limit_json(sys);
    rep.tests.push_back({"max-ks-" + sys.limit.name(), r.ks.statistic, r.ks.p_value, c.n, c.trials, c.seed,
                         r.ks.statistic <= 0.05});
    return finish(ctx, output, rep, "results.json", assert_mode);
}

ojson window_json(const WindowCounts& w) {
    return {{"window", {w.a, w.b}},
            {"expected", w.expected},
            {"void_fraction", w.void_fraction},
            {"void_predicted", w.void_predicted},
            {"chi2", w.test.chi2},
            {"p_value", w.test.p_value},
            {"dof", w.test.dof}};
}

ojson w_json(const WDiagnostics& w) {
    ojson cps = ojson::array();
    for (std::size_t i = 0; i < w.mean_checkpoints.size(); ++i)
        cps.push_back({{"n", w.mean_checkpoints[i].n}, {"mean_w", w.checkpoint_means[i]}});
    return {{"n", w.n},
            {"mean_w", w.mean_w},
            {"std_error", w.std_error},
            {"ci95", {w.mean_w - 1.96 * w.std_error, w.mean_w + 1.96 * w.std_error}},
            {"harmonic_number", w.harmonic},
            {"mean_w_over_log_n", w.mean_w_over_log},
            {"median_tau10_root", w.median_tau10_root},
            {"checkpoints", cps}};
}

int cmd_simulate_records(const RunContext& ctx, bool assert_mode) {
    const auto& c = ctx.cfg;
    const System sys = make_system(c, c.n);
    const RecordsResult r =
        run_records_experiment(sys, c.n, c.trials, c.windows, c.value_windows, c.seed, ctx.threads, true);
    const Output output(c, ctx.subcommand);
    {
        auto os = output.open_csv("records.csv", "trial,k,tau_k,value_k");
        for (std::size_t t = 0; t < r.summaries.size(); ++t) {
            const auto& s = r.summaries[t];
            for (std::size_t k = 0; k < s.taus.size(); ++k)
                os << t << ',' << k + 1 << ',' << s.taus[k] << ',' << format_double(s.values[k]) << '\n';
        }
        Output::check(os, "records.csv");
    }
    {
        std::string cols = "trial";
        for (const auto& w : r.time_windows) cols += ",time_" + format_double(w.a) + "_" + format_double(w.b);
        for (const auto& w : r.value_windows) cols += ",value_" + format_double(w.a) + "_" + format_double(w.b);
        auto os = output.open_csv("counts.csv", cols);
        for (std::size_t t = 0; t < c.trials; ++t) {
            os << t;
            for (const auto& w : r.time_windows) os << ',' << w.counts[t];
            for (const auto& w : r.value_windows) os << ',' << w.counts[t];
            os << '\n';
        }
        Output::check(os, "counts.csv");
    }
    Report rep;
    rep.extra["limit"] = limit_json(sys);
    ojson tw = ojson::array(), vw = ojson::array();
    for (const auto& w : r.time_windows) {
        tw.push_back(window_json(w));
        if (c.trials >= kMinPoissonCounts) {
            rep.tests.push_back({"record-time-poisson" + window_label(w.a, w.b), w.test.chi2, w.test.p_value, c.n,
                                 c.trials, c.seed, w.test.p_value > kAlphaLevel});
        }
        const double gap = std::abs(w.void_fraction - w.void_predicted);
        rep.tests.push_back({"record-time-void" + window_label(w.a, w.b), gap, std::nan(""), c.n, c.trials, c.seed,
                             gap <= 0.02});
    }
    for (const auto& w : r.value_windows) {
        vw.push_back(window_json(w));
        if (c.trials >= kMinPoissonCounts) {
            rep.tests.push_back({"record-value-poisson" + window_label(w.a, w.b), w.test.chi2, w.test.p_value, c.n,
                                 c.trials, c.seed, w.test.p_value > kAlphaLevel});
        }
    }
    rep.extra["record_time_windows"] = tw;
    rep.extra["record_value_windows"] = vw;
    rep.extra["w"] = w_json(r.w);
    rep.extra["mean_scan_length"] = r.mean_scan_length;
    rep.extra["truncated_scans"] = r.truncated_trials;
    if (sys.source.is_iid()) {
        const double gap = std::abs(r.w.mean_w - r.w.harmonic);
        rep.tests.push_back({"iid-records-harmonic", gap, std::nan(""), c.n, c.trials, c.seed, gap <= 0.15});
    } else {
        rep.extra["w"]["note"] = "dynamical W_n growth is reported, not asserted";
    }
    return finish(ctx, output, rep, "summary.json", assert_mode);
}

void write_path_files(const Output& output, const std::vector<StepPath>& paths) {
    auto os = output.open_csv("paths.csv", "path,time,value");
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const auto& p = paths[i];
        os << i << ',' << format_double(p.t_lo()) << ',' << format_double(p.initial()) << '\n';
        for (const auto& j : p.jumps()) os << i << ',' << format_double(j.time) << ',' << format_double(j.value) << '\n';
    }
    Output::check(os, "paths.csv");
    for (std::size_t i = 0; i < std::min<std::size_t>(paths.size(), 10); ++i) {
        const std::string name = "path_" + std::to_string(i) + ".csv";
        auto ps = output.open_csv(name, "");
        write_path_csv(ps, paths[i]);
        Output::check(ps, name);
    }
}

int cmd_sample_extremal(const RunContext& ctx, bool assert_mode) {
    const auto& c = ctx.cfg;
    const System sys = make_system(c, c.n);
    const bool via_prm = c.sampler == "prm";
    const auto paths = map_trials<StepPath>(c.trials, c.seed, ctx.threads, [&](std::size_t, Rng& rng) {
        return via_prm ? sample_extremal_path_via_prm(sys.limit, c.t_start, c.t_end, rng)
                       : sample_extremal_path(sys.limit, c.t_start, c.t_end, rng);
    });
    const Output output(c, ctx.subcommand);
    write_path_files(output, paths);
    Report rep;
    rep.extra["limit"] = limit_json(sys);
    if (c.trials >= kMinPoissonCounts) {
        const auto cmp = compare_extremal_samplers(sys.limit, c.t_start, c.probe_times, c.trials, c.seed, ctx.threads);
        for (std::size_t k = 0; k < cmp.times.size(); ++k) {
            rep.tests.push_back({"extremal-samplers-ks-t" + format_double(cmp.times[k]), cmp.ks[k].statistic,
                                 cmp.ks[k].p_value, 0, c.trials, c.seed, cmp.ks[k].p_value > kAlphaLevel});
        }
        rep.tests.push_back({"extremal-jumps-poisson" + window_label(cmp.jump_window_lo, cmp.jump_window_hi),
                             cmp.jump_test.chi2, cmp.jump_test.p_value, 0, c.trials, c.seed,
                             cmp.jump_test.p_value > kAlphaLevel});
    }
    return finish(ctx, output, rep, "results.json", assert_mode);
}

int cmd_sample_prm(const RunContext& ctx, bool assert_mode) {
    const auto& c = ctx.cfg;
    const Output output(c, ctx.subcommand);
    Report rep;
    const bool thinning = c.thin_p < 1.0;
    std::vector<long> counts(c.trials, 0);
    double expected = 0.0;
    std::string label;
    if (c.intensity == "planar") {
        const System sys = make_system(c, c.n);
        const auto& [a, b] = c.windows.front();
        const Rect window{{a, b}, {c.thresholds.front(), kPlusInf}};
        const auto intensity = IntensityMeasure::planar(sys.limit);
        expected = measure_of(intensity, window) * c.thin_p;
        label = "planar" + window_label(a, b) + "x" + window_label(c.thresholds.front(), kPlusInf);
        const auto patterns = map_trials<PointPattern2D>(c.trials, c.seed, ctx.threads, [&](std::size_t, Rng& rng) {
            auto p = sample_prm(intensity, window, rng);
            return thinning ? thin(p, c.thin_p, rng) : p;
        });
        auto os = output.open_csv("patterns.csv", "sample,t,y");
        for (std::size_t s = 0; s < patterns.size(); ++s) {
            counts[s] = static_cast<long>(patterns[s].size());
            for (const auto& pt : patterns[s].points())
                os << s << ',' << format_double(pt.t) << ',' << format_double(pt.y) << '\n';
        }
        Output::check(os, "patterns.csv");
        rep.extra["limit"] = limit_json(sys);
    } else {
        std::optional<IntensityMeasure> intensity;
        std::pair<double, double> w = c.windows.front();
        if (c.intensity == "uniform") {
            intensity = IntensityMeasure::uniform_rate(c.rate);
        } else if (c.intensity == "record-time") {
            intensity = IntensityMeasure::record_time();
        } else {
            const System sys = make_system(c, c.n);
            intensity = IntensityMeasure::record_value(sys.limit);
            w = c.value_windows.front();
            rep.extra["limit"] = limit_json(sys);
        }
        const Interval window{w.first, w.second};
        expected = measure_of(*intensity, window) * c.thin_p;
        label = c.intensity + window_label(w.first, w.second);
        const auto patterns = map_trials<PointPattern1D>(c.trials, c.seed, ctx.threads, [&](std::size_t, Rng& rng) {
            auto p = sample_prm(*intensity, window, rng);
            return thinning ? thin(p, c.thin_p, rng) : p;
        });
        auto os = output.open_csv("patterns.csv", "sample,t");
        for (std::size_t s = 0; s < patterns.size(); ++s) {
            counts[s] = static_cast<long>(patterns[s].size());
            for (double t : patterns[s].points()) os << s << ',' << format_double(t) << '\n';
        }
        Output::check(os, "patterns.csv");
    }
    rep.extra["window"] = label;
    rep.extra["expected_count"] = expected;
    rep.extra["thin_p"] = c.thin_p;
    if (c.trials >= kMinPoissonCounts) {
        const auto t = poisson_count_test(counts, expected);
        rep.tests.push_back({"prm-count-poisson-" + label, t.chi2, t.p_value, 0, c.trials, c.seed,
                             t.p_value > kAlphaLevel});
    }
    return finish(ctx, output, rep, "results.json", assert_mode);
}

int cmd_xi_n(const RunContext& ctx, bool assert_mode) {
    const auto& c = ctx.cfg;
    const System sys = make_system(c, c.n);
    const auto levels = run_xi_experiment(sys, c.n, c.trials, c.thresholds, c.seed, ctx.threads);
    const Output output(c, ctx.subcommand);
    {
        auto os = output.open_csv("counts.csv", "trial,u,full,first_half,second_half");
        for (std::size_t t = 0; t < c.trials; ++t)
            for (const auto& lv : levels)
                os << t << ',' << format_double(lv.u) << ',' << lv.full[t] << ',' << lv.first_half[t] << ','
                   << lv.second_half[t] << '\n';
        Output::check(os, "counts.csv");
    }
    Report rep;
    rep.extra["limit"] = limit_json(sys);
    ojson table = ojson::array();
    for (const auto& lv : levels) {
        const std::string u = format_double(lv.u);
        table.push_back({{"u", lv.u},
                         {"expected", lv.expected},
                         {"mean_relative_error", lv.mean_relative_error},
                         {"correlation_halves", lv.correlation},
                         {"union_void", lv.union_void},
                         {"union_void_predicted", lv.union_void_predicted}});
        if (c.trials >= kMinPoissonCounts) {
            rep.tests.push_back({"xi-n-poisson-u" + u, lv.test.chi2, lv.test.p_value, c.n, c.trials, c.seed,
                                 lv.test.p_value > kAlphaLevel});
        }
        rep.tests.push_back({"xi-n-halves-correlation-u" + u, lv.correlation, std::nan(""), c.n, c.trials, c.seed,
                             std::abs(lv.correlation) < 0.05});
        rep.tests.push_back({"xi-n-mean-count-u" + u, lv.mean_relative_error, std::nan(""), c.n, c.trials, c.seed,
                             lv.mean_relative_error < 0.05});
        const double gap = std::abs(lv.union_void - lv.union_void_predicted);
        rep.tests.push_back({"xi-n-void-union-u" + u, gap, std::nan(""), c.n, c.trials, c.seed, gap <= 0.02});
    }
    rep.extra["levels"] = table;
    return finish(ctx, output, rep, "results.json", assert_mode);
}

int cmd_dprime(const RunContext& ctx, bool assert_mode) {
    const auto& c = ctx.cfg;
    const System sys = make_system(c, c.n);
    const double u = exceedance_threshold(sys.limit, sys.scaling, c.x_level);
    const Output output(c, ctx.subcommand);
    ojson table = ojson::array();
    auto os = output.open_csv("dprime.csv", "k,lags,estimate,std_error,exceedance_rate");
    for (auto k : c.k_blocks) {
        const auto r = dprime_estimate(sys.source, u, c.n, k, c.trials, c.seed, ctx.threads);
        ojson row{{"k", k},
                  {"lags", r.lags},
                  {"estimate", r.estimate},
                  {"std_error", r.std_error},
                  {"exceedance_rate", r.exceedance_rate}};
        if (sys.source.is_iid()) {
            const double p = c.x_level / static_cast<double>(c.n);
            row["independent_prediction"] = static_cast<double>(c.n) * static_cast<double>(r.lags - 1) * p * p;
        }
        table.push_back(row);
        os << k << ',' << r.lags << ',' << format_double(r.estimate) << ',' << format_double(r.std_error) << ','
           << format_double(r.exceedance_rate) << '\n';
    }
    Output::check(os, "dprime.csv");
    Report rep;
    rep.extra["limit"] = limit_json(sys);
    rep.extra["threshold"] = u;
    rep.extra["rows"] = table;
    rep.extra["note"] = "reported as a trend in k at fixed n";
    return finish(ctx, output, rep, "results.json", assert_mode);
}

int cmd_block_indep(const RunContext& ctx, bool assert_mode) {
    const auto& c = ctx.cfg;
    if (c.windows.size() != c.thresholds.size()) {
        throw ConfigurationError("block-indep needs one threshold (x level) per window");
    }
    const System sys = make_system(c, c.n);
    const auto r = block_independence_test(sys.source, sys.limit, sys.scaling, c.windows, c.thresholds, c.n, c.trials,
                                           c.seed, ctx.threads);
    const Output output(c, ctx.subcommand);
    ojson rows = ojson::array();
    auto os = output.open_csv("blocks.csv", "a,b,x,threshold,empirical,predicted");
    for (const auto& row : r.rows) {
        rows.push_back({{"a", row.a},
                        {"b", row.b},
                        {"x", row.x},
                        {"threshold", row.threshold},
                        {"empirical", row.empirical},
                        {"predicted", row.predicted}});
        os << format_double(row.a) << ',' << format_double(row.b) << ',' << format_double(row.x) << ','
           << format_double(row.threshold) << ',' << format_double(row.empirical) << ','
           << format_double(row.predicted) << '\n';
    }
    Output::check(os, "blocks.csv");
    Report rep;
    rep.extra["limit"] = limit_json(sys);
    rep.extra["rows"] = rows;
    rep.extra["joint_empirical"] = r.joint_empirical;
    rep.extra["joint_predicted"] = r.joint_predicted;
    rep.extra["std_error"] = r.std_error;
    const double gap = std::abs(r.joint_empirical - r.joint_predicted);
    rep.tests.push_back({"block-independence-joint", gap, std::nan(""), c.n, c.trials, c.seed, gap <= 0.02});
    return finish(ctx, output, rep, "results.json", assert_mode);
}

int cmd_skorokhod(const RunContext& ctx, const std::string& first, const std::string& second,
                  const std::string& metric, std::optional<double> a, std::optional<double> b) {
    const StepPath p = read_path_csv_file(first);
    const StepPath q = read_path_csv_file(second);
    double d = 0.0;
    ojson body;
    if (metric == "0inf") {
        d = skorokhod_distance_0inf(p, q);
    } else if (metric == "ab") {
        const double lo = a.value_or(std::max(p.t_lo(), q.t_lo()));
        const double hi = b.value_or(std::min(p.t_hi(), q.t_hi()));
        d = skorokhod_distance(p, q, lo, hi);
        body["a"] = lo;
        body["b"] = hi;
    } else {
        throw ConfigurationError("metric must be ab or 0inf");
    }
    body["metric"] = metric;
    body["distance"] = d;
    body["paths"] = {first, second};
    const Output output(ctx.cfg, ctx.subcommand);
    Report rep;
    rep.extra = body;
    ctx.out << "distance " << format_double(d) << '\n';
    return finish(ctx, output, rep, "result.json", false);
}

int cmd_selftest(const RunContext& ctx, bool assert_mode) {
    const auto tests = run_selftest(ctx.cfg.seed, ctx.threads);
    const Output output(ctx.cfg, ctx.subcommand);
    Report rep;
    rep.tests = tests;
    return finish(ctx, output, rep, "report.json", assert_mode);
}

std::pair<double, double> parse_window(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw ConfigurationError("window '" + s + "' must look like a,b");
    try {
        return {parse_double(s.substr(0, comma)), parse_double(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw ConfigurationError("window '" + s + "' must look like a,b");
    }
}

// Registers options on a subcommand and records which ones were given.
class FlagBinder {
  public:
    FlagBinder(CLI::App* app, ojson* overrides) : app_(app), overrides_(overrides) {}

    template <class T>
    void option(const std::string& flags, const std::string& key, const std::string& help) {
        auto value = std::make_shared<T>();
        CLI::Option* opt = app_->add_option(flags, *value, help);
        if constexpr (std::is_same_v<T, std::vector<double>> || std::is_same_v<T, std::vector<std::size_t>>) {
            opt->delimiter(',');
        }
        commits_.push_back([opt, value, key, this] {
            if (opt->count() > 0) (*overrides_)[key] = *value;
        });
    }

    void windows(const std::string& flags, const std::string& key, const std::string& help) {
        auto value = std::make_shared<std::vector<std::string>>();
        CLI::Option* opt = app_->add_option(flags, *value, help);
        commits_.push_back([opt, value, key, this] {
            if (opt->count() == 0) return;
            ojson arr = ojson::array();
            for (const auto& s : *value) {
                const auto w = parse_window(s);
                arr.push_back({w.first, w.second});
            }
            (*overrides_)[key] = arr;
        });
    }

    void flag(const std::string& flags, const std::string& key, const std::string& help) {
        auto value = std::make_shared<bool>(false);
        CLI::Option* opt = app_->add_flag(flags, *value, help);
        commits_.push_back([opt, value, key, this] {
            if (opt->count() > 0) (*overrides_)[key] = *value;
        });
    }

    void commit() const {
        for (const auto& f : commits_) f();
    }

  private:
    CLI::App* app_;
    ojson* overrides_;
    std::vector<std::function<void()>> commits_;
};

struct Subcommand {
    CLI::App* app = nullptr;
    std::unique_ptr<FlagBinder> binder;
    std::string config_path;
    bool assert_mode = false;
};

void add_system_flags(FlagBinder& b) {
    b.option<std::string>("--map", "map", "tent, doubling, logistic4, lsv or iid");
    b.option<double>("--alpha", "alpha", "LSV parameter in (0,1)");
    b.option<std::string>("--observable", "observable", "neglog, pareto or bounded");
    b.option<double>("--obs-alpha", "obs_alpha", "exponent of the pareto/bounded observable");
    b.option<double>("--bound-c", "bound_c", "constant of the bounded observable");
    b.option<double>("--center", "center", "observable center in [0,1]");
    b.flag("--allow-periodic", "allow_periodic", "accept a periodic center");
    b.option<std::string>("--mode", "mode", "orbit generation: forward or pullback");
}

void add_run_flags(FlagBinder& b) {
    b.option<std::size_t>("--n", "n", "sample size per trial");
    b.option<std::size_t>("--trials", "trials", "number of independent trials");
    b.option<std::uint64_t>("--seed", "seed", "base seed");
    b.option<std::string>("--output-dir", "output_dir", "root directory for outputs");
    b.option<int>("--threads", "threads", "worker threads (0: EXTREMA_THREADS or all cores)");
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text, bool require_core, std::vector<std::string>* warnings) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigurationError(std::string("malformed config JSON: ") + e.what());
    }
    return config_from_json(j, require_core, warnings);
}

ExperimentConfig load_config(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream is(path);
    if (!is) throw ConfigurationError("cannot open config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return config_from_json_text(ss.str(), true, warnings);
}

std::string config_to_json(const ExperimentConfig& cfg) { return config_json(cfg, true).dump(2); }

std::uint64_t config_hash(const ExperimentConfig& cfg) { return fnv1a(config_json(cfg, false).dump()); }

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Extreme value statistics of chaotic interval maps", "extrema"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(EXTREMA_VERSION));

    ojson overrides = ojson::object();
    std::map<std::string, Subcommand> subs;
    auto make = [&](const std::string& name, const std::string& help, bool system_flags) -> Subcommand& {
        Subcommand& s = subs[name];
        s.app = app.add_subcommand(name, help);
        s.binder = std::make_unique<FlagBinder>(s.app, &overrides);
        s.app->add_option("--config", s.config_path, "JSON config file; flags override its fields");
        add_run_flags(*s.binder);
        if (system_flags) add_system_flags(*s.binder);
        s.app->add_flag("--assert", s.assert_mode, "exit 3 if a statistical check fails");
        return s;
    };

    make("simulate-max", "rescaled maxima Y_n(1) per trial and a KS test against the limit law", true);
    {
        auto& s = make("simulate-records", "record-time and record-value counts, Poisson tests, W_n diagnostics", true);
        s.binder->windows("--window", "windows", "record-time window a,b (repeatable)");
        s.binder->windows("--value-window", "value_windows", "record-value window a,b (repeatable)");
    }
    {
        auto& s = make("sample-extremal", "sample paths of the extremal process of the limit law", true);
        s.binder->option<double>("--t-start", "t_start", "path start time");
        s.binder->option<double>("--t-end", "t_end", "path end time");
        s.binder->option<std::string>("--sampler", "sampler", "jump-chain or prm");
        s.binder->option<std::vector<double>>("--probe-times", "probe_times", "times for the sampler comparison");
    }
    {
        auto& s = make("sample-prm", "sample Poisson random measures, optionally thinned", true);
        s.binder->option<std::string>("--intensity", "intensity", "uniform, record-time, planar or record-value");
        s.binder->option<double>("--rate", "rate", "rate of the uniform intensity");
        s.binder->option<double>("--thin", "thin_p", "retention probability in (0,1]");
        s.binder->windows("--window", "windows", "time window a,b");
        s.binder->windows("--value-window", "value_windows", "value window a,b (record-value)");
        s.binder->option<std::vector<double>>("--threshold", "thresholds", "lower value edge (planar)");
    }
    {
        auto& s = make("xi-n", "rectangle counts of the planar exceedance process", true);
        s.binder->option<std::vector<double>>("--threshold", "thresholds", "levels u (repeatable or comma list)");
    }
    {
        auto& s = make("dprime", "short-return diagnostic as a function of the block count k", true);
        s.binder->option<std::vector<std::size_t>>("--k", "k_blocks", "block counts k (comma list)");
        s.binder->option<double>("--x", "x_level", "exceedance level x: n P(X > u) = x");
    }
    {
        auto& s = make("block-indep", "joint non-exceedance over disjoint blocks vs the product law", true);
        s.binder->windows("--window", "windows", "block [a,b) in units of n (repeatable)");
        s.binder->option<std::vector<double>>("--threshold", "thresholds", "x level per block");
    }
    std::string path_a, path_b, metric = "ab";
    std::optional<double> lo, hi;
    {
        auto& s = make("skorokhod-dist", "J1 distance between two path CSV files", false);
        s.app->add_option("first", path_a, "first path CSV")->required();
        s.app->add_option("second", path_b, "second path CSV")->required();
        s.app->add_option("--metric", metric, "ab (window distance) or 0inf");
        s.app->add_option("--a", lo, "window start");
        s.app->add_option("--b", hi, "window end");
    }
    make("selftest", "fixed property suite; output depends only on the seed", false);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << EXTREMA_VERSION << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitConfig;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    Subcommand& sub = subs.at(name);
    try {
        sub.binder->commit();
        ojson merged = ojson::object();
        if (!sub.config_path.empty()) {
            std::ifstream is(sub.config_path);
            if (!is) throw ConfigurationError("cannot open config file " + sub.config_path);
            try {
                merged = ojson::parse(is);
            } catch (const nlohmann::json::parse_error& e) {
                throw ConfigurationError(std::string("malformed config JSON: ") + e.what());
            }
            if (!merged.is_object()) throw ConfigurationError("config must be a JSON object");
        }
        for (const auto& item : overrides.items()) merged[item.key()] = item.value();
        std::vector<std::string> warnings;
        RunContext ctx{config_from_json(merged, !sub.config_path.empty(), &warnings), 1, out, err, name};
        for (const auto& w : warnings) err << "warning: " << w << '\n';
        ctx.threads = resolve_threads(ctx.cfg.threads);
        err << "config: " << config_json(ctx.cfg, true).dump() << '\n';

        if (name == "simulate-max") return cmd_simulate_max(ctx, sub.assert_mode);
        if (name == "simulate-records") return cmd_simulate_records(ctx, sub.assert_mode);
        if (name == "sample-extremal") return cmd_sample_extremal(ctx, sub.assert_mode);
        if (name == "sample-prm") return cmd_sample_prm(ctx, sub.assert_mode);
        if (name == "xi-n") return cmd_xi_n(ctx, sub.assert_mode);
        if (name == "dprime") return cmd_dprime(ctx, sub.assert_mode);
        if (name == "block-indep") return cmd_block_indep(ctx, sub.assert_mode);
        if (name == "skorokhod-dist") return cmd_skorokhod(ctx, path_a, path_b, metric, lo, hi);
        return cmd_selftest(ctx, sub.assert_mode);
    } catch (const std::invalid_argument& e) {  // InputError, ConfigurationError
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace extrema
