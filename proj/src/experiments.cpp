#include "extrema/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "extrema/dynamics.hpp"
#include "extrema/errors.hpp"
#include "extrema/extremal.hpp"
#include "extrema/parallel.hpp"
#include "extrema/pointproc.hpp"
#include "extrema/skorokhod.hpp"

namespace extrema {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Limit law at a center on the boundary of [0, 1]: only one side of the
// ball lies in the phase space, so the exceedance mass halves.
GevLimit one_sided_limit(const Observable& obs, double rho) {
    const Observable interior = Observable::from_name(obs.name(), 0.5, obs.alpha(), obs.bound());
    return limit_law(interior, 0.5 * rho);
}

WDiagnostics summarize_w(const std::vector<RecordSummary>& summaries, std::size_t n) {
    WDiagnostics w;
    w.n = n;
    w.harmonic = harmonic_number(n);
    const std::size_t trials = summaries.size();
    std::vector<double> counts(trials), ratio(trials), tau_root(trials);
    const double log_n = std::log(static_cast<double>(n));
    for (std::size_t t = 0; t < trials; ++t) {
        const auto& s = summaries[t];
        counts[t] = static_cast<double>(s.count_up_to(n));
        ratio[t] = log_n > 0.0 ? counts[t] / log_n : kNaN;
        tau_root[t] = s.taus.size() >= 10 ? std::pow(static_cast<double>(s.taus[9]), 0.1)
                                          : std::numeric_limits<double>::infinity();
    }
    w.mean_w = mean(counts);
    w.std_error = trials >= 2 ? std::sqrt(sample_variance(counts) / static_cast<double>(trials)) : kNaN;
    w.mean_w_over_log = mean(ratio);
    auto mid = tau_root.begin() + static_cast<std::ptrdiff_t>(trials / 2);
    std::nth_element(tau_root.begin(), mid, tau_root.end());
    w.median_tau10_root = *mid;

    if (trials > 0) {
        RecordSummary span_only;
        span_only.length = n;
        w.mean_checkpoints = w_checkpoints(span_only);
        w.checkpoint_means.assign(w.mean_checkpoints.size(), 0.0);
        for (const auto& s : summaries)
            for (std::size_t c = 0; c < w.mean_checkpoints.size(); ++c)
                w.checkpoint_means[c] += static_cast<double>(s.count_up_to(w.mean_checkpoints[c].n));
        for (std::size_t c = 0; c < w.mean_checkpoints.size(); ++c) {
            w.checkpoint_means[c] /= static_cast<double>(trials);
            w.mean_checkpoints[c].count = static_cast<std::size_t>(std::lround(w.checkpoint_means[c]));
        }
    }
    return w;
}

void finish_window(WindowCounts& wc) {
    double zeros = 0.0;
    for (long c : wc.counts)
        if (c == 0) zeros += 1.0;
    wc.void_fraction = zeros / static_cast<double>(wc.counts.size());
    wc.void_predicted = std::exp(-wc.expected);
    if (wc.counts.size() >= kMinPoissonCounts) {
        wc.test = poisson_count_test(wc.counts, wc.expected);
    } else {
        wc.test.chi2 = kNaN;
        wc.test.p_value = kNaN;
    }
}

std::vector<RecordSummary> record_summaries(const SeriesSource& source, std::size_t n, std::size_t trials,
                                            std::uint64_t seed, unsigned threads) {
    return map_trials<RecordSummary>(trials, seed, threads, [&](std::size_t, Rng& rng) {
        thread_local std::vector<double> xs, scratch;
        xs.resize(n);
        source.generate(rng, xs, scratch);
        return record_times(xs);
    });
}

StepPath random_step_path(Rng& rng, int max_jumps, double lo, double hi) {
    const int jumps = static_cast<int>(rng() % static_cast<std::uint64_t>(max_jumps + 1));
    std::vector<double> times;
    for (int j = 0; j < jumps; ++j) times.push_back(lo + (hi - lo) * rng.uniform_open());
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    std::vector<Jump> js;
    double level = std::floor(4.0 * rng.uniform()) / 2.0;
    const double initial = level;
    for (double t : times) {
        level += 0.25 + std::floor(4.0 * rng.uniform()) / 4.0;
        js.push_back({t, level});
    }
    return StepPath(lo, hi, initial, std::move(js));
}

}  // namespace

System make_system(const ExperimentConfig& cfg, std::size_t n) {
    if (n == 0) throw ConfigurationError("n must be at least 1");
    const double nd = static_cast<double>(n);
    if (cfg.map == "iid") {
        return {SeriesSource::iid_uniform(), GevLimit::weibull(1.0, 1.0, 0.0), Scaling{nd, 1.0}, 1.0, false};
    }
    const MapSystem map = MapSystem::from_name(cfg.map, cfg.alpha);
    const Observable obs = Observable::from_name(cfg.observable, cfg.center, cfg.obs_alpha, cfg.bound_c);
    if (!cfg.allow_periodic && is_periodic_point(map, cfg.center)) {
        throw ConfigurationError("center " + format_double(cfg.center) + " is periodic for " + map.name() +
                                 "; exceedances cluster there (pass allow_periodic to run anyway)");
    }
    std::optional<GenerationMode> mode;
    if (!cfg.mode.empty()) mode = generation_mode_from_name(cfg.mode);
    const std::size_t burn_in = map.kind() == MapKind::Lsv ? kLsvBurnIn : 0;
    const DensityValue rho = invariant_density(map, cfg.center);
    const bool boundary = cfg.center <= 0.0 || cfg.center >= 1.0;
    const GevLimit g = boundary ? one_sided_limit(obs, rho.value) : limit_law(obs, rho.value);
    return {SeriesSource::orbit(map, obs, mode, burn_in), g, obs.scaling(nd), rho.value, rho.approximate};
}

MaxResult run_max_experiment(const System& sys, std::size_t n, std::size_t trials, std::uint64_t seed,
                             unsigned threads) {
    if (n == 0 || trials == 0) throw ConfigurationError("n and trials must be positive");
    MaxResult r;
    r.samples = map_trials<double>(trials, seed, threads, [&](std::size_t, Rng& rng) {
        thread_local std::vector<double> xs, scratch;
        xs.resize(n);
        sys.source.generate(rng, xs, scratch);
        const double m = *std::max_element(xs.begin(), xs.end());
        return sys.scaling.a * (m - sys.scaling.b);
    });
    if (trials >= kMinKsSamples) {
        r.ks = ks_statistic(r.samples, [&](double y) { return sys.limit.cdf(y); });
    } else {
        r.ks = {kNaN, kNaN};
    }
    return r;
}

RecordsResult run_records_experiment(const System& sys, std::size_t n, std::size_t trials,
                                     const std::vector<std::pair<double, double>>& time_windows,
                                     const std::vector<std::pair<double, double>>& value_windows,
                                     std::uint64_t seed, unsigned threads, bool keep_summaries) {
    if (n == 0 || trials == 0) throw ConfigurationError("n and trials must be positive");
    const double nd = static_cast<double>(n);
    double time_horizon = 1.0;
    for (const auto& [a, b] : time_windows) {
        if (!(a > 0.0 && a < b && std::isfinite(b))) {
            throw ConfigurationError("record-time windows need 0 < a < b < inf, got (" + format_double(a) + ", " +
                                     format_double(b) + "]");
        }
        time_horizon = std::max(time_horizon, b);
    }
    const auto value_intensity = IntensityMeasure::record_value(sys.limit);
    RecordsResult r;
    double value_top = kMinusInf;
    double value_horizon = 0.0;
    for (const auto& [lo, hi] : value_windows) {
        WindowCounts wc;
        wc.a = lo;
        wc.b = hi;
        wc.expected = measure_of(value_intensity, Interval{lo, hi});
        r.value_windows.push_back(std::move(wc));
        value_top = std::max(value_top, hi);
        value_horizon = std::max(value_horizon, std::ceil(-std::log(1e-9) / sys.limit.Q(hi)));
    }
    for (const auto& [a, b] : time_windows) {
        WindowCounts wc;
        wc.a = a;
        wc.b = b;
        wc.expected = measure_of(IntensityMeasure::record_time(), Interval{a, b});
        r.time_windows.push_back(std::move(wc));
    }
    constexpr double kMaxHorizon = 10000.0;
    const auto min_length = static_cast<std::size_t>(std::ceil(time_horizon * nd - 1e-9));
    const auto max_length =
        std::max(min_length, static_cast<std::size_t>(std::min(value_horizon, kMaxHorizon) * nd));
    const double raw_top = value_windows.empty() ? kMinusInf : value_top / sys.scaling.a + sys.scaling.b;

    auto summaries = map_trials<RecordSummary>(trials, seed, threads, [&](std::size_t, Rng& rng) {
        SeriesStream stream = sys.source.stream(rng);
        RecordTracker tracker;
        while (tracker.index() < max_length) {
            tracker.push(stream.next());
            if (tracker.index() >= min_length && tracker.current_max() > raw_top) break;
        }
        return tracker.summary();
    });
    double scanned = 0.0;
    for (const auto& s : summaries) {
        scanned += static_cast<double>(s.length);
        if (s.length >= max_length && !(s.values.back() > raw_top)) ++r.truncated_trials;
        const PointPattern1D times = record_time_pattern(s, n, time_horizon);
        const PointPattern1D values = record_value_pattern(s, sys.scaling, n, s.length);
        for (auto& wc : r.time_windows) wc.counts.push_back(static_cast<long>(times.count(wc.a, wc.b)));
        for (auto& wc : r.value_windows) wc.counts.push_back(static_cast<long>(values.count(wc.a, wc.b)));
    }
    r.mean_scan_length = scanned / (nd * static_cast<double>(trials));
    for (auto& wc : r.time_windows) finish_window(wc);
    for (auto& wc : r.value_windows) finish_window(wc);
    r.w = summarize_w(summaries, n);
    if (keep_summaries) r.summaries = std::move(summaries);
    return r;
}

WDiagnostics run_w_diagnostics(const SeriesSource& source, std::size_t n, std::size_t trials, std::uint64_t seed,
                               unsigned threads) {
    if (n == 0 || trials == 0) throw ConfigurationError("n and trials must be positive");
    return summarize_w(record_summaries(source, n, trials, seed, threads), n);
}

std::vector<XiLevel> run_xi_experiment(const System& sys, std::size_t n, std::size_t trials,
                                       const std::vector<double>& levels, std::uint64_t seed, unsigned threads) {
    if (n < 2 || trials == 0) throw ConfigurationError("xi-n needs n >= 2 and trials >= 1");
    if (levels.empty()) throw ConfigurationError("xi-n needs at least one threshold");
    std::vector<XiLevel> out(levels.size());
    for (std::size_t l = 0; l < levels.size(); ++l) {
        out[l].u = levels[l];
        out[l].expected = sys.limit.Q(levels[l]);
        out[l].union_void_predicted =
            std::exp(-0.5 * sys.limit.Q(levels[l]) - 0.5 * sys.limit.Q_extended(levels[l] + 1.0));
    }
    const std::size_t half = n / 2;  // i/n <= 1/2 iff i <= n/2
    struct Counts {
        std::vector<long> first, second;
        std::vector<char> union_void;
    };
    const auto per_trial = map_trials<Counts>(trials, seed, threads, [&](std::size_t, Rng& rng) {
        thread_local std::vector<double> xs, scratch;
        xs.resize(n);
        sys.source.generate(rng, xs, scratch);
        Counts c;
        c.first.assign(levels.size(), 0);
        c.second.assign(levels.size(), 0);
        c.union_void.assign(levels.size(), 1);
        for (std::size_t i = 0; i < n; ++i) {
            const double y = sys.scaling.a * (xs[i] - sys.scaling.b);
            const bool early = i + 1 <= half;
            for (std::size_t l = 0; l < levels.size(); ++l) {
                if (y > levels[l]) {
                    (early ? c.first : c.second)[l] += 1;
                    if (early || y > levels[l] + 1.0) c.union_void[l] = 0;
                }
            }
        }
        return c;
    });
    for (std::size_t l = 0; l < levels.size(); ++l) {
        auto& lv = out[l];
        double voids = 0.0;
        std::vector<double> f, s;
        for (const auto& c : per_trial) {
            lv.first_half.push_back(c.first[l]);
            lv.second_half.push_back(c.second[l]);
            lv.full.push_back(c.first[l] + c.second[l]);
            voids += c.union_void[l];
            f.push_back(static_cast<double>(c.first[l]));
            s.push_back(static_cast<double>(c.second[l]));
        }
        lv.union_void = voids / static_cast<double>(trials);
        std::vector<double> full(lv.full.begin(), lv.full.end());
        lv.mean_relative_error = std::abs(mean(full) / lv.expected - 1.0);
        lv.correlation = trials >= 2 ? pearson_correlation(f, s) : kNaN;
        if (trials >= kMinPoissonCounts) {
            lv.test = poisson_count_test(lv.full, lv.expected);
        } else {
            lv.test.chi2 = lv.test.p_value = kNaN;
        }
    }
    return out;
}

SamplerComparison compare_extremal_samplers(const GevLimit& g, double t_start, const std::vector<double>& times,
                                            std::size_t paths, std::uint64_t seed, unsigned threads) {
    if (times.empty() || !std::is_sorted(times.begin(), times.end()) || times.front() <= t_start) {
        throw ConfigurationError("probe times must be increasing and after t_start");
    }
    const double t_end = times.back();
    struct PathPair {
        std::vector<double> chain, prm;
        long jumps = 0;
    };
    const std::uint64_t prm_seed = mix64(seed ^ 0x5eed0f9a1a2bULL);
    const auto samples = map_trials<PathPair>(paths, seed, threads, [&](std::size_t i, Rng& rng) {
        Rng prm_rng(prm_seed, i);
        const StepPath chain = sample_extremal_path(g, t_start, t_end, rng);
        const StepPath prm = sample_extremal_path_via_prm(g, t_start, t_end, prm_rng);
        PathPair pp;
        for (double t : times) {
            pp.chain.push_back(chain(t));
            pp.prm.push_back(prm(t));
        }
        pp.jumps = static_cast<long>(functional_H3(chain, times.front(), t_end));
        return pp;
    });
    SamplerComparison r;
    r.times = times;
    r.jump_window_lo = times.front();
    r.jump_window_hi = t_end;
    for (std::size_t k = 0; k < times.size(); ++k) {
        std::vector<double> a, b;
        for (const auto& s : samples) {
            a.push_back(s.chain[k]);
            b.push_back(s.prm[k]);
        }
        r.ks.push_back(paths >= kMinKsSamples ? ks_two_sample(a, b) : TestResult{kNaN, kNaN});
    }
    for (const auto& s : samples) r.jump_counts.push_back(s.jumps);
    const double expected = std::log(t_end / times.front());
    if (paths >= kMinPoissonCounts && expected > 0.0) {
        r.jump_test = poisson_count_test(r.jump_counts, expected);
    } else {
        r.jump_test.chi2 = r.jump_test.p_value = kNaN;
    }
    return r;
}

std::vector<long> thinned_counts(double rate, double lo, double hi, double p, std::size_t samples,
                                 std::uint64_t seed, unsigned threads) {
    const auto intensity = IntensityMeasure::uniform_rate(rate);
    const Interval window{lo, hi};
    return map_trials<long>(samples, seed, threads, [&](std::size_t, Rng& rng) {
        const PointPattern1D pattern = sample_prm(intensity, window, rng);
        if (p >= 1.0) return static_cast<long>(pattern.size());
        return static_cast<long>(thin(pattern, p, rng).size());
    });
}

std::vector<TestRecord> run_selftest(std::uint64_t seed, unsigned threads) {
    std::vector<TestRecord> out;
    std::uint64_t stream = 0;
    auto next_seed = [&] { return mix64(seed + (++stream)); };
    auto add = [&](std::string name, double stat, double p, std::size_t n, std::size_t trials, std::uint64_t s,
                   bool pass) { out.push_back({std::move(name), stat, p, n, trials, s, pass}); };
    constexpr double kLevel = 0.001;

    ExperimentConfig cfg;  // tent, neglog, 1/sqrt(2)
    {
        const std::size_t n = 2000, trials = 2000;
        const auto s = next_seed();
        const auto r = run_max_experiment(make_system(cfg, n), n, trials, s, threads);
        add("max-gumbel-ks", r.ks.statistic, r.ks.p_value, n, trials, s, r.ks.statistic <= 0.05);
    }
    {
        const std::size_t n = 10000, trials = 1000;
        const auto s = next_seed();
        const auto r = run_records_experiment(make_system(cfg, n), n, trials, {{0.25, 1.0}}, {{0.0, 1.0}}, s,
                                              threads, false);
        const auto& tw = r.time_windows.front();
        add("record-time-poisson", tw.test.chi2, tw.test.p_value, n, trials, s, tw.test.p_value > kLevel);
        add("record-time-void", std::abs(tw.void_fraction - tw.void_predicted), kNaN, n, trials, s,
            std::abs(tw.void_fraction - tw.void_predicted) <= 0.05);
        const auto& vw = r.value_windows.front();
        add("record-value-poisson", vw.test.chi2, vw.test.p_value, n, trials, s, vw.test.p_value > kLevel);
    }
    {
        const std::size_t n = 10000, trials = 1000;
        const auto s = next_seed();
        const auto lv = run_xi_experiment(make_system(cfg, n), n, trials, {1.0}, s, threads).front();
        add("xi-n-poisson", lv.test.chi2, lv.test.p_value, n, trials, s, lv.test.p_value > kLevel);
        add("xi-n-halves-correlation", lv.correlation, kNaN, n, trials, s, std::abs(lv.correlation) < 0.1);
    }
    {
        const std::size_t n = 10000, trials = 2000;
        const auto s = next_seed();
        const System sys = make_system(cfg, n);
        const std::vector<std::pair<double, double>> iv{{0.0, 0.4}, {0.5, 0.9}};
        const std::vector<double> xl{1.0, 2.0};
        const auto r = block_independence_test(sys.source, sys.limit, sys.scaling, iv, xl, n, trials, s, threads);
        const double gap = std::abs(r.joint_empirical - r.joint_predicted);
        add("block-independence", gap, kNaN, n, trials, s, gap <= 0.04);
    }
    {
        const std::size_t paths = 2000;
        const auto s = next_seed();
        const auto r = compare_extremal_samplers(GevLimit::gumbel(2.0), kDefaultPathStart, {0.5, 1.0, 2.0}, paths,
                                                 s, threads);
        double worst_p = 1.0, worst_d = 0.0;
        for (const auto& k : r.ks) {
            worst_p = std::min(worst_p, k.p_value);
            worst_d = std::max(worst_d, k.statistic);
        }
        add("extremal-samplers-ks", worst_d, worst_p, 0, paths, s, worst_p > kLevel);
        add("extremal-jumps-poisson", r.jump_test.chi2, r.jump_test.p_value, 0, paths, s,
            r.jump_test.p_value > kLevel);
    }
    {
        const std::size_t samples = 20000;
        const auto s = next_seed();
        const auto counts = thinned_counts(1.0, 0.0, 10.0, 0.3, samples, s, threads);
        const auto t = poisson_count_test(counts, 3.0);
        add("thinning-poisson", t.chi2, t.p_value, 0, samples, s, t.p_value > kLevel);
    }
    {
        const std::size_t samples = 20000;
        const auto s = next_seed();
        const auto intensity = IntensityMeasure::record_time();
        const auto counts = map_trials<long>(samples, s, threads, [&](std::size_t, Rng& rng) {
            return static_cast<long>(sample_prm(intensity, Interval{0.1, 1.0}, rng).size());
        });
        const auto t = poisson_count_test(counts, std::log(10.0));
        add("prm-record-time-poisson", t.chi2, t.p_value, 0, samples, s, t.p_value > kLevel);
    }
    {
        const std::size_t triples = 300;
        const auto s = next_seed();
        struct Check {
            double triangle = 0.0, symmetry = 0.0, sup_bound = 0.0;
        };
        const auto checks = map_trials<Check>(triples, s, threads, [&](std::size_t, Rng& rng) {
            const StepPath p = random_step_path(rng, 3, 0.0, 1.0);
            const StepPath q = random_step_path(rng, 3, 0.0, 1.0);
            const StepPath r = random_step_path(rng, 3, 0.0, 1.0);
            const double pq = skorokhod_distance(p, q, 0.0, 1.0);
            Check c;
            c.triangle = pq - skorokhod_distance(p, r, 0.0, 1.0) - skorokhod_distance(r, q, 0.0, 1.0);
            c.symmetry = std::abs(pq - skorokhod_distance(q, p, 0.0, 1.0));
            c.sup_bound = pq - uniform_distance(p, q, 0.0, 1.0);
            return c;
        });
        double tri = -kPlusInf, sym = 0.0, sup = -kPlusInf;
        for (const auto& c : checks) {
            tri = std::max(tri, c.triangle);
            sym = std::max(sym, c.symmetry);
            sup = std::max(sup, c.sup_bound);
        }
        add("skorokhod-triangle", tri, kNaN, 0, triples, s, tri <= 1e-9);
        add("skorokhod-symmetry", sym, kNaN, 0, triples, s, sym == 0.0);
        add("skorokhod-sup-bound", sup, kNaN, 0, triples, s, sup <= 1e-12);
    }
    {
        const std::size_t n = 10000, trials = 1000;
        const auto s = next_seed();
        const auto w = run_w_diagnostics(SeriesSource::iid_uniform(), n, trials, s, threads);
        const double gap = std::abs(w.mean_w - w.harmonic);
        add("iid-records-harmonic", gap, kNaN, n, trials, s, gap <= 4.0 * w.std_error);
    }
    {
        const std::size_t paths = 5000;
        const auto s = next_seed();
        const GevLimit g = GevLimit::gumbel(2.0);
        const auto ys = map_trials<double>(paths, s, threads, [&](std::size_t, Rng& rng) {
            return sample_extremal_path(g, kDefaultPathStart, 1.0, rng)(1.0);
        });
        const auto t = ks_statistic(ys, [&](double y) { return g.cdf(y); });
        add("extremal-marginal-ks", t.statistic, t.p_value, 0, paths, s, t.p_value > kLevel);
    }
    return out;
}

}  // namespace extrema
