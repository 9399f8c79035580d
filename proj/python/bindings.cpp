#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "extrema/cli.hpp"
#include "extrema/dynamics.hpp"
#include "extrema/errors.hpp"
#include "extrema/experiments.hpp"
#include "extrema/extremal.hpp"
#include "extrema/observables.hpp"
#include "extrema/parallel.hpp"
#include "extrema/pointproc.hpp"
#include "extrema/records.hpp"
#include "extrema/series.hpp"
#include "extrema/skorokhod.hpp"
#include "extrema/stats.hpp"
#include "extrema/step_path.hpp"

namespace py = pybind11;
using namespace extrema;

namespace {

py::dict test_dict(const TestResult& r) {
    py::dict d;
    d["statistic"] = r.statistic;
    d["p_value"] = r.p_value;
    return d;
}

py::dict poisson_dict(const PoissonTestResult& r) {
    py::dict d;
    d["chi2"] = r.chi2;
    d["p_value"] = r.p_value;
    d["dof"] = r.dof;
    d["cell_starts"] = r.cell_starts;
    d["observed"] = r.observed;
    d["expected"] = r.expected;
    return d;
}

py::dict window_dict(const WindowCounts& w) {
    py::dict d;
    d["window"] = std::make_pair(w.a, w.b);
    d["expected"] = w.expected;
    d["counts"] = w.counts;
    d["void_fraction"] = w.void_fraction;
    d["void_predicted"] = w.void_predicted;
    d["test"] = poisson_dict(w.test);
    return d;
}

py::dict w_dict(const WDiagnostics& w) {
    py::dict d;
    d["n"] = w.n;
    d["mean_w"] = w.mean_w;
    d["std_error"] = w.std_error;
    d["harmonic"] = w.harmonic;
    d["mean_w_over_log"] = w.mean_w_over_log;
    d["median_tau10_root"] = w.median_tau10_root;
    return d;
}

System system_for(const std::string& map, const std::string& observable, std::size_t n, double center,
                  double alpha, double obs_alpha, double bound, bool allow_periodic) {
    ExperimentConfig cfg;
    cfg.map = map;
    cfg.observable = observable;
    cfg.center = center;
    cfg.alpha = alpha;
    cfg.obs_alpha = obs_alpha;
    cfg.bound_c = bound;
    cfg.allow_periodic = allow_periodic;
    return make_system(cfg, n);
}

// Keyword arguments shared by every experiment that builds a system.
#define SYSTEM_ARGS                                                                                            \
    py::arg("map") = "tent", py::arg("observable") = "neglog", py::arg("n") = 10000,                          \
    py::arg("center") = kDefaultCenter, py::arg("alpha") = 0.5, py::arg("obs_alpha") = 1.0,                  \
    py::arg("bound") = 1.0, py::arg("allow_periodic") = false

}  // namespace

PYBIND11_MODULE(_extrema, m) {
    m.doc() = "Extreme value statistics for chaotic maps";

    py::register_exception<ConfigurationError>(m, "ConfigurationError", PyExc_ValueError);
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<DegenerateLimitError>(m, "DegenerateLimitError", domain.ptr());

    py::enum_<GenerationMode>(m, "GenerationMode")
        .value("FORWARD", GenerationMode::Forward)
        .value("PULLBACK", GenerationMode::Pullback);

    py::class_<MapSystem>(m, "MapSystem")
        .def_static("tent", &MapSystem::tent)
        .def_static("doubling", &MapSystem::doubling)
        .def_static("logistic4", &MapSystem::logistic4)
        .def_static("lsv", &MapSystem::lsv, py::arg("alpha"))
        .def_static("from_name", &MapSystem::from_name, py::arg("name"), py::arg("alpha") = 0.5)
        .def_property_readonly("name", &MapSystem::name)
        .def_property_readonly("alpha", &MapSystem::alpha)
        .def_property_readonly("supports_pullback", &MapSystem::supports_pullback)
        .def("step", &MapSystem::step, py::arg("x"))
        .def("density", [](const MapSystem& map, double x) { return invariant_density(map, x).value; },
             py::arg("x"))
        .def("is_periodic_point", &is_periodic_point, py::arg("x"), py::arg("max_period") = 12,
             py::arg("tol") = 1e-9)
        .def(
            "orbit",
            [](const MapSystem& map, std::size_t length, std::uint64_t seed, std::optional<GenerationMode> mode,
               std::size_t burn_in) {
                return sample_orbit(map, {length, burn_in, seed, mode.value_or(map.default_mode())});
            },
            py::arg("length"), py::arg("seed") = 0, py::arg("mode") = py::none(), py::arg("burn_in") = 0)
        .def("__repr__", [](const MapSystem& map) { return "MapSystem(" + map.name() + ")"; });

    m.def("naive_forward_orbit", &naive_forward_orbit, py::arg("map"), py::arg("x0"), py::arg("length"));

    py::class_<Scaling>(m, "Scaling")
        .def_readonly("a", &Scaling::a)
        .def_readonly("b", &Scaling::b);

    py::class_<Observable>(m, "Observable")
        .def_static("neglog", &Observable::neglog, py::arg("center") = kDefaultCenter)
        .def_static("pareto", &Observable::pareto, py::arg("alpha"), py::arg("center") = kDefaultCenter)
        .def_static("bounded", &Observable::bounded, py::arg("bound"), py::arg("alpha"),
                    py::arg("center") = kDefaultCenter)
        .def_property_readonly("name", &Observable::name)
        .def_property_readonly("center", &Observable::center)
        .def("__call__", &Observable::evaluate, py::arg("x"))
        .def("scaling", &Observable::scaling, py::arg("n"));

    py::class_<GevLimit>(m, "GevLimit")
        .def_static("gumbel", &GevLimit::gumbel, py::arg("theta"))
        .def_static("frechet", &GevLimit::frechet, py::arg("shape"), py::arg("theta"))
        .def_static("weibull", &GevLimit::weibull, py::arg("shape"), py::arg("theta"), py::arg("endpoint") = 0.0)
        .def_property_readonly("name", &GevLimit::name)
        .def_property_readonly("theta", &GevLimit::theta)
        .def_property_readonly("shape", &GevLimit::shape)
        .def_property_readonly("support", [](const GevLimit& g) { return std::make_pair(g.support().lo, g.support().hi); })
        .def("cdf", &GevLimit::cdf, py::arg("y"))
        .def("quantile", &GevLimit::quantile, py::arg("p"))
        .def("tail_mass", &GevLimit::Q, py::arg("y"))
        .def("level_for_tail_mass", &GevLimit::Q_inverse, py::arg("q"));

    m.def("limit_law", &limit_law, py::arg("observable"), py::arg("density_at_center"));

    m.def(
        "series",
        [](const std::string& map, const std::string& observable, std::size_t length, std::uint64_t seed,
           double center, double alpha, double obs_alpha, double bound, bool allow_periodic) {
            const auto sys = system_for(map, observable, length, center, alpha, obs_alpha, bound, allow_periodic);
            Rng rng(seed);
            return sys.source.generate(rng, length);
        },
        py::arg("map") = "tent", py::arg("observable") = "neglog", py::arg("length") = 10000, py::arg("seed") = 0,
        py::arg("center") = kDefaultCenter, py::arg("alpha") = 0.5, py::arg("obs_alpha") = 1.0,
        py::arg("bound") = 1.0, py::arg("allow_periodic") = false,
        "One realization of the observable along a stationary orbit (map 'iid' gives uniforms).");

    py::class_<Jump>(m, "Jump")
        .def_readonly("time", &Jump::time)
        .def_readonly("value", &Jump::value);

    py::class_<StepPath>(m, "StepPath")
        .def(py::init([](double t_lo, double t_hi, double initial, const std::vector<std::pair<double, double>>& jumps) {
                 std::vector<Jump> js;
                 for (const auto& [t, v] : jumps) js.push_back({t, v});
                 return StepPath(t_lo, t_hi, initial, std::move(js));
             }),
             py::arg("t_lo"), py::arg("t_hi"), py::arg("initial"), py::arg("jumps"))
        .def_property_readonly("t_lo", &StepPath::t_lo)
        .def_property_readonly("t_hi", &StepPath::t_hi)
        .def_property_readonly("initial", &StepPath::initial)
        .def_property_readonly("jumps",
                               [](const StepPath& p) {
                                   std::vector<std::pair<double, double>> out;
                                   for (const auto& j : p.jumps()) out.emplace_back(j.time, j.value);
                                   return out;
                               })
        .def("__call__", &StepPath::operator(), py::arg("t"))
        .def("restrict", &StepPath::restrict, py::arg("a"), py::arg("b"))
        .def("is_record_path", &StepPath::is_record_path)
        .def("to_csv",
             [](const StepPath& p) {
                 std::ostringstream os;
                 write_path_csv(os, p);
                 return os.str();
             })
        .def_static("from_csv",
                    [](const std::string& text) {
                        std::istringstream is(text);
                        return read_path_csv(is);
                    })
        .def(py::self == py::self);

    m.def("running_max", [](const std::vector<double>& xs) { return running_max(xs); }, py::arg("xs"));
    m.def(
        "build_path",
        [](const std::vector<double>& xs, Scaling s, std::size_t n, double t_hi) { return build_path(xs, s, n, t_hi); },
        py::arg("xs"), py::arg("scaling"), py::arg("n"), py::arg("t_hi") = 1.0);
    m.def("invert_path", &invert_path, py::arg("path"), py::arg("e_lo"), py::arg("e_hi"));

    m.def(
        "record_times",
        [](const std::vector<double>& xs) {
            const auto r = record_times(xs);
            return std::make_pair(r.taus, r.values);
        },
        py::arg("xs"), "Record indices (1-based) and record values of a series.");
    m.def("harmonic_number", &harmonic_number, py::arg("n"));

    m.def(
        "sample_prm",
        [](const std::string& intensity, std::pair<double, double> window, std::uint64_t seed, double rate,
           std::optional<GevLimit> limit, std::optional<std::pair<double, double>> levels) {
            Rng rng(seed);
            const Interval w{window.first, window.second};
            if (intensity == "planar") {
                if (!limit) throw InputError("planar intensity needs a limit law");
                const auto lv = levels.value_or(std::make_pair(limit->support().lo, kPlusInf));
                const auto p = sample_prm(IntensityMeasure::planar(*limit), Rect{w, {lv.first, lv.second}}, rng);
                std::vector<std::pair<double, double>> out;
                for (const auto& pt : p.points()) out.emplace_back(pt.t, pt.y);
                return py::object(py::cast(out));
            }
            IntensityMeasure im = IntensityMeasure::record_time();
            if (intensity == "uniform") {
                im = IntensityMeasure::uniform_rate(rate);
            } else if (intensity == "record-value") {
                if (!limit) throw InputError("record-value intensity needs a limit law");
                im = IntensityMeasure::record_value(*limit);
            } else if (intensity != "record-time") {
                throw ConfigurationError("unknown intensity '" + intensity + "'");
            }
            return py::object(py::cast(sample_prm(im, w, rng).points()));
        },
        py::arg("intensity"), py::arg("window"), py::arg("seed") = 0, py::arg("rate") = 1.0,
        py::arg("limit") = py::none(), py::arg("levels") = py::none(),
        "Poisson random measure on a window: 'uniform', 'record-time', 'record-value' or 'planar'.");

    m.def(
        "sample_extremal_path",
        [](const GevLimit& g, double t_start, double t_end, std::uint64_t seed, const std::string& sampler) {
            Rng rng(seed);
            if (sampler == "jump-chain") return sample_extremal_path(g, t_start, t_end, rng);
            if (sampler == "prm") return sample_extremal_path_via_prm(g, t_start, t_end, rng);
            throw ConfigurationError("unknown sampler '" + sampler + "'");
        },
        py::arg("limit"), py::arg("t_start") = kDefaultPathStart, py::arg("t_end") = 2.0, py::arg("seed") = 0,
        py::arg("sampler") = "jump-chain");
    m.def(
        "fdd_cdf",
        [](const GevLimit& g, const std::vector<double>& times, const std::vector<double>& values) {
            return fdd_cdf(g, times, values);
        },
        py::arg("limit"), py::arg("times"), py::arg("values"));

    m.def("skorokhod_distance", &skorokhod_distance, py::arg("p"), py::arg("q"), py::arg("a"), py::arg("b"));
    m.def("skorokhod_distance_0inf", &skorokhod_distance_0inf, py::arg("p"), py::arg("q"));
    m.def("uniform_distance", &uniform_distance, py::arg("p"), py::arg("q"), py::arg("a"), py::arg("b"));

    m.def(
        "ks_test",
        [](const std::vector<double>& xs, const std::function<double(double)>& cdf) {
            return test_dict(ks_statistic(xs, cdf));
        },
        py::arg("samples"), py::arg("cdf"));
    m.def(
        "ks_two_sample", [](const std::vector<double>& a, const std::vector<double>& b) { return test_dict(ks_two_sample(a, b)); },
        py::arg("a"), py::arg("b"));
    m.def(
        "poisson_count_test",
        [](const std::vector<long>& counts, double mean) { return poisson_dict(poisson_count_test(counts, mean)); },
        py::arg("counts"), py::arg("mean"));

    m.def(
        "simulate_max",
        [](std::size_t trials, std::uint64_t seed, int threads, const std::string& map, const std::string& observable,
           std::size_t n, double center, double alpha, double obs_alpha, double bound, bool allow_periodic) {
            const auto sys = system_for(map, observable, n, center, alpha, obs_alpha, bound, allow_periodic);
            const auto r = run_max_experiment(sys, n, trials, seed, resolve_threads(threads));
            py::dict d;
            d["samples"] = r.samples;
            d["ks"] = test_dict(r.ks);
            d["limit"] = sys.limit;
            return d;
        },
        py::arg("trials") = 1000, py::arg("seed") = 1, py::arg("threads") = 0, SYSTEM_ARGS,
        "Normalized maxima a_n (M_n - b_n) over independent orbits, with a KS test against the limit law.");

    m.def(
        "simulate_records",
        [](std::size_t trials, std::uint64_t seed, int threads, const std::vector<std::pair<double, double>>& windows,
           const std::vector<std::pair<double, double>>& value_windows, const std::string& map,
           const std::string& observable, std::size_t n, double center, double alpha, double obs_alpha, double bound,
           bool allow_periodic) {
            const auto sys = system_for(map, observable, n, center, alpha, obs_alpha, bound, allow_periodic);
            const auto r =
                run_records_experiment(sys, n, trials, windows, value_windows, seed, resolve_threads(threads), false);
            py::dict d;
            py::list tw, vw;
            for (const auto& w : r.time_windows) tw.append(window_dict(w));
            for (const auto& w : r.value_windows) vw.append(window_dict(w));
            d["time_windows"] = tw;
            d["value_windows"] = vw;
            d["w"] = w_dict(r.w);
            d["mean_scan_length"] = r.mean_scan_length;
            d["truncated_trials"] = r.truncated_trials;
            return d;
        },
        py::arg("trials") = 1000, py::arg("seed") = 1, py::arg("threads") = 0,
        py::arg("windows") = std::vector<std::pair<double, double>>{{0.25, 1.0}},
        py::arg("value_windows") = std::vector<std::pair<double, double>>{{0.0, 1.0}}, SYSTEM_ARGS);

    m.def(
        "xi_counts",
        [](std::size_t trials, std::uint64_t seed, int threads, const std::vector<double>& levels,
           const std::string& map, const std::string& observable, std::size_t n, double center, double alpha,
           double obs_alpha, double bound, bool allow_periodic) {
            const auto sys = system_for(map, observable, n, center, alpha, obs_alpha, bound, allow_periodic);
            py::list out;
            for (const auto& l : run_xi_experiment(sys, n, trials, levels, seed, resolve_threads(threads))) {
                py::dict d;
                d["u"] = l.u;
                d["expected"] = l.expected;
                d["counts"] = l.full;
                d["test"] = poisson_dict(l.test);
                d["correlation"] = l.correlation;
                out.append(d);
            }
            return out;
        },
        py::arg("trials") = 1000, py::arg("seed") = 1, py::arg("threads") = 0,
        py::arg("levels") = std::vector<double>{1.0}, SYSTEM_ARGS);

    m.def(
        "dprime",
        [](double u, std::size_t k_block, std::size_t trials, std::uint64_t seed, int threads, const std::string& map,
           const std::string& observable, std::size_t n, double center, double alpha, double obs_alpha, double bound,
           bool allow_periodic) {
            const auto sys = system_for(map, observable, n, center, alpha, obs_alpha, bound, allow_periodic);
            const auto r = dprime_estimate(sys.source, u, n, k_block, trials, seed, resolve_threads(threads));
            py::dict d;
            d["estimate"] = r.estimate;
            d["std_error"] = r.std_error;
            d["exceedance_rate"] = r.exceedance_rate;
            d["lags"] = r.lags;
            return d;
        },
        py::arg("u"), py::arg("k_block") = 10, py::arg("trials") = 100, py::arg("seed") = 1, py::arg("threads") = 0,
        SYSTEM_ARGS, "Estimate of n sum_{j <= n/k} P(X_0 > u, X_j > u).");

    m.def(
        "selftest",
        [](std::uint64_t seed, int threads) {
            py::list out;
            for (const auto& t : run_selftest(seed, resolve_threads(threads))) {
                py::dict d;
                d["test"] = t.test;
                d["statistic"] = t.statistic;
                d["p_value"] = t.p_value;
                d["pass"] = t.pass;
                out.append(d);
            }
            return out;
        },
        py::arg("seed") = 7, py::arg("threads") = 0);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line tool in-process; returns (exit code, stdout, stderr).");
}
