#include "extrema/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "extrema/errors.hpp"

namespace extrema {

namespace {

constexpr std::size_t kLsvDensitySteps = 100'000'000;
constexpr std::size_t kLsvDensityBins = 10'000;
constexpr std::uint64_t kLsvDensitySeed = 0x5eed'0001ULL;

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

double step_unchecked(const MapSystem& map, double x) noexcept {
    switch (map.kind_) {
        case MapKind::Tent:
            return 1.0 - std::abs(1.0 - 2.0 * x);
        case MapKind::Doubling: {
            const double y = 2.0 * x;
            return y >= 1.0 ? y - 1.0 : y;
        }
        case MapKind::Logistic4:
            return 4.0 * x * (1.0 - x);
        case MapKind::Lsv:
            if (x < 0.5) return x * (1.0 + map.lsv_factor_ * std::pow(x, map.alpha_));
            return 2.0 * x - 1.0;
    }
    return x;
}

MapSystem MapSystem::lsv(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InputError("lsv alpha must lie strictly inside (0, 1), got " +
                         std::to_string(alpha));
    }
    MapSystem m(MapKind::Lsv, alpha);
    m.lsv_factor_ = std::pow(2.0, alpha);
    return m;
}

MapSystem MapSystem::from_name(std::string_view name, double alpha) {
    if (name == "tent") return tent();
    if (name == "doubling") return doubling();
    if (name == "logistic4" || name == "logistic" || name == "quadratic") return logistic4();
    if (name == "lsv") return lsv(alpha);
    throw ConfigurationError("unknown map '" + std::string(name) +
                             "' (expected tent, doubling, logistic4, lsv)");
}

std::string MapSystem::name() const {
    switch (kind_) {
        case MapKind::Tent: return "tent";
        case MapKind::Doubling: return "doubling";
        case MapKind::Logistic4: return "logistic4";
        case MapKind::Lsv: return "lsv";
    }
    return "unknown";
}

double MapSystem::step(double x) const {
    if (!in_unit_interval(x)) {
        throw InputError("map state must lie in [0, 1], got " + std::to_string(x));
    }
    return std::clamp(step_unchecked(*this, x), 0.0, 1.0);
}

void validate_orbit_spec(const MapSystem& map, const OrbitSpec& spec) {
    if (spec.length == 0) throw ConfigurationError("orbit length must be positive");
    if (spec.mode == GenerationMode::Pullback && !map.supports_pullback()) {
        throw ConfigurationError("pullback generation is only exact for tent and doubling maps, not " +
                                 map.name());
    }
}

namespace {

// Non-dyadic maps can round onto a fixed point that the true dynamics never
// reach (e.g. logistic4 at x = 1/2 +- 2^-28 lands on 1.0, then 0.0 forever).
bool absorbed(const MapSystem& map, double x) {
    return (x == 0.0) || (map.kind() == MapKind::Lsv && x == 1.0);
}

double forward_step(const MapSystem& map, double x, Rng& rng) {
    double y = step_unchecked(map, x);
    if (absorbed(map, y)) y = initial_sample(map, rng);
    return y;
}

}  // namespace

double initial_sample(const MapSystem& map, Rng& rng) {
    switch (map.kind()) {
        case MapKind::Tent:
        case MapKind::Doubling:
            return rng.uniform();
        case MapKind::Logistic4: {
            const double s = std::sin(std::numbers::pi * rng.uniform() / 2.0);
            return s * s;
        }
        case MapKind::Lsv: {
            double x = rng.uniform_open();
            for (std::size_t i = 0; i < kLsvBurnIn; ++i) {
                x = step_unchecked(map, x);
                if (absorbed(map, x)) x = rng.uniform_open();
            }
            return x;
        }
    }
    return rng.uniform();
}

void fill_orbit(const MapSystem& map, GenerationMode mode, std::size_t burn_in, Rng& rng,
                std::span<double> out) {
    if (out.empty()) return;
    if (mode == GenerationMode::Pullback) {
        if (!map.supports_pullback()) {
            throw ConfigurationError("pullback generation is only exact for tent and doubling maps, not " +
                                     map.name());
        }
        const std::size_t n = out.size();
        double y = rng.uniform();
        out[n - 1] = y;
        std::uint64_t bits = 0;
        int left = 0;
        const bool tent = map.kind() == MapKind::Tent;
        for (std::size_t i = n - 1; i-- > 0;) {
            if (left == 0) {
                bits = rng();
                left = 64;
            }
            const bool upper = bits & 1u;
            bits >>= 1;
            --left;
            const double half = 0.5 * y;
            if (tent) {
                y = upper ? 1.0 - half : half;
            } else {
                y = upper ? 0.5 + half : half;
            }
            out[i] = y;
        }
        return;
    }

    double x = initial_sample(map, rng);
    if (map.supports_pullback()) {
        // Plain float iteration; dyadic maps collapse to 0 within ~53 steps.
        for (std::size_t i = 0; i < burn_in; ++i) x = step_unchecked(map, x);
        for (auto& v : out) {
            v = x;
            x = step_unchecked(map, x);
        }
        return;
    }
    for (std::size_t i = 0; i < burn_in; ++i) x = forward_step(map, x, rng);
    for (auto& v : out) {
        v = x;
        x = forward_step(map, x, rng);
    }
}

OrbitStream::OrbitStream(const MapSystem& map, GenerationMode mode, std::size_t burn_in, Rng& rng)
    : map_(map), mode_(mode), rng_(&rng) {
    if (mode == GenerationMode::Pullback) {
        if (!map.supports_pullback()) {
            throw ConfigurationError("pullback generation is only exact for tent and doubling maps, not " +
                                     map.name());
        }
        window_ = rng();
        return;
    }
    x_ = initial_sample(map, rng);
    if (map.supports_pullback()) {
        for (std::size_t i = 0; i < burn_in; ++i) x_ = step_unchecked(map, x_);
    } else {
        for (std::size_t i = 0; i < burn_in; ++i) x_ = forward_step(map, x_, rng);
    }
}

void OrbitStream::refill_bits() {
    bits_ = (*rng_)();
    left_ = 64;
}

double OrbitStream::next() {
    if (mode_ == GenerationMode::Pullback) {
        // Bit 63 of the window is the branch of the current state.
        std::uint64_t digits = window_;
        if (map_.kind() == MapKind::Tent) {
            // Binary digit k of x_i is the XOR of branches i .. i+k-1.
            digits ^= digits >> 1;
            digits ^= digits >> 2;
            digits ^= digits >> 4;
            digits ^= digits >> 8;
            digits ^= digits >> 16;
            digits ^= digits >> 32;
        }
        const double x = static_cast<double>(digits >> 11) * 0x1.0p-53;
        if (left_ == 0) refill_bits();
        window_ = (window_ << 1) | (bits_ & 1u);
        bits_ >>= 1;
        --left_;
        return x;
    }
    const double x = x_;
    x_ = map_.supports_pullback() ? step_unchecked(map_, x_) : forward_step(map_, x_, *rng_);
    return x;
}

std::vector<double> sample_orbit(const MapSystem& map, const OrbitSpec& spec, Rng& rng) {
    validate_orbit_spec(map, spec);
    std::vector<double> out(spec.length);
    fill_orbit(map, spec.mode, spec.burn_in, rng, out);
    return out;
}

std::vector<double> sample_orbit(const MapSystem& map, const OrbitSpec& spec) {
    Rng rng(spec.seed);
    return sample_orbit(map, spec, rng);
}

std::vector<double> naive_forward_orbit(const MapSystem& map, double x0, std::size_t length) {
    if (!in_unit_interval(x0)) throw InputError("initial state must lie in [0, 1]");
    std::vector<double> out(length);
    double x = x0;
    for (auto& v : out) {
        v = x;
        x = step_unchecked(map, x);
    }
    return out;
}

std::vector<double> estimate_density_histogram(const MapSystem& map, std::size_t steps,
                                               std::size_t bins, std::uint64_t seed) {
    if (bins == 0 || steps == 0) throw InputError("histogram needs positive steps and bins");
    if (map.supports_pullback()) {
        // Forward float orbits of dyadic maps are degenerate; use the exact
        // stationary marginal instead.
        Rng rng(seed);
        std::vector<double> hist(bins, 0.0);
        for (std::size_t i = 0; i < steps; ++i) {
            const auto b = std::min(bins - 1, static_cast<std::size_t>(rng.uniform() * bins));
            hist[b] += 1.0;
        }
        for (auto& h : hist) h *= static_cast<double>(bins) / static_cast<double>(steps);
        return hist;
    }
    Rng rng(seed);
    std::vector<double> hist(bins, 0.0);
    double x = initial_sample(map, rng);
    for (std::size_t i = 0; i < steps; ++i) {
        const auto b = std::min(bins - 1, static_cast<std::size_t>(x * static_cast<double>(bins)));
        hist[b] += 1.0;
        x = forward_step(map, x, rng);
    }
    for (auto& h : hist) h *= static_cast<double>(bins) / static_cast<double>(steps);
    return hist;
}

namespace {

const std::vector<double>& lsv_density_table(double alpha) {
    static std::mutex mutex;
    static std::map<double, std::unique_ptr<std::vector<double>>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[alpha];
    if (!slot) {
        slot = std::make_unique<std::vector<double>>(estimate_density_histogram(
            MapSystem::lsv(alpha), kLsvDensitySteps, kLsvDensityBins, kLsvDensitySeed));
    }
    return *slot;
}

}  // namespace

DensityValue invariant_density(const MapSystem& map, double x) {
    if (!in_unit_interval(x)) throw InputError("density query must lie in [0, 1]");
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (map.kind()) {
        case MapKind::Tent:
        case MapKind::Doubling:
            return {1.0, false};
        case MapKind::Logistic4:
            if (x <= 0.0 || x >= 1.0) return {inf, false};
            return {1.0 / (std::numbers::pi * std::sqrt(x * (1.0 - x))), false};
        case MapKind::Lsv: {
            if (x < kLsvSingularCutoff) return {inf, true};
            const auto& table = lsv_density_table(map.alpha());
            const auto b = std::min(table.size() - 1,
                                    static_cast<std::size_t>(x * static_cast<double>(table.size())));
            return {table[b], true};
        }
    }
    return {inf, false};
}

bool is_periodic_point(const MapSystem& map, double x, int max_period, double tol) {
    if (!in_unit_interval(x)) return false;
    double y = x;
    for (int k = 1; k <= max_period; ++k) {
        y = step_unchecked(map, y);
        if (std::abs(y - x) <= tol) return true;
    }
    return false;
}

std::string to_string(GenerationMode mode) {
    return mode == GenerationMode::Pullback ? "pullback" : "forward";
}

GenerationMode generation_mode_from_name(std::string_view name) {
    if (name == "pullback") return GenerationMode::Pullback;
    if (name == "forward") return GenerationMode::Forward;
    throw ConfigurationError("unknown generation mode '" + std::string(name) + "'");
}

}  // namespace extrema
