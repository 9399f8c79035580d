#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "extrema/rng.hpp"

namespace extrema {

enum class MapKind { Tent, Doubling, Logistic4, Lsv };

enum class GenerationMode { Forward, Pullback };

/*!
 * Measure-preserving map of [0, 1].
 *
 * Tent:       f(x) = 1 - |1 - 2x|
 * Doubling:   f(x) = 2x mod 1
 * Logistic4:  f(x) = 4x(1 - x)
 * Lsv(alpha): f(x) = x(1 + 2^alpha x^alpha) on [0, 1/2), 2x - 1 on [1/2, 1]
 */
class MapSystem {
  public:
    static MapSystem tent() { return MapSystem(MapKind::Tent, 0.0); }
    static MapSystem doubling() { return MapSystem(MapKind::Doubling, 0.0); }
    static MapSystem logistic4() { return MapSystem(MapKind::Logistic4, 0.0); }
    /// Throws InputError unless 0 < alpha < 1.
    static MapSystem lsv(double alpha);
    /// Parse "tent", "doubling", "logistic4" or "lsv" (alpha used for lsv only).
    static MapSystem from_name(std::string_view name, double alpha = 0.5);

    MapKind kind() const noexcept { return kind_; }
    double alpha() const noexcept { return alpha_; }
    std::string name() const;

    /// One application of the map. Throws InputError for x outside [0, 1].
    double step(double x) const;

    /// True for maps with two full branches of constant slope and Lebesgue
    /// invariant measure, for which the inverse-branch sampler is exact.
    bool supports_pullback() const noexcept {
        return kind_ == MapKind::Tent || kind_ == MapKind::Doubling;
    }

    /// Pullback for the dyadic maps, Forward otherwise.
    GenerationMode default_mode() const noexcept {
        return supports_pullback() ? GenerationMode::Pullback : GenerationMode::Forward;
    }

    friend bool operator==(const MapSystem&, const MapSystem&) = default;

  private:
    MapSystem(MapKind kind, double alpha) : kind_(kind), alpha_(alpha), lsv_factor_(0.0) {}

    friend double step_unchecked(const MapSystem& map, double x) noexcept;

    MapKind kind_;
    double alpha_;
    double lsv_factor_;  // 2^alpha, cached
};

struct OrbitSpec {
    std::size_t length = 1;
    std::size_t burn_in = 0;
    std::uint64_t seed = 0;
    GenerationMode mode = GenerationMode::Pullback;
};

/// Iterations discarded after a uniform start when sampling the LSV measure.
inline constexpr std::size_t kLsvBurnIn = 10'000;

/// Throws ConfigurationError when the spec's mode is not valid for the map.
void validate_orbit_spec(const MapSystem& map, const OrbitSpec& spec);

/// Draw x0 from the invariant measure (arcsine law for Logistic4; uniform
/// start plus kLsvBurnIn iterations for Lsv).
double initial_sample(const MapSystem& map, Rng& rng);

/*!
 * Fill `out` with a stationary orbit segment x_1, ..., x_n.
 *
 * Forward: x_1 drawn by initial_sample, then `burn_in` extra iterations are
 * discarded. Pullback: x_n uniform, earlier states by random inverse
 * branches; exact for the stationary joint law. Forward iteration of the
 * non-dyadic maps re-draws the state if rounding lands it exactly on the
 * absorbing float fixed points 0 or 1.
 */
void fill_orbit(const MapSystem& map, GenerationMode mode, std::size_t burn_in, Rng& rng,
                std::span<double> out);

/// Orbit of spec.length states drawn from rng (spec.seed is not consulted).
std::vector<double> sample_orbit(const MapSystem& map, const OrbitSpec& spec, Rng& rng);

/// Orbit drawn from a fresh stream seeded by spec.seed.
std::vector<double> sample_orbit(const MapSystem& map, const OrbitSpec& spec);

/*!
 * Orbit produced one state at a time, for scans whose length is not known
 * in advance. Forward mode iterates the map (with the absorbing-state
 * redraw). Pullback mode keeps a sliding window of 64 random branch digits
 * and decodes x_i from the digits of x_i, x_{i+1}, ..., which is the
 * pullback construction with its uniform endpoint always 64 steps ahead.
 */
class OrbitStream {
  public:
    OrbitStream(const MapSystem& map, GenerationMode mode, std::size_t burn_in, Rng& rng);
    double next();

  private:
    void refill_bits();

    MapSystem map_;
    GenerationMode mode_;
    Rng* rng_;
    double x_ = 0.0;
    std::uint64_t window_ = 0;
    std::uint64_t bits_ = 0;
    int left_ = 0;
};

/// Forward iteration with no finite-precision mitigation at all. Exposed to
/// demonstrate dyadic collapse; not used by experiments.
std::vector<double> naive_forward_orbit(const MapSystem& map, double x0, std::size_t length);

struct DensityValue {
    double value = 0.0;
    bool approximate = false;  ///< histogram estimate rather than closed form
};

/*!
 * Invariant density at x in (0, 1).
 *
 * Tent/Doubling: 1. Logistic4: 1 / (pi sqrt(x(1-x))). Lsv: histogram of a
 * 10^8-step forward orbit on 10^4 bins (computed once per alpha, cached).
 * Returns +infinity at singular points (Logistic4 endpoints, Lsv near 0).
 */
DensityValue invariant_density(const MapSystem& map, double x);

/// Histogram density estimate from one forward orbit.
std::vector<double> estimate_density_histogram(const MapSystem& map, std::size_t steps,
                                               std::size_t bins, std::uint64_t seed);

/// Lsv density queries closer than this to 0 are rejected as singular.
inline constexpr double kLsvSingularCutoff = 1e-3;

/// True if f^k(x) returns within `tol` of x for some 1 <= k <= max_period.
bool is_periodic_point(const MapSystem& map, double x, int max_period = 12, double tol = 1e-9);

std::string to_string(GenerationMode mode);
GenerationMode generation_mode_from_name(std::string_view name);

}  // namespace extrema
