#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "extrema/dynamics.hpp"
#include "extrema/observables.hpp"
#include "extrema/rng.hpp"

namespace extrema {

/// Unbounded stream X_1, X_2, ... of one series realization.
class SeriesStream {
  public:
    double next() {
        if (!orbit_) return rng_->uniform_open();
        return obs_.evaluate(orbit_->next());
    }

  private:
    friend class SeriesSource;
    SeriesStream(Rng& rng, std::optional<OrbitStream> orbit, Observable obs)
        : rng_(&rng), orbit_(std::move(orbit)), obs_(obs) {}

    Rng* rng_;
    std::optional<OrbitStream> orbit_;
    Observable obs_;
};

/*!
 * Stationary real-valued series X_1, X_2, ... drawn either from a map orbit
 * pushed through an observable or from iid Uniform(0, 1) (the null model
 * used as a baseline for record and D' statistics).
 */
class SeriesSource {
  public:
    static SeriesSource orbit(MapSystem map, Observable obs,
                              std::optional<GenerationMode> mode = std::nullopt,
                              std::size_t burn_in = 0);
    static SeriesSource iid_uniform();

    bool is_iid() const noexcept { return !map_.has_value(); }
    const MapSystem& map() const;
    const Observable& observable() const;
    GenerationMode mode() const noexcept { return mode_; }
    std::string describe() const;

    /// Fill `out` with one stationary segment; `scratch` holds the raw orbit.
    void generate(Rng& rng, std::span<double> out, std::vector<double>& scratch) const;
    std::vector<double> generate(Rng& rng, std::size_t length) const;

    /// Same law as generate(), produced lazily; `rng` must outlive the stream.
    SeriesStream stream(Rng& rng) const;

    /// Orbit states only (no observable); iid source returns the uniforms.
    void generate_states(Rng& rng, std::span<double> out) const;

  private:
    SeriesSource() = default;

    std::optional<MapSystem> map_;
    std::optional<Observable> obs_;
    GenerationMode mode_ = GenerationMode::Forward;
    std::size_t burn_in_ = 0;
};

}  // namespace extrema
