#include "extrema/series.hpp"

#include "extrema/errors.hpp"

namespace extrema {

SeriesSource SeriesSource::orbit(MapSystem map, Observable obs, std::optional<GenerationMode> mode,
                                 std::size_t burn_in) {
    SeriesSource s;
    s.mode_ = mode.value_or(map.default_mode());
    OrbitSpec spec;
    spec.mode = s.mode_;
    validate_orbit_spec(map, spec);
    s.map_ = map;
    s.obs_ = obs;
    s.burn_in_ = burn_in;
    return s;
}

SeriesSource SeriesSource::iid_uniform() { return SeriesSource(); }

const MapSystem& SeriesSource::map() const {
    if (!map_) throw ConfigurationError("iid source has no map");
    return *map_;
}

const Observable& SeriesSource::observable() const {
    if (!obs_) throw ConfigurationError("iid source has no observable");
    return *obs_;
}

std::string SeriesSource::describe() const {
    if (is_iid()) return "iid-uniform";
    return map_->name() + "/" + obs_->name() + "/" + to_string(mode_);
}

void SeriesSource::generate_states(Rng& rng, std::span<double> out) const {
    if (is_iid()) {
        for (auto& v : out) v = rng.uniform_open();
        return;
    }
    fill_orbit(*map_, mode_, burn_in_, rng, out);
}

void SeriesSource::generate(Rng& rng, std::span<double> out, std::vector<double>& scratch) const {
    if (is_iid()) {
        generate_states(rng, out);
        return;
    }
    scratch.resize(out.size());
    fill_orbit(*map_, mode_, burn_in_, rng, scratch);
    const Observable& obs = *obs_;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = obs.evaluate(scratch[i]);
}

SeriesStream SeriesSource::stream(Rng& rng) const {
    if (is_iid()) return SeriesStream(rng, std::nullopt, Observable::neglog());
    return SeriesStream(rng, OrbitStream(*map_, mode_, burn_in_, rng), *obs_);
}

std::vector<double> SeriesSource::generate(Rng& rng, std::size_t length) const {
    std::vector<double> out(length);
    std::vector<double> scratch;
    generate(rng, out, scratch);
    return out;
}

}  // namespace extrema
