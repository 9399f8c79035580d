#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "extrema/observables.hpp"

namespace extrema {

inline constexpr double kPlusInf = std::numeric_limits<double>::infinity();
inline constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

struct Jump {
    double time;
    double value;  ///< path value from `time` (inclusive) to the next jump
    friend bool operator==(const Jump&, const Jump&) = default;
};

/*!
 * Right-continuous step function on the window (t_lo, t_hi].
 *
 * Stored sparsely: `initial` holds on [t_lo, first jump), each jump sets the
 * value from its time onward. Values may be the +-infinity markers produced
 * by empty sup/inf functionals. A jump may repeat the previous value; such
 * epochs are kept because they mark record times (the first record of a
 * maxima path never changes its value).
 */
class StepPath {
  public:
    StepPath() = default;
    /// Throws InputError unless jump times are strictly increasing and lie in (t_lo, t_hi].
    StepPath(double t_lo, double t_hi, double initial, std::vector<Jump> jumps);

    double t_lo() const noexcept { return t_lo_; }
    double t_hi() const noexcept { return t_hi_; }
    double initial() const noexcept { return initial_; }
    const std::vector<Jump>& jumps() const noexcept { return jumps_; }

    /// Value at t (right-continuous). Defined for any t; clamps to the
    /// initial value before the first jump.
    double operator()(double t) const noexcept;
    /// Left limit at t.
    double left_limit(double t) const noexcept;

    double final_value() const noexcept { return jumps_.empty() ? initial_ : jumps_.back().value; }
    bool is_nondecreasing() const noexcept;
    /// Nondecreasing, and every jump strictly raises the value except possibly the first.
    bool is_record_path() const noexcept;

    /// Number of jump epochs in (a, b].
    std::size_t jumps_in(double a, double b) const noexcept;

    /// Restriction to [a, b]: initial = value at a, jumps in (a, b].
    StepPath restrict(double a, double b) const;

    /// Same path with value-preserving epochs removed.
    StepPath without_flat_jumps() const;

    friend bool operator==(const StepPath&, const StepPath&) = default;

  private:
    double t_lo_ = 0.0;
    double t_hi_ = 1.0;
    double initial_ = 0.0;
    std::vector<Jump> jumps_;
};

/// out[k] = max(xs[0..k]). Throws InputError on empty input.
std::vector<double> running_max(std::span<const double> xs);

/*!
 * Rescaled maxima path on (0, t_hi]:
 *   Y(t) = a (M_floor(nt) - b) for t >= 1/n,  a (X_1 - b) on (0, 1/n).
 * Jump epochs sit at every record index j/n (including j = 1). Equal values
 * never create records. Throws InputError if xs is shorter than ceil(n t_hi).
 */
StepPath build_path(std::span<const double> xs, Scaling scaling, std::size_t n, double t_hi = 1.0);

/*!
 * Generalized inverse y -> inf{t : p(t) > y} as a step path on the level
 * window (e_lo, e_hi]. Levels where p never exceeds y map to +infinity.
 * Throws InputError for a decreasing path.
 */
StepPath invert_path(const StepPath& p, double e_lo, double e_hi);

/// CSV: "#window,<t_lo>,<t_hi>,<initial>" then "time,value" rows. Lines
/// beginning with "# " are treated as comments (provenance).
void write_path_csv(std::ostream& os, const StepPath& p);
StepPath read_path_csv(std::istream& is);
StepPath read_path_csv_file(const std::string& path);

/// Shortest round-trip decimal form; "inf"/"-inf" for markers.
std::string format_double(double v);
double parse_double(const std::string& s);

}  // namespace extrema
