#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "extrema/observables.hpp"
#include "extrema/point_pattern.hpp"

namespace extrema {

/// Record epochs of a series, 1-based: tau_1 = 1 and tau_k is the first
/// j > tau_{k-1} with X_j > max(X_1..X_{j-1}).
struct RecordSummary {
    std::vector<std::size_t> taus;
    std::vector<double> values;
    std::size_t length = 0;  ///< length of the series scanned

    /// W(n) = #{k : tau_k <= n}.
    std::size_t count_up_to(std::size_t n) const noexcept;
};

/// Incremental record detector for long series that are never stored.
class RecordTracker {
  public:
    /// Feed X_j for j = 1, 2, ...; returns true if X_j is a record.
    bool push(double x) noexcept {
        ++index_;
        if (index_ == 1 || x > max_) {
            max_ = x;
            taus_.push_back(index_);
            values_.push_back(x);
            return true;
        }
        return false;
    }
    std::size_t index() const noexcept { return index_; }
    double current_max() const noexcept { return max_; }
    RecordSummary summary() const { return {taus_, values_, index_}; }

  private:
    std::size_t index_ = 0;
    double max_ = 0.0;
    std::vector<std::size_t> taus_;
    std::vector<double> values_;
};

/// Throws InputError on an empty series.
RecordSummary record_times(std::span<const double> xs);

/// Points tau_k / n for tau_k <= n t_hi on the window (0, t_hi].
PointPattern1D record_time_pattern(const RecordSummary& summary, std::size_t n, double t_hi = 1.0);

/*!
 * Points a (X_tau_k - b) on the window (-inf, inf], over records with
 * tau_k <= max_epoch (default n). Record values reached after time n still
 * belong to the record-value process, so counting on (lo, hi] needs a scan
 * that runs until the running maximum passes hi.
 */
PointPattern1D record_value_pattern(const RecordSummary& summary, Scaling scaling, std::size_t n,
                                    std::size_t max_epoch = 0);

struct WCheckpoint {
    std::size_t n;
    std::size_t count;
};

/// W at 1, 2, 5, 10, 20, 50, ... up to the series length (inclusive).
std::vector<WCheckpoint> w_checkpoints(const RecordSummary& summary);

/// sum_{j=1}^n 1/j: expected record count for an iid continuous series.
double harmonic_number(std::size_t n);

}  // namespace extrema
