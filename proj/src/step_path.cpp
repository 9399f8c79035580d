#include "extrema/step_path.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "extrema/errors.hpp"

namespace extrema {

StepPath::StepPath(double t_lo, double t_hi, double initial, std::vector<Jump> jumps)
    : t_lo_(t_lo), t_hi_(t_hi), initial_(initial), jumps_(std::move(jumps)) {
    if (!(t_lo < t_hi)) throw InputError("path window must satisfy t_lo < t_hi");
    double prev = t_lo;
    for (const auto& j : jumps_) {
        if (!(j.time > prev) || j.time > t_hi) {
            throw InputError("path jump times must be strictly increasing inside (t_lo, t_hi]");
        }
        prev = j.time;
    }
}

double StepPath::operator()(double t) const noexcept {
    auto it = std::upper_bound(jumps_.begin(), jumps_.end(), t,
                               [](double v, const Jump& j) { return v < j.time; });
    if (it == jumps_.begin()) return initial_;
    return std::prev(it)->value;
}

double StepPath::left_limit(double t) const noexcept {
    auto it = std::lower_bound(jumps_.begin(), jumps_.end(), t,
                               [](const Jump& j, double v) { return j.time < v; });
    if (it == jumps_.begin()) return initial_;
    return std::prev(it)->value;
}

bool StepPath::is_nondecreasing() const noexcept {
    double prev = initial_;
    for (const auto& j : jumps_) {
        if (j.value < prev) return false;
        prev = j.value;
    }
    return true;
}

bool StepPath::is_record_path() const noexcept {
    double prev = initial_;
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
        const double v = jumps_[k].value;
        if (k == 0 ? v < prev : !(v > prev)) return false;
        prev = v;
    }
    return true;
}

std::size_t StepPath::jumps_in(double a, double b) const noexcept {
    auto cmp_upper = [](double v, const Jump& j) { return v < j.time; };
    auto lo = std::upper_bound(jumps_.begin(), jumps_.end(), a, cmp_upper);
    auto hi = std::upper_bound(jumps_.begin(), jumps_.end(), b, cmp_upper);
    return hi > lo ? static_cast<std::size_t>(hi - lo) : 0;
}

StepPath StepPath::restrict(double a, double b) const {
    if (!(a < b)) throw InputError("restriction requires a < b");
    std::vector<Jump> kept;
    for (const auto& j : jumps_) {
        if (j.time > a && j.time <= b) kept.push_back(j);
    }
    return StepPath(a, b, (*this)(a), std::move(kept));
}

StepPath StepPath::without_flat_jumps() const {
    std::vector<Jump> kept;
    double prev = initial_;
    for (const auto& j : jumps_) {
        if (j.value != prev) kept.push_back(j);
        prev = j.value;
    }
    return StepPath(t_lo_, t_hi_, initial_, std::move(kept));
}

std::vector<double> running_max(std::span<const double> xs) {
    if (xs.empty()) throw InputError("running_max of an empty series");
    std::vector<double> out(xs.size());
    double m = xs[0];
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (xs[k] > m) m = xs[k];
        out[k] = m;
    }
    return out;
}

StepPath build_path(std::span<const double> xs, Scaling scaling, std::size_t n, double t_hi) {
    if (n == 0) throw InputError("build_path requires n >= 1");
    if (!(t_hi > 0.0)) throw InputError("build_path requires t_hi > 0");
    const double nd = static_cast<double>(n);
    const auto last = static_cast<std::size_t>(std::floor(nd * t_hi + 1e-9));
    const auto needed = static_cast<std::size_t>(std::ceil(nd * t_hi - 1e-9));
    if (xs.size() < std::max<std::size_t>(needed, 1)) {
        throw InputError("series too short: need " + std::to_string(needed) + " values, have " +
                         std::to_string(xs.size()));
    }
    const auto scale = [&](double x) { return scaling.a * (x - scaling.b); };
    std::vector<Jump> jumps;
    double m = xs[0];
    if (last >= 1) jumps.push_back({1.0 / nd, scale(m)});
    for (std::size_t j = 2; j <= last; ++j) {
        const double x = xs[j - 1];
        if (x > m) {
            m = x;
            jumps.push_back({static_cast<double>(j) / nd, scale(m)});
        }
    }
    return StepPath(0.0, t_hi, scale(xs[0]), std::move(jumps));
}

StepPath invert_path(const StepPath& p, double e_lo, double e_hi) {
    if (!p.is_nondecreasing()) throw InputError("invert_path requires a nondecreasing path");
    if (!(e_lo < e_hi)) throw InputError("inverse level window must satisfy e_lo < e_hi");

    // Full inverse: value t_lo below the initial level, then at each level
    // v_k the inverse becomes the time of the next jump (or +inf).
    std::vector<Jump> levels;
    const auto& jumps = p.jumps();
    auto push = [&](double level, double value) {
        if (!levels.empty() && levels.back().time == level) {
            levels.back().value = value;
        } else {
            levels.push_back({level, value});
        }
    };
    push(p.initial(), jumps.empty() ? kPlusInf : jumps.front().time);
    for (std::size_t k = 0; k < jumps.size(); ++k) {
        push(jumps[k].value, k + 1 < jumps.size() ? jumps[k + 1].time : kPlusInf);
    }

    auto full_at = [&](double y) {
        double v = p.t_lo();
        for (const auto& l : levels) {
            if (l.time <= y) v = l.value;
            else break;
        }
        return v;
    };
    std::vector<Jump> kept;
    for (const auto& l : levels) {
        if (l.time > e_lo && l.time <= e_hi) kept.push_back(l);
    }
    return StepPath(e_lo, e_hi, full_at(e_lo), std::move(kept));
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    if (s == "inf" || s == "+inf") return kPlusInf;
    if (s == "-inf") return kMinusInf;
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw InputError("cannot parse number '" + s + "'");
    }
    return v;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        out.push_back(cell);
    }
    return out;
}

}  // namespace

void write_path_csv(std::ostream& os, const StepPath& p) {
    os << "#window," << format_double(p.t_lo()) << ',' << format_double(p.t_hi()) << ','
       << format_double(p.initial()) << '\n';
    os << "time,value\n";
    for (const auto& j : p.jumps()) os << format_double(j.time) << ',' << format_double(j.value) << '\n';
}

StepPath read_path_csv(std::istream& is) {
    std::string line;
    bool have_window = false;
    double t_lo = 0, t_hi = 0, initial = 0;
    std::vector<Jump> jumps;
    while (std::getline(is, line)) {
        if (line.empty() || line.rfind("# ", 0) == 0 || line == "#") continue;
        if (line.rfind("#window", 0) == 0) {
            auto cells = split_csv(line);
            if (cells.size() != 4) throw InputError("malformed path window header: " + line);
            t_lo = parse_double(cells[1]);
            t_hi = parse_double(cells[2]);
            initial = parse_double(cells[3]);
            have_window = true;
            continue;
        }
        if (line.rfind("time", 0) == 0) continue;
        auto cells = split_csv(line);
        if (cells.size() != 2) throw InputError("malformed path row: " + line);
        jumps.push_back({parse_double(cells[0]), parse_double(cells[1])});
    }
    if (!have_window) throw InputError("path CSV lacks a #window header");
    return StepPath(t_lo, t_hi, initial, std::move(jumps));
}

StepPath read_path_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open path file " + path);
    return read_path_csv(in);
}

}  // namespace extrema
