#include "lpa/eventually_periodic.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace lpa {

EventuallyPeriodicSet::EventuallyPeriodicSet() = default;

EventuallyPeriodicSet::EventuallyPeriodicSet(std::set<std::uint64_t> exceptions,
                                             std::uint64_t threshold,
                                             std::uint64_t period,
                                             std::set<std::uint64_t> residues)
    : exceptions_(std::move(exceptions)),
      threshold_(threshold),
      period_(period),
      residues_() {
    if (period_ == 0) throw std::invalid_argument("period must be positive");
    for (auto r : residues) residues_.insert(r % period_);
    // Exceptions at or above the threshold are just members; absorb them by
    // raising the threshold so the stated invariant (exceptions < threshold)
    // holds before normalization.
    if (!exceptions_.empty() && *exceptions_.rbegin() >= threshold_) {
        std::uint64_t top = *exceptions_.rbegin();
        std::set<std::uint64_t> ex;
        for (std::uint64_t v = 0; v <= top; ++v) {
            bool member = exceptions_.count(v) ||
                          (v >= threshold_ && residues_.count(v % period_));
            if (member) ex.insert(v);
        }
        exceptions_ = std::move(ex);
        threshold_ = top + 1;
    }
    normalize();
}

EventuallyPeriodicSet EventuallyPeriodicSet::empty_set() { return {}; }

EventuallyPeriodicSet EventuallyPeriodicSet::all_from(std::uint64_t lo) {
    return EventuallyPeriodicSet({}, lo, 1, {0});
}

EventuallyPeriodicSet EventuallyPeriodicSet::finite(const std::set<std::uint64_t>& members) {
    if (members.empty()) return {};
    return EventuallyPeriodicSet(members, *members.rbegin() + 1, 1, {});
}

EventuallyPeriodicSet EventuallyPeriodicSet::from_orbit(const std::vector<bool>& bits,
                                                        std::uint64_t tail_start,
                                                        std::uint64_t period_len) {
    if (period_len == 0) throw std::invalid_argument("period_len must be positive");
    if (bits.size() < tail_start + period_len)
        throw std::invalid_argument("orbit bits shorter than tail_start + period_len");
    std::set<std::uint64_t> ex;
    for (std::uint64_t i = 0; i < tail_start; ++i)
        if (bits[i]) ex.insert(i);
    std::set<std::uint64_t> res;
    for (std::uint64_t j = 0; j < period_len; ++j)
        if (bits[tail_start + j]) res.insert((tail_start + j) % period_len);
    return EventuallyPeriodicSet(std::move(ex), tail_start, period_len, std::move(res));
}

bool EventuallyPeriodicSet::contains(std::uint64_t value) const {
    if (value >= threshold_) return residues_.count(value % period_) != 0;
    return exceptions_.count(value) != 0;
}

bool EventuallyPeriodicSet::empty() const {
    return exceptions_.empty() && residues_.empty();
}

EventuallyPeriodicSet EventuallyPeriodicSet::union_with(const EventuallyPeriodicSet& other) const {
    std::uint64_t p = std::lcm(period_, other.period_);
    std::uint64_t t = std::max(threshold_, other.threshold_);
    std::set<std::uint64_t> res;
    for (std::uint64_t r = 0; r < p; ++r)
        if (residues_.count(r % period_) || other.residues_.count(r % other.period_))
            res.insert(r);
    std::set<std::uint64_t> ex;
    for (std::uint64_t v = 0; v < t; ++v)
        if (contains(v) || other.contains(v)) ex.insert(v);
    return EventuallyPeriodicSet(std::move(ex), t, p, std::move(res));
}

void EventuallyPeriodicSet::normalize() {
    // Empty periodic part and no exceptions: the canonical empty set.
    if (residues_.empty() && exceptions_.empty()) {
        threshold_ = 0;
        period_ = 1;
        return;
    }
    // Minimal period: smallest divisor d of period_ under which the residue
    // pattern is invariant.
    for (std::uint64_t d = 1; d <= period_; ++d) {
        if (period_ % d != 0) continue;
        bool ok = true;
        for (std::uint64_t r = 0; r < period_ && ok; ++r)
            if (residues_.count(r) != residues_.count((r + d) % period_)) ok = false;
        if (ok) {
            std::set<std::uint64_t> res;
            for (auto r : residues_) res.insert(r % d);
            residues_ = std::move(res);
            period_ = d;
            break;
        }
    }
    // Minimal threshold: lower it while the value just below matches the
    // periodic pattern.
    while (threshold_ > 0) {
        std::uint64_t v = threshold_ - 1;
        bool actual = exceptions_.count(v) != 0;
        bool periodic = residues_.count(v % period_) != 0;
        if (actual != periodic) break;
        exceptions_.erase(v);
        --threshold_;
    }
    // Exceptions are kept only below the threshold.
    for (auto it = exceptions_.begin(); it != exceptions_.end();) {
        if (*it >= threshold_) it = exceptions_.erase(it);
        else ++it;
    }
    if (threshold_ == 0 && residues_.empty()) period_ = 1;
}

std::string EventuallyPeriodicSet::to_string() const {
    std::ostringstream os;
    os << "{exc=";
    os << "{";
    bool first = true;
    for (auto v : exceptions_) {
        if (!first) os << ",";
        os << v;
        first = false;
    }
    os << "} t0=" << threshold_ << " p=" << period_ << " res={";
    first = true;
    for (auto r : residues_) {
        if (!first) os << ",";
        os << r;
        first = false;
    }
    os << "}}";
    return os.str();
}

}  // namespace lpa
