#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace lpa {

/// A set of natural numbers that is eventually periodic: below `threshold()`
/// membership is read off the explicit exception list, from `threshold()` on
/// it is a union of residue classes modulo `period()`.
///
/// Construction always normalizes to the minimal period and then the minimal
/// threshold, so two objects represent the same set iff they compare equal.
class EventuallyPeriodicSet {
public:
    /// The empty set.
    EventuallyPeriodicSet();

    /// General constructor; inputs are normalized (residues are reduced mod
    /// `period`, exceptions at or above `threshold` are folded into the
    /// periodic part only if consistent, otherwise rejected).
    EventuallyPeriodicSet(std::set<std::uint64_t> exceptions,
                          std::uint64_t threshold,
                          std::uint64_t period,
                          std::set<std::uint64_t> residues);

    static EventuallyPeriodicSet empty_set();
    /// { n : n >= lo }
    static EventuallyPeriodicSet all_from(std::uint64_t lo);
    /// A finite set given by its members.
    static EventuallyPeriodicSet finite(const std::set<std::uint64_t>& members);
    /// From an orbit of membership bits: bits[i] says whether i is a member,
    /// for i = 0 .. tail_start + period_len - 1; from tail_start on the
    /// pattern repeats with period period_len.
    static EventuallyPeriodicSet from_orbit(const std::vector<bool>& bits,
                                            std::uint64_t tail_start,
                                            std::uint64_t period_len);

    bool contains(std::uint64_t value) const;
    bool empty() const;

    EventuallyPeriodicSet union_with(const EventuallyPeriodicSet& other) const;

    const std::set<std::uint64_t>& exceptions() const { return exceptions_; }
    std::uint64_t threshold() const { return threshold_; }
    std::uint64_t period() const { return period_; }
    const std::set<std::uint64_t>& residues() const { return residues_; }

    bool operator==(const EventuallyPeriodicSet& other) const = default;

    std::string to_string() const;

private:
    void normalize();

    std::set<std::uint64_t> exceptions_;  // all < threshold_
    std::uint64_t threshold_ = 0;
    std::uint64_t period_ = 1;
    std::set<std::uint64_t> residues_;    // subset of {0, ..., period_-1}
};

}  // namespace lpa
