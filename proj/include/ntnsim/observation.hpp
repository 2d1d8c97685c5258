#pragma once

#include "ntnsim/estimators.hpp"

#include <cstdint>
#include <unordered_set>
#include <vector>

namespace ntnsim {

/// Collects raw timestamp samples for one side of the link. A window covers
/// the `capacity` consecutive sequence numbers starting at the first one
/// assigned after the restart, so a window never mixes two RTD regimes and
/// is not biased towards the packets that happened to finish first.
///
/// The window is complete once every one of its packets produced a sample;
/// packets whose ACK was lost report a flagged sample.
class ObservationCollector {
public:
    ObservationCollector(ObservationSide side, std::size_t capacity) : side_(side), capacity_(capacity) {}

    void restart(std::uint64_t first_sn);
    void stop() { active_ = false; }
    bool active() const noexcept { return active_; }

    void record(std::uint64_t sn, double sojourn_ms, bool ack_lost);

    std::size_t valid_count() const noexcept { return valid_; }
    std::size_t recorded() const noexcept { return raw_.size(); }
    bool full() const noexcept { return raw_.size() >= capacity_; }
    std::size_t capacity() const noexcept { return capacity_; }
    std::uint64_t first_sn() const noexcept { return first_sn_; }
    const std::vector<RawSample>& raw() const noexcept { return raw_; }

    /// Applies filter_ack_lost to what has been collected so far.
    ObservationSet snapshot() const;

private:
    ObservationSide side_;
    std::size_t capacity_;
    std::uint64_t first_sn_ = 0;
    bool active_ = false;
    std::size_t valid_ = 0;
    std::vector<RawSample> raw_;
    std::unordered_set<std::uint64_t> seen_;
};

}  // namespace ntnsim
