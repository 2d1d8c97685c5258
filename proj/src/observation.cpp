#include "ntnsim/observation.hpp"

namespace ntnsim {

void ObservationCollector::restart(std::uint64_t first_sn)
{
    first_sn_ = first_sn;
    active_ = true;
    valid_ = 0;
    raw_.clear();
    seen_.clear();
}

void ObservationCollector::record(std::uint64_t sn, double sojourn_ms, bool ack_lost)
{
    if (!active_ || sn < first_sn_ || sn - first_sn_ >= capacity_) return;
    if (!seen_.insert(sn).second) return;
    raw_.push_back({sojourn_ms, ack_lost});
    if (!ack_lost) ++valid_;
}

ObservationSet ObservationCollector::snapshot() const
{
    return filter_ack_lost(raw_, capacity_, side_);
}

}  // namespace ntnsim
