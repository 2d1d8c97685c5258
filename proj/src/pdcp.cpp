#include "ntnsim/pdcp.hpp"

#include <algorithm>
#include <cassert>

namespace ntnsim {

TransmitBuffer::TransmitBuffer(std::int64_t capacity_cells)
    : capacity_(std::max<std::int64_t>(0, capacity_cells)), target_(capacity_)
{
}

void TransmitBuffer::resize(std::int64_t capacity_cells)
{
    target_ = std::max<std::int64_t>(0, capacity_cells);
    capacity_ = std::max(target_, occupancy());
}

SduRecord& TransmitBuffer::insert(SduRecord record)
{
    assert(has_free_cell());
    const Sn sn = record.sn;
    return occupied_.emplace(sn, record).first->second;
}

SduRecord* TransmitBuffer::find(Sn sn)
{
    auto it = occupied_.find(sn);
    return it == occupied_.end() ? nullptr : &it->second;
}

void TransmitBuffer::release(Sn sn)
{
    occupied_.erase(sn);
    if (capacity_ > target_) capacity_ = std::max(target_, occupancy());
}

PdcpTxEntity::PdcpTxEntity(Engine& engine, std::int64_t capacity_cells, int max_attempts)
    : engine_(engine), buffer_(capacity_cells), max_attempts_(std::max(1, max_attempts))
{
}

SubmitResult PdcpTxEntity::tx_submit_sdu(TimeMs now)
{
    if (!buffer_.has_free_cell()) {
        ++counters_.rejected;
        return {false, 0};
    }
    const Sn sn = next_sn_++;
    SduRecord& rec = buffer_.insert({sn, now, SduState::Buffered, 1, std::nullopt});
    states_.push_back(SduState::Buffered);
    terminal_count_.push_back(0);
    ++counters_.accepted;
    counters_.peak_occupancy = std::max(counters_.peak_occupancy, buffer_.occupancy());

    rec.discard_event = engine_.schedule(EventKind::DiscardExpiry, now + t_d_ms_, sn);
    rec.state = SduState::AwaitingAck;
    states_[sn] = SduState::AwaitingAck;
    if (transmit_) transmit_(sn, 1, now);
    return {true, sn};
}

AckResult PdcpTxEntity::tx_on_ack(Sn sn, TimeMs now)
{
    SduRecord* rec = buffer_.find(sn);
    if (rec == nullptr || rec->state != SduState::AwaitingAck) {
        ++counters_.unknown_acks;
        return {};
    }
    if (rec->discard_event) engine_.cancel(*rec->discard_event);
    const AckResult result{true, now - rec->created_at, rec->attempts};
    // A sample that went through an expiry-driven retransmission includes
    // the timer wait; it is treated like an ack-lost sample.
    if (observer_ != nullptr) observer_->record(sn, result.sojourn_ms, rec->attempts > 1);
    ++counters_.acked;
    finish(sn, SduState::Acked);
    return result;
}

ExpiryResult PdcpTxEntity::tx_on_discard_expiry(Sn sn, TimeMs now)
{
    SduRecord* rec = buffer_.find(sn);
    if (rec == nullptr || rec->state != SduState::AwaitingAck) return {};
    ++counters_.expiries;
    ExpiryResult result;
    result.created_at = rec->created_at;
    if (rec->attempts < max_attempts_) {
        ++rec->attempts;
        ++counters_.retransmissions;
        rec->discard_event = engine_.schedule(EventKind::DiscardExpiry, now + t_d_ms_, sn);
        result.retransmitted = true;
        result.attempts = rec->attempts;
        const TimeMs created = rec->created_at;
        const int attempt = rec->attempts;
        if (transmit_) transmit_(sn, attempt, created);
        return result;
    }
    result.attempts = rec->attempts;
    result.terminal = true;
    ++counters_.discarded;
    if (observer_ != nullptr) observer_->record(sn, now - rec->created_at, true);
    finish(sn, SduState::DiscardedOnExpiry);
    return result;
}

void PdcpTxEntity::finish(Sn sn, SduState state)
{
    buffer_.release(sn);
    states_[sn] = state;
    ++terminal_count_[sn];
}

RxResult PdcpRxEntity::rx_on_pdu(Sn sn, TimeMs created_at, TimeMs now, int attempt)
{
    if (sn < expected_ || held_.contains(sn)) {
        ++counters_.duplicates;
        return {RxOutcome::Duplicate, 0};
    }
    if (observer_ != nullptr) observer_->record(sn, now - created_at, attempt > 1);

    if (sn > expected_) {
        held_.emplace(sn, now);
        if (!reordering_event_) reordering_event_ = engine_.schedule(EventKind::ReorderingExpiry, now + t_r_ms_);
        return {RxOutcome::Held, 0};
    }

    std::uint64_t delivered = deliver(sn);
    delivered += drain_consecutive();
    restart_timer_if_gap(now);
    return {RxOutcome::DeliveredInOrder, delivered};
}

std::uint64_t PdcpRxEntity::rx_on_reordering_expiry(TimeMs now)
{
    reordering_event_.reset();
    if (held_.empty()) return 0;
    ++counters_.reordering_expiries;
    const Sn first_held = held_.begin()->first;
    counters_.reorder_losses += first_held - expected_;
    expected_ = first_held;
    const std::uint64_t delivered = drain_consecutive();
    restart_timer_if_gap(now);
    return delivered;
}

std::uint64_t PdcpRxEntity::deliver(Sn sn)
{
    if (last_delivered_ && sn <= *last_delivered_) ++counters_.order_violations;
    last_delivered_ = sn;
    expected_ = sn + 1;
    ++counters_.delivered_in_order;
    if (deliver_) deliver_(sn);
    return 1;
}

std::uint64_t PdcpRxEntity::drain_consecutive()
{
    std::uint64_t n = 0;
    while (!held_.empty() && held_.begin()->first == expected_) {
        held_.erase(held_.begin());
        n += deliver(expected_);
    }
    return n;
}

void PdcpRxEntity::restart_timer_if_gap(TimeMs now)
{
    if (reordering_event_) {
        engine_.cancel(*reordering_event_);
        reordering_event_.reset();
    }
    if (!held_.empty()) reordering_event_ = engine_.schedule(EventKind::ReorderingExpiry, now + t_r_ms_);
}

}  // namespace ntnsim
