#pragma once

#include "ntnsim/observation.hpp"
#include "ntnsim/sim_core.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace ntnsim {

using Sn = std::uint64_t;

enum class SduState : std::uint8_t { Buffered, AwaitingAck, Acked, DiscardedOnExpiry };

struct SduRecord {
    Sn sn = 0;
    TimeMs created_at;
    SduState state = SduState::Buffered;
    int attempts = 1;
    std::optional<EventId> discard_event;
};

/// Fixed-capacity store of un-ACKed SDU copies, one SDU per cell.
///
/// Shrinking below the current occupancy never evicts: the capacity follows
/// the occupancy down as cells free until it reaches the target.
class TransmitBuffer {
public:
    explicit TransmitBuffer(std::int64_t capacity_cells);

    std::int64_t capacity() const noexcept { return capacity_; }
    std::int64_t target_capacity() const noexcept { return target_; }
    std::int64_t occupancy() const noexcept { return static_cast<std::int64_t>(occupied_.size()); }
    bool has_free_cell() const noexcept { return occupancy() < capacity_; }

    void resize(std::int64_t capacity_cells);

    SduRecord& insert(SduRecord record);
    SduRecord* find(Sn sn);
    void release(Sn sn);

private:
    std::int64_t capacity_;
    std::int64_t target_;
    std::map<Sn, SduRecord> occupied_;
};

struct PdcpTxCounters {
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;
    std::uint64_t acked = 0;
    std::uint64_t expiries = 0;
    std::uint64_t discarded = 0;
    std::uint64_t retransmissions = 0;
    std::uint64_t unknown_acks = 0;
    std::int64_t peak_occupancy = 0;
};

struct SubmitResult {
    bool accepted = false;
    Sn sn = 0;
};

struct AckResult {
    bool known = false;
    double sojourn_ms = 0.0;
    int attempts = 0;
};

struct ExpiryResult {
    bool retransmitted = false;
    bool terminal = false;
    int attempts = 0;
    TimeMs created_at;
};

/// PDCP transmit entity: sequencing, per-SDU discard timers and the
/// transmit buffer. Discard expiry triggers one end-to-end retransmission
/// (fresh discard timer) until `max_attempts` transmissions were made.
class PdcpTxEntity {
public:
    /// Invoked for every (re)transmission: sn, attempt number (1-based), created_at.
    using TransmitFn = std::function<void(Sn, int, TimeMs)>;

    PdcpTxEntity(Engine& engine, std::int64_t capacity_cells, int max_attempts = 2);

    void set_discard_timer(double t_d_ms) { t_d_ms_ = t_d_ms; }
    double discard_timer() const noexcept { return t_d_ms_; }
    void set_transmit(TransmitFn fn) { transmit_ = std::move(fn); }
    void set_observer(ObservationCollector* collector) { observer_ = collector; }

    SubmitResult tx_submit_sdu(TimeMs now);
    AckResult tx_on_ack(Sn sn, TimeMs now);
    ExpiryResult tx_on_discard_expiry(Sn sn, TimeMs now);

    TransmitBuffer& buffer() noexcept { return buffer_; }
    const TransmitBuffer& buffer() const noexcept { return buffer_; }
    const PdcpTxCounters& counters() const noexcept { return counters_; }
    /// Final state per assigned sn (index = sn).
    const std::vector<SduState>& states() const noexcept { return states_; }
    /// Number of state transitions into a terminal state per sn.
    const std::vector<std::uint8_t>& terminal_transitions() const noexcept { return terminal_count_; }
    Sn next_sn() const noexcept { return next_sn_; }

private:
    void finish(Sn sn, SduState state);

    Engine& engine_;
    TransmitBuffer buffer_;
    int max_attempts_;
    double t_d_ms_ = 1500.0;
    Sn next_sn_ = 0;
    TransmitFn transmit_;
    ObservationCollector* observer_ = nullptr;
    PdcpTxCounters counters_;
    std::vector<SduState> states_;
    std::vector<std::uint8_t> terminal_count_;
};

enum class RxOutcome { DeliveredInOrder, Held, Duplicate };

struct RxResult {
    RxOutcome outcome = RxOutcome::Held;
    std::uint64_t delivered = 0;
};

struct PdcpRxCounters {
    std::uint64_t delivered_in_order = 0;
    std::uint64_t duplicates = 0;
    std::uint64_t reorder_losses = 0;
    std::uint64_t reordering_expiries = 0;
    std::uint64_t order_violations = 0;
};

/// PDCP receive entity: duplicate removal, reordering buffer and timer,
/// strictly increasing delivery to the upper layer.
class PdcpRxEntity {
public:
    explicit PdcpRxEntity(Engine& engine) : engine_(engine) {}

    void set_reordering_timer(double t_r_ms) { t_r_ms_ = t_r_ms; }
    double reordering_timer() const noexcept { return t_r_ms_; }
    void set_observer(ObservationCollector* collector) { observer_ = collector; }
    /// Optional sink for every sn handed to the upper layer.
    void set_deliver(std::function<void(Sn)> fn) { deliver_ = std::move(fn); }

    RxResult rx_on_pdu(Sn sn, TimeMs created_at, TimeMs now, int attempt = 1);
    std::uint64_t rx_on_reordering_expiry(TimeMs now);

    Sn expected_sn() const noexcept { return expected_; }
    const std::map<Sn, TimeMs>& held() const noexcept { return held_; }
    bool reordering_pending() const noexcept { return reordering_event_.has_value(); }
    const PdcpRxCounters& counters() const noexcept { return counters_; }

private:
    std::uint64_t deliver(Sn sn);
    std::uint64_t drain_consecutive();
    void restart_timer_if_gap(TimeMs now);

    Engine& engine_;
    double t_r_ms_ = 1500.0;
    Sn expected_ = 0;
    std::map<Sn, TimeMs> held_;
    std::optional<EventId> reordering_event_;
    std::optional<Sn> last_delivered_;
    ObservationCollector* observer_ = nullptr;
    std::function<void(Sn)> deliver_;
    PdcpRxCounters counters_;
};

}  // namespace ntnsim
