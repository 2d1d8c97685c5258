#pragma once

#include "ntnsim/sim_core.hpp"

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace ntnsim {

enum class RlcMode { Am, Um, Tm };

struct ReassemblyEntry {
    std::uint64_t sdu_id = 0;
    TimeMs first_pdu_at;
    int parts_expected = 1;
    int parts_received = 0;
    std::vector<bool> have;
    std::optional<EventId> expiry_event;
};

enum class AmRxOutcome { Complete, Pending, LateDiscard };

struct RlcAmCounters {
    std::uint64_t completed_sdus = 0;
    std::uint64_t expired_incomplete = 0;
    std::uint64_t late_discards = 0;
};

/// RLC AM receive side: holds PDUs of an SDU until all parts are in, or
/// drops the partial SDU when the reassembly timer runs out.
class RlcAmRxEntity {
public:
    explicit RlcAmRxEntity(Engine& engine) : engine_(engine) {}

    void set_reassembly_timer(double t_re_ms) { t_re_ms_ = t_re_ms; }
    double reassembly_timer() const noexcept { return t_re_ms_; }

    /// `parts_expected` travels with the PDU metadata.
    AmRxOutcome am_rx_on_pdu(std::uint64_t sdu_id, int part_index, int parts_expected, TimeMs now);
    bool am_rx_on_reassembly_expiry(std::uint64_t sdu_id, TimeMs now);

    std::size_t open_entries() const noexcept { return entries_.size(); }
    const ReassemblyEntry* entry(std::uint64_t sdu_id) const;
    const RlcAmCounters& counters() const noexcept { return counters_; }

private:
    Engine& engine_;
    double t_re_ms_ = 1500.0;
    std::unordered_map<std::uint64_t, ReassemblyEntry> entries_;
    std::unordered_set<std::uint64_t> expired_;
    RlcAmCounters counters_;
};

struct RlcPdu {
    std::uint64_t sdu_id = 0;
    TimeMs at;
    std::optional<std::uint64_t> um_sn;

    bool operator==(const RlcPdu&) const = default;
};

/// TM and UM data path: identity forwarding plus the RLC processing delay;
/// UM additionally stamps a sequence number. No ARQ in either mode.
class RlcPassthrough {
public:
    RlcPassthrough(RlcMode mode, double t_pro_rlc_ms) : mode_(mode), t_pro_rlc_ms_(t_pro_rlc_ms) {}

    RlcPdu tm_passthrough(RlcPdu pdu) const;
    RlcPdu forward(RlcPdu pdu);

    RlcMode mode() const noexcept { return mode_; }

private:
    RlcMode mode_;
    double t_pro_rlc_ms_;
    std::uint64_t next_um_sn_ = 0;
};

}  // namespace ntnsim
