#include "ntnsim/rlc.hpp"

#include <algorithm>

namespace ntnsim {

AmRxOutcome RlcAmRxEntity::am_rx_on_pdu(std::uint64_t sdu_id, int part_index, int parts_expected, TimeMs now)
{
    if (expired_.contains(sdu_id)) {
        ++counters_.late_discards;
        return AmRxOutcome::LateDiscard;
    }
    parts_expected = std::max(1, parts_expected);

    auto it = entries_.find(sdu_id);
    if (it == entries_.end()) {
        if (parts_expected == 1) {
            ++counters_.completed_sdus;
            return AmRxOutcome::Complete;
        }
        ReassemblyEntry e;
        e.sdu_id = sdu_id;
        e.first_pdu_at = now;
        e.parts_expected = parts_expected;
        e.have.assign(static_cast<std::size_t>(parts_expected), false);
        e.expiry_event = engine_.schedule(EventKind::ReassemblyExpiry, now + t_re_ms_, sdu_id);
        it = entries_.emplace(sdu_id, std::move(e)).first;
    }

    ReassemblyEntry& e = it->second;
    const auto idx = static_cast<std::size_t>(part_index);
    if (idx < e.have.size() && !e.have[idx]) {
        e.have[idx] = true;
        ++e.parts_received;
    }
    if (e.parts_received < e.parts_expected) return AmRxOutcome::Pending;

    if (e.expiry_event) engine_.cancel(*e.expiry_event);
    entries_.erase(it);
    ++counters_.completed_sdus;
    return AmRxOutcome::Complete;
}

bool RlcAmRxEntity::am_rx_on_reassembly_expiry(std::uint64_t sdu_id, TimeMs)
{
    auto it = entries_.find(sdu_id);
    if (it == entries_.end()) return false;
    entries_.erase(it);
    expired_.insert(sdu_id);
    ++counters_.expired_incomplete;
    return true;
}

const ReassemblyEntry* RlcAmRxEntity::entry(std::uint64_t sdu_id) const
{
    auto it = entries_.find(sdu_id);
    return it == entries_.end() ? nullptr : &it->second;
}

RlcPdu RlcPassthrough::tm_passthrough(RlcPdu pdu) const
{
    pdu.at = pdu.at + t_pro_rlc_ms_;
    return pdu;
}

RlcPdu RlcPassthrough::forward(RlcPdu pdu)
{
    pdu = tm_passthrough(pdu);
    if (mode_ == RlcMode::Um) pdu.um_sn = next_um_sn_++;
    return pdu;
}

}  // namespace ntnsim
