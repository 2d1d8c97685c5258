#include "ntnsim/sim_core.hpp"

#include "ntnsim/error.hpp"

#include <limits>
#include <string>

namespace ntnsim {

void Engine::on(EventKind kind, Handler handler)
{
    handlers_[static_cast<std::size_t>(kind)] = std::move(handler);
}

EventId Engine::schedule(EventKind kind, TimeMs fire_at, std::uint64_t payload)
{
    if (fire_at < now_) {
        throw Error(ErrorCode::SchedulingInPast,
                    "fire_at " + std::to_string(fire_at.value) + " < now " + std::to_string(now_.value));
    }
    const EventId id = next_id_++;
    pending_.emplace(id, Event{id, fire_at, kind, payload});
    queue_.push({fire_at, id});
    return id;
}

bool Engine::cancel(EventId id)
{
    // The queue entry stays behind and is skipped when popped.
    return pending_.erase(id) > 0;
}

bool Engine::dispatch_next(const TimeMs* limit)
{
    while (!queue_.empty()) {
        const QueueKey top = queue_.top();
        if (limit != nullptr && top.fire_at > *limit) return false;
        queue_.pop();
        auto it = pending_.find(top.id);
        if (it == pending_.end()) continue;
        const Event ev = it->second;
        pending_.erase(it);
        now_ = ev.fire_at;
        if (auto& h = handlers_[static_cast<std::size_t>(ev.kind)]) h(ev);
        if (post_dispatch_) post_dispatch_(ev);
        return true;
    }
    return false;
}

std::size_t Engine::run_until(TimeMs t_end)
{
    std::size_t dispatched = 0;
    while (dispatch_next(&t_end)) ++dispatched;
    if (now_ < t_end) now_ = t_end;
    return dispatched;
}

std::size_t Engine::run()
{
    std::size_t dispatched = 0;
    while (dispatch_next(nullptr)) ++dispatched;
    return dispatched;
}

std::int64_t RandomSource::draw_uniform_int(std::int64_t lo, std::int64_t hi)
{
    if (lo > hi) {
        throw Error(ErrorCode::EmptyRange, "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
    if (span == std::numeric_limits<std::uint64_t>::max()) return static_cast<std::int64_t>(gen_());
    const std::uint64_t range = span + 1;
    // Reject the top partial bucket so every value is equally likely.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % range);
    std::uint64_t x = gen_();
    while (x >= limit) x = gen_();
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + x % range);
}

double RandomSource::draw_unit()
{
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

bool RandomSource::draw_bernoulli(double p)
{
    return draw_unit() < p;
}

}  // namespace ntnsim
