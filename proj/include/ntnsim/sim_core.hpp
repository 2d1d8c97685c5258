#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <unordered_map>
#include <vector>

namespace ntnsim {

/// Simulation time in milliseconds. Non-negative; continuous (not slotted).
struct TimeMs {
    double value = 0.0;

    constexpr TimeMs() = default;
    constexpr explicit TimeMs(double ms) : value(ms) {}

    friend constexpr auto operator<=>(TimeMs, TimeMs) = default;
    friend constexpr TimeMs operator+(TimeMs t, double ms) { return TimeMs{t.value + ms}; }
    friend constexpr double operator-(TimeMs a, TimeMs b) { return a.value - b.value; }
};

enum class EventKind : std::uint8_t {
    SduArrival,
    PduDelivered,
    AckDelivered,
    DiscardExpiry,
    ReorderingExpiry,
    ReassemblyExpiry,
    AdaptationTick,
    RtdChange,
};

inline constexpr std::size_t kEventKindCount = 8;

using EventId = std::uint64_t;

struct Event {
    EventId id = 0;
    TimeMs fire_at;
    EventKind kind = EventKind::SduArrival;
    // Index into the owning entity's records; meaning depends on kind.
    std::uint64_t payload = 0;
};

/// Discrete-event engine. Events are dispatched in (fire_at, id) order, so
/// simultaneous events run in insertion order.
class Engine {
public:
    using Handler = std::function<void(const Event&)>;

    TimeMs now() const noexcept { return now_; }

    void on(EventKind kind, Handler handler);

    EventId schedule(EventKind kind, TimeMs fire_at, std::uint64_t payload = 0);
    bool cancel(EventId id);
    bool is_pending(EventId id) const { return pending_.contains(id); }
    std::size_t pending_count() const noexcept { return pending_.size(); }

    /// Dispatches every event with fire_at <= t_end and leaves the clock at t_end.
    std::size_t run_until(TimeMs t_end);
    /// Dispatches until the queue drains; the clock stays at the last event.
    std::size_t run();

    /// Called after every dispatched event (invariant probes).
    void set_post_dispatch(std::function<void(const Event&)> hook) { post_dispatch_ = std::move(hook); }

private:
    struct QueueKey {
        TimeMs fire_at;
        EventId id;
        bool operator>(const QueueKey& o) const
        {
            if (fire_at != o.fire_at) return fire_at > o.fire_at;
            return id > o.id;
        }
    };

    bool dispatch_next(const TimeMs* limit);

    TimeMs now_;
    EventId next_id_ = 1;
    std::priority_queue<QueueKey, std::vector<QueueKey>, std::greater<>> queue_;
    std::unordered_map<EventId, Event> pending_;
    std::array<Handler, kEventKindCount> handlers_;
    std::function<void(const Event&)> post_dispatch_;
};

/// Seeded random source: std::mt19937_64 (bit-exact across platforms by the
/// standard) with our own range reduction, so draws do not depend on the
/// standard library's distribution implementations.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    /// Uniform integer on [lo, hi] by rejection sampling; throws EmptyRange if lo > hi.
    std::int64_t draw_uniform_int(std::int64_t lo, std::int64_t hi);
    /// Uniform real on [0, 1) with 53 random bits.
    double draw_unit();
    bool draw_bernoulli(double p);

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

}  // namespace ntnsim
