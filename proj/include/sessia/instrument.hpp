#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <utility>

// Process-wide counters and an optional event hook. The counters exist so
// tests can check conservation properties of a run (every endpoint created is
// consumed, every continuation fires once); they are cheap relaxed atomics.

namespace sessia::instrument {

struct Counters {
    std::uint64_t endpoints_created = 0;
    std::uint64_t endpoints_consumed = 0;
    std::uint64_t sessions_built = 0;
    std::uint64_t sessions_run = 0;
    std::uint64_t continuations_built = 0;
    std::uint64_t continuations_invoked = 0;
    std::uint64_t duplicate_invocations = 0;
    std::uint64_t tasks_spawned = 0;
};

enum class EventKind { Acquire, Release };

namespace detail {

struct State {
    std::atomic<std::uint64_t> endpoints_created{0};
    std::atomic<std::uint64_t> endpoints_consumed{0};
    std::atomic<std::uint64_t> sessions_built{0};
    std::atomic<std::uint64_t> sessions_run{0};
    std::atomic<std::uint64_t> continuations_built{0};
    std::atomic<std::uint64_t> continuations_invoked{0};
    std::atomic<std::uint64_t> duplicate_invocations{0};
    std::atomic<std::uint64_t> tasks_spawned{0};

    std::mutex hook_mutex;
    std::function<void(EventKind, std::uint64_t)> hook;
};

inline State& state() {
    static State s;
    return s;
}

inline void bump(std::atomic<std::uint64_t>& c) { c.fetch_add(1, std::memory_order_relaxed); }

} // namespace detail

inline Counters snapshot() {
    auto& s = detail::state();
    Counters c;
    c.endpoints_created = s.endpoints_created.load();
    c.endpoints_consumed = s.endpoints_consumed.load();
    c.sessions_built = s.sessions_built.load();
    c.sessions_run = s.sessions_run.load();
    c.continuations_built = s.continuations_built.load();
    c.continuations_invoked = s.continuations_invoked.load();
    c.duplicate_invocations = s.duplicate_invocations.load();
    c.tasks_spawned = s.tasks_spawned.load();
    return c;
}

/// Zero every counter. Only meaningful while no session is running.
inline void reset() {
    auto& s = detail::state();
    s.endpoints_created = 0;
    s.endpoints_consumed = 0;
    s.sessions_built = 0;
    s.sessions_run = 0;
    s.continuations_built = 0;
    s.continuations_invoked = 0;
    s.duplicate_invocations = 0;
    s.tasks_spawned = 0;
}

/// Install a callback receiving acquire/release events from shared sessions.
/// The value is the serial number of the critical section. Pass an empty
/// function to uninstall.
inline void set_event_hook(std::function<void(EventKind, std::uint64_t)> hook) {
    auto& s = detail::state();
    std::lock_guard lock(s.hook_mutex);
    s.hook = std::move(hook);
}

inline void emit(EventKind kind, std::uint64_t serial) {
    auto& s = detail::state();
    std::lock_guard lock(s.hook_mutex);
    if (s.hook) s.hook(kind, serial);
}

} // namespace sessia::instrument
