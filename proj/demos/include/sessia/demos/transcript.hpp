#pragma once

#include <chrono>
#include <cstdint>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

#include "sessia/sessia.hpp"

namespace sessia::demos {

enum class EventKind { Send, Recv, Acq, Rel, End };

inline const char* kind_name(EventKind k) {
    switch (k) {
        case EventKind::Send: return "SEND";
        case EventKind::Recv: return "RECV";
        case EventKind::Acq: return "ACQ";
        case EventKind::Rel: return "REL";
        case EventKind::End: return "END";
    }
    return "?";
}

struct Event {
    std::chrono::steady_clock::time_point at;
    std::uint64_t task;
    EventKind kind;
    std::string value;
};

/// Append-only, thread-safe event log of a demo run.
class Transcript {
public:
    void record(EventKind kind, std::string value) {
        Event e{std::chrono::steady_clock::now(), runtime::task_id(), kind, std::move(value)};
        std::lock_guard lock(m_);
        events_.push_back(std::move(e));
    }

    std::vector<Event> events() const {
        std::lock_guard lock(m_);
        return events_;
    }

    /// One "KIND<TAB>value" line per event.
    std::vector<std::string> lines() const {
        std::vector<std::string> out;
        for (const auto& e : events()) out.push_back(std::string(kind_name(e.kind)) + "\t" + e.value);
        return out;
    }

    void write(std::ostream& os) const {
        for (const auto& l : lines()) os << l << '\n';
    }

private:
    mutable std::mutex m_;
    std::vector<Event> events_;
};

/// Routes shared-session acquire/release events into a transcript for the
/// lifetime of the object.
class RecordSharedEvents {
public:
    explicit RecordSharedEvents(Transcript& t) {
        instrument::set_event_hook([&t](instrument::EventKind k, std::uint64_t serial) {
            t.record(k == instrument::EventKind::Acquire ? EventKind::Acq : EventKind::Rel, std::to_string(serial));
        });
    }
    ~RecordSharedEvents() { instrument::set_event_hook({}); }
    RecordSharedEvents(const RecordSharedEvents&) = delete;
    RecordSharedEvents& operator=(const RecordSharedEvents&) = delete;
};

/// How a client is connected to its provider.
enum class Link { Apply, Cut };

template <Protocol A, Protocol B>
Session<B> link(Link how, Session<ReceiveChannel<A, B>> f, Session<A> a) {
    if (how == Link::Cut) return apply_channel_by_cut(std::move(f), std::move(a));
    return apply_channel(std::move(f), std::move(a));
}

} // namespace sessia::demos
