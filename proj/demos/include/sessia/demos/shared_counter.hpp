#pragma once

#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "sessia/demos/transcript.hpp"

namespace sessia::demos {

using SharedCounter = LinearToShared<SendValue<std::uint64_t, Z>>;

// One critical section: receive the count, then reach the release point.
static_assert(std::is_same_v<shared_applied_t<SendValue<std::uint64_t, Z>>,
                             SendValue<std::uint64_t, SharedToLinear<SendValue<std::uint64_t, Z>>>>);

inline SharedSession<SharedCounter> shared_counter_producer(std::uint64_t count) {
    return accept_shared_session(
        [count] { return send_value(count, detach_shared_session(shared_counter_producer(count + 1))); });
}

inline Session<End> shared_counter_client(SharedChannel<SharedCounter> counter, Transcript* t) {
    return acquire_shared_session(std::move(counter), [t](auto c) {
        return receive_value_from(c, [t, c](std::uint64_t count) {
            t->record(EventKind::Recv, std::to_string(count));
            return release_shared_session(c, terminate());
        });
    });
}

/// Serve `clients` concurrent clients from one shared counter starting at 0.
inline void run_shared_counter(Transcript& t, std::size_t clients) {
    RecordSharedEvents hook(t);
    std::vector<std::exception_ptr> errors(clients);
    {
        auto counter = run_shared_session(shared_counter_producer(0));
        std::vector<std::thread> threads;
        for (std::size_t i = 0; i < clients; ++i) {
            threads.emplace_back([&, i, c = counter.clone()]() mutable {
                try {
                    run_session(shared_counter_client(std::move(c), &t));
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            });
        }
        for (auto& th : threads) th.join();
    }
    runtime::wait_idle();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace sessia::demos
