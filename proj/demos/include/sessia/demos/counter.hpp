#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <thread>
#include <utility>

#include "sessia/demos/transcript.hpp"

namespace sessia::demos {

// A counter stream the client can stop: each round the client either asks
// for the next value or closes the stream.
using CounterStream = Fix<ExternalChoice<SendValue<std::uint64_t, Z>, End>>;

inline Session<CounterStream> counter_producer(std::uint64_t count, std::chrono::milliseconds delay) {
    return fix_session(offer_choice([count, delay](auto branch) {
        return branch.match(
            [count, delay](auto inject) {
                return inject(send_value_async([count, delay] {
                    if (delay.count() > 0) std::this_thread::sleep_for(delay);
                    return std::pair{count, counter_producer(count + 1, delay)};
                }));
            },
            [](auto inject) { return inject(terminate()); });
    }));
}

/// Receives `take` values, then closes the stream. Each round includes a
/// fresh copy of itself and hands the stream over to it.
inline Session<ReceiveChannel<CounterStream, End>> counter_client(std::size_t take, Transcript* t) {
    return receive_channel([take, t](auto stream) -> PartialSession<Ctx<CounterStream>, End> {
        if (take == 0) return unfix_session_for(stream, choose_right(stream, wait(stream, terminate())));
        return unfix_session_for(
            stream, choose_left(stream, receive_value_from(stream, [take, t, stream](std::uint64_t count) {
                        t->record(EventKind::Recv, std::to_string(count));
                        return include_session(counter_client(take - 1, t), [stream](auto next) {
                            return send_channel_to(next, stream, forward(next));
                        });
                    })));
    });
}

inline void run_counter(Transcript& t, std::uint64_t start, std::size_t take, std::chrono::milliseconds delay,
                        Link how = Link::Apply) {
    run_session(link(how, counter_client(take, &t), counter_producer(start, delay)));
    runtime::wait_idle();
}

} // namespace sessia::demos
