#pragma once

#include <chrono>
#include <cstdint>
#include <ostream>
#include <thread>
#include <utility>

#include "sessia/sessia.hpp"

namespace sessia::demos {

// The unbounded form of the counter stream. The client never finishes, so
// these programs are not run by the CLI.
using Counter = Fix<SendValue<std::uint64_t, Z>>;

inline Session<Counter> stream_producer(std::uint64_t count, std::chrono::milliseconds delay = std::chrono::seconds(1)) {
    return fix_session(send_value_async([count, delay] {
        std::this_thread::sleep_for(delay);
        return std::pair{count, stream_producer(count + 1, delay)};
    }));
}

inline Session<ReceiveChannel<Counter, End>> stream_client(std::ostream& out) {
    return receive_channel([out = &out](auto stream) {
        return unfix_session_for(stream, receive_value_from(stream, [out, stream](std::uint64_t count) {
                                     *out << "Received value: " << count << '\n';
                                     return include_session(stream_client(*out), [stream](auto next) {
                                         return send_channel_to(next, stream, forward(next));
                                     });
                                 }));
    });
}

} // namespace sessia::demos
