#pragma once

#include <ostream>
#include <string>
#include <utility>

#include "sessia/demos/transcript.hpp"

namespace sessia::demos {

using HelloProvider = ReceiveValue<std::string, End>;
using HelloClient = ReceiveChannel<HelloProvider, End>;

inline Session<HelloProvider> hello_provider(std::ostream& out) {
    return receive_value([out = &out](std::string name) {
        *out << "Hello, " << name << '\n';
        return terminate();
    });
}

inline Session<HelloClient> hello_client(std::string name) {
    return receive_channel([name = std::move(name)](auto a) mutable {
        return send_value_to(a, std::move(name), wait(a, terminate()));
    });
}

inline std::pair<Session<HelloClient>, Session<HelloProvider>> hello_pair(std::string name, std::ostream& out) {
    return {hello_client(std::move(name)), hello_provider(out)};
}

inline void run_hello(std::ostream& out, std::string name = "Alice", Link how = Link::Apply) {
    auto [client, provider] = hello_pair(std::move(name), out);
    run_session(link(how, std::move(client), std::move(provider)));
    runtime::wait_idle();
}

} // namespace sessia::demos
