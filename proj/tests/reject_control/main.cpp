// Well-typed counterpart of the reject cases. The reject suite requires this
// file to compile with the same command line, so a broken command cannot make
// every case "fail" for the wrong reason.
#include <cstdint>
#include <string>

#include "sessia/demos/canvas.hpp"
#include "sessia/sessia.hpp"

using namespace sessia;
using namespace sessia::demos;

using SharedCounter = LinearToShared<SendValue<std::uint64_t, Z>>;

Session<ReceiveChannel<ReceiveValue<std::string, End>, End>> client = receive_channel(
    [](auto a) { return send_value_to(a, std::string("Alice"), wait(a, terminate())); });

Session<End> counter_client(SharedChannel<SharedCounter> counter) {
    return acquire_shared_session(std::move(counter), [](auto c) {
        return receive_value_from(c, [c](std::uint64_t) { return release_shared_session(c, terminate()); });
    });
}

Session<ReceiveChannel<Canvas, End>> scribbler = receive_channel([](auto canvas) {
    return unfix_session_for(
        canvas, choose_left(canvas, send_value_to(canvas, Canvas2dMsg{MoveTo{1, 1}},
                                                  unfix_session_for(canvas, choose_right(canvas, wait(canvas, terminate()))))));
});

int main() { run_session(apply_channel(std::move(client), receive_value([](std::string) { return terminate(); }))); }
