#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "sessia/demos/transcript.hpp"

namespace sessia::demos {

struct Size2D {
    std::int64_t width;
    std::int64_t height;
};
struct MoveTo {
    std::int64_t x;
    std::int64_t y;
};
struct LineTo {
    std::int64_t x;
    std::int64_t y;
};
using Canvas2dMsg = std::variant<MoveTo, LineTo>;
using CanvasId = std::uint64_t;

inline std::string describe(const Canvas2dMsg& m) {
    if (auto* p = std::get_if<MoveTo>(&m)) return "MoveTo(" + std::to_string(p->x) + ", " + std::to_string(p->y) + ")";
    const auto& l = std::get<LineTo>(m);
    return "LineTo(" + std::to_string(l.x) + ", " + std::to_string(l.y) + ")";
}

// One canvas: draw repeatedly, or close.
using Canvas = Fix<ExternalChoice<ReceiveValue<Canvas2dMsg, Z>, End>>;

// Creating a canvas: send its size, get back its id and a channel to it.
using ConstellationCanvas = LinearToShared<ReceiveValue<Size2D, SendValue<CanvasId, SendChannel<Canvas, Z>>>>;

// What a drawing client talks to: one canvas creation on its behalf.
using CanvasRequest = ReceiveValue<Size2D, SendValue<CanvasId, Canvas>>;
using CanvasClient = ReceiveChannel<CanvasRequest, ReceiveChannel<CanvasRequest, End>>;

inline Session<Canvas> canvas_provider(CanvasId id, Transcript* t) {
    return fix_session(offer_choice([id, t](auto branch) {
        return branch.match(
            [id, t](auto inject) {
                return inject(receive_value([id, t](Canvas2dMsg msg) {
                    t->record(EventKind::Recv, "canvas " + std::to_string(id) + ": " + describe(msg));
                    return canvas_provider(id, t);
                }));
            },
            [id, t](auto inject) {
                t->record(EventKind::End, "canvas " + std::to_string(id));
                return inject(terminate());
            });
    }));
}

inline SharedSession<ConstellationCanvas> constellation(CanvasId next_id, Transcript* t) {
    return accept_shared_session([next_id, t] {
        return receive_value([next_id, t](Size2D) {
            t->record(EventKind::Send, "canvas-id " + std::to_string(next_id));
            return send_value(next_id, include_session(canvas_provider(next_id, t), [next_id, t](auto canvas) {
                                  return send_channel_from(canvas, detach_shared_session(constellation(next_id + 1, t)));
                              }));
        });
    });
}

inline Session<CanvasRequest> canvas_request(SharedChannel<ConstellationCanvas> shared) {
    return receive_value([shared = std::move(shared)](Size2D size) mutable {
        return acquire_shared_session(std::move(shared), [size](auto c) {
            return send_value_to(c, size, receive_value_from(c, [c](CanvasId id) {
                                     return receive_channel_from(c, [c, id](auto canvas) {
                                         return release_shared_session(c, send_value(id, forward(canvas)));
                                     });
                                 }));
        });
    });
}

template <class N, class K>
auto draw(N canvas, Canvas2dMsg msg, K&& cont) {
    return unfix_session_for(canvas, choose_left(canvas, send_value_to(canvas, std::move(msg), std::forward<K>(cont))));
}

template <class N, class K>
auto close_canvas(N canvas, K&& cont) {
    return unfix_session_for(canvas, choose_right(canvas, wait(canvas, std::forward<K>(cont))));
}

/// Creates two canvases, draws on and closes the first while the second
/// stays open, then draws on and closes the second.
inline Session<CanvasClient> canvas_client(Transcript* t) {
    return receive_channel([t](auto first) {
        return receive_channel([t, first](auto second) {
            return send_value_to(
                first, Size2D{640, 480}, receive_value_from(first, [t, first, second](CanvasId id1) {
                    t->record(EventKind::Recv, "canvas-id " + std::to_string(id1));
                    return send_value_to(
                        second, Size2D{320, 240}, receive_value_from(second, [t, first, second](CanvasId id2) {
                            t->record(EventKind::Recv, "canvas-id " + std::to_string(id2));
                            return draw(first, MoveTo{10, 10},
                                        draw(first, LineTo{100, 10},
                                             close_canvas(first,
                                                          draw(second, MoveTo{0, 0},
                                                               draw(second, LineTo{50, 50},
                                                                    draw(second, LineTo{0, 50},
                                                                         close_canvas(second, terminate())))))));
                        }));
                }));
        });
    });
}

inline void run_canvas(Transcript& t, Link how = Link::Apply) {
    RecordSharedEvents hook(t);
    {
        auto shared = run_shared_session(constellation(1, &t));
        auto client = link(how, canvas_client(&t), canvas_request(shared.clone()));
        run_session(link(how, std::move(client), canvas_request(shared.clone())));
    }
    runtime::wait_idle();
}

} // namespace sessia::demos
