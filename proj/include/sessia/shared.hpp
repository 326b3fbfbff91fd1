#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <type_traits>
#include <utility>

#include "sessia/instrument.hpp"
#include "sessia/recursion.hpp"
#include "sessia/session.hpp"

namespace sessia {

// ---------------------------------------------------------------------------
// Shared type application.
//
// Like type_app, but defined only when every path through the continuation
// positions of F ends at the recursion point Z. End, Fix<G> and
// SharedToLinear<G> on such a path have no instance, so a body that could
// finish (or loop) without releasing cannot be made shared. Channel
// positions carry independent sessions and use the linear type_app.

template <class F, class X>
struct shared_type_app {};

template <class F, class X>
concept SharedTypeApp = requires { typename shared_type_app<F, X>::type; };

template <class F, class X>
    requires SharedTypeApp<F, X>
using shared_type_app_t = typename shared_type_app<F, X>::type;

template <class X>
struct shared_type_app<Z, X> {
    using type = X;
};
template <class T, class A, class X>
    requires SharedTypeApp<A, X>
struct shared_type_app<ReceiveValue<T, A>, X> {
    using type = ReceiveValue<T, shared_type_app_t<A, X>>;
};
template <class T, class A, class X>
    requires SharedTypeApp<A, X>
struct shared_type_app<SendValue<T, A>, X> {
    using type = SendValue<T, shared_type_app_t<A, X>>;
};
template <class A, class B, class X>
    requires TypeApp<A, X> && SharedTypeApp<B, X>
struct shared_type_app<ReceiveChannel<A, B>, X> {
    using type = ReceiveChannel<type_app_t<A, X>, shared_type_app_t<B, X>>;
};
template <class A, class B, class X>
    requires TypeApp<A, X> && SharedTypeApp<B, X>
struct shared_type_app<SendChannel<A, B>, X> {
    using type = SendChannel<type_app_t<A, X>, shared_type_app_t<B, X>>;
};
template <class A, class B, class X>
    requires SharedTypeApp<A, X> && SharedTypeApp<B, X>
struct shared_type_app<ExternalChoice<A, B>, X> {
    using type = ExternalChoice<shared_type_app_t<A, X>, shared_type_app_t<B, X>>;
};
template <class A, class B, class X>
    requires SharedTypeApp<A, X> && SharedTypeApp<B, X>
struct shared_type_app<InternalChoice<A, B>, X> {
    using type = InternalChoice<shared_type_app_t<A, X>, shared_type_app_t<B, X>>;
};

/// The release step of a shared body. Reaching it returns the session to
/// LinearToShared<F>.
template <class F>
struct SharedToLinear {
    using body = F;
};

template <class F>
concept EquiSynchronizing = SharedTypeApp<F, SharedToLinear<F>>;

/// Shared protocol whose critical section is F with Z replaced by the
/// release point.
template <class F>
struct LinearToShared {
    static_assert(EquiSynchronizing<F>,
                  "LinearToShared: body is not strictly equi-synchronizing (every path must end at Z, "
                  "the release point; End is not allowed)");
    using body = F;
};

template <class S>
inline constexpr bool is_shared_protocol_v = false;
template <class F>
inline constexpr bool is_shared_protocol_v<LinearToShared<F>> = true;

template <class S>
concept SharedProtocol = is_shared_protocol_v<S>;

/// Linear protocol of one critical section of LinearToShared<F>.
template <class F>
    requires EquiSynchronizing<F>
using shared_applied_t = shared_type_app_t<F, SharedToLinear<F>>;

template <class F>
struct ReleaseAck {};

template <class F>
struct ReleasePayload {
    static constexpr const char* layout = "release signal (no continuation)";
    std::uint64_t serial;
    detail::OneShotSender<ReleaseAck<F>> ack;
};

template <class F>
struct payload<SharedToLinear<F>> {
    using type = ReleasePayload<F>;
};

namespace detail {

// Acquire requests for one shared process, served first come first served.
template <class F>
class SharedQueue {
public:
    using Applied = shared_applied_t<F>;

    struct Request {
        Sender<Applied> offer;
        OneShotSender<std::uint64_t> granted;
    };

    void push(Request r) {
        std::unique_lock lock(m_);
        if (dead_) {
            lock.unlock();
            return;  // r is dropped; the acquirer sees ChannelClosed
        }
        requests_.push_back(std::move(r));
        cv_.notify_all();
    }

    // Next request, or nothing once no handle can produce one.
    std::optional<Request> next() {
        std::unique_lock lock(m_);
        cv_.wait(lock, [&] { return !requests_.empty() || !open_ || dead_; });
        if (dead_ || requests_.empty()) return std::nullopt;
        Request r = std::move(requests_.front());
        requests_.pop_front();
        return r;
    }

    std::uint64_t next_serial() {
        std::lock_guard lock(m_);
        return serial_++;
    }

    void close() {
        std::lock_guard lock(m_);
        open_ = false;
        cv_.notify_all();
    }

    void mark_dead() {
        std::deque<Request> dropped;
        {
            std::lock_guard lock(m_);
            dead_ = true;
            dropped.swap(requests_);
            cv_.notify_all();
        }
    }

private:
    std::mutex m_;
    std::condition_variable cv_;
    std::deque<Request> requests_;
    std::uint64_t serial_ = 0;
    bool open_ = true;
    bool dead_ = false;
};

} // namespace detail

/// Context slot holding the right to end the current critical section.
/// Present from accept_shared_session until detach_shared_session.
template <class F>
struct Lock {};

template <class F>
inline constexpr bool is_slot_v<Lock<F>> = true;

template <class F>
struct LockToken {
    std::shared_ptr<detail::SharedQueue<F>> queue;
    std::uint64_t serial;
};

template <class F>
struct slot_endpoint<Lock<F>> {
    using type = LockToken<F>;
};

template <class S>
class SharedSession {
    static_assert(SharedProtocol<S>, "SharedSession: protocol must be LinearToShared<F>");
};

template <class S>
class SharedChannel {
    static_assert(SharedProtocol<S>, "SharedChannel: protocol must be LinearToShared<F>");
};

template <class T>
inline constexpr bool is_shared_channel_v = false;
template <class S>
inline constexpr bool is_shared_channel_v<SharedChannel<S>> = true;

namespace detail {

struct SharedAccess;

template <class T>
inline constexpr bool is_accept_term_v = requires { typename std::remove_cvref_t<T>::is_accept_term; };

} // namespace detail

/// A shared program: serves one critical section, then (through
/// detach_shared_session) continues as another SharedSession. Not
/// copyable; run it with run_shared_session.
template <class F>
class SharedSession<LinearToShared<F>> {
    static_assert(sizeof(LinearToShared<F>) > 0);

public:
    template <class T>
        requires detail::is_accept_term_v<T>
    SharedSession(T&& term) : SharedSession(std::move(term).template elaborate_shared<F>()) {}

    SharedSession(SharedSession&&) noexcept = default;
    SharedSession& operator=(SharedSession&&) noexcept = default;

private:
    friend struct detail::SharedAccess;
    using Serve = detail::OnceFunction<Step(std::shared_ptr<detail::SharedQueue<F>>)>;
    explicit SharedSession(Serve s) : serve_(std::move(s)) {}
    Serve serve_;
};

/// Clonable handle to a running shared process. The process stops once
/// every clone is gone and no acquire is pending.
template <class F>
class SharedChannel<LinearToShared<F>> {
public:
    SharedChannel(const SharedChannel&) = default;
    SharedChannel& operator=(const SharedChannel&) = default;
    SharedChannel(SharedChannel&&) noexcept = default;
    SharedChannel& operator=(SharedChannel&&) noexcept = default;

    SharedChannel clone() const { return *this; }

private:
    friend struct detail::SharedAccess;

    struct Handle {
        std::shared_ptr<detail::SharedQueue<F>> queue;
        explicit Handle(std::shared_ptr<detail::SharedQueue<F>> q) : queue(std::move(q)) {}
        ~Handle() { queue->close(); }
    };

    explicit SharedChannel(std::shared_ptr<detail::SharedQueue<F>> q) : handle_(std::make_shared<Handle>(std::move(q))) {}
    std::shared_ptr<Handle> handle_;
};

namespace detail {

struct SharedAccess {
    template <class F, class G>
    static SharedSession<LinearToShared<F>> make(G&& serve) {
        return SharedSession<LinearToShared<F>>(
            typename SharedSession<LinearToShared<F>>::Serve(std::forward<G>(serve)));
    }

    template <class F>
    static Step serve(SharedSession<LinearToShared<F>>&& s, std::shared_ptr<SharedQueue<F>> queue) {
        return s.serve_(std::move(queue));
    }

    template <class F>
    static SharedChannel<LinearToShared<F>> channel(std::shared_ptr<SharedQueue<F>> q) {
        return SharedChannel<LinearToShared<F>>(std::move(q));
    }

    template <class F>
    static std::shared_ptr<SharedQueue<F>> queue(const SharedChannel<LinearToShared<F>>& c) {
        return c.handle_->queue;
    }
};

} // namespace detail

// ---------------------------------------------------------------------------
// Running

/// Start `session` as a background shared process and return a channel to
/// it.
template <class F>
SharedChannel<LinearToShared<F>> run_shared_session(SharedSession<LinearToShared<F>> session) {
    auto queue = std::make_shared<detail::SharedQueue<F>>();
    detail::spawn(
        [queue, session = std::move(session)]() mutable -> Step {
            try {
                drive(detail::SharedAccess::serve(std::move(session), queue));
            } catch (...) {
                queue->mark_dead();
                throw;
            }
            queue->mark_dead();
            return {};
        },
        nullptr);
    return detail::SharedAccess::channel<F>(std::move(queue));
}

// ---------------------------------------------------------------------------
// Provider side: accept / detach

template <class P>
struct AcceptTerm {
    using is_accept_term = void;
    P produce;

    template <class F>
    SharedSession<LinearToShared<F>> elaborate_shared() && {
        using Applied = shared_applied_t<F>;
        using C = Ctx<Lock<F>>;
        static_assert(std::is_invocable_v<P&>, "accept_shared_session: producer must be callable with no arguments");
        return detail::SharedAccess::make<F>(
            [produce = std::move(produce)](std::shared_ptr<detail::SharedQueue<F>> queue) mutable -> Step {
                for (;;) {
                    auto request = queue->next();
                    if (!request) return {};
                    const auto serial = queue->next_serial();
                    try {
                        request->granted.send(serial);
                    } catch (const ChannelClosed&) {
                        continue;  // the acquirer went away; serve the next one
                    }
                    PartialSession<C, Applied> body = produce();
                    return detail::continue_with(
                        std::move(body), endpoints_t<C>{LockToken<F>{std::move(queue), serial}, std::tuple<>{}},
                        std::move(request->offer));
                }
            });
    }
};

/// Serve one critical section. `produce` is called when a client has
/// acquired and returns the body, typed in context (Lock<F>) and offering
/// the unrolled critical section. Building the body lazily lets a shared
/// program refer to itself through detach_shared_session.
template <class P>
AcceptTerm<std::decay_t<P>> accept_shared_session(P&& produce) {
    return {std::forward<P>(produce)};
}

template <class F>
struct DetachTerm {
    using is_session_term = void;
    SharedSession<LinearToShared<F>> next;

    template <class C, class A>
    PartialSession<C, A> elaborate() && {
        if constexpr (!std::is_same_v<A, SharedToLinear<F>>) {
            static_assert(dependent_false<A>,
                          "detach_shared_session: offered protocol must be the release point SharedToLinear<F>");
            return detail::ill_typed<C, A>();
        } else if constexpr (!std::is_same_v<slot_at_t<Z, C>, Lock<F>>) {
            static_assert(dependent_false<C>, "detach_shared_session: slot 0 must hold the Lock<F> of this section");
            return detail::ill_typed<C, A>();
        } else if constexpr (!EmptyContext<lens_target_t<Z, C, Lock<F>, Empty>>) {
            static_assert(dependent_false<C>,
                          "detach_shared_session: every other channel must be consumed before detaching");
            return detail::ill_typed<C, A>();
        } else {
            return detail::make_session<C, A>(
                [next = std::move(next)](endpoints_t<C> ctx, Sender<A> offer) mutable -> Step {
                    LockToken<F> token = std::move(ctx.first);
                    auto [ack_tx, ack_rx] = detail::one_shot<ReleaseAck<F>>();
                    offer.send(ReleasePayload<F>{token.serial, std::move(ack_tx)});
                    ack_rx.recv();
                    return [next = std::move(next), queue = std::move(token.queue)]() mutable -> Step {
                        return detail::SharedAccess::serve(std::move(next), std::move(queue));
                    };
                });
        }
    }
};

/// End the critical section: wait for the client to release, then serve
/// the next acquire with `next`.
template <class F>
DetachTerm<F> detach_shared_session(SharedSession<LinearToShared<F>> next) {
    return {std::move(next)};
}

// ---------------------------------------------------------------------------
// Client side: acquire / release

template <class F, class K>
struct AcquireTerm {
    using is_session_term = void;
    SharedChannel<LinearToShared<F>> shared;
    K cont;

    template <class C, class A>
    PartialSession<C, A> elaborate() && {
        using Applied = shared_applied_t<F>;
        using Lens = length_t<C>;
        using Next = push_back_t<C, Applied>;
        if constexpr (!std::is_invocable_v<K&, Lens>) {
            static_assert(dependent_false<K>,
                          "acquire_shared_session: continuation must accept the lens of the acquired channel");
            return detail::ill_typed<C, A>();
        } else {
            return detail::make_session<C, A>(
                [shared = std::optional(std::move(shared)), cont = detail::Tracked<K>(std::move(cont))](
                    endpoints_t<C> ctx, Sender<A> offer) mutable -> Step {
                    auto [tx, rx] = make_channel<Applied>();
                    auto [granted_tx, granted_rx] = detail::one_shot<std::uint64_t>();
                    detail::SharedAccess::queue(*shared)->push({std::move(tx), std::move(granted_tx)});
                    shared.reset();
                    const auto serial = granted_rx.recv();
                    instrument::emit(instrument::EventKind::Acquire, serial);
                    auto joined =
                        append_context<C, Cons<Applied, Nil>>::join(std::move(ctx), {std::move(rx), std::tuple<>{}});
                    PartialSession<Next, A> next = cont(Lens{});
                    return detail::continue_with(std::move(next), std::move(joined), std::move(offer));
                });
        }
    }
};

/// Wait for exclusive access to the shared process, then bind its critical
/// section channel at the end of the context.
template <class F, class K>
AcquireTerm<F, std::decay_t<K>> acquire_shared_session(SharedChannel<LinearToShared<F>> shared, K&& cont) {
    return {std::move(shared), std::forward<K>(cont)};
}

template <class T, class K>
    requires(!is_shared_channel_v<std::remove_cvref_t<T>>)
void acquire_shared_session(T&&, K&&) {
    static_assert(dependent_false<T>,
                  "acquire_shared_session: first argument must be a SharedChannel<LinearToShared<F>>");
}

template <class T>
inline constexpr bool is_release_point_v = false;
template <class F>
inline constexpr bool is_release_point_v<SharedToLinear<F>> = true;

template <class N, class K>
struct ReleaseTerm {
    using is_session_term = void;
    K cont;

    template <class C, class A>
    PartialSession<C, A> elaborate() && {
        if constexpr (!detail::check_live_slot<N, C>()) {
            return detail::ill_typed<C, A>();
        } else if constexpr (!is_release_point_v<slot_at_t<N, C>>) {
            static_assert(dependent_false<N>,
                          "release_shared_session: the channel at the lens has not reached its release point "
                          "SharedToLinear<F>");
            return detail::ill_typed<C, A>();
        } else {
            using P = slot_at_t<N, C>;
            using lens = context_lens<N, C, P, Empty>;
            PartialSession<typename lens::target, A> next = std::move(cont);
            return detail::make_session<C, A>(
                [next = std::move(next)](endpoints_t<C> ctx, Sender<A> offer) mutable -> Step {
                    auto release = lens::take(ctx).recv();
                    instrument::emit(instrument::EventKind::Release, release.serial);
                    release.ack.send({});
                    return detail::continue_with(std::move(next), lens::put(std::move(ctx), Unit{}),
                                                 std::move(offer));
                });
        }
    }
};

/// Release the critical section held at lens n; the slot becomes Empty.
template <class N, SessionTerm K>
ReleaseTerm<N, std::decay_t<K>> release_shared_session(N, K&& cont) {
    return {std::forward<K>(cont)};
}

} // namespace sessia
