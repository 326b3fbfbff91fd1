#pragma once

#include <memory>
#include <type_traits>
#include <utility>

#include "sessia/context.hpp"
#include "sessia/protocol.hpp"
#include "sessia/runtime.hpp"

namespace sessia {

template <Context C, Protocol A>
class PartialSession;

/// A closed program offering A.
template <Protocol A>
using Session = PartialSession<Nil, A>;

template <class T>
inline constexpr bool is_partial_session_v = false;
template <class C, class A>
inline constexpr bool is_partial_session_v<PartialSession<C, A>> = true;

/// Anything that can be checked against a judgment (C ⊢ A) and turned into
/// a PartialSession<C, A>. Term constructors return untyped terms; the
/// expected context and protocol flow in from the enclosing typed session,
/// and every rule is checked at that point.
template <class T>
concept SessionTerm = is_partial_session_v<std::remove_cvref_t<T>> ||
                      requires { typename std::remove_cvref_t<T>::is_session_term; };

template <class>
inline constexpr bool dependent_false = false;

namespace detail {

struct SessionAccess;

// Counts a user continuation as built, and as invoked when called. A second
// call is a library bug and is reported through the duplicate counter.
template <class F>
class Tracked {
public:
    explicit Tracked(F f) : fn_(std::move(f)), armed_(true) {
        instrument::detail::bump(instrument::detail::state().continuations_built);
    }
    Tracked(Tracked&& o) noexcept : fn_(std::move(o.fn_)), armed_(std::exchange(o.armed_, false)) {}
    Tracked& operator=(Tracked&&) = delete;

    template <class... Args>
    decltype(auto) operator()(Args&&... args) {
        if (!armed_) {
            instrument::detail::bump(instrument::detail::state().duplicate_invocations);
        }
        armed_ = false;
        instrument::detail::bump(instrument::detail::state().continuations_invoked);
        return fn_(std::forward<Args>(args)...);
    }

private:
    F fn_;
    bool armed_;
};

} // namespace detail

/// The judgment C ⊢ A: a suspended program that, once started, consumes
/// every channel in C and provides A. The executor is private; the only way
/// to run a program is run_session (or, for shared programs,
/// run_shared_session).
template <Context C, Protocol A>
class PartialSession {
public:
    using context = C;
    using offered = A;

    template <SessionTerm T>
        requires(!std::is_same_v<std::remove_cvref_t<T>, PartialSession>)
    PartialSession(T&& term)
        : PartialSession(std::move(term).template elaborate<C, A>()) {}

    PartialSession(PartialSession&&) noexcept = default;
    PartialSession& operator=(PartialSession&&) noexcept = default;
    PartialSession(const PartialSession&) = delete;
    PartialSession& operator=(const PartialSession&) = delete;

    template <class C2, class A2>
    PartialSession<C2, A2> elaborate() && {
        if constexpr (!std::is_same_v<C, C2>) {
            static_assert(dependent_false<C2>,
                          "typed session: linear context does not match the one expected here");
            return PartialSession<C2, A2>::ill_typed();
        } else if constexpr (!std::is_same_v<A, A2>) {
            static_assert(dependent_false<A2>,
                          "typed session: offered protocol does not match the one expected here");
            return PartialSession<C2, A2>::ill_typed();
        } else {
            return std::move(*this);
        }
    }

    // Placeholder used only on paths that have already failed a
    // static_assert, so the compiler reports one error instead of many.
    static PartialSession ill_typed() { return PartialSession(Executor{}); }

private:
    friend struct detail::SessionAccess;

    using Executor = detail::OnceFunction<Step(endpoints_t<C>, Sender<A>)>;

    explicit PartialSession(Executor e) : executor_(std::move(e)) {}

    Executor executor_;
};

namespace detail {

struct SessionAccess {
    template <class C, class A, class F>
    static PartialSession<C, A> make(F&& f) {
        instrument::detail::bump(instrument::detail::state().sessions_built);
        return PartialSession<C, A>(typename PartialSession<C, A>::Executor(std::forward<F>(f)));
    }

    template <class C, class A>
    static Step run(PartialSession<C, A>&& session, endpoints_t<C> ctx, Sender<A> offer) {
        instrument::detail::bump(instrument::detail::state().sessions_run);
        return session.executor_(std::move(ctx), std::move(offer));
    }
};

template <class C, class A, class F>
PartialSession<C, A> make_session(F&& f) {
    return SessionAccess::make<C, A>(std::forward<F>(f));
}

/// Tail-call into a continuation program.
template <class C, class A>
Step continue_with(PartialSession<C, A> session, endpoints_t<C> ctx, Sender<A> offer) {
    return [session = std::move(session), ctx = std::move(ctx), offer = std::move(offer)]() mutable -> Step {
        return SessionAccess::run(std::move(session), std::move(ctx), std::move(offer));
    };
}

/// Start `session` as a new concurrent process and return the client-side
/// endpoint of the channel it provides.
template <class A>
Receiver<A> start_process(PartialSession<Nil, A> session) {
    auto [tx, rx] = make_channel<A>();
    spawn(continue_with(std::move(session), std::tuple<>{}, std::move(tx)));
    return std::move(rx);
}

template <class C, class A>
PartialSession<C, A> ill_typed() {
    return PartialSession<C, A>::ill_typed();
}

// Shared diagnostics for the slot a lens points at. Returns true when the
// slot exists and still holds a live channel.
template <class N, class C>
consteval bool check_live_slot() {
    if constexpr (!Nat<N>) {
        static_assert(dependent_false<N>, "context lens: a lens must be a type-level natural (Z, S<N>)");
        return false;
    } else if constexpr (std::is_same_v<slot_at_t<N, C>, OutOfRange>) {
        static_assert(dependent_false<N>, "context lens: lens is out of range for this linear context");
        return false;
    } else if constexpr (std::is_same_v<slot_at_t<N, C>, Empty>) {
        static_assert(dependent_false<N>,
                      "context lens: the channel at this lens was already consumed (slot is Empty)");
        return false;
    } else {
        return true;
    }
}

template <class C, class A, class T>
PartialSession<C, A> elaborate_as(T&& term) {
    return PartialSession<C, A>(std::forward<T>(term));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Running.

/// Execute a closed program to completion. Blocks the caller until the
/// program's termination signal has been received and every process started
/// on its behalf has finished. An exception escaping user code inside any of
/// those processes is rethrown here.
inline void run_session(Session<End> session) {
    auto scope = std::make_shared<detail::RunScope>();
    auto [tx, rx] = make_channel<End>();
    detail::spawn(detail::continue_with(std::move(session), std::tuple<>{}, std::move(tx)), scope);
    try {
        rx.recv();
    } catch (const ChannelClosed&) {
        scope->fail(std::current_exception());
    }
    scope->wait_idle();
    if (auto e = scope->error()) std::rethrow_exception(e);
}

template <class C, class A>
    requires(!std::is_same_v<PartialSession<C, A>, Session<End>>)
void run_session(PartialSession<C, A>) {
    static_assert(dependent_false<A>,
                  "run_session: only a closed Session<End> (empty context, offering End) can be run");
}

template <SessionTerm T>
    requires(!is_partial_session_v<std::remove_cvref_t<T>>)
void run_session(T&& term) {
    run_session(Session<End>(std::forward<T>(term)));
}

// ---------------------------------------------------------------------------
// forward

template <class N>
struct ForwardTerm {
    using is_session_term = void;

    template <class C, class A>
    PartialSession<C, A> elaborate() && {
        if constexpr (!detail::check_live_slot<N, C>()) {
            return detail::ill_typed<C, A>();
        } else if constexpr (!std::is_same_v<slot_at_t<N, C>, A>) {
            static_assert(dependent_false<A>,
                          "forward: the channel at the lens must have exactly the offered protocol");
            return detail::ill_typed<C, A>();
        } else if constexpr (!EmptyContext<lens_target_t<N, C, A, Empty>>) {
            static_assert(dependent_false<A>,
                          "forward: every other channel in the linear context must already be consumed");
            return detail::ill_typed<C, A>();
        } else {
            using lens = context_lens<N, C, A, Empty>;
            return detail::make_session<C, A>([](endpoints_t<C> ctx, Sender<A> offer) -> Step {
                auto source = lens::take(ctx);
                offer.send(source.recv());
                return {};
            });
        }
    }
};

/// Offer exactly the channel at lens n. Relays its next message to our
/// client, after which the client talks to that channel's provider directly.
template <Nat N>
ForwardTerm<N> forward(N) {
    return {};
}

// ---------------------------------------------------------------------------
// cut

/// Spawn `provider` as a concurrent process and bind its channel as the last
/// slot of `client`'s context. Both arguments are typed sessions; their
/// types fix the split of the resulting context C1 ++ C2.
template <class C3, class B, class C2, class A>
auto cut(PartialSession<C3, B> client, PartialSession<C2, A> provider) {
    if constexpr (!std::is_same_v<last_slot_t<C3>, A>) {
        static_assert(dependent_false<A>,
                      "cut: the client's last context slot must have the protocol offered by the provider");
        return detail::ill_typed<Nil, B>();
    } else {
        using C1 = strip_suffix_t<C3, Cons<A, Nil>>;
        using C4 = append_t<C1, C2>;
        return detail::make_session<C4, B>(
            [client = std::move(client), provider = std::move(provider)](endpoints_t<C4> ctx,
                                                                          Sender<B> offer) mutable -> Step {
                auto [left, right] = append_context<C1, C2>::split(std::move(ctx));
                auto [tx, rx] = make_channel<A>();
                detail::spawn(detail::continue_with(std::move(provider), std::move(right), std::move(tx)));
                auto joined = append_context<C1, Cons<A, Nil>>::join(std::move(left), {std::move(rx), std::tuple<>{}});
                return detail::continue_with(std::move(client), std::move(joined), std::move(offer));
            });
    }
}

template <class C2, class A, class T1, class T2>
struct CutTerm {
    using is_session_term = void;
    T1 client;
    T2 provider;

    template <class C4, class B>
    PartialSession<C4, B> elaborate() && {
        if constexpr (!HasSuffix<C4, C2>) {
            static_assert(dependent_false<C4>,
                          "cut: the provider's context is not a suffix of the expected linear context");
            return detail::ill_typed<C4, B>();
        } else {
            using C1 = strip_suffix_t<C4, C2>;
            return cut(detail::elaborate_as<push_back_t<C1, A>, B>(std::move(client)),
                       detail::elaborate_as<C2, A>(std::move(provider)));
        }
    }
};

/// Term form of cut for untyped arguments: the provider's context C2 and
/// protocol A are given explicitly, the rest is recovered from the
/// expected judgment.
template <Context C2, Protocol A, SessionTerm T1, SessionTerm T2>
CutTerm<C2, A, std::decay_t<T1>, std::decay_t<T2>> cut(T1&& client, T2&& provider) {
    return {std::forward<T1>(client), std::forward<T2>(provider)};
}

// ---------------------------------------------------------------------------
// include_session

template <class A, class F>
struct IncludeTerm {
    using is_session_term = void;
    Session<A> included;
    F cont;

    template <class C, class B>
    PartialSession<C, B> elaborate() && {
        using Next = push_back_t<C, A>;
        using Lens = length_t<C>;
        static_assert(std::is_invocable_v<F&, Lens>,
                      "include_session: continuation must accept the lens of the included channel");
        return detail::make_session<C, B>(
            [included = std::move(included), cont = detail::Tracked<F>(std::move(cont))](
                endpoints_t<C> ctx, Sender<B> offer) mutable -> Step {
                auto rx = detail::start_process(std::move(included));
                auto joined = append_context<C, Cons<A, Nil>>::join(std::move(ctx), {std::move(rx), std::tuple<>{}});
                PartialSession<Next, B> next = cont(Lens{});
                return detail::continue_with(std::move(next), std::move(joined), std::move(offer));
            });
    }
};

/// Start a closed program concurrently and bind its channel at the end of
/// the current context. The continuation receives the new lens, whose level
/// equals the length of the current context.
template <Protocol A, class F>
IncludeTerm<A, std::decay_t<F>> include_session(Session<A> session, F&& cont) {
    return {std::move(session), std::forward<F>(cont)};
}

template <class T, class F>
    requires(!is_partial_session_v<std::remove_cvref_t<T>>)
void include_session(T&&, F&&) {
    static_assert(dependent_false<T>, "include_session: the included program must be a typed Session<A>");
}

} // namespace sessia
