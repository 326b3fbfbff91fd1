#pragma once

#include <type_traits>
#include <utility>

#include "sessia/session.hpp"

namespace sessia {

/// X can initialize a T without narrowing.
template <class X, class T>
concept ValueFor = requires(X&& x) { T{std::forward<X>(x)}; };

// ---------------------------------------------------------------------------
// terminate / wait

struct TerminateTerm {
    using is_session_term = void;

    template <class C, class A>
    PartialSession<C, A> elaborate() && {
        if constexpr (!is_end_v<A>) {
            static_assert(dependent_false<A>, "terminate: offered protocol must be End");
            return detail::ill_typed<C, A>();
        } else if constexpr (!EmptyContext<C>) {
            static_assert(dependent_false<C>,
                          "terminate: linear context is not empty (an unconsumed channel would be dropped)");
            return detail::ill_typed<C, A>();
        } else {
            return detail::make_session<C, End>([](endpoints_t<C>, Sender<End> offer) -> Step {
                offer.send(EndSignal{});
                return {};
            });
        }
    }
};

/// Send the termination signal. Only valid once every channel in the linear
/// context has been consumed.
inline TerminateTerm terminate() { return {}; }

template <class N, class K>
struct WaitTerm {
    using is_session_term = void;
    K cont;

    template <class C, class A>
    PartialSession<C, A> elaborate() && {
        if constexpr (!detail::check_live_slot<N, C>()) {
            return detail::ill_typed<C, A>();
        } else if constexpr (!is_end_v<slot_at_t<N, C>>) {
            static_assert(dependent_false<N>, "wait: the channel at the lens must be at End");
            return detail::ill_typed<C, A>();
        } else {
            using lens = context_lens<N, C, End, Empty>;
            PartialSession<typename lens::target, A> next = std::move(cont);
            return detail::make_session<C, A>(
                [next = std::move(next)](endpoints_t<C> ctx, Sender<A> offer) mutable -> Step {
                    lens::take(ctx).recv();
                    return detail::continue_with(std::move(next), lens::put(std::move(ctx), Unit{}),
                                                 std::move(offer));
                });
        }
    }
};

/// Block until the provider at lens n terminates, then continue with its
/// slot emptied.
template <class N, SessionTerm K>
WaitTerm<N, std::decay_t<K>> wait(N, K&& cont) {
    return {std::forward<K>(cont)};
}

// ---------------------------------------------------------------------------
// Values

template <class F>
struct ReceiveValueTerm {
    using is_session_term = void;
    F cont;

    template <class C, class P>
    PartialSession<C, P> elaborate() && {
        if constexpr (!is_receive_value_v<P>) {
            static_assert(dependent_false<P>, "receive_value: offered protocol must be ReceiveValue<T, A>");
            return detail::ill_typed<C, P>();
        } else {
            using T = typename P::value_type;
            using A = typename P::continuation;
            if constexpr (!std::is_invocable_v<F&, T>) {
                static_assert(dependent_false<F>, "receive_value: continuation must accept the received value type");
                return detail::ill_typed<C, P>();
            } else {
                return detail::make_session<C, P>(
                    [cont = detail::Tracked<F>(std::move(cont))](endpoints_t<C> ctx, Sender<P> offer) mutable -> Step {
                        auto [reply_tx, reply_rx] = detail::one_shot<ValueReply<T, A>>();
                        offer.send(ReceiveValuePayload<T, A>{std::move(reply_tx)});
                        auto reply = reply_rx.recv();
                        PartialSession<C, A> next = cont(std::move(reply.value));
                        return detail::continue_with(std::move(next), std::move(ctx), std::move(reply.next));
                    });
            }
        }
    }
};

/// Offer ReceiveValue<T, A>: wait for the client's value and pass it to cont.
template <class F>
ReceiveValueTerm<std::decay_t<F>> receive_value(F&& cont) {
    return {std::forward<F>(cont)};
}

template <class N, class X, class K>
struct SendValueToTerm {
    using is_session_term = void;
    X value;
    K cont;

    template <class C, class B>
    PartialSession<C, B> elaborate() && {
        if constexpr (!detail::check_live_slot<N, C>()) {
            return detail::ill_typed<C, B>();
        } else if constexpr (!is_receive_value_v<slot_at_t<N, C>>) {
            static_assert(dependent_false<N>, "send_value_to: the channel at the lens must be ReceiveValue<T, A>");
            return detail::ill_typed<C, B>();
        } else {
            using P = slot_at_t<N, C>;
            using T = typename P::value_type;
            using A = typename P::continuation;
            if constexpr (!ValueFor<X, T>) {
                static_assert(dependent_false<X>,
                              "send_value_to: value type does not match the T of ReceiveValue<T, A> at the lens");
                return detail::ill_typed<C, B>();
            } else {
                using lens = context_lens<N, C, P, A>;
                PartialSession<typename lens::target, B> next = std::move(cont);
                return detail::make_session<C, B>(
                    [value = T{std::move(value)}, next = std::move(next)](endpoints_t<C> ctx,
                                                                          Sender<B> offer) mutable -> Step {
                        auto request = lens::take(ctx).recv();
                        auto [tx, rx] = make_channel<A>();
                        request.reply.send(ValueReply<T, A>{std::move(value), std::move(tx)});
                        return detail::continue_with(std::move(next), lens::put(std::move(ctx), std::move(rx)),
                                                     std::move(offer));
                    });
            }
        }
    }
};

/// Send x to the provider at lens n, whose slot steps from
/// ReceiveValue<T, A> to A.
template <class N, class X, SessionTerm K>
SendValueToTerm<N, std::decay_t<X>, std::decay_t<K>> send_value_to(N, X&& x, K&& cont) {
    return {std::forward<X>(x), std::forward<K>(cont)};
}

namespace detail {

template <class C, class P, class Produce>
PartialSession<C, P> send_value_session(Produce produce) {
    using T = typename P::value_type;
    using A = typename P::continuation;
    return make_session<C, P>([produce = std::move(produce)](endpoints_t<C> ctx, Sender<P> offer) mutable -> Step {
        auto [value, cont] = produce();
        PartialSession<C, A> next = std::move(cont);
        auto [tx, rx] = make_channel<A>();
        offer.send(SendValuePayload<T, A>{T{std::move(value)}, std::move(rx)});
        return continue_with(std::move(next), std::move(ctx), std::move(tx));
    });
}

} // namespace detail

template <class X, class K>
struct SendValueTerm {
    using is_session_term = void;
    X value;
    K cont;

    template <class C, class P>
    PartialSession<C, P> elaborate() && {
        if constexpr (!is_send_value_v<P>) {
            static_assert(dependent_false<P>, "send_value: offered protocol must be SendValue<T, A>");
            return detail::ill_typed<C, P>();
        } else if constexpr (!ValueFor<X, typename P::value_type>) {
            static_assert(dependent_false<X>, "send_value: value type does not match the T of SendValue<T, A>");
            return detail::ill_typed<C, P>();
        } else {
            using T = typename P::value_type;
            using A = typename P::continuation;
            PartialSession<C, A> next = std::move(cont);
            return detail::send_value_session<C, P>(
                [value = T{std::move(value)}, next = std::move(next)]() mutable {
                    return std::pair<T, PartialSession<C, A>>{std::move(value), std::move(next)};
                });
        }
    }
};

/// Offer SendValue<T, A>: send x together with the continuation channel.
template <class X, SessionTerm K>
SendValueTerm<std::decay_t<X>, std::decay_t<K>> send_value(X&& x, K&& cont) {
    return {std::forward<X>(x), std::forward<K>(cont)};
}

template <class F>
struct SendValueAsyncTerm {
    using is_session_term = void;
    F produce;

    template <class C, class P>
    PartialSession<C, P> elaborate() && {
        if constexpr (!is_send_value_v<P>) {
            static_assert(dependent_false<P>, "send_value_async: offered protocol must be SendValue<T, A>");
            return detail::ill_typed<C, P>();
        } else if constexpr (!std::is_invocable_v<F&>) {
            static_assert(dependent_false<F>, "send_value_async: producer must be callable with no arguments");
            return detail::ill_typed<C, P>();
        } else {
            using R = std::invoke_result_t<F&>;
            using T = typename P::value_type;
            if constexpr (!ValueFor<std::tuple_element_t<0, R>, T>) {
                static_assert(dependent_false<F>,
                              "send_value_async: produced value type does not match the T of SendValue<T, A>");
                return detail::ill_typed<C, P>();
            } else {
                return detail::send_value_session<C, P>(detail::Tracked<F>(std::move(produce)));
            }
        }
    }
};

/// Like send_value, but the value and continuation come from `produce`,
/// which runs only when the program reaches this step. `produce` returns a
/// pair (value, continuation).
template <class F>
SendValueAsyncTerm<std::decay_t<F>> send_value_async(F&& produce) {
    return {std::forward<F>(produce)};
}

template <class N, class F>
struct ReceiveValueFromTerm {
    using is_session_term = void;
    F cont;

    template <class C, class B>
    PartialSession<C, B> elaborate() && {
        if constexpr (!detail::check_live_slot<N, C>()) {
            return detail::ill_typed<C, B>();
        } else if constexpr (!is_send_value_v<slot_at_t<N, C>>) {
            static_assert(dependent_false<N>, "receive_value_from: the channel at the lens must be SendValue<T, A>");
            return detail::ill_typed<C, B>();
        } else {
            using P = slot_at_t<N, C>;
            using T = typename P::value_type;
            using A = typename P::continuation;
            using lens = context_lens<N, C, P, A>;
            if constexpr (!std::is_invocable_v<F&, T>) {
                static_assert(dependent_false<F>,
                              "receive_value_from: continuation must accept the received value type");
                return detail::ill_typed<C, B>();
            } else {
                return detail::make_session<C, B>(
                    [cont = detail::Tracked<F>(std::move(cont))](endpoints_t<C> ctx, Sender<B> offer) mutable -> Step {
                        auto payload = lens::take(ctx).recv();
                        auto next_ctx = lens::put(std::move(ctx), std::move(payload.next));
                        PartialSession<typename lens::target, B> next = cont(std::move(payload.value));
                        return detail::continue_with(std::move(next), std::move(next_ctx), std::move(offer));
                    });
            }
        }
    }
};

/// Receive a value from the provider at lens n, whose slot steps from
/// SendValue<T, A> to A.
template <class N, class F>
ReceiveValueFromTerm<N, std::decay_t<F>> receive_value_from(N, F&& cont) {
    return {std::forward<F>(cont)};
}

// ---------------------------------------------------------------------------
// Channels

template <class F>
struct ReceiveChannelTerm {
    using is_session_term = void;
    F cont;

    template <class C, class P>
    PartialSession<C, P> elaborate() && {
        if constexpr (!is_receive_channel_v<P>) {
            static_assert(dependent_false<P>, "receive_channel: offered protocol must be ReceiveChannel<A, B>");
            return detail::ill_typed<C, P>();
        } else {
            using A = typename P::channel;
            using B = typename P::continuation;
            using Lens = length_t<C>;
            using Next = push_back_t<C, A>;
            if constexpr (!std::is_invocable_v<F&, Lens>) {
                static_assert(dependent_false<F>,
                              "receive_channel: continuation must accept the lens of the received channel");
                return detail::ill_typed<C, P>();
            } else {
                return detail::make_session<C, P>(
                    [cont = detail::Tracked<F>(std::move(cont))](endpoints_t<C> ctx, Sender<P> offer) mutable -> Step {
                        auto [reply_tx, reply_rx] = detail::one_shot<ChannelReply<A, B>>();
                        offer.send(ReceiveChannelPayload<A, B>{std::move(reply_tx)});
                        auto reply = reply_rx.recv();
                        auto joined = append_context<C, Cons<A, Nil>>::join(
                            std::move(ctx), {std::move(reply.channel), std::tuple<>{}});
                        PartialSession<Next, B> next = cont(Lens{});
                        return detail::continue_with(std::move(next), std::move(joined), std::move(reply.next));
                    });
            }
        }
    }
};

/// Offer ReceiveChannel<A, B>: bind the channel the client sends at the end
/// of the context and hand its lens to cont.
template <class F>
ReceiveChannelTerm<std::decay_t<F>> receive_channel(F&& cont) {
    return {std::forward<F>(cont)};
}

template <class N1, class N2, class K>
struct SendChannelToTerm {
    using is_session_term = void;
    K cont;

    template <class C, class B>
    PartialSession<C, B> elaborate() && {
        if constexpr (!detail::check_live_slot<N2, C>() || !detail::check_live_slot<N1, C>()) {
            return detail::ill_typed<C, B>();
        } else if constexpr (std::is_same_v<N1, N2>) {
            static_assert(dependent_false<N1>, "send_channel_to: a channel cannot be sent to itself");
            return detail::ill_typed<C, B>();
        } else {
            using A1 = slot_at_t<N2, C>;
            using lens2 = context_lens<N2, C, A1, Empty>;
            using C2 = typename lens2::target;
            using P = slot_at_t<N1, C2>;
            if constexpr (!is_receive_channel_v<P>) {
                static_assert(dependent_false<N1>,
                              "send_channel_to: the receiving channel must be ReceiveChannel<A, B>");
                return detail::ill_typed<C, B>();
            } else if constexpr (!std::is_same_v<typename P::channel, A1>) {
                static_assert(dependent_false<N1>,
                              "send_channel_to: the sent channel's protocol differs from the one expected by the receiver");
                return detail::ill_typed<C, B>();
            } else {
                using A2 = typename P::continuation;
                using lens1 = context_lens<N1, C2, P, A2>;
                PartialSession<typename lens1::target, B> next = std::move(cont);
                return detail::make_session<C, B>(
                    [next = std::move(next)](endpoints_t<C> ctx, Sender<B> offer) mutable -> Step {
                        auto sent = lens2::take(ctx);
                        auto ctx2 = lens2::put(std::move(ctx), Unit{});
                        auto request = lens1::take(ctx2).recv();
                        auto [tx, rx] = make_channel<A2>();
                        request.reply.send(ChannelReply<A1, A2>{std::move(sent), std::move(tx)});
                        return detail::continue_with(std::move(next), lens1::put(std::move(ctx2), std::move(rx)),
                                                     std::move(offer));
                    });
            }
        }
    }
};

/// Send the channel at lens n2 to the provider at lens n1, which offers
/// ReceiveChannel<A1, A2>. The slot at n2 becomes Empty and the slot at n1
/// steps to A2.
template <class N1, class N2, SessionTerm K>
SendChannelToTerm<N1, N2, std::decay_t<K>> send_channel_to(N1, N2, K&& cont) {
    return {std::forward<K>(cont)};
}

template <class N, class K>
struct SendChannelFromTerm {
    using is_session_term = void;
    K cont;

    template <class C, class P>
    PartialSession<C, P> elaborate() && {
        if constexpr (!is_send_channel_v<P>) {
            static_assert(dependent_false<P>, "send_channel_from: offered protocol must be SendChannel<A, B>");
            return detail::ill_typed<C, P>();
        } else if constexpr (!detail::check_live_slot<N, C>()) {
            return detail::ill_typed<C, P>();
        } else if constexpr (!std::is_same_v<slot_at_t<N, C>, typename P::channel>) {
            static_assert(dependent_false<N>,
                          "send_channel_from: the channel at the lens does not have the protocol being sent");
            return detail::ill_typed<C, P>();
        } else {
            using A = typename P::channel;
            using B = typename P::continuation;
            using lens = context_lens<N, C, A, Empty>;
            PartialSession<typename lens::target, B> next = std::move(cont);
            return detail::make_session<C, P>(
                [next = std::move(next)](endpoints_t<C> ctx, Sender<P> offer) mutable -> Step {
                    auto sent = lens::take(ctx);
                    auto [tx, rx] = make_channel<B>();
                    offer.send(SendChannelPayload<A, B>{std::move(sent), std::move(rx)});
                    return detail::continue_with(std::move(next), lens::put(std::move(ctx), Unit{}), std::move(tx));
                });
        }
    }
};

/// Offer SendChannel<A, B> by handing the channel at lens n to the client.
template <class N, SessionTerm K>
SendChannelFromTerm<N, std::decay_t<K>> send_channel_from(N, K&& cont) {
    return {std::forward<K>(cont)};
}

template <class N, class F>
struct ReceiveChannelFromTerm {
    using is_session_term = void;
    F cont;

    template <class C, class B>
    PartialSession<C, B> elaborate() && {
        if constexpr (!detail::check_live_slot<N, C>()) {
            return detail::ill_typed<C, B>();
        } else if constexpr (!is_send_channel_v<slot_at_t<N, C>>) {
            static_assert(dependent_false<N>,
                          "receive_channel_from: the channel at the lens must be SendChannel<A, B>");
            return detail::ill_typed<C, B>();
        } else {
            using P = slot_at_t<N, C>;
            using A1 = typename P::channel;
            using A2 = typename P::continuation;
            using lens = context_lens<N, C, P, A2>;
            using C2 = typename lens::target;
            using Lens = length_t<C2>;
            using Next = push_back_t<C2, A1>;
            if constexpr (!std::is_invocable_v<F&, Lens>) {
                static_assert(dependent_false<F>,
                              "receive_channel_from: continuation must accept the lens of the received channel");
                return detail::ill_typed<C, B>();
            } else {
                return detail::make_session<C, B>(
                    [cont = detail::Tracked<F>(std::move(cont))](endpoints_t<C> ctx, Sender<B> offer) mutable -> Step {
                        auto payload = lens::take(ctx).recv();
                        auto ctx2 = lens::put(std::move(ctx), std::move(payload.next));
                        auto joined = append_context<C2, Cons<A1, Nil>>::join(
                            std::move(ctx2), {std::move(payload.channel), std::tuple<>{}});
                        PartialSession<Next, B> next = cont(Lens{});
                        return detail::continue_with(std::move(next), std::move(joined), std::move(offer));
                    });
            }
        }
    }
};

/// Receive a channel from the provider at lens n (SendChannel<A1, A2>). The
/// slot steps to A2 and the received channel is bound at the end of the
/// context.
template <class N, class F>
ReceiveChannelFromTerm<N, std::decay_t<F>> receive_channel_from(N, F&& cont) {
    return {std::forward<F>(cont)};
}

// ---------------------------------------------------------------------------
// apply_channel

/// Run f with a as its received channel.
template <Protocol A, Protocol B>
Session<B> apply_channel(Session<ReceiveChannel<A, B>> f, std::type_identity_t<Session<A>> a) {
    return include_session(std::move(f), [a = std::move(a)](auto chan_f) mutable {
        return include_session(std::move(a), [chan_f](auto chan_a) {
            return send_channel_to(chan_f, chan_a, forward(chan_f));
        });
    });
}

/// apply_channel spelled out with two cuts, send_channel_to and forward.
/// Behaves identically; kept for comparison.
template <Protocol A, Protocol B>
Session<B> apply_channel_by_cut(Session<ReceiveChannel<A, B>> f, std::type_identity_t<Session<A>> a) {
    using F = ReceiveChannel<A, B>;
    PartialSession<Ctx<A, F>, B> body = send_channel_to(S<Z>{}, Z{}, forward(S<Z>{}));
    PartialSession<Ctx<A>, B> with_f = cut(std::move(body), std::move(f));
    return cut(std::move(with_f), std::move(a));
}

} // namespace sessia
