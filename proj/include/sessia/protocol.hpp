#pragma once

#include <concepts>
#include <string>
#include <type_traits>
#include <variant>

#include "sessia/nat.hpp"
#include "sessia/runtime.hpp"

namespace sessia {

/// Values carried by a session move between tasks, so they must be
/// self-contained movable objects.
template <class T>
concept Transferable = std::is_object_v<T> && !std::is_array_v<T> && std::move_constructible<T> &&
                       std::destructible<T> && !std::is_const_v<T>;

template <class P>
inline constexpr bool is_protocol_v = false;

/// Linear session types. Every constructor below opts in, and each
/// continuation position is itself constrained to a Protocol.
template <class P>
concept Protocol = is_protocol_v<P>;

/// Terminate the session.
struct End {};

/// Receive a value of type T, then continue as A.
template <Transferable T, Protocol A>
struct ReceiveValue {
    using value_type = T;
    using continuation = A;
};

/// Send a value of type T, then continue as A.
template <Transferable T, Protocol A>
struct SendValue {
    using value_type = T;
    using continuation = A;
};

/// Receive a channel of protocol A (client side), then continue as B.
template <Protocol A, Protocol B>
struct ReceiveChannel {
    using channel = A;
    using continuation = B;
};

/// Send a channel of protocol A (client side), then continue as B.
template <Protocol A, Protocol B>
struct SendChannel {
    using channel = A;
    using continuation = B;
};

/// The client picks which branch the provider continues with.
template <Protocol A, Protocol B>
struct ExternalChoice {
    using left = A;
    using right = B;
};

/// The provider picks the branch and the client must handle both.
template <Protocol A, Protocol B>
struct InternalChoice {
    using left = A;
    using right = B;
};

template <class F>
struct Fix;
template <class F>
struct SharedToLinear;

template <>
inline constexpr bool is_protocol_v<End> = true;
template <>
inline constexpr bool is_protocol_v<Z> = true;
template <Transferable T, Protocol A>
inline constexpr bool is_protocol_v<ReceiveValue<T, A>> = true;
template <Transferable T, Protocol A>
inline constexpr bool is_protocol_v<SendValue<T, A>> = true;
template <Protocol A, Protocol B>
inline constexpr bool is_protocol_v<ReceiveChannel<A, B>> = true;
template <Protocol A, Protocol B>
inline constexpr bool is_protocol_v<SendChannel<A, B>> = true;
template <Protocol A, Protocol B>
inline constexpr bool is_protocol_v<ExternalChoice<A, B>> = true;
template <Protocol A, Protocol B>
inline constexpr bool is_protocol_v<InternalChoice<A, B>> = true;
template <class F>
inline constexpr bool is_protocol_v<Fix<F>> = true;
template <class F>
inline constexpr bool is_protocol_v<SharedToLinear<F>> = true;

// Shape predicates used by the term constructors to report mismatches.
template <class P>
inline constexpr bool is_end_v = std::is_same_v<P, End>;
template <class P>
inline constexpr bool is_receive_value_v = false;
template <class T, class A>
inline constexpr bool is_receive_value_v<ReceiveValue<T, A>> = true;
template <class P>
inline constexpr bool is_send_value_v = false;
template <class T, class A>
inline constexpr bool is_send_value_v<SendValue<T, A>> = true;
template <class P>
inline constexpr bool is_receive_channel_v = false;
template <class A, class B>
inline constexpr bool is_receive_channel_v<ReceiveChannel<A, B>> = true;
template <class P>
inline constexpr bool is_send_channel_v = false;
template <class A, class B>
inline constexpr bool is_send_channel_v<SendChannel<A, B>> = true;
template <class P>
inline constexpr bool is_external_choice_v = false;
template <class A, class B>
inline constexpr bool is_external_choice_v<ExternalChoice<A, B>> = true;
template <class P>
inline constexpr bool is_internal_choice_v = false;
template <class A, class B>
inline constexpr bool is_internal_choice_v<InternalChoice<A, B>> = true;
template <class P>
inline constexpr bool is_fix_v = false;
template <class F>
inline constexpr bool is_fix_v<Fix<F>> = true;

// ---------------------------------------------------------------------------
// Wire layouts.
//
// Each step of a session is one rendezvous channel whose sending end is held
// by the provider and whose receiving end is held by the client. When the
// provider has to *receive* at a step, the payload it sends is itself a
// sending endpoint the client uses to reply (polarity reversal).

template <class P>
struct payload;

template <class P>
using payload_t = typename payload<P>::type;

/// Provider-side endpoint of a step channel of protocol P.
template <class P>
using Sender = detail::OneShotSender<payload_t<P>>;

/// Client-side endpoint of a step channel of protocol P.
template <class P>
using Receiver = detail::OneShotReceiver<payload_t<P>>;

template <class P>
std::pair<Sender<P>, Receiver<P>> make_channel() {
    return detail::one_shot<payload_t<P>>();
}

struct EndSignal {
    static constexpr const char* layout = "termination signal";
};

template <class T, class A>
struct ValueReply {
    T value;
    Sender<A> next;
};

template <class T, class A>
struct ReceiveValuePayload {
    static constexpr const char* layout = "Sender<(T, Sender<A>)>";
    detail::OneShotSender<ValueReply<T, A>> reply;
};

template <class T, class A>
struct SendValuePayload {
    static constexpr const char* layout = "(T, Receiver<A>)";
    T value;
    Receiver<A> next;
};

template <class A, class B>
struct ChannelReply {
    Receiver<A> channel;
    Sender<B> next;
};

template <class A, class B>
struct ReceiveChannelPayload {
    static constexpr const char* layout = "Sender<(Receiver<A>, Sender<B>)>";
    detail::OneShotSender<ChannelReply<A, B>> reply;
};

template <class A, class B>
struct SendChannelPayload {
    static constexpr const char* layout = "(Receiver<A>, Receiver<B>)";
    Receiver<A> channel;
    Receiver<B> next;
};

/// The client's selection: the variant index is the branch tag
/// (0 = left, 1 = right) and the alternative is the fresh provider-side
/// endpoint for that branch.
template <class A, class B>
struct BranchReply {
    std::variant<Sender<A>, Sender<B>> chosen;
};

template <class A, class B>
struct ExternalChoicePayload {
    static constexpr const char* layout = "Sender<(Left, Sender<A>) | (Right, Sender<B>)>";
    detail::OneShotSender<BranchReply<A, B>> reply;
};

template <class A, class B>
struct InternalChoicePayload {
    static constexpr const char* layout = "Left(Receiver<A>) | Right(Receiver<B>)";
    std::variant<Receiver<A>, Receiver<B>> chosen;
};

template <>
struct payload<End> {
    using type = EndSignal;
};
template <class T, class A>
struct payload<ReceiveValue<T, A>> {
    using type = ReceiveValuePayload<T, A>;
};
template <class T, class A>
struct payload<SendValue<T, A>> {
    using type = SendValuePayload<T, A>;
};
template <class A, class B>
struct payload<ReceiveChannel<A, B>> {
    using type = ReceiveChannelPayload<A, B>;
};
template <class A, class B>
struct payload<SendChannel<A, B>> {
    using type = SendChannelPayload<A, B>;
};
template <class A, class B>
struct payload<ExternalChoice<A, B>> {
    using type = ExternalChoicePayload<A, B>;
};
template <class A, class B>
struct payload<InternalChoice<A, B>> {
    using type = InternalChoicePayload<A, B>;
};

/// Human-readable wire layout of one message of protocol P.
template <Protocol P>
std::string payload_layout() {
    return payload_t<P>::layout;
}

} // namespace sessia
