#pragma once

#include <tuple>
#include <type_traits>
#include <utility>

#include "sessia/nat.hpp"
#include "sessia/protocol.hpp"

namespace sessia {

/// A consumed channel position. Slots are never removed from a context, only
/// overwritten with Empty, so lenses into the other positions stay valid.
struct Empty {};

/// Endpoint held for an Empty slot.
struct Unit {
    friend bool operator==(Unit, Unit) = default;
};

template <class T>
inline constexpr bool is_slot_v = is_protocol_v<T>;
template <>
inline constexpr bool is_slot_v<Empty> = true;

template <class T>
concept Slot = is_slot_v<T>;

/// Runtime endpoint stored in the context for a slot. Extended for Lock<F>
/// in shared.hpp.
template <class T>
struct slot_endpoint {
    using type = Receiver<T>;
};
template <>
struct slot_endpoint<Empty> {
    using type = Unit;
};

template <class T>
using endpoint_t = typename slot_endpoint<T>::type;

// ---------------------------------------------------------------------------
// Contexts: Nil | Cons<Slot, Context>.

struct Nil {};

template <class Head, class Tail>
struct Cons {};

template <class T>
inline constexpr bool is_context_v = false;
template <>
inline constexpr bool is_context_v<Nil> = true;
template <class H, class T>
inline constexpr bool is_context_v<Cons<H, T>> = is_slot_v<H> && is_context_v<T>;

template <class T>
concept Context = is_context_v<T>;

namespace detail {
template <class... Slots>
struct make_context {
    using type = Nil;
};
template <class H, class... Rest>
struct make_context<H, Rest...> {
    using type = Cons<H, typename make_context<Rest...>::type>;
};
} // namespace detail

/// Ctx<A, B, C> is shorthand for Cons<A, Cons<B, Cons<C, Nil>>>.
template <class... Slots>
using Ctx = typename detail::make_context<Slots...>::type;

/// Right-nested product of the endpoints of every slot of C.
template <class C>
struct endpoints;
template <>
struct endpoints<Nil> {
    using type = std::tuple<>;
};
template <class H, class T>
struct endpoints<Cons<H, T>> {
    using type = std::pair<endpoint_t<H>, typename endpoints<T>::type>;
};

template <class C>
using endpoints_t = typename endpoints<C>::type;

// ---------------------------------------------------------------------------
// Length.

template <class C>
struct context_length;
template <>
struct context_length<Nil> {
    using type = Z;
};
template <class H, class T>
struct context_length<Cons<H, T>> {
    using type = S<typename context_length<T>::type>;
};

template <Context C>
using length_t = typename context_length<C>::type;

// ---------------------------------------------------------------------------
// Append.

template <class C1, class C2>
struct append_context;

template <class C2>
struct append_context<Nil, C2> {
    using type = C2;

    static endpoints_t<C2> join(std::tuple<>, endpoints_t<C2>&& rest) { return std::move(rest); }
    static std::pair<std::tuple<>, endpoints_t<C2>> split(endpoints_t<C2>&& all) {
        return {std::tuple<>{}, std::move(all)};
    }
};

template <class H, class T, class C2>
struct append_context<Cons<H, T>, C2> {
    using inner = append_context<T, C2>;
    using type = Cons<H, typename inner::type>;

    static endpoints_t<type> join(endpoints_t<Cons<H, T>>&& front, endpoints_t<C2>&& back) {
        return {std::move(front.first), inner::join(std::move(front.second), std::move(back))};
    }
    static std::pair<endpoints_t<Cons<H, T>>, endpoints_t<C2>> split(endpoints_t<type>&& all) {
        auto [front, back] = inner::split(std::move(all.second));
        return {endpoints_t<Cons<H, T>>{std::move(all.first), std::move(front)}, std::move(back)};
    }
};

template <Context C1, Context C2>
using append_t = typename append_context<C1, C2>::type;

/// C1 ++ (A) : the context after binding one new channel at the end.
template <Context C, Slot A>
using push_back_t = append_t<C, Cons<A, Nil>>;

// ---------------------------------------------------------------------------
// Emptiness.

template <class C>
inline constexpr bool is_empty_context_v = false;
template <>
inline constexpr bool is_empty_context_v<Nil> = true;
template <class C>
inline constexpr bool is_empty_context_v<Cons<Empty, C>> = is_empty_context_v<C>;

template <class C>
concept EmptyContext = Context<C> && is_empty_context_v<C>;

namespace detail {
template <class C>
struct empty_endpoints_of;
template <>
struct empty_endpoints_of<Nil> {
    static std::tuple<> make() { return {}; }
};
template <class T>
struct empty_endpoints_of<Cons<Empty, T>> {
    static endpoints_t<Cons<Empty, T>> make() { return {Unit{}, empty_endpoints_of<T>::make()}; }
};
} // namespace detail

template <EmptyContext C>
endpoints_t<C> empty_endpoints() {
    return detail::empty_endpoints_of<C>::make();
}

// ---------------------------------------------------------------------------
// Lenses.

/// Marker returned by slot_at_t for a level past the end of the context.
struct OutOfRange {};

template <class N, class C>
struct slot_at {
    using type = OutOfRange;
};
template <class H, class T>
struct slot_at<Z, Cons<H, T>> {
    using type = H;
};
template <class N, class H, class T>
struct slot_at<S<N>, Cons<H, T>> {
    using type = typename slot_at<N, T>::type;
};

template <class N, class C>
using slot_at_t = typename slot_at<N, C>::type;

template <class C>
struct last_slot {
    using type = OutOfRange;
};
template <class H>
struct last_slot<Cons<H, Nil>> {
    using type = H;
};
template <class H, class T>
    requires(!std::is_same_v<T, Nil>)
struct last_slot<Cons<H, T>> {
    using type = typename last_slot<T>::type;
};

template <class C>
using last_slot_t = typename last_slot<C>::type;

/// context_lens<N, C, A1, A2> exists exactly when the slot at level N of C
/// is A1. It then names the retyped context (target), the context with the
/// slot emptied (deleted), and moves the endpoint in and out.
template <class N, class C, class A1, class A2>
struct context_lens {};

template <class A1, class A2, class C>
struct context_lens<Z, Cons<A1, C>, A1, A2> {
    using target = Cons<A2, C>;
    using deleted = Cons<Empty, C>;

    static endpoint_t<A1> take(endpoints_t<Cons<A1, C>>& e) { return std::move(e.first); }
    static endpoints_t<target> put(endpoints_t<Cons<A1, C>>&& e, endpoint_t<A2> x) {
        return {std::move(x), std::move(e.second)};
    }
};

template <class N, class C, class A1, class A2>
concept ContextLens = requires { typename context_lens<N, C, A1, A2>::target; };

template <class N, class B, class C, class A1, class A2>
    requires ContextLens<N, C, A1, A2>
struct context_lens<S<N>, Cons<B, C>, A1, A2> {
    using inner = context_lens<N, C, A1, A2>;
    using target = Cons<B, typename inner::target>;
    using deleted = Cons<B, typename inner::deleted>;

    static endpoint_t<A1> take(endpoints_t<Cons<B, C>>& e) { return inner::take(e.second); }
    static endpoints_t<target> put(endpoints_t<Cons<B, C>>&& e, endpoint_t<A2> x) {
        return {std::move(e.first), inner::put(std::move(e.second), std::move(x))};
    }
};

template <class N, class C, class A1, class A2>
    requires ContextLens<N, C, A1, A2>
using lens_target_t = typename context_lens<N, C, A1, A2>::target;

template <class N, class C, class A1, class A2>
    requires ContextLens<N, C, A1, A2>
using lens_deleted_t = typename context_lens<N, C, A1, A2>::deleted;

/// Retype whatever sits at level N to A2.
template <class N, class C, class A2>
using retarget_t = lens_target_t<N, C, slot_at_t<N, C>, A2>;

// ---------------------------------------------------------------------------
// Suffix removal, used by cut to recover the left part of a split context.

namespace detail {

template <std::size_t K, class C>
struct take_front;
template <class C>
struct take_front<0, C> {
    using type = Nil;
    using rest = C;
};
template <std::size_t K, class H, class T>
    requires(K > 0)
struct take_front<K, Cons<H, T>> {
    using type = Cons<H, typename take_front<K - 1, T>::type>;
    using rest = typename take_front<K - 1, T>::rest;
};

template <class C4, class C2>
consteval bool has_suffix() {
    constexpr auto n4 = nat_value<length_t<C4>>;
    constexpr auto n2 = nat_value<length_t<C2>>;
    if constexpr (n4 < n2) {
        return false;
    } else {
        return std::is_same_v<typename take_front<n4 - n2, C4>::rest, C2>;
    }
}

} // namespace detail

/// C1 such that C1 ++ C2 == C4, if one exists.
template <class C4, class C2>
concept HasSuffix = Context<C4> && Context<C2> && detail::has_suffix<C4, C2>();

template <class C4, class C2>
    requires HasSuffix<C4, C2>
using strip_suffix_t = typename detail::take_front<nat_value<length_t<C4>> - nat_value<length_t<C2>>, C4>::type;

} // namespace sessia
