#pragma once

#include <type_traits>
#include <utility>

#include "sessia/session.hpp"

namespace sessia {

// ---------------------------------------------------------------------------
// Type application.
//
// A recursive protocol is written as a body F in which Z marks the point of
// recursion, e.g. Fix<SendValue<std::uint64_t, Z>>. type_app<F, X> replaces
// that marker by X. Fix<G> and SharedToLinear<G> are closed and are left
// untouched, so only one level of recursion index exists.

template <class F, class X>
struct type_app {};

template <class X>
struct type_app<Z, X> {
    using type = X;
};
template <class X>
struct type_app<End, X> {
    using type = End;
};

template <class F, class X>
concept TypeApp = requires { typename type_app<F, X>::type; };

template <class F, class X>
    requires TypeApp<F, X>
using type_app_t = typename type_app<F, X>::type;

template <class T, class A, class X>
    requires TypeApp<A, X>
struct type_app<ReceiveValue<T, A>, X> {
    using type = ReceiveValue<T, type_app_t<A, X>>;
};
template <class T, class A, class X>
    requires TypeApp<A, X>
struct type_app<SendValue<T, A>, X> {
    using type = SendValue<T, type_app_t<A, X>>;
};
template <class A, class B, class X>
    requires TypeApp<A, X> && TypeApp<B, X>
struct type_app<ReceiveChannel<A, B>, X> {
    using type = ReceiveChannel<type_app_t<A, X>, type_app_t<B, X>>;
};
template <class A, class B, class X>
    requires TypeApp<A, X> && TypeApp<B, X>
struct type_app<SendChannel<A, B>, X> {
    using type = SendChannel<type_app_t<A, X>, type_app_t<B, X>>;
};
template <class A, class B, class X>
    requires TypeApp<A, X> && TypeApp<B, X>
struct type_app<ExternalChoice<A, B>, X> {
    using type = ExternalChoice<type_app_t<A, X>, type_app_t<B, X>>;
};
template <class A, class B, class X>
    requires TypeApp<A, X> && TypeApp<B, X>
struct type_app<InternalChoice<A, B>, X> {
    using type = InternalChoice<type_app_t<A, X>, type_app_t<B, X>>;
};
template <class G, class X>
struct type_app<Fix<G>, X> {
    using type = Fix<G>;
};
template <class G, class X>
struct type_app<SharedToLinear<G>, X> {
    using type = SharedToLinear<G>;
};

/// Iso-recursive fixed point. Fix<F> unrolls to type_app_t<F, Fix<F>>;
/// crossing between the two needs fix_session (provider) or
/// unfix_session_for (client).
template <class F>
struct Fix {
    using body = F;
};

template <class P>
struct unroll;
template <class F>
struct unroll<Fix<F>> {
    using type = type_app_t<F, Fix<F>>;
};

template <class P>
using unroll_t = typename unroll<P>::type;

// A rolled channel has the same wire layout as its unrolling, so rolling and
// unrolling move the same endpoint without sending anything.
template <class F>
struct payload<Fix<F>> {
    using type = payload_t<type_app_t<F, Fix<F>>>;
};

template <class K>
struct FixTerm {
    using is_session_term = void;
    K cont;

    template <class C, class P>
    PartialSession<C, P> elaborate() && {
        if constexpr (!is_fix_v<P>) {
            static_assert(dependent_false<P>, "fix_session: offered protocol must be Fix<F>");
            return detail::ill_typed<C, P>();
        } else {
            PartialSession<C, unroll_t<P>> next = std::move(cont);
            return detail::make_session<C, P>(
                [next = std::move(next)](endpoints_t<C> ctx, Sender<P> offer) mutable -> Step {
                    return detail::continue_with(std::move(next), std::move(ctx), std::move(offer));
                });
        }
    }
};

/// Offer Fix<F> by offering its unrolling.
template <SessionTerm K>
FixTerm<std::decay_t<K>> fix_session(K&& cont) {
    return {std::forward<K>(cont)};
}

template <class N, class K>
struct UnfixTerm {
    using is_session_term = void;
    K cont;

    template <class C, class B>
    PartialSession<C, B> elaborate() && {
        if constexpr (!detail::check_live_slot<N, C>()) {
            return detail::ill_typed<C, B>();
        } else if constexpr (!is_fix_v<slot_at_t<N, C>>) {
            static_assert(dependent_false<N>, "unfix_session_for: the channel at the lens must be Fix<F>");
            return detail::ill_typed<C, B>();
        } else {
            using P = slot_at_t<N, C>;
            using lens = context_lens<N, C, P, unroll_t<P>>;
            PartialSession<typename lens::target, B> next = std::move(cont);
            return detail::make_session<C, B>(
                [next = std::move(next)](endpoints_t<C> ctx, Sender<B> offer) mutable -> Step {
                    auto endpoint = lens::take(ctx);
                    return detail::continue_with(std::move(next), lens::put(std::move(ctx), std::move(endpoint)),
                                                 std::move(offer));
                });
        }
    }
};

/// Unroll the Fix<F> channel at lens n in place.
template <class N, SessionTerm K>
UnfixTerm<N, std::decay_t<K>> unfix_session_for(N, K&& cont) {
    return {std::forward<K>(cont)};
}

} // namespace sessia
