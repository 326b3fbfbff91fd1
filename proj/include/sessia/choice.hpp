#pragma once

#include <stdexcept>
#include <type_traits>
#include <utility>
#include <variant>

#include "sessia/session.hpp"

namespace sessia {

/// Branch selectors for choose / offer.
struct Left {
    static constexpr std::size_t index = 0;
};
struct Right {
    static constexpr std::size_t index = 1;
};

inline constexpr Left left{};
inline constexpr Right right{};

template <class T>
concept Side = std::is_same_v<T, Left> || std::is_same_v<T, Right>;

namespace detail {
template <class Sd, class L, class R>
using pick_t = std::conditional_t<std::is_same_v<Sd, Left>, L, R>;
} // namespace detail

// ---------------------------------------------------------------------------
// Branch injection.
//
// offer_choice and case hand their selector a Branch. Its match(on_left,
// on_right) calls exactly one of the two functions, with the injector for
// the branch that was actually selected at runtime. Both functions are
// type-checked. Each must return the Chosen value produced by its injector;
// an injector can be used once.

template <class L, class R>
class Chosen;

template <class L, class R>
class InjectLeft;
template <class L, class R>
class InjectRight;

template <class L, class R>
class Chosen {
public:
    Chosen(Chosen&&) noexcept = default;
    Chosen& operator=(Chosen&&) noexcept = default;

private:
    friend class InjectLeft<L, R>;
    friend class InjectRight<L, R>;
    explicit Chosen(std::variant<L, R> v) : result(std::move(v)) {}
    std::variant<L, R> result;

public:
    std::variant<L, R> take() && { return std::move(result); }
};

namespace detail {
class OneShotFlag {
public:
    OneShotFlag() = default;
    OneShotFlag(OneShotFlag&& o) noexcept : armed_(std::exchange(o.armed_, false)) {}
    OneShotFlag& operator=(OneShotFlag&& o) noexcept {
        armed_ = std::exchange(o.armed_, false);
        return *this;
    }
    void fire() {
        if (!armed_) throw std::logic_error("sessia: branch injector used twice");
        armed_ = false;
    }

private:
    bool armed_ = true;
};
} // namespace detail

template <class L, class R>
class InjectLeft {
public:
    InjectLeft(InjectLeft&&) noexcept = default;

    template <SessionTerm T>
    Chosen<L, R> operator()(T&& cont) {
        flag_.fire();
        return Chosen<L, R>(std::variant<L, R>(std::in_place_index<0>, L(std::forward<T>(cont))));
    }

private:
    template <class, class>
    friend class Branch;
    InjectLeft() = default;
    detail::OneShotFlag flag_;
};

template <class L, class R>
class InjectRight {
public:
    InjectRight(InjectRight&&) noexcept = default;

    template <SessionTerm T>
    Chosen<L, R> operator()(T&& cont) {
        flag_.fire();
        return Chosen<L, R>(std::variant<L, R>(std::in_place_index<1>, R(std::forward<T>(cont))));
    }

private:
    template <class, class>
    friend class Branch;
    InjectRight() = default;
    detail::OneShotFlag flag_;
};

template <class L, class R>
class Branch {
public:
    bool is_left() const noexcept { return left_; }

    template <class FL, class FR>
    Chosen<L, R> match(FL&& on_left, FR&& on_right) {
        static_assert(std::is_invocable_v<FL&, InjectLeft<L, R>>,
                      "choice: the left handler must accept the left injector");
        static_assert(std::is_invocable_v<FR&, InjectRight<L, R>>,
                      "choice: the right handler must accept the right injector");
        if constexpr (std::is_invocable_v<FL&, InjectLeft<L, R>> && std::is_invocable_v<FR&, InjectRight<L, R>>) {
            static_assert(std::is_same_v<std::invoke_result_t<FL&, InjectLeft<L, R>>, Chosen<L, R>>,
                          "choice: the left handler must return the result of its injector (branches do not match)");
            static_assert(std::is_same_v<std::invoke_result_t<FR&, InjectRight<L, R>>, Chosen<L, R>>,
                          "choice: the right handler must return the result of its injector (branches do not match)");
            if (left_) return on_left(InjectLeft<L, R>{});
            return on_right(InjectRight<L, R>{});
        } else {
            throw std::logic_error("unreachable");
        }
    }

private:
    template <class, class, class, class>
    friend struct OfferChoiceExec;
    template <class, class, class, class, class>
    friend struct CaseExec;
    explicit Branch(bool left) : left_(left) {}
    bool left_;
};

// ---------------------------------------------------------------------------
// External choice: provider side.

template <class C, class A, class B, class F>
struct OfferChoiceExec {
    using P = ExternalChoice<A, B>;
    detail::Tracked<F> select;

    Step operator()(endpoints_t<C> ctx, Sender<P> offer) {
        auto [reply_tx, reply_rx] = detail::one_shot<BranchReply<A, B>>();
        offer.send(ExternalChoicePayload<A, B>{std::move(reply_tx)});
        auto reply = reply_rx.recv();
        const bool is_left = reply.chosen.index() == 0;
        Chosen<PartialSession<C, A>, PartialSession<C, B>> chosen = select(Branch<PartialSession<C, A>, PartialSession<C, B>>(is_left));
        auto picked = std::move(chosen).take();
        if (picked.index() != reply.chosen.index())
            throw std::logic_error("sessia: selector returned a branch other than the one chosen by the client");
        if (is_left)
            return detail::continue_with(std::get<0>(std::move(picked)), std::move(ctx),
                                         std::get<0>(std::move(reply.chosen)));
        return detail::continue_with(std::get<1>(std::move(picked)), std::move(ctx),
                                     std::get<1>(std::move(reply.chosen)));
    }
};

template <class F>
struct OfferChoiceTerm {
    using is_session_term = void;
    F select;

    template <class C, class P>
    PartialSession<C, P> elaborate() && {
        if constexpr (!is_external_choice_v<P>) {
            static_assert(dependent_false<P>, "offer_choice: offered protocol must be ExternalChoice<A, B>");
            return detail::ill_typed<C, P>();
        } else {
            using A = typename P::left;
            using B = typename P::right;
            using BranchT = Branch<PartialSession<C, A>, PartialSession<C, B>>;
            if constexpr (!std::is_invocable_v<F&, BranchT>) {
                static_assert(dependent_false<F>, "offer_choice: selector must accept the branch object");
                return detail::ill_typed<C, P>();
            } else {
                return detail::make_session<C, P>(
                    OfferChoiceExec<C, A, B, F>{detail::Tracked<F>(std::move(select))});
            }
        }
    }
};

/// Offer ExternalChoice<A, B>. `select` receives a Branch once the client
/// has picked a side and returns the matching continuation through the
/// injector, e.g.
///   offer_choice([](auto b) { return b.match(
///       [](auto inj) { return inj(left_program); },
///       [](auto inj) { return inj(right_program); }); })
template <class F>
OfferChoiceTerm<std::decay_t<F>> offer_choice(F&& select) {
    return {std::forward<F>(select)};
}

// ---------------------------------------------------------------------------
// External choice: client side.

template <class Sd, class N, class K>
struct ChooseTerm {
    using is_session_term = void;
    K cont;

    template <class C, class B>
    PartialSession<C, B> elaborate() && {
        if constexpr (!detail::check_live_slot<N, C>()) {
            return detail::ill_typed<C, B>();
        } else if constexpr (!is_external_choice_v<slot_at_t<N, C>>) {
            static_assert(dependent_false<N>, "choose: the channel at the lens must be ExternalChoice<A1, A2>");
            return detail::ill_typed<C, B>();
        } else {
            using P = slot_at_t<N, C>;
            using A1 = typename P::left;
            using A2 = typename P::right;
            using Picked = detail::pick_t<Sd, A1, A2>;
            using lens = context_lens<N, C, P, Picked>;
            PartialSession<typename lens::target, B> next = std::move(cont);
            return detail::make_session<C, B>(
                [next = std::move(next)](endpoints_t<C> ctx, Sender<B> offer) mutable -> Step {
                    auto request = lens::take(ctx).recv();
                    auto [tx, rx] = make_channel<Picked>();
                    request.reply.send(
                        BranchReply<A1, A2>{std::variant<Sender<A1>, Sender<A2>>(std::in_place_index<Sd::index>,
                                                                                 std::move(tx))});
                    return detail::continue_with(std::move(next), lens::put(std::move(ctx), std::move(rx)),
                                                 std::move(offer));
                });
        }
    }
};

/// Select a branch of the ExternalChoice at lens n.
template <Side Sd, class N, SessionTerm K>
ChooseTerm<Sd, N, std::decay_t<K>> choose(Sd, N, K&& cont) {
    return {std::forward<K>(cont)};
}

template <class N, SessionTerm K>
ChooseTerm<Left, N, std::decay_t<K>> choose_left(N, K&& cont) {
    return {std::forward<K>(cont)};
}

template <class N, SessionTerm K>
ChooseTerm<Right, N, std::decay_t<K>> choose_right(N, K&& cont) {
    return {std::forward<K>(cont)};
}

// ---------------------------------------------------------------------------
// Internal choice: provider side.

template <class Sd, class K>
struct OfferTerm {
    using is_session_term = void;
    K cont;

    template <class C, class P>
    PartialSession<C, P> elaborate() && {
        if constexpr (!is_internal_choice_v<P>) {
            static_assert(dependent_false<P>, "offer: offered protocol must be InternalChoice<A, B>");
            return detail::ill_typed<C, P>();
        } else {
            using A = typename P::left;
            using B = typename P::right;
            using Picked = detail::pick_t<Sd, A, B>;
            PartialSession<C, Picked> next = std::move(cont);
            return detail::make_session<C, P>(
                [next = std::move(next)](endpoints_t<C> ctx, Sender<P> offer) mutable -> Step {
                    auto [tx, rx] = make_channel<Picked>();
                    offer.send(InternalChoicePayload<A, B>{
                        std::variant<Receiver<A>, Receiver<B>>(std::in_place_index<Sd::index>, std::move(rx))});
                    return detail::continue_with(std::move(next), std::move(ctx), std::move(tx));
                });
        }
    }
};

/// Offer InternalChoice<A, B> by committing to one side.
template <Side Sd, SessionTerm K>
OfferTerm<Sd, std::decay_t<K>> offer(Sd, K&& cont) {
    return {std::forward<K>(cont)};
}

template <SessionTerm K>
OfferTerm<Left, std::decay_t<K>> offer_left(K&& cont) {
    return {std::forward<K>(cont)};
}

template <SessionTerm K>
OfferTerm<Right, std::decay_t<K>> offer_right(K&& cont) {
    return {std::forward<K>(cont)};
}

// ---------------------------------------------------------------------------
// Internal choice: client side.

template <class C1, class N, class B, class F, class P>
struct CaseExec {
    using A1 = typename P::left;
    using A2 = typename P::right;
    using lens_l = context_lens<N, C1, P, A1>;
    using lens_r = context_lens<N, C1, P, A2>;
    using C2 = typename lens_l::target;
    using C3 = typename lens_r::target;
    detail::Tracked<F> select;

    Step operator()(endpoints_t<C1> ctx, Sender<B> offer) {
        auto payload = lens_l::take(ctx).recv();
        const bool is_left = payload.chosen.index() == 0;
        Chosen<PartialSession<C2, B>, PartialSession<C3, B>> chosen =
            select(Branch<PartialSession<C2, B>, PartialSession<C3, B>>(is_left));
        auto picked = std::move(chosen).take();
        if (static_cast<bool>(picked.index() == 0) != is_left)
            throw std::logic_error("sessia: selector returned a branch other than the one chosen by the provider");
        if (is_left)
            return detail::continue_with(std::get<0>(std::move(picked)),
                                         lens_l::put(std::move(ctx), std::get<0>(std::move(payload.chosen))),
                                         std::move(offer));
        return detail::continue_with(std::get<1>(std::move(picked)),
                                     lens_r::put(std::move(ctx), std::get<1>(std::move(payload.chosen))),
                                     std::move(offer));
    }
};

template <class N, class F>
struct CaseTerm {
    using is_session_term = void;
    F select;

    template <class C1, class B>
    PartialSession<C1, B> elaborate() && {
        if constexpr (!detail::check_live_slot<N, C1>()) {
            return detail::ill_typed<C1, B>();
        } else if constexpr (!is_internal_choice_v<slot_at_t<N, C1>>) {
            static_assert(dependent_false<N>, "case: the channel at the lens must be InternalChoice<A1, A2>");
            return detail::ill_typed<C1, B>();
        } else {
            using P = slot_at_t<N, C1>;
            using A1 = typename P::left;
            using A2 = typename P::right;
            using C2 = lens_target_t<N, C1, P, A1>;
            using C3 = lens_target_t<N, C1, P, A2>;
            static_assert(std::is_same_v<lens_deleted_t<N, C1, P, A1>, lens_deleted_t<N, C1, P, A2>>,
                          "case: both branches must eliminate to the same Deleted context");
            using BranchT = Branch<PartialSession<C2, B>, PartialSession<C3, B>>;
            if constexpr (!std::is_invocable_v<F&, BranchT>) {
                static_assert(dependent_false<F>, "case: selector must accept the branch object");
                return detail::ill_typed<C1, B>();
            } else {
                return detail::make_session<C1, B>(CaseExec<C1, N, B, F, P>{detail::Tracked<F>(std::move(select))});
            }
        }
    }
};

/// Branch on the InternalChoice at lens n. `select` receives a Branch as
/// for offer_choice; the left continuation sees the slot as A1, the right
/// one as A2.
template <class N, class F>
CaseTerm<N, std::decay_t<F>> case_of(N, F&& select) {
    return {std::forward<F>(select)};
}

} // namespace sessia
