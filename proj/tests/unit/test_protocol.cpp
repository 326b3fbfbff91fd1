// Layout audit: for every protocol constructor, decompose its payload with
// structured bindings and count where each continuation endpoint appears.

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <tuple>
#include <type_traits>
#include <variant>

#include "sessia/sessia.hpp"

using namespace sessia;

namespace {

struct Any {
    template <class U>
    operator U() const;
};

template <class T, class... Args>
concept BraceInit = requires { T{std::declval<Args>()...}; };

template <class T>
constexpr std::size_t arity() {
    if constexpr (BraceInit<T, Any, Any, Any>) return 3;
    else if constexpr (BraceInit<T, Any, Any>) return 2;
    else if constexpr (BraceInit<T, Any>) return 1;
    else return 0;
}

template <class T>
auto field_list(T& t) {
    constexpr auto n = arity<T>();
    if constexpr (n == 0) {
        return std::type_identity<std::tuple<>>{};
    } else if constexpr (n == 1) {
        auto& [a] = t;
        return std::type_identity<std::tuple<std::remove_cvref_t<decltype(a)>>>{};
    } else if constexpr (n == 2) {
        auto& [a, b] = t;
        return std::type_identity<std::tuple<std::remove_cvref_t<decltype(a)>, std::remove_cvref_t<decltype(b)>>>{};
    } else {
        auto& [a, b, c] = t;
        return std::type_identity<std::tuple<std::remove_cvref_t<decltype(a)>, std::remove_cvref_t<decltype(b)>,
                                             std::remove_cvref_t<decltype(c)>>>{};
    }
}

template <class T>
using fields_t = typename decltype(field_list(std::declval<T&>()))::type;

template <class X>
struct handle_message {
    using type = void;
};
template <class X>
struct handle_message<detail::OneShotSender<X>> {
    using type = X;
};

template <class Target, class T>
constexpr int count_in(int depth);

template <class Target, class Tuple>
struct count_fields;
template <class Target, class... Fs>
struct count_fields<Target, std::tuple<Fs...>> {
    static constexpr int at([[maybe_unused]] int depth) { return (0 + ... + count_in<Target, Fs>(depth)); }
};

template <class Target, class... Alts>
constexpr int count_variant(std::type_identity<std::variant<Alts...>>) {
    return (0 + ... + (std::is_same_v<Target, Alts> ? 1 : 0));
}

// Occurrences of Target as a field of T, as an alternative of a variant
// field, or (one level down) inside the message carried by an outbound
// reply handle.
template <class Target, class T>
constexpr int count_in([[maybe_unused]] int depth) {
    if constexpr (std::is_same_v<T, Target>) {
        return 1;
    } else if constexpr (requires { count_variant<Target>(std::type_identity<T>{}); }) {
        return count_variant<Target>(std::type_identity<T>{});
    } else if constexpr (!std::is_void_v<typename handle_message<T>::type> && std::is_aggregate_v<typename handle_message<T>::type>) {
        return depth == 0 ? count_fields<Target, fields_t<typename handle_message<T>::type>>::at(1) : 0;
    } else {
        return 0;
    }
}

template <class Target, class P>
constexpr int occurrences() {
    return count_fields<Target, fields_t<payload_t<P>>>::at(0);
}

std::string squash(std::string s) {
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    return s;
}

using T = long;
using A = SendValue<int, End>;
using B = ReceiveValue<char, End>;

}  // namespace

TEST(ProtocolLayout, EndCarriesNoContinuation) {
    EXPECT_EQ(arity<payload_t<End>>(), 0u);
    EXPECT_EQ(payload_layout<End>(), "termination signal");
}

TEST(ProtocolLayout, SendValueIsDirectPair) {
    using P = SendValue<T, A>;
    EXPECT_EQ(arity<payload_t<P>>(), 2u);
    EXPECT_EQ((occurrences<T, P>()), 1);
    EXPECT_EQ((occurrences<Receiver<A>, P>()), 1);
    EXPECT_EQ((occurrences<Sender<A>, P>()), 0);
    EXPECT_EQ(squash(payload_layout<P>()), squash("( T, Receiver < A > )"));
}

TEST(ProtocolLayout, ReceiveValueNestsOneReplyHandle) {
    using P = ReceiveValue<T, A>;
    EXPECT_EQ(arity<payload_t<P>>(), 1u);
    EXPECT_EQ((occurrences<T, P>()), 1);
    EXPECT_EQ((occurrences<Sender<A>, P>()), 1);
    EXPECT_EQ((occurrences<Receiver<A>, P>()), 0);
    EXPECT_EQ(squash(payload_layout<P>()), squash("Sender < ( T, Sender < A > ) >"));
}

TEST(ProtocolLayout, ReceiveChannelRepliesWithClientChannel) {
    using P = ReceiveChannel<A, B>;
    EXPECT_EQ(arity<payload_t<P>>(), 1u);
    EXPECT_EQ((occurrences<Receiver<A>, P>()), 1);
    EXPECT_EQ((occurrences<Sender<B>, P>()), 1);
    EXPECT_EQ((occurrences<Sender<A>, P>()), 0);
}

TEST(ProtocolLayout, SendChannelSendsTwoClientEndpoints) {
    using P = SendChannel<A, B>;
    EXPECT_EQ(arity<payload_t<P>>(), 2u);
    EXPECT_EQ((occurrences<Receiver<A>, P>()), 1);
    EXPECT_EQ((occurrences<Receiver<B>, P>()), 1);
}

TEST(ProtocolLayout, ExternalChoiceRepliesWithExactlyOneBranchHandle) {
    using P = ExternalChoice<A, B>;
    EXPECT_EQ(arity<payload_t<P>>(), 1u);
    EXPECT_EQ((occurrences<Sender<A>, P>()), 1);
    EXPECT_EQ((occurrences<Sender<B>, P>()), 1);
    // Both handles live in one variant, so a reply carries one of them.
    using Reply = BranchReply<A, B>;
    EXPECT_EQ(arity<Reply>(), 1u);
    EXPECT_TRUE((std::is_same_v<decltype(Reply::chosen), std::variant<Sender<A>, Sender<B>>>));
}

TEST(ProtocolLayout, InternalChoiceIsTaggedUnionOfClientHandles) {
    using P = InternalChoice<A, B>;
    EXPECT_EQ(arity<payload_t<P>>(), 1u);
    EXPECT_TRUE((std::is_same_v<decltype(payload_t<P>::chosen), std::variant<Receiver<A>, Receiver<B>>>));
    EXPECT_EQ((occurrences<Receiver<A>, P>()), 1);
    EXPECT_EQ((occurrences<Receiver<B>, P>()), 1);
}

TEST(ProtocolLayout, FixSharesTheLayoutOfItsUnrolling) {
    using Counter = Fix<SendValue<std::uint64_t, Z>>;
    EXPECT_TRUE((std::is_same_v<payload_t<Counter>, payload_t<SendValue<std::uint64_t, Counter>>>));
}

TEST(ProtocolLayout, ReleaseCarriesNoContinuation) {
    using F = SendValue<std::uint64_t, Z>;
    using P = SharedToLinear<F>;
    EXPECT_EQ(arity<payload_t<P>>(), 2u);
    EXPECT_EQ((occurrences<std::uint64_t, P>()), 1);
}

TEST(ProtocolKinds, EveryConstructorIsAProtocol) {
    static_assert(Protocol<End>);
    static_assert(Protocol<ReceiveValue<T, A>>);
    static_assert(Protocol<SendValue<T, A>>);
    static_assert(Protocol<ReceiveChannel<A, B>>);
    static_assert(Protocol<SendChannel<A, B>>);
    static_assert(Protocol<ExternalChoice<A, B>>);
    static_assert(Protocol<InternalChoice<A, B>>);
    static_assert(Protocol<Fix<A>>);
    static_assert(!Protocol<int>);
    static_assert(!Protocol<Empty>);
    static_assert(Slot<Empty>);
    static_assert(SharedProtocol<LinearToShared<SendValue<int, Z>>>);
    static_assert(!SharedProtocol<SendValue<int, Z>>);
    SUCCEED();
}
