#pragma once

#include <cstddef>

namespace sessia {

// Type-level naturals. Values are empty and trivially copyable so that a
// lens can be handed to user code and used at several steps of a protocol.
//
// Z doubles as the recursion point inside Fix<F> and LinearToShared<F>
// bodies; see recursion.hpp.
struct Z {};

template <class N>
struct S {};

template <class T>
inline constexpr bool is_nat_v = false;
template <>
inline constexpr bool is_nat_v<Z> = true;
template <class N>
inline constexpr bool is_nat_v<S<N>> = is_nat_v<N>;

template <class T>
concept Nat = is_nat_v<T>;

template <Nat N>
inline constexpr std::size_t nat_value = 0;
template <Nat N>
inline constexpr std::size_t nat_value<S<N>> = nat_value<N> + 1;

namespace detail {
template <std::size_t K>
struct make_nat {
    using type = S<typename make_nat<K - 1>::type>;
};
template <>
struct make_nat<0> {
    using type = Z;
};
} // namespace detail

template <std::size_t K>
using nat_t = typename detail::make_nat<K>::type;

} // namespace sessia
