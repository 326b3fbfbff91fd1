#pragma once

// Exhaustive comparison of the type-level context operations (length,
// append, lens retargeting) against plain list code.
//
// Contexts are drawn from three protocols P0..P2 and encoded as base-5
// digits: 0..2 for the pool, 3 for the retarget protocol P3, 4 for Empty.
// Every context of length <= 5 is checked for length and for every lens
// level 0..5 with every pool protocol as the expected slot type. Every pair
// with combined length <= 6 is checked for append, and pairs with combined
// length <= 5 for lens stability across append.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sessia/context.hpp"

namespace oracle {

using namespace sessia;

using P0 = End;
using P1 = SendValue<int, End>;
using P2 = ReceiveValue<int, End>;
using P3 = ReceiveChannel<End, End>;

template <class T>
inline constexpr int slot_id = -1;
template <>
inline constexpr int slot_id<P0> = 0;
template <>
inline constexpr int slot_id<P1> = 1;
template <>
inline constexpr int slot_id<P2> = 2;
template <>
inline constexpr int slot_id<P3> = 3;
template <>
inline constexpr int slot_id<Empty> = 4;

template <int I>
using pool_t = std::conditional_t<I == 0, P0, std::conditional_t<I == 1, P1, P2>>;

constexpr std::size_t pow3(std::size_t n) { return n == 0 ? 1 : 3 * pow3(n - 1); }

// Context of length Len whose i-th slot is pool digit i of Code.
template <std::size_t Len, std::size_t Code>
struct make_ctx {
    using type = Cons<pool_t<Code % 3>, typename make_ctx<Len - 1, Code / 3>::type>;
};
template <std::size_t Code>
struct make_ctx<0, Code> {
    using type = Nil;
};
template <std::size_t Len, std::size_t Code>
using ctx_t = typename make_ctx<Len, Code>::type;

struct Encoded {
    std::size_t length;
    std::uint64_t code;
    friend bool operator==(const Encoded&, const Encoded&) = default;
};

template <class C>
inline constexpr Encoded encoding{0, 0};
template <class H, class T>
inline constexpr Encoded encoding<Cons<H, T>>{1 + encoding<T>.length,
                                              static_cast<std::uint64_t>(slot_id<H>) + 5 * encoding<T>.code};

// ---- list oracle ---------------------------------------------------------

inline std::vector<int> decode(std::size_t len, std::size_t code) {
    std::vector<int> v;
    for (std::size_t i = 0; i < len; ++i, code /= 3) v.push_back(static_cast<int>(code % 3));
    return v;
}

inline Encoded encode(const std::vector<int>& v) {
    std::uint64_t code = 0;
    for (auto it = v.rbegin(); it != v.rend(); ++it) code = code * 5 + static_cast<std::uint64_t>(*it);
    return {v.size(), code};
}

inline std::vector<int> substitute(std::vector<int> v, std::size_t at, int with) {
    v[at] = with;
    return v;
}

inline std::vector<int> concat(std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// ---- type-level results --------------------------------------------------

constexpr std::size_t max_level = 6;  // levels 0..5

struct LensRow {
    bool exists[3];        // ContextLens<N, C, Pk, Empty> for k = 0..2
    Encoded to_empty;      // retarget to Empty (meaningful if the slot exists)
    Encoded to_p3;         // retarget to P3
    Encoded deleted;       // Deleted context
};

struct CtxRow {
    std::size_t length;
    std::array<LensRow, max_level> lens;
};

template <class N, class C>
constexpr LensRow lens_row() {
    LensRow r{{ContextLens<N, C, P0, Empty>, ContextLens<N, C, P1, Empty>, ContextLens<N, C, P2, Empty>}, {}, {}, {}};
    using A = slot_at_t<N, C>;
    if constexpr (!std::is_same_v<A, OutOfRange>) {
        r.to_empty = encoding<lens_target_t<N, C, A, Empty>>;
        r.to_p3 = encoding<lens_target_t<N, C, A, P3>>;
        r.deleted = encoding<lens_deleted_t<N, C, A, P3>>;
    }
    return r;
}

template <class C, std::size_t... Ns>
constexpr CtxRow ctx_row(std::index_sequence<Ns...>) {
    return {nat_value<length_t<C>>, {lens_row<nat_t<Ns>, C>()...}};
}

template <std::size_t Len, std::size_t... Codes>
constexpr auto ctx_table(std::index_sequence<Codes...>) {
    return std::array<CtxRow, sizeof...(Codes)>{ctx_row<ctx_t<Len, Codes>>(std::make_index_sequence<max_level>{})...};
}

struct AppendRow {
    std::size_t length;
    Encoded appended;
};

template <std::size_t L1, std::size_t L2, std::size_t... Is>
constexpr auto append_table(std::index_sequence<Is...>) {
    constexpr std::size_t n2 = pow3(L2);
    return std::array<AppendRow, sizeof...(Is)>{
        AppendRow{nat_value<length_t<append_t<ctx_t<L1, Is / n2>, ctx_t<L2, Is % n2>>>>,
                  encoding<append_t<ctx_t<L1, Is / n2>, ctx_t<L2, Is % n2>>>}...};
}

// Lens at level N < L1 on C1 ++ C2, retargeted to P3.
template <std::size_t L1, std::size_t L2, std::size_t I, std::size_t... Ns>
constexpr std::array<Encoded, L1> stable_row(std::index_sequence<Ns...>) {
    constexpr std::size_t n2 = pow3(L2);
    using C1 = ctx_t<L1, I / n2>;
    using C = append_t<C1, ctx_t<L2, I % n2>>;
    return {encoding<lens_target_t<nat_t<Ns>, C, slot_at_t<nat_t<Ns>, C1>, P3>>...};
}

template <std::size_t L1, std::size_t L2, std::size_t... Is>
constexpr auto stable_table(std::index_sequence<Is...>) {
    return std::array<std::array<Encoded, L1>, sizeof...(Is)>{
        stable_row<L1, L2, Is>(std::make_index_sequence<L1>{})...};
}

struct Report {
    std::size_t contexts = 0;
    std::size_t checks = 0;
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok && failures.size() < 20) failures.push_back(what);
    }
};

template <std::size_t Len>
void check_contexts(Report& r) {
    static constexpr auto table = ctx_table<Len>(std::make_index_sequence<pow3(Len)>{});
    for (std::size_t code = 0; code < table.size(); ++code) {
        const auto list = decode(Len, code);
        const auto& row = table[code];
        const std::string name = "ctx(len=" + std::to_string(Len) + ",code=" + std::to_string(code) + ")";
        ++r.contexts;
        r.expect(row.length == list.size(), name + " length");
        for (std::size_t n = 0; n < max_level; ++n) {
            const auto& lens = row.lens[n];
            for (int k = 0; k < 3; ++k) {
                const bool expected = n < list.size() && list[n] == k;
                r.expect(lens.exists[k] == expected,
                         name + " lens " + std::to_string(n) + " exists for P" + std::to_string(k));
            }
            if (n < list.size()) {
                r.expect(lens.to_empty == encode(substitute(list, n, 4)), name + " retarget to Empty");
                r.expect(lens.to_p3 == encode(substitute(list, n, 3)), name + " retarget to P3");
                r.expect(lens.deleted == encode(substitute(list, n, 4)), name + " deleted");
            }
        }
    }
}

template <std::size_t L1, std::size_t L2>
void check_append(Report& r) {
    static constexpr auto table = append_table<L1, L2>(std::make_index_sequence<pow3(L1) * pow3(L2)>{});
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto a = decode(L1, i / pow3(L2));
        const auto b = decode(L2, i % pow3(L2));
        const std::string name = "append(" + std::to_string(L1) + "," + std::to_string(L2) + ")#" + std::to_string(i);
        r.expect(table[i].appended == encode(concat(a, b)), name + " contents");
        r.expect(table[i].length == L1 + L2, name + " length is additive");
    }
    if constexpr (L1 > 0 && L1 + L2 <= 5) {
        static constexpr auto stable = stable_table<L1, L2>(std::make_index_sequence<pow3(L1) * pow3(L2)>{});
        for (std::size_t i = 0; i < stable.size(); ++i) {
            const auto a = decode(L1, i / pow3(L2));
            const auto b = decode(L2, i % pow3(L2));
            for (std::size_t n = 0; n < L1; ++n)
                r.expect(stable[i][n] == encode(concat(substitute(a, n, 3), b)),
                         "lens " + std::to_string(n) + " stable across append #" + std::to_string(i));
        }
    }
}

template <std::size_t L1, std::size_t... L2s>
void check_append_row(Report& r, std::index_sequence<L2s...>) {
    (check_append<L1, L2s>(r), ...);
}

template <std::size_t... L1s>
void check_all_appends(Report& r, std::index_sequence<L1s...>) {
    (check_append_row<L1s>(r, std::make_index_sequence<7 - L1s>{}), ...);
}

inline Report run() {
    Report r;
    check_contexts<0>(r);
    check_contexts<1>(r);
    check_contexts<2>(r);
    check_contexts<3>(r);
    check_contexts<4>(r);
    check_contexts<5>(r);
    check_all_appends(r, std::make_index_sequence<7>{});
    return r;
}

}  // namespace oracle
