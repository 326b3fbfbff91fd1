#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "sessia/demos/shared_counter.hpp"
#include "sessia/sessia.hpp"
#include "support/harness.hpp"

using namespace sessia;
using namespace std::chrono_literals;
using u64 = std::uint64_t;

namespace {

struct Interval {
    std::chrono::steady_clock::time_point acquired, released;
};

// ACQ..REL interval per critical section serial, from a transcript.
std::map<u64, Interval> sections(const demos::Transcript& t) {
    std::map<u64, Interval> out;
    for (const auto& e : t.events()) {
        if (e.kind == demos::EventKind::Acq) out[std::stoull(e.value)].acquired = e.at;
        if (e.kind == demos::EventKind::Rel) out[std::stoull(e.value)].released = e.at;
    }
    return out;
}

bool pairwise_disjoint(std::map<u64, Interval> by_serial) {
    std::vector<Interval> v;
    for (auto& [serial, iv] : by_serial) v.push_back(iv);
    std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.acquired < b.acquired; });
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].released < v[i].acquired) return false;
        if (i + 1 < v.size() && v[i + 1].acquired < v[i].released) return false;
    }
    return true;
}

// Fetch-and-add: send an increment, receive the new total.
using AdderBody = ReceiveValue<u64, SendValue<u64, Z>>;
using Adder = LinearToShared<AdderBody>;

SharedSession<Adder> adder(u64 total) {
    return accept_shared_session([total] {
        return receive_value([total](u64 inc) {
            std::this_thread::sleep_for(2ms);  // widen the window for a lost update
            return send_value(total + inc, detach_shared_session(adder(total + inc)));
        });
    });
}

Session<End> add(SharedChannel<Adder> shared, u64 inc, u64* seen) {
    return acquire_shared_session(std::move(shared), [inc, seen](auto c) {
        return send_value_to(c, inc, receive_value_from(c, [seen, c](u64 total) {
                                 *seen = total;
                                 return release_shared_session(c, terminate());
                             }));
    });
}

}  // namespace

TEST(SharedTypes, EquiSynchronizingBodies) {
    static_assert(EquiSynchronizing<SendValue<u64, Z>>);
    static_assert(EquiSynchronizing<ReceiveValue<int, SendValue<u64, Z>>>);
    static_assert(EquiSynchronizing<ExternalChoice<SendValue<u64, Z>, ReceiveValue<int, Z>>>);
    static_assert(!EquiSynchronizing<SendValue<u64, End>>);
    static_assert(!EquiSynchronizing<ExternalChoice<SendValue<u64, Z>, End>>);
    static_assert(!EquiSynchronizing<End>);
    static_assert(std::is_same_v<shared_applied_t<AdderBody>, ReceiveValue<u64, SendValue<u64, SharedToLinear<AdderBody>>>>);
    SUCCEED();
}

TEST(SharedCounter, ClientsReceiveDistinctValuesInDisjointSections) {
    for (std::size_t clients : {1u, 2u, 3u, 8u}) {
        for (int rep = 0; rep < 10; ++rep) {
            demos::Transcript t;
            harness::within(5s, [&] { demos::run_shared_counter(t, clients); });
            std::multiset<std::string> recv;
            for (const auto& e : t.events())
                if (e.kind == demos::EventKind::Recv) recv.insert(e.value);
            std::multiset<std::string> expected;
            for (std::size_t i = 0; i < clients; ++i) expected.insert(std::to_string(i));
            ASSERT_EQ(recv, expected);
            const auto s = sections(t);
            ASSERT_EQ(s.size(), clients);
            ASSERT_TRUE(pairwise_disjoint(s));
        }
    }
}

TEST(SharedCounter, TranscriptIsReproducible) {
    std::vector<std::string> expected;
    for (int i = 0; i < 8; ++i)
        for (const char* k : {"ACQ\t", "RECV\t", "REL\t"}) expected.push_back(k + std::to_string(i));
    for (int rep = 0; rep < 20; ++rep) {
        demos::Transcript t;
        harness::within(5s, [&] { demos::run_shared_counter(t, 8); });
        ASSERT_EQ(t.lines(), expected);
    }
}

TEST(SharedCounter, CountersBalance) {
    instrument::reset();
    demos::Transcript t;
    harness::within(5s, [&] { demos::run_shared_counter(t, 4); });
    const auto c = harness::settle();
    EXPECT_TRUE(harness::conservation(c).ok) << harness::conservation(c).detail;
}

TEST(SharedAdder, NoUpdateIsLost) {
    constexpr std::size_t K = 6;
    demos::Transcript t;
    std::vector<u64> seen(K, 0);
    harness::within(10s, [&] {
        demos::RecordSharedEvents hook(t);
        {
            auto shared = run_shared_session(adder(0));
            std::vector<std::thread> threads;
            for (std::size_t i = 0; i < K; ++i)
                threads.emplace_back([&, i, c = shared.clone()]() mutable { run_session(add(std::move(c), i + 1, &seen[i])); });
            for (auto& th : threads) th.join();
        }
        runtime::wait_idle();
    });
    // Sorted totals must step by each client's own increment exactly once.
    std::vector<std::pair<u64, u64>> by_total;
    for (std::size_t i = 0; i < K; ++i) by_total.push_back({seen[i], i + 1});
    std::sort(by_total.begin(), by_total.end());
    u64 previous = 0;
    for (auto [total, inc] : by_total) {
        EXPECT_EQ(total - previous, inc);
        previous = total;
    }
    EXPECT_EQ(previous, K * (K + 1) / 2);
    EXPECT_TRUE(pairwise_disjoint(sections(t)));
}

TEST(SharedChannel, CloneOutlivesOriginal) {
    demos::Transcript t;
    harness::within(5s, [&] {
        std::optional<SharedChannel<demos::SharedCounter>> original = run_shared_session(demos::shared_counter_producer(10));
        auto copy = original->clone();
        original.reset();
        run_session(demos::shared_counter_client(copy, &t));
        run_session(demos::shared_counter_client(std::move(copy), &t));
        runtime::wait_idle();
    });
    EXPECT_EQ(t.lines(), (std::vector<std::string>{"RECV\t10", "RECV\t11"}));
}

TEST(SharedChannel, ZeroClientsStopsCleanly) {
    harness::within(5s, [&] {
        { auto unused = run_shared_session(demos::shared_counter_producer(0)); }
        runtime::wait_idle();
    });
}

TEST(SharedChannel, ReleaseLetsTheNextClientIn) {
    // The first client holds the section for a while; the second, queued
    // behind it, can only acquire after the first one's release.
    demos::Transcript t;
    harness::within(5s, [&] {
        demos::RecordSharedEvents hook(t);
        {
            auto shared = run_shared_session(demos::shared_counter_producer(0));
            Session<End> slow = acquire_shared_session(shared.clone(), [&t](auto c) {
                return receive_value_from(c, [&t, c](u64 v) {
                    t.record(demos::EventKind::Recv, std::to_string(v));
                    std::this_thread::sleep_for(30ms);
                    return release_shared_session(c, terminate());
                });
            });
            std::thread first([&] { run_session(std::move(slow)); });
            while (sections(t).empty()) std::this_thread::sleep_for(1ms);
            run_session(demos::shared_counter_client(shared.clone(), &t));
            first.join();
        }
        runtime::wait_idle();
    });
    EXPECT_EQ(t.lines(), (std::vector<std::string>{"ACQ\t0", "RECV\t0", "REL\t0", "ACQ\t1", "RECV\t1", "REL\t1"}));
    const auto s = sections(t);
    EXPECT_GE(s.at(1).acquired, s.at(0).released);
}
