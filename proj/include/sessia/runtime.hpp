#pragma once

#include <condition_variable>
#include <cstdint>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <type_traits>
#include <utility>

#include "sessia/instrument.hpp"

namespace sessia {

/// Thrown by a channel operation whose peer endpoint was dropped without
/// completing the exchange. Seen only when some process died abnormally.
class ChannelClosed : public std::runtime_error {
public:
    ChannelClosed() : std::runtime_error("sessia: peer endpoint dropped before the exchange completed") {}
};

namespace detail {

// Move-only, call-once type-erased function.
template <class Sig>
class OnceFunction;

template <class R, class... Args>
class OnceFunction<R(Args...)> {
    struct Base {
        virtual ~Base() = default;
        virtual R call(Args... args) = 0;
    };
    template <class F>
    struct Impl final : Base {
        F fn;
        explicit Impl(F f) : fn(std::move(f)) {}
        R call(Args... args) override { return std::move(fn)(std::forward<Args>(args)...); }
    };
    std::unique_ptr<Base> impl_;

public:
    OnceFunction() = default;

    template <class F>
        requires(!std::is_same_v<std::remove_cvref_t<F>, OnceFunction>)
    OnceFunction(F f) : impl_(std::make_unique<Impl<F>>(std::move(f))) {}

    OnceFunction(OnceFunction&&) noexcept = default;
    OnceFunction& operator=(OnceFunction&&) noexcept = default;

    explicit operator bool() const noexcept { return static_cast<bool>(impl_); }

    R operator()(Args... args) {
        if (!impl_) throw std::logic_error("sessia: one-shot function invoked twice");
        auto impl = std::move(impl_);
        return impl->call(std::forward<Args>(args)...);
    }
};

} // namespace detail

/// One unit of work of a process. Executing a step performs its channel
/// operations and yields the next step; an empty step means the process is
/// done. Driving steps in a loop keeps stack depth constant across
/// arbitrarily long (including recursive) protocols.
class Step {
    struct Base {
        virtual ~Base() = default;
        virtual Step call() = 0;
    };
    template <class F>
    struct Impl final : Base {
        F fn;
        explicit Impl(F f) : fn(std::move(f)) {}
        Step call() override { return std::move(fn)(); }
    };
    std::unique_ptr<Base> impl_;

public:
    Step() = default;

    template <class F>
        requires(!std::is_same_v<std::remove_cvref_t<F>, Step> && std::is_invocable_r_v<Step, F&&>)
    Step(F f) : impl_(std::make_unique<Impl<F>>(std::move(f))) {}

    Step(Step&&) noexcept = default;
    Step& operator=(Step&&) noexcept = default;

    explicit operator bool() const noexcept { return static_cast<bool>(impl_); }

    Step operator()() {
        auto impl = std::move(impl_);
        return impl->call();
    }
};

inline void drive(Step step) {
    while (step) step = step();
}

namespace detail {

// Bookkeeping shared by every task spawned (transitively) from one run.
class RunScope {
public:
    void enter() {
        std::lock_guard lock(m_);
        ++active_;
    }
    void leave() {
        std::lock_guard lock(m_);
        if (--active_ == 0) cv_.notify_all();
    }
    // Keeps the first error, except that a root cause replaces an earlier
    // ChannelClosed, which is usually just the echo of that cause.
    void fail(std::exception_ptr e) {
        const bool echo = is_channel_closed(e);
        std::lock_guard lock(m_);
        if (!error_ || (error_is_echo_ && !echo)) {
            error_ = std::move(e);
            error_is_echo_ = echo;
        }
        cv_.notify_all();
    }
    void wait_idle() {
        std::unique_lock lock(m_);
        cv_.wait(lock, [&] { return active_ == 0; });
    }
    std::exception_ptr error() {
        std::lock_guard lock(m_);
        return error_;
    }

private:
    static bool is_channel_closed(const std::exception_ptr& e) {
        try {
            std::rethrow_exception(e);
        } catch (const ChannelClosed&) {
            return true;
        } catch (...) {
            return false;
        }
    }

    std::mutex m_;
    std::condition_variable cv_;
    std::size_t active_ = 0;
    std::exception_ptr error_;
    bool error_is_echo_ = false;
};

struct Global {
    std::mutex m;
    std::condition_variable cv;
    std::size_t live = 0;
    std::atomic<std::uint64_t> next_task_id{1};
};

inline Global& global() {
    static Global g;
    return g;
}

inline std::shared_ptr<RunScope>& current_scope() {
    thread_local std::shared_ptr<RunScope> scope;
    return scope;
}

inline std::uint64_t& current_task_id() {
    thread_local std::uint64_t id = 0;
    return id;
}

// The one place where concurrency is introduced. Every process the library
// starts goes through here, so swapping the threading model means touching
// only this function.
inline void spawn(Step step, std::shared_ptr<RunScope> scope) {
    auto& g = global();
    {
        std::lock_guard lock(g.m);
        ++g.live;
    }
    if (scope) scope->enter();
    instrument::detail::bump(instrument::detail::state().tasks_spawned);
    auto id = g.next_task_id.fetch_add(1);
    std::thread([step = std::move(step), scope = std::move(scope), id]() mutable {
        current_scope() = scope;
        current_task_id() = id;
        try {
            drive(std::move(step));
        } catch (...) {
            if (scope) scope->fail(std::current_exception());
        }
        current_scope().reset();
        if (scope) scope->leave();
        auto& g = global();
        std::lock_guard lock(g.m);
        if (--g.live == 0) g.cv.notify_all();
    }).detach();
}

inline void spawn(Step step) { spawn(std::move(step), current_scope()); }

} // namespace detail

namespace runtime {

/// Identifier of the calling task (0 for threads not started by the library).
inline std::uint64_t task_id() { return detail::current_task_id(); }

/// Block until every task the library has spawned has finished.
inline void wait_idle() {
    auto& g = detail::global();
    std::unique_lock lock(g.m);
    g.cv.wait(lock, [&] { return g.live == 0; });
}

} // namespace runtime

namespace detail {

// Rendezvous slot carrying exactly one message. send() returns only once the
// receiver has taken the value, so a send happens-before everything the
// sender does afterwards and after everything the receiver did before.
template <class T>
class OneShot {
public:
    void put(T value) {
        std::unique_lock lock(m_);
        if (receiver_gone_) throw ChannelClosed{};
        value_.emplace(std::move(value));
        cv_.notify_all();
        cv_.wait(lock, [&] { return taken_ || receiver_gone_; });
        if (!taken_) throw ChannelClosed{};
    }

    T take() {
        std::unique_lock lock(m_);
        cv_.wait(lock, [&] { return value_.has_value() || sender_gone_; });
        if (!value_) throw ChannelClosed{};
        T out = std::move(*value_);
        value_.reset();
        taken_ = true;
        cv_.notify_all();
        instrument::detail::bump(instrument::detail::state().endpoints_consumed);
        return out;
    }

    void drop_sender() {
        std::lock_guard lock(m_);
        sender_gone_ = true;
        cv_.notify_all();
    }
    void drop_receiver() {
        std::lock_guard lock(m_);
        receiver_gone_ = true;
        cv_.notify_all();
    }

private:
    std::mutex m_;
    std::condition_variable cv_;
    std::optional<T> value_;
    bool taken_ = false;
    bool sender_gone_ = false;
    bool receiver_gone_ = false;
};

template <class T>
class OneShotSender;
template <class T>
class OneShotReceiver;

template <class T>
std::pair<OneShotSender<T>, OneShotReceiver<T>> one_shot();

template <class T>
class OneShotSender {
public:
    OneShotSender() = default;
    OneShotSender(OneShotSender&& o) noexcept : slot_(std::move(o.slot_)) {}
    OneShotSender& operator=(OneShotSender&& o) noexcept {
        if (this != &o) {
            release();
            slot_ = std::move(o.slot_);
        }
        return *this;
    }
    ~OneShotSender() { release(); }

    explicit operator bool() const noexcept { return static_cast<bool>(slot_); }

    void send(T value) {
        if (!slot_) throw std::logic_error("sessia: send on an empty endpoint");
        auto slot = std::move(slot_);
        try {
            slot->put(std::move(value));
        } catch (...) {
            slot->drop_sender();
            throw;
        }
    }

private:
    friend std::pair<OneShotSender<T>, OneShotReceiver<T>> one_shot<T>();
    explicit OneShotSender(std::shared_ptr<OneShot<T>> s) : slot_(std::move(s)) {}
    void release() {
        if (slot_) {
            slot_->drop_sender();
            slot_.reset();
        }
    }
    std::shared_ptr<OneShot<T>> slot_;
};

template <class T>
class OneShotReceiver {
public:
    OneShotReceiver() = default;
    OneShotReceiver(OneShotReceiver&& o) noexcept : slot_(std::move(o.slot_)) {}
    OneShotReceiver& operator=(OneShotReceiver&& o) noexcept {
        if (this != &o) {
            release();
            slot_ = std::move(o.slot_);
        }
        return *this;
    }
    ~OneShotReceiver() { release(); }

    explicit operator bool() const noexcept { return static_cast<bool>(slot_); }

    T recv() {
        if (!slot_) throw std::logic_error("sessia: receive on an empty endpoint");
        auto slot = std::move(slot_);
        try {
            T out = slot->take();
            slot->drop_receiver();
            return out;
        } catch (...) {
            slot->drop_receiver();
            throw;
        }
    }

private:
    friend std::pair<OneShotSender<T>, OneShotReceiver<T>> one_shot<T>();
    explicit OneShotReceiver(std::shared_ptr<OneShot<T>> s) : slot_(std::move(s)) {}
    void release() {
        if (slot_) {
            slot_->drop_receiver();
            slot_.reset();
        }
    }
    std::shared_ptr<OneShot<T>> slot_;
};

template <class T>
std::pair<OneShotSender<T>, OneShotReceiver<T>> one_shot() {
    auto slot = std::make_shared<OneShot<T>>();
    instrument::detail::bump(instrument::detail::state().endpoints_created);
    return {OneShotSender<T>(slot), OneShotReceiver<T>(slot)};
}

} // namespace detail
} // namespace sessia
