// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <mutex>
#include <thread>
#include <vector>

namespace capgen {

/// Time source abstraction so throttling and backoff are testable with a
/// simulated clock.
class Clock {
public:
    using Duration = std::chrono::microseconds;

    virtual ~Clock() = default;
    virtual Duration now() = 0;
    virtual void sleep_for(Duration d) = 0;
};

class SystemClock final : public Clock {
public:
    Duration now() override {
        return std::chrono::duration_cast<Duration>(
            std::chrono::steady_clock::now().time_since_epoch());
    }
    void sleep_for(Duration d) override { std::this_thread::sleep_for(d); }
};

/// Deterministic clock: time advances only through sleep_for. Records every
/// sleep so tests can assert on pacing.
class ManualClock final : public Clock {
public:
    Duration now() override {
        std::lock_guard lock(mu_);
        return now_;
    }
    void sleep_for(Duration d) override {
        std::lock_guard lock(mu_);
        if (d.count() > 0) {
            now_ += d;
            sleeps_.push_back(d);
        }
    }
    std::vector<Duration> sleeps() const {
        std::lock_guard lock(mu_);
        return sleeps_;
    }

private:
    mutable std::mutex mu_;
    Duration now_{0};
    std::vector<Duration> sleeps_;
};

}  // namespace capgen
