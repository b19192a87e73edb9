// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <mutex>

#include "capgen/clock.hpp"

namespace capgen::gateway {

/// Token bucket. acquire() blocks (via the injected clock) until a token is
/// available; requests over budget are delayed, never dropped.
class RateLimiter {
public:
    RateLimiter(double requests_per_second, double burst, Clock& clock)
        : rps_(requests_per_second), capacity_(std::max(burst, 1.0)), clock_(clock) {
        tokens_ = capacity_;
        last_refill_ = clock_.now();
    }

    void acquire() {
        if (rps_ <= 0) return;  // unlimited
        std::unique_lock lock(mu_);
        while (true) {
            refill();
            if (tokens_ >= 1.0) {
                tokens_ -= 1.0;
                return;
            }
            auto deficit = 1.0 - tokens_;
            auto wait = Clock::Duration(static_cast<long long>(deficit / rps_ * 1e6) + 1);
            lock.unlock();
            clock_.sleep_for(wait);
            lock.lock();
        }
    }

private:
    void refill() {
        auto now = clock_.now();
        double elapsed_s = std::chrono::duration<double>(now - last_refill_).count();
        if (elapsed_s > 0) {
            tokens_ = std::min(capacity_, tokens_ + elapsed_s * rps_);
            last_refill_ = now;
        }
    }

    double rps_;
    double capacity_;
    Clock& clock_;
    std::mutex mu_;
    double tokens_ = 0;
    Clock::Duration last_refill_{0};
};

}  // namespace capgen::gateway
