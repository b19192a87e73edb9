// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace capgen {

/// Malformed input data (bad TSV line, bad template, bad report file).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, long line = -1)
        : std::runtime_error(line >= 0 ? message + " (line " + std::to_string(line) + ")"
                                       : message),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

/// Invalid configuration: unknown language, missing credential, bad stage map.
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A backend call failed after exhausting retries. Carries the attempt log.
class BackendError : public std::runtime_error {
public:
    BackendError(std::string message, std::vector<std::string> attempts = {})
        : std::runtime_error(std::move(message)), attempts_(std::move(attempts)) {}
    const std::vector<std::string>& attempts() const { return attempts_; }

private:
    std::vector<std::string> attempts_;
};

}  // namespace capgen
