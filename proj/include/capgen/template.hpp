// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
//
// Single-pass `{placeholder}` substitution. Values are inserted verbatim
// and never re-expanded, so braces inside substituted values (or in the
// surrounding text) cannot inject further placeholders.
#pragma once

#include <cctype>
#include <map>
#include <string>
#include <string_view>

#include "capgen/errors.hpp"

namespace capgen::templates {

using Values = std::map<std::string, std::string, std::less<>>;

namespace detail {

// Placeholder names are [a-z0-9_]+ between braces.
inline std::size_t placeholder_end(std::string_view text, std::size_t open) {
    std::size_t i = open + 1;
    while (i < text.size() && (std::islower(static_cast<unsigned char>(text[i])) ||
                               std::isdigit(static_cast<unsigned char>(text[i])) ||
                               text[i] == '_'))
        ++i;
    if (i > open + 1 && i < text.size() && text[i] == '}') return i;
    return std::string_view::npos;
}

}  // namespace detail

/// Replaces each `{name}` whose name appears in `values`; anything else is
/// copied through untouched (including stray braces).
inline std::string render(std::string_view tmpl, const Values& values) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{') {
            std::size_t close = detail::placeholder_end(tmpl, i);
            if (close != std::string_view::npos) {
                std::string_view name = tmpl.substr(i + 1, close - i - 1);
                auto it = values.find(name);
                if (it != values.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
        }
        out.push_back(tmpl[i]);
        ++i;
    }
    return out;
}

/// As render, but any well-formed `{name}` without a supplied value is an
/// error. Used for prompt rendering, where a leftover slot means a bug.
inline std::string render_strict(std::string_view tmpl, const Values& values) {
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{') {
            std::size_t close = detail::placeholder_end(tmpl, i);
            if (close != std::string_view::npos) {
                std::string name(tmpl.substr(i + 1, close - i - 1));
                if (!values.count(name))
                    throw ParseError("template: no value for placeholder {" + name + "}");
                i = close + 1;
                continue;
            }
        }
        ++i;
    }
    return render(tmpl, values);
}

}  // namespace capgen::templates
