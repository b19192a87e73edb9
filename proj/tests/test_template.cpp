// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "capgen/template.hpp"

using namespace capgen;

TEST_CASE("render substitutes placeholders", "[template]") {
    CHECK(templates::render("hello {name}!", {{"name", "world"}}) == "hello world!");
    CHECK(templates::render("{a}{b}", {{"a", "1"}, {"b", "2"}}) == "12");
}

TEST_CASE("values are inserted verbatim, never re-expanded", "[template]") {
    auto out = templates::render("x={v}", {{"v", "{v}"}});
    CHECK(out == "x={v}");
    out = templates::render("cap: {c}", {{"c", "literal {brace"}});
    CHECK(out == "cap: literal {brace");
}

TEST_CASE("unknown or malformed slots pass through", "[template]") {
    CHECK(templates::render("keep {unknown} and { spaced }", {}) ==
          "keep {unknown} and { spaced }");
    CHECK(templates::render("json-ish {\"k\": 1}", {}) == "json-ish {\"k\": 1}");
}

TEST_CASE("render_strict rejects unresolved placeholders", "[template]") {
    CHECK_THROWS_AS(templates::render_strict("{a} {b}", {{"a", "1"}}), ParseError);
    CHECK(templates::render_strict("{a} { not a slot }", {{"a", "1"}}) == "1 { not a slot }");
}
