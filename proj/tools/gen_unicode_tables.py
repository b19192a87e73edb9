#!/usr/bin/env python3
# Copyright (C) 2026 The capgen authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerates include/capgen/unicode_tables.hpp from Python's unicodedata.

Emits three tables:
  - punctuation ranges (general categories P*)
  - letter ranges (general categories L*)
  - simple lowercase mappings (codepoints whose str.lower() is a single,
    different codepoint)
"""

import sys
import unicodedata

MAX_CP = 0x110000


def ranges_for(pred):
    out = []
    start = None
    for cp in range(MAX_CP):
        if pred(cp):
            if start is None:
                start = cp
        else:
            if start is not None:
                out.append((start, cp - 1))
                start = None
    if start is not None:
        out.append((start, MAX_CP - 1))
    return out


def main(path):
    punct = ranges_for(lambda cp: unicodedata.category(chr(cp)).startswith("P"))
    letters = ranges_for(lambda cp: unicodedata.category(chr(cp)).startswith("L"))

    lower = []
    for cp in range(MAX_CP):
        lo = chr(cp).lower()
        if len(lo) == 1 and ord(lo) != cp:
            lower.append((cp, ord(lo)))

    with open(path, "w", encoding="utf-8") as f:
        w = f.write
        w("// Copyright (C) 2026 The capgen authors\n")
        w("// SPDX-License-Identifier: Apache-2.0\n")
        w("//\n")
        w("// Generated by tools/gen_unicode_tables.py (Unicode %s). Do not edit.\n"
          % unicodedata.unidata_version)
        w("#pragma once\n\n")
        w("#include <cstdint>\n#include <cstddef>\n\n")
        w("namespace capgen::unicode {\n\n")
        w("struct Range { char32_t first; char32_t last; };\n")
        w("struct LowerPair { char32_t from; char32_t to; };\n\n")

        w("inline constexpr Range kPunctRanges[] = {\n")
        for a, b in punct:
            w("    {0x%X, 0x%X},\n" % (a, b))
        w("};\n")
        w("inline constexpr std::size_t kPunctRangeCount = %d;\n\n" % len(punct))

        w("inline constexpr Range kLetterRanges[] = {\n")
        for a, b in letters:
            w("    {0x%X, 0x%X},\n" % (a, b))
        w("};\n")
        w("inline constexpr std::size_t kLetterRangeCount = %d;\n\n" % len(letters))

        w("inline constexpr LowerPair kLowerPairs[] = {\n")
        for a, b in lower:
            w("    {0x%X, 0x%X},\n" % (a, b))
        w("};\n")
        w("inline constexpr std::size_t kLowerPairCount = %d;\n\n" % len(lower))
        w("}  // namespace capgen::unicode\n")

    print("punct ranges: %d, letter ranges: %d, lower pairs: %d"
          % (len(punct), len(letters), len(lower)))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "include/capgen/unicode_tables.hpp")
