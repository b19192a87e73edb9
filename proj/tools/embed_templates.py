#!/usr/bin/env python3
# Copyright (C) 2026 The capgen authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerates include/capgen/prompts_text.hpp from templates/*.txt so the
compiled-in defaults stay byte-identical to the shipped template files."""

import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
TEMPLATES = [
    ("kContextPrompt", "context_prompt.txt"),
    ("kCaptionPrompt", "caption_prompt.txt"),
    ("kFusionPrompt", "fusion_prompt.txt"),
    ("kTranslatePrompt", "translate_prompt.txt"),
]

DELIM = "CAPGEN_TMPL"


def main():
    out = ROOT / "include" / "capgen" / "prompts_text.hpp"
    with out.open("w", encoding="utf-8", newline="\n") as f:
        f.write("// Copyright (C) 2026 The capgen authors\n")
        f.write("// SPDX-License-Identifier: Apache-2.0\n//\n")
        f.write("// Generated by tools/embed_templates.py from templates/*.txt."
                " Do not edit.\n")
        f.write("#pragma once\n\n")
        f.write("namespace capgen::prompts {\n\n")
        for name, filename in TEMPLATES:
            text = (ROOT / "templates" / filename).read_text(encoding="utf-8")
            assert f"){DELIM}\"" not in text
            f.write(f'inline constexpr const char* {name} =\n')
            f.write(f'    R"{DELIM}({text}){DELIM}";\n\n')
        f.write("}  // namespace capgen::prompts\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
