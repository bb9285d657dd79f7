#!/usr/bin/env python3
"""Regenerate src/emosent/tokenizer/_emoji_data.py.

Enumerates every codepoint carrying the Extended_Pictographic property via the
third-party `regex` package (which ships its own Unicode tables, independent of
the running CPython's unicodedata), compresses the set into ranges, and writes
the vendored module. Run only when bumping the Unicode version; the generated
file is committed so the package has no runtime dependency on `regex`.
"""

import sys
from pathlib import Path

import regex

UNICODE_VERSION = "17.0.0"  # per the regex package's documented support
OUT = Path(__file__).resolve().parent.parent / "src" / "emosent" / "tokenizer" / "_emoji_data.py"


def main() -> None:
    pat = regex.compile(r"\p{Extended_Pictographic}")
    codepoints = [cp for cp in range(0x110000) if pat.match(chr(cp))]
    if not codepoints:
        sys.exit("regex package returned no Extended_Pictographic codepoints")

    ranges = []
    start = prev = codepoints[0]
    for cp in codepoints[1:]:
        if cp == prev + 1:
            prev = cp
        else:
            ranges.append((start, prev))
            start = prev = cp
    ranges.append((start, prev))

    lines = [
        '"""Vendored Unicode emoji property data. Generated by tools/gen_emoji_table.py; do not edit."""',
        "",
        f'UNICODE_VERSION = "{UNICODE_VERSION}"',
        f'GENERATOR = "regex {regex.__version__}"',
        "",
        "# Inclusive (start, end) codepoint ranges with Extended_Pictographic.",
        "EXTENDED_PICTOGRAPHIC_RANGES = (",
    ]
    for a, b in ranges:
        lines.append(f"    (0x{a:04X}, 0x{b:04X}),")
    lines.append(")")
    lines.append("")
    OUT.write_text("\n".join(lines), encoding="utf-8")
    print(f"wrote {OUT} ({len(codepoints)} codepoints, {len(ranges)} ranges)")


if __name__ == "__main__":
    main()
