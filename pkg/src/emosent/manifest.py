"""Run manifests: provenance attached to every CLI output.

A manifest is a plain dict so it embeds directly in JSON payloads. Everything
in it is a pure function of (inputs, flags, tool version) except the
"timings" entry, which callers fill in last; reproducibility checks strip
that one key.
"""

from __future__ import annotations

import hashlib
import unicodedata
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .tokenizer import UNICODE_VERSION


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def build_manifest(
    command: str,
    flags: dict,
    inputs: Sequence[str | Path] = (),
    seed: Optional[int] = None,
) -> dict:
    return {
        "command": command,
        "seed": seed,
        "flags": {k: flags[k] for k in sorted(flags)},
        "input_digests": {str(p): sha256_file(p) for p in inputs},
        "tool_version": __version__,
        "emoji_table_unicode_version": UNICODE_VERSION,
        "unicodedata_version": unicodedata.unidata_version,
        "timings": {},
    }
