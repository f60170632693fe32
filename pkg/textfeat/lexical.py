"""Tokenization, character/word counts and lexicon file loading."""

from __future__ import annotations

import re
from functools import cache
from pathlib import Path

LEXICON_DIR = Path(__file__).resolve().parent / "lexicons"

_TOKEN_RE = re.compile(r"[a-z0-9]+(?:'[a-z]+)?")


def lexical_stats(text: str) -> tuple[int, int]:
    """(Unicode scalar count, whitespace-delimited token count)."""
    return len(text), len(text.split())


def tokenize(text: str) -> list[str]:
    """Lowercased alphanumeric tokens; '#' and '@' prefixes are dropped."""
    return _TOKEN_RE.findall(text.lower())


def load_tsv_lexicon(path: str | Path) -> dict[str, str]:
    """Read `term<TAB>value` lines; blank lines and '#' comments are skipped."""
    out: dict[str, str] = {}
    for line_no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{path}:{line_no}: expected 'term<TAB>value'")
        out[parts[0].strip().lower()] = parts[1].strip()
    return out


def load_word_list(path: str | Path) -> frozenset[str]:
    words: set[str] = set()
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip().lower()
        if line and not line.startswith("#"):
            words.update(line.split())
    return frozenset(words)


@cache
def stopwords() -> frozenset[str]:
    return load_word_list(LEXICON_DIR / "stopwords.txt")


@cache
def familiar_words() -> frozenset[str]:
    return load_word_list(LEXICON_DIR / "familiar_words.txt")
