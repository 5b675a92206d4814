"""User profile bags and the phrase-matching primitive."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .analyzer import AnalyzerConfig, tokenize

__all__ = ["MAX_TERM_TOKENS", "InvalidTerm", "Profile", "dump_profile", "load_profile", "match_count", "read_profile"]

MAX_TERM_TOKENS = 5

Term = tuple[str, ...]


class InvalidTerm(ValueError):
    def __init__(self, lineno: int, line: str, reason: str) -> None:
        super().__init__(f"line {lineno}: {reason}: {line!r}")
        self.lineno = lineno
        self.line = line


@dataclass(frozen=True)
class Profile:
    user_id: str
    terms: tuple[Term, ...] = ()

    def __len__(self) -> int:
        return len(self.terms)

    def union(self, other: "Profile | Sequence[Term]") -> "Profile":
        extra = other.terms if isinstance(other, Profile) else tuple(other)
        seen = set(self.terms)
        merged = list(self.terms)
        for term in extra:
            if term not in seen:
                seen.add(term)
                merged.append(term)
        return Profile(self.user_id, tuple(merged))


def load_profile(text: str, user_id: str, cfg: AnalyzerConfig | None = None) -> Profile:
    """Parse a newline-delimited profile; ``#`` lines and blank lines are skipped.

    Each line is normalized with the analyzer tokenizer so that profile terms
    and page tokens compare directly. Duplicates keep their first position.
    """
    terms: list[Term] = []
    seen: set[Term] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        term = tuple(tokenize(stripped, cfg))
        if not term:
            raise InvalidTerm(lineno, line, "term has no usable tokens")
        if len(term) > MAX_TERM_TOKENS:
            raise InvalidTerm(lineno, line, f"term longer than {MAX_TERM_TOKENS} tokens")
        if term not in seen:
            seen.add(term)
            terms.append(term)
    return Profile(user_id, tuple(terms))


def read_profile(path: str, user_id: str | None = None, cfg: AnalyzerConfig | None = None) -> Profile:
    with open(path, "rb") as fh:
        text = fh.read().decode("utf-8", errors="replace")
    return load_profile(text, user_id or path, cfg)


def dump_profile(profile: Profile) -> str:
    return "".join(" ".join(term) + "\n" for term in profile.terms)


def match_count(term: Sequence[str], tokens: Sequence[str]) -> int:
    """Occurrences of ``term`` as a contiguous run in ``tokens``, overlaps included."""
    k = len(term)
    if k == 0 or k > len(tokens):
        return 0
    term = tuple(term)
    first = term[0]
    return sum(
        1
        for i in range(len(tokens) - k + 1)
        if tokens[i] == first and tuple(tokens[i : i + k]) == term
    )
