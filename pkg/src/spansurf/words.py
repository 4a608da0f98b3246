"""Cyclic words over the alphabet {B, S}.

Each intersection curve of a candidate surface with the upper or lower
sphere is recorded as a cyclic word: one ``S`` per saddle pass, one ``B``
per point where the curve switches between an interior arc and a run along
the link.  Words are considered up to rotation; the canonical form is the
lexicographically least rotation (``B`` < ``S``).

Validity rules carry stable numeric codes 7..10 (configuration-level rules
use 2..6, see :mod:`spansurf.config`):

* 7  -- the word is nonempty
* 8  -- letters B occur in consecutive pairs under cyclic reading
* 9  -- the word does not consist entirely of S's
* 10 -- the word has length at least four

Euler-characteristic contributions are exact quarter-integers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

RULE_NONEMPTY = 7
RULE_B_PAIRS = 8
RULE_NOT_ALL_S = 9
RULE_MIN_LENGTH = 10

RULE_TEXT = {
    RULE_NONEMPTY: "word is empty",
    RULE_B_PAIRS: "letters B do not occur in consecutive pairs",
    RULE_NOT_ALL_S: "word consists entirely of S's",
    RULE_MIN_LENGTH: "word has length less than four",
}


class InvalidWordError(ValueError):
    def __init__(self, word: "BSWord", codes: tuple[int, ...]):
        self.codes = codes
        detail = "; ".join(RULE_TEXT[c] for c in codes)
        super().__init__(f"invalid word {word.letters!r}: {detail}")


class WordClass(Enum):
    IGNORABLE_BBBB = "BBBB"
    C2_BBSS = "BBSS"
    C1 = "C1"


@dataclass(frozen=True)
class BSWord:
    letters: str

    def __post_init__(self):
        if re.fullmatch(r"[BS]*", self.letters) is None:
            raise ValueError(f"letters must be over {{B,S}}: {self.letters!r}")

    @property
    def b0(self) -> int:
        return self.letters.count("B")

    @property
    def s0(self) -> int:
        return self.letters.count("S")

    def __len__(self) -> int:
        return len(self.letters)

    def rotate(self, k: int) -> "BSWord":
        w = self.letters
        k %= max(len(w), 1)
        return BSWord(w[k:] + w[:k])

    def __str__(self) -> str:
        return canonical(self).letters


def word(letters: str) -> BSWord:
    return BSWord(letters)


def canonical(w: BSWord) -> BSWord:
    """Lexicographically least rotation."""
    s = w.letters
    if not s:
        return w
    best = min(s[k:] + s[:k] for k in range(len(s)))
    return BSWord(best)


@dataclass(frozen=True)
class WordCheck:
    ok: bool
    codes: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def _b_runs_paired(s: str) -> bool:
    if "B" not in s:
        return True
    if "S" not in s:
        return len(s) % 2 == 0
    # Rotate to start at an S so maximal cyclic B-runs are linear runs.
    k = s.index("S")
    rotated = s[k:] + s[:k]
    return all(len(run) % 2 == 0 for run in rotated.split("S") if run)


def is_valid(w: BSWord) -> WordCheck:
    """Check the word-level validity rules; collects every failed code."""
    failed = []
    if len(w) == 0:
        failed.append(RULE_NONEMPTY)
    if not _b_runs_paired(w.letters):
        failed.append(RULE_B_PAIRS)
    if len(w) > 0 and w.b0 == 0:
        failed.append(RULE_NOT_ALL_S)
    if len(w) < 4:
        failed.append(RULE_MIN_LENGTH)
    return WordCheck(not failed, tuple(failed))


def contribution(w: BSWord) -> Fraction:
    """Exact Euler-characteristic contribution 1 - s0/4 - b0/4 of a valid
    word.  Always <= 0, with equality exactly for BBBB and BBSS."""
    chk = is_valid(w)
    if not chk:
        raise InvalidWordError(w, chk.codes)
    return 1 - Fraction(w.s0 + w.b0, 4)


def classify(w: BSWord) -> WordClass:
    chk = is_valid(w)
    if not chk:
        raise InvalidWordError(w, chk.codes)
    c = canonical(w).letters
    if c == "BBBB":
        return WordClass.IGNORABLE_BBBB
    if c == "BBSS":
        return WordClass.C2_BBSS
    return WordClass.C1
