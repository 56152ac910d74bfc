"""Odd cyclic words over {a,b,c,d}, the 12 forbidden factors, and exhaustive checks."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .patterns import find_bicolored_c4, find_mono_p4

ALPHABET = "abcd"

# Patterns in listed order; scanning order is part of the contract.
FORBIDDEN = ("aa", "bb", "cc", "dd", "ad", "da", "aba", "dcd", "bdc", "cab", "cdb", "bac")

# Factors whose presence forces a single-colour 4-vertex path in the prism,
# vs. those forcing a red-red-blue-blue 4-cycle (repaired case split).
MONO_P4_PATTERNS = frozenset({"aa", "dd", "aba", "dcd", "bdc", "cab", "cdb", "bac"})
BICOLORED_C4_PATTERNS = frozenset({"bb", "cc", "ad", "da"})

LEMMA_CAP = 9
COROLLARY_CAP = 5


@dataclass(frozen=True)
class CyclicWord:
    """Odd-length word over {a,b,c,d}, read cyclically."""

    letters: str

    def __post_init__(self) -> None:
        if len(self.letters) < 3 or len(self.letters) % 2 == 0:
            raise ValueError("cyclic word length must be odd and >= 3")
        if any(ch not in ALPHABET for ch in self.letters):
            raise ValueError("letters must come from {a,b,c,d}")

    def __len__(self) -> int:
        return len(self.letters)

    def rotate(self, r: int) -> "CyclicWord":
        r %= len(self.letters)
        return CyclicWord(self.letters[r:] + self.letters[:r])


def contains_factor(word: CyclicWord, pattern: str) -> int | None:
    """First position (with wraparound) where pattern occurs as a contiguous cyclic factor."""
    if len(pattern) not in (2, 3):
        raise ValueError("patterns must have length 2 or 3")
    s = word.letters
    n = len(s)
    doubled = s + s[: len(pattern) - 1]
    for i in range(n):
        if doubled[i : i + len(pattern)] == pattern:
            return i
    return None


def hits_forbidden(word: CyclicWord) -> tuple[str, int] | None:
    """First forbidden factor present, scanning patterns in listed order."""
    for pattern in FORBIDDEN:
        pos = contains_factor(word, pattern)
        if pos is not None:
            return pattern, pos
    return None


@dataclass
class LemmaReport:
    k: int
    total: int
    misses: int
    hits_by_pattern: dict[str, int]
    necklaces_only: bool = False
    elapsed_ms: float = 0.0

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "total": self.total,
            "misses": self.misses,
            "hits_by_pattern": dict(self.hits_by_pattern),
            "necklaces_only": self.necklaces_only,
            "elapsed_ms": self.elapsed_ms,
        }


def _word_index_to_letters(idx: np.ndarray, length: int) -> np.ndarray:
    """Letter-code matrix for a block of word indices; position 0 is least significant."""
    cols = [((idx >> (2 * i)) & 3).astype(np.uint8) for i in range(length)]
    return np.stack(cols, axis=1)


def _bulk_first_hits(idx: np.ndarray, length: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-word first-hit pattern index (or -1) for a block of word indices.

    Same pattern-major scanning order as hits_forbidden; vectorized.
    """
    letters = _word_index_to_letters(idx, length)
    first = np.full(idx.shape, -1, dtype=np.int8)
    undecided = np.ones(idx.shape, dtype=bool)
    for pi, pattern in enumerate(FORBIDDEN):
        codes = [ALPHABET.index(ch) for ch in pattern]
        occ = np.zeros(idx.shape, dtype=bool)
        for pos in range(length):
            m = letters[:, pos] == codes[0]
            for off, code in enumerate(codes[1:], start=1):
                m &= letters[:, (pos + off) % length] == code
            occ |= m
        newly = occ & undecided
        first[newly] = pi
        undecided &= ~occ
    return first, undecided


def _necklace_mask(idx: np.ndarray, length: int) -> np.ndarray:
    """Words minimal (in enumeration order) among their rotations."""
    low = np.uint64((1 << (2 * length)) - 1)
    val = idx.astype(np.uint64)
    keep = np.ones(idx.shape, dtype=bool)
    for r in range(1, length):
        rot = ((val >> np.uint64(2 * r)) | (val << np.uint64(2 * (length - r)))) & low
        keep &= val <= rot
    return keep


def verify_lemma_2_4(k: int, *, necklaces_only: bool = False, cap: int = LEMMA_CAP,
                     chunk: int = 1 << 18) -> LemmaReport:
    """Check every odd cyclic word of length 2k+1 for a forbidden factor.

    Streams the 4^(2k+1) words in fixed-size blocks (base-4 counter, least
    significant position first) and tallies first hits per pattern.
    """
    if not 1 <= k <= cap:
        raise ValueError(f"k must be in 1..{cap}")
    length = 2 * k + 1
    total_words = 4 ** length
    t0 = time.perf_counter()
    counts = {p: 0 for p in FORBIDDEN}
    misses = 0
    total = 0
    for start in range(0, total_words, chunk):
        idx = np.arange(start, min(start + chunk, total_words), dtype=np.int64)
        if necklaces_only:
            idx = idx[_necklace_mask(idx, length)]
        if idx.size == 0:
            continue
        first, undecided = _bulk_first_hits(idx, length)
        misses += int(undecided.sum())
        total += int(idx.size)
        binc = np.bincount(first[first >= 0], minlength=len(FORBIDDEN))
        for pi, pattern in enumerate(FORBIDDEN):
            counts[pattern] += int(binc[pi])
    elapsed = (time.perf_counter() - t0) * 1000.0
    return LemmaReport(k=k, total=total, misses=misses, hits_by_pattern=counts,
                       necklaces_only=necklaces_only, elapsed_ms=elapsed)


# ---------------------------------------------------------------------------
# colouring side (the prism encoding)

def encode_coloring(k: int, colors: Sequence[int]) -> CyclicWord:
    """Word of the layered colouring: letter i from the colour pair of (u_i, v_i).

    colors[2i] and colors[2i+1] are the colours of the two layer vertices at
    cycle position i (0 = red, 1 = blue), matching odd_prism vertex ids.
    a=red/red, b=red/blue, c=blue/red, d=blue/blue.
    """
    length = 2 * k + 1
    if len(colors) != 2 * length:
        raise ValueError(f"colouring must cover {2 * length} vertices")
    if any(c not in (0, 1) for c in colors):
        raise ValueError("colours must be 0 (red) or 1 (blue)")
    letters = "".join(ALPHABET[2 * colors[2 * i] + colors[2 * i + 1]] for i in range(length))
    return CyclicWord(letters)


@dataclass
class CorollaryReport:
    k: int
    total: int
    misses: int
    hits_by_pattern: dict[str, int]
    cross_tab: dict[str, dict[str, int]]
    case_split: str = "repaired case split"
    case_split_violations: int = 0
    elapsed_ms: float = 0.0

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "total": self.total,
            "misses": self.misses,
            "hits_by_pattern": dict(self.hits_by_pattern),
            "cross_tab": {p: dict(v) for p, v in self.cross_tab.items()},
            "case_split": self.case_split,
            "case_split_violations": self.case_split_violations,
            "elapsed_ms": self.elapsed_ms,
        }


def verify_corollary_2_5(k: int, *, cap: int = COROLLARY_CAP) -> CorollaryReport:
    """Check every 2-colouring of the odd prism via both routes.

    For each of the 2^(2(2k+1)) colourings: the direct structural search must
    find a monochromatic P4 or a red-red-blue-blue C4, the encoded word must
    hit a forbidden factor, and the factor's branch of the repaired case
    split ({bb,cc,ad,da} vs the rest) must match an existing structure.
    """
    if not 1 <= k <= cap:
        raise ValueError(f"k must be in 1..{cap}")
    m = 2 * (2 * k + 1)
    t0 = time.perf_counter()
    counts = {p: 0 for p in FORBIDDEN}
    cross: dict[str, dict[str, int]] = {p: {"mono_p4": 0, "bicolored_c4": 0} for p in FORBIDDEN}
    misses = 0
    violations = 0
    for mask in range(1 << m):
        colors = [(mask >> j) & 1 for j in range(m)]
        hit = hits_forbidden(encode_coloring(k, colors))
        mono = find_mono_p4(k, colors)
        c4 = find_bicolored_c4(k, colors)
        if hit is None or (mono is None and c4 is None):
            misses += 1
            continue
        pattern, _ = hit
        counts[pattern] += 1
        cross[pattern]["mono_p4" if mono is not None else "bicolored_c4"] += 1
        if pattern in BICOLORED_C4_PATTERNS:
            if c4 is None:
                violations += 1
        elif mono is None:
            violations += 1
    elapsed = (time.perf_counter() - t0) * 1000.0
    return CorollaryReport(k=k, total=1 << m, misses=misses, hits_by_pattern=counts,
                           cross_tab=cross, case_split_violations=violations,
                           elapsed_ms=elapsed)
