"""Symbolic substitutions: words, languages, and periodic structure."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

from .algebra import IntMatrix, matrix_is_primitive
from .errors import ParseError, PreconditionError

Word = tuple[int, ...]

# A primitive word is certified periodic iff its complexity dips to
# p(n) <= n at some n up to this bound (periods beyond it would pass).
APERIODICITY_SCAN_BOUND = 64


@dataclass(frozen=True)
class Substitution:
    """An alphabet with one nonempty replacement word per letter.

    Letters are referred to by index everywhere; `letters` only carries
    the display names.  Instances are immutable and hashable so language
    closures can be cached against them.
    """

    name: str
    letters: tuple[str, ...]
    rules: tuple[Word, ...]

    def __post_init__(self) -> None:
        if not self.letters:
            raise ParseError("empty alphabet")
        if len(set(self.letters)) != len(self.letters):
            raise ParseError("duplicate letter names")
        for ltr in self.letters:
            if not ltr or any(ch.isspace() for ch in ltr):
                raise ParseError(f"bad letter name {ltr!r}")
        if len(self.rules) != len(self.letters):
            raise ParseError("rule count does not match alphabet size")
        for i, rule in enumerate(self.rules):
            if not rule:
                raise ParseError(f"empty replacement word for {self.letters[i]!r}")
            for x in rule:
                if not (0 <= x < len(self.letters)):
                    raise ParseError("rule refers to a letter outside the alphabet")

    @property
    def size(self) -> int:
        return len(self.letters)

    def apply(self, word: Word) -> Word:
        out: list[int] = []
        for x in word:
            out.extend(self.rules[x])
        return tuple(out)

    def word_str(self, word: Word) -> str:
        names = [self.letters[x] for x in word]
        if any(len(n) > 1 for n in self.letters):
            return " ".join(names)
        return "".join(names)


def subst(name: str, rules: dict[str, str]) -> Substitution:
    """Convenience constructor from {letter: word} with string words."""
    return parse_substitution({"name": name, "rules": rules})


def parse_substitution(data: object, fallback_name: str = "input") -> Substitution:
    if not isinstance(data, dict):
        raise ParseError("substitution JSON must be an object")
    rules_obj = data.get("rules")
    if not isinstance(rules_obj, dict) or not rules_obj:
        raise ParseError('substitution JSON needs a nonempty "rules" object')
    name = data.get("name", fallback_name)
    if not isinstance(name, str) or not name:
        raise ParseError('"name" must be a nonempty string')
    letters = tuple(sorted(rules_obj.keys()))
    for ltr in letters:
        if not isinstance(ltr, str) or not ltr or any(ch.isspace() for ch in ltr):
            raise ParseError(f"bad letter name {ltr!r}")
    index = {ltr: i for i, ltr in enumerate(letters)}
    multi = any(len(ltr) > 1 for ltr in letters)
    rules: list[Word] = []
    for ltr in letters:
        raw = rules_obj[ltr]
        if not isinstance(raw, str) or not raw.strip():
            raise ParseError(f"replacement word for {ltr!r} must be a nonempty string")
        tokens = raw.split() if multi else list(raw)
        word = []
        for tok in tokens:
            if tok not in index:
                raise ParseError(f"rule for {ltr!r} uses unknown letter {tok!r}")
            word.append(index[tok])
        rules.append(tuple(word))
    return Substitution(name=name, letters=letters, rules=tuple(rules))


def serialize_substitution(s: Substitution) -> dict:
    return {
        "name": s.name,
        "rules": {s.letters[i]: s.word_str(s.rules[i]) for i in range(s.size)},
    }


def substitution_power(s: Substitution, n: int) -> Substitution:
    if n < 1:
        raise PreconditionError("substitution powers need n >= 1")
    rules = [(i,) for i in range(s.size)]
    for _ in range(n):
        rules = [s.apply(w) for w in rules]
    name = s.name if n == 1 else f"{s.name}^{n}"
    return Substitution(name=name, letters=s.letters, rules=tuple(rules))


def abelianization(s: Substitution) -> IntMatrix:
    """Count matrix: entry [i][j] counts letter i in the image of j."""
    m = s.size
    cols = []
    for j in range(m):
        col = [0] * m
        for x in s.rules[j]:
            col[x] += 1
        cols.append(col)
    return tuple(tuple(cols[j][i] for j in range(m)) for i in range(m))


def is_primitive(s: Substitution) -> bool:
    return matrix_is_primitive(abelianization(s))


@functools.lru_cache(maxsize=64)
def _small_closure(s: Substitution, kmax: int) -> frozenset[Word]:
    """All subshift factors of length <= kmax, by direct closure.

    Seeded with the single letters and closed under taking short factors
    of images.  Complete because a factor of length L spans at most L
    letters of its preimage (images are nonempty), so every factor is
    reached from the letters through windows that never exceed kmax.
    Only used for small kmax; quadratic in kmax otherwise.
    """
    if not is_primitive(s):
        raise PreconditionError("language closure requires a primitive substitution")
    found: set[Word] = {(i,) for i in range(s.size)}
    work: list[Word] = sorted(found)
    while work:
        w = work.pop()
        image = s.apply(w)
        ln = len(image)
        for width in range(1, min(kmax, ln) + 1):
            for start in range(ln - width + 1):
                piece = image[start : start + width]
                if piece not in found:
                    found.add(piece)
                    work.append(piece)
    return frozenset(found)


@functools.lru_cache(maxsize=8192)
def language(s: Substitution, k: int) -> frozenset[Word]:
    """Every length-k word of the subshift, certified complete.

    For k beyond 2 the factors are collected from images of the exact
    two-letter language under a power whose letter images all have
    length at least k.  A length-k factor of such an image meets at most
    two preimage letters (an interior third letter would contribute at
    least k on its own), and every subshift element is a shifted image
    under that power, so the union over the two-letter language is the
    whole length-k language.
    """
    if k < 1:
        raise PreconditionError("language length must be positive")
    if not is_primitive(s):
        raise PreconditionError("language requires a primitive substitution")
    if k <= 2:
        return frozenset(w for w in _small_closure(s, 2) if len(w) == k)
    rules_q = s.rules
    for _ in range(200):
        if min(len(r) for r in rules_q) >= k:
            break
        rules_q = tuple(s.apply(r) for r in rules_q)
    else:
        raise PreconditionError("letter images do not grow; substitution not primitive?")
    out: set[Word] = set()
    for u in _small_closure(s, 2):
        img: list[int] = []
        for x in u:
            img.extend(rules_q[x])
        for i in range(len(img) - k + 1):
            out.add(tuple(img[i : i + k]))
    return frozenset(out)


def language_contains(s: Substitution, word: Word) -> bool:
    if not word:
        return True
    return word in language(s, len(word))


def is_aperiodic(s: Substitution) -> bool:
    """Morse-Hedlund test: periodic iff complexity p(n) <= n somewhere.

    Certified for periods up to APERIODICITY_SCAN_BOUND; a primitive
    aperiodic word has p(n) >= n+1 for every n, so True is never wrong.
    """
    if not is_primitive(s):
        raise PreconditionError("aperiodicity test requires a primitive substitution")
    for n in range(1, APERIODICITY_SCAN_BOUND + 1):
        if len(language(s, n)) <= n:
            return False
    return True


# ---------------------------------------------------------------------------
# periodic biinfinite words and asymptotic structure


@dataclass(frozen=True)
class BiInfiniteSeed:
    """A two-letter seed x.y fixed by the k-th power around the origin.

    The word grows from phi^k(x) leftward and phi^k(y) rightward; the
    seed requires phi^k(x) to end in x and phi^k(y) to begin with y.
    """

    left: int
    right: int
    period: int

    def label(self, s: Substitution) -> str:
        return f"{s.letters[self.left]}.{s.letters[self.right]}"


def _orbit_period(step: dict[int, int], x: int) -> int | None:
    """Minimal t >= 1 with step^t(x) == x, or None if x is not on a cycle."""
    seen = x
    for t in range(1, len(step) + 1):
        seen = step[seen]
        if seen == x:
            return t
    return None


def periodic_biinfinite_words(s: Substitution) -> tuple[BiInfiniteSeed, ...]:
    """All biinfinite words fixed by some power, via first/last letter maps."""
    if not is_primitive(s):
        raise PreconditionError("periodic word enumeration requires primitivity")
    if not is_aperiodic(s):
        raise PreconditionError("periodic word enumeration requires aperiodicity")
    first = {i: s.rules[i][0] for i in range(s.size)}
    last = {i: s.rules[i][-1] for i in range(s.size)}
    lefts = [(x, _orbit_period(last, x)) for x in range(s.size)]
    rights = [(y, _orbit_period(first, y)) for y in range(s.size)]
    pairs2 = language(s, 2)
    seeds = []
    for x, tx in lefts:
        if tx is None:
            continue
        for y, ty in rights:
            if ty is None:
                continue
            if (x, y) in pairs2:
                seeds.append(BiInfiniteSeed(left=x, right=y, period=math.lcm(tx, ty)))
    seeds.sort(key=lambda sd: (sd.left, sd.right))
    return tuple(seeds)


def asymptotic_cycles(s: Substitution) -> tuple[tuple[BiInfiniteSeed, ...], ...]:
    """Simple cycles of seeds alternating forward/backward asymptropy.

    Two distinct seeds sharing their right letter generate the same
    right half (forward edge); sharing the left letter, the same left
    half (backward edge).  Cycles alternate edge kinds, so they have
    even length and at least four nodes (distinct seeds never share
    both letters).
    """
    seeds = periodic_biinfinite_words(s)
    n = len(seeds)
    if n < 4:
        return ()

    def edges(kind: str, i: int) -> list[int]:
        out = []
        for j in range(n):
            if j == i:
                continue
            if kind == "F" and seeds[i].right == seeds[j].right:
                out.append(j)
            if kind == "B" and seeds[i].left == seeds[j].left:
                out.append(j)
        return out

    found: set[frozenset] = set()
    cycles: list[tuple[BiInfiniteSeed, ...]] = []

    def dfs(start: int, path: list[int], kinds: list[str], first_kind: str) -> None:
        cur = path[-1]
        nxt_kind = "F" if kinds[-1] == "B" else "B"
        for j in edges(nxt_kind, cur):
            if j == start:
                if len(path) >= 4 and nxt_kind != first_kind:
                    edge_set = [
                        (kinds[t], frozenset((path[t], path[t + 1])))
                        for t in range(len(path) - 1)
                    ]
                    edge_set.append((nxt_kind, frozenset((path[-1], start))))
                    key = frozenset(edge_set)
                    if key not in found:
                        found.add(key)
                        cycles.append(tuple(seeds[i] for i in path))
                continue
            if j in path:
                continue
            path.append(j)
            kinds.append(nxt_kind)
            dfs(start, path, kinds, first_kind)
            path.pop()
            kinds.pop()

    for start in range(n):
        for first_kind in ("B", "F"):
            for j in edges(first_kind, start):
                if j < start:
                    continue
                dfs(start, [start, j], [first_kind], first_kind)

    # deterministic presentation: rotate each cycle to start at its
    # smallest seed, preferring the smaller second element
    def canonical(cycle: tuple[BiInfiniteSeed, ...]) -> tuple[BiInfiniteSeed, ...]:
        best = None
        nodes = list(cycle)
        for rot in range(len(nodes)):
            rotated = nodes[rot:] + nodes[:rot]
            for cand in (rotated, [rotated[0]] + rotated[1:][::-1]):
                key = tuple((sd.left, sd.right) for sd in cand)
                if best is None or key < best[0]:
                    best = (key, tuple(cand))
        assert best is not None
        return best[1]

    out = sorted({canonical(c) for c in cycles}, key=lambda c: [(sd.left, sd.right) for sd in c])
    return tuple(out)
