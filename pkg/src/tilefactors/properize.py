"""Rewriting on return words until the substitution becomes proper.

A substitution is proper when every image starts with one common letter
and ends with another common one.  Properness is what lets the pair
dynamics later treat the unique fixed tiling as a clean reference
frame, so every pipeline stage that needs it runs through here first.

The rewriting picks a power n and an anchor pair: a letter a with
phi^n(a) beginning in a, a letter b with phi^n(b) ending in b, and the
two-letter word "b a" legal.  Every crossing of b into a in the fixed
word of phi^n is then a cut, the cut segments (return words to the
junction) become the new alphabet, and phi^n induces the new rules by
cutting images.  Images inherit the cut structure of the fixed word,
which is why the induced rules land back in the piece alphabet.
"""

from __future__ import annotations

from dataclasses import dataclass

import sympy

from .algebra import charpoly_coeffs, perron_data, real_root_intervals
from .errors import CapExceededError, InternalCheckError, PreconditionError
from .substitution import (
    Substitution,
    Word,
    abelianization,
    is_aperiodic,
    is_primitive,
    language_contains,
    periodic_biinfinite_words,
    substitution_power,
)

_MAX_GROW_STEPS = 30


@dataclass(frozen=True)
class ProperRewrite:
    """A proper substitution together with its decoding data.

    word_alphabet[i] is the source-alphabet word the i-th new letter
    stands for; decoding a rule of `proper` through it reproduces the
    n-th power of the source acting on the decoded letter.
    """

    source: Substitution
    proper: Substitution
    power: int
    anchor_start: int
    anchor_end: int
    word_alphabet: tuple[Word, ...]

    def decode(self, word: Word) -> Word:
        out: list[int] = []
        for x in word:
            out.extend(self.word_alphabet[x])
        return tuple(out)


def is_proper(s: Substitution) -> bool:
    firsts = {r[0] for r in s.rules}
    lasts = {r[-1] for r in s.rules}
    return len(firsts) == 1 and len(lasts) == 1


def _minpoly_of_power(minpoly: tuple[int, ...], n: int) -> tuple[int, ...]:
    """Minimal polynomial of (largest real root)^n."""
    d = len(minpoly) - 1
    if d == 1:
        root = -minpoly[0]  # monic x + c0
        return (-(root**n), 1)
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(list(minpoly))), x, domain="ZZ")
    n_real = len(real_root_intervals(minpoly))
    root = sympy.CRootOf(poly, n_real - 1)
    mp = sympy.Poly(sympy.minimal_polynomial(root**n, x), x)
    return tuple(reversed([int(c) for c in mp.all_coeffs()]))


def _segments(word: Word, start: int, end: int) -> tuple[list[Word], bool]:
    """Cut word at every junction end|start; also report whether a cut
    exists at position 0 (so the first segment is complete)."""
    cuts = [i for i in range(1, len(word)) if word[i - 1] == end and word[i] == start]
    pieces = []
    for a, b in zip(cuts, cuts[1:]):
        pieces.append(word[a:b])
    return pieces, bool(cuts)


def _build_with_anchor(
    s: Substitution, n: int, start: int, end: int, max_states: int
) -> ProperRewrite | None:
    sn = substitution_power(s, n)

    # grow the fixed word of phi^n rightward from the anchor start letter;
    # position 0 carries a junction because the left half ends in `end`
    pieces: set[Word] = set()
    prev_count = -1
    right: Word = (start,)
    for _ in range(_MAX_GROW_STEPS):
        right = sn.apply(right)
        cuts = [0] + [
            i for i in range(1, len(right)) if right[i - 1] == end and right[i] == start
        ]
        for a, b in zip(cuts, cuts[1:]):
            pieces.add(right[a:b])
        if len(pieces) > max_states:
            raise CapExceededError(
                f"more than {max_states} return words while properizing",
                cap_name="states",
                cap_value=max_states,
            )
        if len(pieces) == prev_count and pieces:
            break
        prev_count = len(pieces)
    if not pieces:
        return None

    # close under cutting images: every image of a piece decomposes at the
    # junctions into pieces again (cuts of the fixed word survive phi^n)
    work = sorted(pieces)
    while work:
        p = work.pop()
        image = sn.apply(p)
        segs, _ = _segments((end,) + image + (start,), start, end)
        for seg in segs:
            if seg not in pieces:
                pieces.add(seg)
                work.append(seg)
                if len(pieces) > max_states:
                    raise CapExceededError(
                        f"more than {max_states} return words while properizing",
                        cap_name="states",
                        cap_value=max_states,
                    )

    ordered = sorted(pieces)
    index = {p: i for i, p in enumerate(ordered)}
    names = tuple(f"p{i}" for i in range(len(ordered)))

    rules = []
    for p in ordered:
        image = sn.apply(p)
        segs, _ = _segments((end,) + image + (start,), start, end)
        if sum(len(seg) for seg in segs) != len(image):
            raise InternalCheckError("junction cuts failed to tile an image")
        try:
            rules.append(tuple(index[seg] for seg in segs))
        except KeyError:
            return None

    proper = Substitution(name=f"{s.name}-proper", letters=names, rules=tuple(rules))

    # verification gauntlet: reject the candidate rather than emit junk
    if not is_proper(proper):
        return None
    if not is_primitive(proper):
        return None
    if not is_aperiodic(proper):
        return None
    rewrite = ProperRewrite(
        source=s,
        proper=proper,
        power=n,
        anchor_start=start,
        anchor_end=end,
        word_alphabet=tuple(ordered),
    )
    for i in range(proper.size):
        if rewrite.decode(proper.rules[i]) != sn.apply(ordered[i]):
            raise InternalCheckError("decoding does not commute with the rewriting")
    for p in ordered:
        if not language_contains(s, p):
            raise InternalCheckError("return word missing from the source language")

    src_pd = perron_data(abelianization(s))
    new_pd = perron_data(abelianization(proper))
    expect = _minpoly_of_power(src_pd.minpoly, n)
    if expect and new_pd.minpoly != expect:
        raise InternalCheckError(
            "dilation of the rewritten substitution is not the expected power"
        )
    if new_pd.degree != src_pd.degree:
        # the Perron root keeps its degree under powers: any collapse
        # would need a conjugate of equal modulus, and Perron dominance
        # rules that out for primitive matrices
        raise InternalCheckError("rewriting changed the dilation degree")
    return rewrite


def properize(s: Substitution, max_states: int = 20000) -> ProperRewrite:
    """Return-word rewriting to a proper substitution.

    Already-proper inputs come back unchanged as an identity rewriting
    with power one.  Otherwise anchors are scanned in order of power and
    then lexicographically; a candidate that fails any postcondition is
    skipped rather than patched.
    """
    if not is_primitive(s):
        raise PreconditionError("properization requires a primitive substitution")
    if not is_aperiodic(s):
        raise PreconditionError("properization requires an aperiodic substitution")

    if is_proper(s):
        return ProperRewrite(
            source=s,
            proper=s,
            power=1,
            anchor_start=s.rules[0][0],
            anchor_end=s.rules[0][-1],
            word_alphabet=tuple((i,) for i in range(s.size)),
        )

    seeds = periodic_biinfinite_words(s)
    if not seeds:
        raise InternalCheckError("primitive aperiodic substitution with no periodic word")
    periods = sorted({sd.period for sd in seeds})
    max_n = max(periods) * s.size * s.size

    n = 0
    while n < max_n:
        n += 1
        # anchors at power n: seeds of period dividing n, ordered by
        # (start, end) = (right letter, left letter)
        cands = sorted(
            ((sd.right, sd.left) for sd in seeds if n % sd.period == 0),
        )
        for start, end in cands:
            rewrite = _build_with_anchor(s, n, start, end, max_states)
            if rewrite is not None:
                return rewrite
    raise InternalCheckError("no anchor produced a verified proper rewriting")
