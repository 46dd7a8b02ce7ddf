"""Regularization of divergent words as polynomials in the parameter T.

On the stuffle side, trailing (1, phase 0) letters are extracted through
the quasi-shuffle product, leaving admissible coefficient words; T stands
for the divergent depth-1 value (log 2 for t, 0 for zeta in the standard
normalizations).  On the shuffle side, both boundary letters of an
integral word map to the same T, which preserves duality.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from .words import (
    IntegralWord,
    Rational,
    SignedLetter,
    SignedWord,
    WordSum,
    from_integral,
    shuffle,
    sigma,
    sigma_sum,
    stuffle,
    to_integral,
)

__all__ = [
    "RegPoly",
    "stuffle_reg",
    "stuffle_reg_sum",
    "shuffle_reg",
    "zeta_shuffle_reg",
    "change_parameter",
    "r_expand",
    "star_reversal_relation",
]

_Z1 = SignedLetter(1, Fraction(0))


class RegPoly:
    """Polynomial in T with WordSum coefficients, indexed by T-degree."""

    __slots__ = ("coeffs", "flavor")

    def __init__(self, coeffs: Iterable[WordSum], flavor: str = "stuffle"):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        if not cs:
            cs = [WordSum.zero()]
        self.coeffs = tuple(cs)
        self.flavor = flavor

    @classmethod
    def constant(cls, ws: WordSum, flavor: str = "stuffle") -> "RegPoly":
        return cls([ws], flavor)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> WordSum:
        return self.coeffs[k] if k <= self.degree else WordSum.zero()

    def __add__(self, other: "RegPoly") -> "RegPoly":
        n = max(self.degree, other.degree) + 1
        return RegPoly([self.coeff(k) + other.coeff(k) for k in range(n)], self.flavor)

    def __sub__(self, other: "RegPoly") -> "RegPoly":
        return self + other.scale(-1)

    def scale(self, c) -> "RegPoly":
        return RegPoly([ws.scale(Fraction(c) if isinstance(c, int) else c)
                        for ws in self.coeffs], self.flavor)

    def shift_degree(self, j: int = 1) -> "RegPoly":
        """Multiply by T**j."""
        return RegPoly([WordSum.zero()] * j + list(self.coeffs), self.flavor)

    def __mul__(self, other: "RegPoly") -> "RegPoly":
        if self.flavor != other.flavor:
            raise ValueError("cannot multiply RegPolys of different flavor")
        prod = stuffle if self.flavor == "stuffle" else shuffle
        out = [WordSum.zero()] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero():
                    continue
                out[i + j] = out[i + j] + prod(a, b)
        return RegPoly(out, self.flavor)

    def is_zero(self) -> bool:
        return all(ws.is_zero() for ws in self.coeffs)

    def __eq__(self, other) -> bool:
        return (isinstance(other, RegPoly) and self.flavor == other.flavor
                and self.coeffs == other.coeffs)

    def __repr__(self) -> str:
        parts = []
        for k, ws in enumerate(self.coeffs):
            if ws.is_zero():
                continue
            tpow = "" if k == 0 else ("*T" if k == 1 else f"*T^{k}")
            parts.append(f"({ws!r}){tpow}")
        return " + ".join(parts) if parts else "0"

    def to_json(self, kind: str = "z") -> list[dict]:
        from .words import wordsum_to_json
        return [{"tdeg": k, "terms": wordsum_to_json(ws, kind)}
                for k, ws in enumerate(self.coeffs) if not ws.is_zero()]


# ---------------------------------------------------------------------------
# stuffle regularization

def _trailing_ones(letters: tuple) -> int:
    n = 0
    for l in reversed(letters):
        if l == _Z1:
            n += 1
        else:
            break
    return n


@lru_cache(maxsize=None)
def _streg(letters: tuple) -> tuple:
    """Coefficients of reg*(word) as a tuple of ((word, coeff), ...) by degree."""
    k = _trailing_ones(letters)
    if k == 0:
        return ((((letters, Fraction(1)),),) if letters else ((((), Fraction(1)),),))
    v = letters[:-1]
    # v * z1 = k * word + corrections with shorter trailing runs
    vz1 = stuffle(WordSum.single(SignedWord(v)), WordSum.single(SignedWord((_Z1,))))
    word = SignedWord(letters)
    correction = vz1 - WordSum.single(word, k)
    # reg(word) = (T * reg(v) - reg(correction)) / k
    acc: list[dict] = []

    def add(deg: int, w: tuple, c: Fraction):
        while len(acc) <= deg:
            acc.append({})
        acc[deg][w] = acc[deg].get(w, 0) + c
        if not acc[deg][w]:
            del acc[deg][w]

    for deg, terms in enumerate(_streg(v)):
        for w, c in terms:
            add(deg + 1, w, c / k)
    for cw, cc in correction.terms.items():
        for deg, terms in enumerate(_streg(cw.letters)):
            for w, c in terms:
                add(deg, w, -c * cc / k)
    return tuple(tuple(d.items()) for d in acc)


def stuffle_reg(w: SignedWord) -> RegPoly:
    """Rewrite a word as a polynomial in T with admissible coefficients."""
    coeffs = []
    for terms in _streg(w.letters):
        ws = WordSum()
        for lw, c in terms:
            if c:
                ws.terms[SignedWord(lw)] = ws.terms.get(SignedWord(lw), 0) + c
        coeffs.append(WordSum(ws.terms))
    return RegPoly(coeffs, "stuffle")


def stuffle_reg_sum(ws: WordSum) -> RegPoly:
    out = RegPoly([WordSum.zero()], "stuffle")
    for w, c in ws.terms.items():
        out = out + stuffle_reg(w).scale(c)
    return out


# ---------------------------------------------------------------------------
# shuffle regularization

def _run_trailing(bits: tuple, b: int) -> int:
    n = 0
    for x in reversed(bits):
        if x == b:
            n += 1
        else:
            break
    return n


@lru_cache(maxsize=None)
def _shreg_trail(bits: tuple) -> tuple:
    """Extract trailing 1s; coefficients may still carry leading 0s."""
    k = _run_trailing(bits, 1)
    if k == 0:
        return ((((bits, Fraction(1)),),) if bits else ((((), Fraction(1)),),))
    v = bits[:-1]
    vs = shuffle(WordSum.single(IntegralWord(v)), WordSum.single(IntegralWord((1,))))
    correction = vs - WordSum.single(IntegralWord(bits), k)
    acc: list[dict] = []

    def add(deg: int, w: tuple, c: Fraction):
        while len(acc) <= deg:
            acc.append({})
        acc[deg][w] = acc[deg].get(w, 0) + c
        if not acc[deg][w]:
            del acc[deg][w]

    for deg, terms in enumerate(_shreg_trail(v)):
        for w, c in terms:
            add(deg + 1, w, c / k)
    for cw, cc in correction.terms.items():
        for deg, terms in enumerate(_shreg_trail(cw.bits)):
            for w, c in terms:
                add(deg, w, -c * cc / k)
    return tuple(tuple(d.items()) for d in acc)


@lru_cache(maxsize=None)
def _shreg_lead(bits: tuple) -> tuple:
    """Extract leading 0s from a word with no trailing 1s."""
    j = 0
    for x in bits:
        if x == 0:
            j += 1
        else:
            break
    if j == 0:
        return ((((bits, Fraction(1)),),) if bits else ((((), Fraction(1)),),))
    v = bits[1:]
    vs = shuffle(WordSum.single(IntegralWord((0,))), WordSum.single(IntegralWord(v)))
    correction = vs - WordSum.single(IntegralWord(bits), j)
    acc: list[dict] = []

    def add(deg: int, w: tuple, c: Fraction):
        while len(acc) <= deg:
            acc.append({})
        acc[deg][w] = acc[deg].get(w, 0) + c
        if not acc[deg][w]:
            del acc[deg][w]

    for deg, terms in enumerate(_shreg_lead(v)):
        for w, c in terms:
            add(deg + 1, w, c / j)
    for cw, cc in correction.terms.items():
        for deg, terms in enumerate(_shreg_lead(cw.bits)):
            for w, c in terms:
                add(deg, w, -c * cc / j)
    return tuple(tuple(d.items()) for d in acc)


def shuffle_reg(w: IntegralWord) -> RegPoly:
    """Shuffle-regularization polynomial; both boundary letters map to T."""
    out: list[dict] = []

    def add(deg: int, bits: tuple, c: Fraction):
        while len(out) <= deg:
            out.append({})
        out[deg][bits] = out[deg].get(bits, 0) + c
        if not out[deg][bits]:
            del out[deg][bits]

    for d1, terms in enumerate(_shreg_trail(w.bits)):
        for bits1, c1 in terms:
            for d2, terms2 in enumerate(_shreg_lead(bits1)):
                for bits2, c2 in terms2:
                    add(d1 + d2, bits2, c1 * c2)
    coeffs = []
    for d in out:
        ws = WordSum()
        for bits, c in d.items():
            ws.terms[IntegralWord(bits)] = c
        coeffs.append(ws)
    return RegPoly(coeffs or [WordSum.zero()], "shuffle")


def zeta_shuffle_reg(w: SignedWord) -> RegPoly:
    """Shuffle regularization of zeta(composition), coefficients as compositions.

    Value-compatible: evaluating coefficient words as zetas and substituting
    T reproduces reg^sh of the zeta value, all (-1)^depth integral signs
    resolved internally.
    """
    sign, iw = to_integral(w)
    poly = shuffle_reg(iw)
    coeffs = []
    for ws in poly.coeffs:
        conv = WordSum()
        for bits_word, c in ws.terms.items():
            if len(bits_word) == 0:
                key = SignedWord()
                conv.terms[key] = conv.terms.get(key, 0) + sign * c
                continue
            s2, sw = from_integral(bits_word)
            key = sw
            conv.terms[key] = conv.terms.get(key, 0) + sign * s2 * c
            if not conv.terms[key]:
                del conv.terms[key]
        coeffs.append(conv)
    return RegPoly(coeffs, "shuffle")


# ---------------------------------------------------------------------------
# parameter change and interpolated expansion

def change_parameter(p: RegPoly, delta) -> RegPoly:
    """Rewrite in the shifted parameter: result(T) = p(T + delta).

    With an exact rational delta the result stays exact; numeric deltas
    (e.g. -log 2) produce numeric coefficients, which evaluate identically.
    """
    if p.flavor != "stuffle":
        raise ValueError("change_parameter applies to stuffle-flavor polynomials")
    if isinstance(delta, int):
        delta = Fraction(delta)
    from math import comb
    n = p.degree
    out = [WordSum.zero() for _ in range(n + 1)]
    for k, ws in enumerate(p.coeffs):
        if ws.is_zero():
            continue
        dpow = 1
        for j in range(k, -1, -1):
            # coefficient of T^j from c_k (T + delta)^k
            out[j] = out[j] + ws.scale(comb(k, j) * dpow if isinstance(delta, Fraction)
                                       else dpow * comb(k, j))
            dpow = dpow * delta
    return RegPoly(out, "stuffle")


def r_expand(comp, r: Rational) -> WordSum:
    """t^r(I) as a combination of plain words: the sigma-map of z_I."""
    w = comp if isinstance(comp, SignedWord) else SignedWord.from_composition(comp)
    return sigma(w, r)


# ---------------------------------------------------------------------------
# star reversal relation for (alpha, {beta}^n, gamma) patterns

def star_reversal_relation(alpha, beta, gamma, n: int) -> dict:
    """Emit t*(alpha,{beta}^n,gamma) + (-1)^n t(reverse) = sum of products.

    alpha, beta, gamma are letters given as ints (negative = phase 1/2) or
    (weight, phase) pairs.  Returns the identity as factored terms, each a
    list of (is_star, SignedWord) factors with a rational coefficient; the
    whole sum evaluates to zero under regularized evaluation.
    """
    def as_letter(x) -> SignedLetter:
        if isinstance(x, tuple):
            return SignedLetter(x[0], Fraction(x[1]))
        return SignedLetter(abs(x), Fraction(1, 2) if x < 0 else Fraction(0))

    if n < 0:
        raise ValueError("repetition count must be >= 0")
    a, b, g = as_letter(alpha), as_letter(beta), as_letter(gamma)
    word = SignedWord((a,) + (b,) * n + (g,))
    rev = word.reverse()
    terms = [
        (Fraction(1), ((True, word),)),
        (Fraction((-1) ** n), ((False, rev),)),
    ]
    for j in range(n + 1):
        prefix = SignedWord((b,) * j + (a,))
        suffix = SignedWord((b,) * (n - j) + (g,))
        terms.append((Fraction((-1) ** (j + 1)), ((False, prefix), (True, suffix))))
    return {"word": word, "reverse": rev, "terms": terms}
