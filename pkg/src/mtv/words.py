"""Exact combinatorial algebra of signed words.

A letter is a pair (weight, phase): a positive integer weight and a
rational phase in [0, 1) standing for the root of unity exp(2*pi*i*phase)
attached to a summation index.  Phase 0 is the sign +1 and phase 1/2 the
alternating sign, written as a negative entry in the bracket syntax
(``z[2,-3]`` is weight 2 sign +1 followed by weight 3 sign -1; a general
phase is written ``z[1@1/3,2]``).

Words multiply by the quasi-shuffle ("stuffle") product, its one-parameter
interpolation, and carry the block-merging maps and antipodes used for
reversal identities.  Integral words over the alphabet {0, 1} multiply by
the shuffle product.  All coefficients are exact ``Fraction``s and every
object is immutable, so everything here is safe to share between threads.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Union

Rational = Union[int, Fraction]

__all__ = [
    "SignedLetter",
    "SignedWord",
    "IntegralWord",
    "WordSum",
    "stuffle",
    "interp_stuffle",
    "sigma",
    "reverse",
    "parity_sign",
    "antipode",
    "hopf_convolution",
    "shuffle",
    "to_integral",
    "from_integral",
    "dual",
    "all_words",
    "all_compositions",
    "parse_word",
    "format_word",
    "wordsum_to_json",
    "wordsum_from_json",
]


def _phase(q: Rational) -> Fraction:
    q = Fraction(q)
    return q - Fraction(q.numerator // q.denominator)


class SignedLetter(NamedTuple):
    weight: int
    phase: Fraction

    def __str__(self) -> str:
        if self.phase == 0:
            return str(self.weight)
        if self.phase == Fraction(1, 2):
            return f"-{self.weight}"
        return f"{self.weight}@{self.phase}"


def letter(weight: int, phase: Rational = 0) -> SignedLetter:
    if weight < 1:
        raise ValueError(f"letter weight must be >= 1, got {weight}")
    return SignedLetter(int(weight), _phase(phase))


class SignedWord:
    """An ordered tuple of letters, innermost summation index first."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable = ()):  # accepts letters or (w, q) pairs
        self.letters = tuple(letter(*l) if not isinstance(l, SignedLetter) else l
                             for l in letters)

    @classmethod
    def from_composition(cls, comp: Iterable[int]) -> "SignedWord":
        """Build from integer entries; a negative entry means phase 1/2."""
        return cls([letter(abs(n), Fraction(1, 2) if n < 0 else 0) for n in comp])

    @property
    def weight(self) -> int:
        return sum(l.weight for l in self.letters)

    @property
    def depth(self) -> int:
        return len(self.letters)

    def is_admissible(self) -> bool:
        """True unless the last letter is (1, phase 0), i.e. the sum converges."""
        return not self.letters or self.letters[-1] != SignedLetter(1, Fraction(0))

    def phases(self) -> tuple[Fraction, ...]:
        return tuple(l.phase for l in self.letters)

    def composition(self) -> tuple[int, ...]:
        return tuple(l.weight for l in self.letters)

    def reverse(self) -> "SignedWord":
        return SignedWord(self.letters[::-1])

    def __add__(self, other: "SignedWord") -> "SignedWord":
        return SignedWord(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[SignedLetter]:
        return iter(self.letters)

    def __hash__(self) -> int:
        return hash(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, SignedWord) and self.letters == other.letters

    def sort_key(self):
        # graded lexicographic: weight, depth, letter weights, phases
        return (self.weight, self.depth,
                tuple(l.weight for l in self.letters),
                tuple(l.phase for l in self.letters))

    def __lt__(self, other: "SignedWord") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return format_word(self)


class IntegralWord:
    """A word over {0, 1}, the letter string of I(0; x_1..x_N; 1)."""

    __slots__ = ("bits",)

    def __init__(self, bits: Iterable[int] = ()):
        self.bits = tuple(int(b) for b in bits)
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"integral word letters must be 0 or 1: {self.bits}")

    def is_convergent(self) -> bool:
        return bool(self.bits) and self.bits[0] == 1 and self.bits[-1] == 0

    def reverse(self) -> "IntegralWord":
        return IntegralWord(self.bits[::-1])

    def __add__(self, other: "IntegralWord") -> "IntegralWord":
        return IntegralWord(self.bits + other.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def __hash__(self) -> int:
        return hash(("iw", self.bits))

    def __eq__(self, other) -> bool:
        return isinstance(other, IntegralWord) and self.bits == other.bits

    def sort_key(self):
        return (len(self.bits), self.bits)

    def __lt__(self, other: "IntegralWord") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return "I[" + "".join(str(b) for b in self.bits) + "]"


class WordSum:
    """Finite formal sum of words with exact coefficients.

    Keys may be SignedWord or IntegralWord (not mixed); zero coefficients
    are never stored.  Coefficients are Fractions throughout the exact
    algebra; numeric scalars are tolerated so regularization-parameter
    shifts by transcendental amounts stay representable.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for w, c in (terms.items() if hasattr(terms, "items") else terms):
                if c:
                    self.terms[w] = self.terms.get(w, 0) + c
                    if not self.terms[w]:
                        del self.terms[w]

    @classmethod
    def single(cls, word, coeff: Rational = 1) -> "WordSum":
        ws = cls()
        if coeff:
            ws.terms[word] = Fraction(coeff) if isinstance(coeff, int) else coeff
        return ws

    @classmethod
    def zero(cls) -> "WordSum":
        return cls()

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "WordSum") -> "WordSum":
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, 0) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        res = WordSum()
        res.terms = out
        return res

    def __sub__(self, other: "WordSum") -> "WordSum":
        return self + (-other)

    def __neg__(self) -> "WordSum":
        res = WordSum()
        res.terms = {w: -c for w, c in self.terms.items()}
        return res

    def scale(self, c) -> "WordSum":
        if not c:
            return WordSum()
        res = WordSum()
        res.terms = {w: cc * c for w, cc in self.terms.items()}
        return res

    def __rmul__(self, c) -> "WordSum":
        return self.scale(Fraction(c) if isinstance(c, int) else c)

    def __eq__(self, other) -> bool:
        return isinstance(other, WordSum) and self.terms == other.terms

    def __hash__(self):
        raise TypeError("WordSum is not hashable")

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda t: t[0].sort_key()))

    def __len__(self) -> int:
        return len(self.terms)

    def max_weight(self) -> int:
        return max((w.weight for w in self.terms), default=0)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self:
            parts.append(f"{'+ ' if c > 0 and parts else ''}{c}*{w!r}"
                         if not isinstance(c, Fraction) or c > 0 or not parts
                         else f"- {-c}*{w!r}")
        return " ".join(parts)


# ---------------------------------------------------------------------------
# stuffle and interpolated stuffle

def _as_letters(w) -> tuple:
    return w.letters if isinstance(w, SignedWord) else tuple(w)


@lru_cache(maxsize=None)
def _quasi(u: tuple, v: tuple) -> tuple:
    """Terms of u * v as ((letters, merge_count, multiplicity), ...)."""
    if not u:
        return ((v, 0, 1),)
    if not v:
        return ((u, 0, 1),)
    x, y = u[0], v[0]
    merged = SignedLetter(x.weight + y.weight, _phase(x.phase + y.phase))
    acc: dict = {}
    for head, rest, dm in (((x,), _quasi(u[1:], v), 0),
                           ((y,), _quasi(u, v[1:]), 0),
                           ((merged,), _quasi(u[1:], v[1:]), 1)):
        for w, m, c in rest:
            key = (head + w, m + dm)
            acc[key] = acc.get(key, 0) + c
    return tuple((w, m, c) for (w, m), c in acc.items())


def stuffle(a: WordSum, b: WordSum) -> WordSum:
    """Quasi-shuffle product; merged letters add weights and phases mod 1."""
    out = WordSum()
    for u, cu in a.terms.items():
        for v, cv in b.terms.items():
            c = cu * cv
            for w, _m, mult in _quasi(_as_letters(u), _as_letters(v)):
                key = SignedWord(w)
                s = out.terms.get(key, 0) + c * mult
                if s:
                    out.terms[key] = s
                else:
                    out.terms.pop(key, None)
    return out


def interp_stuffle(a: WordSum, b: WordSum, r: Rational) -> WordSum:
    """Interpolated product: the merge term carries coefficient (1 - 2r)."""
    lam = 1 - 2 * Fraction(r)
    out = WordSum()
    for u, cu in a.terms.items():
        for v, cv in b.terms.items():
            c = cu * cv
            for w, m, mult in _quasi(_as_letters(u), _as_letters(v)):
                coeff = c * mult * lam**m
                if not coeff:
                    continue
                key = SignedWord(w)
                s = out.terms.get(key, 0) + coeff
                if s:
                    out.terms[key] = s
                else:
                    out.terms.pop(key, None)
    return out


def word_product(words: Iterable[SignedWord], r: Rational = 0) -> WordSum:
    """Interpolated-stuffle product of several single words."""
    out = WordSum.single(SignedWord())
    for w in words:
        out = interp_stuffle(out, WordSum.single(w), r)
    return out


# ---------------------------------------------------------------------------
# block-merging map, reversal, antipode

@lru_cache(maxsize=None)
def _sigma_terms(letters: tuple) -> tuple:
    """((merged word, ell - k), ...) over splits into k consecutive blocks."""
    n = len(letters)
    if n == 0:
        return (((), 0),)
    out = []
    for mask in range(1 << (n - 1)):
        blocks = []
        start = 0
        for i in range(n - 1):
            if mask & (1 << i):
                blocks.append(letters[start:i + 1])
                start = i + 1
        blocks.append(letters[start:])
        merged = tuple(
            SignedLetter(sum(l.weight for l in b),
                         _phase(sum((l.phase for l in b), Fraction(0))))
            for b in blocks)
        out.append((merged, n - len(blocks)))
    return tuple(out)


def sigma(w: SignedWord, p: Rational) -> WordSum:
    """Block-merging map: coefficient p**(ell - k) on the merge into k blocks.

    The exponent ell - k (rather than k) is what reproduces the interpolated
    value t^r(2,1,3) = t(2,1,3) + r t(3,3) + r t(2,4) + r^2 t(6) and makes
    sigma a semigroup in p.
    """
    p = Fraction(p)
    out = WordSum()
    for merged, e in _sigma_terms(w.letters):
        key = SignedWord(merged)
        s = out.terms.get(key, 0) + p**e
        if s:
            out.terms[key] = s
        else:
            out.terms.pop(key, None)
    return out


def sigma_sum(ws: WordSum, p: Rational) -> WordSum:
    out = WordSum()
    for w, c in ws.terms.items():
        out = out + sigma(w, p).scale(c)
    return out


def reverse(w: SignedWord) -> SignedWord:
    return w.reverse()


def parity_sign(w: SignedWord) -> int:
    return -1 if w.depth % 2 else 1


def _block_decompositions(letters: tuple) -> Iterator[tuple[tuple, ...]]:
    n = len(letters)
    for mask in range(1 << max(n - 1, 0)):
        blocks = []
        start = 0
        for i in range(n - 1):
            if mask & (1 << i):
                blocks.append(letters[start:i + 1])
                start = i + 1
        blocks.append(letters[start:])
        yield tuple(blocks)


def antipode(w: SignedWord, r: Rational = 0, formula: str = "sigma") -> WordSum:
    """Antipode of the interpolated-stuffle Hopf algebra.

    formula="sigma" computes sigma^(1-2r) of (-1)^depth times the reversed
    word; formula="sum" uses the block decomposition
    S(z_I) = sum over I_1...I_k of (-1)^k z_{I_1} x ... x z_{I_k}
    with the interpolated product.  Both agree.
    """
    if formula == "sigma":
        rev = w.reverse()
        return sigma(rev, 1 - 2 * Fraction(r)).scale(Fraction(parity_sign(w)))
    if formula == "sum":
        if w.depth == 0:
            return WordSum.single(SignedWord())
        out = WordSum()
        for blocks in _block_decompositions(w.letters):
            prod = word_product([SignedWord(b) for b in blocks], r)
            out = out + prod.scale(Fraction(-1)**len(blocks))
        return out
    raise ValueError(f"unknown antipode formula {formula!r}")


def antipode_sum(ws: WordSum, r: Rational = 0, formula: str = "sigma") -> WordSum:
    out = WordSum()
    for w, c in ws.terms.items():
        out = out + antipode(w, r, formula).scale(c)
    return out


def hopf_convolution(w: SignedWord, r: Rational = 0) -> WordSum:
    """mu o (S (x) id) o Delta for the deconcatenation coproduct.

    Vanishes for every nonempty word (the antipode axiom).
    """
    out = WordSum()
    for i in range(w.depth + 1):
        left = antipode(SignedWord(w.letters[:i]), r)
        right = WordSum.single(SignedWord(w.letters[i:]))
        out = out + interp_stuffle(left, right, r)
    return out


# ---------------------------------------------------------------------------
# shuffle algebra on integral words

@lru_cache(maxsize=None)
def _shuffle(u: tuple, v: tuple) -> tuple:
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    acc: dict = {}
    for head, rest in ((u[:1], _shuffle(u[1:], v)), (v[:1], _shuffle(u, v[1:]))):
        for w, c in rest:
            key = head + w
            acc[key] = acc.get(key, 0) + c
    return tuple(acc.items())


def shuffle(a: WordSum, b: WordSum) -> WordSum:
    """Shuffle product of integral-word sums."""
    out = WordSum()
    for u, cu in a.terms.items():
        for v, cv in b.terms.items():
            c = cu * cv
            for w, mult in _shuffle(u.bits, v.bits):
                key = IntegralWord(w)
                s = out.terms.get(key, 0) + c * mult
                if s:
                    out.terms[key] = s
                else:
                    out.terms.pop(key, None)
    return out


def to_integral(w: SignedWord) -> tuple[int, IntegralWord]:
    """Integral word of a phase-0 composition; sign is (-1)^depth."""
    if any(l.phase != 0 for l in w.letters):
        raise ValueError("integral words are defined for phase-0 words only")
    bits: list[int] = []
    for l in w.letters:
        bits.append(1)
        bits.extend([0] * (l.weight - 1))
    return parity_sign(w), IntegralWord(bits)


def from_integral(w: IntegralWord) -> tuple[int, SignedWord]:
    """Inverse of to_integral; rejects words not starting with 1."""
    if not w.bits or w.bits[0] != 1:
        raise ValueError(f"{w!r} does not start with 1, not a composition word")
    comp: list[int] = []
    for b in w.bits:
        if b == 1:
            comp.append(1)
        else:
            comp[-1] += 1
    sw = SignedWord.from_composition(comp)
    return parity_sign(sw), sw


def dual(w: IntegralWord) -> IntegralWord:
    """Reverse the word and swap 0 <-> 1; an involution."""
    return IntegralWord(tuple(1 - b for b in reversed(w.bits)))


# ---------------------------------------------------------------------------
# enumeration helpers for the exhaustive property suites

def all_compositions(weight: int) -> Iterator[tuple[int, ...]]:
    if weight == 0:
        yield ()
        return
    for mask in range(1 << (weight - 1)):
        comp = []
        run = 1
        for i in range(weight - 1):
            if mask & (1 << i):
                comp.append(run)
                run = 1
            else:
                run += 1
        comp.append(run)
        yield tuple(comp)


def all_words(weight: int, phases: tuple = (0,)) -> Iterator[SignedWord]:
    """All words of exactly this weight with letter phases from the given set."""
    from itertools import product
    for comp in all_compositions(weight):
        for ph in product(phases, repeat=len(comp)):
            yield SignedWord(list(zip(comp, ph)))


# ---------------------------------------------------------------------------
# textual syntax and JSON

_WORD_RE = re.compile(r"^\s*(t|z|zeta)\s*\[\s*(.*?)\s*\]\s*$", re.IGNORECASE)
_ENTRY_RE = re.compile(r"^([+-]?\d+)(?:@([+-]?\d+(?:/\d+)?))?$")


def parse_word(text: str) -> tuple[str, SignedWord]:
    """Parse ``t[3,2,2,3]`` / ``z[2,-3]`` / ``z[1@1/3,2]`` into (kind, word)."""
    m = _WORD_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse word {text!r}")
    kind = "t" if m.group(1).lower() == "t" else "zeta"
    body = m.group(2)
    letters = []
    if body:
        for entry in body.split(","):
            entry = entry.strip()
            em = _ENTRY_RE.match(entry)
            if not em:
                raise ValueError(f"cannot parse word entry {entry!r} in {text!r}")
            n = int(em.group(1))
            if em.group(2) is not None:
                if n < 0:
                    raise ValueError(f"negative weight with explicit phase: {entry!r}")
                letters.append(letter(n, Fraction(em.group(2))))
            else:
                letters.append(letter(abs(n), Fraction(1, 2) if n < 0 else 0))
    return kind, SignedWord(letters)


def format_word(w: SignedWord, kind: str = "z") -> str:
    prefix = "t" if kind == "t" else "z"
    return prefix + "[" + ",".join(str(l) for l in w.letters) + "]"


def wordsum_to_json(ws: WordSum, kind: str = "z") -> list[dict]:
    out = []
    for w, c in ws:
        word_str = format_word(w, kind) if isinstance(w, SignedWord) else repr(w)
        out.append({"word": word_str, "coefficient": str(c)})
    return out


def wordsum_from_json(data: Iterable[dict]) -> WordSum:
    ws = WordSum()
    for item in data:
        _, w = parse_word(item["word"])
        ws = ws + WordSum.single(w, Fraction(item["coefficient"]))
    return ws
