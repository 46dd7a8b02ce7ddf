"""Arbitrary-precision nested sums over increasing indices.

Evaluates sums of the form

    sum over 0 < k_1 < k_2 < ... < k_d   prod_i  e(q_i)^{k_i} / (a_i k_i + b_i)^{n_i}

where e(q) = exp(2*pi*i*q) with rational q.  This covers zeta-kind
(a=1, b=0), t-kind (a=2, b=-1) and the pole-shifted denominators of the
generating series (b = -1-y or -y).

Strategy: dynamic programming gives the exact partial sums up to a cutoff
M (linear in M per depth); each level additionally carries a symbolic
asymptotic expansion of its partial-sum function in the basis

    e(q)^K * log(K)^a * K^(-s)

propagated through the levels.  Tails are resummed with Euler-Maclaurin
(phase 1) or Boole-type summation using Li_{-n} at roots of unity (other
phases), so conditionally convergent final letters need no special
treatment.  The limit constant of each level is matched numerically at M,
and a second match point serves as an error diagnostic.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, NamedTuple

import mpmath as mp

__all__ = ["Letter", "DivergentSumError", "TargetUnreachableError",
           "sum_letters", "prefix_sums", "NestedSumResult"]


class Letter(NamedTuple):
    power: int
    scale: int
    shift: object  # int or mpmath scalar; denominator is (scale*k + shift)^power
    phase: Fraction


class DivergentSumError(ValueError):
    pass


class TargetUnreachableError(ArithmeticError):
    pass


class NestedSumResult(NamedTuple):
    value: object  # mpc
    bound: object  # mpf
    m_used: int


def _mod1(q: Fraction) -> Fraction:
    return q - Fraction(q.numerator // q.denominator)


@lru_cache(maxsize=None)
def _eulerian_row(n: int) -> tuple:
    """Eulerian numbers A(n, 0..n-1)."""
    row = [1]
    for m in range(2, n + 1):
        new = [0] * m
        for k in range(m):
            left = row[k] if k < len(row) else 0
            up = row[k - 1] if k - 1 >= 0 and k - 1 < len(row) else 0
            new[k] = (k + 1) * left + (m - k) * up
        row = new
    return tuple(row)


def _phase_root(q: Fraction):
    return mp.expjpi(2 * mp.mpf(q.numerator) / q.denominator)


def _li_neg(n: int, q: Fraction):
    """Li_{-n}(e(q)) for q != 0, exact Eulerian form evaluated numerically."""
    nu = _phase_root(q)
    if n == 0:
        return nu / (1 - nu)
    row = _eulerian_row(n)
    num = mp.mpc(0)
    for k in range(len(row) - 1, -1, -1):
        num = num * nu + row[k]
    num = num * nu
    return num / (1 - nu) ** (n + 1)


def _phase_table(q: Fraction, M: int) -> list:
    """e(q)^k for k = 0..M via the cyclic subgroup."""
    d = q.denominator
    roots = [mp.expjpi(2 * mp.mpf(j) / d) for j in range(d)]
    p = q.numerator
    return [roots[(p * k) % d] for k in range(M + 1)]


# ---------------------------------------------------------------------------
# expansion algebra: dict {(phase q, logpow a, invpow s): coeff}

def _add(exp: dict, key: tuple, val) -> None:
    cur = exp.get(key)
    exp[key] = val if cur is None else cur + val


def _letter_expansion(lt: Letter, N: int) -> dict:
    """(scale*k + shift)^(-power) as sum of c * k^(-s), s <= N."""
    n, a, b = lt.power, lt.scale, lt.shift
    out: dict = {}
    c = mp.mpf(a) ** (-n)
    if b == 0:
        out[(Fraction(0), 0, n)] = c
        return out
    ratio = mp.mpmathify(-b) / a
    for l in range(0, max(N - n, 0) + 1):
        if l > 0:
            c = c * ratio * (n + l - 1) / l
        out[(Fraction(0), 0, n + l)] = c
    return out


@lru_cache(maxsize=None)
def _log_shift_powers(jmax: int, N: int) -> tuple:
    """Rational coefficient rows: L^j where L = log(1 - 1/k) = -sum k^-m/m."""
    rows = [{0: Fraction(1)}]
    base = {m: Fraction(-1, m) for m in range(1, N + 1)}
    cur = {0: Fraction(1)}
    for _ in range(jmax):
        new: dict = {}
        for e1, c1 in cur.items():
            for e2, c2 in base.items():
                e = e1 + e2
                if e <= N:
                    new[e] = new.get(e, Fraction(0)) + c1 * c2
        cur = new
        rows.append(cur)
    return tuple(tuple(sorted(r.items())) for r in rows)


def _shift_expansion(exp: dict, N: int) -> dict:
    """Re-expand D(k-1) in the k-basis."""
    if not exp:
        return {}
    amax = max(a for (_q, a, _s) in exp)
    lrows = _log_shift_powers(amax, N)
    out: dict = {}
    for (q, a, s), c in exp.items():
        phase_fix = c if q == 0 else c * _phase_root(_mod1(-q))
        # (k-1)^(-s) = k^(-s) sum_m binom(s+m-1, m) k^(-m)
        for m in range(0, max(N - s, 0) + 1):
            bc = comb(s + m - 1, m) if m > 0 else 1
            base = phase_fix * bc
            for j in range(a + 1):
                cj = base * comb(a, j)
                for e, lc in lrows[j]:
                    stot = s + m + e
                    if stot > N or (j > 0 and e == 0 and j != 0 and False):
                        continue
                    if j > 0 and e < j:
                        # L^j starts at k^-j
                        continue
                    _add(out, (q, a - j, stot), cj * lc)
    return out


def _mul_expansions(e1: dict, e2: dict, N: int) -> dict:
    out: dict = {}
    for (q1, a1, s1), c1 in e1.items():
        for (q2, a2, s2), c2 in e2.items():
            s = s1 + s2
            if s > N:
                continue
            _add(out, (_mod1(q1 + q2), a1 + a2, s), c1 * c2)
    return out


def _derivative(f: dict) -> dict:
    """d/dK of sum c log^a K K^(-s)."""
    out: dict = {}
    for (a, s), c in f.items():
        if a:
            _add(out, (a - 1, s + 1), c * a)
        _add(out, (a, s + 1), -c * s)
    return out


def _sum_expansion(em: dict, N: int, M: int, drop) -> dict:
    """K-dependent part of sum_{k<=K} of the expansion terms."""
    out: dict = {}
    logM = mp.log(M)
    for (q, a, s), c in em.items():
        mag = abs(c) * logM ** a * mp.mpf(M) ** (-s)
        if mag < drop:
            continue
        if q == 0:
            if s == 0:
                raise DivergentSumError("non-decaying phase-free summand")
            if s == 1:
                _add(out, (q, a + 1, 0), c / (a + 1))
            else:
                for i in range(a + 1):
                    ff = factorial(a) // factorial(a - i)
                    _add(out, (q, a - i, s - 1),
                         -c * ff / mp.mpf(s - 1) ** (i + 1))
            _add(out, (q, a, s), c / 2)
            f = {(a, s): mp.mpf(1)}
            r = 0
            while True:
                r += 1
                f = _derivative(_derivative(f)) if r > 1 else _derivative(f)
                smin = min(ss for (_aa, ss) in f)
                if smin > N:
                    break
                coef = mp.bernoulli(2 * r) / factorial(2 * r)
                top = max(abs(cc) for cc in f.values())
                if abs(c) * abs(coef) * top * logM ** a * mp.mpf(M) ** (-smin) < drop:
                    break
                for (aa, ss), cc in f.items():
                    if ss <= N:
                        _add(out, (q, aa, ss), c * coef * cc)
        else:
            f = {(a, s): mp.mpf(1)}
            invfact = mp.mpf(1)
            empty_run = 0
            for n in range(0, N + 1):
                if n > 0:
                    f = _derivative(f)
                    invfact = invfact / n
                    smin = min(ss for (_aa, ss) in f)
                    if smin > N:
                        break
                li = _li_neg(n, q)
                scale = -c * li * invfact
                kept = False
                for (aa, ss), cc in f.items():
                    if ss <= N:
                        term = scale * cc
                        if abs(term) * logM ** aa * mp.mpf(M) ** (-ss) >= drop:
                            _add(out, (q, aa, ss), term)
                            kept = True
                # negative-order polylogs vanish on a sublattice (e.g. at -1
                # for even order), so only stop after a run of empty orders
                empty_run = 0 if kept else empty_run + 1
                if n > 4 and empty_run >= 3:
                    break
    return out


def _eval_expansion(exp: dict, K: int):
    if not exp:
        return mp.mpc(0)
    logK = mp.log(K)
    total = mp.mpc(0)
    for (q, a, s), c in exp.items():
        v = c * logK ** a * mp.mpf(K) ** (-s)
        if q != 0:
            d = q.denominator
            v = v * mp.expjpi(2 * mp.mpf((q.numerator * K) % d) / d)
        total += v
    return total


def _prune(exp: dict, M: int, drop) -> dict:
    logM = mp.log(M)
    return {key: c for key, c in exp.items()
            if abs(c) * logM ** key[1] * mp.mpf(M) ** (-key[2]) >= drop}


# ---------------------------------------------------------------------------
# public entry points

def prefix_sums(letters: Iterable[Letter], M: int, dps: int) -> list:
    """Final-level partial sums P(0..M) of the nested sum, exactly."""
    letters = list(letters)
    with mp.workdps(dps):
        prev = [mp.mpf(1)] * (M + 1)
        for lt in letters:
            table = _phase_table(lt.phase, M)
            cur = [mp.mpc(0)] * (M + 1)
            acc = mp.mpc(0)
            for k in range(1, M + 1):
                den = mp.mpmathify(lt.scale * k + lt.shift)
                acc = acc + table[k] * den ** (-lt.power) * prev[k - 1]
                cur[k] = acc
            prev = cur
        return prev


def _auto_params(dps: int, depth: int, min_sep) -> tuple[int, int]:
    M = max(64, int(4.2 * dps) + 8 * depth)
    N = max(16, int(1.05 * dps) + 10)
    if min_sep is not None and min_sep > 0:
        need = int(3.0 * N / min_sep) + 16
        M = max(M, need)
    return M, N


def sum_letters(letters: Iterable[Letter], dps: int, M: int | None = None,
                order: int | None = None, mmax: int | None = None,
                target=None) -> NestedSumResult:
    """Value of the infinite nested sum with an error estimate."""
    letters = tuple(letters)
    if not letters:
        return NestedSumResult(mp.mpc(1), mp.mpf(0), 0)
    with mp.workdps(dps):
        seps = [abs(1 - _phase_root(lt.phase)) for lt in letters if lt.phase != 0]
        min_sep = min(seps) if seps else None
        autoM, autoN = _auto_params(dps, len(letters), min_sep)
        M = M or autoM
        N = order or autoN
        if mmax is not None and M > mmax:
            M = mmax
        drop = mp.mpf(10) ** (-(dps + 12))

        attempt = 0
        while True:
            value, bound = _run(letters, M, N, drop)
            if target is None or bound <= target:
                return NestedSumResult(value, bound, M)
            attempt += 1
            if attempt > 2 or (mmax is not None and 2 * M > mmax):
                raise TargetUnreachableError(
                    f"error bound {mp.nstr(bound, 5)} above target "
                    f"{mp.nstr(mp.mpf(target), 5)} at M={M}")
            M, N = 2 * M, N + 12


def _run(letters: tuple, M: int, N: int, drop) -> tuple:
    prev_arr = [mp.mpf(1)] * (M + 1)
    C = mp.mpc(1)
    D: dict = {}
    diag_off = max(5, M // 10)
    diag = mp.mpf(0)
    scale = mp.mpf(1)
    for lt in letters:
        table = _phase_table(lt.phase, M)
        cur = [mp.mpc(0)] * (M + 1)
        acc = mp.mpc(0)
        for k in range(1, M + 1):
            den = mp.mpmathify(lt.scale * k + lt.shift)
            acc = acc + table[k] * den ** (-lt.power) * prev_arr[k - 1]
            cur[k] = acc
        lexp = _letter_expansion(lt, N)
        inner = dict(_shift_expansion(D, N))
        _add(inner, (Fraction(0), 0, 0), C)
        summand = _mul_expansions(lexp, inner, N)
        if lt.phase != 0:
            summand = {(_mod1(q + lt.phase), a, s): c
                       for (q, a, s), c in summand.items()}
        local_drop = drop * scale
        Dn = _prune(_sum_expansion(summand, N, M, local_drop), M, local_drop)
        Cn = cur[M] - _eval_expansion(Dn, M)
        d2 = abs(cur[M - diag_off] - _eval_expansion(Dn, M - diag_off) - Cn)
        diag = max(diag, d2)
        prev_arr, C, D = cur, Cn, Dn
        scale = max(scale, abs(C))
    for (q, a, s) in D:
        if s == 0 and (a > 0 or q == 0):
            raise DivergentSumError(
                "nested sum diverges (word must be regularized first)")
    logM = mp.log(M)
    topband = mp.mpf(0)
    for (q, a, s), c in D.items():
        if s >= N - 2:
            topband += abs(c) * logM ** a * mp.mpf(M) ** (-s)
    floor = mp.mpf(10) ** (-(mp.mp.dps - 6)) * (1 + abs(C))
    bound = 4 * (topband + floor)
    if diag > bound:
        bound = 4 * diag
    return C, bound
