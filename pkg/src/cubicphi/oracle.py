"""Brute-force reference computations, kept apart from the fast paths.

Cubic fields are found by Hunter's theorem instead of form reduction: every
cubic field K contains an algebraic integer alpha, not rational, with trace
in {-1, 0, 1} and

    T2(alpha) = sum |alpha_i|^2 <= 1/3 + (2/3) sqrt(|disc K|),

so scanning monic x^3 + a2 x^2 + a1 x + a0 in that box meets every field.
For each candidate the field discriminant comes from the polynomial one by
removing the index, found prime by prime with the Dedekind criterion and
a p-adic lift of the integral basis.  Factorisation is left to sympy so no
arithmetic helper is shared with the main code.  The only shared piece is
forms.reduce_form, used at the very end to name each class canonically.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from sympy import factorint, primerange

from .forms import BinaryCubicForm, reduce_form

HUNTER_LIMIT = 10**6
# slack on the T2 box; over-enumeration only costs time
_T2_SLACK = 1e-6
_CHUNK = 1 << 21


class OracleLimitError(ValueError):
    """Request exceeds the desk-scale limit of the brute-force oracle."""


@dataclass
class OracleReport:
    scope: str
    expected: object
    actual: object
    passed: bool
    first_discrepancy: Optional[str] = None
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        tail = f"  first discrepancy: {self.first_discrepancy}" if self.first_discrepancy else ""
        return f"[{tag}] {self.scope}{tail}"


def compare_multisets(scope: str, expected, actual) -> OracleReport:
    e, a = Counter(expected), Counter(actual)
    if e == a:
        return OracleReport(scope, len(expected), len(actual), True)
    missing = sorted(e - a)
    extra = sorted(a - e)
    first = f"missing {missing[0]}" if missing else f"unexpected {extra[0]}"
    return OracleReport(scope, len(expected), len(actual), False, first,
                        {"missing": missing[:20], "extra": extra[:20]})


def compare_counts(scope: str, expected, actual) -> OracleReport:
    if expected == actual:
        return OracleReport(scope, expected, actual, True)
    if isinstance(expected, (list, tuple)) and isinstance(actual, (list, tuple)):
        idx = next((i for i, (x, y) in enumerate(zip(expected, actual)) if x != y), min(len(expected), len(actual)))
        first = f"index {idx + 1}: expected {expected[idx] if idx < len(expected) else None}, got {actual[idx] if idx < len(actual) else None}"
    else:
        first = f"expected {expected}, got {actual}"
    return OracleReport(scope, expected, actual, False, first)


# --- polynomial helpers (monic cubic given as (a2, a1, a0)) ---

def poly_disc(a2: int, a1: int, a0: int) -> int:
    return 18 * a2 * a1 * a0 + a2 * a2 * a1 * a1 - 4 * a1**3 - 4 * a2**3 * a0 - 27 * a0 * a0


def _eval(f, x):
    a2, a1, a0 = f
    return ((x + a2) * x + a1) * x + a0


def _integer_root(f) -> bool:
    for r in np.roots([1, *f]):
        if abs(r.imag) < 1e-6:
            k = round(r.real)
            for cand in (k - 1, k, k + 1):
                if _eval(f, cand) == 0:
                    return True
    return False


def _fp_trim(u):
    while u and u[0] == 0:
        u = u[1:]
    return u


def _fp_divmod(u, v, p):
    u = list(u)
    inv = pow(v[0], -1, p)
    q = []
    while len(u) >= len(v):
        c = u[0] * inv % p
        q.append(c)
        for i, x in enumerate(v):
            u[i] = (u[i] - c * x) % p
        u.pop(0)
    return q, _fp_trim(u)


def _fp_gcd(u, v, p):
    u, v = _fp_trim([x % p for x in u]), _fp_trim([x % p for x in v])
    while v:
        u, v = v, _fp_divmod(u, v, p)[1]
    return u


def _roots_mod(f, p):
    """Roots of f in F_p, listed with multiplicity."""
    a2, a1, a0 = f
    out = []
    for r in range(p):
        if _eval(f, r) % p == 0:
            # multiplicity from f' and f''/2 = 3r + a2
            if (3 * r * r + 2 * a2 * r + a1) % p:
                out.append(r)
            elif (3 * r + a2) % p:
                out += [r, r]
            else:
                out += [r, r, r]
    return out


def dedekind_maximal(f, p: int) -> bool:
    """Dedekind's criterion: is Z[alpha] maximal at p for alpha a root of f?

    Write f = prod g_i^e_i mod p, g = prod g_i and h = f / g, both lifted to
    Z[x].  Then Z[alpha] is p-maximal iff gcd(g, h, (f - g h)/p) = 1 mod p.
    For a cubic every repeated factor is linear, so g and h are assembled
    from the roots; an irreducible quadratic or cubic factor is separable.
    """
    mult = Counter(_roots_mod(f, p))
    if all(e == 1 for e in mult.values()):
        return True
    # a repeated factor of a cubic forces it to split into linear factors
    g, h = [1], [1]
    for r, e in mult.items():
        g = _int_mul(g, [1, -r])
        for _ in range(e - 1):
            h = _int_mul(h, [1, -r])
    gh = _int_mul(g, h)
    full = [1, *f]
    F = [(x - y) // p for x, y in zip(full, [0] * (len(full) - len(gh)) + gh)]
    assert all((x - y) % p == 0 for x, y in zip(full, [0] * (len(full) - len(gh)) + gh))
    common = _fp_gcd(_fp_gcd(g, h, p), F, p)
    return len(common) <= 1


def _int_mul(u, v):
    out = [0] * (len(u) + len(v) - 1)
    for i, x in enumerate(u):
        for j, y in enumerate(v):
            out[i + j] += x * y
    return out


# --- integral basis by p-adic lifting ---

def _companion(f):
    a2, a1, a0 = f
    return np.array([[0, 0, -a0], [1, 0, -a1], [0, 1, -a2]], dtype=object)


def _charpoly(M):
    tr = M[0, 0] + M[1, 1] + M[2, 2]
    e2 = (M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0] + M[0, 0] * M[2, 2] - M[0, 2] * M[2, 0]
          + M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
    det = (M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
           - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
           + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0]))
    return tr, e2, det


def _integral(C, C2, v, w, m) -> bool:
    """Is (alpha^2 + v alpha + w)/m an algebraic integer?"""
    M = C2 + v * C + w * np.identity(3, dtype=object)
    tr, e2, det = _charpoly(M)
    return tr % m == 0 and e2 % (m * m) == 0 and det % (m**3) == 0


def _lift_p(f, p, max_k, C, C2):
    """Largest k with (alpha^2 + v alpha + w)/p^k integral, and that (v, w).

    alpha must be primitive (no (alpha - r)/p integral), so Z + Z alpha is
    saturated in the maximal order and each lift is unique mod p.
    """
    v = w = 0
    k = 0
    while k < max_k:
        pk = p**k
        found = None
        for t in range(p):
            v1 = v + t * pk
            if p != 3:
                # trace condition fixes u mod p
                tr = (C2 + v1 * C).trace() + 3 * w
                u = (-tr // pk) * pow(3, -1, p) % p if tr % pk == 0 else None
                us = [] if u is None else [u]
            else:
                us = range(p)
            for u in us:
                if _integral(C, C2, v1, w + u * pk, pk * p):
                    found = (v1, w + u * pk)
                    break
            if found:
                break
        if not found:
            break
        v, w = found
        k += 1
    return k, v, w


def _imprimitive(f, sq_factors) -> bool:
    """Is (alpha - r)/p integral for some prime p and integer r?"""
    a2, a1, a0 = f
    for p, e in sq_factors.items():
        if e < 3:
            continue
        for r in range(p):
            b2 = 3 * r + a2
            b1 = (3 * r + 2 * a2) * r + a1
            b0 = _eval(f, r)
            if b2 % p == 0 and b1 % (p * p) == 0 and b0 % (p**3) == 0:
                return True
    return False


def field_data(f, sq_factors=None):
    """(field discriminant, index form) for the field of a root of f.

    Returns None when alpha is imprimitive in the sense of _imprimitive.
    ``sq_factors`` maps p to the exponent of p in the square part of disc(f).
    """
    a2, a1, a0 = f
    Delta = poly_disc(a2, a1, a0)
    if sq_factors is None:
        sq_factors = {p: e // 2 for p, e in factorint(abs(Delta)).items() if e >= 2}
    if _imprimitive(f, sq_factors):
        return None
    C = _companion(f)
    C2 = C.dot(C)
    index, v, w = 1, 0, 0
    for p, e in sorted(sq_factors.items()):
        if dedekind_maximal(f, p):
            continue
        k, vp, wp = _lift_p(f, p, e, C, C2)
        # combine with CRT
        pk = p**k
        v = _crt(v, index, vp, pk)
        w = _crt(w, index, wp, pk)
        index *= pk
    dK = Delta // (index * index)
    return dK, _index_form(f, v, w, index)


def _crt(x, m, y, n):
    return (x + m * ((y - x) * pow(m, -1, n) % n)) % (m * n)


def _index_form(f, v, w, i) -> BinaryCubicForm:
    """Index form of the order with basis 1, alpha, theta = (alpha^2 + v alpha + w)/i."""
    a2, a1, a0 = f

    def red(c):
        # reduce a polynomial in alpha (ascending coefficients) mod f
        c = list(c) + [0] * max(0, 5 - len(c))
        for deg in (4, 3):
            t = c[deg]
            c[deg] = 0
            c[deg - 1] -= a2 * t
            c[deg - 2] -= a1 * t
            c[deg - 3] -= a0 * t
        return c[:3]

    def mul(x, y):
        out = [0] * 5
        for i1, s in enumerate(x):
            for j1, t in enumerate(y):
                out[i1 + j1] += s * t
        return red(out)

    def coords(c, den):
        # coordinates in the basis 1, alpha, theta of (c0 + c1 alpha + c2 alpha^2)/den
        c0, c1, c2 = c
        out = (c0 - w * c2, c1 - v * c2, i * c2)
        if any(x % den for x in out):
            raise ArithmeticError("theta does not generate an order with alpha")
        return tuple(x // den for x in out)

    alpha = [0, 1, 0]
    theta = [w, v, 1]  # i * theta
    _, Aa, At = coords(mul(alpha, alpha), 1)
    _, Ba, Bt = coords(mul(alpha, theta), i)
    _, Ca, Ct = coords(mul(theta, theta), i * i)
    return BinaryCubicForm(At, 2 * Bt - Aa, Ct - 2 * Ba, -Ca)


def _form_disc(F) -> int:
    a, b, c, d = F
    return b * b * c * c - 4 * a * c**3 - 4 * b**3 * d - 27 * a * a * d * d + 18 * a * b * c * d


# --- Hunter search ---

def _square_part(absD: np.ndarray):
    """Largest s with s^2 | n, for each n (n < 2^62)."""
    rem = absD.copy()
    sq = np.ones_like(rem)
    top = int(round(float(rem.max()) ** (1 / 3))) + 2 if len(rem) else 2
    for p in primerange(2, top + 1):
        p2 = p * p
        while True:
            m = rem % p2 == 0
            if not m.any():
                break
            rem[m] //= p2
            sq[m] *= p
        m = rem % p == 0
        rem[m] //= p
    # what is left is 1, q, q^2 or q*r with q, r > cube root
    r = np.sqrt(rem.astype(np.float64)).round().astype(np.int64)
    m = (r * r == rem) & (rem > 1)
    sq[m] *= r[m]
    return sq


def _candidates(B: int, sign: int, resolvent: Optional[int]):
    T = 1 / 3 + 2 / 3 * math.sqrt(B)
    A1max = int(T) + 1
    A0max = int((T / 3) ** 1.5) + 1
    a0 = np.arange(-A0max, A0max + 1, dtype=np.int64)
    rows_per_chunk = max(1, _CHUNK // len(a0))
    for a2 in (-1, 0, 1):
        for lo in range(-A1max, A1max + 1, rows_per_chunk):
            a1 = np.arange(lo, min(lo + rows_per_chunk, A1max + 1), dtype=np.int64)
            A1, A0 = np.meshgrid(a1, a0, indexing="ij")
            A1, A0 = A1.ravel(), A0.ravel()
            disc = 18 * a2 * A1 * A0 + a2 * a2 * A1 * A1 - 4 * A1**3 - 4 * a2**3 * A0 - 27 * A0 * A0
            keep = disc > 0 if sign > 0 else disc < 0
            A1, A0, disc = A1[keep], A0[keep], disc[keep]
            if sign > 0:
                T2 = a2 * a2 - 2 * A1.astype(np.float64)
            else:
                # one real root r; the complex pair has |z|^2 = -a0 / r
                p = A1 - a2 * a2 / 3.0
                q = 2 * a2**3 / 27.0 - a2 * A1 / 3.0 + A0
                dd = np.sqrt(q * q / 4 + p**3 / 27)
                r = np.cbrt(-q / 2 + dd) + np.cbrt(-q / 2 - dd) - a2 / 3.0
                with np.errstate(divide="ignore", invalid="ignore"):
                    T2 = np.where(r != 0, r * r - 2 * A0 / np.where(r != 0, r, 1), 0.0)
            keep = T2 <= T * (1 + _T2_SLACK) + _T2_SLACK
            A1, A0, disc = A1[keep], A0[keep], disc[keep]
            if not len(disc):
                continue
            absD = np.abs(disc)
            if resolvent is not None:
                keep = absD % abs(resolvent) == 0
                A1, A0, disc, absD = A1[keep], A0[keep], disc[keep], absD[keep]
                q = absD // abs(resolvent)
                s = np.sqrt(q.astype(np.float64)).round().astype(np.int64)
                keep = s * s == q
                A1, A0, disc, absD = A1[keep], A0[keep], disc[keep], absD[keep]
                if not len(disc):
                    continue
            # a rational root survives reduction mod every small prime
            maybe = np.zeros(len(A1), dtype=bool) | True
            for p in (2, 3, 5, 7, 11, 13):
                hit = np.zeros(len(A1), dtype=bool)
                for r in range(p):
                    hit |= (((r + a2) * r + A1) * r + A0) % p == 0
                maybe &= hit
            sq = _square_part(absD)
            keep = absD // (sq * sq) <= B
            for x1, x0, s, m in zip(A1[keep].tolist(), A0[keep].tolist(), sq[keep].tolist(), maybe[keep].tolist()):
                yield (a2, x1, x0), s, m


def hunter_enumerate(B: int, sign, resolvent: Optional[int] = None) -> list[BinaryCubicForm]:
    """All cubic fields with 0 < sign*disc <= B, as canonical forms.

    ``resolvent`` restricts to fields whose discriminant is resolvent * f^2.
    Output is sorted by (|disc|, form) with one entry per field.
    """
    s = 1 if sign in (1, "+") else -1 if sign in (-1, "-") else None
    if s is None:
        raise ValueError(f"sign must be + or -, got {sign!r}")
    if B > HUNTER_LIMIT:
        raise OracleLimitError(f"oracle bound {B} exceeds {HUNTER_LIMIT}")
    if B < 1:
        return []
    found = set()
    for f, sq, maybe_reducible in _candidates(B, s, resolvent):
        if maybe_reducible and _integer_root(f):
            continue
        sq_factors = {int(p): e for p, e in factorint(sq).items()} if sq > 1 else {}
        data = field_data(f, sq_factors)
        if data is None:
            continue
        dK, F = data
        if abs(dK) > B:
            continue
        if resolvent is not None and not _is_square_ratio(dK, resolvent):
            continue
        if _form_disc(F) != dK:
            raise AssertionError(f"index form {F} of {f} has disc {_form_disc(F)} != {dK}")
        found.add(reduce_form(F))
    return sorted(found, key=lambda F: (abs(_form_disc(F)), tuple(F)))


def _is_square_ratio(d: int, D: int) -> bool:
    if d % D:
        return False
    q = d // D
    return q > 0 and math.isqrt(q) ** 2 == q


def resolvent_of(disc: int) -> tuple[int, int]:
    """(D, f) with disc = D f^2, D fundamental; via sympy factorisation."""
    core, f = (1 if disc > 0 else -1), 1
    for p, e in factorint(abs(disc)).items():
        f *= p ** (e // 2)
        if e % 2:
            core *= p
    if core % 4 != 1:
        core *= 4
        f //= 2
    return core, f


def direct_count_by_f(D: int, F: int) -> list[int]:
    """[#fields of disc D f^2 for f = 1..F] from the Hunter search."""
    if F < 1:
        raise ValueError("F must be >= 1")
    bound = abs(D) * F * F
    if bound > HUNTER_LIMIT:
        raise OracleLimitError(f"|D| F^2 = {bound} exceeds {HUNTER_LIMIT}")
    counts = [0] * F
    for form in hunter_enumerate(bound, 1 if D > 0 else -1, resolvent=D):
        d = _form_disc(form)
        f = math.isqrt(d // D)
        counts[f - 1] += 1
    return counts


def direct_sextic(X: int, sign) -> int:
    """S3-sextic fields with 0 < sign*Disc < X, counted from cubic fields directly."""
    X = int(X)
    if X < 1:
        raise ValueError("X must be positive")
    if X > 10**9:
        raise OracleLimitError("direct sextic count is limited to X <= 10^9")
    s = 1 if sign in (1, "+") else -1
    # |D|^3 f^4 < X implies |disc K| = |D| f^2 < sqrt(X)
    bound = math.isqrt(X)
    total = 0
    for form in hunter_enumerate(bound, s):
        D, f = resolvent_of(_form_disc(form))
        if D != 1 and abs(D) ** 3 * f**4 < X:
            total += 1
    return total


def field_counts(B: int, sign) -> Counter:
    """Number of cubic fields of each discriminant with 0 < sign*disc <= B."""
    return Counter(_form_disc(F) for F in hunter_enumerate(B, sign))
