"""Integral binary cubic forms and enumeration of cubic fields through them.

A form F(x, y) = a x^3 + b x^2 y + c x y^2 + d y^3 is stored as a
:class:`BinaryCubicForm` tuple.  ``GL_2(Z)`` acts by substitution,
``act(F, (p, q, r, s))(x, y) = F(p x + q y, r x + s y)``; the element ``-I``
sends F to -F, so a class always contains members with ``a > 0``.

Canonical representatives
-------------------------
Each class is represented through a positive definite quadratic covariant:

* ``disc > 0``: the Hessian ``(P, Q, R) = (b^2 - 3ac, bc - 9ad, c^2 - 3bd)``;
* ``disc < 0``: the quadratic factor ``x^2 + s x y + n y^2`` of F over the
  reals, whose reducedness ``|s| <= 1 <= n`` is decided exactly by the
  integer inequalities in :func:`_neg_reduced`.

Among the members whose covariant is reduced, the canonical form minimises
``(a <= 0, b < 0, a, b, c, d)``: positive ``a`` first, then ``b >= 0``, then
lexicographically least.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import gcd, isqrt
from typing import Callable, Iterable, NamedTuple, Optional

import numpy as np

from .arith import SquarePrimeSieve, factorize, iroot

log = logging.getLogger(__name__)

MAX_ENUMERATION_DISC = 10**9


class EnumerationLimitError(OverflowError):
    """Raised when an enumeration request exceeds the supported range."""


class BinaryCubicForm(NamedTuple):
    a: int
    b: int
    c: int
    d: int

    def __call__(self, x: int, y: int) -> int:
        return ((self.a * x + self.b * y) * x + self.c * y * y) * x + self.d * y**3

    @property
    def disc(self) -> int:
        return disc(self)

    def hessian(self) -> tuple[int, int, int]:
        return hessian(self)

    def __str__(self) -> str:
        return f"({self.a}, {self.b}, {self.c}, {self.d})"


def disc(F: Iterable[int]) -> int:
    a, b, c, d = F
    return 18 * a * b * c * d + b * b * c * c - 4 * a * c**3 - 4 * b**3 * d - 27 * a * a * d * d


def hessian(F: Iterable[int]) -> tuple[int, int, int]:
    a, b, c, d = F
    return b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d


def act(F: Iterable[int], g: tuple[int, int, int, int]) -> BinaryCubicForm:
    """Return F(p x + q y, r x + s y) for g = (p, q, r, s)."""
    a, b, c, d = F
    p, q, r, s = g
    # F(u, v) with u = p x + q y, v = r x + s y, expanded by columns
    A = a * p**3 + b * p * p * r + c * p * r * r + d * r**3
    B = 3 * a * p * p * q + b * (p * p * s + 2 * p * q * r) + c * (q * r * r + 2 * p * r * s) + 3 * d * r * r * s
    C = 3 * a * p * q * q + b * (q * q * r + 2 * p * q * s) + c * (p * s * s + 2 * q * r * s) + 3 * d * r * s * s
    D = a * q**3 + b * q * q * s + c * q * s * s + d * s**3
    return BinaryCubicForm(A, B, C, D)


def _mul(g, h):
    return (g[0] * h[0] + g[1] * h[2], g[0] * h[1] + g[1] * h[3], g[2] * h[0] + g[3] * h[2], g[2] * h[1] + g[3] * h[3])


# every g in GL_2(Z) with entries in {-1, 0, 1}; covers all reduced members
# of a class once one reduced member is known
_SMALL_GL2 = tuple(g for g in itertools.product((-1, 0, 1), repeat=4) if abs(g[0] * g[3] - g[1] * g[2]) == 1)


def canonical_key(F: BinaryCubicForm) -> tuple:
    a, b, c, d = F
    return (a <= 0, b < 0, a, b, c, d)


def _pos_reduced(F) -> bool:
    P, Q, R = hessian(F)
    return abs(Q) <= P <= R


def _neg_reduced(F) -> bool:
    """Non-strict reducedness of the real quadratic factor.

    Irreducible forms are handled with a > 0.  A reducible form whose
    rational root sits at infinity is y (b x^2 + c x y + d y^2) and counts as
    reduced when that quadratic is, with b > 0.
    """
    a, b, c, d = F
    if a == 0:
        return 0 < b and abs(c) <= b <= d
    if a < 0:
        return False
    if d * d - b * d + a * c - a * a < 0:
        return False
    t = a * d - b * c
    return -(a - b) ** 2 - a * c <= t <= (a + b) ** 2 + a * c


def _reduce_hessian(F: BinaryCubicForm) -> BinaryCubicForm:
    while True:
        P, Q, R = hessian(F)
        if P <= 0:
            raise ValueError(f"Hessian of {F} is not positive definite")
        if abs(Q) > P:
            k = (P - Q) // (2 * P)
            F = act(F, (1, k, 0, 1))
        elif P > R:
            F = act(F, (0, 1, 1, 0))
        else:
            return F


def _real_root(F) -> float:
    a, b, c, d = F
    roots = np.roots([float(a), float(b), float(c), float(d)])
    return float(roots[np.argmin(np.abs(roots.imag))].real)


def _reduce_real_quadratic(F: BinaryCubicForm) -> BinaryCubicForm:
    """Move F close to the reduced region of its real quadratic factor."""
    for _ in range(64):
        if F.a == 0:
            if _neg_reduced(F) or _neg_reduced(BinaryCubicForm(*(-x for x in F))):
                return F
            # (1:0) is a rational root; move a non-root there
            F = next(G for G in (act(F, g) for g in ((0, 1, 1, 0), (1, 1, 1, 0), (1, -1, 1, 0))) if G.a != 0)
        a, b, c, d = F
        if a < 0:
            F = BinaryCubicForm(-a, -b, -c, -d)
            a, b, c, d = F
        if _neg_reduced(F):
            return F
        theta = _real_root(F)
        s = b / a + theta
        n = c / a + theta * s
        # Gauss reduction of x^2 + s xy + n y^2, accumulating the substitution
        P, Q, R = 1.0, s, n
        g = (1, 0, 0, 1)
        for _ in range(200):
            if abs(Q) > P * (1 + 1e-12):
                k = -round(Q / (2 * P))
                Q, R = Q + 2 * P * k, P * k * k + Q * k + R
                g = _mul(g, (1, k, 0, 1))
            elif P > R * (1 + 1e-12):
                P, R = R, P
                g = _mul(g, (0, 1, 1, 0))
            else:
                break
        if g == (1, 0, 0, 1):
            return F
        F = act(F, g)
    return F


def reduce_form(F: Iterable[int]) -> BinaryCubicForm:
    """Canonical representative of the GL_2(Z)-class of F (disc(F) != 0)."""
    F = BinaryCubicForm(*F)
    D = disc(F)
    if D == 0:
        raise ValueError(f"form {F} has zero discriminant")
    if D > 0:
        F = _reduce_hessian(F)
        test = _pos_reduced
    else:
        F = _reduce_real_quadratic(F)
        test = _neg_reduced
    best = None
    for _ in range(8):
        cands = [G for G in (act(F, g) for g in _SMALL_GL2) if test(G)]
        if cands:
            best = min(cands, key=canonical_key)
            break
        # numerical reduction landed next to the region; step once more
        F = _reduce_real_quadratic(act(F, (0, 1, 1, 0)))
    if best is None:
        raise ArithmeticError(f"could not reduce {F}")
    return best


def is_reduced(F: Iterable[int]) -> bool:
    """True iff F is the canonical representative of its class."""
    F = BinaryCubicForm(*F)
    return reduce_form(F) == F


# -- roots mod p ------------------------------------------------------------


def _poly_mod(coeffs, p):
    """Strip leading zeros of a coefficient list (highest degree first) mod p."""
    out = [x % p for x in coeffs]
    while out and out[0] == 0:
        out.pop(0)
    return out


def _poly_rem(u, v, p):
    u = list(u)
    inv = pow(v[0], -1, p)
    while len(u) >= len(v):
        q = u[0] * inv % p
        for i in range(len(v)):
            u[i] = (u[i] - q * v[i]) % p
        u.pop(0)
        while u and u[0] == 0:
            u.pop(0)
    return u


def _poly_gcd(u, v, p):
    while v:
        u, v = v, _poly_rem(u, v, p)
    return u


def _multiple_finite_roots(F, p: int) -> list[int]:
    """Residues r mod p with (x - r y)^2 dividing F mod p."""
    a, b, c, d = F
    if p < 64:
        out = []
        for r in range(p):
            if (((a * r + b) * r + c) * r + d) % p == 0 and ((3 * a * r + 2 * b) * r + c) % p == 0:
                out.append(r)
        return out
    f = _poly_mod([a, b, c, d], p)
    df = _poly_mod([3 * a, 2 * b, c], p)
    if not f:
        return list(range(p))
    if not df:
        return []
    g = _poly_gcd(f, df, p)
    if len(g) == 2:
        return [(-g[1] * pow(g[0], -1, p)) % p]
    if len(g) == 3:
        # (x - r)^2 with p > 3
        return [(-g[1] * pow(2 * g[0], -1, p)) % p]
    return []


def is_maximal_at(F: Iterable[int], p: int) -> bool:
    """Whether the cubic ring of F is maximal at the prime p."""
    a, b, c, d = F
    if a % p == 0 and b % p == 0 and c % p == 0 and d % p == 0:
        return False
    if a % p == 0 and b % p == 0 and a % (p * p) == 0:
        return False
    for r in _multiple_finite_roots(F, p):
        if (((a * r + b) * r + c) * r + d) % (p * p) == 0:
            return False
    return True


def is_maximal(F: Iterable[int], sieve: Optional[SquarePrimeSieve] = None) -> bool:
    D = disc(F)
    primes = sieve.square_primes(D) if sieve else [p for p, e in factorize(abs(D)).items() if e >= 2]
    return all(is_maximal_at(F, p) for p in primes)


def maximal_overform(F: Iterable[int]) -> BinaryCubicForm:
    """Form of the maximal order containing the cubic ring of F (F irreducible)."""
    F = BinaryCubicForm(*F)
    if disc(F) == 0:
        raise ValueError(f"form {F} has zero discriminant")
    while True:
        g = gcd(gcd(F.a, F.b), gcd(F.c, F.d))
        if g > 1:
            F = BinaryCubicForm(*(x // g for x in F))
        for p, e in factorize(abs(disc(F))).items():
            if e >= 2 and not is_maximal_at(F, p):
                F = _overform_step(F, p)
                break
        else:
            return F


def _overform_step(F: BinaryCubicForm, p: int) -> BinaryCubicForm:
    a, b, c, d = F
    if not (a % p == 0 and b % p == 0 and a % (p * p) == 0):
        r = next(r for r in _multiple_finite_roots(F, p) if F(r, 1) % (p * p) == 0)
        # bring the bad root (r:1) to infinity
        F = act(F, (r, 1, 1, 0))
        a, b, c, d = F
    return BinaryCubicForm(a // (p * p), b // p, c, d * p)


# -- irreducibility -----------------------------------------------------------


def _has_root_mod(F, p: int) -> bool:
    a, b, c, d = F
    if a % p == 0:
        return True
    return any((((a * t + b) * t + c) * t + d) % p == 0 for t in range(p))


def _divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factorize(n).items():
        out = [x * p**k for x in out for k in range(e + 1)]
    return out


def has_rational_root(F: Iterable[int]) -> bool:
    """Whether F has a linear factor over Q (i.e. is reducible)."""
    F = BinaryCubicForm(*F)
    a, b, c, d = F
    if a == 0 or d == 0:
        return True
    for p in (2, 3, 5, 7, 11, 13, 17, 19):
        if not _has_root_mod(F, p):
            return False
    roots = np.roots([float(a), float(b), float(c), float(d)])
    for z in roots:
        if abs(z.imag) > 1e-6 * max(1.0, abs(z)):
            continue
        for s in _divisors(abs(a)):
            r0 = round(z.real * s)
            for r in (r0 - 1, r0, r0 + 1):
                if gcd(r, s) == 1 and F(r, s) == 0:
                    return True
    return False


def is_irreducible(F: Iterable[int]) -> bool:
    return not has_rational_root(BinaryCubicForm(*F))


# -- enumeration --------------------------------------------------------------


@dataclass(frozen=True)
class EnumerationRequest:
    """Which classes to emit.

    ``sign`` is +1 or -1.  ``resolvent`` keeps only discriminants D*f^2 for
    that fundamental D; ``accept`` is an extra predicate on the discriminant
    (must be picklable when enumerating with several workers).
    """

    max_abs_disc: int
    sign: int
    min_abs_disc: int = 1
    resolvent: Optional[int] = None
    accept: Optional[Callable[[int], bool]] = None

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign!r}")
        if self.max_abs_disc >= 1 and not 1 <= self.min_abs_disc <= self.max_abs_disc:
            raise ValueError("need 1 <= min_abs_disc <= max_abs_disc")
        if self.max_abs_disc > MAX_ENUMERATION_DISC:
            raise EnumerationLimitError(
                f"max_abs_disc {self.max_abs_disc} exceeds supported limit {MAX_ENUMERATION_DISC}"
            )

    def wants(self, D: int) -> bool:
        if self.resolvent is not None:
            q, r = divmod(D, self.resolvent)
            if r or q <= 0 or isqrt(q) ** 2 != q:
                return False
        return self.accept is None or self.accept(D)


def _a_range(req: EnumerationRequest) -> range:
    X = req.max_abs_disc
    if req.sign > 0:
        # a^2 <= 4P/27 and P <= sqrt(disc)
        return range(1, isqrt(4 * isqrt(X) // 27) + 1)
    # 27 a^4 <= 16 |disc|
    return range(1, iroot(16 * X // 27, 4) + 1)


def _enumerate_positive(req: EnumerationRequest, a: int, sieve: SquarePrimeSieve) -> list[tuple]:
    X, lo = req.max_abs_disc, req.min_abs_disc
    sX = isqrt(X)
    out = []
    Pmin_a = -(-27 * a * a // 4)
    if Pmin_a > sX:
        return out
    a3, a9 = 3 * a, 9 * a
    # |b| <= 3a/2 + sqrt(P)
    bmax = (3 * a) // 2 + isqrt(sX) + 1
    for b in range(bmax + 1):
        Pmin = Pmin_a
        if 2 * b > 3 * a:
            Pmin = max(Pmin, -(-((2 * b - 3 * a) ** 2) // 4))
        if Pmin > sX:
            break
        bb = b * b
        c_lo = -((sX - bb) // a3)
        c_hi = (bb - Pmin) // a3
        for c in range(c_lo, c_hi + 1):
            P = bb - a3 * c
            bc = b * c
            cc = c * c
            d_lo = -((P - bc) // a9)
            d_hi = (bc + P) // a9
            if b > 0:
                # R = c^2 - 3bd >= P
                d_hi = min(d_hi, (cc - P) // (3 * b))
            elif cc < P:
                continue
            for d in range(d_lo, d_hi + 1):
                R = cc - 3 * b * d
                if R < P:
                    continue
                Q = bc - a9 * d
                D = (4 * P * R - Q * Q) // 3
                if D < lo or D > X:
                    continue
                if b == 0 and d >= 0:
                    continue
                F = (a, b, c, d)
                if abs(Q) == P or P == R:
                    if reduce_form(F) != F:
                        continue
                if not req.wants(D):
                    continue
                if not all(is_maximal_at(F, p) for p in sieve.square_primes(D)):
                    continue
                if has_rational_root(BinaryCubicForm(*F)):
                    continue
                out.append((D, a, b, c, d))
    return out


def _enumerate_negative(req: EnumerationRequest, a: int, sieve: SquarePrimeSieve) -> list[tuple]:
    X, lo = req.max_abs_disc, req.min_abs_disc
    out = []
    a2, a4 = a * a, a**4
    # bounds on the real root theta and the norm n of the quadratic factor
    root = (X / (3 * a4)) ** 0.5
    if root < 0.75:
        return out
    theta_max = 0.5 + (root - 0.75) ** 0.5 + 1e-9
    n_max = ((16 * X / a4) ** (1 / 3) + 1) / 4 + 1e-9
    b_max = int(a * (1 + theta_max)) + 1
    for b in range(b_max + 1):
        th = min(theta_max, b / a + 1)
        c_lo = int(np.floor(a * (1 - th))) - 1
        c_hi = int(np.ceil(a * (n_max + th))) + 1
        b3 = b**3
        for c in range(c_lo, c_hi + 1):
            bc = b * c
            # ad - bc strictly inside (-(a-b)^2 - ac, (a+b)^2 + ac)
            t_lo = -((a - b) ** 2) - a * c
            t_hi = (a + b) ** 2 + a * c
            if t_hi - t_lo <= 1:
                continue
            d_lo = (t_lo + bc) // a + 1
            d_hi = -((-(t_hi + bc)) // a) - 1
            # disc(d) = -27a^2 d^2 + L d + K >= -X
            L = 18 * a * bc - 4 * b3
            K = b * b * c * c - 4 * a * c**3
            rad = L * L + 108 * a2 * (K + X)
            if rad < 0:
                continue
            s = isqrt(rad) + 1
            d_lo = max(d_lo, (L - s) // (54 * a2))
            d_hi = min(d_hi, -((-(L + s)) // (54 * a2)))
            for d in range(d_lo, d_hi + 1):
                D = (-27 * a2 * d + L) * d + K
                if D >= 0 or -D < lo or -D > X:
                    continue
                if b == 0 and d >= 0:
                    continue
                if d * d - b * d + a * c - a2 <= 0:
                    continue
                t = a * d - bc
                if t <= t_lo or t >= t_hi:
                    continue
                if not req.wants(D):
                    continue
                F = (a, b, c, d)
                if not all(is_maximal_at(F, p) for p in sieve.square_primes(D)):
                    continue
                if has_rational_root(BinaryCubicForm(*F)):
                    continue
                out.append((-D, a, b, c, d))
    return out


def _enumerate_chunk(req: EnumerationRequest, a_values: list[int]) -> list[tuple]:
    sieve = SquarePrimeSieve(req.max_abs_disc)
    worker = _enumerate_positive if req.sign > 0 else _enumerate_negative
    out = []
    for a in a_values:
        out.extend(worker(req, a, sieve))
    return out


def enumerate_classes(req: EnumerationRequest, workers: int = 1) -> list[BinaryCubicForm]:
    """One canonical maximal irreducible form per cubic field in the request.

    Output is sorted by (|disc|, a, b, c, d) and does not depend on
    ``workers``.
    """
    if req.max_abs_disc < 1:
        return []
    a_values = list(_a_range(req))
    if workers > 1 and len(a_values) > 1:
        chunks = [a_values[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_enumerate_chunk, [req] * len(chunks), chunks))
        rows = [r for part in parts for r in part]
    else:
        rows = _enumerate_chunk(req, a_values)
    rows.sort()
    log.debug("enumerated %d classes (sign %+d, |disc| <= %d)", len(rows), req.sign, req.max_abs_disc)
    return [BinaryCubicForm(*r[1:]) for r in rows]
