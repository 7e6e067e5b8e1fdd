"""Exact integer helpers: Kronecker symbol, discriminant predicates, sieving."""

from __future__ import annotations

import threading
from math import gcd, isqrt

import numpy as np

__all__ = [
    "kronecker",
    "is_squarefree",
    "is_fundamental",
    "mirror",
    "factorize",
    "primes_up_to",
    "fundamental_part",
    "valuation",
    "iroot",
    "SquarePrimeSieve",
]


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    if n == 0:
        raise ValueError("kronecker symbol undefined for n = 0")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # factor of 2 in n
    v = (n & -n).bit_length() - 1
    if v:
        if a % 2 == 0:
            return 0
        n >>= v
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol for odd n
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


_sieve_lock = threading.Lock()
_sieve_primes: list[int] = [2, 3, 5, 7]
_sieve_bound = 10


def primes_up_to(bound: int) -> list[int]:
    """All primes <= bound in ascending order."""
    if bound < 2:
        return []
    n = int(bound)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, isqrt(n) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).tolist()


def _small_primes(bound: int) -> list[int]:
    global _sieve_primes, _sieve_bound
    if bound > _sieve_bound:
        with _sieve_lock:
            if bound > _sieve_bound:
                new_bound = max(bound, 2 * _sieve_bound)
                _sieve_primes = primes_up_to(new_bound)
                _sieve_bound = new_bound
    return _sieve_primes


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 by trial division, as {prime: exponent}."""
    if n < 1:
        raise ValueError(f"factorize expects a positive integer, got {n}")
    out: dict[int, int] = {}
    if n == 1:
        return out
    limit = isqrt(n)
    for p in _small_primes(min(limit, 1 << 20) + 1):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    else:
        # residual beyond the cached sieve: plain odd trial division
        p = _sieve_bound | 1
        while p * p <= n:
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out[p] = e
            p += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return dict(sorted(out.items()))


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for e in factorize(abs(n)).values())


def is_fundamental(d: int) -> bool:
    """True iff d is 1 or the discriminant of a quadratic field."""
    if d == 0:
        raise ValueError("0 is not a discriminant")
    if d == 1:
        return True
    r = d % 4
    if r == 1:
        return is_squarefree(d)
    if r == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def mirror(d: int) -> int:
    """Discriminant of Q(sqrt(-3d)) for a fundamental discriminant d."""
    if not is_fundamental(d):
        raise ValueError(f"{d} is not a fundamental discriminant")
    return -3 * d if d % 3 else -(d // 3)


def fundamental_part(n: int) -> tuple[int, int]:
    """Write n = D*f**2 with D fundamental (1 allowed) and f > 0.

    Raises ValueError when n is not of that shape (n = 0 or n = 2, 3 mod 4
    after removing squares in a way that leaves no fundamental D).
    """
    if n == 0:
        raise ValueError("zero has no fundamental part")
    core, f = (1 if n > 0 else -1), 1
    for p, e in factorize(abs(n)).items():
        f *= p ** (e // 2)
        if e % 2:
            core *= p
    if core % 4 == 1:
        return core, f
    if f % 2 == 0:
        core *= 4
        f //= 2
        if core % 16 in (8, 12):
            return core, f
    raise ValueError(f"{n} is not a fundamental discriminant times a square")


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def iroot(n: int, k: int) -> int:
    """Largest integer r >= 0 with r**k <= n (exact, any size)."""
    if n < 0:
        raise ValueError("iroot of a negative number")
    if n < 2:
        return n
    r = 1 << ((n.bit_length() + k - 1) // k)
    # Newton iteration from above
    while True:
        s = ((k - 1) * r + n // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


class SquarePrimeSieve:
    """Table answering "which primes p have p^2 | n" for 1 <= n <= bound.

    Entry n holds the largest p with p^2 | n (0 if n is squarefree); the
    table is read-only after construction.
    """

    def __init__(self, bound: int):
        self.bound = int(bound)
        table = np.zeros(self.bound + 1, dtype=np.int32)
        for p in primes_up_to(isqrt(self.bound)):
            table[p * p :: p * p] = p
        self._table = table

    def square_primes(self, n: int) -> list[int]:
        n = abs(n)
        if n > self.bound:
            return [p for p, e in factorize(n).items() if e >= 2]
        out = []
        table = self._table
        p = int(table[n])
        while p:
            out.append(p)
            while n % p == 0:
                n //= p
            p = int(table[n])
        return out

    def is_squarefree(self, n: int) -> bool:
        n = abs(n)
        if n > self.bound:
            return is_squarefree(n)
        return not self._table[n]


def content(*coeffs: int) -> int:
    g = 0
    for c in coeffs:
        g = gcd(g, c)
    return g
