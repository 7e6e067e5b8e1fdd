"""Exact coefficients of the conductor Dirichlet series of cubic fields.

For a fundamental discriminant D the series

    Phi_D(s) = 1/2 + sum_K f(K)^(-s),   disc(K) = D f(K)^2,

equals, after multiplication by c_D, a main Euler product weighted by a
3-adic factor M_1 plus one Euler product per cubic field E of discriminant
D* or -27D, weighted by M_{2,E}.  Everything here is done on the integer
series 2 c_D Phi_D, which removes the only fraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Union

import numpy as np

from .arith import is_fundamental, kronecker, mirror, primes_up_to
from .fields import CubicField, FieldStore, inventory, omega

ThreeAdicFactor = tuple[int, int, int]


class SeriesInvariantError(ArithmeticError):
    """Raised when assembled coefficients break an integrality invariant."""


def _check_fundamental(D: int) -> None:
    if not is_fundamental(D):
        raise ValueError(f"{D} is not a fundamental discriminant")


def c_constant(D: int) -> int:
    _check_fundamental(D)
    return 1 if D == 1 or D < -3 else 3


def m1_factor(D: int) -> ThreeAdicFactor:
    """Coefficients (t0, t1, t2) of t0 + t1 3^-s + t2 3^-2s for the main term."""
    _check_fundamental(D)
    if D % 3:
        return (1, 0, 2)
    if D % 9 == 3:
        return (1, 2, 0)
    return (1, 2, 6)


def m2_factor(D: int, E: CubicField) -> ThreeAdicFactor:
    """3-adic factor attached to a field E of discriminant D* or -27D."""
    _check_fundamental(D)
    if E.discriminant == mirror(D):
        if D % 3:
            return (1, 0, 2)
        if D % 9 == 3:
            return (1, 2, 0)
        w3 = omega(E, 3)
        if w3 == 0:
            # 3 is split or inert here; 0 means E is not what the caller thinks
            raise SeriesInvariantError(f"omega_E(3) = 0 for {E} with D = {D} = 6 mod 9")
        return (1, 2, 3 * w3)
    if E.discriminant == -27 * D:
        return (1, 0, -1) if D % 3 else (1, -1, 0)
    raise ValueError(f"{E} has discriminant neither D* = {mirror(D)} nor -27D = {-27 * D}")


def admissible_primes(D: int, F: int) -> list[int]:
    """Primes p <= F with (-3D / p) = 1."""
    return [p for p in primes_up_to(F) if kronecker(-3 * D, p) == 1]


def euler_expand(
    D: int, omega_at: Union[Mapping[int, int], Callable[[int], int]], F: int
) -> np.ndarray:
    """Coefficients 1..F of prod over admissible p of (1 + omega(p) p^-s).

    Index 0 of the returned int64 array is unused and left at 0.
    """
    if F < 1:
        raise ValueError("truncation must be >= 1")
    get = omega_at if callable(omega_at) else omega_at.__getitem__
    out = np.zeros(F + 1, dtype=np.int64)
    out[1] = 1
    for p in admissible_primes(D, F):
        w = get(p)
        if w:
            m = F // p
            # multiples of p are still zero here, so one slice pass is exact
            out[p : m * p + 1 : p] += w * out[1 : m + 1]
    return out


def _convolve_3(factor: ThreeAdicFactor, series: np.ndarray) -> np.ndarray:
    out = factor[0] * series
    for k, t in ((1, factor[1]), (2, factor[2])):
        step = 3**k
        if t and step < len(series):
            out[step::step] += t * series[1 : (len(series) - 1) // step + 1]
    return out


@dataclass(frozen=True)
class CoeffSeries:
    """2 c_D times the coefficients of Phi_D, for f = 1..F (index 0 unused)."""

    D: int
    F: int
    scale: int
    scaled: tuple[int, ...]

    def count(self, f: int) -> int:
        """Number of cubic fields of discriminant D f^2."""
        if not 1 <= f <= self.F:
            raise IndexError(f"f = {f} outside 1..{self.F}")
        v = self.scaled[f] - (self.scale // 2 if f == 1 else 0)
        return v // self.scale

    def counts(self) -> list[int]:
        """[N_1, ..., N_F]."""
        return [self.count(f) for f in range(1, self.F + 1)]

    def partial_sum(self, upto: int) -> int:
        return sum(self.count(f) for f in range(1, min(upto, self.F) + 1))


def phi_coefficients(D: int, F: int, store: FieldStore) -> CoeffSeries:
    """Assemble 2 c_D Phi_D from the main term and the fields of D* and -27D."""
    if F < 1:
        raise ValueError("truncation must be >= 1")
    c = c_constant(D)
    inv = inventory(D, store)
    total = _convolve_3(m1_factor(D), euler_expand(D, lambda p: 2, F))
    for E in inv.all_fields:
        local = euler_expand(D, lambda p, E=E: omega(E, p), F)
        total = total + 2 * _convolve_3(m2_factor(D, E), local)
    scaled = tuple(int(x) for x in total)
    scale = 2 * c
    bad = [f for f in range(1, F + 1) if (scaled[f] - (c if f == 1 else 0)) % scale or scaled[f] < 0]
    if bad:
        raise SeriesInvariantError(f"coefficients of 2c_D Phi_{D} not divisible by {scale} at f = {bad[:5]}")
    return CoeffSeries(D, F, scale, scaled)
