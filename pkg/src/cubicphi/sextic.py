"""Counting S3-sextic fields through the conductor series.

A sextic field with Galois group S3 has discriminant D^3 f^4, where D is the
discriminant of its quadratic subfield and D f^2 that of its cubic
subfields.  So the count below X is a sum over D of partial sums of the
series coefficients, each truncated where |D|^3 f^4 reaches X.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .arith import iroot, is_fundamental
from .fields import CoverageError, FieldStore
from .series import phi_coefficients


@dataclass(frozen=True)
class SexticTally:
    """N(X; S3) of the given sign, optionally split by quadratic resolvent D."""

    X: int
    sign: int
    total: int
    breakdown: Optional[dict[int, int]] = None

    def __post_init__(self):
        if self.breakdown is not None and sum(self.breakdown.values()) != self.total:
            raise ValueError("breakdown does not add up to total")


def _sign(sign) -> int:
    if sign in (1, "+"):
        return 1
    if sign in (-1, "-"):
        return -1
    raise ValueError(f"sign must be + or -, got {sign!r}")


def max_abs_resolvent(X: int) -> int:
    """Largest n with n^3 < X (0 if none)."""
    return iroot(X - 1, 3) if X > 1 else 0


def conductor_limit(X: int, absD: int) -> int:
    """Largest f with absD^3 f^4 < X (0 if none)."""
    q = (X - 1) // absD**3
    return iroot(q, 4) if q > 0 else 0


def required_coverage(X: int, sign) -> dict[int, int]:
    """Cubic discriminant range the store must cover for count_sextic(X, sign).

    Positive D needs negative cubic fields (D* and -27D are both negative)
    and vice versa.
    """
    s = _sign(sign)
    n = max_abs_resolvent(X)
    return {-s: 27 * n, s: 0}


def resolvents(X: int, sign) -> list[int]:
    """Fundamental D != 1 of the given sign with |D|^3 < X, by increasing |D|."""
    s = _sign(sign)
    return [s * n for n in range(1, max_abs_resolvent(X) + 1) if s * n != 1 and is_fundamental(s * n)]


def _partial(D: int, X: int, store: FieldStore) -> int:
    F = conductor_limit(X, abs(D))
    if F == 0:
        return 0
    return phi_coefficients(D, F, store).partial_sum(F)


_WORKER_STORE: Optional[FieldStore] = None


def _init_worker(store):
    global _WORKER_STORE
    _WORKER_STORE = store


def _partial_chunk(args):
    Ds, X = args
    return [(D, _partial(D, X, _WORKER_STORE)) for D in Ds]


def count_sextic(X: int, sign, store: FieldStore, breakdown: bool = False, workers: int = 1) -> SexticTally:
    """Number of S3-sextic fields K with 0 < sign*Disc(K) < X.

    The store must cover cubic discriminants of the opposite sign up to
    27 * X^(1/3); see required_coverage.
    """
    X = int(X)
    if X < 1:
        raise ValueError("bound X must be a positive integer")
    s = _sign(sign)
    need = required_coverage(X, s)[-s]
    if store.coverage[-s] < need:
        raise CoverageError(
            f"sextic bound {X} needs cubic fields of sign {-s:+d} up to {need}, "
            f"store covers {store.coverage[-s]}"
        )
    Ds = resolvents(X, s)
    if workers > 1 and len(Ds) > 200:
        chunks = [Ds[i::workers * 4] for i in range(workers * 4)]
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(store,)) as ex:
            parts = dict(p for chunk in ex.map(_partial_chunk, [(c, X) for c in chunks]) for p in chunk)
    else:
        parts = {D: _partial(D, X, store) for D in Ds}
    per_D = {D: parts[D] for D in Ds if parts[D]}
    total = sum(per_D.values())
    return SexticTally(X, s, total, per_D if breakdown else None)
