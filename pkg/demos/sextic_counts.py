"""S3-sextic field counts from the series, checked against a direct count.

The direct count enumerates cubic fields up to sqrt(X) and groups them by
quadratic resolvent; the series only needs fields up to 27 X^(1/3).

    python3 demos/sextic_counts.py
"""

import time

from cubicphi import oracle
from cubicphi.fields import FieldStore
from cubicphi.sextic import count_sextic, required_coverage

TOP = 10**13
need = required_coverage(TOP, "+")[-1]
t = time.perf_counter()
store = FieldStore.enumerate(max_pos=need, max_neg=need)
print(f"cubic fields with |disc| <= {need}: {len(store)} ({time.perf_counter() - t:.1f}s)")

print(f"{'X':>6} {'N+(X)':>8} {'N-(X)':>8}")
for k in range(4, 14):
    X = 10**k
    pos, neg = count_sextic(X, "+", store).total, count_sextic(X, "-", store).total
    note = ""
    if k <= 8:
        ok = (pos, neg) == (oracle.direct_sextic(X, "+"), oracle.direct_sextic(X, "-"))
        note = "direct count agrees" if ok else "DIRECT COUNT DISAGREES"
    print(f"  10^{k:<2} {pos:8d} {neg:8d}  {note}")

tally = count_sextic(10**9, "-", store, breakdown=True)
print("largest contributions at X = 10^9, negative sign:",
      sorted(tally.breakdown.items(), key=lambda kv: -kv[1])[:5])
