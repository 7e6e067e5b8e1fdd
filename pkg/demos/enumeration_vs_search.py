"""Binary cubic form enumeration against a Hunter-style polynomial search.

Both routes list every cubic field with |disc| <= B; the search shares no
code with the enumeration except the final reduction to canonical form.

    python3 demos/enumeration_vs_search.py [B]
"""

import sys
import time

from cubicphi import forms, oracle

B = int(sys.argv[1]) if len(sys.argv) > 1 else 20_000
for sign in (1, -1):
    t = time.perf_counter()
    fast = sorted(tuple(F) for F in forms.enumerate_classes(forms.EnumerationRequest(B, sign)))
    t1 = time.perf_counter()
    slow = sorted(tuple(F) for F in oracle.hunter_enumerate(B, sign))
    t2 = time.perf_counter()
    print(f"sign {sign:+d}: {len(fast)} forms ({t1 - t:.2f}s), {len(slow)} from the search ({t2 - t1:.2f}s), "
          f"{'identical' if fast == slow else 'DIFFERENT'}")
    print("   first few:", [(forms.disc(F), F) for F in sorted(fast, key=lambda F: abs(forms.disc(F)))[:4]])
