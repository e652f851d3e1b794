# Every 3-coloring of K_n has a spanning monochromatic component or one of two
# four-part structures.  Count the outcomes on K_4 and show one of each.
import itertools
from collections import Counter

import numpy as np

from rdl.colorings import PrefixColoring
from rdl.connected import trichotomy

edges = list(itertools.combinations(range(4), 2))
counts, shown = Counter(), {}
for codes in itertools.product(range(3), repeat=len(edges)):
    m = np.zeros((4, 4), dtype=np.int64)
    for (a, b), c in zip(edges, codes):
        m[a, b] = m[b, a] = c
    cert = trichotomy(PrefixColoring.from_matrix(m, 3))
    counts[cert.case] += 1
    shown.setdefault(cert.case, (codes, cert))

print("outcomes over all 729 colorings:", dict(sorted(counts.items())))
for case, (codes, cert) in sorted(shown.items()):
    print(f"\ncase {case}: edge colors {dict(zip([(a + 1, b + 1) for a, b in edges], codes))}")
    print("  roles:", cert.roles, " parts:", {k: v for k, v in cert.parts.items() if v})
