# Increasing monochromatic paths in the directed residue coloring stay thin:
# red arcs only go from a lower residue class to a higher one.
from rdl.colorings import BLUE, RED, gen_directed_residue, materialize
from rdl.density import profile
from rdl.engine.paths import longest_increasing_path

N = 3000
for k in (3, 5, 8):
    pc = materialize(gen_directed_residue(k), N)
    cps = [1 << e for e in range(4, N.bit_length())] + [N]
    for c, name in ((RED, "red"), (BLUE, "blue")):
        w = longest_increasing_path(pc, c)
        rec = profile(w.vertices, cps).record
        print(f"k={k} {name:4s}: {len(w):5d} vertices, record {rec} ~ {float(rec):.4f}  (1/k = {1 / k:.4f})")
