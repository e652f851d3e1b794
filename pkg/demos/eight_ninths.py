# Density of the alternating red path in the coloring where an edge takes
# the color of the parity of its earlier interval A_k = [2^k, 2^(k+1) - 1].
from fractions import Fraction

from rdl.colorings import gen_eg_upper
from rdl.experiments import eg89_ceiling, eg89_classes
from rdl.assembly import assemble_34_path

classes = eg89_classes(63)
print("first classes:", [(c[0], c[-1]) for c in classes])

res = eg89_ceiling(12)
print(f"prefix [{res['N']}], path of {res['path_length']} vertices")
for row in res["series"][-8:]:
    num, den = row["value"]
    print(f"  n={row['checkpoint']:5d} ({row['kind']:6s})  density {num}/{den} = {row['float']:.4f}")
rec = Fraction(*res["record"])
print("record over the trailing half:", rec, f"({float(rec):.4f}; 8/9 = {8 / 9:.4f})")
print("record at class ends only:", Fraction(*res["record_at_ends"]))

# the general assembly cannot beat the ceiling either
asm = assemble_34_path(gen_eg_upper(), 4095)
print("assembled path:", len(asm.path), "vertices, record", asm.profile.record, f"= {float(asm.profile.record):.4f}")
