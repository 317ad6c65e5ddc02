"""Delooping tower on a synthetic model, then KH of finite fields.

The truncated model is missing K_-1 at the bottom level. Its tower picks that
group up one step later and then stays constant. For a regular ring such as
F_q, KH_1 agrees with K_1 from the start.
"""

from kwb.delooper import EngineSource, Expression, kh_groups, shadow_tower
from kwb.fixtures import model_base, truncated_model
from kwb.rings import parse_ring

t = shadow_tower(truncated_model(), model_base(), (-2, 1), 3)
for i in (-2, -1, 0, 1):
    print(f"pi_{i:>2} along the tower:", [str(g) for g in t.column(i)], "stable from", t.stable_from(i))
print("largest contracted level:", t.c_max)

E = EngineSource()
for q in (2, 3, 5, 8):
    r = kh_groups(E, Expression.of(parse_ring(f"F{q}")), 1, 4)
    print(f"KH_1(F{q}) = {r.group}, stable at index {r.colimit.stable_index}, {r.verdict}")
