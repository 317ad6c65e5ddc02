"""K_1 of a Laurent ring splits off a copy of K_0.

Walk through F_q and Z, print K_0, K_1 and K_1 of the Laurent ring, then ask
the checker whether the comparison map is an isomorphism.
"""

from kwb.abgroup import direct_sum
from kwb.delooper import EngineSource, Expression, bhs_check
from kwb.kengine import k0, k1
from kwb.rings import Laurent, parse_ring

E = EngineSource()

for name in ["F2", "F3", "F4", "F9", "Z"]:
    R = parse_ring(name)
    a, b, c = k0(R).group, k1(R).group, k1(Laurent(R)).group
    expected = direct_sum([b, a]).group
    rep = bhs_check(E, Expression.of(R), 1)
    print(f"{name:>3}: K0 = {a}, K1 = {b}, K1(R[t,t^-1]) = {c}"
          f"  (K1 + K0 = {expected}) -> {rep.verdict}")
