"""Negative K from shipped oracle data.

The engine only computes K_0 and K_1, so K_-1 needs outside input. A fixture
supplies it, and the fundamental sequence is checked on that data. A corrupted
control shows where exactness breaks.
"""

from kwb.delooper import fundamental_sequence, negative_k
from kwb.fixtures import load_fixture

src = load_fixture("k_minus_one.json")
X = src.base_objects()[0]
print("K_-1 from k_minus_one.json:", negative_k(src, X, 1).groups[0])
seq = fundamental_sequence(src, X, 0)
print("fundamental sequence at degree 0 exact:", seq.exact, "| section:", seq.section is not None)

bad = load_fixture("corrupted_double_j.json")
seq = fundamental_sequence(bad, bad.base_objects()[0], 0)
print("corrupted_double_j fails at spots", seq.failing_spots)
