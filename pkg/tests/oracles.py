"""Independent reference values and brute-force oracles, frozen before the checks they back."""
from __future__ import annotations

import math

import numpy as np

# |W| by closed formula: 2^n for orth(n), (n+1)! for A(n), 2^n n! for B(n), 2m for I2(m)
GROUP_ORDERS = {
    **{f"orth{n}": 2 ** n for n in range(1, 7)},
    **{f"A{n}": math.factorial(n + 1) for n in range(1, 6)},
    **{f"B{n}": 2 ** n * math.factorial(n) for n in range(2, 5)},
    **{f"I2({m})": 2 * m for m in range(2, 9)},
}

# sorted simple_count per orbit of simple roots
ORBIT_COUNTS = {
    **{f"orth{n}": [1] * n for n in range(1, 7)},
    "A1": [1], **{f"A{n}": [n] for n in range(2, 6)},
    "B2": [1, 1], "B3": [1, 2], "B4": [1, 3],
    **{f"I2({m})": ([2] if m % 2 else [1, 1]) for m in range(2, 9)},
}

# interior angle of the rank-2 chamber
WEDGE_ANGLES = {"orth2": math.pi / 2, "A2": math.pi / 3, "B2": math.pi / 4,
                **{f"I2({m})": math.pi / m for m in range(2, 9)}}

# reflection principle: S_T has the law of |B_T|, so E[S_T] = sqrt(2T/pi)
SUP_MEAN_T1 = math.sqrt(2 / math.pi)


def sorted_projection(rs, x_span: np.ndarray) -> np.ndarray:
    """Chamber projection by sorting: the chambers of A, B and orth are order cones."""
    fam = rs.spec.family
    amb = rs.from_span(x_span)
    if fam == "A":
        folded = -np.sort(-amb, axis=-1)
    elif fam == "B":
        folded = -np.sort(-np.abs(amb), axis=-1)
    elif fam == "orth":
        folded = np.abs(amb)
    else:
        raise ValueError(fam)
    return rs.to_span(folded)


def union_indicator(rs, group, i, x, epsilon):
    """{|<w s_i, x>| <= eps for some w}, by looping over every group element."""
    s = rs.simple_span[i]
    hit = np.zeros(len(x), dtype=bool)
    for m in group.matrices:
        hit |= np.abs(x @ (m @ s)) <= epsilon
    return hit
