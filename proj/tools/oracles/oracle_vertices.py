"""Vertex-list validation oracle (scipy HiGHS).

Checks, for the constructed NS and Q conditional vertex lists:
  - non-signaling of every point,
  - Tsirelson inequalities E(B_g) <= (sqrt2-1)/4 for Q points, with equality
    for a mixture's own g,
  - no point is a convex combination of the others (LP membership),
  - the embedded experiment tables lie inside the Q polytope (LP distance).
Prints the values to freeze into the C++ tests.
"""

import numpy as np
from scipy.optimize import linprog

from bell_common import (ATOMS, IONS, XOR3, Q_MIX, bell_g, chsh, expect_uniform,
                         ns_points, pr_masks, q_points)


def nonsignaling_violation(cond):
    worst = 0.0
    for a in (0, 1):
        for x in (0, 1):
            pa = [sum(cond[x + 2 * y, a + 2 * b] for b in (0, 1)) for y in (0, 1)]
            worst = max(worst, abs(pa[0] - pa[1]))
    for b in (0, 1):
        for y in (0, 1):
            pb = [sum(cond[x + 2 * y, a + 2 * b] for a in (0, 1)) for x in (0, 1)]
            worst = max(worst, abs(pb[0] - pb[1]))
    return worst


def in_hull(point, others, tol=1e-9):
    """LP feasibility: point = sum w_i others_i, w in simplex."""
    k = len(others)
    a_eq = np.vstack([np.array([o.flatten() for o in others]).T, np.ones((1, k))])
    b_eq = np.concatenate([point.flatten(), [1.0]])
    res = linprog(np.zeros(k), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * k,
                  method="highs")
    return res.status == 0 and res.success


def hull_distance(point, others):
    """min t s.t. |point - sum w_i others_i|_inf <= t, w in simplex."""
    k = len(others)
    m = np.array([o.flatten() for o in others]).T  # 16 x k
    n = 16
    # vars: w (k), t (1)
    a_ub = np.zeros((2 * n, k + 1))
    b_ub = np.zeros(2 * n)
    a_ub[:n, :k] = m
    a_ub[:n, k] = -1.0
    b_ub[:n] = point.flatten()
    a_ub[n:, :k] = -m
    a_ub[n:, k] = -1.0
    b_ub[n:] = -point.flatten()
    a_eq = np.zeros((1, k + 1))
    a_eq[0, :k] = 1.0
    c = np.zeros(k + 1)
    c[k] = 1.0
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=[1.0],
                  bounds=[(0, None)] * k + [(0, None)], method="highs")
    assert res.success
    return res.fun


def main():
    tsir = (np.sqrt(2.0) - 1.0) / 4.0
    ns = ns_points()
    qq = q_points()
    print(f"NS vertices: {len(ns)}")
    print(f"Q vertices:  {len(qq)}")

    for name, pts in (("NS", ns), ("Q", qq)):
        worst_ns = max(nonsignaling_violation(p) for p in pts)
        print(f"{name}: worst non-signaling violation {worst_ns:.3e}")

    bgs = [bell_g(m) for m in pr_masks()]
    worst_excess = -np.inf
    for p in qq:
        for bg in bgs:
            worst_excess = max(worst_excess, expect_uniform(bg, p) - tsir)
    print(f"Q: worst Tsirelson excess {worst_excess:.3e}")
    # mixtures saturate their own bound
    for j, m in enumerate(pr_masks()):
        for i in range(8):
            p = qq[16 + 8 * j + i]
            assert abs(expect_uniform(bgs[j], p) - tsir) < 1e-14
    print("Q: each mixture saturates its own Tsirelson bound (1e-14)")

    chsh_b = chsh()
    vals = [expect_uniform(chsh_b, p) for p in qq]
    print(f"Q: max E(CHSH) = {max(vals):.15f}  (expect {tsir:.15f})")
    vals_ns = [expect_uniform(chsh_b, p) for p in ns]
    print(f"NS: max E(CHSH) = {max(vals_ns):.15f}  (expect 0.25)")

    redundant = []
    for i in range(len(qq)):
        others = [qq[j] for j in range(len(qq)) if j != i]
        if in_hull(qq[i], others):
            redundant.append(i)
    print(f"Q: redundant candidates: {redundant} (expect none)")

    for name, tab in (("atoms", ATOMS), ("xor3", XOR3), ("ions", IONS)):
        print(f"{name}: non-signaling violation {nonsignaling_violation(tab):.3e}, "
              f"Q hull distance {hull_distance(tab, qq):.3e}")


if __name__ == "__main__":
    main()
