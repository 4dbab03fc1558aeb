"""Oracle for the max-prob-estimator LP (min E_rho(Bt) s.t. E_nu(Bt) >= gamma*nu(d|z)).

Freezes b_bar = 1 - optimum at the embedded atoms distribution for the
NS and Q models with uniform settings and gamma = 1, plus the PR-box and
LR sanity anchors. Only b_bar is frozen (the optimal B can be degenerate;
the objective value is unique).
"""

import numpy as np
from scipy.optimize import linprog

from bell_common import ATOMS, cond_entropy_bits, lr_points, ns_points, pr_point, q_points


def solve_bancal(cond_points, rho_cond, gamma=1.0):
    """Returns (b_bar, B_tilde) for uniform settings."""
    v = len(cond_points)
    # variables: B_tilde(cz), 16 free
    rows = []
    rhs = []
    for cp in cond_points:
        joint = cp.flatten() * 0.25
        for z in range(4):
            for d in range(4):
                rows.append(-joint)          # -E_nu(Bt) <= -gamma*nu(d|z)
                rhs.append(-gamma * cp[z][d])
    c = rho_cond.flatten() * 0.25
    res = linprog(c, A_ub=np.array(rows), b_ub=np.array(rhs),
                  bounds=[(None, None)] * 16, method="highs")
    assert res.status == 0, res.message
    bt = res.x
    b_bar = 1.0 - float(c @ bt)
    return b_bar, bt


def main():
    ns = ns_points()
    qq = q_points()
    lr = lr_points()

    for name, pts in (("NS", ns), ("Q", qq)):
        b_bar, bt = solve_bancal(pts, ATOMS)
        b = 1.0 - bt
        gain = -np.log2(1.0 - b_bar)
        print(f"atoms {name}: b_bar={b_bar:.15f}  -log2(1-b)={gain:.15f}  "
              f"minB={b.min():.15f}  maxB={b.max():.15f}")

    pr = pr_point(8)
    b_bar, _ = solve_bancal(ns, pr)
    print(f"PR box NS: b_bar={b_bar:.15f} (expect 0.5); "
          f"-log2(1-b)={-np.log2(1 - b_bar):.6f} vs H=1")

    b_bar, _ = solve_bancal(ns, lr[0])
    print(f"LR vertex NS: b_bar={b_bar:.15f} (expect 0)")

    # roof anchors for comparison
    print(f"H(C|Z) at atoms = "
          f"{cond_entropy_bits(ATOMS, np.full(4, 0.25)):.15f}")


if __name__ == "__main__":
    main()
