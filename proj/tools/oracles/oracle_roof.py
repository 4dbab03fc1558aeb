"""Convex-roof minimum conditional entropy oracle (scipy HiGHS).

min over decompositions rho = sum_e lambda_e * vertex_e of
sum_e lambda_e * H(C|Z; vertex_e), vertices = conditional extreme points
paired with settings extreme points.

Freezes: roof values at the atoms table for NS/Q (uniform settings),
the PR-box value, the bias sweep b in {0,...,0.05}, and roof values for
the xor3/ions tables (criterion 9 ordering).
"""

import numpy as np
from scipy.optimize import linprog

from bell_common import (ATOMS, IONS, XOR3, bias_settings_points, chsh,
                         cond_entropy_bits, ns_points, pr_masks, pr_point,
                         q_points)


def roof(cond_points, settings_points, rho_joint):
    """rho_joint: (4,4) [z][c] joint. Returns bits."""
    verts = []
    ents = []
    for cp in cond_points:
        for sp in settings_points:
            verts.append((cp * sp[:, None]).flatten())
            ents.append(cond_entropy_bits(cp, sp))
    m = np.array(verts).T  # 16 x E
    a_eq = np.vstack([m, np.ones((1, len(verts)))])
    b_eq = np.concatenate([rho_joint.flatten(), [1.0]])
    res = linprog(np.array(ents), A_eq=a_eq, b_eq=b_eq,
                  bounds=[(0, None)] * len(verts), method="highs")
    if not res.success:
        return None
    return res.fun


def main():
    uniform = np.array([[0.25, 0.25, 0.25, 0.25]])
    ns = ns_points()
    qq = q_points()
    ions = IONS[[0, 2, 1, 3], :]  # station-relabeled, see ledger

    for name, tab in (("atoms", ATOMS), ("xor3", XOR3), ("ions", ions)):
        joint = tab / 4.0
        r_ns = roof(ns, uniform, joint)
        r_q = roof(qq, uniform, joint)
        print(f"{name}: roof NS = {r_ns:.9f}  Q = {r_q:.9f}")

    pr_joint = pr_point(pr_masks()[-1]) / 4.0  # g = x*y box
    print(f"PR box: roof NS = {roof(ns, uniform, pr_joint):.9f} (expect 1)")

    print("bias sweep at atoms, Q model:")
    joint = ATOMS / 4.0
    for b in (0.0, 0.01, 0.02, 0.03, 0.04, 0.05):
        sp = bias_settings_points(b) if b > 0 else uniform
        r = roof(qq, sp, joint)
        print(f"  b={b:.2f}: roof = {r:.9f}")
    print("bias sweep at atoms, NS model:")
    for b in (0.0, 0.01, 0.02, 0.03, 0.04, 0.05):
        sp = bias_settings_points(b) if b > 0 else uniform
        r = roof(ns, sp, joint)
        print(f"  b={b:.2f}: roof = {r:.9f}")


if __name__ == "__main__":
    main()
