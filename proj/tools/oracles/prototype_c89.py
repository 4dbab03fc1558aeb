"""Feasibility prototype for the adaptive-vs-oracle and protocol criteria.

Estimates (a) the expected-rate ratio between a PEF optimized on a
maximum-likelihood fit of n simulated trials and a PEF optimized on the
true distribution (criterion: ratio >= 0.9 at n=1e5), and (b) the mean
and spread of the realized net log2-prob for Protocol Q/P sizing at
n=1e5 trials of the atoms distribution.

Not a value-freezing oracle; confirms margins before the C++ port.
"""

import numpy as np

from bell_common import ATOMS, IONS, XOR3, ns_points, q_points
from prototype_pef import build_uniform, log2_rate, optimize_pef

LN2 = np.log(2.0)


def em_fit(points, freq_joint, iters=20000, tol=1e-10):
    """EM for max sum f(cz) log nu(c|z), nu = convex combo of vertices."""
    v = len(points)
    V = np.array([p.flatten() for p in points])  # v x 16
    f = freq_joint.flatten()
    mu = np.full(v, 1.0 / v)
    for _ in range(iters):
        nu = V.T @ mu
        g = V @ np.where(f > 0, f / np.maximum(nu, 1e-300), 0.0)
        mu = mu * g
        mu /= mu.sum()
        if np.max(g) - 1.0 < tol:
            break
    return (V.T @ mu).reshape(4, 4), np.max(g) - 1.0


def rate_at(points, w_opt_cond, rho_true_cond, beta):
    """Optimize PEF at w_opt, evaluate expected rate at rho_true."""
    a, w = build_uniform(points, w_opt_cond, beta)
    fpef, _ = optimize_pef(a, w)
    _, w_true = build_uniform(points, rho_true_cond, beta)
    mask = w_true > 0
    return float(np.sum(w_true[mask] * np.log(np.maximum(fpef[mask], 1e-300)))
                 / (beta * LN2))


def fit_ratio(name, true_cond, points, beta, n, seed):
    rng = np.random.default_rng(seed)
    joint = true_cond.flatten() / 4.0
    counts = rng.multinomial(n, joint)
    freq = (counts / counts.sum()).reshape(4, 4)
    fitted, gap = em_fit(points, freq)
    fitted_cond = fitted / fitted.sum(axis=1, keepdims=True)
    oracle = rate_at(points, true_cond, true_cond, beta)
    adaptive = rate_at(points, fitted_cond, true_cond, beta)
    print(f"  {name} seed={seed}: oracle={oracle:.9f} adaptive={adaptive:.9f} "
          f"ratio={adaptive / oracle:.4f} (fit gap {gap:.1e})")
    return adaptive / oracle


def protocol_margins(beta_grid, n, eps_h, n_mc=400, seed=11):
    """Expected net log2-prob and realized spread at the best beta."""
    qq = q_points()
    kappa = np.log2(1.0 / eps_h)
    best = (-np.inf, None, None)
    for beta in beta_grid:
        a, w = build_uniform(qq, ATOMS, beta)
        fpef, _ = optimize_pef(a, w)
        rate = log2_rate(a, w, fpef, beta)
        net = n * rate - kappa / beta
        if net > best[0]:
            best = (net, beta, fpef)
        print(f"  beta={beta:.4e}: rate={rate:.6f} expected net={net:.1f}")
    from math import erfc

    best_z = (-np.inf, None)
    print("  headroom z = 0.2*net/std(net) per beta:")
    for beta in beta_grid:
        a, w = build_uniform(qq, ATOMS, beta)
        fpef, _ = optimize_pef(a, w)
        rate = log2_rate(a, w, fpef, beta)
        net = n * rate - kappa / beta
        logf = np.log2(np.maximum(fpef, 1e-300))
        m1 = float(np.sum(w * logf))
        v1 = float(np.sum(w * (logf - m1) ** 2))
        std_net = np.sqrt(n * v1) / beta
        z = 0.2 * net / std_net
        print(f"  beta={beta:.4e}: net={net:.0f} std={std_net:.0f} z80={z:.2f} "
              f"z50={0.5 * net / std_net:.2f} pfail80={0.5 * erfc(z / np.sqrt(2)):.2e}")
        if z > best_z[0]:
            best_z = (z, beta, net, std_net)
    z, beta, net, std_net = best_z
    print(f"  best-headroom beta={beta:.4e}: net={net:.0f} std={std_net:.0f} "
          f"z={z:.2f}, P(>=2 of 100 fail)={1 - (1 - 0.5 * erfc(z / np.sqrt(2))) ** 100 - 100 * 0.5 * erfc(z / np.sqrt(2)) * (1 - 0.5 * erfc(z / np.sqrt(2))) ** 99:.2e}")
    return beta, net, std_net


def main():
    qq = q_points()
    ns = ns_points()
    ions = IONS[[0, 2, 1, 3], :]

    print("fit-quality ratios (n=1e5, beta=1e-4, Q model):")
    for name, tab in (("atoms", ATOMS), ("xor3", XOR3), ("ions", ions)):
        for seed in (1, 2, 3):
            fit_ratio(name, tab, qq, 1e-4, 100_000, seed)
    print("fit-quality ratios (NS model):")
    for name, tab in (("xor3", XOR3), ("ions", ions)):
        for seed in (1, 2):
            fit_ratio(name, tab, ns, 1e-4, 100_000, seed)

    print("protocol sizing at atoms, Q, n=1e5, eps_h=1e-6:")
    protocol_margins((2e-3, 3e-3, 5e-3, 7e-3, 1e-2, 1.5e-2), 100_000, 1e-6)


if __name__ == "__main__":
    main()
