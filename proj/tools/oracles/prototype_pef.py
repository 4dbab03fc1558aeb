"""Prototype of the PEF optimizer and break-even search.

The optimizer solves
    max sum_k w_k log F_k   s.t.  F >= 0,  sum_k F_k A_ik <= 1 for all i
by a log-barrier interior-point method in F (dimension = number of
cells): maximize
    phi_mu(F) = sum_k (w_k + mu) log F_k + mu sum_i log(1 - (A F)_i)
by damped Newton for a decreasing barrier schedule. Iterates stay
strictly feasible, so returned PEFs always have nonpositive constraint
margins; the duality gap at barrier mu is at most (V + K) mu.

The dual of this problem is degenerate (its Hessian has rank at most the
cell count, far below the vertex count), which is why a dual projected
Newton was rejected.

Validates the approach against the published break-even table before the
C++ port. Not a value-freezing oracle for derived constants.
"""

import numpy as np

from bell_common import ATOMS, chsh, ns_points, q_points

LN2 = np.log(2.0)


def build_uniform(cond_points, rho_cond, beta):
    """Cells = 16 joint cells with uniform settings."""
    v = len(cond_points)
    a = np.zeros((v, 16))
    for i, cp in enumerate(cond_points):
        a[i] = (cp ** (1.0 + beta)).flatten() * 0.25
    w = rho_cond.flatten() * 0.25
    return a, w


def build_spotcheck(cond_points, rho_cond, beta, r, z0=3):
    """Cells = 16 test cells (t=1, settings r/4) + 4 default cells (t=0, z0, 1-r)."""
    v = len(cond_points)
    a = np.zeros((v, 20))
    for i, cp in enumerate(cond_points):
        cb = cp ** (1.0 + beta)
        a[i, :16] = cb.flatten() * (r / 4.0)
        a[i, 16:] = cb[z0] * (1.0 - r)
    w = np.concatenate([rho_cond.flatten() * (r / 4.0), rho_cond[z0] * (1.0 - r)])
    return a, w


def optimize_pef(a, w, mu_final=1e-13):
    """Barrier method for max sum w log F s.t. A F <= 1, F >= 0.

    Returns (f, lam) with f strictly feasible and lam the dual
    multipliers at the final barrier parameter.
    """
    v, k = a.shape
    f = np.full(k, 0.5 / max(1.0, np.max(a @ np.ones(k))))
    mu = 1.0
    while True:
        for _ in range(80):
            s = 1.0 - a @ f
            g = (w + mu) / f - a.T @ (mu / s)
            h = np.diag((w + mu) / f ** 2) + (a.T * (mu / s ** 2)) @ a
            d = np.linalg.solve(h, g)
            if g @ d < 1e-22 * (1.0 + mu):
                break
            alpha = 1.0
            neg = d < 0
            if np.any(neg):
                alpha = min(alpha, 0.99 * np.min(-f[neg] / d[neg]))
            ad = a @ d
            pos = ad > 0
            if np.any(pos):
                alpha = min(alpha, 0.99 * np.min(s[pos] / ad[pos]))
            phi0 = np.sum((w + mu) * np.log(f)) + mu * np.sum(np.log(s))
            gd = g @ d
            for _ in range(60):
                fn = f + alpha * d
                sn = 1.0 - a @ fn
                if np.all(fn > 0) and np.all(sn > 0):
                    phin = np.sum((w + mu) * np.log(fn)) + mu * np.sum(np.log(sn))
                    if phin >= phi0 + 0.25 * alpha * gd:
                        f = fn
                        break
                alpha *= 0.5
            else:
                break
        if mu <= mu_final:
            break
        mu = max(mu * 0.1, mu_final)
    lam = mu / (1.0 - a @ f)
    return f, lam


def log2_rate(a, w, f, beta):
    mask = (w > 0) & (f > 0)
    return float(np.sum(w[mask] * np.log(f[mask])) / (beta * LN2))


def rate_uniform(cond_points, rho_cond, beta):
    a, w = build_uniform(cond_points, rho_cond, beta)
    f, _ = optimize_pef(a, w)
    return log2_rate(a, w, f, beta), f, a, w


def settings_entropy(r):
    return (-(3.0 * r / 4.0) * np.log2(r / 4.0)
            - (1.0 - 3.0 * r / 4.0) * np.log2(1.0 - 3.0 * r / 4.0))


def sigma_spotcheck(cond_points, rho_cond, beta, r):
    a, w = build_spotcheck(cond_points, rho_cond, beta, r)
    f, _ = optimize_pef(a, w)
    return log2_rate(a, w, f, beta)


def golden_max(fn, lo, hi, rel_tol=1e-9, max_iter=200):
    """Golden-section max of fn on [lo, hi]."""
    phi = (np.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - phi * (hi - lo)
    x2 = lo + phi * (hi - lo)
    f1, f2 = fn(x1), fn(x2)
    for _ in range(max_iter):
        if abs(hi - lo) < rel_tol * (abs(lo) + abs(hi)) / 2.0 + 1e-15:
            break
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + phi * (hi - lo)
            f2 = fn(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - phi * (hi - lo)
            f1 = fn(x1)
    x = (lo + hi) / 2.0
    return x, fn(x)


def break_even(cond_points, rho_cond, eps_h):
    kappa = np.log2(1.0 / eps_h)

    def inner(ln_r):
        r = np.exp(ln_r)
        s_r = settings_entropy(r)

        def obj_beta(ln_beta):
            beta = np.exp(ln_beta)
            return beta * (sigma_spotcheck(cond_points, rho_cond, beta, r) - s_r)

        ln_b, val = golden_max(obj_beta, np.log(1e-8), np.log(0.2), rel_tol=1e-7)
        return ln_b, val

    def outer(ln_r):
        return inner(ln_r)[1]

    ln_r, _ = golden_max(outer, np.log(1e-5), np.log(0.5), rel_tol=1e-7)
    r = np.exp(ln_r)
    ln_b, objective = inner(ln_r)
    beta = np.exp(ln_b)
    sigma = sigma_spotcheck(cond_points, rho_cond, beta, r)
    n_c = kappa / objective
    return dict(r=r, beta=beta, sigma=sigma, objective=objective, n_c=n_c)


def main():
    ns = ns_points()
    qq = q_points()

    print("rates at atoms, uniform settings:")
    for name, pts, roof in (("NS", ns, 0.087811314), ("Q", qq, 0.190828676)):
        rates = {}
        for beta in (1e-2, 1e-3, 1e-4):
            rate, f, a, w = rate_uniform(pts, ATOMS, beta)
            worst = np.max(a @ f) - 1.0
            rates[beta] = rate
            print(f"  {name} beta={beta:.0e}: rate={rate:.9f}  margin={worst:.2e}")
        extrap = rates[1e-4] + (rates[1e-4] - rates[1e-3]) / 9.0
        print(f"  {name} extrapolated: {extrap:.9f}  (roof {roof:.9f}, "
              f"diff {abs(extrap - roof):.2e})")

    b = chsh()
    e_chsh = float(np.sum(b * ATOMS) / 4.0)
    print(f"E(CHSH variant) at atoms = {e_chsh:.15f}")

    for name, pts, exp in (
        ("NS", ns, dict(n_c=5177642, beta=1.3624e-4, r=3.7451e-3, sigma=0.060561)),
        ("Q", qq, dict(n_c=2667562, beta=1.4945e-4, r=7.3516e-3, sigma=0.108035)),
    ):
        res = break_even(pts, ATOMS, 1e-6)
        print(f"break-even {name}: n_c={res['n_c']:.1f} beta={res['beta']:.5e} "
              f"r={res['r']:.5e} sigma={res['sigma']:.6f}")
        print(f"   expected: n_c={exp['n_c']} beta={exp['beta']:.5e} "
              f"r={exp['r']:.5e} sigma={exp['sigma']:.6f}")
        print(f"   rel err: n_c {abs(res['n_c'] - exp['n_c']) / exp['n_c']:.2%} "
              f"beta {abs(res['beta'] - exp['beta']) / exp['beta']:.2%} "
              f"r {abs(res['r'] - exp['r']) / exp['r']:.2%} "
              f"sigma {abs(res['sigma'] - exp['sigma']) / exp['sigma']:.2%}")


if __name__ == "__main__":
    main()
