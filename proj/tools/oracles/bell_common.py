"""Shared construction code for the (2,2,2) Bell polytope oracles.

Index conventions (must match the C++ library):
  settings z = x + 2*y, so z order is (x,y) = 00,10,01,11
  outcomes c = a + 2*b, same pattern
  joint cell = z*4 + c
LR points ordered lexicographically by (f_A(0),f_A(1),f_B(0),f_B(1));
PR boxes ordered by ascending mask m = sum g(z)<<z;
Q mixtures ordered by (g, LR partner index).
"""

import numpy as np

Q_MIX = np.sqrt(2.0) - 1.0


def z_index(x, y):
    return x + 2 * y


def c_index(a, b):
    return a + 2 * b


def lr_points():
    """16 deterministic conditionals, shape (16, 4, 4) indexed [z][c]."""
    pts = []
    for fa0 in (0, 1):
        for fa1 in (0, 1):
            for fb0 in (0, 1):
                for fb1 in (0, 1):
                    fa = (fa0, fa1)
                    fb = (fb0, fb1)
                    t = np.zeros((4, 4))
                    for x in (0, 1):
                        for y in (0, 1):
                            t[z_index(x, y), c_index(fa[x], fb[y])] = 1.0
                    pts.append(t)
    return np.array(pts)


def pr_masks():
    return [m for m in range(16) if bin(m).count("1") % 2 == 1]


def pr_point(mask):
    t = np.zeros((4, 4))
    for x in (0, 1):
        for y in (0, 1):
            z = z_index(x, y)
            g = (mask >> z) & 1
            for a in (0, 1):
                for b in (0, 1):
                    if a == (b ^ g):
                        t[z, c_index(a, b)] = 0.5
    return t


def bell_g(mask):
    """B_g as a (4,4) table; p(g)=0 iff |g^-1(1)|=1."""
    pg = 0 if bin(mask).count("1") == 1 else 1
    t = np.zeros((4, 4))
    for x in (0, 1):
        for y in (0, 1):
            z = z_index(x, y)
            g = (mask >> z) & 1
            for a in (0, 1):
                for b in (0, 1):
                    ind = 1.0 if a != (b ^ pg) else 0.0
                    t[z, c_index(a, b)] = -((-1.0) ** (g + pg)) * ind
    return t


def chsh():
    # B(xyab) = ([xy=11]-[xy=01]-[xy=10]-[xy=00])*|a-b|
    t = np.zeros((4, 4))
    for x in (0, 1):
        for y in (0, 1):
            z = z_index(x, y)
            s = 1.0 if (x == 1 and y == 1) else -1.0
            for a in (0, 1):
                for b in (0, 1):
                    t[z, c_index(a, b)] = s * abs(a - b)
    return t


def expect_uniform(bell, cond):
    """E(B) for conditional `cond` with uniform settings."""
    return float(np.sum(bell * cond) / 4.0)


def q_points():
    """16 LR + 8*8 Tsirelson-saturating mixtures, canonical order."""
    lr = lr_points()
    pts = [t for t in lr]
    for mask in pr_masks():
        bg = bell_g(mask)
        prt = pr_point(mask)
        partners = [i for i in range(16) if abs(expect_uniform(bg, lr[i])) < 1e-14]
        assert len(partners) == 8, (mask, partners)
        for i in partners:
            pts.append((1.0 - Q_MIX) * lr[i] + Q_MIX * prt)
    return np.array(pts)


def ns_points():
    lr = lr_points()
    return np.array([t for t in lr] + [pr_point(m) for m in pr_masks()])


# Settings-conditional tables from the three experiments, [z][c] layout,
# row order z = 00,10,01,11 and column order c = 00,10,01,11.
ATOMS = np.array([
    [0.114583230563265, 0.408949785618886, 0.369310344143205, 0.107156639674644],
    [0.399140705802719, 0.124392310379432, 0.111262723543957, 0.365204260273892],
    [0.102208313465938, 0.403210760398438, 0.381685261240533, 0.112895664895092],
    [0.127756153189431, 0.377662920674945, 0.382647276157245, 0.111933649978380],
])

XOR3 = np.array([
    [0.999596756631154, 0.000106695746779, 0.000100495174505, 0.000196052447562],
    [0.999039892488787, 0.000663559889146, 0.000086780398739, 0.000209767223328],
    [0.998967962694884, 0.000089505202208, 0.000729289110776, 0.000213242992132],
    [0.998187653168081, 0.000869814729010, 0.000939019719445, 0.000003512383464],
])

IONS = np.array([
    [0.395306466091468, 0.117610486235535, 0.093816274721118, 0.393266772951878],
    [0.385009648861242, 0.101263041214040, 0.104113091951344, 0.409614217973373],
    [0.411397337408393, 0.101519614918611, 0.097960367844259, 0.389122679828738],
    [0.077378395334667, 0.408894294740616, 0.431979309917985, 0.081748000006733],
])


def cond_entropy_bits(cond, settings):
    """H(C|Z) in bits for conditional [z][c] and settings 4-vector."""
    h = 0.0
    for z in range(4):
        for c in range(4):
            p = cond[z, c]
            if p > 0:
                h -= settings[z] * p * np.log2(p)
    return h


def bias_settings_points(b):
    """Extreme points of the product bias polytope, (u,v) in {0,1}^2."""
    pts = []
    for u in (0, 1):
        for v in (0, 1):
            s = np.zeros(4)
            for x in (0, 1):
                for y in (0, 1):
                    s[z_index(x, y)] = (1 + (-1) ** (u + x) * b) * (1 + (-1) ** (v + y) * b) / 4.0
            pts.append(s)
    return np.array(pts)
