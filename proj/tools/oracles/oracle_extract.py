"""Oracle for extractor golden vectors and exhaustive strongness values.

Independent reference implementation of Toeplitz extraction
    output_j = XOR_i (seed[j+i] AND d[i]),  j in [0,m), i in [0,n)
used to freeze golden outputs and the exact total-variation distances of
the (output, seed) joint from uniform at toy scale (n=8, m=2, seed
length 9), plus the TMPS parameter-calculator values.
"""

import numpy as np

rng = np.random.default_rng(20260819)


def toeplitz(d, seed, m):
    n = len(d)
    assert len(seed) == n + m - 1
    return [int(np.bitwise_xor.reduce(
        [seed[j + i] & d[i] for i in range(n)])) for j in range(m)]


def bits_to_str(bits):
    return "".join(str(b) for b in bits)


def tv_flat(support, n=8, m=2):
    """Exact TV of (Ext(D,S),S) from uniform, D flat on `support`."""
    l = n + m - 1
    total = 0.0
    for s in range(2 ** l):
        seed = [(s >> i) & 1 for i in range(l)]
        counts = np.zeros(2 ** m)
        for d_val in support:
            d = [(d_val >> i) & 1 for i in range(n)]
            out = toeplitz(d, seed, m)
            idx = sum(b << j for j, b in enumerate(out))
            counts[idx] += 1
        p = counts / len(support)
        total += 0.5 * np.sum(np.abs(p - 1.0 / 2 ** m))
    return total / 2 ** l


def main():
    # golden vector 1: the hand example
    assert toeplitz([1, 0], [1, 0], 1) == [1]
    print("golden 1: n=2 m=1 d=10 seed=10 -> 1")

    # golden vectors 2 and 3: fixed random bit strings
    d2 = rng.integers(0, 2, 64).tolist()
    s2 = rng.integers(0, 2, 64 + 16 - 1).tolist()
    o2 = toeplitz(d2, s2, 16)
    print(f"golden 2: n=64 m=16")
    print(f"  d    = {bits_to_str(d2)}")
    print(f"  seed = {bits_to_str(s2)}")
    print(f"  out  = {bits_to_str(o2)}")

    d3 = rng.integers(0, 2, 100).tolist()
    s3 = rng.integers(0, 2, 100 + 32 - 1).tolist()
    o3 = toeplitz(d3, s3, 32)
    print(f"golden 3: n=100 m=32")
    print(f"  d    = {bits_to_str(d3)}")
    print(f"  seed = {bits_to_str(s3)}")
    print(f"  out  = {bits_to_str(o3)}")

    # uniform-input TV at n=8, m=2 (exact)
    tv_u = tv_flat(list(range(256)))
    print(f"uniform d TV = {tv_u:.12f} (= 9/2048 = {9/2048:.12f}), "
          f"bound {0.5 * 2 ** ((2 - 8) / 2):.6f}")

    # worst coordinate-subspace flat set: zero two coordinates, vary rest
    worst = (-1.0, None)
    for i in range(8):
        for j in range(i + 1, 8):
            support = [v for v in range(256)
                       if not ((v >> i) & 1) and not ((v >> j) & 1)]
            tv = tv_flat(support)
            if tv > worst[0]:
                worst = (tv, (i, j))
    print(f"worst coordinate subspace: zeroed bits {worst[1]}, "
          f"TV = {worst[0]:.12f} (= 9/512 = {9/512:.12f})")

    # random flat sets
    max_rand = 0.0
    for _ in range(200):
        support = rng.choice(256, size=64, replace=False)
        max_rand = max(max_rand, tv_flat(list(support)))
    print(f"max TV over 200 random flat(64) sets: {max_rand:.12f} "
          f"(leftover-hash bound {0.5 * 2 ** ((2 - 6) / 2):.6f})")

    # TMPS calculator values
    sigma, eps_x, n = 256.0, 2.0 ** -10, 1.82e8
    sigma_h = sigma + 4 * np.log2(sigma) + 4 * np.log2(1 / eps_x) + 6
    l = np.ceil(36 * np.log2(sigma) * np.log2(4 * n * sigma ** 2 / eps_x ** 2) ** 2)
    print(f"tmps: sigma=256 eps_x=2^-10 -> sigma_h={sigma_h:.1f}, "
          f"n=1.82e8 -> l={l:.0f}")

    # toeplitz_params derived example
    sig = np.floor(1000 - 2 * np.log2(1 / 2.0 ** -32))
    print(f"toeplitz_params: sigma={sig:.0f}, l={1_000_000 + int(sig) - 1}")


if __name__ == "__main__":
    main()
