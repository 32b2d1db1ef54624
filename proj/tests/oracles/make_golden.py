"""Independent oracle for golden files: brute-force sums in plain Python/numpy.

Writes reduced_p5_n2_l11.json and sato_tate.json into tests/golden/v1.
"""
import json
import math
import pathlib

import numpy as np

OUT = pathlib.Path(__file__).resolve().parent.parent / "golden" / "v1"


def primitive_root(p):
    fac = [r for r in range(2, p) if (p - 1) % r == 0 and all(r % s for s in range(2, int(r**0.5) + 1))]
    return min(x for x in range(2, p) if all(pow(x, (p - 1) // r, p) != 1 for r in fac))


def reduced_table(p, n, ell):
    zeta = min(z for z in range(2, ell) if pow(z, p, ell) == 1)
    g = primitive_root(p)

    def chi(x):
        return 1 if pow(x, (p - 1) // 2, p) == 1 else -1

    s = sum(chi(x) * pow(zeta, x, ell) for x in range(1, p)) % ell
    assert s * s % ell == p % ell
    assert n == 2
    vals = []
    for j in range(p - 1):
        a = pow(g, j, p)
        S = sum(pow(zeta, (x + a * pow(x, -1, p)) % p, ell) for x in range(1, p)) % ell
        v = (-1) ** (n - 1) * S * pow(s, -(n - 1), ell) % ell
        vals.append({"a_dlog": j, "value": [v]})
    return {"p": p, "k": 1, "n": n, "ell": ell, "conductor": p, "zeta_image": zeta, "sqrt_q": s, "values": vals}


def semicircle_cdf(x):
    x = np.clip(x, -2.0, 2.0)
    return 0.5 + x * np.sqrt(4.0 - x * x) / (4.0 * math.pi) + np.arcsin(x / 2.0) / math.pi


def kl2_values(p):
    cos_table = np.cos(2.0 * math.pi * np.arange(p) / p)
    x = np.arange(1, p, dtype=np.int64)
    inv = np.array([pow(int(v), -1, p) for v in x], dtype=np.int64)
    out = np.empty(p - 1)
    for a in range(1, p):
        out[a - 1] = -cos_table[(x + a * inv) % p].sum() / math.sqrt(p)
    return out


def sato_tate(primes, K):
    rows = []
    for p in primes:
        xs = np.sort(kl2_values(p))
        n = len(xs)
        f = semicircle_cdf(xs)
        i = np.arange(n)
        ks = float(max(((i + 1) / n - f).max(), (f - i / n).max()))
        moments = [float(np.mean(xs**j)) for j in range(1, 2 * K + 1)]
        rows.append({"p": p, "moments": moments, "ks": ks})
    return {"n": 2, "K": K, "rows": rows}


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "reduced_p5_n2_l11.json").write_text(json.dumps(reduced_table(5, 2, 11), indent=1) + "\n")
    (OUT / "sato_tate.json").write_text(json.dumps(sato_tate([101, 1009, 10007], 3), indent=1) + "\n")
