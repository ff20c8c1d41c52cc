"""Independent numpy oracle used to pin golden values and sweep fixtures.

Run: python3 tools/oracle.py > crates/core/tests/fixtures/oracle.json
"""
import json
import math
from fractions import Fraction

import numpy as np


def mobius(x):
    return -(3 * x - 1) / (x - 3)


def cot_map(x):
    return 2 * math.atan2(math.sqrt(2) * math.sin(x / 2), math.cos(x / 2))


def closed_form_mobius(k):
    return -(Fraction(2) ** k - 1) / (Fraction(2) ** k + 1)


def jordan_power_bruteforce(lam, m, k):
    J = np.diag([lam] * m) + np.diag([1.0] * (m - 1), 1) if m > 1 else np.array([[lam]])
    out = np.eye(m)
    for _ in range(k):
        out = out @ J
    return out


def stability_bound(A, horizon):
    best = 0.0
    P = np.eye(A.shape[0])
    for _ in range(horizon + 1):
        best = max(best, np.linalg.norm(P, 2))
        P = P @ A
    return best


def fourier(xs, J, const):
    cols = [np.ones_like(xs)] if const else []
    for j in range(1, J + 1):
        cols.append(np.cos(j * xs))
        cols.append(np.sin(j * xs))
    return np.stack(cols, axis=1)


def monomial(xs, D, const):
    start = 0 if const else 1
    return np.stack([xs ** d for d in range(start, D + 1)], axis=1)


def fit(PX, PY, ridge):
    m = PX.shape[1]
    A = np.vstack([PX, math.sqrt(ridge) * np.eye(m)])
    B = np.vstack([PY, np.zeros((m, m))])
    Kt, *_ = np.linalg.lstsq(A, B, rcond=None)
    return Kt.T


def sweep_cot():
    # training: 512-point grid (sampled uniformly, endpoints included) on [0, pi];
    # held-out: 257 midpoints. Random part of the training set is omitted here:
    # the frontier is a property of the dictionary, not of the sample draw.
    xs = np.linspace(0, math.pi, 512)
    ys = np.array([cot_map(x) for x in xs])
    h = np.linspace(0, math.pi, 258)
    h = 0.5 * (h[1:] + h[:-1])
    hy = np.array([cot_map(x) for x in h])
    rows = []
    for J in range(1, 9):
        for ridge in [0.0, 1e-8, 1e-4]:
            K = fit(fourier(xs, J, False), fourier(ys, J, False), ridge)
            res = np.linalg.norm(fourier(hy, J, False) - fourier(h, J, False) @ K.T, axis=1).max()
            a = fourier(np.array([0.0]), J, False)[0]
            b = fourier(np.array([math.pi]), J, False)[0]
            P = fourier(h, J, False)
            diam = max(np.linalg.norm(P[i] - P[j]) for i in range(len(h)) for j in range(i + 1, len(h)))
            rows.append({"size": J, "ridge": ridge, "residual": float(res),
                         "collapse_ratio": float(np.linalg.norm(a - b) / diam)})
    return rows


def poly_mobius_frontier():
    xs = np.linspace(-1, 1, 512)
    ys = mobius(xs)
    out = []
    for D in range(1, 13):
        K = fit(monomial(xs, D, True), monomial(ys, D, True), 0.0)
        res = np.linalg.norm(monomial(ys, D, True) - monomial(xs, D, True) @ K.T, axis=1).max()
        out.append({"degree": D, "residual": float(res)})
    return out


def main():
    out = {}
    out["mobius_closed_form"] = [float(closed_form_mobius(k)) for k in range(0, 41)]
    # iterate in floats to compare with closed form
    x = 0.0
    errs = []
    for k in range(0, 41):
        errs.append(abs(x - float(closed_form_mobius(k))))
        x = mobius(x)
    out["mobius_float_vs_closed_max_err"] = max(errs)
    out["mobius_at_0"] = mobius(0.0)
    out["mobius_5_3"] = mobius(5.0 / 3.0)
    out["jordan_0.5_2_3"] = jordan_power_bruteforce(0.5, 2, 3).tolist()
    A = np.array([[0.5, 10.0], [0.0, 0.5]])
    out["stability_bound_defective"] = stability_bound(A, 40)
    out["cot_at_half_pi"] = cot_map(math.pi / 2)
    out["cos_conj_check"] = max(abs(math.cos(cot_map(x)) - mobius(math.cos(x)))
                                for x in np.linspace(0.05, math.pi - 0.05, 1000))
    out["rotation_scaling_2_0"] = [4 / 3 * math.cos(1), -4 / 3 * math.sin(1)]
    # Fourier(1) fit of the cot map, ridge 1e-8: train residual (RMS)
    xs = np.linspace(0.1, math.pi - 0.1, 512)
    ys = np.array([cot_map(v) for v in xs])
    K = fit(fourier(xs, 1, False), fourier(ys, 1, False), 1e-8)
    r = fourier(ys, 1, False) - fourier(xs, 1, False) @ K.T
    out["cot_fourier1_train_rms"] = float(math.sqrt((r ** 2).sum(axis=1).mean()))
    out["cot_fourier_sweep"] = sweep_cot()
    out["mobius_poly_frontier"] = poly_mobius_frontier()
    print(json.dumps(out, indent=1))


if __name__ == "__main__":
    main()
