#!/usr/bin/env python3
"""Entropy solution of the sine-flux Riemann problem and L1 floors for limits
that miss one rarefaction fan.

For q_L < q_R the entropy solution follows the lower convex envelope of f on
[q_L, q_R]. A function that takes no value inside the open range (a, b) of a
fan differs from the exact solution by at least min(q - a, b - q) at every
point of the fan, so the integral of that bound (normalized by the domain
length) is a lower bound on its L1 distance. The floor is the smallest bound
over the fans. Collapsing a fan with its neighbouring shocks into a single
Rankine-Hugoniot shock gives one concrete such weak solution; its distance
is printed for comparison.

Usage: derive_floor.py [reference.csv]
"""
import sys

import numpy as np

QL, QR = np.pi / 64, 255 * np.pi / 64
A, B, T = -5.0, 5.0, 4.0
NQ = 400001


def lower_hull(q, f):
    h = []
    for k in range(len(q)):
        while len(h) >= 2:
            i, j = h[-2], h[-1]
            if (f[j] - f[i]) * (q[k] - q[i]) >= (f[k] - f[i]) * (q[j] - q[i]):
                h.pop()
            else:
                break
        h.append(k)
    return np.array(h)


def waves(q, f, hull):
    """List of ('fan', a, b) and ('shock', a, b) in increasing q."""
    out = []
    dq = q[1] - q[0]
    k = 0
    while k < len(hull) - 1:
        i, j = hull[k], hull[k + 1]
        if j - i == 1:
            m = k
            while m < len(hull) - 1 and hull[m + 1] - hull[m] == 1:
                m += 1
            out.append(("fan", q[hull[k]], q[hull[m]]))
            k = m
        else:
            out.append(("shock", q[i], q[j]))
            k += 1
    del dq
    return out


def profile(ws, x, t):
    """Sample q(x, t) for a wave list ordered by increasing q (speeds increasing)."""
    xi = x / t
    qv = np.full_like(x, QL)
    for kind, a, b in ws:
        if kind == "shock":
            s = (np.sin(b) - np.sin(a)) / (b - a)
            qv = np.where(xi > s, b, qv)
        else:
            # f'(q) = cos q increasing on the fan; invert on [a, b]
            ca, cb = np.cos(a), np.cos(b)
            inside = (xi > ca) & (xi <= cb)
            ang = np.arccos(np.clip(xi, -1, 1))
            # pick the branch of arccos lying in [a, b]
            base = np.floor(a / (2 * np.pi)) * 2 * np.pi
            cand = [base + ang, base + 2 * np.pi - ang, base + 2 * np.pi + ang, base - ang]
            sel = np.copy(ang)
            for c in cand:
                ok = (c >= a - 1e-9) & (c <= b + 1e-9)
                sel = np.where(ok, c, sel)
            qv = np.where(inside, sel, qv)
            qv = np.where(xi > cb, b, qv)
    return qv


def cell_averages(ws, n, sub=64):
    dx = (B - A) / n
    x = A + (np.arange(n * sub) + 0.5) * dx / sub
    return profile(ws, x, T).reshape(n, sub).mean(axis=1)


def main():
    q = np.linspace(QL, QR, NQ)
    f = np.sin(q)
    ws = waves(q, f, lower_hull(q, f))
    print("entropy waves:")
    for w in ws:
        print("  %-5s %.6f -> %.6f" % w)
    n = 20000
    exact = cell_averages(ws, n)
    fans = [k for k, w in enumerate(ws) if w[0] == "fan"]
    dists = []
    for k in fans:
        lo = k - 1 if k > 0 and ws[k - 1][0] == "shock" else k
        hi = k + 1 if k + 1 < len(ws) and ws[k + 1][0] == "shock" else k
        merged = ws[:lo] + [("shock", ws[lo][1], ws[hi][2])] + ws[hi + 1:]
        d = np.mean(np.abs(cell_averages(merged, n) - exact))
        dists.append(d)
        print("missing fan %d (%.4f..%.4f): L1 distance %.6e" % (k, ws[k][1], ws[k][2], d))
    x = A + (np.arange(n * 64) + 0.5) * (B - A) / (n * 64)
    qx = profile(ws, x, T)
    bounds = []
    for k in fans:
        a, b = ws[k][1], ws[k][2]
        inside = (qx > a) & (qx < b)
        bound = np.sum(np.where(inside, np.minimum(qx - a, b - qx), 0.0)) / len(x)
        bounds.append(bound)
        print("fan %d pointwise bound %.6e" % (k, bound))
    print("floor = %.6e" % min(bounds))
    if len(sys.argv) > 1:
        ref = np.genfromtxt(sys.argv[1], delimiter=",", comments="#", skip_header=2)[:, 1]
        print("reference vs exact (n=%d): L1 %.6e" % (len(ref), np.mean(np.abs(ref - cell_averages(ws, len(ref))))))


if __name__ == "__main__":
    main()
