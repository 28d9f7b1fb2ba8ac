#!/usr/bin/env python3
"""Exact linear weights and big-stencil rows of the 1D HWENO5 and WENO5
reconstructions, by symbolic fitting on the unit cell [-1/2, 1/2].

Data of cell k: average of p over [k - 1/2, k + 1/2], and average of dx p'
(= p(k + 1/2) - p(k - 1/2)).
"""
import sympy as sp

x = sp.Symbol("x")
h = sp.Rational(1, 2)


def avg(p, k):
    return sp.integrate(p, (x, k - h, k + h))


def grad(p, k):
    return p.subs(x, k + h) - p.subs(x, k - h)


def fit(functionals, degree):
    """Rows giving polynomial coefficients in terms of the data."""
    c = sp.symbols("c0:%d" % (degree + 1))
    d = sp.symbols("d0:%d" % len(functionals))
    p = sum(ci * x**i for i, ci in enumerate(c))
    eqs = [fn(p) - di for fn, di in zip(functionals, d)]
    sol = sp.solve(eqs, c, dict=True)[0]
    return sp.expand(p.subs(sol)), d


def row(expr, syms, names, order):
    vals = dict.fromkeys(order, sp.Integer(0))
    for s, n in zip(syms, names):
        vals[n] += sp.expand(expr).coeff(s)
    return [vals[k] for k in order]


A = lambda k: (lambda p: avg(p, k))
G = lambda k: (lambda p: grad(p, k))
ORDER = ["q-1", "q0", "q1", "x-1", "x0", "x1"]


def weights(sets, big, evaluate):
    rows = []
    for fns, names in sets:
        p, d = fit(fns, len(fns) - 1)
        rows.append(row(evaluate(p), d, names, ORDER))
    pb, db = fit(big[0], len(big[0]) - 1)
    target = row(evaluate(pb), db, big[1], ORDER)
    g = sp.symbols("g0:3")
    eqs = [sum(g[m] * rows[m][k] for m in range(3)) - target[k] for k in range(len(ORDER))]
    sol = sp.solve(eqs, g, dict=True)[0]
    return [sol[gi] for gi in g], target


vsets = [
    ([A(-1), A(0), G(-1)], ["q-1", "q0", "x-1"]),
    ([A(-1), A(0), A(1)], ["q-1", "q0", "q1"]),
    ([A(0), A(1), G(1)], ["q0", "q1", "x1"]),
]
vbig = ([A(-1), A(0), A(1), G(-1), G(1)], ["q-1", "q0", "q1", "x-1", "x1"])
dsets = [
    ([A(-1), A(0), G(-1), G(0)], ["q-1", "q0", "x-1", "x0"]),
    ([A(-1), A(0), A(1), G(0)], ["q-1", "q0", "q1", "x0"]),
    ([A(0), A(1), G(0), G(1)], ["q0", "q1", "x0", "x1"]),
]
dbig = ([A(-1), A(0), A(1), G(-1), G(0), G(1)], ORDER)

gv, tv = weights(vsets, vbig, lambda p: p.subs(x, h))
gd, td = weights(dsets, dbig, lambda p: sp.diff(p, x).subs(x, h))
print("hweno5 value gamma      ", gv)
print("hweno5 value big row    ", tv)
print("hweno5 derivative gamma ", gd)
print("hweno5 derivative row   ", td)

wsets = [([A(m - 2), A(m - 1), A(m)], None) for m in range(3)]
for s in (h, -h):
    rows = []
    for fns, _ in wsets:
        p, d = fit(fns, 2)
        rows.append([sp.expand(p.subs(x, s)).coeff(di) for di in d])
    pb, db = fit([A(k - 2) for k in range(5)], 4)
    target = [sp.expand(pb.subs(x, s)).coeff(di) for di in db]
    g = sp.symbols("g0:3")
    eqs = [sum(g[m] * (rows[m][k - m] if 0 <= k - m < 3 else 0) for m in range(3)) - target[k] for k in range(5)]
    print("weno5 gamma at %s" % s, [v for v in sp.solve(eqs, g, dict=True)[0].values()])
