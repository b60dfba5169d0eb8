"""Brute-force reference computations that share no code with the package
beyond the Fan container: weights come from a sympy nullspace, monomials
from a box scan, ranks from sympy's DomainMatrix."""
from __future__ import annotations

from itertools import combinations_with_replacement, product

import numpy as np
import sympy
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix


def rational_weights(rays):
    """Rows spanning {u : sum_rho u_rho v_rho = 0} over Q."""
    B = sympy.Matrix(rays)  # N x n
    rows = B.T.nullspace()
    return [list(r) for r in rows]


def opposite_map(rays):
    idx = {tuple(v): i for i, v in enumerate(rays)}
    return {i: idx[tuple(-x for x in v)] for i, v in enumerate(rays) if tuple(-x for x in v) in idx}


def _setup(rays, kind):
    N = len(rays)
    W = rational_weights(rays)
    r = len(W)
    a = [[W[k][rho] for k in range(r)] for rho in range(N)]
    opp = opposite_map(rays)
    if kind == "R":
        live = [i for i in range(N) if i not in opp or opp[i] > i]
        tw = {i: [-(a[i][k] + (a[opp[i]][k] if i in opp else 0)) for k in range(r)] for i in live}
        rels = []
        # Sigma_1-perp: u on live rays with sum u_rho v_rho = 0
        M = sympy.Matrix([list(rays[i]) for i in live]).T
        for u in M.nullspace():
            poly = {}
            for coeff, rho in zip(u, live):
                if coeff:
                    e = [0] * (2 * N)
                    e[rho] += 1
                    if rho in opp:
                        e[opp[rho]] += 1
                    e[N + rho] += 1
                    poly[tuple(e)] = sympy.Rational(coeff)
            rels.append(poly)
    else:
        live = list(range(N))
        tw = {i: [-a[i][k] for k in range(r)] for i in live}
        rels = []
        for row in W:
            poly = {}
            for rho, coeff in enumerate(row):
                if coeff:
                    e = [0] * (2 * N)
                    e[rho] = 1
                    e[N + rho] = 1
                    poly[tuple(e)] = sympy.Rational(coeff)
            rels.append(poly)
    return N, r, a, live, tw, rels


def box_monomials(rays, kind, deg, bound):
    """Class-0 monomials of fiber degree ``deg`` with S-exponents <= bound."""
    N, r, a, live, tw, _ = _setup(rays, kind)
    grid = np.array(list(product(range(bound + 1), repeat=N)), dtype=np.int64)
    s_class = grid @ np.array([[sympy.Rational(x) for x in col] for col in a], dtype=object)
    lookup: dict = {}
    for row, cls in zip(grid, s_class):
        lookup.setdefault(tuple(cls), []).append(tuple(int(x) for x in row))
    out = set()
    for combo in combinations_with_replacement(live, deg):
        need = [0] * r
        I = [0] * N
        for rho in combo:
            I[rho] += 1
            for k in range(r):
                need[k] -= tw[rho][k]
        for Ip in lookup.get(tuple(need), []):
            out.add(Ip + tuple(I))
    return sorted(out)


def stable_box_monomials(rays, kind, deg):
    bound = 2 * deg + 1
    while True:
        a = box_monomials(rays, kind, deg, bound)
        b = box_monomials(rays, kind, deg, bound + 2)
        if a == b:
            return a
        bound += 2


def brute_force_dims(rays, kind, p_max):
    _, _, _, _, _, rels = _setup(rays, kind)
    dims = []
    prev = None
    for p in range(p_max + 1):
        monos = stable_box_monomials(rays, kind, p)
        if p == 0:
            dims.append(len(monos))
            prev = monos
            continue
        col = {m: i for i, m in enumerate(monos)}
        rows = []
        for m in prev:
            for rel in rels:
                row = [QQ(0)] * len(monos)
                keep = True
                for e, c in rel.items():
                    prod_e = tuple(x + y for x, y in zip(m, e))
                    if prod_e not in col:
                        keep = False
                        break
                    row[col[prod_e]] += QQ(int(c.p), int(c.q))
                if keep:
                    rows.append(row)
        rank = DomainMatrix(rows, (len(rows), len(monos)), QQ).rank() if rows and monos else 0
        dims.append(len(monos) - rank)
        prev = monos
    return dims
