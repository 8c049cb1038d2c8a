#!/usr/bin/env python3
"""Compute the principal block of D:I for a catalogued I <= GL(2,p).

D = F_p^2. Irr(D:I) comes from Clifford theory; the stabilizers of nontrivial
characters of D are abelian for every catalogue entry, so induced values are
exact sums of roots of unity. Characters of I itself are computed
numerically (Burnside-Dixon) and only enter through inner products, which
are rounded to integers.

Writes one JSON file per catalogue entry with Q1(b), the generalized
decomposition matrices Q_u(b) and the p-singular part of the character
table.

    python3 scripts/local_model.py OUTDIR [NAME ...]
    python3 scripts/local_model.py --catalogue FILE
"""
import itertools
import json
import math
import re
import sys
from functools import reduce

import numpy as np

# --------------------------------------------------------------------------
# GL(2,p) and D:I

def mul(a, b, p):
    return ((a[0] * b[0] + a[1] * b[2]) % p, (a[0] * b[1] + a[1] * b[3]) % p,
            (a[2] * b[0] + a[3] * b[2]) % p, (a[2] * b[1] + a[3] * b[3]) % p)


def inv(g, p):
    a, b, c, d = g
    di = pow((a * d - b * c) % p, p - 2, p)
    return ((d * di) % p, (-b * di) % p, (-c * di) % p, (a * di) % p)


def act(g, v, p):
    return ((g[0] * v[0] + g[1] * v[1]) % p, (g[2] * v[0] + g[3] * v[1]) % p)


def closure(gens, p):
    ident = (1, 0, 0, 1)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g, p)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def elem_order(g, p):
    ident = (1, 0, 0, 1)
    x, n = g, 1
    while x != ident:
        x, n = mul(x, g, p), n + 1
    return n


CATALOGUE = {
    # name: (p, generators as (a,b,c,d) meaning [[a,b],[c,d]])
    "Z8": (3, [(0, 1, 1, 1)]),
    "Q8": (3, [(0, 1, 2, 0), (1, 1, 1, 2)]),
    "SD16": (3, [(0, 1, 1, 0), (1, 1, 1, 2)]),
    "D8": (3, [(0, 1, 1, 0), (0, 1, 2, 0)]),
    "Z4xS3": (5, [(0, 1, 1, 0), (0, 2, 3, 2)]),
    "SL(2,3):Z4": (5, [(0, 1, 1, 2), (0, 1, 2, 0)]),
    "SL(2,3):Z2": (5, [(0, 1, 1, 0), (1, 1, 2, 3)]),
    "Z24:Z2": (5, [(0, 1, 1, 0), (1, 1, 2, 4)]),
    "Z4wrZ2": (5, [(0, 1, 1, 0), (0, 1, 2, 0)]),
    "D12": (5, [(0, 1, 1, 0), (0, 1, 4, 1)]),
    "SL(2,3)xZ3": (7, [(0, 1, 3, 0), (0, 1, 5, 3)]),
    "2.S4-xZ3": (7, [(0, 1, 3, 0), (0, 1, 5, 2)]),
}

# --------------------------------------------------------------------------
# numeric character tables (Burnside-Dixon)

def conjugacy_classes(G, p):
    index = {g: i for i, g in enumerate(G)}
    seen = [False] * len(G)
    classes = []
    for g in sorted(G, key=lambda x: x != (1, 0, 0, 1)):
        if seen[index[g]]:
            continue
        cl = sorted({mul(mul(h, g, p), inv(h, p), p) for h in G})
        for x in cl:
            seen[index[x]] = True
        classes.append(cl)
    return classes


def character_table(G, p):
    """Rows = irreducible characters, columns = classes (numeric)."""
    classes = conjugacy_classes(G, p)
    r = len(classes)
    cls_of = {}
    for i, cl in enumerate(classes):
        for x in cl:
            cls_of[x] = i
    reps = [cl[0] for cl in classes]
    # class multiplication coefficients a[j][i][k] = #{x in C_j : x*rep_i in C_k}
    mats = []
    for j in range(r):
        m = np.zeros((r, r))
        for i in range(r):
            for x in classes[j]:
                m[i][cls_of[mul(x, reps[i], p)]] += 1
        mats.append(m)
    rng = np.random.default_rng(1)
    comb = sum(rng.standard_normal() * m for m in mats)
    vals, vecs = np.linalg.eig(comb)
    sizes = np.array([len(c) for c in classes], dtype=float)
    one = cls_of[(1, 0, 0, 1)]
    order = len(G)
    table = []
    for t in range(r):
        # eigenvector entries are chi(g_k) / chi(1)
        chi_over_deg = vecs[:, t] / vecs[one, t]
        norm = np.sum(sizes * np.abs(chi_over_deg) ** 2) / order
        table.append(chi_over_deg / math.sqrt(norm.real))
    table = np.array(table)
    # sort: trivial first, then by degree
    keyed = sorted(range(r), key=lambda t: (round(table[t][0].real), -round(float(np.sum(table[t].real)), 6),
                                            tuple(np.round(table[t].real, 6)), tuple(np.round(table[t].imag, 6))))
    table = table[keyed]
    check = (table * sizes) @ np.conj(table).T / order
    assert np.allclose(check, np.eye(r), atol=1e-8), "character table not orthonormal"
    return classes, cls_of, table

# --------------------------------------------------------------------------
# exact cyclotomic values as exponent vectors over zeta_N

def cyc_zero(n):
    return [0] * n


def cyc_add_root(vec, n, e, coef=1):
    vec[e % n] += coef


def round_int(z):
    v = round(z.real)
    assert abs(z - v) < 1e-6, z
    return int(v)


def linear_character_exponents(H, p):
    """Exact linear characters of an abelian group H as exponent maps."""
    # H abelian: characters via numeric table, exponents recovered by angle
    classes, cls_of, table = character_table(H, p)
    assert len(classes) == len(H)
    n = reduce(lambda a, b: a * b // math.gcd(a, b), [elem_order(h, p) for h in H], 1)
    chars = []
    for row in table:
        emap = {}
        for h in H:
            z = row[cls_of[h]]
            ang = math.atan2(z.imag, z.real) / (2 * math.pi) * n
            e = round(ang) % n
            assert abs(ang - round(ang)) < 1e-6
            emap[h] = e
        chars.append(emap)
    return n, chars


def model(name):
    p, gens = CATALOGUE[name]
    I = closure(gens, p)
    assert len(I) % p
    classes, cls_of, table = character_table(I, p)
    lI = len(classes)
    pts = [(x, y) for x in range(p) for y in range(p)]
    # orbits of I on Irr(D) (index a; lambda_a(v) = zeta^{a.v}); g.lambda_a = lambda_{g^-T a}
    def tr(g):
        return (g[0], g[2], g[1], g[3])
    seen = set()
    irr_orbits = []
    for a in pts:
        if a == (0, 0) or a in seen:
            continue
        orb = sorted({act(tr(inv(g, p)), a, p) for g in I})
        seen.update(orb)
        irr_orbits.append(orb)
    # orbits on D \ {0}
    seen = set()
    d_orbits = []
    for v in pts:
        if v == (0, 0) or v in seen:
            continue
        orb = sorted({act(g, v, p) for g in I})
        seen.update(orb)
        d_orbits.append(orb)
    N = p
    induced = []  # (a, stabilizer H, exponent order n_H, psi exponent map)
    for orb in irr_orbits:
        a = orb[0]
        H = [g for g in I if act(tr(g), a, p) == a]
        nH, lin = linear_character_exponents(H, p)
        N = N * nH // math.gcd(N, nH)
        for psi in lin:
            induced.append((a, H, nH, psi))
    N = N * p // math.gcd(N, p)
    k = lI + len(induced)

    def induced_value(entry, v, s):
        """Exact value of Ind_{D:H}^{D:I}(lambda_a x psi) at (v,s), as exponent vector mod N."""
        a, H, nH, psi = entry
        Hs = set(H)
        vec = cyc_zero(N)
        count = 0
        for y in I:
            # y (v,s) y^-1 = (y v, y s y^-1)
            t = mul(mul(y, s, p), inv(y, p), p)
            if t not in Hs:
                continue
            w = act(y, v, p)
            e_lambda = (a[0] * w[0] + a[1] * w[1]) % p
            e = e_lambda * (N // p) + psi[t] * (N // nH)
            cyc_add_root(vec, N, e)
            count += 1
        # divide by |H|
        assert all(c % len(H) == 0 for c in vec), "induced value not integral in exponent form"
        return [c // len(H) for c in vec]

    def numeric(vec):
        return sum(c * np.exp(2j * np.pi * e / N) for e, c in enumerate(vec) if c)

    # decomposition matrix Q1: rows Irr(D:I), columns Irr(I)
    sizes = np.array([len(c) for c in classes], dtype=float)
    reps = [c[0] for c in classes]
    q1 = [[1 if i == j else 0 for j in range(lI)] for i in range(lI)]
    for entry in induced:
        vals = np.array([numeric(induced_value(entry, (0, 0), s)) for s in reps])
        row = [round_int(np.sum(sizes * vals * np.conj(table[j])) / len(I)) for j in range(lI)]
        q1.append(row)
    # generalized decomposition matrices
    labels = []
    qu = {}
    psingular_cols = []
    for idx, orb in enumerate(d_orbits):
        u = orb[0]
        C = [g for g in I if act(g, u, p) == u]
        nC, lin = linear_character_exponents(C, p)
        label = f"o{idx}"
        labels.append({"label": label, "rep": list(u), "size": len(orb), "e": len(C)})
        M = np.lcm(N, nC)
        # values chi(u s) for s in C (C abelian, all classes singletons)
        table_rows = []
        # exact values of inflated characters at s: multiplicities of eigenvalues of rho(s)
        for i in range(lI):
            vals = {}
            for s in C:
                m = elem_order(s, p)
                powers = [(1, 0, 0, 1)]
                for _ in range(m - 1):
                    powers.append(mul(powers[-1], s, p))
                vec = [0] * M
                for j in range(m):
                    # multiplicity of eigenvalue zeta_m^j
                    z = sum(table[i][cls_of[powers[t]]] * np.exp(-2j * np.pi * j * t / m) for t in range(m)) / m
                    mult = round_int(z)
                    if mult:
                        vec[(j * (M // m)) % M] += mult
                vals[s] = vec
            table_rows.append(vals)
        for entry in induced:
            vals = {}
            for s in C:
                v = induced_value(entry, u, s)
                vec = [0] * M
                for e, c in enumerate(v):
                    vec[(e * (M // N)) % M] += c
                vals[s] = vec
            table_rows.append(vals)
        # decomposition: d^u_{chi,phi} = 1/|C| sum_s chi(us) conj(phi(s)), exact in exponent form
        Q = []
        for vals in table_rows:
            row = []
            for phi in lin:
                vec = [0] * M
                for s in C:
                    shift = (-phi[s] * (M // nC)) % M
                    for e, c in enumerate(vals[s]):
                        if c:
                            vec[(e + shift) % M] += c
                row.append(vec)
            Q.append(row)
        qu[label] = {"n": int(M), "div": len(C), "rows": Q}
        for s in C:
            psingular_cols.append((int(M), [vals[s] for vals in table_rows]))
    return {
        "p": p, "I": I, "lI": lI, "k": k, "labels": labels, "q1": q1, "qu": qu,
        "psingular": psingular_cols, "N": N,
    }

# --------------------------------------------------------------------------
# exact reduction helpers (python side, only for sanity checks / output)

def cyclotomic_poly(n):
    # integer coefficients, low degree first
    def polydiv(num, den):
        num = num[:]
        out = [0] * (len(num) - len(den) + 1)
        for i in range(len(num) - len(den), -1, -1):
            q = num[i + len(den) - 1] // den[-1]
            out[i] = q
            for j, c in enumerate(den):
                num[i + j] -= q * c
        assert all(x == 0 for x in num[:len(den) - 1])
        return out
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = polydiv(poly, cyclotomic_poly(d))
    return poly


def reduce_cyc(vec, n):
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    v = list(vec) + [0] * max(0, n - len(vec))
    for i in range(len(v) - 1, deg - 1, -1):
        c = v[i]
        if c:
            for j in range(deg + 1):
                v[i - deg + j] -= c * phi[j]
    return v[:deg]


def divide_exponent_vec(vec, n, d):
    """Divide an exponent-form cyclotomic by an integer d exactly (after reduction)."""
    red = reduce_cyc(vec, n)
    assert all(c % d == 0 for c in red), (red, d)
    return [c // d for c in red]


def enc(vec, n):
    red = reduce_cyc(vec, n)
    if all(c == 0 for c in red[1:]):
        return red[0] if red else 0
    return {"n": n, "c": [str(c) for c in red]}


def descend(red, n):
    """Rewrite an element of Z[zeta_n] (power-basis coords) over the smallest
    conductor d | n that contains it. Returns (d, coords)."""
    import sympy
    if all(c == 0 for c in red[1:]):
        return 1, [red[0] if red else 0]
    target = sympy.Matrix(red)
    for d in sorted(x for x in range(2, n + 1) if n % x == 0):
        deg = len(cyclotomic_poly(d)) - 1
        cols = []
        for j in range(deg):
            e = [0] * n
            e[(j * (n // d)) % n] = 1
            cols.append(reduce_cyc(e, n))
        B = sympy.Matrix(cols).T
        try:
            sol, params = B.gauss_jordan_solve(target)
        except ValueError:
            continue
        if params.shape[0]:
            continue
        if all(x.is_integer for x in sol):
            return d, [int(x) for x in sol]
    raise AssertionError("no conductor found")


def encode(vec, n, div=1):
    red = reduce_cyc(vec, n)
    assert all(c % div == 0 for c in red), (red, div)
    red = [c // div for c in red]
    d, coords = descend(red, n)
    if d == 1:
        return coords[0]
    return {"n": d, "c": [str(c) for c in coords]}


def build(name):
    mdl = model(name)
    p = mdl["p"]
    out = {
        "group": name,
        "p": p,
        "order_I": len(mdl["I"]),
        "generators": [[[g[0], g[1]], [g[2], g[3]]] for g in CATALOGUE[name][1]],
        "k": mdl["k"],
        "l": mdl["lI"],
        "orbits": mdl["labels"],
        "q1": mdl["q1"],
        "qu": {},
    }
    for lab in mdl["labels"]:
        q = mdl["qu"][lab["label"]]
        out["qu"][lab["label"]] = [[encode(v, q["n"], q["div"]) for v in row] for row in q["rows"]]
    cols = []
    for n, vals in mdl["psingular"]:
        cols.append([encode(v, n) for v in vals])
    out["psingular"] = [list(r) for r in zip(*cols)]
    return out


def write_catalogue(path):
    entries = [{"name": name, "p": p, "gens": [[[g[0], g[1]], [g[2], g[3]]] for g in gens]}
               for name, (p, gens) in CATALOGUE.items()]
    with open(path, "w") as f:
        json.dump(entries, f, indent=1)


def main(argv):
    import os
    if len(argv) == 3 and argv[1] == "--catalogue":
        write_catalogue(argv[2])
        return
    outdir = argv[1]
    names = argv[2:] or list(CATALOGUE)
    os.makedirs(outdir, exist_ok=True)
    for name in names:
        data = build(name)
        fn = os.path.join(outdir, re.sub(r"[^A-Za-z0-9]+", "_", name).strip("_") + ".json")
        with open(fn, "w") as f:
            json.dump(data, f, indent=1)
        print(fn, "k =", data["k"], "l =", data["l"],
              "orbits =", [(o["size"], o["e"]) for o in data["orbits"]])


if __name__ == "__main__":
    main(sys.argv)
