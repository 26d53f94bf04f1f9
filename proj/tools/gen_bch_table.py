#!/usr/bin/env python3
"""Generate the BCH word table used by include/homog/bch_table.hpp.

Computes log(exp(X) exp(Y)) in the free associative algebra on {X, Y}
truncated at degree 6 with exact rationals, then applies the
Dynkin-Specht-Wever projection: a homogeneous Lie element P of degree n
equals (1/n) * sum_w coeff_w * [w1, [w2, ..., [w_{n-1}, w_n]]].
Each emitted entry (word, num, den) already includes the 1/n factor.

Run with --check to verify the table against matrix exp/log on random
strictly upper triangular matrices.
"""
import sys
from fractions import Fraction
from itertools import product

DEG = 6


def mul(a, b):
    out = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w = wa + wb
            if len(w) > DEG:
                continue
            out[w] = out.get(w, 0) + ca * cb
    return {w: c for w, c in out.items() if c != 0}


def add(a, b, s=1):
    out = dict(a)
    for w, c in b.items():
        out[w] = out.get(w, 0) + s * c
    return {w: c for w, c in out.items() if c != 0}


def exp_series(letter):
    out = {"": Fraction(1)}
    term = {"": Fraction(1)}
    for k in range(1, DEG + 1):
        term = mul(term, {letter: Fraction(1, k)})
        out = add(out, term)
    return out


def log_series(a):
    # a = 1 + u
    u = dict(a)
    u.pop("", None)
    out = {}
    power = {"": Fraction(1)}
    for k in range(1, DEG + 1):
        power = mul(power, u)
        out = add(out, {w: c * Fraction((-1) ** (k + 1), k) for w, c in power.items()})
    return out


def table():
    z = log_series(mul(exp_series("x"), exp_series("y")))
    rows = []
    for w, c in sorted(z.items(), key=lambda kv: (len(kv[0]), kv[0])):
        n = len(w)
        coeff = c / n
        if coeff != 0 and (n == 1 or w[-1] != w[-2]):
            rows.append((w, coeff))
    return rows


def check(rows):
    import numpy as np
    from scipy.linalg import expm, logm
    rng = np.random.default_rng(1)
    n = 8
    for _ in range(5):
        X = np.triu(rng.normal(size=(n, n)), 1)
        Y = np.triu(rng.normal(size=(n, n)), 1)
        ref = np.real(logm(expm(X) @ expm(Y)))
        Z = np.zeros((n, n))
        for w, c in rows:
            t = X if w[-1] == "x" else Y
            for ch in reversed(w[:-1]):
                a = X if ch == "x" else Y
                t = a @ t - t @ a
            Z += float(c) * t
        # degree 7 terms survive in 8x8; compare on the first 6 superdiagonals
        mask = np.triu(np.ones((n, n)), 1) - np.triu(np.ones((n, n)), 7)
        err = np.max(np.abs((Z - ref) * mask))
        print("max error", err)
        assert err < 1e-9


def main():
    rows = table()
    if "--check" in sys.argv:
        check(rows)
        return
    for w, c in rows:
        print(f'    {{"{w}", {c.numerator}, {c.denominator}}},')


if __name__ == "__main__":
    main()
