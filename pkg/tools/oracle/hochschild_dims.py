#!/usr/bin/env python3
"""Independent dense-rank oracle for the two degree-ladder sanity cases.

Self-contained on purpose: plain Fractions, its own Gauss-Jordan
elimination, and a direct transcription of the alternating-sum coboundary
for a one-dimensional algebra over the one-element monoid with identity
structure maps (where the equivariant complex is the full raw complex).

Prints a JSON object with cochain/cocycle/coboundary/cohomology dimensions
for degrees 0..3 of the unit-product algebra ("e0") and the zero-product
algebra ("zero1"), both with coefficients in themselves.
"""

import json
from fractions import Fraction
from itertools import product


def gauss_rank(rows):
    """Rank by plain fraction-free-ish Gauss elimination (own code path)."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    col = 0
    while col < ncols and rank < len(rows):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                factor = Fraction(rows[r][col], 1) / pv
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def delta_matrix(mu, d, n):
    """Coboundary matrix for degree n with identity structure maps.

    mu[i][j][k] are the structure constants; coefficients in the algebra
    itself.  Rows are indexed by (output args, output coordinate), columns
    by (input args, input coordinate).
    """

    def mul(x, y):
        out = [Fraction(0)] * d
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            for j, yj in enumerate(y):
                if yj == 0:
                    continue
                for k in range(d):
                    out[k] += xi * yj * mu[i][j][k]
        return out

    def basis(i):
        v = [Fraction(0)] * d
        v[i] = Fraction(1)
        return v

    in_args = list(product(range(d), repeat=n))
    out_args = list(product(range(d), repeat=n + 1))
    ncols = len(in_args) * d
    nrows = len(out_args) * d
    matrix = [[Fraction(0)] * ncols for _ in range(nrows)]

    def col_index(args, l):
        return in_args.index(tuple(args)) * d + l

    for row_a, args in enumerate(out_args):
        # first term: a_1 . f(a_2 ... a_{n+1})
        for l in range(d):
            vec = mul(basis(args[0]), basis(l))
            for k in range(d):
                if vec[k]:
                    matrix[row_a * d + k][col_index(args[1:], l)] += vec[k]
        # middle terms: f(..., a_i a_{i+1}, ...)
        for i in range(1, n + 1):
            sign = Fraction(-1) ** i
            prod_vec = mul(basis(args[i - 1]), basis(args[i]))
            for t, coeff in enumerate(prod_vec):
                if coeff == 0:
                    continue
                new_args = list(args[: i - 1]) + [t] + list(args[i + 1 :])
                for k in range(d):
                    matrix[row_a * d + k][col_index(new_args, k)] += sign * coeff
        # last term: f(a_1 ... a_n) . a_{n+1}
        sign = Fraction(-1) ** (n + 1)
        for l in range(d):
            vec = mul(basis(l), basis(args[-1]))
            for k in range(d):
                if vec[k]:
                    matrix[row_a * d + k][col_index(args[:-1], l)] += sign * vec[k]
    return matrix


def ladder(mu, d, max_degree):
    dims = []
    mats = {}
    # degree 0: delta0(m)(a) = a.m - m.a
    def mul(x, y):
        out = [Fraction(0)] * d
        for i, xi in enumerate(x):
            for j, yj in enumerate(y):
                if xi and yj:
                    for k in range(d):
                        out[k] += xi * yj * mu[i][j][k]
        return out

    def basis(i):
        v = [Fraction(0)] * d
        v[i] = Fraction(1)
        return v

    rows0 = []
    for j in range(d):
        for k in range(d):
            row = []
            for l in range(d):
                lhs = mul(basis(j), basis(l))
                rhs = mul(basis(l), basis(j))
                row.append(lhs[k] - rhs[k])
            rows0.append(row)
    mats[0] = rows0
    for nn in range(1, max_degree + 1):
        mats[nn] = delta_matrix(mu, d, nn)
    for k in range(max_degree + 1):
        dim_c = (d**k) * d
        rank_k = gauss_rank(mats[k])
        z = dim_c - rank_k
        b = 0 if k == 0 else gauss_rank(mats[k - 1])
        dims.append([dim_c, z, b, z - b])
    return dims


def main():
    unit = [[[Fraction(1)]]]
    zero = [[[Fraction(0)]]]
    out = {
        "e0": {"dims": [[int(x) for x in row] for row in ladder(unit, 1, 3)]},
        "zero1": {"dims": [[int(x) for x in row] for row in ladder(zero, 1, 3)]},
    }
    print(json.dumps(out, sort_keys=True, indent=2))


if __name__ == "__main__":
    main()
