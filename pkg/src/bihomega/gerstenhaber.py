"""Insertion compositions and the graded Lie bracket on cochains.

All operations act on cochains over the regular bimodule (coefficients in
the algebra itself).  The graded degree of an n-cochain is n - 1.

``circ_i(f, g, i)`` inserts g into slot i of f (1-based): arguments before
the slot are twisted by the (arity(g) - 1)-th power of pmap at their own
index, arguments after by the same power of qmap, and the slot's monoid
indices merge through the monoid product.  The bracket is the graded
commutator of the induced pre-Lie sums; a product family is exactly a
bracket-square-zero (Maurer-Cartan) degree-2 element, and the graded
commutator with the product family reproduces the coboundary up to sign.
"""

from __future__ import annotations

from .algebra import OmegaAlgebra
from .bimodule import regular_bimodule
from .cochain import Cochain, cochain_from_tensors, is_equivariant
from .errors import MalformedInputError, PreconditionError
from .rationals import ONE, ZERO


def mu_cochain(a: OmegaAlgebra) -> Cochain:
    """The product family as a degree-2 cochain."""
    return cochain_from_tensors(a.omega, 2, a.dim, a.dim, a.product)


def identity_cochain(a: OmegaAlgebra) -> Cochain:
    """The constant identity family as a degree-1 cochain."""
    f = Cochain.zero(1, a.omega.size, a.dim, a.dim)
    for x in a.omega.elements():
        base = f.block_base((x,))
        for j in range(a.dim):
            f.coords[base + j * a.dim + j] = ONE
    return f


def _require_equivariant(a: OmegaAlgebra, f: Cochain, check: bool):
    if check and not is_equivariant(regular_bimodule(a), f):
        raise PreconditionError("cochain is not equivariant")


def _contract_slot(block, pre: int, d_old: int, w_new: int, post: int, rows):
    """Replace one tensor slot by composing with a matrix.

    ``block`` is flat with shape (pre, d_old, post); ``rows[r][c]`` is the
    matrix entry sending new index c through old index r.  Returns the flat
    (pre, w_new, post) tensor of  sum_r block[p, r, q] * rows[r][c].
    """
    out = [ZERO] * (pre * w_new * post)
    for p in range(pre):
        in_base = p * d_old * post
        out_base = p * w_new * post
        for r in range(d_old):
            row = rows[r]
            src = in_base + r * post
            for c in range(w_new):
                coeff = row[c]
                if not coeff:
                    continue
                dst = out_base + c * post
                if coeff == ONE:
                    for q in range(post):
                        v = block[src + q]
                        if v:
                            out[dst + q] += v
                else:
                    for q in range(post):
                        v = block[src + q]
                        if v:
                            out[dst + q] += coeff * v
    return out


def _mat_rows(mat) -> list:
    return [[mat.at(r, c) for c in range(mat.cols)] for r in range(mat.rows)]


def circ_i(a: OmegaAlgebra, f: Cochain, g: Cochain, i: int, check: bool = True) -> Cochain:
    """Insert g into slot i of f; result has arity f.degree + g.degree - 1.

    Computed blockwise: for each output index tuple, the stored block of f
    at the merged tuple is contracted slot by slot, with the twisting-map
    power matrices on the outer slots and the block of g on the inserted
    slot (which widens that slot from d to d^arity(g) argument columns).
    """
    n, m = f.degree, g.degree
    if n < 1 or m < 1:
        raise MalformedInputError("insertion needs arities >= 1")
    if not 1 <= i <= n:
        raise MalformedInputError(f"slot {i} out of range 1..{n}")
    _require_equivariant(a, f, check)
    _require_equivariant(a, g, check)
    om = a.omega
    d = a.dim
    out_deg = n + m - 1
    out = Cochain.zero(out_deg, om.size, d, d)
    dm_block = d**m
    f_block_len = (d**n) * d
    for alpha in om.tuples(out_deg):
        block_tuple = alpha[i - 1 : i + m - 1]
        merged = alpha[: i - 1] + (om.product_of(block_tuple),) + alpha[i + m - 1 :]
        f_base = f.block_base(merged)
        block = f.coords[f_base : f_base + f_block_len]
        g_base = g.block_base(block_tuple)
        # slot widths after each contraction; slots processed left to right
        post = (d ** (n - 1)) * d
        pre = 1
        for s in range(n):
            if s == i - 1:
                rows = [
                    [g.coords[g_base + c * d + r] for c in range(dm_block)] for r in range(d)
                ]
                width = dm_block
            else:
                mat = a.p_power(alpha[s], m - 1) if s < i - 1 else a.q_power(
                    alpha[s + m - 1], m - 1
                )
                rows = _mat_rows(mat)
                width = d
            block = _contract_slot(block, pre, d, width, post, rows)
            pre *= width
            post //= d
        base_tuple = out.block_base(alpha)
        out.coords[base_tuple : base_tuple + len(block)] = block
    return out


def circ_full(a: OmegaAlgebra, f: Cochain, gs, check: bool = True) -> Cochain:
    """Simultaneous composition: slot l of f receives gs[l] on its own block.

    Block l's value is post-composed with pmap^(sum of later graded degrees)
    and qmap^(sum of earlier graded degrees) at the block's merged index;
    f is evaluated at the tuple of merged block indices.
    """
    gs = list(gs)
    n = f.degree
    if len(gs) != n:
        raise MalformedInputError(f"need exactly {n} cochains to compose, got {len(gs)}")
    if n < 1 or any(g.degree < 1 for g in gs):
        raise MalformedInputError("composition needs arities >= 1")
    _require_equivariant(a, f, check)
    for g in gs:
        _require_equivariant(a, g, check)
    om = a.omega
    d = a.dim
    arities = [g.degree for g in gs]
    out_deg = sum(arities)
    starts = []
    pos = 0
    for ar in arities:
        starts.append(pos)
        pos += ar
    p_exp = [sum(arities[t] - 1 for t in range(l + 1, n)) for l in range(n)]
    q_exp = [sum(arities[t] - 1 for t in range(l)) for l in range(n)]
    out = Cochain.zero(out_deg, om.size, d, d)
    f_block_len = (d**n) * d
    for alpha in om.tuples(out_deg):
        blocks = [alpha[starts[l] : starts[l] + arities[l]] for l in range(n)]
        prods = [om.product_of(bl) for bl in blocks]
        merged = tuple(prods)
        f_base = f.block_base(merged)
        block = f.coords[f_base : f_base + f_block_len]
        pre = 1
        post = (d ** (n - 1)) * d
        for l in range(n):
            p_mat = a.p_power(prods[l], p_exp[l])
            q_mat = a.q_power(prods[l], q_exp[l])
            g_base = gs[l].block_base(blocks[l])
            width = d ** arities[l]
            cols = []
            for c in range(width):
                v = gs[l].coords[g_base + c * d : g_base + (c + 1) * d]
                cols.append(p_mat.matvec(q_mat.matvec(v)))
            rows = [[cols[c][r] for c in range(width)] for r in range(d)]
            block = _contract_slot(block, pre, d, width, post, rows)
            pre *= width
            post //= d
        base_tuple = out.block_base(alpha)
        out.coords[base_tuple : base_tuple + len(block)] = block
    return out


def bracket(a: OmegaAlgebra, f: Cochain, g: Cochain, check: bool = True) -> Cochain:
    """Graded commutator of the insertion sums.

    [f, g] = sum_{i=1}^{n} (-1)^{(m-1)(i-1)} f oc_i g
             - (-1)^{(n-1)(m-1)} sum_{i=1}^{m} (-1)^{(n-1)(i-1)} g oc_i f,
    with n = arity(f), m = arity(g).
    """
    n, m = f.degree, g.degree
    if n < 1 or m < 1:
        raise MalformedInputError("bracket needs arities >= 1")
    _require_equivariant(a, f, check)
    _require_equivariant(a, g, check)
    out = Cochain.zero(n + m - 1, a.omega.size, a.dim, a.dim)
    for i in range(1, n + 1):
        term = circ_i(a, f, g, i, check=False)
        sign = -ONE if ((m - 1) * (i - 1)) % 2 else ONE
        out = out.add(term.scale(sign))
    outer = -ONE if ((n - 1) * (m - 1)) % 2 else ONE
    for i in range(1, m + 1):
        term = circ_i(a, g, f, i, check=False)
        sign = -ONE if ((n - 1) * (i - 1)) % 2 else ONE
        out = out.sub(term.scale(outer * sign))
    return out


def mc_residual(a: OmegaAlgebra, candidate: Cochain, check: bool = True) -> Cochain:
    """Bracket square of a degree-2 candidate product family.

    Zero exactly when the candidate, together with the carrier's structure
    maps, satisfies the twisted associativity law (equivariance of the
    candidate supplies multiplicativity).
    """
    if candidate.degree != 2:
        raise MalformedInputError("expected a degree-2 cochain")
    return bracket(a, candidate, candidate, check=check)


def delta_via_bracket(a: OmegaAlgebra, f: Cochain, check: bool = True) -> Cochain:
    """(-1)^(arity-1) [product, f]; coincides with the coboundary."""
    if f.degree < 1:
        raise MalformedInputError("bracket route needs arity >= 1")
    mu = mu_cochain(a)
    out = bracket(a, mu, f, check=check)
    if (f.degree - 1) % 2:
        out = out.scale(-ONE)
    return out


def algebra_with_product(a: OmegaAlgebra, candidate: Cochain) -> OmegaAlgebra:
    """Same carrier and structure maps, product replaced by the candidate."""
    if candidate.degree != 2 or candidate.dim_in != a.dim or candidate.dim_out != a.dim:
        raise MalformedInputError("candidate must be a degree-2 cochain on the carrier")
    d = a.dim
    product = {}
    for x in a.omega.elements():
        for y in a.omega.elements():
            t = [[[ZERO] * d for _ in range(d)] for _ in range(d)]
            for i in range(d):
                for j in range(d):
                    v = candidate.value((x, y), (i, j))
                    for k in range(d):
                        t[i][j][k] = v[k]
            product[(x, y)] = t
    return OmegaAlgebra(a.omega, d, product, dict(a.pmap), dict(a.qmap))
