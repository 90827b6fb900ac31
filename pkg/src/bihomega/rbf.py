"""The operator-side complex, the comparison map, and the combined complex.

Context: an algebra with a Rota-Baxter family and a Rota-Baxter family
bimodule over it.  Three complexes live here:

* the algebra complex (coboundary from :mod:`bihomega.cochain`);
* the operator complex: the same cochain spaces, with differential equal to
  the coboundary taken over the derived (star) algebra and its induced
  bimodule.  :func:`partial` evaluates it both ways (via the star
  structures, and via the expanded sum in the original structures) and
  insists the routes agree;
* the combined complex mixing a degree-n algebra cochain with a degree-(n-1)
  operator cochain,  d(f, g) = (delta f, -partial g - phi f), and
  d(m) = (delta m, -m) at degree 0.

:func:`phi` is the comparison map: evaluate on all-R-twisted arguments, then
subtract weight-graded correction terms applying the bimodule operator after
inserting R at every proper subset of slots.

Ranks and kernels of the combined differential are computed against raw
target coordinates (source in equivariant bases), which stays well-defined
even when a degree-0 image leaves the equivariant subspace; membership of
images is still checked where the theory promises it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product as iproduct

from .algebra import OmegaAlgebra, RotaBaxterFamily, Witness, check_rota_baxter, star_product, validate_algebra
from .bimodule import OmegaBimodule, induced_module_star, validate_rbf_bimodule
from .cochain import (
    Cochain,
    CohomologyReport,
    DegreeRow,
    EquivariantBasis,
    apply_delta,
    cohomology_dims,
    delta_op,
    equivariant_basis,
)
from .errors import InternalCheckError, MalformedInputError, PreconditionError
from .linalg import Mat, kernel_basis, rank, solve, sparse_kernel
from .rationals import ONE, ZERO


@dataclass(eq=False)
class RbfContext:
    """Validated bundle (algebra, Rota-Baxter family, bimodule with tmap)."""

    algebra: OmegaAlgebra
    rb: RotaBaxterFamily
    bimodule: OmegaBimodule
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.bimodule.tmap is None:
            raise PreconditionError("context bimodule needs a tmap family")
        if self.bimodule.base is not self.algebra:
            # allow structurally identical bases
            if self.bimodule.base.product != self.algebra.product:
                raise MalformedInputError("bimodule base differs from the context algebra")

    @classmethod
    def validated(cls, algebra, rb, bimodule) -> "RbfContext":
        witness = validate_algebra(algebra)
        if witness is not None:
            raise PreconditionError(f"algebra invalid: {witness.describe()}")
        witness = check_rota_baxter(algebra, rb)
        if witness is not None:
            raise PreconditionError(f"Rota-Baxter family invalid: {witness.describe()}")
        witness = validate_rbf_bimodule(bimodule, rb)
        if witness is not None:
            raise PreconditionError(f"bimodule invalid for the family: {witness.describe()}")
        return cls(algebra, rb, bimodule)

    def star_algebra(self) -> OmegaAlgebra:
        hit = self._cache.get("star_algebra")
        if hit is None:
            hit = star_product(self.algebra, self.rb, check=False)
            self._cache["star_algebra"] = hit
        return hit

    def star_bimodule(self) -> OmegaBimodule:
        hit = self._cache.get("star_bimodule")
        if hit is None:
            hit = induced_module_star(self.bimodule, self.rb, check=False)
            self._cache["star_bimodule"] = hit
        return hit

    def basis(self, n: int) -> EquivariantBasis:
        """Shared equivariant basis; both complexes use identical constraints."""
        bas = equivariant_basis(self.bimodule, n)
        self.star_bimodule()._cache.setdefault(("equivariant_basis", n), bas)
        return bas

    def dims(self):
        a, b = self.algebra, self.bimodule
        return a.omega, a.dim, b.dim_m


def partial(ctx: RbfContext, f: Cochain, check: bool = True) -> Cochain:
    """Operator-complex differential, evaluated by two independent routes.

    Route one: the coboundary over the star algebra with the induced
    bimodule.  Route two: the expanded sum in the original structures.
    Exact disagreement raises InternalCheckError.
    """
    route_star = apply_delta(ctx.star_bimodule(), f, check=check)
    route_direct = _partial_expanded(ctx, f)
    if route_star != route_direct:
        raise InternalCheckError(
            f"operator differential routes disagree at degree {f.degree}"
        )
    return route_star


def _partial_expanded(ctx: RbfContext, f: Cochain) -> Cochain:
    a = ctx.algebra
    b = ctx.bimodule
    om = a.omega
    d, m = a.dim, b.dim_m
    w = ctx.rb.weight
    rmaps, tmaps = ctx.rb.maps, b.tmap
    n = f.degree
    out = Cochain.zero(n + 1, om.size, d, m)
    if n == 0:
        unit = om.unit
        mv = list(f.coords)
        for x in om.elements():
            rx, tx = rmaps[x], tmaps[x]
            for j in range(d):
                ej = a.basis_vector(j)
                acc = b.act_left((x, unit), rx.col(j), mv)
                for k, v in enumerate(tx.matvec(b.act_left((x, unit), ej, mv))):
                    acc[k] -= v
                for k, v in enumerate(b.act_right((unit, x), mv, rx.col(j))):
                    acc[k] -= v
                for k, v in enumerate(tx.matvec(b.act_right((unit, x), mv, ej))):
                    acc[k] += v
                base = out.block_base((x,)) + j * m
                for k in range(m):
                    out.coords[base + k] = acc[k]
        return out
    for beta in om.tuples(n + 1):
        tail, head = beta[1:], beta[:-1]
        prod_tail, prod_head = om.product_of(tail), om.product_of(head)
        t_all = tmaps[om.product_of(beta)]
        p_pow = a.p_power(beta[0], n - 1)
        q_pow = a.q_power(beta[-1], n - 1)
        r_first, r_last = rmaps[beta[0]], rmaps[beta[-1]]
        base_tuple = out.block_base(beta)
        for args in iproduct(range(d), repeat=n + 1):
            pa1 = p_pow.col(args[0])
            tail_val = f.value(tail, args[1:])
            acc = b.act_left((beta[0], prod_tail), r_first.matvec(pa1), tail_val)
            for k, v in enumerate(t_all.matvec(b.act_left((beta[0], prod_tail), pa1, tail_val))):
                acc[k] -= v
            for i in range(1, n + 1):
                sign = ONE if i % 2 == 0 else -ONE
                merged = beta[: i - 1] + (om.mul(beta[i - 1], beta[i]),) + beta[i + 1 :]
                key = (beta[i - 1], beta[i])
                ei = a.basis_vector(args[i - 1])
                ej = a.basis_vector(args[i])
                star_arg = a.mul_vec(key, ei, rmaps[beta[i]].col(args[i]))
                for k, v in enumerate(a.mul_vec(key, rmaps[beta[i - 1]].col(args[i - 1]), ej)):
                    star_arg[k] += v
                if w:
                    for k, v in enumerate(a.mul_basis(key, args[i - 1], args[i])):
                        star_arg[k] += w * v
                vectors = []
                for t in range(i - 1):
                    vectors.append(a.pmap[beta[t]].col(args[t]))
                vectors.append(star_arg)
                for t in range(i + 1, n + 1):
                    vectors.append(a.qmap[beta[t]].col(args[t]))
                term = f.evaluate(merged, vectors)
                for k in range(m):
                    if term[k]:
                        acc[k] += sign * term[k]
            sign_last = ONE if (n + 1) % 2 == 0 else -ONE
            head_val = f.value(head, args[:-1])
            qan = q_pow.col(args[-1])
            term = b.act_right((prod_head, beta[-1]), head_val, r_last.matvec(qan))
            term2 = t_all.matvec(b.act_right((prod_head, beta[-1]), head_val, qan))
            for k in range(m):
                acc[k] += sign_last * (term[k] - term2[k])
            base = base_tuple + _rank(args, d) * m
            for k in range(m):
                out.coords[base + k] = acc[k]
    return out


def _rank(t, base: int) -> int:
    r = 0
    for x in t:
        r = r * base + x
    return r


def phi(ctx: RbfContext, f: Cochain) -> Cochain:
    """Comparison map from the algebra complex to the operator complex.

    Degree 0: identity.  Degree 1: f o R - T o f componentwise.  Degree
    n >= 2: f on all-R-twisted arguments minus, for every proper subset of
    slots, weight^(n - 1 - |subset|) times the bimodule operator at the full
    tuple product applied to f with R inserted at exactly those slots.
    """
    a = ctx.algebra
    b = ctx.bimodule
    om = a.omega
    d, m = a.dim, b.dim_m
    w = ctx.rb.weight
    n = f.degree
    if n == 0:
        return Cochain(0, om.size, d, m, list(f.coords))
    out = Cochain.zero(n, om.size, d, m)
    rmaps, tmaps = ctx.rb.maps, b.tmap
    for alpha in om.tuples(n):
        t_all = tmaps[om.product_of(alpha)]
        base_tuple = out.block_base(alpha)
        r_cols = [rmaps[alpha[s]] for s in range(n)]
        for args in iproduct(range(d), repeat=n):
            acc = f.evaluate(alpha, [r_cols[s].col(args[s]) for s in range(n)])
            for size in range(n):
                coeff = w ** (n - 1 - size) if n - 1 - size else ONE
                if not coeff:
                    continue
                for subset in combinations(range(n), size):
                    vectors = []
                    for s in range(n):
                        if s in subset:
                            vectors.append(r_cols[s].col(args[s]))
                        else:
                            vectors.append(a.basis_vector(args[s]))
                    term = t_all.matvec(f.evaluate(alpha, vectors))
                    for k in range(m):
                        if term[k]:
                            acc[k] -= coeff * term[k]
            base = base_tuple + _rank(args, d) * m
            for k in range(m):
                out.coords[base + k] = acc[k]
    return out


@dataclass(eq=False)
class CombinedCochain:
    """Element of the combined complex: algebra part plus operator part.

    Degree n >= 1 pairs a degree-n algebra cochain with a degree-(n-1)
    operator cochain; degree 0 is a bare coefficient vector (rbf None).
    """

    alg: Cochain
    rbf: Cochain | None

    @property
    def degree(self) -> int:
        return self.alg.degree

    def add(self, other: "CombinedCochain") -> "CombinedCochain":
        if (self.rbf is None) != (other.rbf is None):
            raise MalformedInputError("combined cochain shape mismatch")
        return CombinedCochain(
            self.alg.add(other.alg), None if self.rbf is None else self.rbf.add(other.rbf)
        )

    def sub(self, other: "CombinedCochain") -> "CombinedCochain":
        if (self.rbf is None) != (other.rbf is None):
            raise MalformedInputError("combined cochain shape mismatch")
        return CombinedCochain(
            self.alg.sub(other.alg), None if self.rbf is None else self.rbf.sub(other.rbf)
        )

    def scale(self, factor) -> "CombinedCochain":
        return CombinedCochain(
            self.alg.scale(factor), None if self.rbf is None else self.rbf.scale(factor)
        )

    def is_zero(self) -> bool:
        return self.alg.is_zero() and (self.rbf is None or self.rbf.is_zero())

    def __eq__(self, other):
        return (
            isinstance(other, CombinedCochain)
            and self.alg == other.alg
            and self.rbf == other.rbf
        )


def d_combined(ctx: RbfContext, x: CombinedCochain, check: bool = True) -> CombinedCochain:
    """Differential of the combined complex."""
    b = ctx.bimodule
    n = x.degree
    if n == 0:
        if x.rbf is not None:
            raise MalformedInputError("degree-0 combined cochain has no operator part")
        return CombinedCochain(apply_delta(b, x.alg, check=check), x.alg.scale(-ONE))
    if x.rbf is None or x.rbf.degree != n - 1:
        raise MalformedInputError("operator part must have degree one less")
    alg_out = apply_delta(b, x.alg, check=check)
    rbf_out = partial(ctx, x.rbf, check=check).add(phi(ctx, x.alg)).scale(-ONE)
    return CombinedCochain(alg_out, rbf_out)


def combined_dim(ctx: RbfContext, n: int) -> int:
    if n == 0:
        return ctx.bimodule.dim_m
    return ctx.basis(n).dim() + ctx.basis(n - 1).dim()


def combined_zero(ctx: RbfContext, n: int) -> CombinedCochain:
    om, d, m = ctx.dims()
    if n == 0:
        return CombinedCochain(Cochain.zero(0, om.size, d, m), None)
    return CombinedCochain(Cochain.zero(n, om.size, d, m), Cochain.zero(n - 1, om.size, d, m))


def combined_from_coords(ctx: RbfContext, n: int, coords) -> CombinedCochain:
    """Element with the given coordinates in the (alg block, rbf block) basis."""
    if n == 0:
        om, d, m = ctx.dims()
        return CombinedCochain(Cochain(0, om.size, d, m, list(coords)), None)
    b_alg = ctx.basis(n)
    b_rbf = ctx.basis(n - 1)
    if len(coords) != b_alg.dim() + b_rbf.dim():
        raise MalformedInputError("combined coordinate length mismatch")
    return CombinedCochain(
        b_alg.combine(coords[: b_alg.dim()]), b_rbf.combine(coords[b_alg.dim() :])
    )


def combined_coords_of(ctx: RbfContext, x: CombinedCochain) -> list:
    if x.degree == 0:
        return list(x.alg.coords)
    return ctx.basis(x.degree).coords_of(x.alg.coords) + ctx.basis(x.degree - 1).coords_of(
        x.rbf.coords
    )


def combined_raw_matrix(ctx: RbfContext, n: int) -> Mat:
    """Matrix of the combined differential: source in basis coordinates,
    target in raw coordinates (alg raw block stacked over operator raw block).

    Always well-defined; used for ranks, kernels, and solving.  Cached.
    """
    hit = ctx._cache.get(("combined_raw_matrix", n))
    if hit is not None:
        return hit
    om, d, m = ctx.dims()
    b = ctx.bimodule
    sb = ctx.star_bimodule()
    s = om.size
    alg_rows = (s ** (n + 1)) * (d ** (n + 1)) * m
    rbf_rows = (s**n) * (d**n) * m
    cols = []
    if n == 0:
        op0 = delta_op(b, 0)
        for l in range(m):
            img = op0.apply_sparse({l: ONE})
            tail = [ZERO] * m
            tail[l] = -ONE
            cols.append(img + tail)
    else:
        b_alg = ctx.basis(n)
        b_rbf = ctx.basis(n - 1)
        alg_op = delta_op(b, n)
        for j in range(b_alg.dim()):
            f = b_alg.cochain(j)
            img = alg_op.apply_sparse(b_alg.cochain_sparse(j))
            ph = phi(ctx, f)
            cols.append(img + [-v for v in ph.coords])
        rbf_op = delta_op(sb, n - 1)
        for j in range(b_rbf.dim()):
            img = rbf_op.apply_sparse(b_rbf.cochain_sparse(j))
            cols.append([ZERO] * alg_rows + [-v for v in img])
    result = (
        Mat.from_cols(cols, nrows=alg_rows + rbf_rows)
        if cols
        else Mat.zeros(alg_rows + rbf_rows, 0)
    )
    ctx._cache[("combined_raw_matrix", n)] = result
    return result


def _combined_target_membership(ctx: RbfContext, n: int, raw: list) -> bool:
    """Does a raw image vector lie in C^{n+1}_alg (+) C^n_rbf?"""
    om, d, m = ctx.dims()
    s = om.size
    alg_rows = (s ** (n + 1)) * (d ** (n + 1)) * m
    try:
        ctx.basis(n + 1).coords_of(raw[:alg_rows])
        if n >= 1:
            ctx.basis(n).coords_of(raw[alg_rows:])
    except InternalCheckError:
        return False
    return True


def rbfa_cohomology_dims(ctx: RbfContext, max_degree: int) -> dict:
    """Reports for all three complexes, degrees 0..max_degree.

    Combined degree-0 coboundaries: when the degree-0 image leaves the
    product of equivariant spaces, the coboundary dimension is that of the
    exact intersection (the algebra part constrains it; the operator part is
    unconstrained), and the report is flagged.
    """
    alg_report = cohomology_dims(ctx.bimodule, max_degree)
    rbf_report = cohomology_dims(ctx.star_bimodule(), max_degree)
    m = ctx.bimodule.dim_m
    mats = {k: combined_raw_matrix(ctx, k) for k in range(max_degree + 1)}
    dims_c = {k: combined_dim(ctx, k) for k in range(max_degree + 1)}
    ranks = {k: rank(mats[k]) for k in range(max_degree + 1)}
    degree0_intersected = False
    b1_dim = None
    if max_degree >= 1:
        clean = all(
            _combined_target_membership(ctx, 0, mats[0].col(j)) for j in range(mats[0].cols)
        )
        if clean:
            b1_dim = ranks[0]
            om, d, _ = ctx.dims()
            for l in range(m):
                unit_vec = Cochain.zero(0, om.size, d, m)
                unit_vec.coords[l] = ONE
                image = d_combined(ctx, CombinedCochain(unit_vec, None), check=False)
                if not d_combined(ctx, image, check=False).is_zero():
                    raise InternalCheckError(
                        "combined degree-0 coboundaries are not 2-cocycles; "
                        "the complex is inconsistent on this input"
                    )
        else:
            degree0_intersected = True
            b1_dim = _combined_degree0_intersection(ctx)
    rows = []
    for k in range(max_degree + 1):
        z = dims_c[k] - ranks[k]
        if k == 0:
            bdim = 0
        elif k == 1:
            bdim = b1_dim
        else:
            bdim = ranks[k - 1]
        rows.append(DegreeRow(k, dims_c[k], z, bdim, z - bdim))
    combined_report = CohomologyReport(rows, degree0_intersected)
    return {"alg": alg_report, "rbf": rbf_report, "rbfa": combined_report}


def _combined_degree0_intersection(ctx: RbfContext) -> int:
    """dim( im(d^0) ∩ (C^1_alg (+) C^0_rbf) ); the map m -> (delta m, -m) is
    injective, so this is the dimension of {c in M : delta0(c) in C^1}."""
    om, d, m = ctx.dims()
    b = ctx.bimodule
    op0 = delta_op(b, 0)
    basis1 = ctx.basis(1)
    width_b = basis1.dim()
    rows = [dict() for _ in range(op0.nrows)]
    for j in range(width_b):
        for idx, v in basis1.cochain_sparse(j).items():
            rows[idx][j] = v
    images = []
    for l in range(m):
        img = op0.apply_sparse({l: ONE})
        images.append(img)
        for idx, v in enumerate(img):
            if v:
                rows[idx][width_b + l] = -v
    pairs = sparse_kernel([r for r in rows if r], width_b + m)
    c_vectors = []
    for vec in pairs:
        c = [vec.get(width_b + l, ZERO) for l in range(m)]
        if any(c):
            c_vectors.append(c)
    if not c_vectors:
        return 0
    v_dim = rank(Mat.from_cols(c_vectors, nrows=m))
    # runtime assertion: generators of the defined part are killed by d^1
    op1 = delta_op(b, 1)
    for c in c_vectors:
        img0 = op0.apply_dense(c)
        if any(op1.apply_dense(img0)):
            raise InternalCheckError(
                "combined degree-0 coboundary generator is not killed at degree 1"
            )
    return v_dim


def chain_map_check(ctx: RbfContext, max_degree: int) -> Witness | None:
    """partial^n o phi^n = phi^{n+1} o delta^n on every basis cochain.

    Both compositions are compared as raw coordinate vectors (equality as
    linear maps on C^n), degree by degree from 0 to max_degree.
    """
    b = ctx.bimodule
    sb = ctx.star_bimodule()
    om, d, m = ctx.dims()
    for n in range(max_degree + 1):
        if n == 0:
            width = m
        else:
            width = ctx.basis(n).dim()
        alg_op = delta_op(b, n)
        star_op = delta_op(sb, n)
        for j in range(width):
            if n == 0:
                f = Cochain.zero(0, om.size, d, m)
                f.coords[j] = ONE
            else:
                f = ctx.basis(n).cochain(j)
            lhs_coords = star_op.apply_dense(phi(ctx, f).coords)
            delta_f = Cochain(
                n + 1, om.size, d, m, alg_op.apply_dense(f.coords)
            )
            rhs = phi(ctx, delta_f)
            if lhs_coords != rhs.coords:
                for idx, (u, v) in enumerate(zip(lhs_coords, rhs.coords)):
                    if u != v:
                        return Witness(
                            "chain-map", (n,), (j, idx), (u,), (v,)
                        )
    return None


def combined_kernel(ctx: RbfContext, n: int) -> list:
    """Basis of ker(d^n) as CombinedCochains (deterministic kernel order)."""
    mat = combined_raw_matrix(ctx, n)
    kb = kernel_basis(mat)
    out = []
    for j in range(kb.cols):
        out.append(combined_from_coords(ctx, n, kb.col(j)))
    return out


def solve_combined(ctx: RbfContext, n: int, target: CombinedCochain):
    """Coordinates x with d^n(x) = target, free coordinates zero, or None."""
    mat = combined_raw_matrix(ctx, n)
    if target.degree != n + 1:
        raise MalformedInputError("target degree mismatch")
    vec = list(target.alg.coords) + list(target.rbf.coords)
    x = solve(mat, vec)
    if x is None:
        return None
    return combined_from_coords(ctx, n, x)
