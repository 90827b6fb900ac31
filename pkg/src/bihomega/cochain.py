"""Cochain spaces, their equivariant bases, and the coboundary operator.

A degree-n cochain with coefficients in a bimodule M over an algebra A is a
family of multilinear maps A^(x n) -> M, one per n-tuple of monoid indices,
subject to two equivariance constraints (the bimodule structure map at the
tuple's product composed with the map equals the map precomposed with the
algebra structure maps slotwise, once for pmap and once for qmap).

Coordinates are global and lexicographic: (monoid tuple, argument
multi-index, output index), flattened as

    ((tuple_rank * d^n) + arg_rank) * dim_m + output_index.

Degree 0 carries no constraint: C^0 = M.

The coboundary has two implementations kept deliberately separate:
:func:`apply_delta` evaluates the alternating sum term by term, while
:func:`delta_op` compiles the same sum once into a sparse matrix on raw
coordinates (used by the matrix-level machinery).  Tests compare the two on
every basis cochain.

Degree-0 caveat: when the unit-index structure maps of M are not the
identity, images of the degree-0 differential can fall outside the
equivariant subspace.  ``delta_matrix(b, 0)`` then raises
InternalCheckError (never projecting), and ``cohomology_dims`` falls back to
the exact intersection of the image with C^1, flagging the report.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .bimodule import OmegaBimodule, validate_bimodule
from .errors import InternalCheckError, MalformedInputError, PreconditionError
from .linalg import Mat, rank, solve, sparse_kernel, sparse_rref
from .monoid import Monoid
from .rationals import ONE, ZERO, Rat


def _pow(base: int, exp: int) -> int:
    return base**exp


def _tuple_rank(t, size: int) -> int:
    r = 0
    for x in t:
        r = r * size + x
    return r


@dataclass(eq=False)
class Cochain:
    """Dense coordinate vector of one cochain; see module docstring for layout."""

    degree: int
    omega_size: int
    dim_in: int
    dim_out: int
    coords: list

    @classmethod
    def zero(cls, degree: int, omega_size: int, dim_in: int, dim_out: int) -> "Cochain":
        size = _pow(omega_size, degree) * _pow(dim_in, degree) * dim_out
        return cls(degree, omega_size, dim_in, dim_out, [ZERO] * size)

    def raw_dim(self) -> int:
        return len(self.coords)

    def block_base(self, om_tuple) -> int:
        n, d = self.degree, self.dim_in
        return _tuple_rank(om_tuple, self.omega_size) * _pow(d, n) * self.dim_out

    def value(self, om_tuple, args) -> list:
        """Value on basis arguments, as a coefficient vector in M."""
        base = self.block_base(om_tuple) + _tuple_rank(args, self.dim_in) * self.dim_out
        return self.coords[base : base + self.dim_out]

    def evaluate(self, om_tuple, vectors) -> list:
        """Multilinear evaluation on general coordinate vectors.

        Contracts the stored block one argument at a time (leftmost first),
        which keeps the inner loops on flat lists.
        """
        if len(vectors) != self.degree:
            raise MalformedInputError("wrong number of arguments")
        if self.degree == 0:
            return list(self.coords)
        return self.contract_block(self.block_base(om_tuple), vectors)

    def contract_block(self, base: int, vectors) -> list:
        """Evaluate at a precomputed block offset (hot path for insertions)."""
        d = self.dim_in
        width = _pow(d, self.degree - 1) * self.dim_out
        block = self.coords[base : base + width * d]
        for v in vectors:
            new = [ZERO] * width
            for i, vi in enumerate(v):
                if not vi:
                    continue
                off = i * width
                if vi == ONE:
                    for t in range(width):
                        c = block[off + t]
                        if c:
                            new[t] += c
                else:
                    for t in range(width):
                        c = block[off + t]
                        if c:
                            new[t] += vi * c
            block = new
            width //= d
        return block

    def add(self, other: "Cochain") -> "Cochain":
        self._compatible(other)
        return Cochain(
            self.degree,
            self.omega_size,
            self.dim_in,
            self.dim_out,
            [a + b for a, b in zip(self.coords, other.coords)],
        )

    def sub(self, other: "Cochain") -> "Cochain":
        self._compatible(other)
        return Cochain(
            self.degree,
            self.omega_size,
            self.dim_in,
            self.dim_out,
            [a - b for a, b in zip(self.coords, other.coords)],
        )

    def scale(self, factor) -> "Cochain":
        f = Rat(factor)
        return Cochain(
            self.degree, self.omega_size, self.dim_in, self.dim_out, [f * a for a in self.coords]
        )

    def is_zero(self) -> bool:
        return all(not x for x in self.coords)

    def _compatible(self, other: "Cochain"):
        if (
            self.degree != other.degree
            or self.omega_size != other.omega_size
            or self.dim_in != other.dim_in
            or self.dim_out != other.dim_out
        ):
            raise MalformedInputError("cochain shape mismatch")

    def __eq__(self, other):
        return (
            isinstance(other, Cochain)
            and self.degree == other.degree
            and self.omega_size == other.omega_size
            and self.dim_in == other.dim_in
            and self.dim_out == other.dim_out
            and self.coords == other.coords
        )


def cochain_from_tensors(omega: Monoid, degree: int, dim_in: int, dim_out: int, tensors) -> Cochain:
    """Degree-2 helper: tensors[(a, b)][i][j][k] -> cochain coordinates."""
    if degree != 2:
        raise MalformedInputError("cochain_from_tensors is a degree-2 helper")
    f = Cochain.zero(2, omega.size, dim_in, dim_out)
    for x in omega.elements():
        for y in omega.elements():
            t = tensors[(x, y)]
            base = f.block_base((x, y))
            for i in range(dim_in):
                for j in range(dim_in):
                    off = base + (i * dim_in + j) * dim_out
                    for k in range(dim_out):
                        f.coords[off + k] = t[i][j][k]
    return f


def cochain_from_maps(omega: Monoid, maps: dict, dim_in: int, dim_out: int) -> Cochain:
    """Degree-1 helper: maps[a] a dim_out x dim_in Mat."""
    f = Cochain.zero(1, omega.size, dim_in, dim_out)
    for x in omega.elements():
        mat = maps[x]
        base = f.block_base((x,))
        for j in range(dim_in):
            for k in range(dim_out):
                f.coords[base + j * dim_out + k] = mat.at(k, j)
    return f


def maps_from_cochain(f: Cochain, omega: Monoid) -> dict:
    """Inverse of :func:`cochain_from_maps` for degree-1 cochains."""
    if f.degree != 1:
        raise MalformedInputError("expected a degree-1 cochain")
    out = {}
    for x in omega.elements():
        m = Mat.zeros(f.dim_out, f.dim_in)
        for j in range(f.dim_in):
            v = f.value((x,), (j,))
            for k in range(f.dim_out):
                m.entries[k * f.dim_in + j] = v[k]
        out[x] = m
    return out


# -- equivariance --------------------------------------------------------


def is_equivariant(b: OmegaBimodule, f: Cochain) -> bool:
    """Direct slotwise check of both structure-map constraints."""
    a = b.base
    om = a.omega
    n = f.degree
    if n == 0:
        return True
    d = a.dim
    for om_tuple in om.tuples(n):
        prod = om.product_of(om_tuple)
        pm, qm = b.pmap[prod], b.qmap[prod]
        for args in iproduct(range(d), repeat=n):
            val = f.value(om_tuple, args)
            lhs = pm.matvec(val)
            rhs = f.evaluate(om_tuple, [a.pmap[om_tuple[t]].col(args[t]) for t in range(n)])
            if lhs != rhs:
                return False
            lhs = qm.matvec(val)
            rhs = f.evaluate(om_tuple, [a.qmap[om_tuple[t]].col(args[t]) for t in range(n)])
            if lhs != rhs:
                return False
    return True


@dataclass(eq=False)
class EquivariantBasis:
    """Deterministic basis of C^n, block per monoid tuple.

    ``vectors[t]`` holds sparse block-local basis columns for tuple number t,
    ``frees[t]`` the free columns the kernel convention assigned them to.
    Coordinates of a member cochain are read off at the free columns and
    verified exactly against the reconstruction.
    """

    degree: int
    omega_size: int
    dim_in: int
    dim_out: int
    block_size: int
    vectors: list  # per tuple: list of sparse dicts (block-local)
    frees: list  # per tuple: list of free column indices
    offsets: list  # per tuple: global basis index offset

    @property
    def raw_dim(self) -> int:
        return _pow(self.omega_size, self.degree) * self.block_size

    def dim(self) -> int:
        return self.offsets[-1] if self.offsets else 0

    def _block_count(self) -> int:
        return _pow(self.omega_size, self.degree)

    def cochain_sparse(self, j: int) -> dict:
        """Global raw coordinates of basis element j, as a sparse dict."""
        for t in range(self._block_count()):
            if self.offsets[t] <= j < self.offsets[t + 1]:
                local = self.vectors[t][j - self.offsets[t]]
                base = t * self.block_size
                return {base + c: v for c, v in local.items()}
        raise MalformedInputError(f"basis index {j} out of range")

    def cochain(self, j: int) -> Cochain:
        f = Cochain.zero(self.degree, self.omega_size, self.dim_in, self.dim_out)
        for idx, v in self.cochain_sparse(j).items():
            f.coords[idx] = v
        return f

    def coords_of(self, raw) -> list:
        """Coordinates of a raw vector (dense list or sparse dict) in this basis.

        Raises InternalCheckError when the vector is not in the span; the
        verification is exact reconstruction, never a projection.
        """
        dense = raw
        if isinstance(raw, dict):
            dense = [ZERO] * self.raw_dim
            for idx, v in raw.items():
                dense[idx] = v
        coords = []
        for t in range(self._block_count()):
            base = t * self.block_size
            block = dense[base : base + self.block_size]
            local_coords = [block[c] for c in self.frees[t]]
            recon = [ZERO] * self.block_size
            for coeff, vec in zip(local_coords, self.vectors[t]):
                if coeff:
                    for c, v in vec.items():
                        recon[c] += coeff * v
            if recon != block:
                raise InternalCheckError(
                    f"vector is not in the degree-{self.degree} equivariant subspace"
                )
            coords.extend(local_coords)
        return coords

    def contains(self, f: Cochain) -> bool:
        try:
            self.coords_of(f.coords)
        except InternalCheckError:
            return False
        return True

    def combine(self, coords) -> Cochain:
        """Linear combination of basis elements with the given coordinates."""
        f = Cochain.zero(self.degree, self.omega_size, self.dim_in, self.dim_out)
        j = 0
        for t in range(self._block_count()):
            base = t * self.block_size
            for vec in self.vectors[t]:
                c = coords[j]
                j += 1
                if c:
                    for col, v in vec.items():
                        f.coords[base + col] += c * v
        return f

    def matrix(self) -> Mat:
        m = Mat.zeros(self.raw_dim, self.dim())
        width = self.dim()
        for j in range(width):
            for idx, v in self.cochain_sparse(j).items():
                m.entries[idx * width + j] = v
        return m


def _kernel_with_frees(rows: list, ncols: int):
    reduced = sparse_rref(rows, ncols)
    pivot_set = {c for c, _ in reduced}
    basis, frees = [], []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = {free: ONE}
        for pc, row in reduced:
            coeff = row.get(free)
            if coeff:
                vec[pc] = -coeff
        basis.append(vec)
        frees.append(free)
    return basis, frees


def equivariant_basis(b: OmegaBimodule, n: int) -> EquivariantBasis:
    """Kernel of the stacked equivariance constraints, blockwise per tuple."""
    if n < 0:
        raise MalformedInputError("negative degree")
    cache_key = ("equivariant_basis", n)
    hit = b._cache.get(cache_key)
    if hit is not None:
        return hit
    a = b.base
    om = a.omega
    d, m = a.dim, b.dim_m
    block = _pow(d, n) * m
    vectors, frees, offsets = [], [], [0]
    if n == 0:
        vectors.append([{k: ONE} for k in range(m)])
        frees.append(list(range(m)))
        offsets.append(m)
    else:
        for om_tuple in om.tuples(n):
            rows = _constraint_rows(b, om_tuple, n)
            basis, free_cols = _kernel_with_frees(rows, block)
            vectors.append(basis)
            frees.append(free_cols)
            offsets.append(offsets[-1] + len(basis))
    result = EquivariantBasis(n, om.size, d, m, block, vectors, frees, offsets)
    b._cache[cache_key] = result
    return result


def _constraint_rows(b: OmegaBimodule, om_tuple, n: int) -> list:
    """Sparse rows of (module map) o f - f o (slotwise maps) for pmap and qmap."""
    a = b.base
    d, m = a.dim, b.dim_m
    prod = a.omega.product_of(om_tuple)
    rows = []
    for mmaps, amaps in ((b.pmap, a.pmap), (b.qmap, a.qmap)):
        big = mmaps[prod]
        slot_cols = []  # slot_cols[t][j] = sparse support of column j of the slot map
        for t in range(n):
            mat = amaps[om_tuple[t]]
            slot_cols.append(
                [[(i, mat.at(i, j)) for i in range(d) if mat.at(i, j)] for j in range(d)]
            )
        for args in iproduct(range(d), repeat=n):
            arg_rank = _tuple_rank(args, d)
            row_of = [dict() for _ in range(m)]
            for k in range(m):
                for l in range(m):
                    coeff = big.at(k, l)
                    if coeff:
                        col = arg_rank * m + l
                        row_of[k][col] = row_of[k].get(col, ZERO) + coeff
            for combo in iproduct(*[slot_cols[t][args[t]] for t in range(n)]):
                coeff = ONE
                i_rank = 0
                for i, v in combo:
                    coeff *= v
                    i_rank = i_rank * d + i
                for k in range(m):
                    col = i_rank * m + k
                    new = row_of[k].get(col, ZERO) - coeff
                    if new:
                        row_of[k][col] = new
                    else:
                        row_of[k].pop(col, None)
            rows.extend(r for r in row_of if r)
    return rows


# -- the coboundary -------------------------------------------------------


class SparseOp:
    """Sparse linear map on raw cochain coordinates, stored column-wise."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, colmaps: list):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = [list(cm.items()) for cm in colmaps]

    def apply_dense(self, vec) -> list:
        out = [ZERO] * self.nrows
        for col, v in enumerate(vec):
            if v:
                for row, c in self.cols[col]:
                    out[row] += c * v
        return out

    def apply_sparse(self, vec: dict) -> list:
        out = [ZERO] * self.nrows
        for col, v in vec.items():
            if v:
                for row, c in self.cols[col]:
                    out[row] += c * v
        return out

    def matrix(self) -> Mat:
        m = Mat.zeros(self.nrows, self.ncols)
        for col, entries in enumerate(self.cols):
            for row, c in entries:
                m.entries[row * self.ncols + col] = c
        return m


def delta_op(b: OmegaBimodule, n: int) -> SparseOp:
    """Compiled coboundary on raw coordinates, degree n -> n+1 (cached)."""
    cache_key = ("delta_op", n)
    hit = b._cache.get(cache_key)
    if hit is not None:
        return hit
    a = b.base
    om = a.omega
    d, m = a.dim, b.dim_m
    s = om.size
    ncols = _pow(s, n) * _pow(d, n) * m
    nrows = _pow(s, n + 1) * _pow(d, n + 1) * m
    colmaps = [dict() for _ in range(ncols)]

    def emit(row: int, col: int, coeff):
        cm = colmaps[col]
        new = cm.get(row, ZERO) + coeff
        if new:
            cm[row] = new
        else:
            cm.pop(row, None)

    unit = om.unit
    if n == 0:
        # (a |> m at (x, unit)) - (m <| a at (unit, x))
        for x in om.elements():
            lt = b.left[(x, unit)]
            rt = b.right[(unit, x)]
            for j in range(d):
                for k in range(m):
                    row = (x * d + j) * m + k
                    for l in range(m):
                        if lt[j][l][k]:
                            emit(row, l, lt[j][l][k])
                        if rt[l][j][k]:
                            emit(row, l, -rt[l][j][k])
        op = SparseOp(nrows, ncols, colmaps)
        b._cache[cache_key] = op
        return op

    d_out = _pow(d, n + 1)
    dn = _pow(d, n)
    tuples_in = om.tuples(n)
    in_rank = {t: i for i, t in enumerate(tuples_in)}
    for t_rank, beta in enumerate(om.tuples(n + 1)):
        row_base_tuple = t_rank * d_out * m
        tail = beta[1:]
        head = beta[:-1]
        tail_base = in_rank[tail] * dn * m
        head_base = in_rank[head] * dn * m
        prod_tail = om.product_of(tail)
        prod_head = om.product_of(head)
        lt = b.left[(beta[0], prod_tail)]
        rt = b.right[(prod_head, beta[-1])]
        p_pow = a.p_power(beta[0], n - 1)
        q_pow = a.q_power(beta[-1], n - 1)

        # first term: p^{n-1}(a_1) acting on the value at the tail
        for j1 in range(d):
            u = p_pow.col(j1)
            act = [[ZERO] * m for _ in range(m)]  # act[l][k]
            for i, ui in enumerate(u):
                if not ui:
                    continue
                for l in range(m):
                    rowv = lt[i][l]
                    for k in range(m):
                        if rowv[k]:
                            act[l][k] += ui * rowv[k]
            for tail_rank in range(dn):
                row0 = row_base_tuple + (j1 * dn + tail_rank) * m
                col0 = tail_base + tail_rank * m
                for l in range(m):
                    for k in range(m):
                        if act[l][k]:
                            emit(row0 + k, col0 + l, act[l][k])

        # last term: value at the head acted on by q^{n-1}(a_{n+1})
        sign_last = ONE if (n + 1) % 2 == 0 else -ONE
        for jl in range(d):
            v = q_pow.col(jl)
            act = [[ZERO] * m for _ in range(m)]
            for j, vj in enumerate(v):
                if not vj:
                    continue
                for l in range(m):
                    if rt[l][j]:
                        rowv = rt[l][j]
                        for k in range(m):
                            if rowv[k]:
                                act[l][k] += vj * rowv[k]
            for head_rank in range(dn):
                row0 = row_base_tuple + (head_rank * d + jl) * m
                col0 = head_base + head_rank * m
                for l in range(m):
                    for k in range(m):
                        if act[l][k]:
                            emit(row0 + k, col0 + l, sign_last * act[l][k])

        # middle terms: slot i of the output is merged through the product
        for i in range(1, n + 1):
            sign = ONE if i % 2 == 0 else -ONE
            merged = beta[: i - 1] + (om.mul(beta[i - 1], beta[i]),) + beta[i + 1 :]
            merged_base = in_rank[merged] * dn * m
            mu_t = a.product[(beta[i - 1], beta[i])]
            p_cols = [
                [[(r, mat.at(r, c)) for r in range(d) if mat.at(r, c)] for c in range(d)]
                for mat in (a.pmap[beta[t]] for t in range(i - 1))
            ]
            q_cols = [
                [[(r, mat.at(r, c)) for r in range(d) if mat.at(r, c)] for c in range(d)]
                for mat in (a.qmap[beta[t]] for t in range(i + 1, n + 1))
            ]
            for args in iproduct(range(d), repeat=n + 1):
                row0 = row_base_tuple + _tuple_rank(args, d) * m
                slot_supports = []
                for t in range(i - 1):
                    slot_supports.append(p_cols[t][args[t]])
                mu_vec = mu_t[args[i - 1]][args[i]]
                slot_supports.append([(r, mu_vec[r]) for r in range(d) if mu_vec[r]])
                for t in range(i + 1, n + 1):
                    slot_supports.append(q_cols[t - i - 1][args[t]])
                if any(not sup for sup in slot_supports):
                    continue
                for combo in iproduct(*slot_supports):
                    coeff = sign
                    i_rank = 0
                    for idx, v in combo:
                        coeff *= v
                        i_rank = i_rank * d + idx
                    col0 = merged_base + i_rank * m
                    for k in range(m):
                        emit(row0 + k, col0 + k, coeff)
    op = SparseOp(nrows, ncols, colmaps)
    b._cache[cache_key] = op
    return op


def apply_delta(b: OmegaBimodule, f: Cochain, check: bool = True) -> Cochain:
    """Evaluate the coboundary of an equivariant cochain term by term."""
    a = b.base
    om = a.omega
    if f.omega_size != om.size or f.dim_in != a.dim or f.dim_out != b.dim_m:
        raise MalformedInputError("cochain does not match the bimodule")
    if check and not is_equivariant(b, f):
        raise PreconditionError("cochain is not equivariant")
    n = f.degree
    d, m = a.dim, b.dim_m
    out = Cochain.zero(n + 1, om.size, d, m)
    if n == 0:
        unit = om.unit
        mv = list(f.coords)
        for x in om.elements():
            for j in range(d):
                ej = a.basis_vector(j)
                val = b.act_left((x, unit), ej, mv)
                sub = b.act_right((unit, x), mv, ej)
                base = out.block_base((x,)) + j * m
                for k in range(m):
                    out.coords[base + k] = val[k] - sub[k]
        return out
    for beta in om.tuples(n + 1):
        tail, head = beta[1:], beta[:-1]
        prod_tail, prod_head = om.product_of(tail), om.product_of(head)
        p_pow = a.p_power(beta[0], n - 1)
        q_pow = a.q_power(beta[-1], n - 1)
        base_tuple = out.block_base(beta)
        for args in iproduct(range(d), repeat=n + 1):
            acc = b.act_left(
                (beta[0], prod_tail), p_pow.col(args[0]), f.value(tail, args[1:])
            )
            for i in range(1, n + 1):
                sign = ONE if i % 2 == 0 else -ONE
                merged = beta[: i - 1] + (om.mul(beta[i - 1], beta[i]),) + beta[i + 1 :]
                vectors = []
                for t in range(i - 1):
                    vectors.append(a.pmap[beta[t]].col(args[t]))
                vectors.append(a.mul_basis((beta[i - 1], beta[i]), args[i - 1], args[i]))
                for t in range(i + 1, n + 1):
                    vectors.append(a.qmap[beta[t]].col(args[t]))
                term = f.evaluate(merged, vectors)
                for k in range(m):
                    if term[k]:
                        acc[k] += sign * term[k]
            sign_last = ONE if (n + 1) % 2 == 0 else -ONE
            term = b.act_right(
                (prod_head, beta[-1]), f.value(head, args[:-1]), q_pow.col(args[-1])
            )
            for k in range(m):
                if term[k]:
                    acc[k] += sign_last * term[k]
            base = base_tuple + _tuple_rank(args, d) * m
            for k in range(m):
                out.coords[base + k] = acc[k]
    return out


def delta_matrix(b: OmegaBimodule, n: int) -> Mat:
    """Coboundary in equivariant-basis coordinates, C^n -> C^{n+1}.

    Raises InternalCheckError if any image leaves the equivariant subspace
    (possible at n = 0 when unit-index structure maps are not the identity).
    """
    cache_key = ("delta_matrix", n)
    hit = b._cache.get(cache_key)
    if hit is not None:
        return hit
    src = equivariant_basis(b, n)
    dst = equivariant_basis(b, n + 1)
    op = delta_op(b, n)
    cols = []
    for j in range(src.dim()):
        image = op.apply_sparse(src.cochain_sparse(j))
        try:
            cols.append(dst.coords_of(image))
        except InternalCheckError as exc:
            raise InternalCheckError(
                f"coboundary image of degree-{n} basis element {j} left the "
                f"equivariant subspace: {exc}"
            ) from exc
    result = Mat.from_cols(cols, nrows=dst.dim()) if cols else Mat.zeros(dst.dim(), 0)
    b._cache[cache_key] = result
    return result


@dataclass
class DegreeRow:
    degree: int
    dim_cochains: int
    dim_cocycles: int
    dim_coboundaries: int
    dim_cohomology: int

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "cochains": self.dim_cochains,
            "cocycles": self.dim_cocycles,
            "coboundaries": self.dim_coboundaries,
            "cohomology": self.dim_cohomology,
        }


@dataclass
class CohomologyReport:
    rows: list
    degree0_intersected: bool = False

    def dims(self) -> list:
        return [r.dim_cohomology for r in self.rows]

    def to_json(self) -> dict:
        return {
            "degrees": [r.to_json() for r in self.rows],
            "degree0_intersected": self.degree0_intersected,
        }


def _image_intersection_generators(b: OmegaBimodule) -> tuple[list, int]:
    """Raw generators of im(delta_0) ∩ C^1 and the rank of delta_0.

    Used when the degree-0 differential leaves the equivariant subspace.
    """
    op = delta_op(b, 0)
    m = b.dim_m
    images = []
    for l in range(m):
        images.append(op.apply_sparse({l: ONE}))
    basis1 = equivariant_basis(b, 1)
    width_b = basis1.dim()
    img_rank = rank(Mat.from_cols(images, nrows=op.nrows)) if images else 0
    # kernel of [basis_matrix | -images]: pairs (x, y) with B x = W y
    rows_needed = op.nrows
    cols_total = width_b + len(images)
    sparse_rows = [dict() for _ in range(rows_needed)]
    for j in range(width_b):
        for idx, v in basis1.cochain_sparse(j).items():
            sparse_rows[idx][j] = v
    for jj, img in enumerate(images):
        for idx, v in enumerate(img):
            if v:
                sparse_rows[idx][width_b + jj] = -v
    pairs = sparse_kernel([r for r in sparse_rows if r], cols_total)
    gens = []
    for vec in pairs:
        coeffs = [vec.get(width_b + jj, ZERO) for jj in range(len(images))]
        if all(not c for c in coeffs):
            continue  # relation purely inside the basis span
        g = [ZERO] * op.nrows
        for jj, c in enumerate(coeffs):
            if c:
                for idx, v in enumerate(images[jj]):
                    if v:
                        g[idx] += c * v
        if any(g):
            gens.append(g)
    # reduce generators to an independent set via rank bookkeeping
    independent = []
    for g in gens:
        trial = independent + [g]
        if rank(Mat.from_cols(trial, nrows=op.nrows)) == len(trial):
            independent.append(g)
    return independent, img_rank


def cohomology_dims(b: OmegaBimodule, max_degree: int) -> CohomologyReport:
    """Cocycle/coboundary/cohomology dimensions for degrees 0..max_degree.

    Raises InternalCheckError when degree-0 coboundaries are not 1-cocycles
    (possible for valid inputs; see the module docstring): reporting a
    quotient by a space that is not inside the cocycles would be wrong.
    """
    witness = validate_bimodule(b)
    if witness is not None:
        raise PreconditionError(f"bimodule invalid: {witness.describe()}")
    dims_c = [equivariant_basis(b, k).dim() for k in range(max_degree + 2)]
    mats: dict = {}
    degree0_intersected = False
    b1_dim = None
    z0_dim = None
    try:
        mats[0] = delta_matrix(b, 0)
    except InternalCheckError:
        degree0_intersected = True
        gens, img_rank = _image_intersection_generators(b)
        z0_dim = b.dim_m - img_rank
        b1_dim = len(gens)
        op1 = delta_op(b, 1)
        basis1 = equivariant_basis(b, 1)
        for g in gens:
            basis1.coords_of(g)  # membership assertion: must lie in C^1
            if any(op1.apply_dense(g)):
                raise InternalCheckError(
                    "degree-0 coboundary generator is not a 1-cocycle; "
                    "the complex is inconsistent on this input"
                )
    for k in range(1, max_degree + 1):
        mats[k] = delta_matrix(b, k)
    if 0 in mats and max_degree >= 1 and not mats[1].mul(mats[0]).is_zero():
        raise InternalCheckError(
            "degree-0 coboundaries are not 1-cocycles; "
            "the complex is inconsistent on this input"
        )
    rows = []
    for k in range(max_degree + 1):
        if k == 0:
            if degree0_intersected:
                z = z0_dim
            else:
                z = dims_c[0] - rank(mats[0])
            bdim = 0
        else:
            z = dims_c[k] - rank(mats[k])
            if k == 1 and degree0_intersected:
                bdim = b1_dim
            else:
                bdim = rank(mats[k - 1])
        if bdim > z:
            raise InternalCheckError(
                f"degree-{k} coboundary space is larger than the cocycle space"
            )
        rows.append(DegreeRow(k, dims_c[k], z, bdim, z - bdim))
    return CohomologyReport(rows, degree0_intersected)


def degree0_sound(b: OmegaBimodule) -> bool:
    """Does the degree-0 differential compose to zero into the complex?

    True when every degree-0 coboundary that lies in C^1 (all of them, or
    the exact intersection when some image leaves the subspace) is killed
    by the next differential.  Valid inputs exist for which this fails; see
    the module docstring.
    """
    op0 = delta_op(b, 0)
    op1 = delta_op(b, 1)
    basis1 = equivariant_basis(b, 1)
    images = [op0.apply_sparse({l: ONE}) for l in range(b.dim_m)]
    all_inside = True
    for img in images:
        try:
            basis1.coords_of(img)
        except InternalCheckError:
            all_inside = False
            break
    if all_inside:
        return all(not any(op1.apply_dense(img)) for img in images)
    gens, _ = _image_intersection_generators(b)
    return all(not any(op1.apply_dense(g)) for g in gens)


def is_cocycle(b: OmegaBimodule, f: Cochain) -> bool:
    if not is_equivariant(b, f):
        raise PreconditionError("cochain is not equivariant")
    op = delta_op(b, f.degree)
    return not any(op.apply_dense(f.coords))


def is_coboundary(b: OmegaBimodule, f: Cochain) -> Cochain | None:
    """A preimage with free coordinates zero, or None.

    Degree 1 solves against all of C^0 = M directly (the degree-0 image need
    not lie in C^1 in general, but a preimage of an equivariant target is
    still meaningful); higher degrees solve in equivariant coordinates.
    """
    if not is_equivariant(b, f):
        raise PreconditionError("cochain is not equivariant")
    n = f.degree
    if n == 0:
        return None
    if n == 1:
        op = delta_op(b, 0)
        x = solve(op.matrix(), f.coords)
        if x is None:
            return None
        return Cochain(0, f.omega_size, f.dim_in, f.dim_out, x)
    src = equivariant_basis(b, n - 1)
    dst = equivariant_basis(b, n)
    mat = delta_matrix(b, n - 1)
    target = dst.coords_of(f.coords)
    x = solve(mat, target)
    if x is None:
        return None
    return src.combine(x)


def random_equivariant(b: OmegaBimodule, n: int, rng, lo: int = -2, hi: int = 2) -> Cochain:
    """Random element of C^n: basis coordinates drawn uniformly from [lo, hi]."""
    basis = equivariant_basis(b, n)
    coords = [Rat(rng.randint(lo, hi)) for _ in range(basis.dim())]
    return basis.combine(coords)
