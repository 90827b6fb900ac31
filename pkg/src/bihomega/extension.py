"""Abelian extensions: building from 2-cocycles, extracting them back,
and deciding cohomology classes.

An extension presentation is a split short exact sequence in matrix form:
inclusion and retraction for the kernel M, projection and section for the
quotient A, all commuting with the structure maps and the operator
families, with M multiplying trivially inside the total algebra.

Building from a pair (psi, chi): total product adds psi into the module
component of the semidirect formula, the total operator family is the block
map (R, chi + T).  The total is a valid Rota-Baxter family algebra exactly
when the pair is a combined 2-cocycle; both sides of that equivalence are
computed and compared on every build.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    OmegaAlgebra,
    RotaBaxterFamily,
    Witness,
    check_rota_baxter,
    is_homomorphism,
    validate_algebra,
)
from .bimodule import OmegaBimodule, validate_rbf_bimodule
from .cochain import Cochain, apply_delta, is_equivariant, maps_from_cochain
from .errors import InternalCheckError, MalformedInputError, PreconditionError
from .linalg import Mat
from .rationals import ONE, ZERO
from .rbf import CombinedCochain, RbfContext, d_combined, solve_combined


@dataclass(eq=False)
class CocyclePair:
    """Degree-2 algebra cochain plus degree-1 operator cochain, both with
    coefficients in the module."""

    psi: Cochain
    chi: Cochain

    def combined(self) -> CombinedCochain:
        return CombinedCochain(self.psi, self.chi)

    def __eq__(self, other):
        return isinstance(other, CocyclePair) and self.psi == other.psi and self.chi == other.chi


@dataclass(eq=False)
class ExtensionPresentation:
    base: OmegaAlgebra
    rb: RotaBaxterFamily
    dim_m: int
    pmap_m: dict
    qmap_m: dict
    tmap_m: dict
    total: OmegaAlgebra
    total_rb: RotaBaxterFamily
    incl: dict  # w -> dimE x dimM
    proj: dict  # w -> dimA x dimE
    sect: dict  # w -> dimE x dimA
    retr: dict  # w -> dimM x dimE


@dataclass(eq=False)
class ExtensionBuild:
    presentation: ExtensionPresentation
    algebra_witness: Witness | None
    rb_witness: Witness | None
    is_cocycle: bool

    def valid(self) -> bool:
        return self.algebra_witness is None and self.rb_witness is None


def build_extension(ctx: RbfContext, pair: CocyclePair) -> ExtensionBuild:
    """Total structure on A (+) M from a (not necessarily cocycle) pair.

    Asserts the classifying equivalence: the total validates as a
    Rota-Baxter family algebra iff the pair is a combined 2-cocycle
    (componentwise: product associativity iff the algebra part is a cocycle,
    operator identity iff the operator part matches the comparison map).
    """
    a = ctx.algebra
    b = ctx.bimodule
    om = a.omega
    d, dm = a.dim, b.dim_m
    psi, chi = pair.psi, pair.chi
    if psi.degree != 2 or chi.degree != 1 or psi.dim_out != dm or chi.dim_out != dm:
        raise MalformedInputError("pair has wrong degrees or coefficient dims")
    if not is_equivariant(b, psi) or not is_equivariant(b, chi):
        raise PreconditionError("pair components must be equivariant")
    n = d + dm
    product = {}
    for key in a.product:
        x, y = key
        t = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        mu = a.product[key]
        lt, rt = b.left[key], b.right[key]
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    t[i][j][k] = mu[i][j][k]
                pv = psi.value(key, (i, j))
                for k in range(dm):
                    t[i][j][d + k] = pv[k]
        for i in range(d):
            for l in range(dm):
                for k in range(dm):
                    t[i][d + l][d + k] = lt[i][l][k]
        for l in range(dm):
            for j in range(d):
                for k in range(dm):
                    t[d + l][j][d + k] = rt[l][j][k]
        product[key] = t
    pmap = {x: _block(a.pmap[x], b.pmap[x], None) for x in om.elements()}
    qmap = {x: _block(a.qmap[x], b.qmap[x], None) for x in om.elements()}
    chi_mats = maps_from_cochain(chi, om)
    tmaps = {x: _block(ctx.rb.maps[x], b.tmap[x], chi_mats[x]) for x in om.elements()}
    total = OmegaAlgebra(om, n, product, pmap, qmap)
    total_rb = RotaBaxterFamily(ctx.rb.weight, tmaps)
    incl = {x: _incl_mat(d, dm) for x in om.elements()}
    proj = {x: _proj_mat(d, dm) for x in om.elements()}
    sect = {x: _sect_mat(d, dm) for x in om.elements()}
    retr = {x: _retr_mat(d, dm) for x in om.elements()}
    pres = ExtensionPresentation(
        a, ctx.rb, dm, dict(b.pmap), dict(b.qmap), dict(b.tmap), total, total_rb,
        incl, proj, sect, retr,
    )
    algebra_witness = validate_algebra(total)
    rb_witness = check_rota_baxter(total, total_rb)
    image = d_combined(ctx, pair.combined(), check=False)
    alg_zero = image.alg.is_zero()
    rb_zero = image.rbf.is_zero()
    if (algebra_witness is None) != alg_zero:
        raise InternalCheckError("product validity disagrees with the algebra cocycle test")
    if (rb_witness is None) != rb_zero:
        raise InternalCheckError("operator validity disagrees with the comparison cocycle test")
    return ExtensionBuild(pres, algebra_witness, rb_witness, alg_zero and rb_zero)


def _block(top_left: Mat, bottom_right: Mat, bottom_left: Mat | None) -> Mat:
    d = top_left.rows
    dm = bottom_right.rows
    n = d + dm
    out = Mat.zeros(n, n)
    for i in range(d):
        for j in range(d):
            out.entries[i * n + j] = top_left.at(i, j)
    for i in range(dm):
        for j in range(dm):
            out.entries[(d + i) * n + (d + j)] = bottom_right.at(i, j)
    if bottom_left is not None:
        for i in range(dm):
            for j in range(d):
                out.entries[(d + i) * n + j] = bottom_left.at(i, j)
    return out


def _incl_mat(d: int, dm: int) -> Mat:
    out = Mat.zeros(d + dm, dm)
    for l in range(dm):
        out.entries[(d + l) * dm + l] = ONE
    return out


def _proj_mat(d: int, dm: int) -> Mat:
    out = Mat.zeros(d, d + dm)
    for i in range(d):
        out.entries[i * (d + dm) + i] = ONE
    return out


def _sect_mat(d: int, dm: int) -> Mat:
    out = Mat.zeros(d + dm, d)
    for i in range(d):
        out.entries[i * d + i] = ONE
    return out


def _retr_mat(d: int, dm: int) -> Mat:
    out = Mat.zeros(dm, d + dm)
    for l in range(dm):
        out.entries[l * (d + dm) + (d + l)] = ONE
    return out


def validate_extension(e: ExtensionPresentation):
    """Raise MalformedInputError naming the first violated presentation law."""
    om = e.base.omega
    d, dm, n = e.base.dim, e.dim_m, e.total.dim
    if n != d + dm:
        raise MalformedInputError("total dimension is not base + module")

    def bad(name, x):
        raise MalformedInputError(f"extension law violated: {name} at index {x}")

    for x in om.elements():
        if e.proj[x].mul(e.sect[x]) != Mat.identity(d):
            bad("projection-section identity", x)
        if e.retr[x].mul(e.incl[x]) != Mat.identity(dm):
            bad("retraction-inclusion identity", x)
        if not e.retr[x].mul(e.sect[x]).is_zero():
            bad("retraction-section vanishing", x)
        recomposed = e.incl[x].mul(e.retr[x]).add(e.sect[x].mul(e.proj[x]))
        if recomposed != Mat.identity(n):
            bad("splitting resolution of the identity", x)
        if e.total.pmap[x].mul(e.incl[x]) != e.incl[x].mul(e.pmap_m[x]):
            bad("inclusion p-intertwining", x)
        if e.total.qmap[x].mul(e.incl[x]) != e.incl[x].mul(e.qmap_m[x]):
            bad("inclusion q-intertwining", x)
        if e.proj[x].mul(e.total.pmap[x]) != e.base.pmap[x].mul(e.proj[x]):
            bad("projection p-intertwining", x)
        if e.proj[x].mul(e.total.qmap[x]) != e.base.qmap[x].mul(e.proj[x]):
            bad("projection q-intertwining", x)
        if e.total.pmap[x].mul(e.sect[x]) != e.sect[x].mul(e.base.pmap[x]):
            bad("section p-intertwining", x)
        if e.total.qmap[x].mul(e.sect[x]) != e.sect[x].mul(e.base.qmap[x]):
            bad("section q-intertwining", x)
        if e.total_rb.maps[x].mul(e.incl[x]) != e.incl[x].mul(e.tmap_m[x]):
            bad("inclusion operator square", x)
        if e.proj[x].mul(e.total_rb.maps[x]) != e.rb.maps[x].mul(e.proj[x]):
            bad("projection operator square", x)
    for x in om.elements():
        for y in om.elements():
            key = (x, y)
            pxy = e.proj[om.mul(x, y)]
            for i in range(n):
                for j in range(n):
                    lhs = pxy.matvec(e.total.mul_basis(key, i, j))
                    rhs = e.base.mul_vec(key, e.proj[x].col(i), e.proj[y].col(j))
                    if lhs != rhs:
                        bad("projection multiplicativity", (x, y, i, j))
            for l in range(dm):
                for l2 in range(dm):
                    prodv = e.total.mul_vec(key, e.incl[x].col(l), e.incl[y].col(l2))
                    if any(prodv):
                        bad("abelian kernel", (x, y, l, l2))
    witness = validate_algebra(e.total)
    if witness is not None:
        raise MalformedInputError(f"total algebra invalid: {witness.describe()}")
    witness = check_rota_baxter(e.total, e.total_rb)
    if witness is not None:
        raise MalformedInputError(f"total operator family invalid: {witness.describe()}")


def _section_ok(e: ExtensionPresentation, sect: dict) -> bool:
    om = e.base.omega
    d = e.base.dim
    for x in om.elements():
        s = sect.get(x)
        if s is None or s.rows != e.total.dim or s.cols != d:
            return False
        if e.proj[x].mul(s) != Mat.identity(d):
            return False
        if e.total.pmap[x].mul(s) != s.mul(e.base.pmap[x]):
            return False
        if e.total.qmap[x].mul(s) != s.mul(e.base.qmap[x]):
            return False
    return True


def section_shift(e: ExtensionPresentation, eta: Cochain) -> dict:
    """New section s + incl o eta from an equivariant degree-1 cochain."""
    if eta.degree != 1 or eta.dim_in != e.base.dim or eta.dim_out != e.dim_m:
        raise MalformedInputError("shift must be a degree-1 cochain into the module")
    om = e.base.omega
    mats = maps_from_cochain(eta, om)
    for x in om.elements():
        if e.pmap_m[x].mul(mats[x]) != mats[x].mul(e.base.pmap[x]):
            raise PreconditionError("shift cochain is not p-equivariant")
        if e.qmap_m[x].mul(mats[x]) != mats[x].mul(e.base.qmap[x]):
            raise PreconditionError("shift cochain is not q-equivariant")
    out = {}
    for x in om.elements():
        out[x] = e.sect[x].add(e.incl[x].mul(mats[x]))
    return out


def extract_cocycle(
    e: ExtensionPresentation, section: dict | None = None
) -> tuple[CocyclePair, OmegaBimodule]:
    """Induced bimodule and classifying pair read off through a section.

    The returned pair is certified to be a combined 2-cocycle for the
    induced context; failure of any theory-promised step raises
    InternalCheckError.
    """
    validate_extension(e)
    sect = e.sect if section is None else section
    if section is not None and not _section_ok(e, section):
        raise PreconditionError("supplied section violates the section laws")
    a = e.base
    om = a.omega
    d, dm = a.dim, e.dim_m
    left, right = {}, {}
    for x in om.elements():
        for y in om.elements():
            key = (x, y)
            lt = [[[ZERO] * dm for _ in range(dm)] for _ in range(d)]
            rt = [[[ZERO] * dm for _ in range(d)] for _ in range(dm)]
            for i in range(d):
                si = sect[x].col(i)
                for l in range(dm):
                    u = e.total.mul_vec(key, si, e.incl[y].col(l))
                    if any(e.proj[om.mul(x, y)].matvec(u)):
                        raise InternalCheckError("left action left the kernel")
                    lt[i][l] = e.retr[om.mul(x, y)].matvec(u)
            for l in range(dm):
                il = e.incl[x].col(l)
                for j in range(d):
                    u = e.total.mul_vec(key, il, sect[y].col(j))
                    if any(e.proj[om.mul(x, y)].matvec(u)):
                        raise InternalCheckError("right action left the kernel")
                    rt[l][j] = e.retr[om.mul(x, y)].matvec(u)
            left[key] = lt
            right[key] = rt
    bim = OmegaBimodule(a, dm, left, right, dict(e.pmap_m), dict(e.qmap_m), dict(e.tmap_m))
    witness = validate_rbf_bimodule(bim, e.rb)
    if witness is not None:
        raise InternalCheckError(f"induced bimodule failed validation: {witness.describe()}")
    psi = Cochain.zero(2, om.size, d, dm)
    for x in om.elements():
        for y in om.elements():
            key = (x, y)
            xy = om.mul(x, y)
            base = psi.block_base(key)
            for i in range(d):
                si = sect[x].col(i)
                for j in range(d):
                    u = e.total.mul_vec(key, si, sect[y].col(j))
                    sv = sect[xy].matvec(a.mul_basis(key, i, j))
                    diff = [p - q for p, q in zip(u, sv)]
                    if any(e.proj[xy].matvec(diff)):
                        raise InternalCheckError("product defect left the kernel")
                    mv = e.retr[xy].matvec(diff)
                    off = base + (i * d + j) * dm
                    for k in range(dm):
                        psi.coords[off + k] = mv[k]
    chi = Cochain.zero(1, om.size, d, dm)
    for x in om.elements():
        base = chi.block_base((x,))
        for j in range(d):
            u = e.total_rb.maps[x].matvec(sect[x].col(j))
            sv = sect[x].matvec(e.rb.maps[x].col(j))
            diff = [p - q for p, q in zip(u, sv)]
            if any(e.proj[x].matvec(diff)):
                raise InternalCheckError("operator defect left the kernel")
            mv = e.retr[x].matvec(diff)
            for k in range(dm):
                chi.coords[base + j * dm + k] = mv[k]
    pair = CocyclePair(psi, chi)
    ctx = RbfContext(a, e.rb, bim)
    if not d_combined(ctx, pair.combined(), check=True).is_zero():
        raise InternalCheckError("extracted pair is not a combined 2-cocycle")
    return pair, bim


@dataclass(eq=False)
class CompareReport:
    cohomologous: bool
    iso: dict | None  # w -> Mat on the total space, when constructed


def compare_extensions(e1: ExtensionPresentation, e2: ExtensionPresentation) -> CompareReport:
    """Decide whether two presentations carry the same cohomology class.

    When the difference of the extracted pairs is a combined coboundary, the
    solving certificate is turned into an isomorphism of the totals fixing M
    and A, and every isomorphism law is verified before reporting success.
    """
    if e1.base.product != e2.base.product or e1.base.pmap != e2.base.pmap or e1.base.qmap != e2.base.qmap:
        raise MalformedInputError("extensions live over different base algebras")
    if e1.rb.maps != e2.rb.maps or e1.rb.weight != e2.rb.weight:
        raise MalformedInputError("extensions carry different operator families")
    if e1.dim_m != e2.dim_m or e1.pmap_m != e2.pmap_m or e1.qmap_m != e2.qmap_m or e1.tmap_m != e2.tmap_m:
        raise MalformedInputError("extensions have different module data")
    pair1, b1 = extract_cocycle(e1)
    pair2, b2 = extract_cocycle(e2)
    if b1.left != b2.left or b1.right != b2.right:
        raise MalformedInputError("extensions induce different bimodule actions")
    ctx = RbfContext(e1.base, e1.rb, b1)
    diff = pair1.combined().sub(pair2.combined())
    sol = solve_combined(ctx, 1, diff)
    if sol is None:
        return CompareReport(False, None)
    eta = sol.alg.add(apply_delta(b1, sol.rbf, check=False))
    mats = maps_from_cochain(eta, e1.base.omega)
    om = e1.base.omega
    d, dm = e1.base.dim, e1.dim_m
    n = d + dm
    iso = {}
    for x in om.elements():
        phi_x = Mat.identity(n)
        for l in range(dm):
            for j in range(d):
                phi_x.entries[(d + l) * n + j] = mats[x].at(l, j)
        iso[x] = phi_x
    _verify_iso(e1, e2, iso)
    return CompareReport(True, iso)


def _verify_iso(e1: ExtensionPresentation, e2: ExtensionPresentation, iso: dict):
    witness = is_homomorphism(iso, e1.total, e2.total)
    if witness is not None:
        raise InternalCheckError(f"constructed map is not a homomorphism: {witness.describe()}")
    om = e1.base.omega
    for x in om.elements():
        if iso[x].mul(e1.total_rb.maps[x]) != e2.total_rb.maps[x].mul(iso[x]):
            raise InternalCheckError("constructed map does not intertwine the operator families")
        if iso[x].mul(e1.incl[x]) != e2.incl[x]:
            raise InternalCheckError("constructed map does not fix the kernel inclusion")
        if e2.proj[x].mul(iso[x]) != e1.proj[x]:
            raise InternalCheckError("constructed map does not cover the projection")
    return None
