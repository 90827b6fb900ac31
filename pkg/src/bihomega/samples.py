"""Built-in example structures and seeded random generators.

Everything here returns structures that validate (generators re-draw until
their candidate passes, deterministically for a fixed seed).  Random
algebras come from constructions that are valid by design: zero products
with commuting diagonal structure maps, the two-dimensional scaled example
family, twists of associative cores (diagonal algebras, truncated
polynomial algebras) by automorphism families, and semidirect products.
"""

from __future__ import annotations

from .algebra import (
    ExampleParams,
    OmegaAlgebra,
    RotaBaxterFamily,
    build_example_algebra,
    validate_algebra,
    validate_example_params,
    yau_twist,
    zero_algebra,
    zero_rb,
)
from .bimodule import (
    OmegaBimodule,
    regular_bimodule,
    semidirect_product,
    validate_bimodule,
    zero_bimodule,
)
from .errors import InternalCheckError
from .linalg import Mat
from .monoid import Monoid, boolean_monoid, cyclic_monoid, trivial_monoid
from .rationals import ONE, ZERO, Rat
from .rbf import RbfContext
from .search import first_nonscalar, search_rbf


def build_e0() -> OmegaAlgebra:
    """One-dimensional unit algebra over the trivial monoid."""
    om = trivial_monoid()
    return OmegaAlgebra(
        om, 1, {(0, 0): [[[ONE]]]}, {0: Mat.identity(1)}, {0: Mat.identity(1)}
    )


def build_zero1() -> OmegaAlgebra:
    """One-dimensional zero algebra over the trivial monoid."""
    return zero_algebra(trivial_monoid(), 1)


def unit_params(omega: Monoid) -> ExampleParams:
    c = {(x, y): ONE for x in omega.elements() for y in omega.elements()}
    rmap = {x: ONE for x in omega.elements()}
    lmap = {x: ONE for x in omega.elements()}
    return ExampleParams(c, rmap, lmap)


def build_e1() -> OmegaAlgebra:
    """The two-dimensional example with all parameters 1, trivial monoid."""
    return build_example_algebra(trivial_monoid(), unit_params(trivial_monoid()))


def build_e1_broken() -> OmegaAlgebra:
    """E1 with one structure constant overwritten; fails associativity."""
    a = build_e1()
    a.product[(0, 0)][1][1] = [ONE, ZERO]
    return a


def module_bimodule(a: OmegaAlgebra, params: ExampleParams) -> OmegaBimodule:
    """The one-dimensional bimodule attached to the example family."""
    om = a.omega
    left, right = {}, {}
    for x in om.elements():
        for y in om.elements():
            cv = params.c[(x, y)]
            left[(x, y)] = [[[cv]], [[cv]]]
            right[(x, y)] = [[[cv], [cv]]]
    pmap = {x: Mat.from_rows([[params.rmap[x]]]) for x in om.elements()}
    qmap = {x: Mat.from_rows([[params.lmap[x]]]) for x in om.elements()}
    return OmegaBimodule(a, 1, left, right, pmap, qmap, None)


def build_e1_bimodule() -> OmegaBimodule:
    return module_bimodule(build_e1(), unit_params(trivial_monoid()))


def build_e1_semidirect() -> OmegaAlgebra:
    return semidirect_product(build_e1_bimodule())


def searched_rb(a: OmegaAlgebra, weight=Rat(-1), bound: int = 1) -> RotaBaxterFamily:
    """First non-scalar hit of the bounded search, in scan order."""
    hits = search_rbf(a, bound, weight)
    hit = first_nonscalar(hits)
    if hit is None:
        raise InternalCheckError(f"no non-scalar family found at weight {weight}")
    return hit


def e1_rbf_context() -> RbfContext:
    a = build_e1()
    rb = searched_rb(a)
    return RbfContext.validated(a, rb, regular_bimodule(a, rb))


def e0_rbf_context() -> RbfContext:
    """E0 with the forced weight-1 family (negative identity)."""
    a = build_e0()
    rb = RotaBaxterFamily(ONE, {0: Mat.scalar(1, -1)})
    return RbfContext.validated(a, rb, regular_bimodule(a, rb))


def zero1_rbf_context() -> RbfContext:
    a = build_zero1()
    rb = RotaBaxterFamily(ONE, {0: Mat.zeros(1, 1)})
    bim = regular_bimodule(a, rb)
    return RbfContext.validated(a, rb, bim)


def c2_params(variant: int = 0, scale=Rat(2)) -> tuple[Monoid, ExampleParams]:
    """Valid parameter sets over the two-element group.

    variant 0: cocycle scaling c(a,b) = scale^(ab), trivial maps;
    variant 1: c(a,b) = (-1)^a with alternating rmap;
    variant 2: c(a,b) = (-1)^b with alternating lmap.
    """
    om = cyclic_monoid(2)
    if variant == 0:
        c = {(x, y): scale ** (x * y) if x * y else ONE for x in range(2) for y in range(2)}
        rmap = {0: ONE, 1: ONE}
        lmap = {0: ONE, 1: ONE}
    elif variant == 1:
        c = {(x, y): Rat(-1) ** x if x else ONE for x in range(2) for y in range(2)}
        rmap = {0: ONE, 1: -ONE}
        lmap = {0: ONE, 1: ONE}
    else:
        c = {(x, y): Rat(-1) ** y if y else ONE for x in range(2) for y in range(2)}
        rmap = {0: ONE, 1: ONE}
        lmap = {0: ONE, 1: -ONE}
    params = ExampleParams(c, rmap, lmap)
    problem = validate_example_params(om, params)
    if problem is not None:
        raise InternalCheckError(f"built-in parameter set invalid: {problem}")
    return om, params


def build_c2_example(variant: int = 0) -> OmegaAlgebra:
    om, params = c2_params(variant)
    return build_example_algebra(om, params)


def c2_rbf_context() -> RbfContext:
    a = build_c2_example(0)
    rb = searched_rb(a)
    return RbfContext.validated(a, rb, regular_bimodule(a, rb))


def build_diag(dim: int, omega: Monoid | None = None) -> OmegaAlgebra:
    """Product of ``dim`` copies of the rationals (componentwise product)."""
    om = omega or trivial_monoid()
    product = {}
    for x in om.elements():
        for y in om.elements():
            t = [[[ONE if i == j == k else ZERO for k in range(dim)] for j in range(dim)] for i in range(dim)]
            product[(x, y)] = t
    maps = {x: Mat.identity(dim) for x in om.elements()}
    return OmegaAlgebra(om, dim, product, dict(maps), dict(maps))


def build_truncated_poly(dim: int, omega: Monoid | None = None) -> OmegaAlgebra:
    """k[x]/(x^dim) in the basis 1, x, ..., x^(dim-1)."""
    om = omega or trivial_monoid()
    product = {}
    for x in om.elements():
        for y in om.elements():
            t = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
            for i in range(dim):
                for j in range(dim):
                    if i + j < dim:
                        t[i][j][i + j] = ONE
            product[(x, y)] = t
    maps = {x: Mat.identity(dim) for x in om.elements()}
    return OmegaAlgebra(om, dim, product, dict(maps), dict(maps))


# -- seeded random generation ---------------------------------------------

_MONOIDS = (trivial_monoid(), cyclic_monoid(2), boolean_monoid())
_SCALARS = (Rat(1), Rat(2), Rat(-1), Rat(1, 2), Rat(3))


def _random_diag_family(rng, omega: Monoid, dim: int, invertible: bool = False) -> dict:
    out = {}
    for x in omega.elements():
        entries = []
        for _ in range(dim):
            v = rng.choice(_SCALARS) if invertible else Rat(rng.randint(-2, 2))
            entries.append(v)
        m = Mat.zeros(dim, dim)
        for i, v in enumerate(entries):
            m.entries[i * dim + i] = v
        out[x] = m
    return out


def _cocycle_scale(rng, omega: Monoid) -> dict:
    t = rng.choice(_SCALARS)
    s = rng.choice(_SCALARS)
    return {
        (x, y): s * (t ** (x * y) if x * y else ONE)
        for x in omega.elements()
        for y in omega.elements()
    }


def _scale_product(a: OmegaAlgebra, c: dict) -> OmegaAlgebra:
    product = {}
    for key, t in a.product.items():
        cv = c[key]
        product[key] = [[[cv * v for v in row] for row in plane] for plane in t]
    return OmegaAlgebra(a.omega, a.dim, product, dict(a.pmap), dict(a.qmap))


def _random_core(rng, omega: Monoid, dim: int) -> OmegaAlgebra:
    kind = rng.choice(("diag", "poly"))
    core = build_diag(dim, omega) if kind == "diag" else build_truncated_poly(dim, omega)
    # constant automorphism family: permutation cycle for the diagonal
    # algebra, scaling x -> u x for the truncated polynomial algebra
    if kind == "diag":
        perm = list(range(dim))
        rng.shuffle(perm)
        phi = Mat.zeros(dim, dim)
        for j, i in enumerate(perm):
            phi.entries[i * dim + j] = ONE
    else:
        u = rng.choice((Rat(2), Rat(-1), Rat(1, 2), Rat(3)))
        phi = Mat.zeros(dim, dim)
        acc = ONE
        for i in range(dim):
            phi.entries[i * dim + i] = acc
            acc *= u
    jp, jq = rng.randint(0, 2), rng.randint(0, 2)
    pmap = {x: phi.power(jp) for x in omega.elements()}
    qmap = {x: phi.power(jq) for x in omega.elements()}
    twisted, _ = yau_twist(core, zero_rb(core), pmap, qmap)
    scaled = _scale_product(twisted, _cocycle_scale(rng, omega))
    return scaled


def random_valid_algebra(rng, max_dim: int = 3) -> OmegaAlgebra:
    """A validated random algebra with dim <= max_dim, monoid size <= 2."""
    for _ in range(40):
        omega = rng.choice(_MONOIDS)
        kind = rng.choice(("zero", "example", "twist", "semidirect"))
        try:
            if kind == "zero":
                dim = rng.randint(1, max_dim)
                a = zero_algebra(
                    omega,
                    dim,
                    _random_diag_family(rng, omega, dim),
                    _random_diag_family(rng, omega, dim),
                )
            elif kind == "example":
                if omega.size == 1:
                    c = {(0, 0): rng.choice(_SCALARS)}
                    params = ExampleParams(c, {0: ONE}, {0: ONE})
                    a = build_example_algebra(omega, params)
                else:
                    om2, params = c2_params(rng.randint(0, 2), rng.choice(_SCALARS))
                    a = build_example_algebra(om2, params)
            elif kind == "twist":
                dim = rng.randint(1, max_dim)
                a = _random_core(rng, omega, dim)
            else:
                if omega.size == 1:
                    base = build_e1()
                    bim = module_bimodule(base, unit_params(omega))
                else:
                    om2, params = c2_params(rng.randint(0, 2), rng.choice(_SCALARS))
                    base = build_example_algebra(om2, params)
                    bim = module_bimodule(base, params)
                if validate_bimodule(bim) is not None:
                    continue
                a = semidirect_product(bim, check=False)
        except Exception:
            continue
        if a.dim <= max_dim and validate_algebra(a) is None:
            return a
    raise InternalCheckError("random algebra generation failed to converge")


def random_valid_bimodule(rng, a: OmegaAlgebra, max_dim_m: int = 2) -> OmegaBimodule:
    """A validated random bimodule over the given algebra."""
    for _ in range(40):
        choices = ["zero"]
        if a.dim <= max_dim_m:
            choices.append("regular")
        kind = rng.choice(choices)
        if kind == "regular":
            b = regular_bimodule(a)
        else:
            dim_m = rng.randint(0, max_dim_m)
            b = zero_bimodule(
                a,
                dim_m,
                _random_diag_family(rng, a.omega, dim_m),
                _random_diag_family(rng, a.omega, dim_m),
            )
        if validate_bimodule(b) is None:
            return b
    raise InternalCheckError("random bimodule generation failed to converge")


def random_valid_pair(rng, max_dim: int = 3, max_dim_m: int = 2):
    a = random_valid_algebra(rng, max_dim)
    b = random_valid_bimodule(rng, a, max_dim_m)
    return a, b
