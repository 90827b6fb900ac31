import json
import random
from itertools import combinations, product

from conftest import fixture_text

from bihomega import samples
from bihomega.algebra import RotaBaxterFamily, zero_rb
from bihomega.bimodule import regular_bimodule, zero_bimodule
from bihomega.cochain import Cochain, apply_delta, delta_op, random_equivariant
from bihomega.gerstenhaber import mu_cochain
from bihomega.linalg import Mat, kernel_basis
from bihomega.rationals import ONE, ZERO, Rat
from bihomega.rbf import (
    CombinedCochain,
    RbfContext,
    chain_map_check,
    combined_dim,
    combined_kernel,
    combined_raw_matrix,
    d_combined,
    partial,
    phi,
    rbfa_cohomology_dims,
)


def phi2_subset_oracle(ctx, f):
    """Hand-rolled subset enumeration for the degree-2 comparison map."""
    a = ctx.algebra
    b = ctx.bimodule
    om = a.omega
    d, m = a.dim, b.dim_m
    w = ctx.rb.weight
    out = Cochain.zero(2, om.size, d, m)
    for alpha in om.tuples(2):
        t_all = b.tmap[om.product_of(alpha)]
        for args in product(range(d), repeat=2):
            r0 = ctx.rb.maps[alpha[0]].col(args[0])
            r1 = ctx.rb.maps[alpha[1]].col(args[1])
            e0 = a.basis_vector(args[0])
            e1v = a.basis_vector(args[1])
            acc = f.evaluate(alpha, [r0, r1])
            # k = 0: weight^1 times T(f(a, b))
            term = t_all.matvec(f.evaluate(alpha, [e0, e1v]))
            for k in range(m):
                acc[k] -= w * term[k]
            # k = 1: T(f with R at one slot)
            for slot in (0, 1):
                vecs = [r0 if slot == 0 else e0, r1 if slot == 1 else e1v]
                term = t_all.matvec(f.evaluate(alpha, vecs))
                for k in range(m):
                    acc[k] -= term[k]
            base = out.block_base(alpha) + (args[0] * d + args[1]) * m
            for k in range(m):
                out.coords[base + k] = acc[k]
    return out


def test_partial_zero(e1_ctx):
    z = Cochain.zero(1, 1, 2, 2)
    assert partial(e1_ctx, z, check=False).is_zero()


def test_partial_weight_one_trivial_family_reduces_to_composition(e1):
    rb = zero_rb(e1, ONE)
    ctx = RbfContext.validated(e1, rb, regular_bimodule(e1, rb))
    rng = random.Random(13)
    f = random_equivariant(ctx.bimodule, 1, rng)
    image = partial(ctx, f, check=False)
    a = e1
    for args in product(range(2), repeat=2):
        prod_vec = a.mul_basis((0, 0), args[0], args[1])
        expect = [-v for v in f.evaluate((0,), [prod_vec])]
        assert image.value((0, 0), args) == expect


def test_partial_dual_route_on_every_basis_cochain(e1_ctx, c2_ctx, e0_ctx):
    for ctx in (e1_ctx, c2_ctx, e0_ctx):
        m = ctx.bimodule.dim_m
        om, d, _ = ctx.dims()
        for j in range(m):
            f = Cochain.zero(0, om.size, d, m)
            f.coords[j] = ONE
            partial(ctx, f, check=False)  # raises on route disagreement
        for n in (1, 2):
            basis = ctx.basis(n)
            for j in range(basis.dim()):
                partial(ctx, basis.cochain(j), check=False)


def test_phi_degree_low_cases(e1_ctx):
    m = e1_ctx.bimodule.dim_m
    f = Cochain.zero(0, 1, 2, m)
    f.coords[0] = Rat(5)
    assert phi(e1_ctx, f).coords == f.coords
    rng = random.Random(17)
    g = random_equivariant(e1_ctx.bimodule, 1, rng)
    image = phi(e1_ctx, g)
    for j in range(2):
        expect = g.evaluate((0,), [e1_ctx.rb.maps[0].col(j)])
        sub = e1_ctx.bimodule.tmap[0].matvec(g.value((0,), (j,)))
        assert image.value((0,), (j,)) == [a - b for a, b in zip(expect, sub)]


def test_phi_all_r_when_tmap_zero_weight_zero(e1):
    rb = samples.searched_rb(e1)
    rb0 = RotaBaxterFamily(ZERO, {0: rb.maps[0]})
    # weight-0 with that family is not a valid operator family;
    # build an unvalidated context only to exercise the formula
    bim = zero_bimodule(e1, 2, tmap={0: Mat.zeros(2, 2)})
    ctx = RbfContext(e1, rb0, bim)
    rng = random.Random(19)
    f = random_equivariant(bim, 2, rng)
    image = phi(ctx, f)
    for args in product(range(2), repeat=2):
        expect = f.evaluate((0, 0), [rb0.maps[0].col(args[0]), rb0.maps[0].col(args[1])])
        assert image.value((0, 0), args) == expect


def test_phi_zero_family_zero_tmap(e1):
    rb = zero_rb(e1)
    bim = zero_bimodule(e1, 1, tmap={0: Mat.zeros(1, 1)})
    ctx = RbfContext(e1, rb, bim)
    rng = random.Random(23)
    for n in (1, 2):
        f = random_equivariant(bim, n, rng)
        assert phi(ctx, f).is_zero()


def test_phi_degree_two_matches_subset_oracle(e1_ctx, c2_ctx):
    rng = random.Random(29)
    for ctx in (e1_ctx, c2_ctx):
        for _ in range(3):
            f = random_equivariant(ctx.bimodule, 2, rng)
            assert phi(ctx, f) == phi2_subset_oracle(ctx, f)


def test_phi_degree_three_matches_subset_oracle(e1_ctx):
    """General-degree comparison map against a literal subset enumeration."""
    ctx = e1_ctx
    a, b = ctx.algebra, ctx.bimodule
    om = a.omega
    d, m = a.dim, b.dim_m
    w = ctx.rb.weight
    rng = random.Random(33)
    f = random_equivariant(b, 3, rng)
    image = phi(ctx, f)
    for alpha in om.tuples(3):
        t_all = b.tmap[om.product_of(alpha)]
        for args in product(range(d), repeat=3):
            r_cols = [ctx.rb.maps[alpha[s]].col(args[s]) for s in range(3)]
            e_cols = [a.basis_vector(args[s]) for s in range(3)]
            acc = f.evaluate(alpha, r_cols)
            for size in range(3):
                coeff = w ** (2 - size) if 2 - size else None
                for subset in combinations(range(3), size):
                    vecs = [r_cols[s] if s in subset else e_cols[s] for s in range(3)]
                    term = t_all.matvec(f.evaluate(alpha, vecs))
                    for k in range(m):
                        acc[k] -= term[k] if coeff is None else coeff * term[k]
            assert image.value(alpha, args) == acc


def test_d_combined_zero_and_square(e1_ctx):
    z = CombinedCochain(Cochain.zero(2, 1, 2, 2), Cochain.zero(1, 1, 2, 2))
    assert d_combined(e1_ctx, z, check=False).is_zero()
    rng = random.Random(31)
    for n in (1, 2, 3):
        x = CombinedCochain(
            random_equivariant(e1_ctx.bimodule, n, rng),
            random_equivariant(e1_ctx.bimodule, n - 1, rng),
        )
        dx = d_combined(e1_ctx, x, check=False)
        assert d_combined(e1_ctx, dx, check=False).is_zero()
    m0 = CombinedCochain(Cochain(0, 1, 2, 2, [ONE, Rat(2)]), None)
    d0 = d_combined(e1_ctx, m0, check=False)
    assert d0.rbf == m0.alg.scale(-1)
    assert d_combined(e1_ctx, d0, check=False).is_zero()


def test_jet_order_zero_instances_are_the_base_axioms(e1_ctx, e1):
    """The order-0 convolution identities coincide with the defining laws."""
    from bihomega.cochain import cochain_from_maps
    from bihomega.deformation import _jet_assoc_order, _jet_operator_order
    from bihomega.gerstenhaber import mu_cochain

    mu_all = [mu_cochain(e1_ctx.algebra)]
    r_all = [cochain_from_maps(e1_ctx.algebra.omega, e1_ctx.rb.maps, 2, 2)]
    assert _jet_assoc_order(e1_ctx.algebra, mu_all, 0)
    assert _jet_operator_order(e1_ctx, mu_all, r_all, 0)
    broken = samples.build_e1_broken()
    assert not _jet_assoc_order(broken, [mu_cochain(broken)], 0)
    # note: the identity family happens to satisfy the weight -1 identity
    # (it is the scalar -weight case), so use a genuinely violating family
    bad_r = cochain_from_maps(e1.omega, {0: Mat.from_rows([[0, 0], [1, 0]])}, 2, 2)
    assert not _jet_operator_order(e1_ctx, mu_all, [bad_r], 0)


def test_degree_one_pair_matches_componentwise_oracle(e1_ctx):
    rng = random.Random(37)
    f = random_equivariant(e1_ctx.bimodule, 1, rng)
    g = Cochain(0, 1, 2, 2, [Rat(rng.randint(-2, 2)) for _ in range(2)])
    image = d_combined(e1_ctx, CombinedCochain(f, g), check=False)
    assert image.alg == apply_delta(e1_ctx.bimodule, f, check=False)
    expected_rbf = partial(e1_ctx, g, check=False).add(phi(e1_ctx, f)).scale(-1)
    assert image.rbf == expected_rbf


def test_consistency_of_combined_dims(e1_ctx, c2_ctx):
    for ctx in (e1_ctx, c2_ctx):
        for n in (1, 2, 3):
            assert combined_dim(ctx, n) == ctx.basis(n).dim() + ctx.basis(n - 1).dim()
        assert combined_dim(ctx, 0) == ctx.bimodule.dim_m


def test_rbfa_dims_e0_matches_frozen(e0_ctx):
    reports = rbfa_cohomology_dims(e0_ctx, 2)
    frozen = json.loads(fixture_text("e0_rbfa.json"))
    assert {name: r.to_json() for name, r in reports.items()} == frozen


def test_rbfa_dims_zero1_matches_frozen(zero1_ctx):
    reports = rbfa_cohomology_dims(zero1_ctx, 2)
    frozen = json.loads(fixture_text("zero1_rbfa.json"))
    assert {name: r.to_json() for name, r in reports.items()} == frozen


def test_rbfa_dims_searched_contexts_match_frozen(e1_ctx, c2_ctx):
    for ctx, name in ((e1_ctx, "e1_rbfa.json"), (c2_ctx, "c2_rbfa.json")):
        reports = rbfa_cohomology_dims(ctx, 2)
        frozen = json.loads(fixture_text(name))
        assert {key: r.to_json() for key, r in reports.items()} == frozen
        # these carriers exhibit the degree-0 defect; the report says so
        assert frozen["alg"]["degree0_intersected"]


def test_rbfa_dims_dim_m_zero(e1):
    rb = samples.searched_rb(e1)
    bim = zero_bimodule(e1, 0, tmap={0: Mat.zeros(0, 0)})
    ctx = RbfContext.validated(e1, rb, bim)
    reports = rbfa_cohomology_dims(ctx, 2)
    for rep in reports.values():
        assert rep.dims() == [0, 0, 0]


def test_chain_map_on_contexts(e1_ctx, c2_ctx, e0_ctx, zero1_ctx):
    for ctx in (e1_ctx, c2_ctx, e0_ctx, zero1_ctx):
        assert chain_map_check(ctx, 3) is None


def test_chain_map_trivial_family_cases(e1):
    rb = zero_rb(e1, ONE)
    ctx = RbfContext.validated(e1, rb, regular_bimodule(e1, rb))
    assert chain_map_check(ctx, 3) is None


def test_wrong_comparison_map_detected(e1_ctx):
    """Dropping the no-insertion correction term must break the square."""
    ctx = e1_ctx
    a, b = ctx.algebra, ctx.bimodule
    om = a.omega
    d, m = a.dim, b.dim_m
    w = ctx.rb.weight

    def phi_wrong(f):
        n = f.degree
        out = Cochain.zero(n, om.size, d, m)
        rmaps = ctx.rb.maps
        for alpha in om.tuples(n):
            t_all = b.tmap[om.product_of(alpha)]
            for args in product(range(d), repeat=n):
                acc = f.evaluate(alpha, [rmaps[alpha[s]].col(args[s]) for s in range(n)])
                for size in range(1, n):  # k = 0 term dropped on purpose
                    coeff = w ** (n - 1 - size) if n - 1 - size else ONE
                    for subset in combinations(range(n), size):
                        vecs = [
                            rmaps[alpha[s]].col(args[s]) if s in subset else a.basis_vector(args[s])
                            for s in range(n)
                        ]
                        term = t_all.matvec(f.evaluate(alpha, vecs))
                        for k in range(m):
                            acc[k] -= coeff * term[k]
                base = out.block_base(alpha) + sum(
                    x * d ** (n - 1 - i) for i, x in enumerate(args)
                ) * m
                for k in range(m):
                    out.coords[base + k] = acc[k]
        return out

    sb = ctx.star_bimodule()
    mismatch = False
    n = 1
    basis = ctx.basis(n)
    alg_op = delta_op(b, n)
    star_op = delta_op(sb, n)
    for j in range(basis.dim()):
        f = basis.cochain(j)
        lhs = star_op.apply_dense(phi_wrong(f).coords)
        delta_f = Cochain(n + 1, om.size, d, m, alg_op.apply_dense(f.coords))
        rhs = phi_wrong(delta_f)
        if lhs != rhs.coords:
            mismatch = True
    assert mismatch


def test_combined_kernel_split_characterization(e1_ctx):
    """(f, h) in ker d^2 iff delta f = 0 and the operator part matches."""
    ctx = e1_ctx
    for x in combined_kernel(ctx, 2):
        df = apply_delta(ctx.bimodule, x.alg, check=False)
        assert df.is_zero()
        lhs = partial(ctx, x.rbf, check=False)
        rhs = phi(ctx, x.alg).scale(-1)
        assert lhs == rhs
    # and conversely: any pair passing both tests lies in the kernel
    mat = combined_raw_matrix(ctx, 2)
    kb = kernel_basis(mat)
    assert kb.cols == len(combined_kernel(ctx, 2))
