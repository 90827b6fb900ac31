import random
from itertools import product

import pytest

from bihomega.algebra import validate_algebra
from bihomega.bimodule import regular_bimodule
from bihomega.cochain import Cochain, apply_delta, equivariant_basis, random_equivariant
from bihomega.errors import MalformedInputError
from bihomega.gerstenhaber import (
    algebra_with_product,
    bracket,
    circ_full,
    circ_i,
    delta_via_bracket,
    identity_cochain,
    mc_residual,
    mu_cochain,
)
from bihomega.rationals import ONE, Rat


def mu_circ1_mu_oracle(a):
    """Direct transcription: value mu(mu(x, y), qmap(z)) at each cell."""
    om = a.omega
    d = a.dim
    out = Cochain.zero(3, om.size, d, d)
    for alpha in om.tuples(3):
        x, y, z = alpha
        merged = (om.mul(x, y), z)
        for args in product(range(d), repeat=3):
            inner = a.mul_basis((x, y), args[0], args[1])
            val = a.mul_vec(merged, inner, a.qmap[z].col(args[2]))
            base = out.block_base(alpha) + (args[0] * d * d + args[1] * d + args[2]) * d
            for k in range(d):
                out.coords[base + k] = val[k]
    return out


def test_identity_insertion(e1, e1_regular):
    rng = random.Random(3)
    idc = identity_cochain(e1)
    for n in (1, 2, 3):
        f = random_equivariant(e1_regular, n, rng)
        for i in range(1, n + 1):
            assert circ_i(e1, f, idc, i, check=False) == f


def test_zero_insertion(e1, e1_regular):
    z = Cochain.zero(2, 1, 2, 2)
    g = random_equivariant(e1_regular, 2, random.Random(4))
    assert circ_i(e1, z, g, 1, check=False).is_zero()


def test_mu_circ1_mu_matches_direct_oracle(e1):
    mu = mu_cochain(e1)
    assert circ_i(e1, mu, mu, 1, check=False) == mu_circ1_mu_oracle(e1)


def test_circ_slot_out_of_range(e1):
    mu = mu_cochain(e1)
    with pytest.raises(MalformedInputError):
        circ_i(e1, mu, mu, 3)


def test_circ_full_collapses(e1, e1_regular):
    rng = random.Random(5)
    idc = identity_cochain(e1)
    mu = mu_cochain(e1)
    for n in (1, 2, 3):
        f = random_equivariant(e1_regular, n, rng)
        assert circ_full(e1, f, [idc] * n, check=False) == f
    g = random_equivariant(e1_regular, 2, rng)
    f1 = random_equivariant(e1_regular, 1, rng)
    assert circ_full(e1, f1, [g], check=False) == circ_i(e1, f1, g, 1, check=False)
    assert circ_full(e1, mu, [mu, idc], check=False) == circ_i(e1, mu, mu, 1, check=False)


def circ_full_cell_oracle(a, f, gs, alpha, args):
    """Literal transcription: block values post-composed with map powers at
    the merged block index, then fed to f at the tuple of block products."""
    d = a.dim
    arities = [g.degree for g in gs]
    starts = []
    pos = 0
    for ar in arities:
        starts.append(pos)
        pos += ar
    n = f.degree
    vectors = []
    merged = []
    for l in range(n):
        block = alpha[starts[l] : starts[l] + arities[l]]
        prod = a.omega.product_of(block)
        merged.append(prod)
        v = gs[l].value(block, args[starts[l] : starts[l] + arities[l]])
        q_exp = sum(arities[t] - 1 for t in range(l))
        p_exp = sum(arities[t] - 1 for t in range(l + 1, n))
        v = a.q_power(prod, q_exp).matvec(v)
        v = a.p_power(prod, p_exp).matvec(v)
        vectors.append(v)
    return f.evaluate(tuple(merged), vectors)


def test_circ_full_mixed_arities_matches_cell_oracle(c2_ctx):
    from itertools import product as iproduct

    a = c2_ctx.algebra
    reg = c2_ctx.bimodule
    rng = random.Random(12)
    f = random_equivariant(reg, 2, rng)
    g = random_equivariant(reg, 2, rng)
    h = random_equivariant(reg, 3, rng)
    out = circ_full(a, f, [g, h], check=False)
    assert out.degree == 5
    for alpha in a.omega.tuples(5):
        for args in iproduct(range(a.dim), repeat=5):
            expected = circ_full_cell_oracle(a, f, [g, h], alpha, args)
            assert out.value(alpha, args) == expected


def test_bracket_of_product_with_itself(e1):
    mu = mu_cochain(e1)
    expected = circ_i(e1, mu, mu, 1, check=False).sub(circ_i(e1, mu, mu, 2, check=False)).scale(2)
    assert bracket(e1, mu, mu, check=False) == expected


def test_bracket_with_zero(e1, e1_regular):
    f = random_equivariant(e1_regular, 2, random.Random(6))
    z = Cochain.zero(3, 1, 2, 2)
    assert bracket(e1, f, z, check=False).is_zero()


def test_bracket_product_with_arity_three_expansion(e1, e1_regular):
    """Corrected five-term expansion (the four-term variant quoted in the
    build notes breaks graded skew-symmetry and is rejected)."""
    mu = mu_cochain(e1)
    f = random_equivariant(e1_regular, 3, random.Random(7))
    expected = (
        circ_i(e1, mu, f, 1, check=False)
        .add(circ_i(e1, mu, f, 2, check=False))
        .sub(circ_i(e1, f, mu, 1, check=False))
        .add(circ_i(e1, f, mu, 2, check=False))
        .sub(circ_i(e1, f, mu, 3, check=False))
    )
    assert bracket(e1, mu, f, check=False) == expected


def test_graded_skew_and_jacobi(e1, e1_regular, c2_ctx):
    rng = random.Random(8)
    cases = [(e1, e1_regular), (c2_ctx.algebra, c2_ctx.bimodule)]
    for a, reg in cases:
        for _ in range(6):
            nf, ng, nh = (rng.randint(1, 3) for _ in range(3))
            f = random_equivariant(reg, nf, rng)
            g = random_equivariant(reg, ng, rng)
            h = random_equivariant(reg, nh, rng)
            df, dg, dh = nf - 1, ng - 1, nh - 1
            sign = -ONE if (df * dg) % 2 == 0 else ONE
            assert bracket(a, f, g, check=False) == bracket(a, g, f, check=False).scale(sign)
            t1 = bracket(a, f, bracket(a, g, h, check=False), check=False).scale(
                Rat(-1) ** ((df * dh) % 2)
            )
            t2 = bracket(a, g, bracket(a, h, f, check=False), check=False).scale(
                Rat(-1) ** ((dg * df) % 2)
            )
            t3 = bracket(a, h, bracket(a, f, g, check=False), check=False).scale(
                Rat(-1) ** ((dh * dg) % 2)
            )
            assert t1.add(t2).add(t3).is_zero()


def test_mc_residual_of_valid_products(e1, zero1):
    assert mc_residual(e1, mu_cochain(e1), check=False).is_zero()
    assert mc_residual(zero1, mu_cochain(zero1), check=False).is_zero()


def test_mc_residual_perturbed_product_fails_both_ways(e1):
    mu = mu_cochain(e1)
    basis2 = equivariant_basis(regular_bimodule(e1), 2)
    saw_break = False
    for j in range(basis2.dim()):
        perturbed = mu.add(basis2.cochain(j))
        residual = mc_residual(e1, perturbed, check=False)
        valid = validate_algebra(algebra_with_product(e1, perturbed)) is None
        assert residual.is_zero() == valid
        saw_break = saw_break or not valid
    assert saw_break


def test_mc_equivalence_random(e1, e1_regular):
    rng = random.Random(9)
    agree = 0
    for _ in range(40):
        f = random_equivariant(e1_regular, 2, rng)
        residual_zero = mc_residual(e1, f, check=False).is_zero()
        valid = validate_algebra(algebra_with_product(e1, f)) is None
        assert residual_zero == valid
        agree += 1
    assert agree == 40


def test_delta_via_bracket_equals_apply_delta(e1, e1_regular, c2_ctx):
    for a, reg in ((e1, e1_regular), (c2_ctx.algebra, c2_ctx.bimodule)):
        for n in (1, 2, 3):
            basis = equivariant_basis(reg, n)
            for j in range(basis.dim()):
                f = basis.cochain(j)
                assert delta_via_bracket(a, f, check=False) == apply_delta(reg, f, check=False)


def test_delta_via_bracket_collapse_cases(e1, e1_regular):
    z = Cochain.zero(1, 1, 2, 2)
    assert delta_via_bracket(e1, z, check=False).is_zero()
    ident = identity_cochain(e1)
    assert delta_via_bracket(e1, ident, check=False) == mu_cochain(e1)
