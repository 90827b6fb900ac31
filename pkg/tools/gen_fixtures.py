#!/usr/bin/env python3
"""Regenerate every fixture under fixtures/ deterministically.

Run from the repository root:  python tools/gen_fixtures.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from bihomega import samples
from bihomega.algebra import zero_rb
from bihomega.bimodule import regular_bimodule
from bihomega.cochain import Cochain, cohomology_dims, delta_matrix, equivariant_basis
from bihomega.deformation import DeformationJet, rigidity_report
from bihomega.extension import CocyclePair, build_extension
from bihomega.linalg import Mat
from bihomega.monoid import trivial_monoid
from bihomega.rationals import format_rational
from bihomega.rbf import CombinedCochain, combined_kernel, d_combined, rbfa_cohomology_dims
from bihomega.search import first_nonscalar, search_nijenhuis
from bihomega.serialization import WorkbenchFile, serialize_workbench

FIXTURES = ROOT / "fixtures"


def write(name: str, text: str):
    path = FIXTURES / name
    path.write_text(text, encoding="utf-8")
    print("wrote", path.relative_to(ROOT))


def write_json(name: str, obj):
    write(name, json.dumps(obj, sort_keys=True, indent=2) + "\n")


def main():
    FIXTURES.mkdir(exist_ok=True)
    om = trivial_monoid()

    e0 = samples.build_e0()
    write("e0.json", serialize_workbench(WorkbenchFile(om, algebra=e0)))

    zero1 = samples.build_zero1()
    write("zero1.json", serialize_workbench(WorkbenchFile(om, algebra=zero1)))

    e1 = samples.build_e1()
    write("e1.json", serialize_workbench(WorkbenchFile(om, algebra=e1)))

    e1_broken = samples.build_e1_broken()
    write("e1_broken.json", serialize_workbench(WorkbenchFile(om, algebra=e1_broken)))

    bim = samples.build_e1_bimodule()
    write(
        "e1_bimodule.json",
        serialize_workbench(WorkbenchFile(om, algebra=bim.base, bimodule=bim)),
    )

    sd = samples.build_e1_semidirect()
    write("e1_semidirect.json", serialize_workbench(WorkbenchFile(om, algebra=sd)))

    c2 = samples.build_c2_example(0)
    write("c2.json", serialize_workbench(WorkbenchFile(c2.omega, algebra=c2)))

    ctx = samples.e1_rbf_context()
    write(
        "e1_rbf.json",
        serialize_workbench(
            WorkbenchFile(om, algebra=ctx.algebra, rota_baxter=ctx.rb, bimodule=ctx.bimodule)
        ),
    )

    ctx_c2 = samples.c2_rbf_context()
    write(
        "c2_rbf.json",
        serialize_workbench(
            WorkbenchFile(
                ctx_c2.algebra.omega,
                algebra=ctx_c2.algebra,
                rota_baxter=ctx_c2.rb,
                bimodule=ctx_c2.bimodule,
            )
        ),
    )

    ctx_e0 = samples.e0_rbf_context()
    write(
        "e0_rbf.json",
        serialize_workbench(
            WorkbenchFile(om, algebra=ctx_e0.algebra, rota_baxter=ctx_e0.rb, bimodule=ctx_e0.bimodule)
        ),
    )

    ctx_z = samples.zero1_rbf_context()
    write(
        "zero1_rbf.json",
        serialize_workbench(
            WorkbenchFile(om, algebra=ctx_z.algebra, rota_baxter=ctx_z.rb, bimodule=ctx_z.bimodule)
        ),
    )

    # frozen oracle values -------------------------------------------------
    reg_e1 = regular_bimodule(e1)
    basis1 = equivariant_basis(reg_e1, 1)
    write_json("e1_c1.json", {"dim_c1": basis1.dim()})

    rep = cohomology_dims(reg_e1, 2)
    write_json("e1_cohomology.json", rep.to_json())

    dm1_e0 = delta_matrix(regular_bimodule(e0), 1)
    write_json(
        "e0_delta1.json",
        {"matrix": [[format_rational(dm1_e0.at(i, j)) for j in range(dm1_e0.cols)] for i in range(dm1_e0.rows)]},
    )

    reports = rbfa_cohomology_dims(ctx_e0, 2)
    write_json("e0_rbfa.json", {name: r.to_json() for name, r in reports.items()})

    reports_z = rbfa_cohomology_dims(ctx_z, 2)
    write_json("zero1_rbfa.json", {name: r.to_json() for name, r in reports_z.items()})

    reports_e1 = rbfa_cohomology_dims(ctx, 2)
    write_json("e1_rbfa.json", {name: r.to_json() for name, r in reports_e1.items()})

    reports_c2 = rbfa_cohomology_dims(ctx_c2, 2)
    write_json("c2_rbfa.json", {name: r.to_json() for name, r in reports_c2.items()})

    write_json(
        "rigidity.json",
        {
            "e0_rbf": rigidity_report(ctx_e0).to_json(),
            "zero1_rbf": rigidity_report(ctx_z).to_json(),
            "e1_rbf": rigidity_report(ctx).to_json(),
        },
    )

    # delta_matrix(1) of the E1 regular complex, in basis coordinates
    dm1_e1 = delta_matrix(reg_e1, 1)
    write_json(
        "e1_delta1.json",
        {"matrix": [[format_rational(dm1_e1.at(i, j)) for j in range(dm1_e1.cols)] for i in range(dm1_e1.rows)]},
    )

    # Nijenhuis fixture: first non-scalar hit of the bounded search on E1
    nij = first_nonscalar(search_nijenhuis(e1, 1))
    write(
        "e1_nijenhuis.json",
        serialize_workbench(WorkbenchFile(om, algebra=e1, nijenhuis=nij.maps)),
    )

    # cocycle pair and jet fixtures on the searched context
    kers = combined_kernel(ctx, 2)
    pair = CocyclePair(kers[0].alg, kers[0].rbf)
    write(
        "e1_rbf_pair.json",
        serialize_workbench(
            WorkbenchFile(
                om, algebra=ctx.algebra, rota_baxter=ctx.rb, bimodule=ctx.bimodule,
                cocycle_pair=pair,
            )
        ),
    )
    jet = DeformationJet(1, [kers[0].alg], [kers[0].rbf])
    write(
        "e1_rbf_jet.json",
        serialize_workbench(
            WorkbenchFile(om, algebra=ctx.algebra, rota_baxter=ctx.rb, bimodule=ctx.bimodule, jet=jet)
        ),
    )

    build = build_extension(ctx, pair)
    write(
        "e1_rbf_extension.json",
        serialize_workbench(
            WorkbenchFile(
                om, algebra=ctx.algebra, rota_baxter=ctx.rb, bimodule=ctx.bimodule,
                extension=build.presentation,
            )
        ),
    )
    # a cohomologous twin: shift by the differential of a degree-1 cochain
    eta = equivariant_basis(ctx.bimodule, 1).cochain(0)
    shift = d_combined(ctx, CombinedCochain(eta, Cochain.zero(0, om.size, 2, 2)), check=False)
    pair2 = CocyclePair(pair.psi.add(shift.alg), pair.chi.add(shift.rbf))
    build2 = build_extension(ctx, pair2)
    write(
        "e1_rbf_extension2.json",
        serialize_workbench(
            WorkbenchFile(
                om, algebra=ctx.algebra, rota_baxter=ctx.rb, bimodule=ctx.bimodule,
                extension=build2.presentation,
            )
        ),
    )

    # twist input for the CLI: diagonal algebra with a swap automorphism
    diag2 = samples.build_diag(2)
    swap = Mat.from_rows([[0, 1], [1, 0]])
    write(
        "diag2_twist.json",
        serialize_workbench(
            WorkbenchFile(
                om, algebra=diag2, rota_baxter=zero_rb(diag2),
                twist_p={0: swap}, twist_q={0: swap},
            )
        ),
    )


if __name__ == "__main__":
    main()
