import json
from math import comb

import numpy as np
import pytest

from hodgkin import torring
from hodgkin.errors import CertificationError

# change-of-basis determinants frozen from the first certified builds
EXPECTED_DETS = {
    "A1": (1, -1),
    "A2": (1, 1, 1),
    "B2": (1, -1, -1),
    "G2": (1, 1, -1),
    "A1xA1": (1, 1, 1),
}


def test_merge_sign():
    assert torring._merge_sign((0,), (1,)) == (1, (0, 1))
    assert torring._merge_sign((1,), (0,)) == (-1, (0, 1))
    assert torring._merge_sign((), (2,)) == (1, (2,))
    assert torring._merge_sign((0, 2), (1,)) == (-1, (0, 1, 2))


def test_a1_generator_golden(pipeline):
    run = pipeline("A1")
    gens = run.ring.generators
    assert len(gens) == 1
    z = gens[0]
    assert z.degree == 1
    assert z.chain.tolist() == [-1, 1]
    assert z.homology_coords.tolist() == [-1]


def test_unit_class_generates_degree_zero(pipeline):
    for name in ("A1", "A2"):
        run = pipeline(name)
        one = run.ring.unit()
        assert one.degree == 0
        assert one.homology_coords.tolist() == [1]


def test_unit_is_neutral(pipeline):
    run = pipeline("A2")
    ring = run.ring
    one = ring.unit()
    for z in ring.generators:
        prod = ring.product(one, z)
        assert prod.degree == z.degree
        assert prod.chain.tolist() == z.chain.tolist()
        assert prod.homology_coords.tolist() == z.homology_coords.tolist()


def test_generators_are_cycles(pipeline):
    run = pipeline("B2")
    d1 = run.chain_complex.boundary(1)
    for z in run.ring.generators:
        assert not np.any(d1 @ z.chain)


def test_squares_vanish_on_chains(pipeline):
    run = pipeline("B2")
    ring = run.ring
    for z in ring.generators:
        sq = ring.product(z, z)
        assert sq.degree == 2
        assert not np.any(sq.chain)


def test_anticommutation_on_chains(pipeline):
    run = pipeline("A2")
    ring = run.ring
    z0, z1 = ring.generators
    ab = ring.product(z0, z1)
    ba = ring.product(z1, z0)
    assert ab.chain.tolist() == [-x for x in ba.chain.tolist()]
    assert ab.homology_coords.tolist() == \
        [-x for x in ba.homology_coords.tolist()]
    assert np.any(ab.homology_coords)  # the product class is nonzero


def test_product_past_top_degree_is_zero(pipeline):
    run = pipeline("A1")
    ring = run.ring
    z = ring.generators[0]
    top = ring.product(z, ring.product(z, z))
    assert top.degree == 3
    assert top.chain.size == 0


def test_product_rejects_foreign_chains(pipeline):
    run = pipeline("A2")
    ring = run.ring
    z = ring.generators[0]
    alien = torring.TorClass(degree=1, chain=np.zeros(3, dtype=np.int64),
                             homology_coords=np.zeros(2, dtype=np.int64))
    with pytest.raises(ValueError):
        ring.product(z, alien)


def test_certification_dets_golden(pipeline):
    for name, dets in EXPECTED_DETS.items():
        run = pipeline(name)
        cert = run.certificate
        assert cert is not None, name
        assert cert.dets == dets, name
        n = run.datum.rank
        assert cert.squares_checked == n
        assert cert.pairs_checked == comb(n, 2)


def test_certify_rejects_degenerate_generators(pipeline):
    run = pipeline("A2")
    honest = run.ring
    clone = torring.TorRing(module=honest.module, homology=honest.homology,
                            generators=(honest.generators[0],
                                        honest.generators[0]))
    with pytest.raises(CertificationError) as info:
        torring.certify_exterior(clone)
    assert info.value.check == "exterior-change-of-basis"
    assert "determinant" in info.value.witness


def test_report_assembly(pipeline):
    run = pipeline("A2")
    checks = [{"name": "demo", "pass": True}]
    report = torring.assemble_report("A2", run.module, run.homology,
                                     run.certificate, checks,
                                     {"total": 1.0}, "0.0-test")
    assert report.cartan_type == "A2"
    assert report.weyl_order == 6
    assert [row["rank"] for row in report.tor_table] == [1, 2, 1]
    assert [row["rank"] for row in report.e2_table] == [1, 2, 1]
    assert report.k0_rank == 2 and report.k1_rank == 2
    assert report.exterior_certified
    payload = report.to_dict()
    assert json.loads(json.dumps(payload)) == payload
    assert payload["versions"]["format"] == torring.FORMAT_VERSION
