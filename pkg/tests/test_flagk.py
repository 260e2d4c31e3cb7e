import random

import numpy as np
import pytest

from hodgkin import cartan, flagk, laurent, linalg
from hodgkin.errors import CertificationError
from hodgkin.laurent import LaurentPoly

A1_GRAM = [[1, 2], [2, 3]]
A1_MULT = [[0, -1], [1, 2]]


def test_a1_goldens(pipeline):
    module = pipeline("A1").module
    assert module.basis_weights == ((0,), (1,))
    assert module.gram.tolist() == A1_GRAM
    assert module.gram_det == -1
    assert module.mult_matrices[0].tolist() == A1_MULT
    prod = linalg.dot_exact(module.mult_matrices[0], module.mult_matrices_inv[0])
    assert prod.tolist() == [[1, 0], [0, 1]]


def test_basis_has_group_order_and_unit(pipeline):
    for name in ("A2", "B2", "A1xA1"):
        run = pipeline(name)
        module = run.module
        assert module.rank == run.weyl.order
        assert module.gram_det in (1, -1)
        # the unit is the class of the zero weight
        zero = tuple(0 for _ in range(run.datum.rank))
        assert module.coords(LaurentPoly.monomial(zero)).tolist() == \
            module.unit_coords.tolist()


def test_pairing_routes_agree():
    # the recursive divided-difference route against the closed form
    datum = cartan.build_root_datum(cartan.parse_type("A2"))
    weyl = cartan.generate_weyl(datum)
    rng = random.Random(31)
    for _ in range(25):
        f = LaurentPoly.monomial(tuple(rng.randint(-2, 2) for _ in range(2)))
        g = LaurentPoly.monomial(tuple(rng.randint(-2, 2) for _ in range(2)))
        assert flagk.pairing(datum, weyl, f, g) == \
            flagk.pairing_bilinear(datum, f, g)


def test_steinberg_enumeration_size():
    for name in ("A2", "B2", "G2"):
        datum = cartan.build_root_datum(cartan.parse_type(name))
        weyl = cartan.generate_weyl(datum)
        weights = flagk.steinberg_weights(datum, weyl)
        assert len(weights) == weyl.order
        assert len(set(weights)) == weyl.order


def test_coords_of_basis_monomials_are_unit_vectors(pipeline):
    module = pipeline("B2").module
    for j, b in enumerate(module.basis_weights):
        coords = module.coords(LaurentPoly.monomial(b))
        expected = [int(i == j) for i in range(module.rank)]
        assert coords.tolist() == expected


def test_mult_matrix_is_monomial_shift(pipeline):
    run = pipeline("A2")
    module = run.module
    rng = random.Random(32)
    for _ in range(10):
        b = module.basis_weights[rng.randrange(module.rank)]
        i = rng.randrange(2)
        shifted = tuple(x + int(j == i) for j, x in enumerate(b))
        lhs = linalg.dot_exact(module.mult_matrices[i],
                               module.coords(LaurentPoly.monomial(b)))
        assert lhs.tolist() == module.coords(LaurentPoly.monomial(shifted)).tolist()


def test_mult_matrices_commute_and_are_units(pipeline):
    module = pipeline("B2").module
    m0, m1 = module.mult_matrices
    assert linalg.dot_exact(m0, m1).tolist() == linalg.dot_exact(m1, m0).tolist()
    for m in module.mult_matrices:
        assert linalg.det_exact(m) in (1, -1)


def test_characters_act_as_scalars(pipeline):
    run = pipeline("A2")
    module = run.module
    for chi, dim in zip(run.chars.chars, run.chars.dims):
        op = np.zeros((module.rank, module.rank), dtype=object)
        for exps, coeff in chi.terms.items():
            op = op + coeff * module.monomial_operator(exps).astype(object)
        assert np.array_equal(op, dim * np.eye(module.rank, dtype=object))


def test_augmentation_operators_are_nilpotent(pipeline):
    run = pipeline("A2")
    module = run.module
    bound = cartan.positive_root_count(run.datum.ctype) + 1
    for m in module.mult_matrices:
        b = m - np.eye(module.rank, dtype=np.int64)
        power = np.eye(module.rank, dtype=object)
        for _ in range(bound):
            power = linalg.dot_exact(power, b)
        assert not np.any(power)


def test_module_product_is_commutative_and_associative(pipeline):
    module = pipeline("B2").module
    rng = random.Random(33)
    for _ in range(10):
        x = np.array([rng.randint(-3, 3) for _ in range(module.rank)])
        y = np.array([rng.randint(-3, 3) for _ in range(module.rank)])
        z = np.array([rng.randint(-3, 3) for _ in range(module.rank)])
        xy = module.multiply_coords(x, y)
        assert xy.tolist() == module.multiply_coords(y, x).tolist()
        assert module.multiply_coords(xy, z).tolist() == \
            module.multiply_coords(x, module.multiply_coords(y, z)).tolist()
        assert module.multiply_coords(module.unit_coords, x).tolist() == \
            x.astype(object).tolist()


def test_degenerate_basis_is_rejected():
    datum = cartan.build_root_datum(cartan.parse_type("A1"))
    weyl = cartan.generate_weyl(datum)
    chars = laurent.fundamental_characters(datum, weyl)
    with pytest.raises(CertificationError) as info:
        flagk.build_module(datum, weyl, chars, basis_weights=((0,), (0,)))
    assert info.value.check == "gram-unimodular"
    assert info.value.witness["determinant"] == 0


def test_selected_basis_is_certified_for_all_small_types():
    for name in ("A1", "A2", "A3", "B2", "G2", "A1xA1", "B3", "C3"):
        datum = cartan.build_root_datum(cartan.parse_type(name))
        weyl = cartan.generate_weyl(datum)
        weights, source = flagk.select_basis(datum, weyl)
        assert len(weights) == weyl.order, name
        assert source == "descent-twisted", name
