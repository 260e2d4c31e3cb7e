"""A free integer model of the K-module of the flag variety.

The module is spanned by |W| monomial classes ``e^{lambda_w}``; the
bilinear pairing ``<f, g> = augmentation(D_{w0}(f g))`` (push-pull along
the flag bundle) is exactly computable, and a basis is certified by a
unimodular Gram matrix — the freeness certificate that everything
downstream leans on.  Multiplication by each variable ``t_i`` then
becomes an integer matrix, turning the whole representation-ring quotient
into finite exact linear algebra.

Two routes compute the pairing: the contractual composite of Demazure
operators (:func:`pairing`), and an internal closed form used for bulk
construction work — on monomials the pairing is the Weyl dimension
polynomial evaluated at the summed exponents,

    <e^a, e^b> = prod_{alpha^vee > 0} <a + b + rho, alpha^vee> / <rho, alpha^vee>,

which the property suite cross-checks against the Demazure route.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import cartan, laurent, linalg
from .cartan import RootDatum, Vector, WeylGroup
from .errors import CertificationError, DefectError, ResourceGuardError
from .laurent import CharacterSet, LaurentPoly

#: Above this many basis elements the full multiplication table is not
#: materialized; products go through cached monomial operators instead.
TABLE_LIMIT = 200


# --- the pairing ------------------------------------------------------------

def pairing(datum: RootDatum, weyl: WeylGroup, f: LaurentPoly, g: LaurentPoly) -> int:
    """Integral pairing ``augmentation(demazure_word(longest_word, f*g))``.

    Symmetric, biadditive, and invariant under multiplying either
    argument by a Weyl-invariant element of augmentation d (which scales
    the value by d) — that is what lets it descend to the quotient.
    """
    return laurent.augmentation(
        laurent.demazure_word(datum, weyl.longest_word, f * g)
    )


def pairing_bilinear(datum: RootDatum, f: LaurentPoly, g: LaurentPoly) -> int:
    """Same value through the closed form, without Demazure operators."""
    total = 0
    for ea, ca in f.terms.items():
        for eb, cb in g.terms.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            total += ca * cb * laurent.signed_weight_dimension(datum, key)
    return total


# --- basis selection --------------------------------------------------------

def steinberg_weights(datum: RootDatum, weyl: WeylGroup) -> tuple[Vector, ...]:
    """Descent-twisted weights ``w(-sum of omega_i over descents of w)``.

    One weight per Weyl element; for every supported family their Gram
    matrix turns out unimodular, which :func:`select_basis` certifies.
    """
    n = datum.rank
    out = []
    for w in weyl.elements:
        descents = [
            i for i in range(n)
            if cartan._root_sign(datum, cartan.mat_vec(w, datum.simple_roots[i])) < 0
        ]
        s = tuple(-1 if i in descents else 0 for i in range(n))
        out.append(cartan.mat_vec(w, s))
    return tuple(out)


def _ball_weights(rank: int, radius: int):
    """All weights with sup-norm <= radius, canonically ordered."""
    from itertools import product
    weights = list(product(range(-radius, radius + 1), repeat=rank))
    weights.sort(key=lambda v: (max(abs(x) for x in v) if v else 0, v))
    return weights


def _gram_matrix(datum: RootDatum, weights) -> np.ndarray:
    rows = [
        [laurent.signed_weight_dimension(datum, tuple(x + y for x, y in zip(a, b)))
         for b in weights]
        for a in weights
    ]
    return linalg._shrink(np.array(rows, dtype=object))


def _certify_gram(datum: RootDatum, weights):
    """(gram, det, gram_inv) when the Gram matrix is unimodular, else None.

    Unimodularity is certified through the exact integer inverse: an
    integer X with G @ X == I forces det(G) * det(X) == 1 over the
    integers, hence det(G) in {+1, -1}; the sign is then read off one
    modular determinant.
    """
    gram = _gram_matrix(datum, weights)
    try:
        gram_inv = linalg.inverse_unimodular(gram)
    except ValueError:
        return None
    p = linalg.crt_primes(1)[0]
    residue = linalg.det_mod(gram, p)
    det = 1 if residue == 1 else -1
    if residue not in (1, p - 1):
        raise DefectError("unimodular Gram with determinant residue != +-1")
    return gram, det, gram_inv


def _select_certified(datum: RootDatum, weyl: WeylGroup, max_radius: int = 3):
    """(weights, source, certificate) — the certificate from :func:`_certify_gram`."""
    m = weyl.order
    seeds = steinberg_weights(datum, weyl)
    if len(set(seeds)) == m:
        basis = tuple(sorted(set(seeds)))
        cert = _certify_gram(datum, basis)
        if cert is not None:
            return basis, "descent-twisted", cert
    basis, source = _greedy_ball_basis(datum, weyl, max_radius)
    cert = _certify_gram(datum, basis)
    if cert is None:
        raise DefectError("basis with determinant +-1 failed the inverse certificate")
    return basis, source, cert


def select_basis(datum: RootDatum, weyl: WeylGroup,
                 max_radius: int = 3) -> tuple[tuple[Vector, ...], str]:
    """Choose |W| monomial weights with unimodular Gram matrix.

    The descent-twisted candidates are tried first and accepted once
    their Gram matrix is certified unimodular.  If that certificate
    fails, a greedy search over growing sup-norm balls takes over:
    candidates are accepted while they increase the rank (checked modulo
    a large prime), then local swaps try to push |det| down to 1.
    Exhausting the ball raises :class:`ResourceGuardError`.

    Returns the weights in canonical (lexicographic) order together with
    a label recording which strategy produced them.
    """
    weights, source, _ = _select_certified(datum, weyl, max_radius)
    return weights, source


def _greedy_ball_basis(datum: RootDatum, weyl: WeylGroup,
                       max_radius: int) -> tuple[tuple[Vector, ...], str]:
    m = weyl.order
    p = 1_073_741_789  # < 2^30 so modular row operations stay in int64
    for radius in range(1, max_radius + 1):
        pool = _ball_weights(datum.rank, radius)
        selected: list[Vector] = []
        # greedy rank growth on the pairing matrix against the whole pool
        echelon: list[np.ndarray] = []
        pivots: list[int] = []
        for cand in pool:
            if len(selected) == m:
                break
            row = np.array(
                [laurent.signed_weight_dimension(
                    datum, tuple(x + y for x, y in zip(cand, other))) % p
                 for other in pool],
                dtype=np.int64)
            for erow, piv in zip(echelon, pivots):
                factor = row[piv]
                if factor:
                    row = (row - factor * erow) % p
            nz = np.nonzero(row)[0]
            if nz.size == 0:
                continue
            piv = int(nz[0])
            row = (row * pow(int(row[piv]), p - 2, p)) % p
            echelon.append(row)
            pivots.append(piv)
            selected.append(cand)
        if len(selected) < m:
            continue
        basis = sorted(selected)
        det = linalg.det_exact(_gram_matrix(datum, basis))
        if det in (1, -1):
            return tuple(basis), f"greedy-ball-r{radius}"
        # local improvement: swap one member for one outsider when that
        # strictly shrinks |det|
        outsiders = [wt for wt in pool if wt not in set(basis)]
        improved = True
        while abs(det) != 1 and improved:
            improved = False
            for pos in range(m):
                for cand in outsiders:
                    trial = list(basis)
                    trial[pos] = cand
                    trial_det = linalg.det_exact(_gram_matrix(datum, sorted(trial)))
                    if trial_det != 0 and abs(trial_det) < abs(det):
                        basis = sorted(trial)
                        det = trial_det
                        improved = True
                        break
                if improved:
                    break
        if det in (1, -1):
            return tuple(basis), f"greedy-ball-r{radius}"
    raise ResourceGuardError(
        f"no unimodular monomial basis found within sup-norm radius {max_radius}",
        required=max_radius + 1,
    )


# --- the module -------------------------------------------------------------

@dataclass
class FlagKModule:
    """Exact data of the finite free model.

    ``basis_weights`` are canonically ordered; ``gram`` is the pairing
    matrix with determinant ``gram_det`` in {+1, -1}; ``gram_inv`` is its
    exact integer inverse.  ``mult_matrices[i]`` is multiplication by
    ``t_i`` in basis coordinates (with ``mult_matrices_inv[i]`` its
    inverse), and ``mult_table`` — when materialized — stacks the left
    multiplication operator of every basis class.
    """

    datum: RootDatum
    weyl: WeylGroup
    chars: CharacterSet
    basis_weights: tuple[Vector, ...]
    basis_source: str
    gram: np.ndarray
    gram_det: int
    gram_inv: np.ndarray
    mult_matrices: tuple[np.ndarray, ...]
    mult_matrices_inv: tuple[np.ndarray, ...]
    unit_coords: np.ndarray
    mult_table: np.ndarray | None
    _rhs_cache: dict = field(default_factory=dict, repr=False)
    _coords_cache: dict = field(default_factory=dict, repr=False)
    _operator_cache: dict = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return len(self.basis_weights)

    # -- coordinates ----------------------------------------------------

    def _rhs_vector(self, exps: Vector) -> np.ndarray:
        """Pairings of ``e^exps`` against every basis monomial."""
        cached = self._rhs_cache.get(exps)
        if cached is None:
            cached = linalg.as_int_array(
                [laurent.signed_weight_dimension(
                    self.datum, tuple(x + y for x, y in zip(exps, b)))
                 for b in self.basis_weights])
            self._rhs_cache[exps] = cached
        return cached

    def monomial_coords(self, exps: Vector) -> np.ndarray:
        cached = self._coords_cache.get(exps)
        if cached is None:
            cached = linalg.dot_exact(self.gram_inv, self._rhs_vector(exps))
            self._coords_cache[exps] = cached
        return cached

    def coords(self, f: LaurentPoly) -> np.ndarray:
        """Coordinates of the class of ``f`` in the chosen basis.

        Exact by construction: the Gram matrix is unimodular, so the
        normal-equation solve has a unique integer solution.
        """
        out = np.zeros(self.rank, dtype=object)
        for exps, coeff in f.terms.items():
            out = out + coeff * self.monomial_coords(exps).astype(object)
        return linalg._shrink(out)

    # -- multiplication -------------------------------------------------

    def monomial_operator(self, exps: Vector) -> np.ndarray:
        """Matrix of multiplication by ``e^exps`` on basis coordinates."""
        exps = tuple(int(x) for x in exps)
        cached = self._operator_cache.get(exps)
        if cached is None:
            rhs = np.stack(
                [self._rhs_vector(tuple(x + y for x, y in zip(exps, b))).astype(object)
                 for b in self.basis_weights], axis=1)
            cached = linalg.dot_exact(self.gram_inv, linalg._shrink(rhs))
            if len(self._operator_cache) > 4096:
                self._operator_cache.clear()  # crude but safe bound
            self._operator_cache[exps] = cached
        return cached

    def left_multiplier(self, coords_vec: np.ndarray) -> np.ndarray:
        """Matrix of multiplication by the class with those coordinates."""
        if self.mult_table is not None:
            table = self.mult_table
            vec = np.asarray(coords_vec)
            if table.dtype == np.int64 and vec.dtype == np.int64:
                bound = (linalg._maxabs(vec) * linalg._maxabs(table)
                         * max(vec.size, 1))
                if bound < linalg._LIMIT:
                    return np.tensordot(vec, table, axes=(0, 0))
            if table.dtype != object:
                table = table.astype(object)
            return linalg._shrink(
                np.tensordot(vec.astype(object), table, axes=(0, 0)))
        out = np.zeros((self.rank, self.rank), dtype=object)
        for u, val in enumerate(coords_vec):
            if val:
                out = out + int(val) * self.monomial_operator(self.basis_weights[u]).astype(object)
        return linalg._shrink(out)

    def multiply_coords(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return linalg.dot_exact(self.left_multiplier(x), np.asarray(y))


def build_module(datum: RootDatum, weyl: WeylGroup, chars: CharacterSet,
                 *, audit: bool = True,
                 basis_weights: tuple[Vector, ...] | None = None,
                 basis_source: str = "cached") -> FlagKModule:
    """Assemble the free model and certify its structure.

    Always certified: the Gram determinant is +-1 and the inverse is
    exact; each multiplication matrix composed with its inverse gives the
    identity.  With ``audit=True`` the expensive self-checks also run:
    the matrices commute pairwise, every fundamental character acts as
    its dimension times the identity, each ``t_i - 1`` is nilpotent of
    index at most |positive roots| + 1, and the multiplication table is
    commutative with the unit acting as identity.
    """
    if basis_weights is None:
        basis_weights, basis_source, cert = _select_certified(datum, weyl)
    else:
        cert = _certify_gram(datum, basis_weights)
        if cert is None:
            witness_det = linalg.det_exact(_gram_matrix(datum, basis_weights))
            raise CertificationError("gram-unimodular",
                                     witness={"determinant": witness_det})
    m = len(basis_weights)
    gram, det, gram_inv = cert

    module = FlagKModule(
        datum=datum, weyl=weyl, chars=chars,
        basis_weights=tuple(basis_weights), basis_source=basis_source,
        gram=gram, gram_det=int(det), gram_inv=gram_inv,
        mult_matrices=(), mult_matrices_inv=(),
        unit_coords=np.zeros(m, dtype=np.int64), mult_table=None,
    )

    n = datum.rank
    unit = tuple(0 for _ in range(n))
    module.unit_coords = module.monomial_coords(unit)

    mult, mult_inv = [], []
    for i in range(n):
        step = tuple(int(j == i) for j in range(n))
        neg = tuple(-int(j == i) for j in range(n))
        m_i = module.monomial_operator(step)
        m_i_inv = module.monomial_operator(neg)
        if not np.array_equal(linalg.dot_exact(m_i, m_i_inv), np.eye(m, dtype=np.int64)):
            raise CertificationError("mult-matrix-invertible", witness={"generator": i})
        mult.append(m_i)
        mult_inv.append(m_i_inv)
    module.mult_matrices = tuple(mult)
    module.mult_matrices_inv = tuple(mult_inv)

    if m <= TABLE_LIMIT:
        ops = [module.monomial_operator(b) for b in basis_weights]
        if all(op.dtype == np.int64 for op in ops):
            module.mult_table = np.stack(ops)
        else:
            module.mult_table = np.stack([op.astype(object) for op in ops])

    if audit:
        _audit_module(module)
    return module


def _audit_module(module: FlagKModule) -> None:
    datum = module.datum
    m = module.rank
    eye = np.eye(m, dtype=np.int64)

    for i in range(datum.rank):
        for j in range(i + 1, datum.rank):
            ab = linalg.dot_exact(module.mult_matrices[i], module.mult_matrices[j])
            ba = linalg.dot_exact(module.mult_matrices[j], module.mult_matrices[i])
            if not np.array_equal(ab, ba):
                raise CertificationError("mult-matrices-commute",
                                         witness={"generators": (i, j)})

    # each fundamental character acts as dim * identity on the quotient
    for j, (chi, dim) in enumerate(zip(module.chars.chars, module.chars.dims)):
        acc = np.zeros((m, m), dtype=object)
        for exps, coeff in chi.sorted_terms():
            acc = acc + coeff * module.monomial_operator(exps).astype(object)
        if not np.array_equal(linalg._shrink(acc), dim * eye):
            raise CertificationError("character-relation",
                                     witness={"fundamental": j})

    # (t_i - 1) is nilpotent of index at most |positive roots| + 1
    nil_bound = len(cartan.positive_roots(datum)) + 1
    for i in range(datum.rank):
        x = module.mult_matrices[i] - eye
        power = x
        steps = 1
        while steps < nil_bound and np.any(power):
            power = linalg.dot_exact(power, x)
            steps += 1
        if np.any(power):
            raise CertificationError("augmentation-nilpotent",
                                     witness={"generator": i, "bound": nil_bound})

    if module.mult_table is not None:
        table = module.mult_table
        # commutativity of the structure constants: coords(b_u b_v) symmetric
        if not np.array_equal(table, table.transpose(2, 1, 0)):
            raise CertificationError("mult-table-commutative")
        # the unit is a two-sided identity
        if not np.array_equal(module.left_multiplier(module.unit_coords), eye):
            raise CertificationError("unit-coords-identity")
        rng = np.random.default_rng(2024)
        for _ in range(8):
            u, v, w = (int(x) for x in rng.integers(0, m, size=3))
            left = module.multiply_coords(table[u][:, v], eye[w])
            right = module.multiply_coords(eye[u], table[v][:, w])
            if not np.array_equal(left, right):
                raise CertificationError("mult-table-associative",
                                         witness={"triple": (u, v, w)})
