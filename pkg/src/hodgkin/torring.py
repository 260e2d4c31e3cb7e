"""Ring structure on Koszul homology, its exterior certification, and
the final K-theory report.

Chains multiply by wedging exterior slots and multiplying coordinate
blocks in the flag module; the product of cycles is again a cycle, so
homology inherits a graded-commutative ring.  One degree-1 generator
arises per fundamental character: its relator (character minus
dimension) decomposes over the ideal generated by the ``t_j - 1``, and
the cofactor blocks assemble a cycle.  Certification then checks that
ordered products of these generators hit a homology basis in every
degree with change-of-basis determinant +-1 — the computable content of
"this ring is an exterior algebra on n odd generators".

The report at the end converts the graded ranks into the two K-group
ranks by parity.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from . import homology, laurent, linalg
from .errors import CertificationError, DefectError
from .flagk import FlagKModule
from .homology import DegreeHomology
from .laurent import CharacterSet

#: Version stamp for the serialized report schema.
FORMAT_VERSION = 1


@dataclass(eq=False)
class TorClass:
    """A homology class carried by an explicit cycle.

    ``chain`` lives in degree ``degree`` of the Koszul complex (one
    block of module coordinates per sorted index subset, blocks in
    lexicographic subset order); ``homology_coords`` is its image under
    the degree's reduction map.
    """

    degree: int
    chain: np.ndarray
    homology_coords: np.ndarray


def _merge_sign(s: tuple[int, ...], t: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Sign of sorting the concatenation of two disjoint index tuples."""
    inversions = sum(1 for a in s for b in t if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(s + t))


def chain_product(a: TorClass, b: TorClass, module: FlagKModule,
                  homres: tuple[DegreeHomology, ...]) -> TorClass:
    """Product of two classes on their chain representatives.

    Block (S, T) of the inputs contributes to block S-union-T of the
    output when S and T are disjoint, with the sign that sorts the
    concatenation and the module product on coordinates.  Degrees past
    the number of generators carry the zero module, so those products
    come back as the empty class of the summed degree.
    """
    n = module.datum.rank
    m = module.rank
    deg = a.degree + b.degree
    if deg > n:
        return TorClass(degree=deg, chain=np.zeros(0, dtype=np.int64),
                        homology_coords=np.zeros(0, dtype=np.int64))
    subsets_a = homology.wedge_basis(n, a.degree)
    subsets_b = homology.wedge_basis(n, b.degree)
    if a.chain.shape != (len(subsets_a) * m,):
        raise ValueError("left chain does not match the module's complex")
    if b.chain.shape != (len(subsets_b) * m,):
        raise ValueError("right chain does not match the module's complex")
    out_index = {s: i for i, s in enumerate(homology.wedge_basis(n, deg))}
    out = np.zeros(len(out_index) * m, dtype=object)
    left_cache: dict[int, np.ndarray] = {}
    for si, s in enumerate(subsets_a):
        block_a = a.chain[si * m:(si + 1) * m]
        if not np.any(block_a):
            continue
        for tj, t in enumerate(subsets_b):
            if set(s) & set(t):
                continue
            block_b = b.chain[tj * m:(tj + 1) * m]
            if not np.any(block_b):
                continue
            left = left_cache.get(si)
            if left is None:
                left = module.left_multiplier(block_a)
                left_cache[si] = left
            sign, merged = _merge_sign(s, t)
            k = out_index[merged]
            prod = linalg.dot_exact(left, block_b).astype(object)
            out[k * m:(k + 1) * m] += sign * prod
    chain = linalg._shrink(out)
    return TorClass(degree=deg, chain=chain,
                    homology_coords=homres[deg].reduce(chain))


def unit_class(module: FlagKModule,
               homres: tuple[DegreeHomology, ...]) -> TorClass:
    """The degree-0 class of the ring unit."""
    chain = linalg.as_int_array(module.unit_coords)
    return TorClass(degree=0, chain=chain,
                    homology_coords=homres[0].reduce(chain))


def change_of_rings_generators(chars: CharacterSet, module: FlagKModule,
                               homres: tuple[DegreeHomology, ...]) -> tuple[TorClass, ...]:
    """One degree-1 cycle per fundamental character.

    Each relator (character minus its dimension) has augmentation zero
    and decomposes as ``sum_j c_j (t_j - 1)``; the blocks coords(c_j)
    assemble a 1-chain whose boundary is the relator's class — zero in
    the quotient because the character acts as its dimension.  That
    boundary is recomputed here and must vanish exactly.
    """
    n = module.datum.rank
    m = module.rank
    eye = np.eye(m, dtype=np.int64)
    out = []
    for i, relator in enumerate(chars.relators):
        cofactors = laurent.decompose_augmentation_ideal(relator)
        chain = np.zeros(n * m, dtype=object)
        for j, cof in enumerate(cofactors):
            chain[j * m:(j + 1) * m] = module.coords(cof).astype(object)
        chain = linalg._shrink(chain)
        boundary = np.zeros(m, dtype=object)
        for j in range(n):
            step = linalg.dot_exact(module.mult_matrices[j] - eye,
                                    chain[j * m:(j + 1) * m])
            boundary += step.astype(object)
        if np.any(boundary):
            raise DefectError(f"relator {i} fails the cycle condition")
        out.append(TorClass(degree=1, chain=chain,
                            homology_coords=homres[1].reduce(chain)))
    return tuple(out)


@dataclass(frozen=True)
class ExteriorCertificate:
    """Outcome of :func:`certify_exterior`: one determinant per degree,
    plus how many generator relations were verified element-wise."""

    dets: tuple[int, ...]
    pairs_checked: int
    squares_checked: int


@dataclass(eq=False)
class TorRing:
    """The graded homology ring with its degree-1 generators."""

    module: FlagKModule
    homology: tuple[DegreeHomology, ...]
    generators: tuple[TorClass, ...]
    certification: ExteriorCertificate | None = None

    def product(self, a: TorClass, b: TorClass) -> TorClass:
        return chain_product(a, b, self.module, self.homology)

    def unit(self) -> TorClass:
        return unit_class(self.module, self.homology)


def build_tor_ring(chars: CharacterSet, module: FlagKModule,
                   homres: tuple[DegreeHomology, ...]) -> TorRing:
    """Assemble the ring with its canonical degree-1 generators."""
    gens = change_of_rings_generators(chars, module, homres)
    return TorRing(module=module, homology=homres, generators=gens)


def certify_exterior(ring: TorRing) -> ExteriorCertificate:
    """Certify the exterior-algebra structure, or raise with a witness.

    Checks, all exact: every generator squares to zero and generators
    anticommute (element-wise on chains); each degree p is torsion-free
    of rank (n choose p); the ordered generator products written in
    homology coordinates form a square matrix of determinant +-1 in
    every degree.  On success the certificate is stored on the ring.
    """
    module = ring.module
    homres = ring.homology
    n = module.datum.rank
    gens = ring.generators

    for i, gen in enumerate(gens):
        square = chain_product(gen, gen, module, homres)
        if np.any(square.chain):
            raise CertificationError("generator-square-zero",
                                     witness={"generator": i})
    for i in range(n):
        for j in range(i + 1, n):
            ij = chain_product(gens[i], gens[j], module, homres)
            ji = chain_product(gens[j], gens[i], module, homres)
            if np.any(ij.chain + ji.chain):
                raise CertificationError("generator-anticommute",
                                         witness={"pair": (i, j)})

    dets = []
    classes: dict[tuple[int, ...], TorClass] = {(): ring.unit()}
    for p in range(n + 1):
        columns = []
        for subset in homology.wedge_basis(n, p):
            if p == 0:
                cls = classes[()]
            else:
                cls = chain_product(classes[subset[:-1]], gens[subset[-1]],
                                    module, homres)
                classes[subset] = cls
            columns.append(cls.homology_coords)
        h = homres[p]
        if h.torsion:
            raise CertificationError("tor-torsion-free",
                                     witness={"degree": p, "torsion": list(h.torsion)})
        if h.betti != len(columns):
            raise CertificationError("tor-rank",
                                     witness={"degree": p, "betti": h.betti,
                                              "expected": comb(n, p)})
        basis_matrix = np.stack(columns, axis=1)
        det = int(linalg.det_exact(linalg.as_int_array(basis_matrix)))
        if det not in (1, -1):
            raise CertificationError("exterior-change-of-basis",
                                     witness={"degree": p, "determinant": det})
        dets.append(det)
    cert = ExteriorCertificate(dets=tuple(dets), pairs_checked=n * (n - 1) // 2,
                               squares_checked=n)
    ring.certification = cert
    return cert


@dataclass(eq=False)
class KReport:
    """Everything the command line serializes for one group."""

    cartan_type: str
    rank: int
    weyl_order: int
    gram_determinant: int
    tor_table: list[dict]
    e2_table: list[dict]
    k0_rank: int
    k1_rank: int
    exterior_certified: bool
    checks: list[dict]
    timings_ms: dict
    versions: dict

    def to_dict(self) -> dict:
        return {
            "cartan_type": self.cartan_type,
            "rank": self.rank,
            "weyl_order": self.weyl_order,
            "gram_determinant": self.gram_determinant,
            "tor_table": self.tor_table,
            "e2_table": self.e2_table,
            "k0_rank": self.k0_rank,
            "k1_rank": self.k1_rank,
            "exterior_certified": self.exterior_certified,
            "checks": self.checks,
            "timings_ms": self.timings_ms,
            "versions": self.versions,
        }


def assemble_report(cartan_type: str, module: FlagKModule,
                    homres: tuple[DegreeHomology, ...],
                    certificate: ExteriorCertificate | None,
                    checks: list[dict], timings_ms: dict,
                    engine_version: str) -> KReport:
    """Fold the pipeline results into the serializable report.

    K-group ranks are the even/odd sums of the homology ranks; the
    second-page table re-indexes those ranks by the dual filtration
    degree n - p.  ``checks`` is the caller's pass/fail trail and is
    stored as given.
    """
    n = module.datum.rank
    betti = [h.betti for h in homres]
    tor_table = [
        {"degree": h.degree, "rank": h.betti, "torsion": list(h.torsion)}
        for h in homres
    ]
    e2_table = [{"p": p, "rank": betti[n - p]} for p in range(n + 1)]
    return KReport(
        cartan_type=cartan_type,
        rank=n,
        weyl_order=module.weyl.order,
        gram_determinant=module.gram_det,
        tor_table=tor_table,
        e2_table=e2_table,
        k0_rank=sum(b for p, b in enumerate(betti) if p % 2 == 0),
        k1_rank=sum(b for p, b in enumerate(betti) if p % 2 == 1),
        exterior_certified=certificate is not None,
        checks=checks,
        timings_ms=timings_ms,
        versions={"engine": engine_version, "format": FORMAT_VERSION},
    )
