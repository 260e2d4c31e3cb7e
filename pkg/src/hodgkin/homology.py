"""Exact homology of finite complexes of free abelian groups.

A complex is a chain ``C_0 <- C_1 <- ... <- C_L`` of integer matrices
whose consecutive products vanish.  Homology at each degree is split off
two Smith decompositions: one for the outgoing boundary (cutting out the
kernel), one for the incoming boundaries rewritten in kernel coordinates
(reading off invariant factors).  All arithmetic is exact; every Smith
decomposition is audited by reconstruction before its factors are used.

The one builder needed downstream is the Koszul complex of a family of
commuting operators: degree p is one copy of the underlying module per
p-subset of operator indices, and the boundary contracts one index at a
time with alternating signs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations
from math import comb

import numpy as np

from . import linalg
from .errors import DefectError


def wedge_basis(n: int, p: int) -> tuple[tuple[int, ...], ...]:
    """Sorted p-element subsets of range(n), lexicographically ordered.

    Fixes the block order used by :func:`koszul_complex`: the degree-p
    module is one block per subset, in exactly this order.
    """
    return tuple(combinations(range(n), p))


@dataclass(eq=False)
class ChainComplex:
    """``C_0 <- C_1 <- ... <- C_L`` with ``maps[p]`` sending C_{p+1} to C_p."""

    ranks: tuple[int, ...]
    maps: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        self.ranks = tuple(int(r) for r in self.ranks)
        self.maps = tuple(linalg.as_int_array(m) for m in self.maps)
        if len(self.maps) != max(len(self.ranks) - 1, 0):
            raise ValueError("need exactly one boundary map per adjacent degree pair")
        for p, mat in enumerate(self.maps):
            expected = (self.ranks[p], self.ranks[p + 1])
            if mat.shape != expected:
                raise ValueError(
                    f"boundary into degree {p} has shape {mat.shape}, expected {expected}")
        for p in range(len(self.maps) - 1):
            if np.any(linalg.dot_exact(self.maps[p], self.maps[p + 1])):
                raise ValueError(f"boundary squared is nonzero out of degree {p + 2}")

    @property
    def length(self) -> int:
        return len(self.ranks) - 1

    def boundary(self, p: int) -> np.ndarray:
        """d_p : C_p -> C_{p-1}, with zero maps of the right shape off the ends."""
        if 1 <= p <= self.length:
            return self.maps[p - 1]
        if p == 0:
            return np.zeros((0, self.ranks[0]), dtype=np.int64)
        if p == self.length + 1:
            return np.zeros((self.ranks[self.length], 0), dtype=np.int64)
        raise ValueError(f"degree {p} is outside the complex")


def koszul_complex(operators) -> ChainComplex:
    """Koszul complex of pairwise commuting integer operators on Z^m.

    Degree p holds one copy of Z^m per p-subset S of operator indices
    (ordered as in :func:`wedge_basis`); the boundary removes one index
    at a time with alternating signs,

        d(e_S (x) v) = sum_k (-1)^k e_{S minus S[k]} (x) operators[S[k]] v,

    k counted from zero.  Commutativity is exactly what makes the square
    of this vanish, so it is checked up front.
    """
    ops = [linalg.as_int_array(b) for b in operators]
    n = len(ops)
    if n == 0:
        raise ValueError("need at least one operator")
    m = ops[0].shape[0] if ops[0].ndim == 2 else -1
    for b in ops:
        if b.ndim != 2 or b.shape != (m, m):
            raise ValueError("operators must be square matrices of one common size")
    for i in range(n):
        for j in range(i + 1, n):
            ij = linalg.dot_exact(ops[i], ops[j])
            ji = linalg.dot_exact(ops[j], ops[i])
            if not np.array_equal(ij, ji):
                raise ValueError(f"operators {i} and {j} do not commute")
    use_object = any(b.dtype == object for b in ops)
    ranks = tuple(comb(n, p) * m for p in range(n + 1))
    maps = []
    for p in range(1, n + 1):
        row_index = {s: i for i, s in enumerate(wedge_basis(n, p - 1))}
        cols = wedge_basis(n, p)
        d = np.zeros((comb(n, p - 1) * m, comb(n, p) * m),
                     dtype=object if use_object else np.int64)
        for cb, subset in enumerate(cols):
            for k, i in enumerate(subset):
                rb = row_index[subset[:k] + subset[k + 1:]]
                block = ops[i] if k % 2 == 0 else -ops[i]
                d[rb * m:(rb + 1) * m, cb * m:(cb + 1) * m] = block
        maps.append(d)
    return ChainComplex(ranks=ranks, maps=tuple(maps))


def smith_normal_form(matrix) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(U, D, V) with ``matrix == U @ D @ V``, U and V unimodular.

    D is diagonal with nonnegative entries, each dividing the next.
    The decomposition is audited on every call — exact reconstruction
    plus inverse checks — before the factors are returned.
    """
    arr = np.atleast_2d(linalg.as_int_array(matrix))
    result = linalg.smith(arr)
    linalg.audit_smith(arr, result)
    return result.u, result.d_matrix(arr.shape), result.v


@dataclass(eq=False)
class DegreeHomology:
    """Homology at one degree: free rank, invariant factors, explicit cycles.

    ``cycle_basis`` columns are cycles representing the free generators;
    ``reduce_matrix`` is a left inverse on those columns, so
    :meth:`reduce` projects any cycle onto the free generators' classes.
    """

    degree: int
    betti: int
    torsion: tuple[int, ...]
    cycle_basis: np.ndarray
    reduce_matrix: np.ndarray
    boundary_out: np.ndarray

    def reduce(self, vec) -> np.ndarray:
        """Coordinates of a cycle's class on the free generators.

        Raises ValueError when ``vec`` is not a cycle of this degree.
        Torsion components are projected away, so cycles differing by a
        torsion class reduce identically.
        """
        x = linalg.as_int_array(vec)
        if x.shape != (self.boundary_out.shape[1],):
            raise ValueError("vector does not live in this degree")
        if np.any(linalg.dot_exact(self.boundary_out, x)):
            raise ValueError("vector is not a cycle")
        return linalg.dot_exact(self.reduce_matrix, x)


def _canonical_free_basis(basis: np.ndarray, reducer: np.ndarray):
    """Hermite-canonicalize the generator columns; fix the reducer to match."""
    if basis.shape[1] == 0:
        return basis, reducer
    h, t = linalg.hermite_rows(basis.T)
    t_inv = linalg.inverse_unimodular(linalg.as_int_array(t))
    new_basis = linalg.as_int_array(h).T
    new_reducer = linalg.dot_exact(t_inv.T, reducer)
    return new_basis, new_reducer


def homology_of(cx: ChainComplex, *, audit: bool = True) -> tuple[DegreeHomology, ...]:
    """Homology of the complex in every degree, lowest first.

    Per degree: the outgoing boundary's Smith form cuts out the kernel;
    the incoming boundary is rewritten in kernel coordinates (its rows
    above the kernel block must vanish — checked); a second Smith form
    splits the free part from the invariant factors.  Free generators
    are Hermite-canonicalized so re-runs produce identical bases, and
    each degree ends with two retraction checks.
    """
    out = []
    for p in range(cx.length + 1):
        d_out = cx.boundary(p)
        d_in = cx.boundary(p + 1)
        sm_out = linalg.smith(d_out)
        if audit:
            linalg.audit_smith(d_out, sm_out)
        r = sm_out.rank
        kernel_rank = cx.ranks[p] - r
        folded = linalg.dot_exact(sm_out.v, d_in)
        if np.any(folded[:r, :]):
            raise DefectError(f"boundaries escape the kernel at degree {p}")
        relations = folded[r:, :]
        sm_rel = linalg.smith(relations)
        if audit:
            linalg.audit_smith(relations, sm_rel)
        s = sm_rel.rank
        torsion = tuple(int(d) for d in sm_rel.diag[:s] if d > 1)
        betti = kernel_rank - s
        basis = linalg.dot_exact(sm_out.v_inv[:, r:], sm_rel.u[:, s:])
        reducer = linalg.dot_exact(sm_rel.u_inv[s:, :], sm_out.v[r:, :])
        basis, reducer = _canonical_free_basis(basis, reducer)
        if np.any(linalg.dot_exact(d_out, basis)):
            raise DefectError(f"a free generator fails the cycle test at degree {p}")
        if not np.array_equal(linalg.dot_exact(reducer, basis),
                              np.eye(betti, dtype=np.int64)):
            raise DefectError(f"reduction is not a retraction at degree {p}")
        out.append(DegreeHomology(
            degree=p, betti=betti, torsion=torsion,
            cycle_basis=basis, reduce_matrix=reducer, boundary_out=d_out))
    return tuple(out)


def ext_via_cochain(cx: ChainComplex, *, audit: bool = True) -> tuple[DegreeHomology, ...]:
    """Cohomology of the dualized complex, indexed by cohomological degree.

    Dualizing a complex of free modules reverses the arrows and
    transposes the matrices; the result is re-indexed so that entry p is
    the degree-p cohomology.  For the Koszul complexes used here this
    table must mirror the homology table — a cross-check the callers
    enforce.
    """
    length = cx.length
    rev_ranks = tuple(reversed(cx.ranks))
    rev_maps = tuple(cx.maps[length - 1 - q].T.copy() for q in range(length))
    rev = homology_of(ChainComplex(ranks=rev_ranks, maps=rev_maps), audit=audit)
    return tuple(replace(h, degree=length - h.degree) for h in reversed(rev))
