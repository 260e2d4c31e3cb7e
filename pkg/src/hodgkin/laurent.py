"""Sparse integer Laurent polynomials on the weight lattice.

A polynomial is a finite integer combination of monomials ``e^lambda``
with ``lambda`` a weight in fundamental-weight coordinates; the i-th
variable ``t_i = e^{omega_i}`` corresponds to the i-th fundamental
weight.  On top of the ring arithmetic this module provides the Weyl
action, Demazure (divided-difference) operators, characters of dominant
weights via the Demazure character formula, and the rewriting of
augmentation-zero elements in terms of ``t_j - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import cartan
from .cartan import Matrix, RootDatum, Vector, WeylGroup
from .errors import DefectError


class LaurentPoly:
    """Immutable sparse Laurent polynomial with integer coefficients.

    ``terms`` maps exponent tuples to nonzero integer coefficients.  The
    zero polynomial has an empty table.

    >>> f = LaurentPoly.monomial((1,)) - LaurentPoly.monomial((-1,))
    >>> f.render()
    't1 - t1^-1'
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[Vector, int] | None = None):
        self.nvars = nvars
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "LaurentPoly":
        return cls(nvars, {})

    @classmethod
    def one(cls, nvars: int) -> "LaurentPoly":
        return cls(nvars, {(0,) * nvars: 1})

    @classmethod
    def monomial(cls, exponents, coeff: int = 1) -> "LaurentPoly":
        exponents = tuple(int(x) for x in exponents)
        return cls(len(exponents), {exponents: int(coeff)})

    # -- ring structure -------------------------------------------------

    def _check(self, other: "LaurentPoly"):
        if self.nvars != other.nvars:
            raise ValueError("mixed numbers of variables")

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(self.nvars, {(0,) * self.nvars: other})
        self._check(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return LaurentPoly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.nvars, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(self.nvars, {(0,) * self.nvars: other})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly(self.nvars, {k: v * other for k, v in self.terms.items()})
        self._check(other)
        # iterate over the smaller factor
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict[Vector, int] = {}
        for ka, va in a.items():
            for kb, vb in b.items():
                key = tuple(x + y for x, y in zip(ka, kb))
                out[key] = out.get(key, 0) + va * vb
        return LaurentPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = LaurentPoly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            return self.terms == ({} if other == 0 else {(0,) * self.nvars: other})
        return isinstance(other, LaurentPoly) and self.nvars == other.nvars \
            and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list[tuple[Vector, int]]:
        """Terms in canonical (lexicographic) order."""
        return sorted(self.terms.items())

    # -- rendering -------------------------------------------------------

    def render(self) -> str:
        """Canonical human-readable form, stable across runs."""
        if not self.terms:
            return "0"
        pieces = []
        for exps, coeff in self.sorted_terms():
            factors = [
                f"t{j + 1}" + (f"^{e}" if e != 1 else "")
                for j, e in enumerate(exps) if e != 0
            ]
            body = "*".join(factors)
            if not body:
                text = str(abs(coeff))
            elif abs(coeff) == 1:
                text = body
            else:
                text = f"{abs(coeff)}*{body}"
            sign = "-" if coeff < 0 else "+"
            pieces.append((sign, text))
        sign, text = pieces[0]
        out = ("-" if sign == "-" else "") + text
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return out

    __repr__ = render
    __str__ = render


def augmentation(f: LaurentPoly) -> int:
    """Sum of coefficients: the ring map sending every ``t_i`` to 1."""
    return sum(f.terms.values())


def weyl_act(w: Matrix, f: LaurentPoly) -> LaurentPoly:
    """Ring automorphism induced by ``lambda -> w(lambda)`` on exponents."""
    out: dict[Vector, int] = {}
    for exps, coeff in f.terms.items():
        key = cartan.mat_vec(w, exps)
        out[key] = out.get(key, 0) + coeff  # w is a bijection; no collisions
    return LaurentPoly(f.nvars, out)


# --- Demazure operators -----------------------------------------------------

def demazure(datum: RootDatum, i: int, f: LaurentPoly) -> LaurentPoly:
    """Divided-difference operator for the i-th simple root (0-based).

    Computes ``(f - e^{-alpha_i} s_i(f)) / (1 - e^{-alpha_i})`` and checks
    the division is exact in the Laurent ring; on a single monomial the
    quotient is the geometric string

        e^lambda + e^{lambda-alpha} + ... + e^{s_i(lambda)}      (k >= 0)
        0                                                        (k = -1)
        -(e^{lambda+alpha} + ... + e^{s_i(lambda)-alpha})        (k <= -2)

    where ``k = <lambda, alpha_i^vee>`` is the i-th coordinate.
    """
    n = f.nvars
    alpha = datum.simple_roots[i]
    out: dict[Vector, int] = {}
    for exps, coeff in f.terms.items():
        k = exps[i]
        if k >= 0:
            for j in range(k + 1):
                key = tuple(x - j * a for x, a in zip(exps, alpha))
                out[key] = out.get(key, 0) + coeff
        elif k <= -2:
            for j in range(1, -k):
                key = tuple(x + j * a for x, a in zip(exps, alpha))
                out[key] = out.get(key, 0) - coeff
    result = LaurentPoly(n, out)
    _check_demazure_division(datum, i, f, result)
    return result


def _check_demazure_division(datum: RootDatum, i: int, f: LaurentPoly,
                             q: LaurentPoly) -> None:
    """Certify q * (1 - e^{-alpha_i}) == f - e^{-alpha_i} s_i(f)."""
    alpha = datum.simple_roots[i]
    neg_alpha = LaurentPoly.monomial(tuple(-a for a in alpha))
    s_i = cartan.simple_reflection(datum, i)
    lhs = q * (LaurentPoly.one(f.nvars) - neg_alpha)
    rhs = f - neg_alpha * weyl_act(s_i, f)
    if lhs != rhs:
        raise DefectError(
            f"inexact divided-difference division for generator {i}"
        )


def demazure_word(datum: RootDatum, word, f: LaurentPoly) -> LaurentPoly:
    """Composite of Demazure operators: the word acts as a composition,
    so the last letter is applied first."""
    for i in reversed(tuple(word)):
        f = demazure(datum, i, f)
    return f


# --- characters -------------------------------------------------------------

def character(datum: RootDatum, weyl: WeylGroup, weight: Vector) -> LaurentPoly:
    """Character of the irreducible with dominant highest weight ``weight``,
    by the Demazure character formula along a reduced word for the longest
    element."""
    if not cartan.is_dominant(weight):
        raise ValueError(f"weight {weight} is not dominant")
    return demazure_word(datum, weyl.longest_word, LaurentPoly.monomial(weight))


@dataclass(frozen=True)
class CharacterSet:
    """Fundamental characters with their dimensions and the shifted
    relators ``chi_i - dim_i`` that cut out the augmentation fiber."""

    chars: tuple[LaurentPoly, ...]
    dims: tuple[int, ...]

    @property
    def relators(self) -> tuple[LaurentPoly, ...]:
        return tuple(chi - d for chi, d in zip(self.chars, self.dims))


def fundamental_characters(datum: RootDatum, weyl: WeylGroup) -> CharacterSet:
    """Characters of all fundamental weights, cross-checked against the
    Weyl dimension formula."""
    chars = []
    dims = []
    n = datum.rank
    for i in range(n):
        omega = tuple(int(j == i) for j in range(n))
        chi = character(datum, weyl, omega)
        d = augmentation(chi)
        expected = weyl_dimension(datum, omega)
        if d != expected:
            raise DefectError(
                f"character dimension mismatch at fundamental weight {i}: "
                f"augmentation {d} vs dimension formula {expected}"
            )
        chars.append(chi)
        dims.append(d)
    return CharacterSet(tuple(chars), tuple(dims))


# --- dimension polynomial ---------------------------------------------------

@lru_cache(maxsize=None)
def _coroot_data(datum: RootDatum):
    coroots = cartan.positive_coroots(datum)
    denominator = 1
    for c in coroots:
        denominator *= sum(c)  # <rho, alpha^vee> = height of the coroot
    return coroots, denominator


def weyl_dimension(datum: RootDatum, weight: Vector) -> int:
    """Dimension of the irreducible with dominant highest weight ``weight``."""
    if not cartan.is_dominant(weight):
        raise ValueError(f"weight {weight} is not dominant")
    return signed_weight_dimension(datum, weight)


@lru_cache(maxsize=1 << 20)
def signed_weight_dimension(datum: RootDatum, weight: Vector) -> int:
    """The Weyl dimension polynomial at an arbitrary (integral) weight:

        prod_{alpha^vee > 0} <weight + rho, alpha^vee> / <rho, alpha^vee>

    For dominant weights this is the irreducible dimension; in general it
    is the signed virtual dimension, vanishing whenever ``weight + rho``
    lies on a wall.  Always an exact integer.
    """
    coroots, denominator = _coroot_data(datum)
    numerator = 1
    for c in coroots:
        factor = sum((x + 1) * cj for x, cj in zip(weight, c))
        if factor == 0:
            return 0
        numerator *= factor
    quotient, remainder = divmod(numerator, denominator)
    if remainder:
        raise DefectError(
            f"dimension polynomial not integral at weight {weight}"
        )
    return quotient


# --- augmentation ideal -----------------------------------------------------

def _geometric_factor(nvars: int, j: int, k: int) -> LaurentPoly:
    """q with ``t_j^k - 1 = q * (t_j - 1)``."""
    terms: dict[Vector, int] = {}
    if k > 0:
        for e in range(k):
            key = tuple(e if c == j else 0 for c in range(nvars))
            terms[key] = 1
    elif k < 0:
        for e in range(1, -k + 1):
            key = tuple(-e if c == j else 0 for c in range(nvars))
            terms[key] = -1
    return LaurentPoly(nvars, terms)


def decompose_augmentation_ideal(f: LaurentPoly) -> tuple[LaurentPoly, ...]:
    """Write an augmentation-zero ``f`` as ``sum_j c_j * (t_j - 1)``.

    Each monomial is telescoped coordinate-by-coordinate in index order,
    using ``t_j^-1 - 1 = -t_j^-1 (t_j - 1)`` for negative exponents, so
    the output is deterministic.  Raises ``ValueError`` when the
    augmentation of ``f`` is nonzero (no such decomposition exists).
    """
    if augmentation(f) != 0:
        raise ValueError("augmentation is nonzero; not in the ideal")
    n = f.nvars
    cofactors = [LaurentPoly.zero(n) for _ in range(n)]
    for exps, coeff in f.sorted_terms():
        # e^lambda - 1 = sum_j (suffix monomial after j) * (t_j^{lambda_j} - 1)
        for j in range(n):
            if exps[j] == 0:
                continue
            suffix = tuple(
                exps[c] if c > j else 0 for c in range(n)
            )
            piece = LaurentPoly.monomial(suffix, coeff) * _geometric_factor(n, j, exps[j])
            cofactors[j] = cofactors[j] + piece
    return tuple(cofactors)
