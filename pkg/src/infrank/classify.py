"""Decision procedures for congruence level, scalar-mod-m membership, and
the normal-generator dichotomy.

Terminology: Gamma(m) is the principal congruence subgroup (automorphisms
congruent to the identity mod m), Lambda(m) the automorphisms acting as an
integer scalar mod m on a large direct summand, and an almost-radiation
acts as +-identity on a large summand.  For the representations of
:mod:`infrank.autrep` all of these are decidable:

* a finitary automorphism is the identity on a large summand, so it lies
  in Lambda(m) for every m;
* an eventually-uniform automorphism lies in Lambda(m) exactly when its
  repeating block is scalar mod m (the finite window sits inside the
  complement of a large summand and never matters);
* a graded automorphism lies in Lambda(m) exactly when m divides one of
  its cumulative multiplier products, since all later pairs shear by
  multiples of that product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence, Union

from . import witness as _witness
from .autrep import EventuallyUniform, Finitary, GradedBlock, RepAut
from .errors import DimensionError
from .intmat import IntMatrix, gcd_of_entries, is_unimodular_set
from .numth import factorize, gcd_list, is_prime


# -- level descriptors ----------------------------------------------------


@dataclass(frozen=True)
class AllLevels:
    """Member of Lambda(m) for every m >= 2."""


@dataclass(frozen=True)
class OnlyTrivial:
    """No m >= 2 admits this automorphism (the normal-generator case)."""


@dataclass(frozen=True)
class DivisorsOf:
    """Member of Lambda(m) exactly for the divisors m >= 2 of g."""

    g: int


@dataclass(frozen=True)
class RuleBased:
    """Graded level set: m is a level iff m divides some cumulative product."""

    prefix: tuple[int, ...]
    excluded: frozenset[int]

    def tail_skip(self) -> frozenset[int]:
        skip = set(self.excluded)
        for m in self.prefix:
            skip.update(factorize(m))
        return frozenset(skip)

    def member(self, m: int) -> bool:
        if m < 2:
            raise ValueError("level queries need m >= 2")
        skip = self.tail_skip()
        prefix_val: dict[int, int] = {}
        for mult in self.prefix:
            for p, e in factorize(mult).items():
                prefix_val[p] = prefix_val.get(p, 0) + e
        for p, e in factorize(m).items():
            allowed = prefix_val.get(p, 0) + (0 if p in skip else 1)
            if e > allowed:
                return False
        return True


LambdaLevels = Union[AllLevels, OnlyTrivial, DivisorsOf, RuleBased]


@dataclass(frozen=True)
class FinitePrimes:
    primes: frozenset[int]

    def contains(self, p: int) -> bool:
        return p in self.primes


@dataclass(frozen=True)
class AllPrimes:
    def contains(self, p: int) -> bool:
        return is_prime(p)


@dataclass(frozen=True)
class AllExcept:
    excluded: frozenset[int]

    def contains(self, p: int) -> bool:
        return is_prime(p) and p not in self.excluded


@dataclass(frozen=True)
class UnionWithPrefix:
    """A finite prime set joined with the complement of a finite set."""

    finite: frozenset[int]
    excluded: frozenset[int]

    def contains(self, p: int) -> bool:
        return is_prime(p) and (p in self.finite or p not in self.excluded)


PrimeSetDescriptor = Union[FinitePrimes, AllPrimes, AllExcept, UnionWithPrefix]


# -- core measurements ----------------------------------------------------


def congruence_gcd(aut: RepAut) -> int:
    """gcd c of all entries of (aut - id); membership in Gamma(m) is m | c.

    c == 0 encodes the identity, which lies in Gamma(m) for every m.
    """
    if isinstance(aut, Finitary):
        k = len(aut.support)
        return gcd_of_entries(aut.matrix - IntMatrix.identity(k))
    if isinstance(aut, EventuallyUniform):
        n0 = aut.window_size
        g = gcd_of_entries(aut.window - IntMatrix.identity(n0))
        return gcd(g, gcd_of_entries(aut.block.matrix - IntMatrix.identity(aut.d)))
    # graded: increments are c_0, c_1, ...; c_0 divides every later one
    return abs(aut.increment(0))


def scalar_defect(b: IntMatrix) -> int:
    """Largest modulus mod which b is scalar.

    g = gcd of every off-diagonal entry and every difference of diagonal
    entries; for m >= 2 there is a k with b == k*I mod m iff m | g, and
    g == 0 means b is already scalar (so +-I when b is unimodular).
    """
    if not b.is_square:
        raise DimensionError("scalar defect needs a square matrix")
    n = b.rows
    g = 0
    for i in range(n):
        for j in range(n):
            if i != j:
                g = gcd(g, b.data[i][j])
        g = gcd(g, b.data[i][i] - b.data[0][0])
    return g


def lambda_levels(aut: RepAut) -> LambdaLevels:
    if isinstance(aut, Finitary):
        return AllLevels()
    if isinstance(aut, EventuallyUniform):
        g = scalar_defect(aut.block.matrix)
        if g == 0:
            return AllLevels()
        if g == 1:
            return OnlyTrivial()
        return DivisorsOf(g)
    return RuleBased(aut.prefix, aut.excluded)


def lambda_member(aut: RepAut, m: int) -> bool:
    """Is aut in Lambda(m)?  m = 1 is everything, m = 0 the almost-radiations."""
    if m == 1:
        return True
    if m == 0:
        return is_almost_radiation(aut)
    levels = lambda_levels(aut)
    if isinstance(levels, AllLevels):
        return True
    if isinstance(levels, OnlyTrivial):
        return False
    if isinstance(levels, DivisorsOf):
        return m >= 2 and levels.g % m == 0
    return levels.member(m)


def is_almost_radiation(aut: RepAut) -> bool:
    if isinstance(aut, Finitary):
        return True
    if isinstance(aut, EventuallyUniform):
        d = aut.d
        b = aut.block.matrix
        return b == IntMatrix.identity(d) or b == IntMatrix.identity(d).scale(-1)
    return False


def nu_set(aut: RepAut) -> PrimeSetDescriptor:
    """The set of primes p with aut in Lambda(p)."""
    levels = lambda_levels(aut)
    if isinstance(levels, AllLevels):
        return AllPrimes()
    if isinstance(levels, OnlyTrivial):
        return FinitePrimes(frozenset())
    if isinstance(levels, DivisorsOf):
        return FinitePrimes(frozenset(factorize(levels.g)))
    prefix_primes: set[int] = set()
    for m in levels.prefix:
        prefix_primes.update(factorize(m))
    return UnionWithPrefix(frozenset(prefix_primes), levels.excluded)


# -- normal generation ----------------------------------------------------


@dataclass(frozen=True)
class GeneratorEvidence:
    """What backs a normal-generator verdict.

    kind = pair-witness     : columns (w, Bw) span a rank-2 summand moved off
                              itself, found by bounded search;
    kind = dichotomy-only   : verdict true but the bounded search found no
                              small witness;
    kind = lambda-level     : verdict false because of membership at the
                              recorded level;
    kind = almost-radiation : verdict false because aut is an almost-radiation.
    """

    kind: str
    witness: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None
    level: Optional[int] = None


_SEARCH_BOX = range(-3, 4)


def _pair_witness(aut: EventuallyUniform) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Search one or two adjacent blocks for w with {w, Bw} unimodular."""
    b = aut.block.matrix
    d = aut.d
    candidates = [IntMatrix.block_diag([b])]
    if d <= 2:
        candidates.append(IntMatrix.block_diag([b, b]))
    for mat in candidates:
        dim = mat.rows
        for coeffs in itertools.product(_SEARCH_BOX, repeat=dim):
            if not any(coeffs):
                continue
            image = mat.apply(coeffs)
            cols = IntMatrix.from_rows([[coeffs[i], image[i]] for i in range(dim)])
            try:
                if is_unimodular_set(cols):
                    return tuple(coeffs), image
            except DimensionError:
                continue
    return None


def is_normal_generator(aut: RepAut) -> tuple[bool, GeneratorEvidence]:
    """Dichotomy: aut normally generates the whole group iff no level m >= 2
    admits it and it is not an almost-radiation."""
    if is_almost_radiation(aut):
        return False, GeneratorEvidence("almost-radiation")
    levels = lambda_levels(aut)
    if isinstance(levels, OnlyTrivial):
        w = _pair_witness(aut)  # only EventuallyUniform reaches this branch
        if w is not None:
            return True, GeneratorEvidence("pair-witness", witness=w)
        return True, GeneratorEvidence("dichotomy-only")
    if isinstance(levels, DivisorsOf):
        smallest = min(factorize(levels.g))
        return False, GeneratorEvidence("lambda-level", level=smallest)
    if isinstance(levels, RuleBased):
        return False, GeneratorEvidence("lambda-level", level=levels.prefix[0] if levels.prefix else _first_tail(levels))
    # AllLevels for a non-almost-radiation cannot happen for these classes,
    # but keep the dichotomy total:
    return False, GeneratorEvidence("lambda-level", level=2)


def _first_tail(levels: RuleBased) -> int:
    return GradedBlock(levels.prefix, levels.excluded).multiplier(len(levels.prefix))


def common_lambda_level(auts: Sequence[RepAut]) -> Union[AllLevels, int, None]:
    """Largest m >= 2 admitting every input, if one exists.

    Finite level sets combine through gcd, with AllLevels absorbing.  When
    every constraint is rule-based the level sets are unbounded, so the
    search is cut off at a documented bound: the product of all finite
    multipliers in the rules times the largest prime named in their data
    (at least 2).  Within that bound the answer is exact.
    """
    if not auts:
        raise ValueError("need at least one automorphism")
    levels = [lambda_levels(a) for a in auts]
    if any(isinstance(lv, OnlyTrivial) for lv in levels):
        return None
    finite = [lv.g for lv in levels if isinstance(lv, DivisorsOf)]
    rules = [lv for lv in levels if isinstance(lv, RuleBased)]
    if not finite and not rules:
        return AllLevels()
    if finite:
        g = gcd_list(finite)
        if g < 2:
            return None
        divisors = sorted(_divisors(g), reverse=True)
        for m in divisors:
            if m >= 2 and all(r.member(m) for r in rules):
                return m
        return None
    bound = 1
    largest = 2
    for r in rules:
        for mult in r.prefix:
            bound *= mult
            largest = max(largest, max(factorize(mult)))
        if r.excluded:
            largest = max(largest, max(r.excluded))
    bound = max(bound, 2) * largest
    for m in range(bound, 1, -1):
        if all(r.member(m) for r in rules):
            return m
    return None


def _divisors(g: int) -> list[int]:
    out = []
    f = 1
    while f * f <= g:
        if g % f == 0:
            out.append(f)
            out.append(g // f)
        f += 1
    return sorted(set(out))


# -- ladder report ---------------------------------------------------------


LOWER_BOUND_NOT_CONSTRUCTED = (
    "lower bound guaranteed by the one-generator ladder theorem; "
    "witness chain not constructed for this block shape"
)

NO_MAXIMAL_LEVEL = "no maximal level; ladder rung undefined"


@dataclass(frozen=True)
class LadderReport:
    """Where an automorphism sits in the sandwich Gamma(m) <= nc <= Lambda(m).

    kind = generator        : rung 1, the normal closure is everything;
    kind = almost-radiation : rung 0;
    kind = rung             : rung m = the maximal level, with a constructive
                              witness chain when the block has shear shape;
    kind = no-maximal-level : graded level sets are unbounded, so no rung.
    """

    kind: str
    rung: Optional[int] = None
    scalar: Optional[int] = None
    chain: Optional["_witness.WitnessChain"] = None
    note: Optional[str] = None


def ladder_report(aut: RepAut) -> LadderReport:
    if isinstance(aut, GradedBlock):
        return LadderReport("no-maximal-level", note=NO_MAXIMAL_LEVEL)
    generator, _ = is_normal_generator(aut)
    if generator:
        return LadderReport("generator", rung=1)
    if is_almost_radiation(aut):
        return LadderReport("almost-radiation", rung=0)
    levels = lambda_levels(aut)
    assert isinstance(levels, DivisorsOf)
    g = levels.g
    scalar = _scalar_witness(aut.block.matrix, g)
    shape = _witness.shear_shape(aut)
    if shape is not None:
        chain = _witness.km_pipeline(aut)
        return LadderReport("rung", rung=g, scalar=scalar, chain=chain)
    return LadderReport("rung", rung=g, scalar=scalar, note=LOWER_BOUND_NOT_CONSTRUCTED)


def _scalar_witness(b: IntMatrix, m: int) -> int:
    """The k in [0, m) with b == k*I mod m; exists whenever m | scalar_defect."""
    for k in range(m):
        if all(
            (b.data[i][j] - (k if i == j else 0)) % m == 0
            for i in range(b.rows)
            for j in range(b.cols)
        ):
            return k
    raise ValueError(f"matrix is not scalar mod {m}")


def classification_summary(aut: RepAut) -> dict:
    """One-stop structured report used by the CLI."""
    generator, evidence = is_normal_generator(aut)
    report = ladder_report(aut)
    return {
        "congruence_gcd": congruence_gcd(aut),
        "lambda_levels": lambda_levels(aut),
        "nu_set": nu_set(aut),
        "almost_radiation": is_almost_radiation(aut),
        "normal_generator": generator,
        "generator_evidence": evidence,
        "ladder": report,
    }
