"""Finitely-describable automorphisms of the infinite-rank free abelian group.

Three representation classes are supported:

* ``Finitary``      -- acts by a unimodular matrix on finitely many listed
                       coordinates and fixes everything else;
* ``EventuallyUniform`` -- acts by an arbitrary unimodular matrix on a finite
                       initial window and then repeats one unimodular block
                       forever (window size 0 gives a fully uniform block
                       automorphism);
* ``GradedBlock``   -- acts on coordinate pairs (x_n, y_n) = (2n, 2n+1) by
                       x_n -> x_n + (m_0 m_1 ... m_n) y_n, where the
                       multipliers start with a finite prefix and continue
                       through the increasing primes outside an exclusion
                       set (each tail prime used once).

Every representation carries its inverse witness from construction, so
"automorphism" is enforced rather than assumed.  Window matrices follow the
column convention of :mod:`infrank.intmat`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .errors import AlignmentError, CompositionUnsupportedError, ValidationError
from .intmat import IntMatrix
from .numth import factorize, is_prime, next_prime


@dataclass(frozen=True)
class BlockSpec:
    """A unimodular block together with its inverse."""

    matrix: IntMatrix
    inverse: IntMatrix

    @property
    def d(self) -> int:
        return self.matrix.rows


def block_spec(matrix: IntMatrix) -> BlockSpec:
    if not matrix.is_square:
        raise ValidationError("block matrix must be square")
    if matrix.rows == 0:
        raise ValidationError("block dimension must be positive")
    if not matrix.is_unimodular():
        raise ValidationError("block matrix is not unimodular")
    return BlockSpec(matrix, matrix.inverse())


@dataclass(frozen=True)
class Finitary:
    support: tuple[int, ...]
    matrix: IntMatrix
    inverse: IntMatrix = field(compare=False)

    @property
    def max_support(self) -> int:
        return self.support[-1] if self.support else -1


@dataclass(frozen=True)
class EventuallyUniform:
    window: IntMatrix
    window_inverse: IntMatrix = field(compare=False)
    block: BlockSpec = field(compare=True)

    @property
    def window_size(self) -> int:
        return self.window.rows

    @property
    def d(self) -> int:
        return self.block.d


@dataclass(frozen=True)
class GradedBlock:
    prefix: tuple[int, ...]
    excluded: frozenset[int]
    negated: bool = False

    def tail_skip(self) -> frozenset[int]:
        """Primes the tail enumeration must not use.

        The tail enumerates fresh primes: anything in the exclusion set or
        already dividing a prefix multiplier is skipped, so every tail
        prime contributes exponent exactly one over the whole family.
        """
        skip = set(self.excluded)
        for m in self.prefix:
            skip.update(factorize(m))
        return frozenset(skip)

    def multiplier(self, n: int) -> int:
        if n < len(self.prefix):
            return self.prefix[n]
        skip = self.tail_skip()
        p = 1
        for _ in range(n - len(self.prefix) + 1):
            p = next_prime(p)
            while p in skip:
                p = next_prime(p)
        return p

    def increment(self, n: int) -> int:
        """Shear coefficient of pair n: +-(m_0 m_1 ... m_n)."""
        c = 1
        for t in range(n + 1):
            c *= self.multiplier(t)
        return -c if self.negated else c


RepAut = Union[Finitary, EventuallyUniform, GradedBlock]


# -- constructors -------------------------------------------------------


def finitary(support, matrix: IntMatrix) -> Finitary:
    """Finitary automorphism; coordinates where it acts trivially are pruned."""
    sup = tuple(support)
    if len(set(sup)) != len(sup):
        raise ValidationError("support indices must be distinct")
    if any(i < 0 for i in sup):
        raise ValidationError("support indices must be nonnegative")
    if sorted(sup) != list(sup):
        order = sorted(range(len(sup)), key=lambda a: sup[a])
        matrix = IntMatrix.from_rows(
            [[matrix.data[order[a]][order[b]] for b in range(len(sup))] for a in range(len(sup))]
        )
        sup = tuple(sorted(sup))
    if matrix.rows != len(sup) or matrix.cols != len(sup):
        raise ValidationError("support size and matrix size disagree")
    if sup and not matrix.is_unimodular():
        raise ValidationError("finitary matrix is not unimodular")
    keep = [
        a
        for a in range(len(sup))
        if not (
            all(matrix.data[a][b] == (1 if a == b else 0) for b in range(len(sup)))
            and all(matrix.data[b][a] == (1 if a == b else 0) for b in range(len(sup)))
        )
    ]
    if len(keep) != len(sup):
        sup = tuple(sup[a] for a in keep)
        matrix = IntMatrix.from_rows([[matrix.data[a][b] for b in keep] for a in keep])
    inv = matrix.inverse() if sup else matrix
    return Finitary(sup, matrix, inv)


def identity_aut() -> Finitary:
    return finitary((), IntMatrix.from_rows([]))


def uniform(block_matrix: IntMatrix) -> EventuallyUniform:
    """Block automorphism repeating one block from coordinate 0 on."""
    return eventually_uniform(IntMatrix.from_rows([]), block_matrix)


def eventually_uniform(window: IntMatrix, block_matrix: IntMatrix) -> EventuallyUniform:
    blk = block_spec(block_matrix)
    if not window.is_square:
        raise ValidationError("window must be square")
    if window.rows % blk.d:
        raise AlignmentError(
            f"window size {window.rows} is not a multiple of block dimension {blk.d}"
        )
    # canonical form: absorb trailing window blocks that already repeat the block
    d = blk.d
    while window.rows >= d:
        n0 = window.rows
        if (
            window.submatrix(n0 - d, n0, n0 - d, n0) == block_matrix
            and all(x == 0 for row in window.data[: n0 - d] for x in row[n0 - d :])
            and all(x == 0 for row in window.data[n0 - d :] for x in row[: n0 - d])
        ):
            window = window.submatrix(0, n0 - d, 0, n0 - d)
        else:
            break
    if window.rows:
        if not window.is_unimodular():
            raise ValidationError("window matrix is not unimodular")
        w_inv = window.inverse()
    else:
        w_inv = window
    return EventuallyUniform(window, w_inv, blk)


def graded(prefix, excluded, negated: bool = False) -> GradedBlock:
    pre = tuple(int(m) for m in prefix)
    if any(m < 2 for m in pre):
        raise ValidationError("graded multipliers must all be >= 2")
    exc = frozenset(int(p) for p in excluded)
    for p in exc:
        if not is_prime(p):
            raise ValidationError(f"exclusion set entry {p} is not prime")
    return GradedBlock(pre, exc, negated)


def is_identity(aut: RepAut) -> bool:
    if isinstance(aut, Finitary):
        return not aut.support
    if isinstance(aut, EventuallyUniform):
        return (
            aut.window == IntMatrix.identity(aut.window_size)
            and aut.block.matrix == IntMatrix.identity(aut.d)
        )
    return False


# -- window evaluation ---------------------------------------------------


def window_matrix(aut: RepAut, n: int) -> IntMatrix:
    """The n x n matrix of ``aut`` restricted to the first n coordinates.

    All three classes map coordinates below an aligned n into coordinates
    below n, so the restriction is well defined and unimodular.
    """
    if n < 0:
        raise AlignmentError("window size must be nonnegative")
    if isinstance(aut, Finitary):
        if n <= aut.max_support:
            raise AlignmentError(
                f"window {n} does not cover finitary support up to {aut.max_support}"
            )
        rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        for a, i in enumerate(aut.support):
            for b, j in enumerate(aut.support):
                rows[i][j] = aut.matrix.data[a][b]
        return IntMatrix.from_rows(rows)
    if isinstance(aut, EventuallyUniform):
        n0, d = aut.window_size, aut.d
        if n < n0 or (n - n0) % d:
            raise AlignmentError(f"window {n} misaligned for window {n0} + blocks of {d}")
        tail = (n - n0) // d
        return IntMatrix.block_diag([aut.window] + [aut.block.matrix] * tail)
    if n % 2:
        raise AlignmentError("graded windows must be even")
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for pair in range(n // 2):
        rows[2 * pair + 1][2 * pair] = aut.increment(pair)
    return IntMatrix.from_rows(rows)


def aligned_window(aut: RepAut, at_least: int = 1) -> int:
    """Smallest valid window size >= at_least for this representation."""
    if isinstance(aut, Finitary):
        return max(at_least, aut.max_support + 1)
    if isinstance(aut, EventuallyUniform):
        n0, d = aut.window_size, aut.d
        n = max(at_least, n0, d)
        rem = (n - n0) % d
        return n + (d - rem if rem else 0)
    return at_least + (at_least % 2)


# -- group operations ----------------------------------------------------


def invert(aut: RepAut) -> RepAut:
    if isinstance(aut, Finitary):
        return Finitary(aut.support, aut.inverse, aut.matrix)
    if isinstance(aut, EventuallyUniform):
        return EventuallyUniform(
            aut.window_inverse, aut.window, BlockSpec(aut.block.inverse, aut.block.matrix)
        )
    return GradedBlock(aut.prefix, aut.excluded, not aut.negated)


def _finitary_as_uniform(aut: Finitary, d: int) -> EventuallyUniform:
    n0 = aligned_window(aut, d)
    n0 += (-n0) % d
    return eventually_uniform(window_matrix(aut, n0), IntMatrix.identity(d))


def reblock(aut: EventuallyUniform, new_d: int) -> EventuallyUniform:
    """The same automorphism re-described with blocks of size ``new_d``."""
    if new_d % aut.d:
        raise AlignmentError(f"new block size {new_d} not a multiple of {aut.d}")
    n0 = aut.window_size
    n0 += (-n0) % new_d
    big = IntMatrix.block_diag([aut.block.matrix] * (new_d // aut.d))
    return eventually_uniform(window_matrix(aut, n0), big)


def direct_sum_and_reblock(aut: EventuallyUniform, factor: int) -> EventuallyUniform:
    """Re-chunk a fully uniform automorphism into blocks ``factor`` times larger."""
    if factor < 1:
        raise ValueError(f"reblocking factor must be >= 1, got {factor}")
    if not isinstance(aut, EventuallyUniform) or aut.window_size != 0:
        raise ValidationError("direct_sum_and_reblock expects a uniform block automorphism")
    if factor == 1:
        return aut
    return reblock(aut, factor * aut.d)


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


def compose(a: RepAut, b: RepAut) -> RepAut:
    """Symbolic product: window(compose(a, b), n) == window(a, n) * window(b, n).

    Closure rules: finitary pairs stay finitary; anything involving an
    eventually-uniform representation becomes eventually uniform over a
    common block size; graded representations close only against their own
    inverses and the identity.  Unsupported pairs raise
    ``CompositionUnsupportedError`` -- callers needing only finite data
    should evaluate windows instead.
    """
    if is_identity(a):
        return b
    if is_identity(b):
        return a
    if isinstance(a, Finitary) and isinstance(b, Finitary):
        sup = tuple(sorted(set(a.support) | set(b.support)))
        pos = {i: k for k, i in enumerate(sup)}
        size = len(sup)

        def embed(f: Finitary) -> IntMatrix:
            rows = [[1 if i == j else 0 for j in range(size)] for i in range(size)]
            for x, i in enumerate(f.support):
                for y, j in enumerate(f.support):
                    rows[pos[i]][pos[j]] = f.matrix.data[x][y]
            return IntMatrix.from_rows(rows)

        return finitary(sup, embed(a) * embed(b))
    if isinstance(a, GradedBlock) or isinstance(b, GradedBlock):
        if (
            isinstance(a, GradedBlock)
            and isinstance(b, GradedBlock)
            and a.prefix == b.prefix
            and a.excluded == b.excluded
        ):
            if a.negated != b.negated:
                return identity_aut()
            raise CompositionUnsupportedError(
                "product of two equal graded shears doubles every increment, which "
                "leaves the graded multiplier pattern; evaluate windows instead"
            )
        raise CompositionUnsupportedError(
            "graded representations compose symbolically only with the identity "
            "and with their own inverse shape; evaluate windows instead"
        )
    # at least one EventuallyUniform from here on
    if isinstance(a, Finitary):
        a = _finitary_as_uniform(a, b.d if isinstance(b, EventuallyUniform) else 1)
    if isinstance(b, Finitary):
        b = _finitary_as_uniform(b, a.d)
    d = _lcm(a.d, b.d)
    n0 = max(a.window_size, b.window_size, d)
    n0 += (-n0) % d
    window = window_matrix(a, n0) * window_matrix(b, n0)
    block_a = IntMatrix.block_diag([a.block.matrix] * (d // a.d))
    block_b = IntMatrix.block_diag([b.block.matrix] * (d // b.d))
    out = eventually_uniform(window, block_a * block_b)
    return identity_aut() if is_identity(out) else out


def compose_all(*auts: RepAut) -> RepAut:
    out: RepAut = identity_aut()
    for aut in auts:
        out = compose(out, aut)
    return out
