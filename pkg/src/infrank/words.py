"""Formal words over named automorphisms, and re-checkable certificates.

A word is a finite token tree over named atoms; evaluating it on a window
multiplies the token matrices left to right, so a product token behaves
exactly like composition of the underlying automorphisms (the rightmost
factor acts first on column vectors).  ``Conj(g, h)`` abbreviates the
product h * g * h^-1.

A certificate packages one claim about a word -- equality with a target on
a window, exact multiplicative order, or the image of a specific vector --
together with everything needed to recheck it.  Verification is a pure
function of the certificate contents.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

from .autrep import RepAut, aligned_window, window_matrix
from .autrep import invert as invert_aut
from .errors import DimensionError, ValidationError, WordError
from .intmat import IntMatrix
from .numth import factorize


@dataclass(frozen=True)
class Named:
    name: str


@dataclass(frozen=True)
class Inverse:
    inner: "Token"


@dataclass(frozen=True)
class Power:
    inner: "Token"
    exponent: int


@dataclass(frozen=True)
class Conj:
    """h * g * h^-1."""

    g: "Token"
    h: "Token"


@dataclass(frozen=True)
class Product:
    factors: tuple["Token", ...]


Token = Union[Named, Inverse, Power, Conj, Product]
Environment = Mapping[str, RepAut]


def evaluate_word(word: Token, env: Environment, n: int) -> IntMatrix:
    """The n x n matrix of ``word``, multiplying factors left to right.

    Inverses are taken structurally (every atom carries its inverse
    witness), and repeated subtrees are evaluated once per call.
    """
    return _eval(word, env, n, False, {})


def _eval(word: Token, env: Environment, n: int, inv: bool, memo: dict) -> IntMatrix:
    key = (id(word), inv)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(word, Named):
        try:
            aut = env[word.name]
        except KeyError:
            raise WordError(f"unresolved name {word.name!r}") from None
        out = window_matrix(invert_aut(aut) if inv else aut, n)
    elif isinstance(word, Inverse):
        out = _eval(word.inner, env, n, not inv, memo)
    elif isinstance(word, Power):
        e = word.exponent
        if e < 0:
            out = _eval(word.inner, env, n, not inv, memo).power(-e)
        else:
            out = _eval(word.inner, env, n, inv, memo).power(e)
    elif isinstance(word, Conj):
        # (h g h^-1)^-1 = h g^-1 h^-1
        h = _eval(word.h, env, n, False, memo)
        h_inv = _eval(word.h, env, n, True, memo)
        g = _eval(word.g, env, n, inv, memo)
        out = h * g * h_inv
    elif isinstance(word, Product):
        out = IntMatrix.identity(n)
        factors = reversed(word.factors) if inv else word.factors
        for f in factors:
            out = out * _eval(f, env, n, inv, memo)
    else:
        raise WordError(f"unknown token {word!r}")
    memo[key] = out
    return out


def word_names(word: Token) -> set[str]:
    if isinstance(word, Named):
        return {word.name}
    if isinstance(word, (Inverse, Power)):
        return word_names(word.inner)
    if isinstance(word, Conj):
        return word_names(word.g) | word_names(word.h)
    if isinstance(word, Product):
        out: set[str] = set()
        for f in word.factors:
            out |= word_names(f)
        return out
    raise WordError(f"unknown token {word!r}")


def min_window(word: Token, env: Environment, at_least: int = 1) -> int:
    """A window size valid for every atom of the word."""
    n = at_least
    for name in word_names(word):
        if name not in env:
            raise WordError(f"unresolved name {name!r}")
        n = max(n, aligned_window(env[name], n))
    changed = True
    while changed:
        changed = False
        for name in word_names(word):
            m = aligned_window(env[name], n)
            if m > n:
                n = m
                changed = True
    return n


# -- certificates --------------------------------------------------------

WINDOW_IDENTITY = "window-identity"
ORDER = "order"
ACTION_ON_VECTOR = "action-on-vector"
WINDOW_SUM = "window-sum"

_CLAIM_KINDS = (WINDOW_IDENTITY, ORDER, ACTION_ON_VECTOR, WINDOW_SUM)


@dataclass(frozen=True)
class Certificate:
    """A single re-checkable claim.

    kind = window-identity : word equals ``target_aut`` (or ``target_matrix``)
                             on every listed window;
    kind = order           : word has exact multiplicative order ``order`` on
                             every listed window;
    kind = action-on-vector: word maps ``vector`` to ``target_vector`` (both
                             zero-padded to each window);
    kind = window-sum      : the windows of ``summand_words`` add up to
                             ``target_matrix`` zero-extended past its size.
    """

    kind: str
    windows: tuple[int, ...]
    environment: Mapping[str, RepAut] = field(default_factory=dict)
    word: Optional[Token] = None
    target_aut: Optional[RepAut] = None
    target_matrix: Optional[IntMatrix] = None
    vector: Optional[tuple[int, ...]] = None
    target_vector: Optional[tuple[int, ...]] = None
    order: Optional[int] = None
    summand_words: tuple[Token, ...] = ()

    def __post_init__(self):
        if self.kind not in _CLAIM_KINDS:
            raise ValidationError(f"unknown claim kind {self.kind!r}")
        if not self.windows:
            raise ValidationError("certificate needs at least one window")


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    report: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


def _pad(vec: Sequence[int], n: int) -> tuple[int, ...]:
    if len(vec) > n:
        if any(vec[n:]):
            raise DimensionError(f"vector support exceeds window {n}")
        return tuple(vec[:n])
    return tuple(vec) + (0,) * (n - len(vec))


def _first_difference(a: IntMatrix, b: IntMatrix) -> str:
    for i in range(a.rows):
        for j in range(a.cols):
            if a.data[i][j] != b.data[i][j]:
                return f"entry ({i},{j}): got {a.data[i][j]}, expected {b.data[i][j]}"
    return "no difference"


def verify_certificate(cert: Certificate) -> VerifyResult:
    """Recheck a certificate; never consults anything outside its fields."""
    lines: list[str] = []
    ok = True
    for n in cert.windows:
        if cert.kind == WINDOW_IDENTITY:
            got = evaluate_word(cert.word, cert.environment, n)
            if cert.target_aut is not None:
                want = window_matrix(cert.target_aut, n)
            elif cert.target_matrix is not None:
                want = _extend(cert.target_matrix, n, fill_identity=True)
            else:
                raise ValidationError("window-identity certificate lacks a target")
            if got == want:
                lines.append(f"window {n}: identity holds")
            else:
                ok = False
                lines.append(f"window {n}: MISMATCH at {_first_difference(got, want)}")
        elif cert.kind == ORDER:
            if cert.order is None or cert.order < 1:
                raise ValidationError("order certificate needs a positive order")
            w = evaluate_word(cert.word, cert.environment, n)
            eye = IntMatrix.identity(n)
            if w.power(cert.order) != eye:
                ok = False
                lines.append(f"window {n}: word^{cert.order} is not the identity")
                continue
            bad = None
            for p in factorize(cert.order):
                if w.power(cert.order // p) == eye:
                    bad = cert.order // p
                    break
            if bad is not None:
                ok = False
                lines.append(f"window {n}: order divides {bad}, not exactly {cert.order}")
            else:
                lines.append(f"window {n}: order is exactly {cert.order}")
        elif cert.kind == ACTION_ON_VECTOR:
            if cert.vector is None or cert.target_vector is None:
                raise ValidationError("action certificate needs vector and target_vector")
            w = evaluate_word(cert.word, cert.environment, n)
            got_v = w.apply(_pad(cert.vector, n))
            want_v = _pad(cert.target_vector, n)
            if got_v == want_v:
                lines.append(f"window {n}: action holds")
            else:
                k = next(i for i in range(n) if got_v[i] != want_v[i])
                ok = False
                lines.append(
                    f"window {n}: MISMATCH at coordinate {k}: got {got_v[k]}, expected {want_v[k]}"
                )
        else:  # WINDOW_SUM
            if not cert.summand_words or cert.target_matrix is None:
                raise ValidationError("window-sum certificate needs summands and a target")
            total = IntMatrix.zeros(n, n)
            for wtok in cert.summand_words:
                total = total + evaluate_word(wtok, cert.environment, n)
            want = _extend(cert.target_matrix, n)
            if total == want:
                lines.append(f"window {n}: sum matches target")
            else:
                ok = False
                lines.append(f"window {n}: MISMATCH at {_first_difference(total, want)}")
    return VerifyResult(ok, tuple(lines))


def _extend(m: IntMatrix, n: int, fill_identity: bool = False) -> IntMatrix:
    """Extend a square matrix to size n, padding with zeros or the identity.

    Sum targets extend by zero (the endomorphism vanishes past its data);
    identity targets extend by the identity (the automorphism fixes later
    coordinates).
    """
    if m.rows > n:
        raise DimensionError(f"target of size {m.rows} exceeds window {n}")
    if m.rows == n:
        return m
    rows = [list(r) + [0] * (n - m.rows) for r in m.data]
    for i in range(m.rows, n):
        tail = [0] * n
        if fill_identity:
            tail[i] = 1
        rows.append(tail)
    return IntMatrix.from_rows(rows)
