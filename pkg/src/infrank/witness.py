"""Constructive witness engines.

Each engine turns a membership fact about normal closures into explicit
data: a group word over named automorphisms plus certificates that recheck
the claimed identities by exact window arithmetic.  The composite pipeline
``km_pipeline`` starts from a shear-shaped block automorphism
(x -> k x + m u on every pair, gcd(k, m) = 1) and derives, step by step, an
element of its normal closure acting as the standard shear of modulus m on
an explicit unimodular pair family:

1. Euler reduction: a product of conjugates whose x-action has scalar
   k^phi(m) = 1 mod m, with shear coefficients of gcd exactly m;
2. order-n shear conjugation, for two coprime n: an order-n automorphism
   lambda steers (lambda psi)^n into a clean shear by m*n on a tracked
   coordinate pair;
3. a Bezout combination of the two results with exponents a n1 + b n2 = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence

from .autrep import (
    EventuallyUniform,
    RepAut,
    compose,
    compose_all,
    eventually_uniform,
    invert,
    reblock,
    uniform,
    window_matrix,
)
from .errors import DimensionError, ShapeError, ValidationError
from .intmat import IntMatrix, complete_to_basis, is_unimodular_set, solve_columns
from .numth import euler_phi, factorize, gcd_list, xgcd
from .words import (
    ACTION_ON_VECTOR,
    ORDER,
    WINDOW_IDENTITY,
    WINDOW_SUM,
    Certificate,
    Conj,
    Inverse,
    Named,
    Power,
    Product,
    Token,
    VerifyResult,
    verify_certificate,
)


# -- elementary shears ----------------------------------------------------


def tau_power(m: int) -> EventuallyUniform:
    """The standard shear of modulus m: every pair (u, x) maps x -> x + m u."""
    if m < 0:
        raise ValueError(f"shear modulus must be >= 0, got {m}")
    return uniform(IntMatrix.from_rows([[1, m], [0, 1]]))


def canonical_shear(k: int, m: int) -> EventuallyUniform:
    """A uniform pair automorphism with x -> k x + m u, gcd(k, m) = 1.

    The partner column is the Bezout completion, so the block is [[s, m],
    [-t, k]] with s k + t m = 1; for k = 1 this is exactly ``tau_power(m)``.
    """
    if m < 2:
        raise ValueError(f"shear modulus must be >= 2, got {m}")
    g, s, t = xgcd(k, m)
    if g != 1:
        raise ValueError(f"k = {k} and m = {m} are not coprime")
    return uniform(IntMatrix.from_rows([[s, m], [-t, k]]))


def shear_shape(aut: RepAut) -> Optional[tuple[int, int]]:
    """(k, m) when aut is a uniform pair automorphism with x -> k x + m u."""
    if not isinstance(aut, EventuallyUniform) or aut.window_size != 0 or aut.d != 2:
        return None
    b = aut.block.matrix
    m, k = b.data[0][1], b.data[1][1]
    if m >= 2 and gcd(k, m) == 1:
        return k, m
    return None


# -- order-n shears --------------------------------------------------------


@dataclass(frozen=True)
class ShearTriple:
    """An order-n automorphism shearing e_1 by m along a recorded direction.

    gamma = sigma^-1 * lambda * sigma has multiplicative order exactly n and
    gamma(e_1) = e_1 + m * shear.  For n >= 3 the matrices are the standard
    2(n-1)-dimensional pair (cyclic lambda, mixing sigma) and the shear
    direction is e_n - e_{n+1}; the rank-2 case n = 2 uses sigma = I and
    shear direction e_2, verified by the same invariants.
    """

    n: int
    m: int
    lam: IntMatrix
    sigma: IntMatrix
    gamma: IntMatrix
    shear: tuple[int, ...]


def order_n_shear(n: int, m: int) -> ShearTriple:
    if n < 2 or m < 2:
        raise ValueError(f"need n >= 2 and m >= 2, got n={n}, m={m}")
    if n == 2:
        lam = IntMatrix.from_rows([[1, 0], [m, -1]])
        triple = ShearTriple(2, m, lam, IntMatrix.identity(2), lam, (0, 1))
        _check_shear_triple(triple)
        return triple
    r = 2 * n - 2
    lam_cols: list[list[int]] = []
    for i in range(1, r + 1):  # 1-based basis indices
        col = [0] * r
        if i < n - 1:
            col[i] = 1  # e_{i+1}
        elif i == n - 1:
            for j in range(n - 1):
                col[j] = -1
        else:
            col[i - 1] = 1
        lam_cols.append(col)
    sig_cols: list[list[int]] = []
    for i in range(1, r + 1):
        col = [0] * r
        if i == 1:
            col[0] = -m
            col[n - 1] = 1  # e_n
        elif i <= n - 1:
            col[i - 1] = 1
            col[i + n - 2] = 1  # e_{i+n-1}
        else:
            col[i - n] = 1  # e_{i-n+1}
        sig_cols.append(col)
    lam = IntMatrix.from_rows(list(zip(*lam_cols)))
    sigma = IntMatrix.from_rows(list(zip(*sig_cols)))
    gamma = sigma.inverse() * lam * sigma
    shear = [0] * r
    shear[n - 1] = 1
    shear[n] = -1
    triple = ShearTriple(n, m, lam, sigma, gamma, tuple(shear))
    _check_shear_triple(triple)
    return triple


def _check_shear_triple(t: ShearTriple) -> None:
    r = t.gamma.rows
    eye = IntMatrix.identity(r)
    if t.gamma.power(t.n) != eye:
        raise ValidationError(f"gamma^{t.n} is not the identity")
    for p in factorize(t.n):
        if t.gamma.power(t.n // p) == eye:
            raise ValidationError(f"gamma has order dividing {t.n // p}")
    e1 = tuple(1 if i == 0 else 0 for i in range(r))
    want = tuple(e1[i] + t.m * t.shear[i] for i in range(r))
    if t.gamma.apply(e1) != want:
        raise ValidationError("gamma does not shear e_1 as claimed")
    if t.sigma != IntMatrix.identity(r):
        # lambda must stabilize sigma<e_i : i > 1>, column by column
        sub = IntMatrix.from_rows([row[1:] for row in t.sigma.data])
        for j in range(1, r):
            image = t.lam.apply(t.sigma.col(j))
            if solve_columns(sub, image) is None:
                raise ValidationError("lambda does not stabilize sigma<e_i : i > 1>")


# -- commutator shear (one conjugacy class acting on a complementary moiety) --


def zaushko_commutator(rho_x: IntMatrix) -> tuple[EventuallyUniform, Token, Certificate]:
    """From rho acting on X alone, extract sigma with sigma(y_i) = y_i + x_i - rho(x_i).

    Layout: uniform blocks of size 2d, x-coordinates first.  The returned
    word pi * rho^-1 * tau^-1 * rho * tau * pi lies in the normal closure
    of rho and the certificate checks it equals sigma on windows 2d and 4d.
    """
    if not rho_x.is_square:
        raise DimensionError("rho must be square")
    d = rho_x.rows
    if d < 1:
        raise DimensionError("rho must have positive dimension")
    if not rho_x.is_unimodular():
        raise ValidationError("rho is not unimodular")
    eye = IntMatrix.identity(d)
    zero = IntMatrix.zeros(d, d)
    rho = uniform(_block2(rho_x, zero, zero, eye))
    tau = uniform(_block2(eye, zero, eye, eye))
    pi = uniform(_block2(zero, eye, eye, zero))
    sigma = uniform(_block2(eye, eye - rho_x, zero, eye))
    word = Product(
        (
            Named("pi"),
            Inverse(Named("rho")),
            Inverse(Named("tau")),
            Named("rho"),
            Named("tau"),
            Named("pi"),
        )
    )
    env = {"rho": rho, "tau": tau, "pi": pi}
    cert = Certificate(
        kind=WINDOW_IDENTITY,
        windows=(2 * d, 4 * d),
        environment=env,
        word=word,
        target_aut=sigma,
    )
    _require(cert)
    return sigma, word, cert


def _block2(a: IntMatrix, b: IntMatrix, c: IntMatrix, d: IntMatrix) -> IntMatrix:
    """[[a, b], [c, d]] as one matrix."""
    top = a.hstack(b)
    bottom = c.hstack(d)
    return IntMatrix(top.data + bottom.data)


# -- sum of three automorphisms -------------------------------------------


_P = IntMatrix.from_rows([[0, -1], [1, 1]])  # companion of x^2 - x + 1, det 1


def wans_three(f: IntMatrix) -> tuple[EventuallyUniform, EventuallyUniform, EventuallyUniform]:
    """Three automorphisms whose sum is f extended by zero.

    Windows (size d) sum to f; the repeating tails are fixed as P, -I and
    I - P, which sum to the zero map.  When f + I - P_hat is unimodular the
    windows are simply (P_hat, -I, f + I - P_hat); otherwise f is split via
    its Smith form, pairing diagonal entries as diag(a, b) = [[a, 1], [1, 0]]
    + [[0, -1], [-1, b]] (both determinant -1) and splitting the second
    summand through P.  Only the sum-of-three contract is normative; every
    output is checked against it before returning.
    """
    if not f.is_square:
        raise DimensionError("input must be square")
    d = f.rows
    if d < 2 or d % 2:
        raise DimensionError(f"dimension must be even and >= 2, got {d}")
    half = d // 2
    eye = IntMatrix.identity(d)
    p_hat = IntMatrix.block_diag([_P] * half)
    direct = f + eye - p_hat
    if direct.det() in (1, -1):
        windows = (p_hat, eye.scale(-1), direct)
    else:
        from .intmat import snf

        res = snf(f)
        diag = res.diagonal()
        e_blocks = []
        f_blocks = []
        for i in range(half):
            a, b = diag[2 * i], diag[2 * i + 1]
            e_blocks.append(IntMatrix.from_rows([[a, 1], [1, 0]]))
            f_blocks.append(IntMatrix.from_rows([[0, -1], [-1, b]]))
        u_inv = res.u.inverse()
        v_inv = res.v.inverse()
        a_part = u_inv * IntMatrix.block_diag(e_blocks) * v_inv
        b_part = u_inv * IntMatrix.block_diag(f_blocks) * v_inv
        windows = (b_part * p_hat, a_part, b_part * (eye - p_hat))
    tails = (_P, IntMatrix.identity(2).scale(-1), IntMatrix.identity(2) - _P)
    if windows[0] + windows[1] + windows[2] != f:
        raise ValidationError("window sum does not reproduce the input")
    if tails[0] + tails[1] + tails[2] != IntMatrix.zeros(2, 2):
        raise ValidationError("tail patterns do not cancel")
    out = tuple(eventually_uniform(w, t) for w, t in zip(windows, tails))
    return out  # type: ignore[return-value]


def wans_sum_certificate(
    f: IntMatrix, parts: Sequence[EventuallyUniform]
) -> Certificate:
    """Certificate that the three windows add up to f extended by zero."""
    d = f.rows
    env = {f"sigma{i + 1}": aut for i, aut in enumerate(parts)}
    cert = Certificate(
        kind=WINDOW_SUM,
        windows=(d, 2 * d),
        environment=env,
        target_matrix=f,
        summand_words=tuple(Named(f"sigma{i + 1}") for i in range(len(parts))),
    )
    _require(cert)
    return cert


# -- block-unitriangular factorization -------------------------------------


def factor_block_unitriangular(m: int, z: IntMatrix) -> tuple[Token, Certificate]:
    """Write the block-unitriangular beta (x_i -> x_i + m z_i, y fixed) as a
    product of exactly three conjugates of the standard shear tau^m.

    The conjugators embed the three summands of ``wans_three(z)`` as
    automorphisms acting identically on X and preserving Y; the certificate
    checks the product equals beta on windows 2d and 4d.
    """
    if m < 2:
        raise ValueError(f"shear modulus must be >= 2, got {m}")
    if not z.is_square:
        raise DimensionError("z must be square")
    d = z.rows
    parts = wans_three(z)
    eye = IntMatrix.identity(d)
    zero = IntMatrix.zeros(d, d)
    half = d // 2
    env: dict[str, RepAut] = {
        "tau_m": uniform(_block2(eye, zero, eye.scale(m), eye)),
    }
    factors = []
    for i, part in enumerate(parts, start=1):
        name = f"sigma{i}"
        tail = IntMatrix.block_diag([part.block.matrix] * half)
        env[name] = eventually_uniform(
            _block2(eye, zero, zero, window_matrix(part, d)),
            _block2(eye, zero, zero, tail),
        )
        factors.append(Conj(Named("tau_m"), Named(name)))
    word = Product(tuple(factors))
    beta = eventually_uniform(_block2(eye, zero, z.scale(m), eye), IntMatrix.identity(2))
    cert = Certificate(
        kind=WINDOW_IDENTITY,
        windows=(2 * d, 4 * d),
        environment=env,
        word=word,
        target_aut=beta,
    )
    _require(cert)
    return word, cert


# -- scalar bookkeeping -----------------------------------------------------


@dataclass(frozen=True)
class ConjugateProduct:
    """Coefficient data of a product of pair shears x -> k_s x + m_s y_s."""

    k: int
    m: int
    coefficients: tuple[int, ...]


def conjugate_product_reduce(pairs: Sequence[tuple[int, int]]) -> ConjugateProduct:
    """Combine shear pairs (k_s, m_s): the product acts by prod(k_s) on x and
    its shear coefficients ((prod_{t>s} k_t) m_s, ..., m_l) have gcd equal to
    gcd(m_1, ..., m_l)."""
    if not pairs:
        raise ValueError("need at least one pair")
    for k_s, m_s in pairs:
        if m_s < 2:
            raise ValueError(f"moduli must be >= 2, got {m_s}")
        if gcd(k_s, m_s) != 1:
            raise ValueError(f"pair ({k_s}, {m_s}) is not coprime")
    ell = len(pairs)
    coeffs = []
    for s in range(ell):
        c = pairs[s][1]
        for t in range(s + 1, ell):
            c *= pairs[t][0]
        coeffs.append(c)
    k = 1
    for k_s, _ in pairs:
        k *= k_s
    m = abs(gcd_list(coeffs))
    expected = abs(gcd_list([m_s for _, m_s in pairs]))
    if m != expected:
        raise ValidationError(f"coefficient gcd {m} differs from direct gcd {expected}")
    return ConjugateProduct(k, m, tuple(coeffs))


def euler_reduce(k: int, m: int) -> int:
    """Euler phi of m, checked to annihilate k: k^phi(m) = 1 mod m."""
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    if gcd(k, m) != 1:
        raise ValueError(f"k = {k} and m = {m} are not coprime")
    ell = euler_phi(m)
    if pow(k, ell, m) != 1 % m:
        raise ValidationError(f"{k}^{ell} is not 1 mod {m}")
    return ell


def bezout_combine(m: int, n1: int, n2: int) -> tuple[Token, Certificate]:
    """Combine tau^(m n1) and tau^(m n2) into tau^m by Bezout exponents."""
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    if n1 < 2 or n2 < 2:
        raise ValueError("coprime pair entries must be >= 2")
    g, a, b = xgcd(n1, n2)
    if g != 1:
        raise ValueError(f"{n1} and {n2} are not coprime")
    word = Product((Power(Named("tau_mn1"), a), Power(Named("tau_mn2"), b)))
    env = {"tau_mn1": tau_power(m * n1), "tau_mn2": tau_power(m * n2)}
    cert = Certificate(
        kind=WINDOW_IDENTITY,
        windows=(4, 8),
        environment=env,
        word=word,
        target_aut=tau_power(m),
    )
    _require(cert)
    return word, cert


# -- the composite pipeline -------------------------------------------------


@dataclass(frozen=True)
class ChainStep:
    name: str
    word: Token
    certificates: tuple[Certificate, ...]
    note: str = ""


@dataclass(frozen=True)
class WitnessChain:
    """Derivation phi -> psi -> (order-n conjugations) -> shear witness.

    ``level`` is the modulus m with Gamma(m) <= nc(phi) established at
    window scale; ``final`` is the last derived element.  Every step's
    certificates re-verify from the serialized chain alone.
    """

    steps: tuple[ChainStep, ...]
    final: RepAut
    level: int
    scope_note: str


SCOPE_NOTE_CLEAN = (
    "input shear is already clean (k = 1); every step is an exact window identity"
)
SCOPE_NOTE_GENERAL = (
    "final witness is the action-form shear on the tracked pair family; the "
    "pair-interleaving normalization to a fully uniform shear needs conjugators "
    "with nontrivial complement coupling, outside the representable classes"
)


def verify_chain(chain: WitnessChain) -> VerifyResult:
    ok = True
    lines: list[str] = []
    for step in chain.steps:
        for cert in step.certificates:
            res = verify_certificate(cert)
            ok = ok and res.ok
            lines.extend(f"{step.name}: {line}" for line in res.report)
    return VerifyResult(ok, tuple(lines))


def km_pipeline(phi: RepAut, coprime: tuple[int, int] = (2, 3)) -> WitnessChain:
    """Witness chain showing Gamma(m) <= nc(phi) for a shear-shaped phi.

    phi must be a uniform pair automorphism with x -> k x + m u per pair,
    gcd(k, m) = 1 and m >= 2 (``canonical_shear`` builds one).  Raises
    ``ShapeError`` otherwise.
    """
    shape = shear_shape(phi)
    if shape is None:
        raise ShapeError("pipeline input must be a uniform pair shear x -> k x + m u")
    k, m = shape
    n1, n2 = coprime
    if n1 < 2 or n2 < 2 or gcd(n1, n2) != 1:
        raise ValueError(f"({n1}, {n2}) is not a coprime pair of numbers >= 2")
    if phi.block.matrix == IntMatrix.from_rows([[1, m], [0, 1]]):
        return _pipeline_clean(phi, m, n1, n2)
    return _pipeline_general(phi, k, m, n1, n2)


def _require(cert: Certificate) -> None:
    res = verify_certificate(cert)
    if not res.ok:
        raise ValidationError("certificate failed its own check: " + "; ".join(res.report))


def _pipeline_clean(phi: RepAut, m: int, n1: int, n2: int) -> WitnessChain:
    env = {"phi": phi}
    reduce_data = conjugate_product_reduce([(1, m)])
    cert1 = Certificate(
        kind=ACTION_ON_VECTOR,
        windows=(2, 4),
        environment=env,
        word=Named("phi"),
        vector=(0, 1),
        target_vector=(m, 1),
    )
    _require(cert1)
    steps = [
        ChainStep(
            "euler-gcd-reduction",
            Named("phi"),
            (cert1,),
            note=f"k = 1: single factor, coefficients {list(reduce_data.coefficients)}",
        )
    ]
    for n in (n1, n2):
        word_n = Power(Named("phi"), n)
        cert_n = Certificate(
            kind=WINDOW_IDENTITY,
            windows=(4, 8),
            environment=env,
            word=word_n,
            target_aut=tau_power(m * n),
        )
        _require(cert_n)
        steps.append(
            ChainStep(
                f"order-{n}-shear-conjugation",
                word_n,
                (cert_n,),
                note="degenerate: the shear is clean, so powering needs no conjugation",
            )
        )
    _, a, b = xgcd(n1, n2)
    word3 = Product((Power(Power(Named("phi"), n1), a), Power(Power(Named("phi"), n2), b)))
    cert3 = Certificate(
        kind=WINDOW_IDENTITY,
        windows=(4, 8),
        environment=env,
        word=word3,
        target_aut=tau_power(m),
    )
    _require(cert3)
    steps.append(
        ChainStep(
            "bezout-combination",
            word3,
            (cert3,),
            note=f"{a}*{n1} + {b}*{n2} = 1",
        )
    )
    return WitnessChain(tuple(steps), tau_power(m), m, SCOPE_NOTE_CLEAN)


def _perm_swap(size: int, i: int, j: int) -> IntMatrix:
    rows = [[1 if a == b else 0 for b in range(size)] for a in range(size)]
    rows[i][i] = rows[j][j] = 0
    rows[i][j] = rows[j][i] = 1
    return IntMatrix.from_rows(rows)


def _unit(size: int, i: int) -> list[int]:
    v = [0] * size
    v[i] = 1
    return v


def _pipeline_general(phi: RepAut, k: int, m: int, n1: int, n2: int) -> WitnessChain:
    ell = euler_reduce(k, m)
    s_chunk = 2 * (ell + 1)
    env: dict[str, RepAut] = {"phi": phi}
    phi_s = reblock(phi, s_chunk)

    # step 1: conjugates h_s phi h_s^-1 redirect the shear of pair 0 onto the
    # partner slots of pairs 1..ell; their product has x-scalar k^ell = 1 + q m
    conjugators = []
    for s in range(1, ell + 1):
        name = f"h{s}"
        env[name] = uniform(_perm_swap(s_chunk, 0, 2 * s))
        conjugators.append(name)
    factors = [Conj(Named("phi"), Named(name)) for name in reversed(conjugators)]
    word_psi: Token = Product(tuple(factors)) if len(factors) != 1 else factors[0]
    psi = compose_all(
        *[compose_all(env[name], phi_s, invert(env[name])) for name in reversed(conjugators)]
    )
    assert isinstance(psi, EventuallyUniform) and psi.window_size == 0

    x_col = list(psi.block.matrix.col(1))
    k_ell = k**ell
    if x_col[1] != k_ell or any(c % m for i, c in enumerate(x_col) if i != 1):
        raise ValidationError("conjugate product lost the expected x-action")
    z_vec = [c // m for c in x_col]
    z_vec[1] = (k_ell - 1) // m
    pair_cols = IntMatrix.from_rows([[_unit(s_chunk, 1)[i], z_vec[i]] for i in range(s_chunk)])
    if not is_unimodular_set(pair_cols):
        raise ValidationError("tracked pair {x, z} is not unimodular")
    reduce_data = conjugate_product_reduce([(k, m)] * ell)
    cert1a = Certificate(
        kind=WINDOW_IDENTITY,
        windows=(s_chunk, 2 * s_chunk),
        environment=env,
        word=word_psi,
        target_aut=psi,
    )
    cert1b = Certificate(
        kind=ACTION_ON_VECTOR,
        windows=(s_chunk, 2 * s_chunk),
        environment=env,
        word=word_psi,
        vector=tuple(_unit(s_chunk, 1)),
        target_vector=tuple(x_col),
    )
    _require(cert1a)
    _require(cert1b)
    steps = [
        ChainStep(
            "euler-gcd-reduction",
            word_psi,
            (cert1a, cert1b),
            note=(
                f"ell = {ell}, x-scalar k^ell = {k_ell}, shear coefficients "
                f"{list(reduce_data.coefficients)} with gcd {reduce_data.m}"
            ),
        )
    ]

    # steps 2: for each n, an order-n lambda built from two embedded copies of
    # the order-n shear steers (lambda psi)^n into x0 -> x0 + m n p, p fixed,
    # where x0 and p are the tracked x-slots of the first two chunks
    tracked: dict[int, RepAut] = {}
    words2: dict[int, Token] = {}
    x0 = 1
    for n in (n1, n2):
        s2 = 2 * n * s_chunk
        p = s_chunk + 1
        psi2 = reblock(psi, s2)
        za = z_vec + [0] * (s2 - s_chunk)
        zp = [0] * s_chunk + z_vec + [0] * (s2 - 2 * s_chunk)
        triple = order_n_shear(n, m)
        r = triple.gamma.rows
        pool = iter(range(2 * s_chunk, s2))
        cols: list[list[int]] = []
        for copy, (base, steer) in enumerate(
            (
                (x0, [e_p - z for e_p, z in zip(_unit(s2, p), za)]),
                (p, [-z for z in zp]),
            )
        ):
            first = [m * z for z in (za if copy == 0 else zp)]
            first[base] += 1
            cols.append(first)
            if n == 2:
                cols.append(list(steer))
                continue
            anchor = next(pool)
            for j in range(2, r + 1):  # images of e_2 .. e_r, 1-based
                if j == triple.n:
                    cols.append([_unit(s2, anchor)[i] + steer[i] for i in range(s2)])
                elif j == triple.n + 1:
                    cols.append(_unit(s2, anchor))
                else:
                    cols.append(_unit(s2, next(pool)))
        g_mat = complete_to_basis(IntMatrix.from_rows(list(zip(*cols))))
        core = IntMatrix.block_diag([triple.gamma, triple.gamma, IntMatrix.identity(s2 - 2 * r)])
        lam = uniform(g_mat * core * g_mat.inverse())
        lam_name = f"lam{n}"
        env[lam_name] = lam
        word_n = Product(
            tuple(Conj(word_psi, Power(Named(lam_name), j)) for j in range(1, n + 1))
        )
        step_aut = compose(lam, psi2)
        phi1 = step_aut
        for _ in range(n - 1):
            phi1 = compose(phi1, step_aut)
        cert2a = Certificate(
            kind=ORDER,
            windows=(s2,),
            environment=env,
            word=Named(lam_name),
            order=n,
        )
        cert2b = Certificate(
            kind=WINDOW_IDENTITY,
            windows=(s2, 2 * s2),
            environment=env,
            word=word_n,
            target_aut=phi1,
        )
        target_x = _unit(s2, x0)
        target_x[p] += m * n
        cert2c = Certificate(
            kind=ACTION_ON_VECTOR,
            windows=(s2, 2 * s2),
            environment=env,
            word=word_n,
            vector=tuple(_unit(s2, x0)),
            target_vector=tuple(target_x),
        )
        cert2d = Certificate(
            kind=ACTION_ON_VECTOR,
            windows=(s2, 2 * s2),
            environment=env,
            word=word_n,
            vector=tuple(_unit(s2, p)),
            target_vector=tuple(_unit(s2, p)),
        )
        for cert in (cert2a, cert2b, cert2c, cert2d):
            _require(cert)
        steps.append(
            ChainStep(
                f"order-{n}-shear-conjugation",
                word_n,
                (cert2a, cert2b, cert2c, cert2d),
                note=f"tracked pair: coordinates {x0} and {p}; blocks of size {s2}",
            )
        )
        tracked[n] = phi1
        words2[n] = word_n

    # step 3: Bezout combination of the two tracked shears
    _, a, b = xgcd(n1, n2)
    word3 = Product((Power(words2[n1], a), Power(words2[n2], b)))
    combo = compose(_aut_power(tracked[n1], a), _aut_power(tracked[n2], b))
    w_big = 2 * n1 * n2 * s_chunk
    p = s_chunk + 1
    target_x = _unit(w_big, x0)
    target_x[p] += m
    cert3a = Certificate(
        kind=ACTION_ON_VECTOR,
        windows=(w_big, 2 * w_big),
        environment=env,
        word=word3,
        vector=tuple(_unit(w_big, x0)),
        target_vector=tuple(target_x),
    )
    cert3b = Certificate(
        kind=ACTION_ON_VECTOR,
        windows=(w_big, 2 * w_big),
        environment=env,
        word=word3,
        vector=tuple(_unit(w_big, p)),
        target_vector=tuple(_unit(w_big, p)),
    )
    _require(cert3a)
    _require(cert3b)
    steps.append(
        ChainStep(
            "bezout-combination",
            word3,
            (cert3a, cert3b),
            note=f"{a}*{n1} + {b}*{n2} = 1; shear by m = {m} on the tracked pair",
        )
    )
    return WitnessChain(tuple(steps), combo, m, SCOPE_NOTE_GENERAL)


def _aut_power(aut: RepAut, e: int) -> RepAut:
    if e < 0:
        return _aut_power(invert(aut), -e)
    out: RepAut = compose_all()
    for _ in range(e):
        out = compose(out, aut)
    return out
