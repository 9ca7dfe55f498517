import random

import pytest

from infrank.autrep import window_matrix
from infrank.classify import congruence_gcd
from infrank.errors import DimensionError, ShapeError, ValidationError
from infrank.intmat import IntMatrix, is_unimodular_set, solve_columns
from infrank.witness import (
    WitnessChain,
    bezout_combine,
    canonical_shear,
    conjugate_product_reduce,
    euler_reduce,
    factor_block_unitriangular,
    km_pipeline,
    order_n_shear,
    shear_shape,
    tau_power,
    verify_chain,
    wans_sum_certificate,
    wans_three,
    zaushko_commutator,
)
from infrank.words import Conj, evaluate_word, verify_certificate

from test_intmat import random_matrix, random_unimodular


# -- tau powers --------------------------------------------------------------


def test_tau_power_block():
    assert tau_power(1).block.matrix == IntMatrix.from_rows([[1, 1], [0, 1]])
    assert tau_power(4).block.matrix == IntMatrix.from_rows([[1, 4], [0, 1]])


def test_tau_power_zero_is_identity_action():
    assert window_matrix(tau_power(0), 4) == IntMatrix.identity(4)


def test_tau_power_congruence():
    assert congruence_gcd(tau_power(4)) == 4
    assert congruence_gcd(tau_power(4)) % 2 == 0


# -- order-n shears -----------------------------------------------------------


def test_shear_n3_matches_printed_matrices():
    for m in range(2, 11):
        t = order_n_shear(3, m)
        assert t.lam == IntMatrix.from_rows(
            [[0, -1, 0, 0], [1, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
        )
        assert t.sigma == IntMatrix.from_rows(
            [[-m, 0, 1, 0], [0, 1, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]
        )
        assert t.gamma == t.sigma.inverse() * t.lam * t.sigma


def test_shear_n3_m5_action():
    t = order_n_shear(3, 5)
    e1 = (1, 0, 0, 0)
    assert t.gamma.apply(e1) == (1, 0, 5, -5)
    assert t.gamma.power(3) == IntMatrix.identity(4)
    assert t.gamma != IntMatrix.identity(4)


def test_shear_n4_m2():
    t = order_n_shear(4, 2)
    assert t.gamma.power(4) == IntMatrix.identity(6)
    assert t.gamma.power(2) != IntMatrix.identity(6)
    e1 = tuple(1 if i == 0 else 0 for i in range(6))
    want = list(e1)
    want[3] += 2  # e_4 (1-based)
    want[4] -= 2  # e_5
    assert t.gamma.apply(e1) == tuple(want)


@pytest.mark.parametrize("n", range(2, 9))
@pytest.mark.parametrize("m", range(2, 11))
def test_shear_invariants(n, m):
    t = order_n_shear(n, m)
    r = 2 * n - 2
    eye = IntMatrix.identity(r)
    assert t.gamma.power(n) == eye
    for j in range(1, n):
        if n % j == 0:
            assert t.gamma.power(j) != eye
    e1 = tuple(1 if i == 0 else 0 for i in range(r))
    assert t.gamma.apply(e1) == tuple(e1[i] + m * t.shear[i] for i in range(r))


def test_shear_lambda_stabilizes_sigma_span():
    for n in (3, 4, 5):
        t = order_n_shear(n, 3)
        r = 2 * n - 2
        span = IntMatrix.from_rows([row[1:] for row in t.sigma.data])
        for j in range(1, r):
            image = t.lam.apply(t.sigma.col(j))
            assert solve_columns(span, image) is not None


def test_shear_rejects_bad_args():
    with pytest.raises(ValueError):
        order_n_shear(1, 3)
    with pytest.raises(ValueError):
        order_n_shear(3, 1)


# -- commutator shear ---------------------------------------------------------


def test_zaushko_negation():
    sigma, word, cert = zaushko_commutator(IntMatrix.from_rows([[-1]]))
    # sigma(y_0) = y_0 + 2 x_0
    assert window_matrix(sigma, 2).col(1) == (2, 1)
    assert verify_certificate(cert).ok


def test_zaushko_identity_rho():
    sigma, _, cert = zaushko_commutator(IntMatrix.identity(3))
    assert window_matrix(sigma, 6) == IntMatrix.identity(6)
    assert verify_certificate(cert).ok


def test_zaushko_swap():
    rho = IntMatrix.from_rows([[0, 1], [1, 0]])
    sigma, word, cert = zaushko_commutator(rho)
    assert verify_certificate(cert).ok
    w = window_matrix(sigma, 4)
    # y_i picks up x_i - x_{swap(i)}
    assert w.col(2) == (1, -1, 1, 0)
    assert w.col(3) == (-1, 1, 0, 1)


def test_zaushko_random_identity():
    rng = random.Random(40)
    for _ in range(30):
        d = rng.randint(1, 4)
        rho = random_unimodular(rng, d)
        sigma, word, cert = zaushko_commutator(rho)
        assert verify_certificate(cert).ok
        n = 4 * d
        w = evaluate_word(word, cert.environment, n)
        assert w == window_matrix(sigma, n)
        # fixes X coordinates, shears y_i by x_i - rho x_i
        for block in range(2):
            base = 2 * d * block
            for i in range(d):
                col = w.col(base + i)
                assert col == tuple(1 if j == base + i else 0 for j in range(n))
            for i in range(d):
                col = list(w.col(base + d + i))
                assert col[base + d + i] == 1
                x_part = col[base : base + d]
                expected = [
                    (1 if j == i else 0) - rho.data[j][i] for j in range(d)
                ]
                assert x_part == expected


def test_zaushko_rejects_non_unimodular():
    with pytest.raises(ValidationError):
        zaushko_commutator(IntMatrix.from_rows([[2]]))


# -- sum of three -------------------------------------------------------------


def test_wans_zero_gives_companion_split():
    p = IntMatrix.from_rows([[0, -1], [1, 1]])
    parts = wans_three(IntMatrix.zeros(2, 2))
    assert window_matrix(parts[0], 2) == p
    assert window_matrix(parts[1], 2) == IntMatrix.identity(2).scale(-1)
    assert window_matrix(parts[2], 2) == IntMatrix.identity(2) - p
    assert p.det() == 1 and (IntMatrix.identity(2) - p).det() == 1
    # companion identity x^2 - x + 1 = 0
    assert p * p - p + IntMatrix.identity(2) == IntMatrix.zeros(2, 2)


def test_wans_diag_5_7():
    f = IntMatrix.from_rows([[5, 0], [0, 7]])
    parts = wans_three(f)
    assert sum_windows(parts, 2) == f
    for part in parts:
        assert window_matrix(part, 2).det() in (1, -1)


def sum_windows(parts, n):
    out = IntMatrix.zeros(n, n)
    for p in parts:
        out = out + window_matrix(p, n)
    return out


def test_wans_identity_input():
    parts = wans_three(IntMatrix.identity(2))
    assert sum_windows(parts, 2) == IntMatrix.identity(2)
    for part in parts:
        assert window_matrix(part, 4).det() in (1, -1)


def test_wans_random():
    rng = random.Random(41)
    for _ in range(60):
        d = rng.choice([2, 4, 6])
        f = random_matrix(rng, d, d, bound=9)
        parts = wans_three(f)
        assert sum_windows(parts, d) == f
        zero_ext = IntMatrix.from_rows(
            [list(r) + [0] * d for r in f.data] + [[0] * (2 * d) for _ in range(d)]
        )
        assert sum_windows(parts, 2 * d) == zero_ext
        for part in parts:
            w = window_matrix(part, 2 * d)
            assert w.det() in (1, -1)
            assert w * window_matrix(part, 2 * d).inverse() == IntMatrix.identity(2 * d)
        cert = wans_sum_certificate(f, parts)
        assert verify_certificate(cert).ok


def test_wans_tails_fixed():
    p = IntMatrix.from_rows([[0, -1], [1, 1]])
    parts = wans_three(IntMatrix.from_rows([[3, 1], [2, 9]]))
    assert parts[0].block.matrix == p
    assert parts[1].block.matrix == IntMatrix.identity(2).scale(-1)
    assert parts[2].block.matrix == IntMatrix.identity(2) - p


def test_wans_rejects_odd_dimension():
    with pytest.raises(DimensionError):
        wans_three(IntMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))


# -- three-conjugate factorization ---------------------------------------------


def test_factor_zero_is_identity():
    word, cert = factor_block_unitriangular(2, IntMatrix.zeros(2, 2))
    assert verify_certificate(cert).ok
    assert evaluate_word(word, cert.environment, 4) == IntMatrix.identity(4)


def test_factor_identity_z_reproduces_shear():
    word, cert = factor_block_unitriangular(3, IntMatrix.identity(2))
    assert verify_certificate(cert).ok
    got = evaluate_word(word, cert.environment, 4)
    want = IntMatrix.from_rows(
        [[1, 0, 0, 0], [0, 1, 0, 0], [3, 0, 1, 0], [0, 3, 0, 1]]
    )
    assert got == want


def test_factor_example_passes_both_windows():
    word, cert = factor_block_unitriangular(2, IntMatrix.from_rows([[2, 1], [0, 1]]))
    assert cert.windows == (4, 8)
    assert verify_certificate(cert).ok


def test_factor_word_is_three_conjugates():
    word, cert = factor_block_unitriangular(2, IntMatrix.from_rows([[1, 2], [3, 4]]))
    assert len(word.factors) == 3
    assert all(isinstance(f, Conj) for f in word.factors)


def test_factor_factors_lie_in_congruence_subgroup():
    rng = random.Random(42)
    from infrank.autrep import compose_all, invert

    for _ in range(15):
        m = rng.choice([2, 3, 4, 6])
        z = random_matrix(rng, 2, 2, bound=5)
        word, cert = factor_block_unitriangular(m, z)
        env = cert.environment
        for f in word.factors:
            conj = compose_all(env[f.h.name], env[f.g.name], invert(env[f.h.name]))
            assert congruence_gcd(conj) % m == 0


def test_factor_conjugators_fix_x_and_preserve_y():
    word, cert = factor_block_unitriangular(2, IntMatrix.from_rows([[4, 1], [2, 3]]))
    env = cert.environment
    d = 2
    n = 8  # two 2d-blocks, x-coordinates first in each
    for name in ("sigma1", "sigma2", "sigma3"):
        w = window_matrix(env[name], n)
        for block in range(2):
            base = 2 * d * block
            for i in range(d):
                assert w.col(base + i) == tuple(
                    1 if j == base + i else 0 for j in range(n)
                )
            for i in range(d):
                col = w.col(base + d + i)
                for j in range(n):
                    if col[j] and not (base + d <= j < base + 2 * d):
                        raise AssertionError(f"{name} moves y out of its block")


def test_factor_rejects_small_modulus():
    with pytest.raises(ValueError):
        factor_block_unitriangular(1, IntMatrix.zeros(2, 2))


# -- coefficient bookkeeping -----------------------------------------------------


def test_conjugate_product_examples():
    r = conjugate_product_reduce([(3, 2)])
    assert (r.k, r.m, r.coefficients) == (3, 2, (2,))
    r = conjugate_product_reduce([(5, 4), (3, 4)])
    assert (r.k, r.coefficients, r.m) == (15, (12, 4), 4)
    r = conjugate_product_reduce([(1, 6), (1, 10), (1, 15)])
    assert r.coefficients == (6, 10, 15)
    assert r.m == 1


def test_conjugate_product_rejects_non_coprime():
    with pytest.raises(ValueError):
        conjugate_product_reduce([(2, 4)])
    with pytest.raises(ValueError):
        conjugate_product_reduce([(3, 1)])


def test_conjugate_product_gcd_identity_random():
    from math import gcd

    rng = random.Random(43)
    for _ in range(200):
        ell = rng.randint(1, 5)
        pairs = []
        for _ in range(ell):
            m = rng.randint(2, 40)
            k = rng.randint(1, 40)
            while gcd(k, m) != 1:
                k = rng.randint(1, 40)
            pairs.append((k, m))
        r = conjugate_product_reduce(pairs)
        direct = 0
        for _, m in pairs:
            direct = gcd(direct, m)
        assert r.m == direct


def test_euler_reduce():
    assert euler_reduce(3, 4) == 2
    assert euler_reduce(1, 7) == 6
    assert euler_reduce(5, 12) == 4
    assert pow(5, 4, 12) == 1
    with pytest.raises(ValueError):
        euler_reduce(2, 4)


def test_bezout_combine_examples():
    word, cert = bezout_combine(2, 3, 5)
    assert verify_certificate(cert).ok
    assert evaluate_word(word, cert.environment, 4) == window_matrix(tau_power(2), 4)
    word, cert = bezout_combine(1, 2, 3)
    assert verify_certificate(cert).ok
    with pytest.raises(ValueError):
        bezout_combine(2, 3, 3)


# -- pipeline ---------------------------------------------------------------------


def test_shear_shape():
    assert shear_shape(tau_power(4)) == (1, 4)
    assert shear_shape(canonical_shear(3, 4)) == (3, 4)
    assert shear_shape(tau_power(1)) is None  # m = 1 below threshold
    from infrank.autrep import uniform

    assert shear_shape(uniform(IntMatrix.from_rows([[0, 1], [1, 0]]))) is None


def test_pipeline_clean_tau2():
    chain = km_pipeline(tau_power(2))
    assert isinstance(chain, WitnessChain)
    assert chain.level == 2
    assert [s.name for s in chain.steps] == [
        "euler-gcd-reduction",
        "order-2-shear-conjugation",
        "order-3-shear-conjugation",
        "bezout-combination",
    ]
    assert verify_chain(chain).ok
    assert chain.final == tau_power(2)


def test_pipeline_clean_reproduces_tau_m():
    chain = km_pipeline(tau_power(5), coprime=(2, 3))
    last = chain.steps[-1]
    got = evaluate_word(last.word, last.certificates[0].environment, 4)
    assert got == window_matrix(tau_power(5), 4)


def test_pipeline_general_3_4():
    phi = canonical_shear(3, 4)
    chain = km_pipeline(phi)
    assert chain.level == 4
    assert verify_chain(chain).ok
    note = chain.steps[0].note
    assert "k^ell = 9" in note
    assert "gcd 4" in note


def test_pipeline_general_5_6():
    chain = km_pipeline(canonical_shear(5, 6))
    assert chain.level == 6
    assert verify_chain(chain).ok


def test_pipeline_twisted_k1():
    chain = km_pipeline(__import__("infrank.autrep", fromlist=["uniform"]).uniform(
        IntMatrix.from_rows([[9, 4], [2, 1]])
    ))
    assert chain.level == 4
    assert verify_chain(chain).ok


def test_pipeline_rejects_non_shear():
    from infrank.autrep import uniform

    with pytest.raises(ShapeError):
        km_pipeline(uniform(IntMatrix.from_rows([[0, 1], [1, 0]])))
    with pytest.raises(ValueError):
        km_pipeline(tau_power(2), coprime=(2, 4))


def test_pipeline_tracked_pair_unimodular():
    chain = km_pipeline(canonical_shear(3, 2), coprime=(2, 3))
    # the final action certificates pin x0 -> x0 + m p with p fixed
    final = chain.steps[-1]
    action = final.certificates[0]
    vec = list(action.vector)
    tgt = list(action.target_vector)
    diff = [t - v for v, t in zip(vec, tgt)]
    assert sum(1 for x in diff if x) == 1
    assert [x for x in diff if x] == [chain.level]
    cols = IntMatrix.from_rows([[vec[i], diff[i] // chain.level] for i in range(len(vec))])
    assert is_unimodular_set(cols)
