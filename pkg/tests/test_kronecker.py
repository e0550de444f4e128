import itertools

import numpy as np
import pytest

from skewquiver.errors import DomainError
from skewquiver.exactfield import FieldSpec
from skewquiver.kronecker import (
    KroneckerTag,
    derive_regular_swap_matrices,
    kronecker_rep,
    kronecker_sigma,
    kronecker_smash,
    printed_recursion,
    regular_fixed_structures,
    verify_kronecker_classification,
)
from skewquiver.linalg import Matrix
from skewquiver.quiverrep import is_isomorphic, minimal_period, twist
from skewquiver.smash import classify_induced, decompose_smash, is_isomorphic_smash, validate

F = FieldSpec(101)
P = 101


def jordan(lam, l):
    return (np.diag([lam] * l) + np.diag([1] * (l - 1), 1)) % P


def brute_swap(l, lam):
    """All normalized B (last column e_l) with J_mu B J_lam = B, mu = 1/lam, by enumeration."""
    mu = pow(lam, P - 2, P)
    Jl, Jm = jordan(lam, l), jordan(mu, l)
    free = [(i, j) for i in range(l) for j in range(l - 1)]
    sols = []
    for vals in itertools.product(range(P), repeat=len(free)):
        B = np.zeros((l, l), dtype=np.int64)
        B[l - 1, l - 1] = 1
        for (i, j), v in zip(free, vals):
            B[i, j] = v
        if np.array_equal((Jm @ B @ Jl) % P, B):
            sols.append(B)
    return sols


def test_rep_examples():
    p0 = kronecker_rep(KroneckerTag("p", 0), F)
    assert p0.dim_vector == (1, 0)
    r = kronecker_rep(KroneckerTag("r_lambda", 1, 2), F)
    assert r.maps["alpha1"] == Matrix.from_rows(F, [[2]]) and r.maps["alpha0"] == Matrix.from_rows(F, [[1]])
    i1 = kronecker_rep(KroneckerTag("i", 1), F)
    assert i1.dim_vector == (1, 2)
    assert {i1.maps["alpha1"], i1.maps["alpha0"]} == {Matrix.from_rows(F, [[1, 0]]), Matrix.from_rows(F, [[0, 1]])}


def test_bad_tags():
    with pytest.raises(DomainError):
        kronecker_rep(KroneckerTag("r_lambda", 0, 2), F)
    with pytest.raises(DomainError):
        kronecker_smash(KroneckerTag("R_lambda", 1, 0), F)
    with pytest.raises(DomainError):
        kronecker_smash(KroneckerTag("R_lambda", 1, 100), F)
    with pytest.raises(DomainError):
        kronecker_smash(KroneckerTag("P0", 1), FieldSpec(2))


def test_twist_relations():
    s = kronecker_sigma()
    for l in (1, 2, 3):
        assert minimal_period(kronecker_rep(KroneckerTag("p", l), F), s) == 1
        assert minimal_period(kronecker_rep(KroneckerTag("i", l), F), s) == 1
        r2 = kronecker_rep(KroneckerTag("r_lambda", l, 2), F)
        r51 = kronecker_rep(KroneckerTag("r_lambda", l, 51), F)  # 51 = 2^-1 mod 101
        assert is_isomorphic(twist(r2, s), r51)[0]
        r0 = kronecker_rep(KroneckerTag("r_lambda", l, 0), F)
        assert is_isomorphic(twist(r0, s), kronecker_rep(KroneckerTag("r_infinity", l), F))[0]


def test_swap_corner_values():
    for lam in (2, 3, 7):
        d = derive_regular_swap_matrices(1, lam, F)
        assert d.B == Matrix.from_rows(F, [[1]]) and d.A == Matrix.from_rows(F, [[lam]])


@pytest.mark.parametrize("lam", [2, 3])
def test_swap_l2_against_brute_force(lam):
    (B,) = brute_swap(2, lam)
    d = derive_regular_swap_matrices(2, lam, F)
    assert d.B.a.tolist() == B.tolist()
    # hand value: b11 = -lam^2
    assert B[0, 0] == (-lam * lam) % P
    assert d.A.a.tolist() == ((B @ jordan(lam, 2)) % P).tolist()


def test_swap_l3_satisfies_relations():
    for lam in (2, 3):
        d = derive_regular_swap_matrices(3, lam, F)
        B, A = d.B.a, d.A.a
        mu = pow(lam, P - 2, P)
        assert np.array_equal((jordan(mu, 3) @ A) % P, B)
        assert np.array_equal((B @ jordan(lam, 3)) % P, A)
        assert B[2].tolist() == [0, 0, 1] or B[:, 2].tolist() == [0, 0, 1]


def test_printed_recursion_readings():
    for l in (1, 2, 3):
        d = derive_regular_swap_matrices(l, 2, F)
        assert d.recursion["up"] is True
        up = printed_recursion(l, 2, F, "up")
        assert up == (d.B, d.A)
    assert printed_recursion(2, 2, F, "down") is None


def test_smash_examples():
    P1 = kronecker_smash(KroneckerTag("P0", 1), F)
    assert P1.action["a0"] == Matrix.antidiagonal(F, 2) and P1.action["a1"] == Matrix.identity(F, 1)
    for tag in [KroneckerTag(k, l) for k in ("P0", "P1", "I0", "I1") for l in (0, 1, 2)] + [
        KroneckerTag("R_0_inf", 2),
        KroneckerTag("R_lambda", 2, 2),
        KroneckerTag("R_lambda", 3, 3),
    ]:
        M = kronecker_smash(tag, F)
        assert validate(M) == []
        assert M.total_action().pow(2).is_identity()


def test_classify_matches_families():
    s = kronecker_sigma()
    for l in (1, 2):
        got = classify_induced(kronecker_rep(KroneckerTag("p", l), F), s)
        want = [kronecker_smash(KroneckerTag(k, l), F) for k in ("P0", "P1")]
        assert len(got) == 2
        assert sorted(any(is_isomorphic_smash(g, w)[0] for g in got) for w in want) == [True, True]
        (R,) = classify_induced(kronecker_rep(KroneckerTag("r_lambda", l, 2), F), s)
        assert is_isomorphic_smash(R.lift(F), kronecker_smash(KroneckerTag("R_lambda", l, 2), F))[0]


def test_fixed_lambda_routing():
    mods = regular_fixed_structures(2, 1, F)
    assert len(mods) == 2 and all(validate(M) == [] for M in mods)
    assert not is_isomorphic_smash(*mods)[0]


def test_verify_small():
    rep = verify_kronecker_classification(1, [2], F)
    assert rep["failures"] == []
    # P(0), P(1), I(0), I(1) with both signs, R_0inf(1), R_2(1)
    assert rep["module_count"] == 10
    assert rep["iso_classes"] == 10


def test_verify_empty_and_duplicate_lambdas():
    rep = verify_kronecker_classification(1, [], F)
    assert rep["failures"] == [] and rep["module_count"] == 9
    rep = verify_kronecker_classification(1, [2, 51], F)
    assert rep["failures"] == [] and rep["module_count"] == 10


def test_verify_decomposition_singletons():
    for tag in [KroneckerTag("P1", 2), KroneckerTag("R_lambda", 2, 3), KroneckerTag("R_0_inf", 2)]:
        M = kronecker_smash(tag, F)
        assert decompose_smash(M) == [M]
