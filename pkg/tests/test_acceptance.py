"""Acceptance checks; each test prints one PASS/FAIL line.

Tolerances are pinned below.  All comparisons are exact (integers or
field elements), so the only tunables are trial counts and pass rates.
"""

import numpy as np
import pytest

from skewquiver.exactfield import FieldElement, FieldSpec
from skewquiver.fixtures import A3_NAMES, A3_TWIST_TABLE, a3_indecomposables, a3_sigma
from skewquiver.kronecker import (
    KroneckerTag,
    derive_regular_swap_matrices,
    kronecker_rep,
    kronecker_sigma,
    kronecker_smash,
    verify_kronecker_classification,
)
from skewquiver.linalg import Matrix, commutant_nth_root, fitting_split, kernel_matrix, rref
from skewquiver.quiverrep import (
    decompose,
    direct_sum,
    hom_basis,
    injective_rep,
    is_isomorphic,
    make_rng,
    minimal_period,
    multiset_isomorphic,
    orbit_module,
    projective_rep,
    random_conjugate,
    simple_rep,
)
from skewquiver.smash import (
    SmashModule,
    character_twist,
    classify_induced,
    classify_kind,
    conjugate_smash,
    decompose_smash,
    induce_canonical,
    induce_from_path_algebra,
    induce_from_subgroup,
    injective_smash,
    is_isomorphic_smash,
    normalize_isomorphism,
    projective_smash,
    simple_smash,
    smash_direct_sum,
    validate,
)

F = FieldSpec(101)
TWIST_REQUIRED = 6  # of 6 fixtures
SIGMA_EQUIVALENT_CLASSES = 4
SMASH_CLASSES = 6
DECOMPOSE_TRIALS = 20
DECOMPOSE_PASS_RATE = 1.0
NORMALIZE_RANDOM = 50
NORMALIZE_PASS_RATE = 1.0
KRONECKER_L_MAX = 3
KRONECKER_LAMBDAS = (2, 3)
KIND_PASS_RATE = 1.0
PROPERTY_CASES_MIN = 1000
PROPERTY_FAILURES_MAX = 0


@pytest.fixture
def say(capsys):
    def emit(label, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance] {label}: {'PASS' if ok else 'FAIL'} ({detail})")
        return ok

    return emit


@pytest.fixture(scope="module")
def a3():
    return a3_sigma(), a3_indecomposables(F)


def distinct_classes(mods, iso):
    reps = []
    for M in mods:
        if not any(iso(M, R)[0] for R in reps):
            reps.append(M)
    return reps


def test_twist_table(a3, say):
    from skewquiver.quiverrep import twist

    sigma, fx = a3
    hits = sum(is_isomorphic(twist(fx[n], sigma), fx[A3_TWIST_TABLE[n]])[0] for n in A3_NAMES)
    assert say("twist-table", hits == TWIST_REQUIRED, f"{hits}/{len(A3_NAMES)} twist equalities, zero tolerance")


def test_sigma_equivalent_indecomposables(a3, say):
    sigma, fx = a3
    orbits = [orbit_module(fx[n], sigma) for n in A3_NAMES]
    classes = distinct_classes(orbits, is_isomorphic)
    expected = [
        direct_sum([fx["L1"], fx["L-1"]]),
        direct_sum([fx["L01"], fx["L-10"]]),
        fx["L0"],
        fx["L101"],
    ]
    matched = multiset_isomorphic(classes, expected, is_isomorphic)
    pairwise = all(
        not is_isomorphic(a, b)[0] for k, a in enumerate(expected) for b in expected[k + 1:]
    )
    ok = matched and pairwise and len(classes) == SIGMA_EQUIVALENT_CLASSES
    assert say("sigma-equivalent-indecomposables", ok, f"{len(classes)} classes, matches listed four: {matched}, pairwise non-iso: {pairwise}")


def test_classification_count(a3, say):
    sigma, fx = a3
    counts_ok, every = True, []
    for n in A3_NAMES:
        m = minimal_period(fx[n], sigma)
        mods = classify_induced(fx[n], sigma)
        counts_ok &= len(mods) == sigma.n // m
        counts_ok &= len(distinct_classes(mods, is_isomorphic_smash)) == len(mods)
        every += mods
    classes = distinct_classes(every, is_isomorphic_smash)
    rng = np.random.Generator(np.random.Philox(2024))
    passed = 0
    for trial in range(DECOMPOSE_TRIALS):
        picks = [classes[k] for k in rng.integers(0, len(classes), size=int(rng.integers(1, 5)))]
        S = smash_direct_sum(picks)
        _, change = random_conjugate(S.rep, seed=trial)
        got = decompose_smash(conjugate_smash(S, change), seed=trial)
        passed += multiset_isomorphic(got, picks, is_isomorphic_smash, seed=trial)
    rate = passed / DECOMPOSE_TRIALS
    ok = counts_ok and len(classes) == SMASH_CLASSES and rate >= DECOMPOSE_PASS_RATE
    assert say("smash-classification-count", ok, f"counts 2/m ok: {counts_ok}, {len(classes)} classes, decompose {passed}/{DECOMPOSE_TRIALS}")


def random_sigma_equivalent(sigma, fx, rng, seed):
    names = rng.choice(A3_NAMES, size=int(rng.integers(1, 4)))
    X = direct_sum([orbit_module(fx[n], sigma) for n in names])
    return random_conjugate(X, seed)[0]


def test_normalization(a3, say):
    sigma, fx = a3
    inputs = [orbit_module(fx[n], sigma) for n in A3_NAMES]
    rng = np.random.Generator(np.random.Philox(4))
    inputs += [random_sigma_equivalent(sigma, fx, rng, seed) for seed in range(NORMALIZE_RANDOM)]
    good, extended = 0, 0
    for seed, X in enumerate(inputs):
        phi = normalize_isomorphism(X, sigma, 1, seed)
        M = SmashModule(phi.target, sigma, phi.blocks)
        extended += M.field != F
        good += M.total_action().pow(sigma.n).is_identity() and validate(M) == []
    rate = good / len(inputs)
    assert say("normalization", rate >= NORMALIZE_PASS_RATE, f"{good}/{len(inputs)} exact Phi^n = id and valid, {extended} over an extension")


def test_path_induction(a3, say):
    sigma, fx = a3
    ok_all = []
    for n in A3_NAMES:
        X = fx[n]
        m = minimal_period(X, sigma)
        parts = decompose_smash(induce_from_path_algebra(X, sigma, m))
        base = induce_canonical(X, sigma, m)
        want = [character_twist(base, i) for i in range(1, sigma.n // m + 1)]
        ok_all.append(len(parts) == len(want) and multiset_isomorphic(parts, want, is_isomorphic_smash))
    assert say("path-algebra-induction", all(ok_all), f"{sum(ok_all)}/{len(ok_all)} fixtures: exact multiset equality")


def test_hom_dimension(a3, say):
    sigma, fx = a3
    checks = []
    for n in A3_NAMES:
        X = fx[n]
        m = minimal_period(X, sigma)
        end = len(hom_basis(X, X))
        base = induce_canonical(X, sigma, m)
        for i in range(1, sigma.n // m + 1):
            twisted = character_twist(base, i)
            checks.append(len(hom_basis(X, twisted.rep)) == end)
            # same identity after inducing up to the full group (underlying: the orbit sum)
            checks.append(len(hom_basis(X, induce_from_subgroup(twisted, 1).rep)) == end)
    assert say("hom-dimension-identity", all(checks), f"{sum(checks)}/{len(checks)} exact integer equalities")


def test_kronecker(say):
    rep = verify_kronecker_classification(KRONECKER_L_MAX, KRONECKER_LAMBDAS, F, seed=0)
    s = kronecker_sigma()
    induced_ok = []
    for l in range(1, KRONECKER_L_MAX + 1):
        for kind, fams in (("p", ("P0", "P1")), ("i", ("I0", "I1"))):
            got = classify_induced(kronecker_rep(KroneckerTag(kind, l), F), s)
            want = [kronecker_smash(KroneckerTag(f, l), F) for f in fams]
            induced_ok.append(multiset_isomorphic(got, want, is_isomorphic_smash))
        for lam in KRONECKER_LAMBDAS:
            got = classify_induced(kronecker_rep(KroneckerTag("r_lambda", l, lam), F), s)
            want = [kronecker_smash(KroneckerTag("R_lambda", l, lam), F)]
            induced_ok.append(multiset_isomorphic(got, want, is_isomorphic_smash))
    corners = all(
        derive_regular_swap_matrices(1, lam, F).B == Matrix.from_rows(F, [[1]])
        and derive_regular_swap_matrices(1, lam, F).A == Matrix.from_rows(F, [[lam]])
        for lam in KRONECKER_LAMBDAS
    )
    mods = rep["modules"]
    families_ok = all(e["valid"] and e["indecomposable"] for e in mods) and rep["iso_classes"] == rep["module_count"]
    ok = families_ok and all(induced_ok) and corners and rep["failures"] == []
    detail = (
        f"{rep['module_count']} modules, {rep['iso_classes']} iso classes, "
        f"induced {sum(induced_ok)}/{len(induced_ok)}, corners B1=[1] A1=[lambda]: {corners}"
    )
    assert say("kronecker-families", ok, detail)


def test_kinds(a3, say):
    sigma, fx = a3
    cases = []
    for s, fam in ((sigma, "a3"), (kronecker_sigma(), "kronecker")):
        q = s.quiver
        for v in q.vertices:
            for l in range(s.n):
                cases.append(("simple", simple_smash(simple_rep(q, v, F), s, l)))
                cases.append(("projective", projective_smash(projective_rep(q, v, F), s, l)))
                cases.append(("injective", injective_smash(injective_rep(q, v, F), s, l)))
    cases.append(("none-of-these", kronecker_smash(KroneckerTag("R_0_inf", 1), F)))
    hits = sum(label in classify_kind(M).labels for label, M in cases)
    rate = hits / len(cases)
    assert say("simple-projective-injective", rate >= KIND_PASS_RATE, f"{hits}/{len(cases)} labelled correctly")


# ------------------------------------------------------------------ property suite
def _rref_case(Fld, rng):
    r, c = (int(x) for x in rng.integers(1, 7, size=2))
    k = int(rng.integers(0, min(r, c) + 1))
    A = Matrix(Fld, Fld.random(rng, (r, k))) @ Matrix(Fld, Fld.random(rng, (k, c)))
    R, rank, _ = rref(A)
    K = kernel_matrix(A)
    return rref(R)[0] == R and rank + K.cols == c and (A @ K).is_zero()


def _fitting_case(Fld, rng):
    n = int(rng.integers(1, 6))
    k = int(rng.integers(0, n + 1))
    f = Matrix(Fld, Fld.random(rng, (n, k))) @ Matrix(Fld, Fld.random(rng, (k, n)))
    Pk, Pi = fitting_split(f)
    return (
        Pk @ Pk == Pk
        and Pi @ Pi == Pi
        and (Pk + Pi).is_identity()
        and (Pk @ Pi).is_zero()
        and Pk @ f == f @ Pk
        and (f.pow(n) @ Pk).is_zero()
    )


def _root_case(Fld, rng):
    n = int(rng.choice([2, 3, 5]))
    k = int(rng.integers(1, 5))
    while True:
        g = Matrix(Fld, Fld.random(rng, (k, k)))
        if g.is_invertible():
            break
    theta = g.pow(n)
    rho = commutant_nth_root(theta, n, extend_field=True)
    t = theta.lift(rho.field)
    return rho.pow(n) == t and rho @ t == t @ rho


def _field_case(Fld, rng):
    a, b, c = (FieldElement(Fld, int(v)) for v in rng.integers(0, Fld.q, size=3))
    ok = (a + b) + c == a + (b + c) and a * (b + c) == a * b + a * c and a * b == b * a
    if a:
        ok &= a * a.inverse() == Fld.one and a ** (Fld.q - 1) == Fld.one
    return ok


def _decompose_case(fx, rng, seed):
    names = list(rng.choice(A3_NAMES, size=int(rng.integers(1, 5))))
    X, _ = random_conjugate(direct_sum([fx[n] for n in names]), seed)
    got = decompose(X, seed=seed, catalog=list(fx.values()))
    return sorted(g.key() for g in got) == sorted(fx[n].key() for n in names)


def test_property_suite(a3, say):
    sigma, fx = a3
    fields = [FieldSpec(2), FieldSpec(3), FieldSpec(101), FieldSpec(3, 2), FieldSpec(101, 2)]
    rng = make_rng(9)
    counts, failures = {}, {}

    def tally(name, ok):
        counts[name] = counts.get(name, 0) + 1
        failures[name] = failures.get(name, 0) + (not ok)

    for k in range(300):
        tally("rref/rank-nullity", _rref_case(fields[k % 5], rng))
    for k in range(250):
        tally("fitting", _fitting_case(fields[k % 5], rng))
    for k in range(150):
        tally("nth-root", _root_case([FieldSpec(101), FieldSpec(7), FieldSpec(11)][k % 3], rng))
    for k in range(300):
        tally("field-axioms", _field_case(fields[k % 5], rng))
    for k in range(60):
        tally("decompose-round-trip", _decompose_case(fx, rng, k))
    total, bad = sum(counts.values()), sum(failures.values())
    ok = total >= PROPERTY_CASES_MIN and bad <= PROPERTY_FAILURES_MAX
    detail = f"{total} cases, {bad} failures; " + ", ".join(f"{k} {failures[k]}/{counts[k]}" for k in counts)
    assert say("property-suite", ok, detail)
