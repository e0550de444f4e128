import numpy as np
import pytest

from skewquiver.errors import DomainError, MismatchError, NotIndecomposableError, ParseError
from skewquiver.exactfield import FieldSpec
from skewquiver.fixtures import A3_NAMES, A3_TWIST_TABLE, a3_indecomposables, a3_quiver
from skewquiver.kronecker import KroneckerTag, kronecker_rep, kronecker_sigma
from skewquiver.linalg import Matrix
from skewquiver.quiverrep import (
    Quiver,
    QuiverAutomorphism,
    RepMorphism,
    Representation,
    conjugate,
    decompose,
    direct_sum,
    hom_basis,
    injective_rep,
    is_indecomposable,
    is_isomorphic,
    is_sigma_equivalent,
    krull_schmidt,
    load_quiver,
    dump_quiver,
    minimal_period,
    multiset_isomorphic,
    orbit_module,
    projective_rep,
    random_conjugate,
    simple_rep,
    twist,
    twist_morphism,
)

F = FieldSpec(101)


def brute_hom_dim(X, Y):
    """dim Hom by enumerating all block tuples over F_2 (tiny dims only)."""
    import itertools

    verts = list(X.quiver.vertices)
    shapes = [(Y.dims[v], X.dims[v]) for v in verts]
    sizes = [a * b for a, b in shapes]
    count = 0
    for bits in itertools.product((0, 1), repeat=sum(sizes)):
        blocks, k = {}, 0
        for v, (a, b), s in zip(verts, shapes, sizes):
            blocks[v] = Matrix(X.field, np.array(bits[k:k + s], dtype=np.int64).reshape(a, b))
            k += s
        if RepMorphism(X, Y, blocks).is_valid():
            count += 1
    return count.bit_length() - 1  # |Hom| = 2^dim


# ----------------------------------------------------------- quiver
def test_quiver_validation():
    with pytest.raises(DomainError):
        Quiver([0, 1], [("a", 0, 1), ("a", 1, 0)])
    with pytest.raises(DomainError):
        Quiver([0, 1], [("a", 0, 1), ("b", 1, 0)])  # cycle
    with pytest.raises(DomainError):
        Quiver([0, 1, 2], [("a", 0, 1)])  # disconnected
    q = a3_quiver()
    with pytest.raises(DomainError):
        QuiverAutomorphism(q, {-1: 0, 0: -1}, {})


def test_quiver_json_round_trip():
    q, s = load_quiver(dump_quiver(kronecker_sigma()))
    assert s == kronecker_sigma() and s.n == 2


def test_paths():
    q = a3_quiver()
    assert q.paths(-1, 0) == [("alpha",)]
    assert q.paths(0, -1) == []
    assert q.paths(0, 0) == [()]


# ----------------------------------------------------------- twist
def test_a3_twist_table(a3):
    sigma, fx = a3
    for name in A3_NAMES:
        assert twist(fx[name], sigma) == fx[A3_TWIST_TABLE[name]]


def test_twist_identity_and_order(a3):
    sigma, fx = a3
    ident = QuiverAutomorphism.identity(sigma.quiver)
    X = direct_sum([fx["L-10"], fx["L101"]])
    assert twist(X, ident) == X
    assert twist(twist(X, sigma, 1), sigma, sigma.n - 1) == X


def test_twist_morphism(a3):
    sigma, fx = a3
    X, Y = fx["L-10"], fx["L-1"]
    (f,) = hom_basis(X, Y)
    tf = twist_morphism(f, sigma, 1)
    assert tf.source == twist(X, sigma) and tf.target == twist(Y, sigma) and tf.is_valid()
    assert twist_morphism(f, sigma, 0) == f
    assert twist_morphism(twist_morphism(f, sigma, 1), sigma, 1) == f
    I = RepMorphism.identity(X)
    assert twist_morphism(I, sigma, 1) == RepMorphism.identity(twist(X, sigma))


def test_representation_shape_errors():
    q = a3_quiver()
    with pytest.raises(DomainError, match="arrow alpha"):
        Representation(q, F, {-1: 1, 0: 2}, {"alpha": Matrix.identity(F, 1)})


# ----------------------------------------------------------- hom
def test_hom_examples(a3):
    sigma, fx = a3
    assert len(hom_basis(fx["L-10"], fx["L-1"])) == 1
    assert len(hom_basis(fx["L-1"], fx["L-10"])) == 0
    for name in ("L-1", "L0", "L1"):
        assert len(hom_basis(fx[name], fx[name])) == 1


def test_hom_dimension_against_brute_force():
    F2 = FieldSpec(2)
    fx = a3_indecomposables(F2)
    pairs = [(a, b) for a in A3_NAMES for b in A3_NAMES]
    for a, b in pairs:
        X, Y = fx[a], fx[b]
        assert len(hom_basis(X, Y)) == brute_hom_dim(X, Y), (a, b)
    S = direct_sum([fx["L-10"], fx["L0"]])
    assert len(hom_basis(S, fx["L101"])) == brute_hom_dim(S, fx["L101"])


def test_hom_basis_elements_are_morphisms(a3):
    sigma, fx = a3
    X = direct_sum([fx["L101"], fx["L-10"], fx["L0"]])
    for f in hom_basis(X, X):
        assert f.is_valid()


# ----------------------------------------------------------- iso
def test_isomorphism_examples(a3):
    sigma, fx = a3
    ok, w = is_isomorphic(fx["L101"], fx["L101"])
    assert ok and w.is_invertible()
    assert not is_isomorphic(fx["L-1"], fx["L1"])[0]
    r = kronecker_rep(KroneckerTag("r_lambda", 1, 2), F)
    r2 = conjugate(r, {"a0": Matrix.from_rows(F, [[2]]), "a1": Matrix.identity(F, 1)})
    assert r2 != r and is_isomorphic(r2, r)[0]
    with pytest.raises(MismatchError):
        is_isomorphic(fx["L0"], a3_indecomposables(FieldSpec(7))["L0"])


def test_isomorphism_witness_is_valid(a3):
    sigma, fx = a3
    X = direct_sum([fx["L101"], fx["L-10"], fx["L1"]])
    Y, _ = random_conjugate(X, seed=4)
    ok, w = is_isomorphic(Y, X, seed=2)
    assert ok and w.is_valid() and w.is_invertible()


# ----------------------------------------------------------- sums
def test_direct_sum_examples(a3):
    sigma, fx = a3
    assert direct_sum([fx["L0"]]) == fx["L0"]
    assert direct_sum([fx["L0"], fx["L101"]]).dim_vector == (1, 2, 1)


def test_decompose_examples(a3):
    sigma, fx = a3
    assert decompose(fx["L0"]) == [fx["L0"]]
    assert decompose(fx["L101"]) == [fx["L101"]]
    got = decompose(direct_sum([fx["L-1"], fx["L1"]]))
    assert multiset_isomorphic(got, [fx["L-1"], fx["L1"]], is_isomorphic)


def test_decompose_round_trip_with_catalog(a3):
    sigma, fx = a3
    catalog = list(fx.values())
    rng = np.random.Generator(np.random.Philox(3))
    for trial in range(10):
        names = list(rng.choice(A3_NAMES, size=int(rng.integers(1, 5))))
        X, _ = random_conjugate(direct_sum([fx[n] for n in names]), seed=trial)
        got = decompose(X, seed=trial, catalog=catalog)
        assert sorted(g.key() for g in got) == sorted(fx[n].key() for n in names)


def test_certificates(a3):
    sigma, fx = a3
    for X, cert in krull_schmidt(direct_sum([fx["L101"], fx["L0"], fx["L0"]])):
        assert cert.deterministic and cert.end_dim == 1


def test_indecomposable_kronecker():
    for tag in [KroneckerTag("p", 2), KroneckerTag("i", 1), KroneckerTag("r_lambda", 3, 5), KroneckerTag("r_infinity", 2)]:
        assert is_indecomposable(kronecker_rep(tag, F))
    assert not is_indecomposable(direct_sum([kronecker_rep(KroneckerTag("p", 1), F)] * 2))


# ----------------------------------------------------------- periods
def test_periods(a3):
    sigma, fx = a3
    want = {"L-1": 2, "L1": 2, "L-10": 2, "L01": 2, "L0": 1, "L101": 1}
    assert {n: minimal_period(X, sigma) for n, X in fx.items()} == want
    r = kronecker_rep(KroneckerTag("r_lambda", 1, 2), F)
    assert minimal_period(r, kronecker_sigma()) == 2
    assert minimal_period(kronecker_rep(KroneckerTag("p", 2), F), kronecker_sigma()) == 1


def test_orbit_modules(a3):
    sigma, fx = a3
    assert orbit_module(fx["L0"], sigma) == fx["L0"]
    assert is_isomorphic(orbit_module(fx["L-1"], sigma), direct_sum([fx["L-1"], fx["L1"]]))[0]
    assert is_isomorphic(orbit_module(fx["L-10"], sigma), direct_sum([fx["L-10"], fx["L01"]]))[0]
    for X in fx.values():
        assert is_sigma_equivalent(orbit_module(X, sigma), sigma)
    assert is_sigma_equivalent(fx["L0"], sigma) and not is_sigma_equivalent(fx["L-1"], sigma)
    with pytest.raises(NotIndecomposableError):
        orbit_module(direct_sum([fx["L0"], fx["L0"]]), sigma)


# ----------------------------------------------------------- S / P / I
def test_simple_projective_injective(a3):
    sigma, fx = a3
    q = sigma.quiver
    assert simple_rep(q, 0, F) == fx["L0"]
    assert is_isomorphic(projective_rep(q, -1, F), fx["L-10"])[0]
    assert is_isomorphic(projective_rep(q, 0, F), fx["L0"])[0]
    assert is_isomorphic(injective_rep(q, 0, F), fx["L101"])[0]
    assert is_isomorphic(injective_rep(q, 1, F), fx["L1"])[0]
    with pytest.raises(ParseError):
        simple_rep(q, 7, F)


def test_kronecker_projectives():
    sigma = kronecker_sigma()
    q = sigma.quiver
    # the projective at the source vertex is p(1), at the sink p(0)
    assert is_isomorphic(projective_rep(q, "a1", F), kronecker_rep(KroneckerTag("p", 1), F))[0]
    assert is_isomorphic(projective_rep(q, "a0", F), kronecker_rep(KroneckerTag("p", 0), F))[0]
    assert is_isomorphic(injective_rep(q, "a0", F), kronecker_rep(KroneckerTag("i", 1), F))[0]
