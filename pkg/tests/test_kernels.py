import numpy as np
import pytest

from skewquiver import _pykernels, backend

try:
    from skewquiver import _ckernels
except ImportError:
    _ckernels = None

needs_compiled = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")
PRIMES = [2, 3, 101, 65537, 2**31 - 1]


def naive_rref(rows, p):
    """Textbook Gauss-Jordan on lists of ints."""
    a = [list(r) for r in rows]
    pivots, r = [], 0
    for c in range(len(a[0]) if a else 0):
        piv = next((i for i in range(r, len(a)) if a[i][c] % p), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], p - 2, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] % p:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return [[x % p for x in row] for row in a], pivots


def random_matrix(rng, p, shape, rank=None):
    a = rng.integers(0, p, size=shape)
    if rank is not None and min(shape) > rank:
        a = (rng.integers(0, p, size=(shape[0], rank)).astype(object) @ rng.integers(0, p, size=(rank, shape[1])).astype(object)) % p
        a = a.astype(np.int64)
    return a


@pytest.mark.parametrize("p", PRIMES)
def test_python_rref_matches_naive(p, rng):
    for _ in range(15):
        shape = tuple(rng.integers(1, 9, size=2))
        a = random_matrix(rng, p, shape, rank=int(rng.integers(0, 4)))
        got, piv = _pykernels.rref_prime(a, p)
        want, wpiv = naive_rref(a.tolist(), p)
        assert got.tolist() == want and list(piv) == wpiv


@needs_compiled
@pytest.mark.parametrize("p", PRIMES)
def test_compiled_matches_python(p, rng):
    for _ in range(15):
        shape = tuple(rng.integers(1, 12, size=2))
        a = random_matrix(rng, p, shape, rank=int(rng.integers(0, 5)))
        g1, p1 = _ckernels.rref_prime(a, p)
        g2, p2 = _pykernels.rref_prime(a, p)
        assert np.array_equal(g1, g2) and list(p1) == list(p2)
        b = rng.integers(0, p, size=(shape[1], int(rng.integers(1, 6))))
        want = (a.astype(object) @ b.astype(object)) % p
        assert _ckernels.matmul_prime(a, b, p).tolist() == want.tolist()
        assert _pykernels.matmul_prime(a, b, p).tolist() == want.tolist()


def test_matmul_long_inner_dimension():
    # inner dimension large enough to force intermediate reductions at p = 2^31 - 1
    p = 2**31 - 1
    rng = np.random.Generator(np.random.Philox(7))
    a = rng.integers(0, p, size=(3, 40))
    b = rng.integers(0, p, size=(40, 2))
    want = ((a.astype(object) @ b.astype(object)) % p).tolist()
    for mod in [m for m in (_pykernels, _ckernels) if m is not None]:
        assert mod.matmul_prime(a, b, p).tolist() == want


def test_backend_selection():
    names = backend.available()
    assert "python" in names
    current = backend.NAME
    try:
        backend.use("python")
        assert backend.NAME == "python"
    finally:
        backend.use(current)
    with pytest.raises(ValueError):
        backend.use("fortran")
