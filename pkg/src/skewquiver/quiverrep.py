"""Quivers with an automorphism and their representations over a finite field.

Representations are stored vertex-wise; linear algebra on morphisms goes
through the block-diagonal "total" matrix, blocks in quiver vertex order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import _poly
from .errors import DomainError, MismatchError, NotIndecomposableError, ParseError
from .exactfield import FieldSpec, extend
from .linalg import (
    Matrix,
    fitting_split,
    kernel_matrix,
    minimal_polynomial,
    poly_eval,
    rank_factorization,
)

Vertex = Hashable
TRIALS = 20


def make_rng(seed) -> np.random.Generator:
    """Counter-based generator for an integer seed (generators pass through)."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(int(seed)))


def child_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**63 - 1))


# ------------------------------------------------------------------ quivers
@dataclass(frozen=True)
class Arrow:
    name: str
    source: Vertex
    target: Vertex


class Quiver:
    """Connected finite quiver without oriented cycles."""

    def __init__(self, vertices: Sequence[Vertex], arrows: Iterable):
        self.vertices: Tuple[Vertex, ...] = tuple(vertices)
        arrs = []
        for a in arrows:
            if not isinstance(a, Arrow):
                a = Arrow(*a)
            arrs.append(a)
        self.arrows: Tuple[Arrow, ...] = tuple(arrs)
        if not self.vertices:
            raise DomainError("a quiver needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise DomainError("duplicate vertex ids")
        if len({str(v) for v in self.vertices}) != len(self.vertices):
            raise DomainError("vertex ids must stay distinct as strings")
        self._arrow = {a.name: a for a in self.arrows}
        if len(self._arrow) != len(self.arrows):
            raise DomainError("duplicate arrow names")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise DomainError(f"arrow {a.name} has an undeclared endpoint")
        self._index = {v: k for k, v in enumerate(self.vertices)}
        self._by_str = {str(v): v for v in self.vertices}
        self._check_connected()
        self._check_acyclic()

    def _check_connected(self):
        adj: Dict[Vertex, set] = {v: set() for v in self.vertices}
        for a in self.arrows:
            adj[a.source].add(a.target)
            adj[a.target].add(a.source)
        seen = {self.vertices[0]}
        todo = [self.vertices[0]]
        while todo:
            v = todo.pop()
            for w in adj[v] - seen:
                seen.add(w)
                todo.append(w)
        if len(seen) != len(self.vertices):
            raise DomainError("quiver is not connected")

    def _check_acyclic(self):
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indeg[a.target] += 1
        ready = [v for v in self.vertices if indeg[v] == 0]
        done = 0
        while ready:
            v = ready.pop()
            done += 1
            for a in self.arrows:
                if a.source == v:
                    indeg[a.target] -= 1
                    if indeg[a.target] == 0:
                        ready.append(a.target)
        if done != len(self.vertices):
            raise DomainError("quiver has an oriented cycle")

    def arrow(self, name: str) -> Arrow:
        try:
            return self._arrow[name]
        except KeyError:
            raise DomainError(f"unknown arrow {name!r}") from None

    def index(self, v: Vertex) -> int:
        return self._index[v]

    def vertex_from_str(self, s) -> Vertex:
        if s in self._index:
            return s
        try:
            return self._by_str[str(s)]
        except KeyError:
            raise ParseError(f"unknown vertex {s!r}") from None

    def paths(self, start: Vertex, end: Vertex) -> List[Tuple[str, ...]]:
        """Paths from ``start`` to ``end`` as arrow-name tuples in travel order.

        Sorted by (length, names); the trivial path is ``()``.
        """
        out = []
        frontier = [((), start)]
        while frontier:
            nxt = []
            for path, v in frontier:
                if v == end:
                    out.append(path)
                for a in self.arrows:
                    if a.source == v:
                        nxt.append((path + (a.name,), a.target))
            frontier = nxt
        return sorted(out, key=lambda p: (len(p), p))

    def __eq__(self, other) -> bool:
        return isinstance(other, Quiver) and self.vertices == other.vertices and self.arrows == other.arrows

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self) -> str:
        return f"Quiver({list(self.vertices)}, {[(a.name, a.source, a.target) for a in self.arrows]})"

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"name": a.name, "from": a.source, "to": a.target} for a in self.arrows],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Quiver":
        try:
            verts = list(obj["vertices"])
            arrows = [Arrow(str(a["name"]), a["from"], a["to"]) for a in obj["arrows"]]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed quiver: missing {exc}") from None
        return cls(verts, arrows)


class QuiverAutomorphism:
    """Compatible permutations of vertices and arrows (sigma)."""

    def __init__(self, quiver: Quiver, vertex_map: Mapping, arrow_map: Mapping, order: Optional[int] = None):
        self.quiver = quiver
        vmap = {quiver.vertex_from_str(k): quiver.vertex_from_str(v) for k, v in vertex_map.items()}
        amap = {str(k): str(v) for k, v in arrow_map.items()}
        for v in quiver.vertices:
            vmap.setdefault(v, v)
        for a in quiver.arrows:
            amap.setdefault(a.name, a.name)
        if sorted(map(quiver.index, vmap.values())) != list(range(len(quiver.vertices))):
            raise DomainError("vertex map is not a bijection")
        if sorted(amap.values()) != sorted(a.name for a in quiver.arrows):
            raise DomainError("arrow map is not a bijection")
        for a in quiver.arrows:
            b = quiver.arrow(amap[a.name])
            if b.source != vmap[a.source] or b.target != vmap[a.target]:
                raise DomainError(f"automorphism does not respect endpoints of arrow {a.name}")
        self.vertex_map = vmap
        self.arrow_map = amap
        self.n = self._order()
        if order is not None and order != self.n:
            raise DomainError(f"declared order {order} but the permutation has order {self.n}")
        self._vcycle = self._tabulate(vmap, quiver.vertices)
        self._acycle = self._tabulate(amap, [a.name for a in quiver.arrows])

    def _order(self) -> int:
        n = 1
        for perm in (self.vertex_map, self.arrow_map):
            for start in perm:
                k, x = 1, perm[start]
                while x != start:
                    x = perm[x]
                    k += 1
                n = n * k // math.gcd(n, k)
        return n

    def _tabulate(self, perm, keys):
        table = {}
        for k in keys:
            row = [k]
            for _ in range(self.n - 1):
                row.append(perm[row[-1]])
            table[k] = row
        return table

    @classmethod
    def identity(cls, quiver: Quiver) -> "QuiverAutomorphism":
        return cls(quiver, {}, {})

    def vertex(self, v: Vertex, j: int = 1) -> Vertex:
        """sigma^j(v); negative j allowed."""
        return self._vcycle[v][j % self.n]

    def arrow(self, name: str, j: int = 1) -> str:
        return self._acycle[name][j % self.n]

    def path(self, path: Sequence[str], j: int = 1) -> Tuple[str, ...]:
        return tuple(self.arrow(a, j) for a in path)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QuiverAutomorphism)
            and self.quiver == other.quiver
            and self.vertex_map == other.vertex_map
            and self.arrow_map == other.arrow_map
        )

    def __hash__(self):
        return hash((self.quiver, tuple(sorted(self.arrow_map.items()))))

    def __repr__(self) -> str:
        return f"QuiverAutomorphism(n={self.n}, vertices={self.vertex_map}, arrows={self.arrow_map})"

    def to_json(self) -> dict:
        return {
            "vertices": {str(k): v for k, v in self.vertex_map.items()},
            "arrows": dict(self.arrow_map),
        }

    @classmethod
    def from_json(cls, quiver: Quiver, obj: Mapping) -> "QuiverAutomorphism":
        try:
            return cls(quiver, obj.get("vertices", {}), obj.get("arrows", {}), obj.get("order"))
        except AttributeError:
            raise ParseError("malformed automorphism") from None


def load_quiver(obj: Mapping) -> Tuple[Quiver, QuiverAutomorphism]:
    """Quiver and automorphism from the quiver-file JSON layout."""
    q = Quiver.from_json(obj)
    aut = obj.get("automorphism")
    sigma = QuiverAutomorphism.from_json(q, aut) if aut else QuiverAutomorphism.identity(q)
    return q, sigma


def dump_quiver(sigma: QuiverAutomorphism) -> dict:
    out = sigma.quiver.to_json()
    out["automorphism"] = sigma.to_json()
    return out


# --------------------------------------------------------- representations
class Representation:
    """Vector spaces ``dims[v]`` and matrices ``maps[name]`` of shape dims[t] x dims[s]."""

    __slots__ = ("quiver", "field", "dims", "maps")

    def __init__(self, quiver: Quiver, field: FieldSpec, dims: Mapping, maps: Mapping):
        self.quiver = quiver
        self.field = field
        self.dims = {v: int(dims.get(v, 0)) for v in quiver.vertices}
        if any(d < 0 for d in self.dims.values()):
            raise DomainError("negative dimension")
        extra = set(dims) - set(quiver.vertices)
        if extra:
            raise DomainError(f"dimensions given for unknown vertices {sorted(map(str, extra))}")
        out = {}
        for a in quiver.arrows:
            shape = (self.dims[a.target], self.dims[a.source])
            m = maps.get(a.name)
            if m is None:
                if shape[0] and shape[1]:
                    raise DomainError(f"missing matrix for arrow {a.name}")
                m = Matrix.zeros(field, *shape)
            if m.field != field:
                raise DomainError(f"arrow {a.name} matrix over {m.field}, expected {field}")
            if m.shape != shape:
                raise DomainError(f"arrow {a.name} ({a.source} -> {a.target}): matrix shape {m.shape}, expected {shape}")
            out[a.name] = m
        unknown = set(maps) - set(out)
        if unknown:
            raise DomainError(f"matrices given for unknown arrows {sorted(unknown)}")
        self.maps = out

    @property
    def dim_vector(self) -> Tuple[int, ...]:
        return tuple(self.dims[v] for v in self.quiver.vertices)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def offsets(self) -> Dict[Vertex, int]:
        out, k = {}, 0
        for v in self.quiver.vertices:
            out[v] = k
            k += self.dims[v]
        return out

    def key(self) -> tuple:
        return (self.dim_vector, tuple(self.maps[a.name].key()[1] for a in self.quiver.arrows))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Representation):
            return NotImplemented
        return (
            self.quiver == other.quiver
            and self.field == other.field
            and self.dims == other.dims
            and all(self.maps[k] == other.maps[k] for k in self.maps)
        )

    def __hash__(self):
        return hash((self.field, self.key()))

    def __repr__(self) -> str:
        return f"Representation(dims={self.dim_vector}, field={self.field})"

    def lift(self, big: FieldSpec) -> "Representation":
        if big == self.field:
            return self
        return Representation(self.quiver, big, self.dims, {k: m.lift(big) for k, m in self.maps.items()})

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "dims": {str(v): self.dims[v] for v in self.quiver.vertices},
            "maps": {a.name: self.maps[a.name].to_json() for a in self.quiver.arrows},
        }

    @classmethod
    def from_json(cls, quiver: Quiver, obj: Mapping, field: Optional[FieldSpec] = None) -> "Representation":
        try:
            F = field or FieldSpec.from_json(obj["field"])
            dims = {quiver.vertex_from_str(k): int(v) for k, v in obj["dims"].items()}
            maps = {}
            for name, m in obj.get("maps", {}).items():
                a = quiver.arrow(name)
                shape = (dims.get(a.target, 0), dims.get(a.source, 0))
                maps[name] = Matrix.from_json(F, m, shape)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed representation: {exc}") from None
        return cls(quiver, F, dims, maps)


def zero_rep(quiver: Quiver, field: FieldSpec) -> Representation:
    return Representation(quiver, field, {}, {})


class RepMorphism:
    """Vertex-wise blocks ``theta_i: source_i -> target_i``."""

    __slots__ = ("source", "target", "blocks")

    def __init__(self, source: Representation, target: Representation, blocks: Mapping):
        if source.quiver != target.quiver or source.field != target.field:
            raise MismatchError("morphism between representations of different quivers or fields")
        self.source = source
        self.target = target
        out = {}
        for v in source.quiver.vertices:
            shape = (target.dims[v], source.dims[v])
            b = blocks.get(v)
            if b is None:
                b = Matrix.zeros(source.field, *shape)
            if b.shape != shape:
                raise DomainError(f"block at vertex {v}: shape {b.shape}, expected {shape}")
            out[v] = b
        self.blocks = out

    @classmethod
    def identity(cls, X: Representation) -> "RepMorphism":
        return cls(X, X, {v: Matrix.identity(X.field, d) for v, d in X.dims.items()})

    @classmethod
    def zero(cls, X: Representation, Y: Representation) -> "RepMorphism":
        return cls(X, Y, {})

    @classmethod
    def from_total(cls, X: Representation, Y: Representation, T: Matrix) -> "RepMorphism":
        ox, oy = X.offsets(), Y.offsets()
        blocks = {}
        for v in X.quiver.vertices:
            blocks[v] = Matrix(X.field, T.a[oy[v]:oy[v] + Y.dims[v], ox[v]:ox[v] + X.dims[v]])
        return cls(X, Y, blocks)

    def total(self) -> Matrix:
        q = self.source.quiver
        return Matrix.block_diag(self.source.field, [self.blocks[v] for v in q.vertices])

    def violations(self) -> List[str]:
        out = []
        X, Y = self.source, self.target
        for a in X.quiver.arrows:
            if Y.maps[a.name] @ self.blocks[a.source] != self.blocks[a.target] @ X.maps[a.name]:
                out.append(f"intertwining fails at arrow {a.name}")
        return out

    def is_valid(self) -> bool:
        return not self.violations()

    def is_invertible(self) -> bool:
        return all(b.is_invertible() for b in self.blocks.values())

    def inverse(self) -> "RepMorphism":
        return RepMorphism(self.target, self.source, {v: b.inverse() for v, b in self.blocks.items()})

    def __matmul__(self, other: "RepMorphism") -> "RepMorphism":
        """Composite ``self o other``."""
        return RepMorphism(other.source, self.target, {v: self.blocks[v] @ other.blocks[v] for v in self.blocks})

    def __add__(self, other: "RepMorphism") -> "RepMorphism":
        return RepMorphism(self.source, self.target, {v: self.blocks[v] + other.blocks[v] for v in self.blocks})

    def __sub__(self, other: "RepMorphism") -> "RepMorphism":
        return RepMorphism(self.source, self.target, {v: self.blocks[v] - other.blocks[v] for v in self.blocks})

    def scale(self, c) -> "RepMorphism":
        return RepMorphism(self.source, self.target, {v: b.scale(c) for v, b in self.blocks.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, RepMorphism):
            return NotImplemented
        return self.source == other.source and self.target == other.target and all(
            self.blocks[v] == other.blocks[v] for v in self.blocks
        )

    def __hash__(self):
        return hash(tuple(b.key() for b in self.blocks.values()))

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks.values())

    def to_json(self) -> dict:
        return {str(v): b.to_json() for v, b in self.blocks.items()}

    def __repr__(self) -> str:
        return f"RepMorphism({self.source.dim_vector} -> {self.target.dim_vector})"


# ------------------------------------------------------------------ twists
def _check_aut(X: Representation, sigma: QuiverAutomorphism) -> None:
    if X.quiver != sigma.quiver:
        raise MismatchError("representation and automorphism live on different quivers")


def twist(X: Representation, sigma: QuiverAutomorphism, j: int = 1) -> Representation:
    """``^{sigma^j}X``: vertex i carries X at sigma^{-j}(i), arrows likewise."""
    _check_aut(X, sigma)
    dims = {v: X.dims[sigma.vertex(v, -j)] for v in X.quiver.vertices}
    maps = {a.name: X.maps[sigma.arrow(a.name, -j)] for a in X.quiver.arrows}
    return Representation(X.quiver, X.field, dims, maps)


def twist_morphism(theta: RepMorphism, sigma: QuiverAutomorphism, j: int = 1) -> RepMorphism:
    src = twist(theta.source, sigma, j)
    tgt = twist(theta.target, sigma, j)
    return RepMorphism(src, tgt, {v: theta.blocks[sigma.vertex(v, -j)] for v in src.quiver.vertices})


# --------------------------------------------------------------- Hom spaces
Equation = Tuple[Matrix, Vertex, Matrix, Vertex]


class HomSpace:
    """Solutions of ``A theta_u = theta_w B`` for a family of equations.

    Unknowns are the row-major vectorized blocks theta_v (shape
    dims_Y[v] x dims_X[v]) stacked in vertex order; the whole system is
    solved by one kernel computation.
    """

    def __init__(self, X: Representation, Y: Representation, equations: Sequence[Equation]):
        if X.quiver != Y.quiver:
            raise MismatchError("Hom between representations of different quivers")
        if X.field != Y.field:
            raise MismatchError(f"Hom between representations over {X.field} and {Y.field}")
        self.X, self.Y, self.field = X, Y, X.field
        F = self.field
        verts = X.quiver.vertices
        self._col = {}
        k = 0
        for v in verts:
            self._col[v] = k
            k += Y.dims[v] * X.dims[v]
        self.unknowns = k
        blocks = []
        for A, u, B, w in equations:
            rows = A.rows * X.dims[u]
            if rows == 0:
                continue
            block = np.zeros((rows, k), dtype=np.int64)
            cu, cw = self._col[u], self._col[w]
            left = np.kron(A.a, np.eye(X.dims[u], dtype=np.int64))
            right = np.kron(np.eye(Y.dims[w], dtype=np.int64), B.a.T)
            block[:, cu:cu + left.shape[1]] = left
            seg = block[:, cw:cw + right.shape[1]]
            block[:, cw:cw + right.shape[1]] = F.vsub(seg, right)
            blocks.append(block)
        system = Matrix(F, np.vstack(blocks)) if blocks else Matrix.zeros(F, 0, k)
        self.kernel = kernel_matrix(system)

    @property
    def dim(self) -> int:
        return self.kernel.cols

    def morphism(self, vec: np.ndarray) -> RepMorphism:
        X, Y = self.X, self.Y
        blocks = {}
        for v in X.quiver.vertices:
            c = self._col[v]
            r, s = Y.dims[v], X.dims[v]
            blocks[v] = Matrix(self.field, np.asarray(vec[c:c + r * s]).reshape(r, s))
        return RepMorphism(X, Y, blocks)

    def basis(self) -> List[RepMorphism]:
        return [self.morphism(self.kernel.a[:, j]) for j in range(self.dim)]

    def combination(self, coeffs) -> RepMorphism:
        c = Matrix(self.field, np.asarray(coeffs, dtype=np.int64).reshape(-1, 1))
        return self.morphism((self.kernel @ c).a[:, 0])

    def random(self, rng: np.random.Generator) -> RepMorphism:
        return self.combination(self.field.random(rng, size=self.dim))

    def total_basis(self) -> List[Matrix]:
        return [m.total() for m in self.basis()]


def arrow_equations(X: Representation, Y: Representation) -> List[Equation]:
    return [(Y.maps[a.name], a.source, X.maps[a.name], a.target) for a in X.quiver.arrows]


def hom_space(X: Representation, Y: Representation) -> HomSpace:
    return HomSpace(X, Y, arrow_equations(X, Y))


def hom_basis(X: Representation, Y: Representation) -> List[RepMorphism]:
    """Basis of Hom(X, Y)."""
    return hom_space(X, Y).basis()


def find_invertible(space: HomSpace, seed, trials: int = TRIALS) -> Optional[RepMorphism]:
    """Random search for an invertible element, escalating once to F_{q^2}."""
    rng = make_rng(seed)
    if space.X.dims != space.Y.dims or (space.dim == 0 and space.X.total_dim):
        return None
    if space.X.total_dim == 0:
        return space.morphism(np.zeros(0, dtype=np.int64))
    for _ in range(trials):
        f = space.random(rng)
        if f.is_invertible():
            return f
    return None


def is_isomorphic(X: Representation, Y: Representation, seed=0) -> Tuple[bool, Optional[RepMorphism]]:
    """Randomized isomorphism test with a witness.

    T random combinations of a Hom basis are tried; if all are singular the
    test is repeated once over the quadratic extension, where a witness (if
    found) is returned over that field.
    """
    if X.quiver != Y.quiver:
        raise MismatchError("representations of different quivers")
    if X.field != Y.field:
        raise MismatchError(f"representations over {X.field} and {Y.field}")
    if X.dims != Y.dims:
        return False, None
    rng = make_rng(seed)
    space = hom_space(X, Y)
    f = find_invertible(space, rng)
    if f is None and space.dim > 0:
        big = extend(X.field, 2)
        f = find_invertible(hom_space(X.lift(big), Y.lift(big)), rng)
    return f is not None, f


def direct_sum(parts: Sequence[Representation], quiver: Optional[Quiver] = None, field: Optional[FieldSpec] = None) -> Representation:
    """Blockwise direct sum in argument order."""
    parts = list(parts)
    if not parts:
        if quiver is None or field is None:
            raise DomainError("empty direct sum needs a quiver and a field")
        return zero_rep(quiver, field)
    Q, F = parts[0].quiver, parts[0].field
    for P in parts:
        if P.quiver != Q or P.field != F:
            raise MismatchError("direct sum of representations of different quivers or fields")
    dims = {v: sum(P.dims[v] for P in parts) for v in Q.vertices}
    maps = {a.name: Matrix.block_diag(F, [P.maps[a.name] for P in parts]) for a in Q.arrows}
    return Representation(Q, F, dims, maps)


def conjugate(X: Representation, change: Mapping) -> Representation:
    """Base change by invertible g_v: maps become g_t X_a g_s^{-1}."""
    inv = {v: change[v].inverse() for v in X.quiver.vertices}
    maps = {a.name: change[a.target] @ X.maps[a.name] @ inv[a.source] for a in X.quiver.arrows}
    return Representation(X.quiver, X.field, X.dims, maps)


def random_invertible(field: FieldSpec, n: int, rng: np.random.Generator) -> Matrix:
    while True:
        m = Matrix(field, field.random(rng, size=(n, n)))
        if m.is_invertible():
            return m


def random_conjugate(X: Representation, seed) -> Tuple[Representation, Dict[Vertex, Matrix]]:
    rng = make_rng(seed)
    g = {v: random_invertible(X.field, X.dims[v], rng) for v in X.quiver.vertices}
    return conjugate(X, g), g


# ------------------------------------------------------------- Krull-Schmidt
@dataclass(frozen=True)
class Certificate:
    """How a summand was certified indecomposable."""

    method: str
    deterministic: bool
    end_dim: int
    radical_dim: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "deterministic": self.deterministic,
            "end_dim": self.end_dim,
            "radical_dim": self.radical_dim,
        }


def split_idempotent(space: HomSpace, rng: np.random.Generator, trials: int = TRIALS) -> Optional[Matrix]:
    """A nontrivial idempotent total matrix in End, or None after ``trials`` misses.

    A random endomorphism whose minimal polynomial has two coprime parts
    splits the space by Fitting's lemma applied to one primary component.
    """
    if space.dim <= 1:
        return None
    F = space.field
    for _ in range(trials):
        f = space.random(rng).total()
        fac = _poly.factor(F, minimal_polynomial(f))
        if len(fac) >= 2:
            g, m = fac[0]
            p_ker, _ = fitting_split(poly_eval(f, _poly.power(F, g, m)))
            return p_ker
    return None


def radical_dimension(totals: Sequence[Matrix]) -> int:
    """Dimension of the radical of the trace form on the span of ``totals``."""
    if not totals:
        return 0
    F = totals[0].field
    V = np.stack([t.a.ravel() for t in totals])
    W = np.stack([t.a.T.ravel() for t in totals])
    gram = Matrix(F, V) @ Matrix(F, W).T
    return gram.cols - gram.rank()


def certify(space: HomSpace, total_dim: int) -> Certificate:
    if space.dim == 1:
        return Certificate("scalar-endomorphisms", True, 1, 0)
    if space.field.p > total_dim:
        rad = radical_dimension(space.total_basis())
        if space.dim - rad == 1:
            return Certificate("trace-form-radical", True, space.dim, rad)
        return Certificate("trace-form-radical+sampling", False, space.dim, rad)
    return Certificate("sampling", False, space.dim)


def krull_schmidt_generic(obj, end_space: Callable, restrict: Callable, size: Callable, seed, trials: int = TRIALS):
    """Split ``obj`` by idempotents of its endomorphism algebra until no split is found.

    ``end_space(x)`` gives a :class:`HomSpace`; ``restrict(x, P)`` the summand
    cut out by the idempotent total matrix ``P``.
    """
    rng = make_rng(seed)
    out = []
    stack = [obj]
    while stack:
        x = stack.pop()
        if size(x) == 0:
            continue
        space = end_space(x)
        P = split_idempotent(space, rng, trials)
        if P is None:
            out.append((x, certify(space, size(x))))
            continue
        I = Matrix.identity(P.field, P.rows)
        stack.append(restrict(x, I - P))
        stack.append(restrict(x, P))
    return out


def _vertex_blocks(X: Representation, P: Matrix) -> Dict[Vertex, Tuple[Matrix, Matrix]]:
    """Rank factorizations B_v R_v of the diagonal blocks of an idempotent."""
    off = X.offsets()
    out = {}
    for v in X.quiver.vertices:
        o, d = off[v], X.dims[v]
        out[v] = rank_factorization(Matrix(X.field, P.a[o:o + d, o:o + d]))
    return out


def restrict_rep(X: Representation, P: Matrix) -> Representation:
    br = _vertex_blocks(X, P)
    dims = {v: br[v][0].cols for v in X.quiver.vertices}
    maps = {a.name: br[a.target][1] @ X.maps[a.name] @ br[a.source][0] for a in X.quiver.arrows}
    return Representation(X.quiver, X.field, dims, maps)


def krull_schmidt(X: Representation, seed=0, trials: int = TRIALS) -> List[Tuple[Representation, Certificate]]:
    """Indecomposable summands with their certificates, canonically ordered."""
    parts = krull_schmidt_generic(
        X, lambda x: hom_space(x, x), restrict_rep, lambda x: x.total_dim, seed, trials
    )
    return sorted(parts, key=lambda t: t[0].key())


def decompose(X: Representation, seed=0, catalog: Optional[Sequence[Representation]] = None) -> List[Representation]:
    """Indecomposable summands of X, ordered by (dimension vector, matrices).

    With a ``catalog``, every summand isomorphic to a catalog entry is
    replaced by that entry, so results become basis-independent.
    """
    rng = make_rng(seed)
    parts = [s for s, _ in krull_schmidt(X, child_seed(rng))]
    if catalog:
        parts = [match_catalog(s, catalog, child_seed(rng)) for s in parts]
    return sorted(parts, key=Representation.key)


def match_catalog(X: Representation, catalog: Sequence[Representation], seed=0) -> Representation:
    rng = make_rng(seed)
    for C in catalog:
        if C.dims == X.dims and is_isomorphic(X, C, child_seed(rng))[0]:
            return C
    return X


def is_indecomposable(X: Representation, seed=0) -> bool:
    return X.total_dim > 0 and len(krull_schmidt(X, seed)) == 1


def multiset_isomorphic(A: Sequence, B: Sequence, iso: Callable, seed=0) -> bool:
    """Whether two lists match up to a bijection of isomorphic entries."""
    if len(A) != len(B):
        return False
    rng = make_rng(seed)
    left = list(B)
    for a in A:
        for k, b in enumerate(left):
            if iso(a, b, child_seed(rng))[0]:
                del left[k]
                break
        else:
            return False
    return True


# ----------------------------------------------------------- sigma-periods
def divisors(n: int) -> List[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def minimal_period(X: Representation, sigma: QuiverAutomorphism, seed=0) -> int:
    """Least m >= 1 with ^{sigma^m}X isomorphic to X (a divisor of n)."""
    _check_aut(X, sigma)
    if X.total_dim == 0:
        return 1
    rng = make_rng(seed)
    for m in divisors(sigma.n):
        if is_isomorphic(twist(X, sigma, m), X, child_seed(rng))[0]:
            return m
    raise AssertionError("sigma^n is the identity, so the period divides n")


def is_sigma_equivalent(X: Representation, sigma: QuiverAutomorphism, seed=0, power: int = 1) -> bool:
    return is_isomorphic(twist(X, sigma, power), X, seed)[0]


def orbit_module(X: Representation, sigma: QuiverAutomorphism, seed=0) -> Representation:
    """X + ^sigma X + ... + ^{sigma^{m-1}} X for the minimal period m."""
    rng = make_rng(seed)
    if not is_indecomposable(X, child_seed(rng)):
        raise NotIndecomposableError("orbit_module needs an indecomposable representation")
    m = minimal_period(X, sigma, child_seed(rng))
    return direct_sum([twist(X, sigma, j) for j in range(m)])


# ------------------------------------------------- simples and projectives
def simple_rep(quiver: Quiver, i: Vertex, field: FieldSpec) -> Representation:
    i = quiver.vertex_from_str(i)
    return Representation(quiver, field, {i: 1}, {})


def projective_rep(quiver: Quiver, i: Vertex, field: FieldSpec) -> Representation:
    """P(i): paths starting at i, arrows acting by post-concatenation."""
    i = quiver.vertex_from_str(i)
    basis = {v: quiver.paths(i, v) for v in quiver.vertices}
    index = {v: {p: k for k, p in enumerate(basis[v])} for v in quiver.vertices}
    maps = {}
    for a in quiver.arrows:
        m = np.zeros((len(basis[a.target]), len(basis[a.source])), dtype=np.int64)
        for k, p in enumerate(basis[a.source]):
            m[index[a.target][p + (a.name,)], k] = 1
        maps[a.name] = Matrix(field, m)
    return Representation(quiver, field, {v: len(b) for v, b in basis.items()}, maps)


def injective_rep(quiver: Quiver, i: Vertex, field: FieldSpec) -> Representation:
    """I(i): duals of paths ending at i; arrow a sends q* to q'* when q = a q'."""
    i = quiver.vertex_from_str(i)
    basis = {v: quiver.paths(v, i) for v in quiver.vertices}
    index = {v: {p: k for k, p in enumerate(basis[v])} for v in quiver.vertices}
    maps = {}
    for a in quiver.arrows:
        m = np.zeros((len(basis[a.target]), len(basis[a.source])), dtype=np.int64)
        for k, q in enumerate(basis[a.source]):
            if q and q[0] == a.name:
                m[index[a.target][q[1:]], k] = 1
        maps[a.name] = Matrix(field, m)
    return Representation(quiver, field, {v: len(b) for v, b in basis.items()}, maps)


def path_basis(quiver: Quiver, i: Vertex, dual: bool = False) -> Dict[Vertex, List[Tuple[str, ...]]]:
    """Bases used by :func:`projective_rep` (or :func:`injective_rep` when ``dual``)."""
    if dual:
        return {v: quiver.paths(v, i) for v in quiver.vertices}
    return {v: quiver.paths(i, v) for v in quiver.vertices}
