"""Modules over the skew group algebra kQ # k<sigma^d>.

A module is a representation X together with a sigma-action: blocks
``Phi_i: X_{sigma^{-d}(i)} -> X_i`` forming a representation morphism
``^{sigma^d}X -> X`` whose (n/d)-fold composite is the identity.

On the total space V = (+)_i X_i the action is the block matrix S with
block (i, sigma^{-d}(i)) equal to Phi_i; normalization reads S^(n/d) = I and
equivariance of a morphism F reads F S_M = S_N F.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    CharacteristicError,
    DomainError,
    ExtensionRequired,
    MismatchError,
    NotIndecomposableError,
    ParseError,
)
from .exactfield import FieldElement, FieldSpec, common_field, extend, primitive_root_of_unity
from .linalg import Matrix, commutant_nth_roots
from .quiverrep import (
    TRIALS,
    HomSpace,
    QuiverAutomorphism,
    Representation,
    RepMorphism,
    _vertex_blocks,
    arrow_equations,
    child_seed,
    decompose,
    direct_sum,
    divisors,
    find_invertible,
    hom_space,
    injective_rep,
    is_isomorphic,
    krull_schmidt_generic,
    make_rng,
    minimal_period,
    path_basis,
    projective_rep,
    restrict_rep,
    simple_rep,
    twist,
)

ROOT_CHOICES = 256


class SmashModule:
    """A representation with a normalized sigma^d-action."""

    __slots__ = ("rep", "sigma", "action", "d")

    def __init__(self, rep: Representation, sigma: QuiverAutomorphism, action: Mapping, subgroup_power: int = 1):
        if rep.quiver != sigma.quiver:
            raise MismatchError("representation and automorphism live on different quivers")
        d = int(subgroup_power)
        if d < 1 or sigma.n % d:
            raise DomainError(f"subgroup power {d} does not divide the order {sigma.n}")
        self.rep, self.sigma, self.d = rep, sigma, d
        out = {}
        for v in rep.quiver.vertices:
            shape = (rep.dims[v], rep.dims[sigma.vertex(v, -d)])
            b = action.get(v)
            if b is None:
                if shape[0] or shape[1]:
                    raise DomainError(f"missing sigma block at vertex {v}")
                b = Matrix.zeros(rep.field, *shape)
            if b.field != rep.field:
                raise DomainError(f"sigma block at vertex {v} over {b.field}, expected {rep.field}")
            if b.shape != shape:
                raise DomainError(f"sigma block at vertex {v}: shape {b.shape}, expected {shape}")
            out[v] = b
        self.action = out

    @property
    def field(self) -> FieldSpec:
        return self.rep.field

    @property
    def quiver(self):
        return self.rep.quiver

    @property
    def group_order(self) -> int:
        return self.sigma.n // self.d

    def total_action(self) -> Matrix:
        X = self.rep
        off = X.offsets()
        S = np.zeros((X.total_dim, X.total_dim), dtype=np.int64)
        for v in X.quiver.vertices:
            u = self.sigma.vertex(v, -self.d)
            S[off[v]:off[v] + X.dims[v], off[u]:off[u] + X.dims[u]] = self.action[v].a
        return Matrix(self.field, S)

    def as_morphism(self) -> RepMorphism:
        return RepMorphism(twist(self.rep, self.sigma, self.d), self.rep, self.action)

    def lift(self, big: FieldSpec) -> "SmashModule":
        if big == self.field:
            return self
        return SmashModule(self.rep.lift(big), self.sigma, {v: b.lift(big) for v, b in self.action.items()}, self.d)

    def key(self) -> tuple:
        return self.rep.key() + (tuple(self.action[v].key()[1] for v in self.quiver.vertices),)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SmashModule):
            return NotImplemented
        return (
            self.d == other.d
            and self.sigma == other.sigma
            and self.rep == other.rep
            and all(self.action[v] == other.action[v] for v in self.action)
        )

    def __hash__(self):
        return hash((self.d, self.field, self.key()))

    def __repr__(self) -> str:
        return f"SmashModule(dims={self.rep.dim_vector}, d={self.d}, field={self.field})"

    def to_json(self) -> dict:
        out = self.rep.to_json()
        out["sigma"] = {str(v): self.action[v].to_json() for v in self.quiver.vertices}
        out["subgroup_power"] = self.d
        return out

    @classmethod
    def from_json(cls, sigma: QuiverAutomorphism, obj: Mapping, field: Optional[FieldSpec] = None) -> "SmashModule":
        X = Representation.from_json(sigma.quiver, obj, field)
        try:
            d = int(obj.get("subgroup_power", 1))
            blocks = {}
            for k, m in obj["sigma"].items():
                v = sigma.quiver.vertex_from_str(k)
                shape = (X.dims[v], X.dims[sigma.vertex(v, -d)])
                blocks[v] = Matrix.from_json(X.field, m, shape)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed smash module: {exc}") from None
        return cls(X, sigma, blocks, d)


@dataclass(frozen=True)
class CharacterModule:
    """One-dimensional module on which sigma^m acts by zeta^index."""

    index: int
    zeta: FieldElement
    r: int

    def scalar(self) -> FieldElement:
        return self.zeta ** self.index

    def to_json(self) -> dict:
        return {"index": self.index, "r": self.r, "zeta": self.zeta.to_json()}


def character_module(field: FieldSpec, r: int, i: int) -> CharacterModule:
    return CharacterModule(i, primitive_root_of_unity(field, r), r)


# --------------------------------------------------------------- validation
def validate(M: SmashModule) -> List[str]:
    """Violated invariants (empty when M is a module)."""
    out = []
    X, sigma, d = M.rep, M.sigma, M.d
    for a in X.quiver.arrows:
        lhs = X.maps[a.name] @ M.action[a.source]
        rhs = M.action[a.target] @ X.maps[sigma.arrow(a.name, -d)]
        if lhs != rhs:
            out.append(f"intertwining fails at arrow {a.name}")
    if out:
        return out
    power = M.total_action().pow(M.group_order)
    off = X.offsets()
    for v in X.quiver.vertices:
        o, k = off[v], X.dims[v]
        if not np.array_equal(power.a[o:o + k, o:o + k], np.eye(k, dtype=np.int64)):
            out.append(f"normalization fails at vertex {v}: {M.group_order}-fold composite is not the identity")
    return out


def is_valid(M: SmashModule) -> bool:
    return not validate(M)


def _check_pair(M: SmashModule, N: SmashModule) -> None:
    if M.sigma != N.sigma:
        raise MismatchError("smash modules for different automorphisms")
    if M.d != N.d:
        raise MismatchError(f"smash modules over different subgroups (d = {M.d} vs {N.d})")
    if M.field != N.field:
        raise MismatchError(f"smash modules over {M.field} and {N.field}")


def _check_char(field: FieldSpec, g: int) -> None:
    if g % field.p == 0:
        raise CharacteristicError(f"characteristic {field.p} divides the group order {g}")


# --------------------------------------------------------------------- Hom
def smash_equations(M: SmashModule, N: SmashModule):
    """theta_i Phi^M_i = Phi^N_i theta_{sigma^{-d} i} for every vertex."""
    return [(N.action[v], M.sigma.vertex(v, -M.d), M.action[v], v) for v in M.quiver.vertices]


def smash_hom_space(M: SmashModule, N: SmashModule) -> HomSpace:
    _check_pair(M, N)
    return HomSpace(M.rep, N.rep, arrow_equations(M.rep, N.rep) + smash_equations(M, N))


def smash_hom_basis(M: SmashModule, N: SmashModule) -> List[RepMorphism]:
    return smash_hom_space(M, N).basis()


def is_equivariant(f: RepMorphism, M: SmashModule, N: SmashModule) -> bool:
    return f.total() @ M.total_action() == N.total_action() @ f.total()


def equivariant_projector(f: RepMorphism, M: SmashModule, N: SmashModule) -> RepMorphism:
    """Group average g^{-1} sum_j S_N^{-j} F S_M^{j} of a morphism of underlying reps."""
    _check_pair(M, N)
    g = M.group_order
    _check_char(M.field, g)
    F = M.field
    SM, SN = M.total_action(), N.total_action()
    SN_inv = SN.inverse()
    T = f.total()
    acc = Matrix.zeros(F, T.rows, T.cols)
    left = Matrix.identity(F, T.rows)
    right = Matrix.identity(F, T.cols)
    for _ in range(g):
        acc = acc + left @ T @ right
        left = left @ SN_inv
        right = right @ SM
    return RepMorphism.from_total(M.rep, N.rep, acc.scale(FieldElement(F, F.inv(g % F.p))))


def is_isomorphic_smash(M: SmashModule, N: SmashModule, seed=0) -> Tuple[bool, Optional[RepMorphism]]:
    _check_pair(M, N)
    if M.rep.dims != N.rep.dims:
        return False, None
    rng = make_rng(seed)
    space = smash_hom_space(M, N)
    f = find_invertible(space, rng)
    if f is None and space.dim > 0:
        big = extend(M.field, 2)
        f = find_invertible(smash_hom_space(M.lift(big), N.lift(big)), rng)
    return f is not None, f


# ---------------------------------------------------------- normalization
def _action_total(X: Representation, sigma: QuiverAutomorphism, d: int, blocks: Mapping) -> Matrix:
    return SmashModule(X, sigma, blocks, d).total_action()


def _canonical_action(X: Representation, sigma: QuiverAutomorphism, d: int, psi: RepMorphism) -> Dict:
    """Phi = rho^{-1} psi over all roots rho of S_psi^g; the lexicographically least Phi wins."""
    g = sigma.n // d
    S = _action_total(X, sigma, d, psi.blocks)
    best = None
    for rho in commutant_nth_roots(S.pow(g), g, limit=ROOT_CHOICES):
        phi = RepMorphism.from_total(twist(X, sigma, d), X, _shift_free(rho.inverse() @ S, X, sigma, d))
        k = tuple(phi.blocks[v].key()[1] for v in X.quiver.vertices)
        if best is None or k < best[0]:
            best = (k, phi.blocks)
    return best[1]


def _shift_free(S: Matrix, X: Representation, sigma: QuiverAutomorphism, d: int) -> Matrix:
    """Re-pack the off-diagonal action blocks of S into a block-diagonal total matrix."""
    src = twist(X, sigma, d)
    off, offs = X.offsets(), src.offsets()
    out = np.zeros((X.total_dim, src.total_dim), dtype=np.int64)
    for v in X.quiver.vertices:
        u = sigma.vertex(v, -d)
        out[off[v]:off[v] + X.dims[v], offs[v]:offs[v] + src.dims[v]] = S.a[off[v]:off[v] + X.dims[v], off[u]:off[u] + X.dims[u]]
    return Matrix(X.field, out)


def normalize_isomorphism(X: Representation, sigma: QuiverAutomorphism, d: int = 1, seed=0, psi: Optional[RepMorphism] = None) -> RepMorphism:
    """An isomorphism Phi: ^{sigma^d}X -> X with (n/d)-fold composite the identity.

    Starting from any isomorphism psi, theta = S_psi^(n/d) is an automorphism
    of X and Phi = rho^{-1} psi for a root rho of theta that is a polynomial
    in theta.  If every sampled psi needs roots outside the field, the data is
    lifted to the smallest extension that works; the result's field tells.
    """
    if X.quiver != sigma.quiver:
        raise MismatchError("representation and automorphism live on different quivers")
    if d < 1 or sigma.n % d:
        raise DomainError(f"subgroup power {d} does not divide the order {sigma.n}")
    g = sigma.n // d
    _check_char(X.field, g)
    src = twist(X, sigma, d)
    if g == 1:
        return RepMorphism.identity(X)
    rng = make_rng(seed)
    candidates = [psi] if psi is not None else []
    if not candidates:
        if src.dims != X.dims:
            raise DomainError(f"representation is not sigma^{d}-equivalent (dimension vectors differ)")
        space = hom_space(src, X)
        for _ in range(TRIALS):
            f = space.random(rng)
            if f.is_invertible():
                candidates.append(f)
        if not candidates:
            big = extend(X.field, 2)
            f = find_invertible(hom_space(src.lift(big), X.lift(big)), rng)
            if f is None:
                raise DomainError(f"representation is not sigma^{d}-equivalent")
            return normalize_isomorphism(X.lift(big), sigma, d, rng, psi=f)
    need = None
    for f in candidates:
        try:
            return RepMorphism(src, X, _canonical_action(X, sigma, d, f))
        except ExtensionRequired as exc:
            need = exc.degree if need is None else min(need, exc.degree)
    big = extend(X.field, need)
    first = candidates[0]
    lifted = RepMorphism(src.lift(big), X.lift(big), {v: b.lift(big) for v, b in first.blocks.items()})
    return normalize_isomorphism(X.lift(big), sigma, d, rng, psi=lifted)


def induce_canonical(X: Representation, sigma: QuiverAutomorphism, d: int = 1, seed=0) -> SmashModule:
    """X with its canonical normalized sigma^d-action."""
    phi = normalize_isomorphism(X, sigma, d, seed)
    return SmashModule(phi.target, sigma, phi.blocks, d)


# ---------------------------------------------------------------- twisting
def _lift_for_root(M: SmashModule, r: int, extend_field: bool) -> Tuple[SmashModule, FieldElement]:
    try:
        return M, primitive_root_of_unity(M.field, r)
    except ExtensionRequired as exc:
        if not extend_field:
            raise
        M = M.lift(extend(M.field, exc.degree))
        return M, primitive_root_of_unity(M.field, r)


def character_twist(M: SmashModule, i: int, extend_field: bool = True) -> SmashModule:
    """L_i (x) M: same representation, sigma^d-action scaled by zeta^i.

    zeta is the least primitive r-th root of unity, r = n/d.  When zeta is
    not in the field the module is lifted first (or, with
    ``extend_field=False``, :class:`ExtensionRequired` is raised).
    """
    r = M.group_order
    _check_char(M.field, r)
    M, zeta = _lift_for_root(M, r, extend_field)
    c = zeta ** i
    return SmashModule(M.rep, M.sigma, {v: b.scale(c) for v, b in M.action.items()}, M.d)


def induce_from_subgroup(M: SmashModule, target_power: int = 1) -> SmashModule:
    """Induce from k<sigma^m> (m = M.d) up to k<sigma^{d'}>, d' | m.

    The result is (+)_{j<m/d'} ^{sigma^{j d'}}X; the action moves component j
    to component j+1 by the identity and wraps the last component round
    through Phi_M.
    """
    m, dp = M.d, int(target_power)
    if dp < 1 or m % dp:
        raise DomainError(f"target subgroup power {dp} must divide {m}")
    k = m // dp
    if k == 1:
        return M
    X, sigma, F = M.rep, M.sigma, M.field
    Y = direct_sum([twist(X, sigma, j * dp) for j in range(k)])
    action = {}
    for v in X.quiver.vertices:
        rows = [X.dims[sigma.vertex(v, -j * dp)] for j in range(k)]
        cols = [X.dims[sigma.vertex(v, -(j + 1) * dp)] for j in range(k)]
        ro = np.concatenate([[0], np.cumsum(rows)]).astype(int)
        co = np.concatenate([[0], np.cumsum(cols)]).astype(int)
        B = np.zeros((ro[-1], co[-1]), dtype=np.int64)
        for j in range(k - 1):
            B[ro[j + 1]:ro[j + 2], co[j]:co[j + 1]] = np.eye(rows[j + 1], dtype=np.int64)
        B[ro[0]:ro[1], co[k - 1]:co[k]] = M.action[v].a
        action[v] = Matrix(F, B)
    return SmashModule(Y, sigma, action, dp)


def trivial_module(X: Representation, sigma: QuiverAutomorphism) -> SmashModule:
    """X over the trivial subgroup <sigma^n>, acting by the identity."""
    return SmashModule(X, sigma, {v: Matrix.identity(X.field, k) for v, k in X.dims.items()}, sigma.n)


def induce_from_path_algebra(X: Representation, sigma: QuiverAutomorphism, d: int = 1) -> SmashModule:
    """(kQ # k<sigma^d>) (x)_{kQ} X: twists of X, cyclic shift, identity wrap."""
    return induce_from_subgroup(trivial_module(X, sigma), d)


def classify_induced(X: Representation, sigma: QuiverAutomorphism, seed=0) -> List[SmashModule]:
    """The r = n/m smash modules induced from an indecomposable X of period m."""
    rng = make_rng(seed)
    m = minimal_period(X, sigma, child_seed(rng))
    base = induce_canonical(X, sigma, m, child_seed(rng))
    r = sigma.n // m
    base, _ = _lift_for_root(base, r, True)
    return [induce_from_subgroup(character_twist(base, i), 1) for i in range(1, r + 1)]


# ---------------------------------------------------------- decomposition
def restrict_smash(M: SmashModule, P: Matrix) -> SmashModule:
    br = _vertex_blocks(M.rep, P)
    rep = restrict_rep(M.rep, P)
    action = {v: br[v][1] @ M.action[v] @ br[M.sigma.vertex(v, -M.d)][0] for v in M.quiver.vertices}
    return SmashModule(rep, M.sigma, action, M.d)


def smash_krull_schmidt(M: SmashModule, seed=0, trials: int = TRIALS):
    _check_char(M.field, M.group_order)
    parts = krull_schmidt_generic(
        M, lambda x: smash_hom_space(x, x), restrict_smash, lambda x: x.rep.total_dim, seed, trials
    )
    return sorted(parts, key=lambda t: t[0].key())


def decompose_smash(M: SmashModule, seed=0, catalog: Optional[Sequence[SmashModule]] = None) -> List[SmashModule]:
    """Indecomposable smash summands, ordered by (dimension vector, matrices)."""
    rng = make_rng(seed)
    parts = [s for s, _ in smash_krull_schmidt(M, child_seed(rng))]
    if catalog:
        out = []
        for s in parts:
            hit = s
            for C in catalog:
                if C.field == s.field and C.rep.dims == s.rep.dims and is_isomorphic_smash(s, C, child_seed(rng))[0]:
                    hit = C
                    break
            out.append(hit)
        parts = out
    return sorted(parts, key=SmashModule.key)


def smash_direct_sum(parts: Sequence[SmashModule]) -> SmashModule:
    parts = list(parts)
    if not parts:
        raise DomainError("empty direct sum")
    for P in parts[1:]:
        _check_pair(parts[0], P)
    rep = direct_sum([P.rep for P in parts])
    action = {v: Matrix.block_diag(rep.field, [P.action[v] for P in parts]) for v in rep.quiver.vertices}
    return SmashModule(rep, parts[0].sigma, action, parts[0].d)


def conjugate_smash(M: SmashModule, change: Mapping) -> SmashModule:
    """Base change by invertible g_v (Phi_v becomes g_v Phi_v g_{sigma^{-d} v}^{-1})."""
    inv = {v: change[v].inverse() for v in M.quiver.vertices}
    rep = Representation(
        M.quiver,
        M.field,
        M.rep.dims,
        {a.name: change[a.target] @ M.rep.maps[a.name] @ inv[a.source] for a in M.quiver.arrows},
    )
    action = {v: change[v] @ M.action[v] @ inv[M.sigma.vertex(v, -M.d)] for v in M.quiver.vertices}
    return SmashModule(rep, M.sigma, action, M.d)


def common_lift(*modules: SmashModule) -> List[SmashModule]:
    big = common_field(*(m.field for m in modules))
    return [m.lift(big) for m in modules]


def identify(M: SmashModule, X: Representation, seed=0) -> int:
    """The index i with M isomorphic to classify_induced(X)[i - 1]."""
    rng = make_rng(seed)
    cands = classify_induced(X, M.sigma, child_seed(rng))
    for i, C in enumerate(cands, start=1):
        A, B = common_lift(M, C)
        if A.d == B.d and A.rep.dims == B.rep.dims and is_isomorphic_smash(A, B, child_seed(rng))[0]:
            return i
    raise MismatchError("underlying module mismatch: M is not induced from X")


# ------------------------------------------ simples, projectives, injectives
def _orbit_length(sigma: QuiverAutomorphism, v) -> int:
    for m in divisors(sigma.n):
        if sigma.vertex(v, m) == v:
            return m
    return sigma.n


def _xi_power(field: FieldSpec, sigma: QuiverAutomorphism, m: int, l: int) -> Tuple[FieldSpec, FieldElement]:
    """xi^(m l) for the least primitive n-th root xi, extending the field if needed."""
    _check_char(field, sigma.n)
    try:
        xi = primitive_root_of_unity(field, sigma.n)
    except ExtensionRequired as exc:
        field = extend(field, exc.degree)
        xi = primitive_root_of_unity(field, sigma.n)
    return field, xi ** (m * l)


def _vertex_of(X: Representation, builder, what: str):
    for v in X.quiver.vertices:
        if builder(X.quiver, v, X.field) == X:
            return v
    raise DomainError(f"representation is not a {what} in the path basis")


def _path_action(sigma: QuiverAutomorphism, i, m: int, dual: bool, field: FieldSpec) -> Dict:
    """sigma^m acting on the path basis of P(i) (or I(i)), as blocks ^{sigma^m}P -> P."""
    basis = path_basis(sigma.quiver, i, dual)
    index = {v: {p: k for k, p in enumerate(b)} for v, b in basis.items()}
    blocks = {}
    for v in sigma.quiver.vertices:
        u = sigma.vertex(v, -m)
        B = np.zeros((len(basis[v]), len(basis[u])), dtype=np.int64)
        for k, p in enumerate(basis[u]):
            B[index[v][sigma.path(p, m)], k] = 1
        blocks[v] = Matrix(field, B)
    return blocks


def _structured(X: Representation, sigma: QuiverAutomorphism, blocks: Mapping, m: int, l: int) -> SmashModule:
    field, c = _xi_power(X.field, sigma, m, l)
    X = X.lift(field)
    scaled = {v: b.lift(field).scale(c) for v, b in blocks.items()}
    return induce_from_subgroup(SmashModule(X, sigma, scaled, m), 1)


def simple_smash(S: Representation, sigma: QuiverAutomorphism, l: int = 0) -> SmashModule:
    """Induced from S over <sigma^m> with sigma^m acting by xi^(m l)."""
    if S.total_dim != 1:
        raise DomainError("simple_smash needs a vertex simple representation")
    (i,) = [v for v, k in S.dims.items() if k]
    m = _orbit_length(sigma, i)
    blocks = {v: Matrix.identity(S.field, S.dims[v]) for v in S.quiver.vertices}
    return _structured(S, sigma, blocks, m, l)


def projective_smash(P: Representation, sigma: QuiverAutomorphism, l: int = 0) -> SmashModule:
    """Induced from P(i) with sigma^m permuting paths, scaled by xi^(m l)."""
    i = _vertex_of(P, projective_rep, "indecomposable projective")
    m = _orbit_length(sigma, i)
    return _structured(P, sigma, _path_action(sigma, i, m, False, P.field), m, l)


def injective_smash(I: Representation, sigma: QuiverAutomorphism, l: int = 0) -> SmashModule:
    i = _vertex_of(I, injective_rep, "indecomposable injective")
    m = _orbit_length(sigma, i)
    return _structured(I, sigma, _path_action(sigma, i, m, True, I.field), m, l)


@dataclass(frozen=True)
class Kind:
    simple: bool
    projective: bool
    injective: bool

    @property
    def labels(self) -> List[str]:
        out = [k for k in ("simple", "projective", "injective") if getattr(self, k)]
        return out or ["none-of-these"]

    def to_json(self) -> dict:
        return {"simple": self.simple, "projective": self.projective, "injective": self.injective, "labels": self.labels}


def classify_kind(M: SmashModule, seed=0) -> Kind:
    """Whether the underlying summands are one sigma-orbit of simples / projectives / injectives."""
    rng = make_rng(seed)
    if len(smash_krull_schmidt(M, child_seed(rng))) != 1:
        raise NotIndecomposableError("classify_kind needs an indecomposable smash module")
    Q, F, sigma = M.quiver, M.field, M.sigma
    summands = decompose(M.rep, child_seed(rng))

    def orbit_of(builder) -> bool:
        catalog = {v: builder(Q, v, F) for v in Q.vertices}
        hits = []
        for s in summands:
            for v, C in catalog.items():
                if C.dims == s.dims and is_isomorphic(s, C, child_seed(rng))[0]:
                    hits.append(v)
                    break
            else:
                return False
        v0 = hits[0]
        orbit = sorted({sigma.vertex(v0, j) for j in range(sigma.n)}, key=Q.index)
        return sorted(hits, key=Q.index) == orbit

    return Kind(orbit_of(simple_rep), orbit_of(projective_rep), orbit_of(injective_rep))

