"""Kronecker quiver a0 <=alpha0,alpha1= a1 with the arrow swap, and its smash families."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, InconsistentSystemError
from .exactfield import FieldElement, FieldSpec
from .linalg import Matrix, solve
from .quiverrep import (
    HomSpace,
    Quiver,
    QuiverAutomorphism,
    Representation,
    arrow_equations,
    child_seed,
    direct_sum,
    make_rng,
    twist,
)
from .smash import (
    SmashModule,
    classify_induced,
    common_lift,
    is_isomorphic_smash,
    smash_krull_schmidt,
    validate,
)

REP_KINDS = ("p", "i", "r_lambda", "r_infinity")
SMASH_KINDS = ("P0", "P1", "I0", "I1", "R_0_inf", "R_lambda")


@dataclass(frozen=True)
class KroneckerTag:
    kind: str
    l: int
    lam: Optional[int] = None  # encoded field element, only for r_lambda / R_lambda

    def check(self) -> None:
        if self.kind not in REP_KINDS + SMASH_KINDS:
            raise DomainError(f"unknown Kronecker family {self.kind!r}")
        low = 0 if self.kind in ("p", "i", "P0", "P1", "I0", "I1") else 1
        if self.l < low:
            raise DomainError(f"family {self.kind} needs l >= {low}, got {self.l}")
        if self.kind in ("r_lambda", "R_lambda") and self.lam is None:
            raise DomainError(f"family {self.kind} needs a lambda")
        if self.kind == "R_lambda" and self.lam == 0:
            raise DomainError("lambda = 0 pairs with infinity; use R_0_inf")

    def to_json(self, field: FieldSpec) -> dict:
        lam = None if self.lam is None else field.element_to_json(self.lam)
        return {"family": self.kind, "l": self.l, "lambda": lam}


def kronecker_quiver() -> Quiver:
    return Quiver(["a0", "a1"], [("alpha0", "a1", "a0"), ("alpha1", "a1", "a0")])


def kronecker_sigma(quiver: Optional[Quiver] = None) -> QuiverAutomorphism:
    q = quiver or kronecker_quiver()
    return QuiverAutomorphism(q, {}, {"alpha0": "alpha1", "alpha1": "alpha0"})


def _rep(sigma: QuiverAutomorphism, field: FieldSpec, d0: int, d1: int, top: Matrix, bottom: Matrix) -> Representation:
    # alpha1 is drawn on top, alpha0 below
    return Representation(sigma.quiver, field, {"a0": d0, "a1": d1}, {"alpha1": top, "alpha0": bottom})


def kronecker_rep(tag: KroneckerTag, field: FieldSpec, sigma: Optional[QuiverAutomorphism] = None) -> Representation:
    tag.check()
    sigma = sigma or kronecker_sigma()
    l, F = tag.l, field
    I = Matrix.identity(F, l)
    if tag.kind == "p":
        z = Matrix.zeros(F, 1, l)
        return _rep(sigma, F, l + 1, l, Matrix.vstack(F, [I, z], l), Matrix.vstack(F, [z, I], l))
    if tag.kind == "i":
        z = Matrix.zeros(F, l, 1)
        return _rep(sigma, F, l, l + 1, Matrix.hstack(F, [I, z], l), Matrix.hstack(F, [z, I], l))
    if tag.kind == "r_lambda":
        return _rep(sigma, F, l, l, Matrix.jordan(F, FieldElement(F, tag.lam), l), I)
    if tag.kind == "r_infinity":
        return _rep(sigma, F, l, l, I, Matrix.jordan(F, 0, l))
    raise DomainError(f"{tag.kind} is a smash family; use kronecker_smash")


def _inv(field: FieldSpec, lam: int) -> int:
    if lam == 0:
        raise DomainError("lambda must be nonzero")
    return field.inv(lam)


@dataclass(frozen=True)
class SwapDerivation:
    B: Matrix
    A: Matrix
    recursion: Dict[str, Optional[bool]]

    def to_json(self) -> dict:
        return {"B": self.B.to_json(), "A": self.A.to_json(), "recursion_agrees": self.recursion}


def derive_regular_swap_matrices(l: int, lam: int, field: FieldSpec) -> SwapDerivation:
    """B_l, A_l with (B, A): ^sigma r_lam(l) -> r_{1/lam}(l), normalized.

    The isomorphisms form an l-dimensional space (End r_lam(l) = k[x]/x^l);
    the normalization b_il = 0 for i < l, b_ll = 1 picks exactly one.  The
    block swap with these maps and their inverses squares to the identity.
    The printed recursion is evaluated in both row directions and compared.
    """
    F = field
    lam = lam.value if isinstance(lam, FieldElement) else int(lam)
    if lam == 0 or F.mul(lam, lam) == 1:
        raise DomainError("derive_regular_swap_matrices needs lambda != 0 and lambda^2 != 1")
    sigma = kronecker_sigma()
    X = twist(kronecker_rep(KroneckerTag("r_lambda", l, lam), F, sigma), sigma, 1)
    Y = kronecker_rep(KroneckerTag("r_lambda", l, _inv(F, lam)), F, sigma)
    space = HomSpace(X, Y, arrow_equations(X, Y))
    K = space.kernel
    # unknown layout: theta_a0 = B (row-major, first l*l), then theta_a1 = A
    rows, rhs = [], []
    for i in range(l):
        rows.append(K.a[i * l + (l - 1)])
        rhs.append(1 if i == l - 1 else 0)
    system = Matrix(F, np.array(rows, dtype=np.int64).reshape(l, K.cols))
    try:
        c = solve(system, rhs)
    except InconsistentSystemError:
        raise InconsistentSystemError(f"no normalized isomorphism for l={l}, lambda={lam}: {system!r}") from None
    if system.rank() != K.cols:
        raise InconsistentSystemError(f"normalized isomorphism is not unique for l={l}, lambda={lam}")
    theta = space.combination(c.a[:, 0])
    B, A = theta.blocks["a0"], theta.blocks["a1"]
    rec = {}
    for direction in ("down", "up"):
        got = printed_recursion(l, lam, F, direction)
        rec[direction] = None if got is None else (got[0] == B and got[1] == A)
    return SwapDerivation(B, A, rec)


def printed_recursion(l: int, lam: int, field: FieldSpec, direction: str) -> Optional[Tuple[Matrix, Matrix]]:
    """The displayed b_ij / a_ij rules, reading row i-1 ("down") or row i+1 ("up").

    Returns None when the reading references an undefined row.
    """
    F = field
    step = -1 if direction == "down" else 1
    lam2 = F.mul(lam, lam)
    b: Dict[Tuple[int, int], int] = {}
    a: Dict[Tuple[int, int], int] = {}
    for i in range(1, l + 1):
        for j in range(1, l + 1):
            if i > j:
                b[i, j] = a[i, j] = 0
    b[l, l] = 1
    a[l, l] = lam
    for i in range(1, l):
        b[i, l] = 0
    order = range(1, l) if direction == "down" else range(l - 1, 0, -1)
    for i in order:
        k = i + step
        if not 1 <= k <= l:
            return None
        a[i, l] = F.neg(F.mul(a[k, l], lam))
        for j in range(i, l):
            if (k, j) not in b or (k, j + 1) not in b:
                return None
            b[i, j] = F.neg(F.add(F.mul(b[k, j], lam), F.mul(b[k, j + 1], lam2)))
            a[i, j] = F.neg(F.add(F.mul(a[k, j], lam), F.mul(a[k, j + 1], lam2)))
    Bm = np.array([[b[i, j] for j in range(1, l + 1)] for i in range(1, l + 1)], dtype=np.int64).reshape(l, l)
    Am = np.array([[a[i, j] for j in range(1, l + 1)] for i in range(1, l + 1)], dtype=np.int64).reshape(l, l)
    return Matrix(F, Bm), Matrix(F, Am)


def kronecker_smash(tag: KroneckerTag, field: FieldSpec, sigma: Optional[QuiverAutomorphism] = None) -> SmashModule:
    tag.check()
    if field.p == 2:
        raise DomainError("the sign families need -1 != 1")
    sigma = sigma or kronecker_sigma()
    l, F = tag.l, field
    if tag.kind in ("P0", "P1", "I0", "I1"):
        sign = 1 if tag.kind.endswith("0") else F.p - 1
        small = Matrix.antidiagonal(F, l, sign)
        big = Matrix.antidiagonal(F, l + 1, sign)
        if tag.kind.startswith("P"):
            X = kronecker_rep(KroneckerTag("p", l), F, sigma)
            return SmashModule(X, sigma, {"a0": big, "a1": small}, 1)
        X = kronecker_rep(KroneckerTag("i", l), F, sigma)
        return SmashModule(X, sigma, {"a0": small, "a1": big}, 1)
    if tag.kind == "R_0_inf":
        X = direct_sum([kronecker_rep(KroneckerTag("r_lambda", l, 0), F, sigma), kronecker_rep(KroneckerTag("r_infinity", l), F, sigma)])
        swap = _block_swap(F, Matrix.identity(F, l), Matrix.identity(F, l))
        return SmashModule(X, sigma, {"a0": swap, "a1": swap}, 1)
    if tag.kind == "R_lambda":
        lam = tag.lam
        if F.mul(lam, lam) == 1:
            raise DomainError("lambda = +-1 is sigma-fixed; use regular_fixed_structures")
        der = derive_regular_swap_matrices(l, lam, F)
        X = direct_sum([
            kronecker_rep(KroneckerTag("r_lambda", l, lam), F, sigma),
            kronecker_rep(KroneckerTag("r_lambda", l, _inv(F, lam)), F, sigma),
        ])
        return SmashModule(X, sigma, {"a0": _block_swap(F, der.B, der.B.inverse()), "a1": _block_swap(F, der.A, der.A.inverse())}, 1)
    raise DomainError(f"{tag.kind} is a representation family; use kronecker_rep")


def _block_swap(F: FieldSpec, lower: Matrix, upper: Matrix) -> Matrix:
    """[[0, upper], [lower, 0]]: sends (x, y) to (upper y, lower x)."""
    l = lower.rows
    z = Matrix.zeros(F, l, l)
    return Matrix.vstack(F, [Matrix.hstack(F, [z, upper]), Matrix.hstack(F, [lower, z])])


def regular_fixed_structures(l: int, lam: int, field: FieldSpec, seed=0) -> List[SmashModule]:
    """For lambda = +-1, r_lambda(l) is sigma-fixed and carries two structures."""
    return classify_induced(kronecker_rep(KroneckerTag("r_lambda", l, lam), field), kronecker_sigma(), seed)


def _dedup_lambdas(lambdas: Sequence[int], field: FieldSpec) -> List[int]:
    out: List[int] = []
    for lam in lambdas:
        lam = field.coerce(lam)
        if lam == 0:
            raise DomainError("lambda = 0 is not a valid R_lambda parameter")
        if lam in out or field.inv(lam) in out:
            continue
        out.append(lam)
    return out


def verify_kronecker_classification(l_max: int = 3, lambdas: Sequence[int] = (2, 3), field: Optional[FieldSpec] = None, seed=0) -> dict:
    """Build every family up to l_max and check validity, indecomposability,
    pairwise non-isomorphism and agreement with classify_induced.

    Failures are collected in the report rather than raised.
    """
    F = field or FieldSpec(101)
    rng = make_rng(seed)
    sigma = kronecker_sigma()
    lams = _dedup_lambdas(lambdas, F)
    failures: List[dict] = []
    entries: List[Tuple[KroneckerTag, SmashModule]] = []
    for l in range(l_max + 1):
        for kind in ("P0", "P1", "I0", "I1"):
            entries.append((KroneckerTag(kind, l), kronecker_smash(KroneckerTag(kind, l), F, sigma)))
        if l == 0:
            continue
        entries.append((KroneckerTag("R_0_inf", l), kronecker_smash(KroneckerTag("R_0_inf", l), F, sigma)))
        for lam in lams:
            if F.mul(lam, lam) == 1:
                for k, M in enumerate(regular_fixed_structures(l, lam, F, child_seed(rng))):
                    entries.append((KroneckerTag(f"R_fixed{k}", l, lam), M))
            else:
                tag = KroneckerTag("R_lambda", l, lam)
                entries.append((tag, kronecker_smash(tag, F, sigma)))

    modules = []
    for tag, M in entries:
        violations = validate(M)
        parts = smash_krull_schmidt(M, child_seed(rng))
        row = tag.to_json(M.field)
        row.update({
            "dims": list(M.rep.dim_vector),
            "valid": not violations,
            "violations": violations,
            "indecomposable": len(parts) == 1,
            "certificates": [c.to_json() for _, c in parts],
        })
        if violations:
            failures.append({"check": "validate", **tag.to_json(M.field), "detail": violations})
        if len(parts) != 1:
            failures.append({"check": "indecomposable", **tag.to_json(M.field), "summands": len(parts)})
        modules.append(row)

    # iso classes: entries sharing an id are isomorphic
    ids: List[int] = []
    reps: List[int] = []
    for k, (_, M) in enumerate(entries):
        hit = None
        for cid, j in enumerate(reps):
            N = entries[j][1]
            A, B = common_lift(M, N)
            if A.rep.dims == B.rep.dims and is_isomorphic_smash(A, B, child_seed(rng))[0]:
                hit = cid
                break
        if hit is None:
            hit = len(reps)
            reps.append(k)
        ids.append(hit)
    for row, cid in zip(modules, ids):
        row["iso_class_id"] = cid
    if len(set(ids)) != len(ids):
        failures.append({"check": "pairwise-non-isomorphic", "classes": len(set(ids)), "modules": len(ids)})

    induced = []
    for l in range(l_max + 1):
        checks = [("p", None, ["P0", "P1"]), ("i", None, ["I0", "I1"])]
        if l:
            checks += [("r_lambda", 0, ["R_0_inf"]), ("r_infinity", None, ["R_0_inf"])]
            checks += [("r_lambda", lam, ["R_lambda"]) for lam in lams if F.mul(lam, lam) != 1]
        for kind, lam, expect in checks:
            X = kronecker_rep(KroneckerTag(kind, l, lam), F, sigma)
            got = classify_induced(X, sigma, child_seed(rng))
            want = [M for tag, M in entries if tag.l == l and tag.kind in expect and (tag.kind != "R_lambda" or tag.lam == lam)]
            ok = _multiset_iso(got, want, rng)
            induced.append({"rep": kind, "l": l, "lambda": None if lam is None else F.element_to_json(lam), "induced": len(got), "expected": expect, "match": ok})
            if not ok:
                failures.append({"check": "classify_induced", "rep": kind, "l": l, "lambda": lam})

    corners = []
    for lam in lams:
        if F.mul(lam, lam) == 1:
            continue
        der = derive_regular_swap_matrices(1, lam, F)
        ok = der.B.to_json() == [[1]] and der.A.to_json() == [[F.element_to_json(lam)]]
        corners.append({"lambda": F.element_to_json(lam), "B1": der.B.to_json(), "A1": der.A.to_json(), "match": ok})
        if not ok:
            failures.append({"check": "corner-values", "lambda": lam})
    recursion = []
    for l in range(1, l_max + 1):
        for lam in lams:
            if F.mul(lam, lam) != 1:
                der = derive_regular_swap_matrices(l, lam, F)
                recursion.append({"l": l, "lambda": F.element_to_json(lam), **der.to_json()})

    return {
        "field": F.to_json(),
        "l_max": l_max,
        "lambdas": [F.element_to_json(x) for x in lams],
        "modules": modules,
        "module_count": len(modules),
        "iso_classes": len(set(ids)),
        "classify_induced": induced,
        "corner_values": corners,
        "swap_matrices": recursion,
        "failures": failures,
    }


def _multiset_iso(got: Sequence[SmashModule], want: Sequence[SmashModule], rng) -> bool:
    if len(got) != len(want):
        return False
    left = list(want)
    for M in got:
        for k, N in enumerate(left):
            A, B = common_lift(M, N)
            if A.rep.dims == B.rep.dims and is_isomorphic_smash(A, B, child_seed(rng))[0]:
                del left[k]
                break
        else:
            return False
    return True
