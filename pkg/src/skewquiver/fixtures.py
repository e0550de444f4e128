"""The A3 example: -1 --alpha--> 0 <--beta-- 1 with the reflection swapping the ends."""

from __future__ import annotations

from typing import Dict, Optional

from .exactfield import FieldSpec
from .linalg import Matrix
from .quiverrep import Quiver, QuiverAutomorphism, Representation

A3_NAMES = ("L-1", "L0", "L1", "L-10", "L01", "L101")

# sigma-twist of each indecomposable, as listed for this example
A3_TWIST_TABLE = {"L-1": "L1", "L1": "L-1", "L-10": "L01", "L01": "L-10", "L0": "L0", "L101": "L101"}


def a3_quiver() -> Quiver:
    return Quiver([-1, 0, 1], [("alpha", -1, 0), ("beta", 1, 0)])


def a3_sigma(quiver: Optional[Quiver] = None) -> QuiverAutomorphism:
    q = quiver or a3_quiver()
    return QuiverAutomorphism(q, {-1: 1, 0: 0, 1: -1}, {"alpha": "beta", "beta": "alpha"})


def a3_indecomposables(field: FieldSpec, quiver: Optional[Quiver] = None) -> Dict[str, Representation]:
    q = quiver or a3_quiver()
    one = Matrix.identity(field, 1)

    def rep(dims, alpha=False, beta=False):
        maps = {}
        if alpha:
            maps["alpha"] = one
        if beta:
            maps["beta"] = one
        return Representation(q, field, dims, maps)

    return {
        "L-1": rep({-1: 1}),
        "L0": rep({0: 1}),
        "L1": rep({1: 1}),
        "L-10": rep({-1: 1, 0: 1}, alpha=True),
        "L01": rep({0: 1, 1: 1}, beta=True),
        "L101": rep({-1: 1, 0: 1, 1: 1}, alpha=True, beta=True),
    }
