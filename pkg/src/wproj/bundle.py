"""Bundle projections onto P(V), P(W) and the rank-1 identification with (E_V (x) W)_0."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidPoint, NotRankOne, ZeroMatrix
from .hvec import EPS, HomPoint, as_cvec, canonical_matrix


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """A line, stored as its unit representative whose first non-negligible
    entry is real and positive."""

    rep: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rep", normalize_line(self.rep))

    def close_to(self, other: "ProjPoint", atol: float = 1e-12) -> bool:
        return self.rep.shape == other.rep.shape and bool(np.max(np.abs(self.rep - other.rep)) <= atol)

    def __repr__(self):
        return f"ProjPoint({self.rep.tolist()})"


def normalize_line(x) -> np.ndarray:
    x = np.array(x, dtype=np.complex128).reshape(-1)
    norm = np.linalg.norm(x)
    if x.size == 0 or np.max(np.abs(x)) <= EPS:
        raise InvalidPoint("cannot take the line through a zero vector")
    x = x / norm
    # Threshold relative to the unit-norm vector so the pivot choice is scale-free.
    first = int(np.flatnonzero(np.abs(x) > EPS)[0])
    x = x * (abs(x[first]) / x[first])
    x[first] = abs(x[first])
    return as_cvec(x)


@dataclass(frozen=True, eq=False)
class TautVector:
    base: ProjPoint
    vec: np.ndarray


def project_V(p: HomPoint) -> ProjPoint:
    return ProjPoint(p.v)


def project_W(p: HomPoint) -> ProjPoint:
    return ProjPoint(p.w)


def embed_tautological(p: HomPoint) -> TautVector:
    vec = canonical_matrix(p)
    vec.setflags(write=False)
    return TautVector(project_V(p), vec)


def decompose_rank1(M, rtol: float = 1e-9) -> HomPoint:
    """Factor a nonzero rank-1 matrix as v (x) w via its dominant singular pair.

    The returned representative has ``|v| = |w| = sqrt(sigma_1)``; any other
    factorization differs from it by the C*-action.
    """
    M = np.atleast_2d(np.asarray(M, dtype=np.complex128))
    if M.size == 0 or np.max(np.abs(M)) <= EPS:
        raise ZeroMatrix("matrix is zero")
    U, s, Vh = np.linalg.svd(M)
    if s.size > 1 and s[1] > rtol * s[0]:
        raise NotRankOne(f"second singular value {s[1]:.3g} exceeds {rtol:.1e} * {s[0]:.3g}")
    root = np.sqrt(s[0])
    return HomPoint(root * U[:, 0], root * Vh[0, :])
