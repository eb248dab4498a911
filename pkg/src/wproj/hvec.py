"""Homogeneous points of P_{+1,-1}(V+W), the C*-action and the two chart atlases.

A point is an orbit of pairs (v, w) of nonzero vectors under
``lam . (v, w) = (lam v, w / lam)``.  Charts fix one component of v (the
V-atlas) or of w (the W-atlas) to 1 using the unique scalar that does so.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DimMismatch, InvalidPoint, PivotTooSmall, ZeroScalar

EPS = 1e-12


def as_cvec(x, name: str = "vector", allow_empty: bool = False) -> np.ndarray:
    """Return a read-only 1-D complex128 copy of ``x``."""
    arr = np.array(x, dtype=np.complex128).reshape(-1)
    if arr.size == 0 and not allow_empty:
        raise DimMismatch(f"{name} must have dim >= 1")
    arr.setflags(write=False)
    return arr


def _nonzero(arr: np.ndarray) -> bool:
    return arr.size > 0 and float(np.max(np.abs(arr))) > EPS


@dataclass(frozen=True, eq=False)
class HomPoint:
    """Homogeneous coordinates (v, w) with v, w both nonzero."""

    v: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        v = as_cvec(self.v, "v")
        w = as_cvec(self.w, "w")
        if not _nonzero(v):
            raise InvalidPoint("v must be nonzero")
        if not _nonzero(w):
            raise InvalidPoint("w must be nonzero")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", w)

    @property
    def n(self) -> int:
        return self.v.size

    @property
    def m(self) -> int:
        return self.w.size

    @property
    def z(self) -> np.ndarray:
        """Concatenated holomorphic coordinates (v, w)."""
        return np.concatenate([self.v, self.w])

    @classmethod
    def from_z(cls, z, n: int) -> "HomPoint":
        z = np.asarray(z, dtype=np.complex128)
        return cls(z[:n], z[n:])

    def __repr__(self):
        return f"HomPoint(v={self.v.tolist()}, w={self.w.tolist()})"


@dataclass(frozen=True)
class ChartId:
    atlas: Literal["V", "W"]
    index: int

    def __post_init__(self):
        if self.atlas not in ("V", "W"):
            raise ValueError(f"atlas must be 'V' or 'W', got {self.atlas!r}")
        if self.index < 0:
            raise ValueError("chart index must be non-negative")

    def check_dims(self, n: int, m: int) -> None:
        size = n if self.atlas == "V" else m
        if self.index >= size:
            raise DimMismatch(f"chart index {self.index} out of range for {self.atlas}-factor of dim {size}")

    def __str__(self):
        return f"{self.atlas}{self.index}"

    @classmethod
    def parse(cls, text: str) -> "ChartId":
        """Parse ``"V0"``, ``"W:1"`` and similar labels."""
        text = text.strip()
        atlas = text[:1].upper()
        return cls(atlas, int(text[1:].lstrip(":")))


@dataclass(frozen=True, eq=False)
class ChartCoords:
    """Inhomogeneous coordinates: ``u`` has the pivot slot deleted, ``fiber``
    is the rescaled other factor."""

    chart: ChartId
    u: np.ndarray
    fiber: np.ndarray

    def __post_init__(self):
        u = as_cvec(self.u, "u", allow_empty=True)
        fiber = as_cvec(self.fiber, "fiber")
        if not _nonzero(fiber):
            raise InvalidPoint("fiber must be nonzero")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "fiber", fiber)

    @property
    def dims(self) -> tuple[int, int]:
        """(n, m) of the ambient homogeneous space."""
        if self.chart.atlas == "V":
            return self.u.size + 1, self.fiber.size
        return self.fiber.size, self.u.size + 1

    def __repr__(self):
        return f"ChartCoords({self.chart}, u={self.u.tolist()}, fiber={self.fiber.tolist()})"


def act(lam: complex, p: HomPoint) -> HomPoint:
    lam = complex(lam)
    if abs(lam) <= EPS:
        raise ZeroScalar(f"|lambda| = {abs(lam):.3g} is too small")
    return HomPoint(lam * p.v, p.w / lam)


def canonical_matrix(p: HomPoint) -> np.ndarray:
    """The orbit invariant v (x) w as an n x m matrix."""
    return np.outer(p.v, p.w)


def equivalent(p: HomPoint, q: HomPoint, rtol: float = 1e-9) -> bool:
    if (p.n, p.m) != (q.n, q.m):
        raise DimMismatch(f"dims {(p.n, p.m)} vs {(q.n, q.m)}")
    mp, mq = canonical_matrix(p), canonical_matrix(q)
    scale = max(np.linalg.norm(mp), np.linalg.norm(mq))
    return bool(np.linalg.norm(mp - mq) <= rtol * scale)


def _pivot(p: HomPoint, chart: ChartId) -> complex:
    chart.check_dims(p.n, p.m)
    piv = p.v[chart.index] if chart.atlas == "V" else p.w[chart.index]
    if abs(piv) <= EPS:
        raise PivotTooSmall(f"pivot of chart {chart} has modulus {abs(piv):.3g}")
    return complex(piv)


def to_chart(p: HomPoint, chart: ChartId) -> ChartCoords:
    piv = _pivot(p, chart)
    if chart.atlas == "V":
        u = np.delete(p.v, chart.index) / piv
        return ChartCoords(chart, u, piv * p.w)
    u = np.delete(p.w, chart.index) / piv
    return ChartCoords(chart, u, piv * p.v)


def from_chart(c: ChartCoords) -> HomPoint:
    full = np.insert(c.u, c.chart.index, 1.0)
    if c.chart.atlas == "V":
        return HomPoint(full, c.fiber)
    return HomPoint(c.fiber, full)


def transition(c: ChartCoords, target: ChartId) -> ChartCoords:
    if target == c.chart:
        return c
    return to_chart(from_chart(c), target)


def best_chart(p: HomPoint) -> ChartId:
    # np.argmax returns the first maximum, which is the lowest-index tie-break.
    return ChartId("V", int(np.argmax(np.abs(p.v))))
