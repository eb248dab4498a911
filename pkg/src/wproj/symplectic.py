"""Hamiltonian reduction of (V x W, omega0) by the circle action.

``omega0 = (i/2)(sum dv^a ^ dvbar^a + alpha sum dw^k ^ dwbar^k)`` with moment
map ``H = (|v|^2 - alpha |w|^2) / 2`` generating ``(v, w) -> (e^{it} v, e^{-it} w)``.
Every C*-orbit meets the level ``H = beta`` (for alpha > 0) at a unique real
positive rescaling; the retraction onto that level pulls omega0 back to the
homogeneous expression of the reduced form.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimMismatch, NoRealRoot
from .forms import (DEFAULT_H, Frame, OneForm, SmoothMap, TwoForm, VectorFieldValue,
                    identity_map, pullback_two_form)
from .hvec import ChartCoords, ChartId, HomPoint, act, from_chart, to_chart


@dataclass(frozen=True)
class LevelSpec:
    alpha: float = 1.0
    beta: float = 0.0


@dataclass(frozen=True)
class ReductionContext:
    frame: Frame
    spec: LevelSpec = field(default_factory=LevelSpec)

    def __post_init__(self):
        if self.frame.n < 1 or self.frame.m < 1:
            raise ValueError("reduction needs n, m >= 1")

    @classmethod
    def for_point(cls, p: HomPoint, alpha: float = 1.0, beta: float = 0.0) -> "ReductionContext":
        return cls(Frame(p.n, p.m), LevelSpec(alpha, beta))

    @property
    def alpha(self) -> float:
        return self.spec.alpha

    @property
    def beta(self) -> float:
        return self.spec.beta


def _sq(x: np.ndarray) -> float:
    return float(np.vdot(x, x).real)


def _split(frame: Frame, z: np.ndarray):
    return z[:frame.n], z[frame.n:]


def omega0(ctx: ReductionContext) -> TwoForm:
    f = ctx.frame
    C = np.zeros((f.N, f.N), dtype=np.complex128)
    for a in range(f.n):
        C[a, f.n + a] = 0.5j
    for k in range(f.m):
        C[2 * f.n + k, 2 * f.n + f.m + k] = 0.5j * ctx.alpha
    return TwoForm(f, C - C.T)


def omega0_field(ctx: ReductionContext):
    form = omega0(ctx)
    return lambda z: form


def hamiltonian_z(ctx: ReductionContext, z: np.ndarray) -> float:
    v, w = _split(ctx.frame, np.asarray(z))
    return 0.5 * (_sq(v) - ctx.alpha * _sq(w))


def hamiltonian(ctx: ReductionContext, p: HomPoint) -> float:
    return hamiltonian_z(ctx, p.z)


def hamiltonian_differential(ctx: ReductionContext, p: HomPoint) -> OneForm:
    """Closed-form dH = (vbar dv + v dvbar - alpha (wbar dw + w dwbar)) / 2."""
    g = np.concatenate([p.v, -ctx.alpha * p.w])
    return OneForm(ctx.frame, 0.5 * ctx.frame.expand(np.conj(g), g))


def circle_generator(p: HomPoint) -> VectorFieldValue:
    """Generator of (v, w) -> (e^{it} v, e^{-it} w) at p."""
    frame = Frame(p.n, p.m)
    return VectorFieldValue(frame, frame.realify(np.concatenate([1j * p.v, -1j * p.w])))


def radial_generator(p: HomPoint) -> VectorFieldValue:
    """Generator of (v, w) -> (e^s v, e^{-s} w) at p."""
    frame = Frame(p.n, p.m)
    return VectorFieldValue(frame, frame.realify(np.concatenate([p.v, -p.w])))


def flow(p: HomPoint, t: float) -> HomPoint:
    return act(np.exp(1j * t), p)


def action_map(frame: Frame, lam: complex) -> SmoothMap:
    """z -> lam . z as a linear SmoothMap."""
    d = np.concatenate([np.full(frame.n, lam), np.full(frame.m, 1 / lam)]).astype(np.complex128)
    A = np.diag(d)
    return SmoothMap(frame, frame, lambda z: d * z, lambda z: (A, np.zeros_like(A)))


def phase_map(frame: Frame, t: float) -> SmoothMap:
    return action_map(frame, np.exp(1j * t))


def _level_scale(alpha: float, beta: float, A: float, B: float) -> tuple[float, float]:
    """Positive root t = |lam|^2 of A t^2 - 2 beta t - alpha B = 0, and sqrt(disc)."""
    disc = beta * beta + alpha * A * B
    if disc < 0:
        raise NoRealRoot(f"discriminant {disc:.6g} < 0")
    D = np.sqrt(disc)
    # Pick the cancellation-free form of the larger root.
    t = (beta + D) / A if beta >= 0 else alpha * B / (D - beta)
    if not t > 0:
        raise NoRealRoot(f"no positive root (t = {t:.6g})")
    return t, D


def normalize_to_level(ctx: ReductionContext, p: HomPoint) -> float:
    """Real lam > 0 with H(act(lam, p)) = beta."""
    A, B = _sq(p.v), _sq(p.w)
    if ctx.beta == 0 and ctx.alpha > 0:
        return float((ctx.alpha * B / A) ** 0.25)
    t, _ = _level_scale(ctx.alpha, ctx.beta, A, B)
    return float(np.sqrt(t))


def retraction(ctx: ReductionContext) -> SmoothMap:
    """s(p) = act(normalize_to_level(p), p), with its exact Wirtinger Jacobian."""
    frame = ctx.frame
    n = frame.n

    def evaluate(z):
        p = HomPoint.from_z(z, n)
        return act(normalize_to_level(ctx, p), p).z

    def jacobian(z):
        v, w = z[:n], z[n:]
        A, B = _sq(v), _sq(w)
        lam = normalize_to_level(ctx, HomPoint(v, w))
        t = lam * lam
        D = np.sqrt(ctx.beta ** 2 + ctx.alpha * A * B)
        lam_A = (ctx.alpha * B / (2 * A * D) - t / A) / (2 * lam)
        lam_B = (ctx.alpha / (2 * D)) / (2 * lam)
        gz = np.concatenate([lam_A * np.conj(v), lam_B * np.conj(w)])
        gzb = np.concatenate([lam_A * v, lam_B * w])
        scale = np.concatenate([np.full(n, lam), np.full(frame.m, 1 / lam)])
        Fz = np.diag(scale).astype(np.complex128)
        Fz[:n] += np.outer(v, gz)
        Fz[n:] -= np.outer(w, gz) / t
        Fzb = np.zeros_like(Fz)
        Fzb[:n] = np.outer(v, gzb)
        Fzb[n:] = -np.outer(w, gzb) / t
        return Fz, Fzb

    return SmoothMap(frame, frame, evaluate, jacobian)


def _contract(frame: Frame, vec: np.ndarray, block: str) -> OneForm:
    """The 1-form sum_j vec_j e^j over one coordinate block ('v', 'vbar', 'w', 'wbar')."""
    c = np.zeros(frame.N, dtype=np.complex128)
    start = {"v": 0, "vbar": frame.n, "w": 2 * frame.n, "wbar": 2 * frame.n + frame.m}[block]
    c[start:start + vec.size] = vec
    return OneForm(frame, c)


def omega_formula(p: HomPoint) -> TwoForm:
    """Closed-form homogeneous expression of the reduced form on the level H = 0 (alpha = 1)."""
    frame = Frame(p.n, p.m)
    A, B = _sq(p.v), _sq(p.w)
    a = _contract(frame, np.conj(p.v), "v")       # sum vbar^a dv^a
    abar = _contract(frame, p.v, "vbar")          # sum v^a dvbar^a
    b = _contract(frame, np.conj(p.w), "w")
    bbar = _contract(frame, p.w, "wbar")
    ctx = ReductionContext(frame)
    flat = (-2j) * omega0(ctx).coeff            # dv dvbar + dw dwbar
    dvdv = flat.copy()
    dvdv[2 * frame.n:, :] = 0
    dvdv[:, 2 * frame.n:] = 0
    dwdw = flat - dvdv
    C = (A * B * B * dvdv + A * A * B * dwdw
         - 0.5 * B * B * (a ^ abar).coeff
         - 0.5 * A * A * (b ^ bbar).coeff
         + 0.5 * A * B * (b ^ abar).coeff
         + 0.5 * A * B * (a ^ bbar).coeff)
    return TwoForm(frame, 0.5j * (A * B) ** -1.5 * C)


def omega_formula_z(frame: Frame):
    return lambda z: omega_formula(HomPoint.from_z(z, frame.n))


def omega_oracle(p: HomPoint, h: float = DEFAULT_H, ctx: ReductionContext | None = None) -> TwoForm:
    """Finite-difference pullback of omega0 along the retraction onto the level set."""
    ctx = ctx or ReductionContext.for_point(p)
    if (ctx.frame.n, ctx.frame.m) != (p.n, p.m):
        raise DimMismatch("context frame does not match point")
    return pullback_two_form(retraction(ctx), omega0_field(ctx), p.z, h, use_analytic=False)


def chart_frame(chart: ChartId, n: int, m: int) -> Frame:
    """Frame of a chart: V-charts order points as (u, fiber), W-charts as (fiber, u)."""
    chart.check_dims(n, m)
    return Frame(n - 1, m) if chart.atlas == "V" else Frame(n, m - 1)


def chart_point(c: ChartCoords) -> np.ndarray:
    if c.chart.atlas == "V":
        return np.concatenate([c.u, c.fiber])
    return np.concatenate([c.fiber, c.u])


def chart_coords(chart: ChartId, z: np.ndarray, n: int, m: int) -> ChartCoords:
    frame = chart_frame(chart, n, m)
    z = np.asarray(z, dtype=np.complex128)
    if chart.atlas == "V":
        return ChartCoords(chart, z[:frame.n], z[frame.n:])
    return ChartCoords(chart, z[n:], z[:n])


def _pivot_slots(chart: ChartId, n: int, m: int) -> list[int]:
    if chart.atlas == "V":
        return [chart.index, n + chart.index]
    return [2 * n + chart.index, 2 * n + m + chart.index]


def omega_in_chart(c: ChartCoords) -> TwoForm:
    """Reduced form in inhomogeneous coordinates: pivot set to 1, its differential to 0."""
    n, m = c.dims
    omega = omega_formula(from_chart(c))
    return omega.delete_slots(_pivot_slots(c.chart, n, m), chart_frame(c.chart, n, m))


def omega_in_chart_field(chart: ChartId, n: int, m: int):
    return lambda z: omega_in_chart(chart_coords(chart, z, n, m))


def transition_map(source: ChartId, target: ChartId, n: int, m: int) -> SmoothMap:
    """Chart transition as a SmoothMap between chart frames."""
    if source == target:
        return identity_map(chart_frame(source, n, m))

    def evaluate(z):
        return chart_point(to_chart(from_chart(chart_coords(source, z, n, m)), target))

    return SmoothMap(chart_frame(source, n, m), chart_frame(target, n, m), evaluate)
