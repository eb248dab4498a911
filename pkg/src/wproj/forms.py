"""Numerical exterior calculus on V x W in Wirtinger coordinates.

Points are complex vectors ``z = (v, w)`` of length ``n + m``.  Forms are
expressed in the real-dimension-``N = 2(n + m)`` coframe

    (dv^1..dv^n, dvbar^1..dvbar^n, dw^1..dw^m, dwbar^1..dwbar^m)

and a 2-form with antisymmetric coefficient matrix ``C`` means
``sum_{mu<nu} C[mu, nu] e^mu ^ e^nu``, so that ``omega(X, Y) = X @ C @ Y``.
Derivatives are central differences along the underlying real coordinates,
combined into d/dz = (d/dx - i d/dy)/2 and d/dzbar = (d/dx + i d/dy)/2.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, DomainViolation, FrameMismatch, StepTooSmall

DEFAULT_H = 1e-5
SECOND_ORDER_H = 1e-4
MIN_H = 1e-12


@dataclass(frozen=True)
class Frame:
    n: int
    m: int

    def __post_init__(self):
        if self.n < 0 or self.m < 0 or self.n + self.m < 1:
            raise ValueError(f"invalid frame dims ({self.n}, {self.m})")

    @property
    def N(self) -> int:
        return 2 * (self.n + self.m)

    @property
    def dim(self) -> int:
        """Number of holomorphic coordinates."""
        return self.n + self.m

    @cached_property
    def holo(self) -> np.ndarray:
        """Frame slots of dv^a, dw^k in the order of z."""
        n, m = self.n, self.m
        return np.concatenate([np.arange(n), 2 * n + np.arange(m)])

    @cached_property
    def anti(self) -> np.ndarray:
        """Frame slots of dvbar^a, dwbar^k in the order of z."""
        n, m = self.n, self.m
        return np.concatenate([n + np.arange(n), 2 * n + m + np.arange(m)])

    @cached_property
    def conj_perm(self) -> np.ndarray:
        """The conjugation involution on frame slots."""
        perm = np.empty(self.N, dtype=int)
        perm[self.holo] = self.anti
        perm[self.anti] = self.holo
        return perm

    def labels(self) -> list[str]:
        n, m = self.n, self.m
        return ([f"dv{a}" for a in range(n)] + [f"dvbar{a}" for a in range(n)]
                + [f"dw{k}" for k in range(m)] + [f"dwbar{k}" for k in range(m)])

    def index(self, label: str) -> int:
        return self.labels().index(label)

    def expand(self, dz: np.ndarray, dzb: np.ndarray) -> np.ndarray:
        """Place holomorphic/antiholomorphic partials (last axis = dim) into frame order."""
        out = np.zeros(dz.shape[:-1] + (self.N,), dtype=np.complex128)
        out[..., self.holo] = dz
        out[..., self.anti] = dzb
        return out

    def realify(self, z_vec: np.ndarray) -> np.ndarray:
        """Tangent vector with holomorphic components z_vec, conjugates filled in."""
        z_vec = np.asarray(z_vec, dtype=np.complex128)
        return self.expand(z_vec, np.conj(z_vec))

    def check(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=np.complex128).reshape(-1)
        if z.size != self.dim:
            raise FrameMismatch(f"point of length {z.size} in frame {self}")
        return z


def _check_same(a: Frame, b: Frame) -> None:
    if a != b:
        raise FrameMismatch(f"{a} vs {b}")


@dataclass(frozen=True, eq=False)
class OneForm:
    frame: Frame
    coeff: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeff, dtype=np.complex128)
        if c.shape != (self.frame.N,):
            raise FrameMismatch(f"1-form coefficients of shape {c.shape} in {self.frame}")
        object.__setattr__(self, "coeff", c)

    def __call__(self, X) -> complex:
        return complex(self.coeff @ _comp(X))

    def __add__(self, other: "OneForm") -> "OneForm":
        _check_same(self.frame, other.frame)
        return OneForm(self.frame, self.coeff + other.coeff)

    def __neg__(self):
        return OneForm(self.frame, -self.coeff)

    def __rmul__(self, scalar):
        return OneForm(self.frame, scalar * self.coeff)

    def wedge(self, other: "OneForm") -> "TwoForm":
        _check_same(self.frame, other.frame)
        a, b = self.coeff, other.coeff
        return TwoForm(self.frame, np.outer(a, b) - np.outer(b, a))

    __xor__ = wedge


@dataclass(frozen=True, eq=False)
class TwoForm:
    frame: Frame
    coeff: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeff, dtype=np.complex128)
        if c.shape != (self.frame.N, self.frame.N):
            raise FrameMismatch(f"2-form coefficients of shape {c.shape} in {self.frame}")
        scale = max(1.0, float(np.max(np.abs(c), initial=0.0)))
        asym = float(np.max(np.abs(c + c.T), initial=0.0))
        if asym > 1e-8 * scale:
            raise ValueError(f"coefficient matrix is not antisymmetric (defect {asym:.3g})")
        object.__setattr__(self, "coeff", 0.5 * (c - c.T))

    def __call__(self, X, Y) -> complex:
        return complex(_comp(X) @ self.coeff @ _comp(Y))

    def __getitem__(self, key: tuple[str, str]) -> complex:
        i, j = (self.frame.index(k) for k in key)
        return complex(self.coeff[i, j])

    def __add__(self, other: "TwoForm") -> "TwoForm":
        _check_same(self.frame, other.frame)
        return TwoForm(self.frame, self.coeff + other.coeff)

    def __sub__(self, other: "TwoForm") -> "TwoForm":
        _check_same(self.frame, other.frame)
        return TwoForm(self.frame, self.coeff - other.coeff)

    def __rmul__(self, scalar):
        return TwoForm(self.frame, scalar * self.coeff)

    def reality_defect(self) -> float:
        """max |conj(C[mu,nu]) - C[sigma mu, sigma nu]|; zero for real forms."""
        p = self.frame.conj_perm
        return float(np.max(np.abs(np.conj(self.coeff) - self.coeff[np.ix_(p, p)])))

    def delete_slots(self, slots, frame: Frame) -> "TwoForm":
        keep = np.setdiff1d(np.arange(self.frame.N), slots)
        return TwoForm(frame, self.coeff[np.ix_(keep, keep)])


@dataclass(frozen=True, eq=False)
class ThreeTensor:
    """Fully antisymmetric coefficients of a 3-form (full N x N x N array)."""

    frame: Frame
    coeff: np.ndarray

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeff), initial=0.0))


@dataclass(frozen=True, eq=False)
class VectorFieldValue:
    frame: Frame
    comp: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.comp, dtype=np.complex128)
        if c.shape != (self.frame.N,):
            raise FrameMismatch(f"vector of shape {c.shape} in {self.frame}")
        object.__setattr__(self, "comp", c)

    def reality_defect(self) -> float:
        f = self.frame
        return float(np.max(np.abs(self.comp[f.anti] - np.conj(self.comp[f.holo]))))


def _comp(X) -> np.ndarray:
    return X.comp if isinstance(X, VectorFieldValue) else np.asarray(X, dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class SmoothMap:
    """A map between coordinate domains given on holomorphic coordinates.

    ``jacobian`` (optional) returns the pair ``(dF/dz, dF/dzbar)`` of
    ``codomain.dim x domain.dim`` matrices; when present it is used instead
    of finite differences.
    """

    domain: Frame
    codomain: Frame
    evaluate: Callable[[np.ndarray], np.ndarray]
    jacobian: Optional[Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]] = None

    @property
    def analytic(self) -> bool:
        return self.jacobian is not None

    def __call__(self, z) -> np.ndarray:
        z = self.domain.check(z)
        try:
            out = np.asarray(self.evaluate(z), dtype=np.complex128).reshape(-1)
        except DomainError as exc:
            raise DomainViolation(str(exc)) from exc
        if out.size != self.codomain.dim or not np.all(np.isfinite(out)):
            raise DomainViolation(f"map produced an invalid value at {z}")
        return out

    def then(self, other: "SmoothMap") -> "SmoothMap":
        """``other o self``; analytic if both factors are."""
        _check_same(self.codomain, other.domain)
        jac = None
        if self.analytic and other.analytic:
            def jac(z):
                az, azb = self.jacobian(z)
                bz, bzb = other.jacobian(self(z))
                return bz @ az + bzb @ np.conj(azb), bz @ azb + bzb @ np.conj(az)
        return SmoothMap(self.domain, other.codomain, lambda z: other(self(z)), jac)


def identity_map(frame: Frame) -> SmoothMap:
    eye = np.eye(frame.dim, dtype=np.complex128)
    zero = np.zeros_like(eye)
    return SmoothMap(frame, frame, lambda z: z.copy(), lambda z: (eye, zero))


def linear_map(frame: Frame, A, B=None, codomain: Frame | None = None) -> SmoothMap:
    """z -> A z + B conj(z)."""
    A = np.asarray(A, dtype=np.complex128)
    B = np.zeros_like(A) if B is None else np.asarray(B, dtype=np.complex128)
    codomain = codomain or frame
    return SmoothMap(frame, codomain, lambda z: A @ z + B @ np.conj(z), lambda z: (A, B))


def _check_h(h: float) -> None:
    if not h >= MIN_H:
        raise StepTooSmall(f"step {h} below {MIN_H}")


def wirtinger_partials(fn: Callable[[np.ndarray], np.ndarray], z: np.ndarray, h: float = DEFAULT_H):
    """Central-difference Wirtinger partials of an array-valued function.

    Returns ``(dz, dzb)``, each of shape ``fn(z).shape + (len(z),)``.
    """
    _check_h(h)
    z = np.asarray(z, dtype=np.complex128)
    dx, dy = [], []
    for j in range(z.size):
        hj = h * max(1.0, abs(z[j]))
        for step, acc in ((hj, dx), (1j * hj, dy)):
            zp, zm = z.copy(), z.copy()
            zp[j] += step
            zm[j] -= step
            acc.append((np.asarray(fn(zp)) - np.asarray(fn(zm))) / (2 * hj))
    dx = np.moveaxis(np.array(dx, dtype=np.complex128), 0, -1)
    dy = np.moveaxis(np.array(dy, dtype=np.complex128), 0, -1)
    return 0.5 * (dx - 1j * dy), 0.5 * (dx + 1j * dy)


def holo_to_frame_jacobian(domain: Frame, codomain: Frame, Fz: np.ndarray, Fzb: np.ndarray) -> np.ndarray:
    J = np.zeros((codomain.N, domain.N), dtype=np.complex128)
    rz, ra = codomain.holo, codomain.anti
    cz, ca = domain.holo, domain.anti
    J[np.ix_(rz, cz)] = Fz
    J[np.ix_(rz, ca)] = Fzb
    J[np.ix_(ra, cz)] = np.conj(Fzb)
    J[np.ix_(ra, ca)] = np.conj(Fz)
    return J


def wirtinger_jacobian(f: SmoothMap, z, h: float = DEFAULT_H, use_analytic: bool = True) -> np.ndarray:
    """J[mu, nu] = d f^mu / d z^nu over the full real-structure frames."""
    _check_h(h)
    z = f.domain.check(z)
    if f.analytic and use_analytic:
        Fz, Fzb = f.jacobian(z)
    else:
        Fz, Fzb = wirtinger_partials(f, z, h)
    return holo_to_frame_jacobian(f.domain, f.codomain, Fz, Fzb)


FormField = Callable[[np.ndarray], TwoForm]


def pullback_two_form(f: SmoothMap, omega_at: FormField, z, h: float = DEFAULT_H,
                      use_analytic: bool = True) -> TwoForm:
    z = f.domain.check(z)
    J = wirtinger_jacobian(f, z, h, use_analytic)
    target = omega_at(f(z))
    _check_same(target.frame, f.codomain)
    return TwoForm(f.domain, J.T @ target.coeff @ J)


def pullback_map(f: SmoothMap, omega_at: FormField, h: float = DEFAULT_H,
                 use_analytic: bool = True) -> FormField:
    """The form field ``f^* omega`` as a callable."""
    return lambda z: pullback_two_form(f, omega_at, z, h, use_analytic)


def exterior_derivative(omega_at: FormField, z, h: float = DEFAULT_H, frame: Frame | None = None) -> ThreeTensor:
    z = np.asarray(z, dtype=np.complex128)
    if frame is None:
        frame = omega_at(z).frame
    dz, dzb = wirtinger_partials(lambda x: omega_at(x).coeff, z, h)
    D = np.moveaxis(frame.expand(dz, dzb), -1, 0)  # D[mu, nu, rho] = d_mu C[nu, rho]
    T = D + np.einsum("nrm->mnr", D) + np.einsum("rmn->mnr", D)
    return ThreeTensor(frame, T)


def exterior_derivative_one_form(alpha_at: Callable[[np.ndarray], OneForm], z, h: float = DEFAULT_H) -> TwoForm:
    z = np.asarray(z, dtype=np.complex128)
    frame = alpha_at(z).frame
    dz, dzb = wirtinger_partials(lambda x: alpha_at(x).coeff, z, h)
    D = frame.expand(dz, dzb).T  # D[mu, nu] = d_mu a_nu
    return TwoForm(frame, D - D.T)


def interior_product(X: VectorFieldValue, omega: TwoForm) -> OneForm:
    _check_same(X.frame, omega.frame)
    return OneForm(omega.frame, X.comp @ omega.coeff)


def differential(fn: Callable[[np.ndarray], complex], z, frame: Frame, h: float = DEFAULT_H) -> OneForm:
    z = frame.check(z)
    dz, dzb = wirtinger_partials(lambda x: np.asarray(fn(x), dtype=np.complex128), z, h)
    return OneForm(frame, frame.expand(dz, dzb))
