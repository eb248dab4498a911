"""Seeded property checks with machine-readable pass/fail results.

Each check draws cases from an RNG stream derived from ``(seed, name)``,
measures an error per case and reports the worst one together with the
case that produced it (the witness).  Passing a witness back to
:func:`run_check` re-evaluates exactly that case.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from . import bundle, hvec
from .errors import NoRealRoot, NotRankOne, UnknownCheck
from .forms import (DEFAULT_H, Frame, exterior_derivative, interior_product, differential,
                    pullback_two_form, wirtinger_jacobian)
from .hvec import ChartId, HomPoint, act, canonical_matrix, equivalent
from .symplectic import (ReductionContext, action_map, chart_point, circle_generator,
                         hamiltonian, hamiltonian_z, normalize_to_level, omega0, omega0_field,
                         omega_formula, omega_formula_z, omega_in_chart, omega_in_chart_field,
                         omega_oracle, phase_map, radial_generator, retraction, transition_map)


@dataclass(frozen=True)
class CheckConfig:
    n: int = 2
    m: int = 2
    trials: int = 200
    seed: int = 42
    h: float = DEFAULT_H
    tol: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not (1 <= self.n <= 8 and 1 <= self.m <= 8):
            raise ValueError(f"dims must lie in 1..8, got n={self.n}, m={self.m}")
        unknown = set(self.tol) - set(REGISTRY)
        if unknown:
            raise UnknownCheck(f"tolerance override for unknown check(s): {sorted(unknown)}")


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_abs_err: float
    tol: float
    trials: int
    passed: bool
    witness: dict

    def to_dict(self) -> dict:
        return asdict(self)


# --- sampling ---------------------------------------------------------------

def _rng(seed: int, name: str) -> np.random.Generator:
    digest = hashlib.sha256(name.encode()).digest()
    return np.random.default_rng([seed & (2**64 - 1), int.from_bytes(digest[:8], "little")])


def _entries(rng: np.random.Generator, size: int) -> np.ndarray:
    """Real and imaginary parts uniform on [-2, -0.1] u [0.1, 2]."""
    mag = rng.uniform(0.1, 2.0, size=(2, size))
    sign = rng.choice([-1.0, 1.0], size=(2, size))
    re, im = mag * sign
    return re + 1j * im


def random_point(rng: np.random.Generator, n: int, m: int) -> HomPoint:
    return HomPoint(_entries(rng, n), _entries(rng, m))


def _random_lambda(rng: np.random.Generator, lo: float = 0.5, hi: float = 2.0) -> complex:
    return rng.uniform(lo, hi) * np.exp(1j * rng.uniform(0, 2 * np.pi))


def encode_complex(x) -> list:
    arr = np.asarray(x, dtype=np.complex128).reshape(-1)
    return [[float(c.real), float(c.imag)] for c in arr]


def decode_complex(pairs) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)


def _cplx(x: complex) -> list:
    return [float(complex(x).real), float(complex(x).imag)]


def _point_case(p: HomPoint, **extra) -> dict:
    return {"v": encode_complex(p.v), "w": encode_complex(p.w), **extra}


def _case_point(case: dict) -> HomPoint:
    return HomPoint(decode_complex(case["v"]), decode_complex(case["w"]))


def _rel(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(a), np.linalg.norm(b)))


# --- checks -----------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    tol: float
    sample: Callable[[np.random.Generator, CheckConfig, int], dict]
    error: Callable[[dict, CheckConfig], float]


def _sample_point(rng, cfg, i):
    return _point_case(random_point(rng, cfg.n, cfg.m))


MOMENT_ALPHAS = (1.0, 2.0, -1.0)


def _sample_moment(rng, cfg, i):
    return _point_case(random_point(rng, cfg.n, cfg.m), alpha=MOMENT_ALPHAS[i % 3])


def _err_moment(case, cfg):
    p = _case_point(case)
    ctx = ReductionContext.for_point(p, alpha=case["alpha"])
    lhs = interior_product(circle_generator(p), omega0(ctx))
    dH = differential(lambda z: hamiltonian_z(ctx, z), p.z, ctx.frame, cfg.h)
    return float(np.max(np.abs(lhs.coeff + dH.coeff)))


def _sample_level(rng, cfg, i):
    return _point_case(random_point(rng, cfg.n, cfg.m), beta=float(rng.uniform(-2, 2)))


def _err_level(case, cfg):
    p = _case_point(case)
    ctx = ReductionContext.for_point(p, alpha=1.0, beta=case["beta"])
    lam = normalize_to_level(ctx, p)
    return abs(hamiltonian(ctx, act(lam, p)) - case["beta"])


def _err_negative_alpha(case, cfg):
    p = _case_point(case)
    try:
        normalize_to_level(ReductionContext.for_point(p, alpha=-1.0, beta=0.0), p)
    except NoRealRoot:
        return 0.0
    return 1.0


def _err_idempotent(case, cfg):
    p = _case_point(case)
    s = retraction(ReductionContext.for_point(p))
    q = s(p.z)
    return float(np.max(np.abs(s(q) - q)) / max(1.0, np.max(np.abs(q))))


def _tangent_in_kernel(rng, p: HomPoint, alpha: float) -> np.ndarray:
    """Holomorphic components of a random real tangent vector annihilated by dH."""
    zeta = _entries(rng, p.n + p.m)
    g = np.concatenate([p.v, -alpha * p.w])
    return zeta - np.vdot(g, zeta).real / np.vdot(g, g).real * g


def _sample_s1(rng, cfg, i):
    beta = float(rng.uniform(-1, 1))
    raw = random_point(rng, cfg.n, cfg.m)
    ctx = ReductionContext.for_point(raw, beta=beta)
    p = act(normalize_to_level(ctx, raw), raw)
    xi, eta = _tangent_in_kernel(rng, p, 1.0), _tangent_in_kernel(rng, p, 1.0)
    return _point_case(p, beta=beta, xi=encode_complex(xi), eta=encode_complex(eta),
                       t=float(rng.uniform(0, 2 * np.pi)))


def _err_s1(case, cfg):
    p = _case_point(case)
    ctx = ReductionContext.for_point(p, beta=case["beta"])
    f = ctx.frame
    xi, eta = decode_complex(case["xi"]), decode_complex(case["eta"])
    J = wirtinger_jacobian(phase_map(f, case["t"]), p.z)
    X, Y = f.realify(xi), f.realify(eta)
    w0 = omega0(ctx)
    dH = np.concatenate([np.conj(p.v), -np.conj(p.w)])
    tangency = abs(np.real(dH @ xi)) + abs(np.real(dH @ eta))
    return max(abs(w0(J @ X, J @ Y) - w0(X, Y)), tangency)


def _sample_phase(rng, cfg, i):
    return _point_case(random_point(rng, cfg.n, cfg.m), t=float(rng.uniform(0, 2 * np.pi)))


def _err_phase(case, cfg):
    p = _case_point(case)
    ctx = ReductionContext.for_point(p)
    pulled = pullback_two_form(phase_map(ctx.frame, case["t"]), omega0_field(ctx), p.z)
    return float(np.max(np.abs(pulled.coeff - omega0(ctx).coeff)))


def _err_formula_oracle(case, cfg):
    p = _case_point(case)
    return _rel(omega_formula(p).coeff, omega_oracle(p, cfg.h).coeff)


def _sample_basic(rng, cfg, i):
    return _point_case(random_point(rng, cfg.n, cfg.m), lam=_cplx(_random_lambda(rng)))


def _err_basic(case, cfg):
    p = _case_point(case)
    lam = complex(*case["lam"])
    omega = omega_formula(p)
    err = max(float(np.max(np.abs(interior_product(circle_generator(p), omega).coeff))),
              float(np.max(np.abs(interior_product(radial_generator(p), omega).coeff))))
    frame = Frame(p.n, p.m)
    pulled = pullback_two_form(action_map(frame, lam), omega_formula_z(frame), p.z)
    return max(err, float(np.max(np.abs(pulled.coeff - omega.coeff))))


def _err_closed(case, cfg):
    p = _case_point(case)
    frame = Frame(p.n, p.m)
    return exterior_derivative(omega_formula_z(frame), p.z, cfg.h, frame).max_abs()


def _random_chart(rng, n, m) -> ChartId:
    if rng.random() < 0.5:
        return ChartId("V", int(rng.integers(n)))
    return ChartId("W", int(rng.integers(m)))


def _sample_chart(rng, cfg, i):
    return _point_case(random_point(rng, cfg.n, cfg.m), chart=str(_random_chart(rng, cfg.n, cfg.m)))


NONDEGENERACY_FLOOR = 1e-10


def chart_determinant(case: dict) -> float:
    p = _case_point(case)
    c = hvec.to_chart(p, ChartId.parse(case["chart"]))
    return float(abs(np.linalg.det(omega_in_chart(c).coeff)))


def _err_nondegenerate(case, cfg):
    # Reported as floor / |det|, so the check passes iff |det| >= floor.
    det = chart_determinant(case)
    return math.inf if det == 0 else NONDEGENERACY_FLOOR / det


def _sample_chart_pair(rng, cfg, i):
    return _point_case(random_point(rng, cfg.n, cfg.m), chart=str(_random_chart(rng, cfg.n, cfg.m)),
                       target=str(_random_chart(rng, cfg.n, cfg.m)))


def _err_chart_consistency(case, cfg):
    p = _case_point(case)
    A, B = ChartId.parse(case["chart"]), ChartId.parse(case["target"])
    cA = hvec.to_chart(p, A)
    direct = omega_in_chart(cA)
    pulled = pullback_two_form(transition_map(A, B, p.n, p.m), omega_in_chart_field(B, p.n, p.m),
                               chart_point(cA), cfg.h)
    return _rel(direct.coeff, pulled.coeff)


def _sample_bundle(rng, cfg, i):
    p, q = random_point(rng, cfg.n, cfg.m), random_point(rng, cfg.n, cfg.m)
    return _point_case(p, v2=encode_complex(q.v), w2=encode_complex(q.w))


def _err_bundle(case, cfg):
    p = _case_point(case)
    M = canonical_matrix(p)
    err = _rel(canonical_matrix(bundle.decompose_rank1(M, 1e-9)), M)
    if min(p.n, p.m) >= 2:
        rank2 = M + np.outer(decode_complex(case["v2"]), decode_complex(case["w2"]))
        try:
            bundle.decompose_rank1(rank2, 1e-9)
            err = max(err, 1.0)
        except NotRankOne:
            pass
    return err


def _sample_orbit(rng, cfg, i):
    p = random_point(rng, cfg.n, cfg.m)
    # A second point whose v lies on a different line (or, for n = 1, whose w does).
    q = random_point(rng, cfg.n, cfg.m)
    return _point_case(p, lam=_cplx(_random_lambda(rng, 0.1, 10.0)),
                       v2=encode_complex(q.v), w2=encode_complex(q.w))


def _err_orbit(case, cfg):
    p = _case_point(case)
    lam = complex(*case["lam"])
    M = canonical_matrix(p)
    err = _rel(canonical_matrix(act(lam, p)), M)
    err = max(err, _rel(canonical_matrix(HomPoint(lam * p.v, p.w)), canonical_matrix(HomPoint(p.v, lam * p.w))))
    q = HomPoint(decode_complex(case["v2"]), decode_complex(case["w2"]))
    if equivalent(p, q, 1e-9):
        err = max(err, 1.0)
    return err


def _sample_example(rng, cfg, i):
    return _point_case(random_point(rng, cfg.n, 1), lam=_cplx(_random_lambda(rng, 0.1, 10.0)))


def _err_example(case, cfg):
    # For W = C the assignment [v||w] -> w^0 v is well defined and inverted by x -> [x||1].
    p = _case_point(case)
    lam = complex(*case["lam"])
    image = p.w[0] * p.v
    q = act(lam, p)
    err = float(np.max(np.abs(q.w[0] * q.v - image)) / np.max(np.abs(image)))
    err = max(err, float(np.max(np.abs(canonical_matrix(p)[:, 0] - image)) / np.max(np.abs(image))))
    back = HomPoint(image, [1.0])
    return max(err, _rel(canonical_matrix(back), canonical_matrix(p)))


REGISTRY: dict[str, Check] = {c.name: c for c in [
    Check("moment_map", 1e-6, _sample_moment, _err_moment),
    Check("level_section", 1e-10, _sample_level, _err_level),
    Check("proposition_negative_alpha", 0.0, _sample_point, _err_negative_alpha),
    Check("retraction_idempotent", 1e-10, _sample_point, _err_idempotent),
    Check("s1_invariance_on_level", 1e-9, _sample_s1, _err_s1),
    Check("phase_invariance_global", 1e-12, _sample_phase, _err_phase),
    Check("formula_vs_oracle", 1e-6, _sample_point, _err_formula_oracle),
    Check("basicness", 1e-7, _sample_basic, _err_basic),
    Check("closedness", 1e-5, _sample_point, _err_closed),
    Check("chart_nondegeneracy", 1.0, _sample_chart, _err_nondegenerate),
    Check("chart_consistency", 1e-6, _sample_chart_pair, _err_chart_consistency),
    Check("bundle_roundtrip", 1e-8, _sample_bundle, _err_bundle),
    Check("orbit_equality", 1e-9, _sample_orbit, _err_orbit),
    Check("example_W_is_scalar", 1e-9, _sample_example, _err_example),
]}

CHECK_NAMES = tuple(REGISTRY)


def run_check(name: str, cfg: CheckConfig, witness: Optional[dict] = None) -> CheckResult:
    """Run one registered check; with ``witness`` only that case is evaluated."""
    try:
        check = REGISTRY[name]
    except KeyError:
        raise UnknownCheck(f"unknown check {name!r}; known: {', '.join(CHECK_NAMES)}") from None
    tol = float(cfg.tol.get(name, check.tol))
    if witness is not None:
        cases = [witness]
    else:
        rng = _rng(cfg.seed, name)
        cases = (check.sample(rng, cfg, i) for i in range(cfg.trials))
    worst, worst_case, count = -1.0, None, 0
    for case in cases:
        err = float(check.error(case, cfg))
        count += 1
        if err > worst or math.isnan(err):
            worst, worst_case = err, case
    return CheckResult(name, worst, tol, count, bool(worst <= tol), worst_case)


def run_all(cfg: CheckConfig, names: Optional[list[str]] = None) -> list[CheckResult]:
    return [run_check(name, cfg) for name in (names or CHECK_NAMES)]


def all_passed(results: list[CheckResult]) -> bool:
    return all(r.passed for r in results)


def config_dict(cfg: CheckConfig) -> dict[str, Any]:
    return {"n": cfg.n, "m": cfg.m, "trials": cfg.trials, "seed": cfg.seed, "h": cfg.h,
            "tol": dict(sorted(cfg.tol.items()))}
