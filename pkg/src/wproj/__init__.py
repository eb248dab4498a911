"""Weighted projective space P_{+1,-1}(V+W): charts, bundle structure and the reduced symplectic form."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .hvec import (ChartCoords, ChartId, HomPoint, act, best_chart, canonical_matrix,  # noqa: F401
                   equivalent, from_chart, to_chart, transition)
from .bundle import (ProjPoint, TautVector, decompose_rank1, embed_tautological,  # noqa: F401
                     project_V, project_W)
from .symplectic import (LevelSpec, ReductionContext, circle_generator, hamiltonian,  # noqa: F401
                         normalize_to_level, omega0, omega_formula, omega_in_chart,
                         omega_oracle, retraction)
