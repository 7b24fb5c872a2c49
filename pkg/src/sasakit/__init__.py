"""Toric Sasaki geometry: Reeb vector minimization and soliton data on toric cones."""

__version__ = "0.1.0"

from .cone import (  # noqa: E402
    ConeModel,
    ReebVector,
    ToricDiagram,
    build_cone,
    canonical_reeb,
    evaluate_reeb,
    load_cone,
    make_diagram,
    parse_toric_diagram,
    reeb_feasible,
)
from .futaki import build_sigma, futaki_report, soliton_vector  # noqa: E402
from .optimize import classify_regularity, minimize  # noqa: E402
from .polytope import barycenter, exp_moments, triangulate, vertex_enumeration, volume  # noqa: E402
from .potential import build_potential, legendre_point, potential_checks  # noqa: E402
from .volume import build_volume_model, grad_vol, hess_vol, vol  # noqa: E402
