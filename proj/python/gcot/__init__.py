"""Grand-canonical optimal transport solvers.

Inputs and results are plain dicts in the gcot/v1 JSON layout.
"""

import json

from . import _gcot
from ._gcot import GcotError

__all__ = ["GcotError", "solve_lp", "diamond", "multiscale", "monge1d", "bound", "entropic", "density"]


def density(points, masses):
    pts = [list(p) if hasattr(p, "__len__") else [float(p)] for p in points]
    return {"schema": _gcot.schema, "kind": "density", "dim": len(pts[0]) if pts else 1,
            "points": pts, "masses": [float(m) for m in masses]}


def _text(rho):
    return rho if isinstance(rho, str) else json.dumps(rho)


def solve_lp(rho, nmax, cost="coulomb", exact=False):
    return json.loads(_gcot.solve_lp(_text(rho), cost, nmax, exact))


def diamond(t=0.7):
    return json.loads(_gcot.diamond(t))


def multiscale(k, scales=(5.0, 25.0)):
    return json.loads(_gcot.multiscale(k, list(scales)))


def monge1d(breakpoints, densities, kernel="inv"):
    return json.loads(_gcot.monge1d(list(breakpoints), list(densities), kernel))


def bound(theorem, mass, a=1.0, b=1.0):
    return json.loads(_gcot.bound(theorem, mass, a, b))


def entropic(rho, nmax, temp, cost="coulomb", tol=1e-8):
    return json.loads(_gcot.entropic(_text(rho), cost, nmax, temp, tol))
