"""Backend selection for the Matsubara-term integrator.

The compiled extension is used when it imports; setting the environment
variable ``LIFSHITZ_AUDIT_PURE=1`` forces the numpy backend.  Both expose
``integrate_terms(code, zeta, params, quantity, pol, rtol, atol, max_panels)``
returning ``(values, errors, panels, status)``.
"""
from __future__ import annotations

import os

from . import _quad
from ._quad import (
    BOTH,
    ENERGY,
    FRESNEL,
    MODIFIED,
    PRESSURE,
    RPA,
    TE,
    TM,
    UNIAXIAL,
    Y_SPAN,
    ZERO_CONST,
    ZERO_PLASMA,
    ZERO_SCREENED,
    ZERO_UNIAXIAL,
)

__all__ = [
    "BACKEND", "available_backends", "integrate_terms", "Y_SPAN",
    "FRESNEL", "MODIFIED", "RPA", "UNIAXIAL",
    "ZERO_CONST", "ZERO_PLASMA", "ZERO_SCREENED", "ZERO_UNIAXIAL",
    "ENERGY", "PRESSURE", "TM", "TE", "BOTH",
]

try:
    from . import _kernel as _compiled
except ImportError:  # extension not built
    _compiled = None


def available_backends():
    """Mapping backend name -> integrate_terms callable."""
    out = {"python": _quad.integrate_terms}
    if _compiled is not None:
        out["compiled"] = _compiled.integrate_terms
    return out


if _compiled is not None and not os.environ.get("LIFSHITZ_AUDIT_PURE"):
    BACKEND = "compiled"
    integrate_terms = _compiled.integrate_terms
else:
    BACKEND = "python"
    integrate_terms = _quad.integrate_terms
