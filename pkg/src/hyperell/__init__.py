"""Quadratic Dirichlet L-functions over F_q[x] for the hyperelliptic ensemble:
exact L-polynomials, zeros, ensemble statistics and the closed-form
1-level density and pair-correlation predictions they are compared with.
"""

from __future__ import annotations

__version__ = "0.1.0"
