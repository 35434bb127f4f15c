"""The exact scalar type used everywhere.

``gmpy2.mpq`` when available, otherwise :class:`fractions.Fraction`; both are
exact and compare and hash consistently with each other and with ``int``.
Setting ``LOOPALG_RATIONAL=fraction`` forces the standard-library type.
"""

import os
from fractions import Fraction

Q = Fraction
BACKEND = "fraction"
if os.environ.get("LOOPALG_RATIONAL", "").lower() != "fraction":
    try:
        from gmpy2 import mpq as Q  # noqa: F811

        BACKEND = "gmpy2"
    except ImportError:  # pragma: no cover - depends on the environment
        pass

__all__ = ["BACKEND", "Q"]
