"""Small shared helpers for deterministic text output."""

from __future__ import annotations


def fmt_float(x):
    """Format a float with 17 significant digits, normalizing negative zero."""
    x = float(x)
    if x == 0.0:
        x = 0.0
    return f"{x:.17g}"


def fmt_complex(z):
    """Format a complex number as ``a+bj`` parseable by ``complex()``."""
    z = complex(z)
    re = 0.0 if z.real == 0.0 else z.real
    im = 0.0 if z.imag == 0.0 else z.imag
    sign = "+" if not (im < 0.0) else "-"
    return f"{re:.17g}{sign}{abs(im):.17g}j"


def parse_complex(token):
    """Parse a complex entry written by :func:`fmt_complex` (or plain floats)."""
    return complex(token.strip().replace(" ", ""))
