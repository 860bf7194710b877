# GnumericsSL.py
# V1: Per-context mpmath precision, truncating decimal I/O, shared exceptions.
"""
Precision context and decimal I/O for ShallitLab.

Every high-precision value in the project is an mpmath ``mpf`` owned by the
``MPContext`` of a ``PrecCtx``. No module touches the global ``mpmath.mp``
precision, so contexts of different sizes can be used side by side (and from
worker threads) without stepping on each other.

Decimal output truncates toward zero: a published constant printed with one
extra decimal keeps its last shown digit under truncation, and the project's
reference files follow that convention.
"""
import math
import logging
from dataclasses import dataclass, field

import mpmath

log = logging.getLogger(__name__)

MIN_DIGITS = 16
DEFAULT_GUARD = 10
# digits every serialized value keeps beyond its printed places
MIN_GUARD = 5

# Float helpers for budgets and digit planning (not for results).
RHO_FLOAT = 2.0 + math.sqrt(3.0)
LN_RHO = math.log(RHO_FLOAT)
LOG10_RHO = math.log10(RHO_FLOAT)


# --- Exceptions ---

class ShallitError(Exception):
    """Base class for every error raised by ShallitLab modules."""


class ParseError(ShallitError, ValueError):
    """Malformed decimal string. ``position`` is 1-based."""

    def __init__(self, text, position, reason):
        self.text = text
        self.position = position
        self.reason = reason
        super().__init__(f"cannot parse {text!r}: {reason} at position {position}")


class PrecisionError(ShallitError):
    """Requested output or check needs more digits than are carried."""


class DomainError(ShallitError, ArithmeticError):
    """Map evaluated outside its domain; carries the step index and value."""

    def __init__(self, message, step=None, value=None):
        self.step = step
        self.value = value
        if step is not None:
            message = f"{message} (step {step})"
        super().__init__(message)


class InvalidInitialValueError(DomainError):
    """A starting p0 whose forward orbit leaves the region p > 0 too early."""


class ConvergenceError(ShallitError, RuntimeError):
    """Iteration cap reached; ``last_iterates`` holds the final two iterates."""

    def __init__(self, message, last_iterates=()):
        self.last_iterates = tuple(last_iterates)
        super().__init__(message)


# --- Precision context ---

@dataclass(frozen=True)
class PrecCtx:
    """Decimal working precision: ``digits`` requested plus ``guard`` extra."""
    digits: int
    guard: int = DEFAULT_GUARD
    mp: mpmath.MPContext = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if isinstance(self.digits, bool) or not isinstance(self.digits, int):
            raise TypeError(f"digits must be an int, got {self.digits!r}")
        if self.digits < MIN_DIGITS:
            raise ValueError(f"digits must be >= {MIN_DIGITS}, got {self.digits}")
        if not isinstance(self.guard, int) or self.guard < 0:
            raise ValueError(f"guard must be a non-negative int, got {self.guard!r}")
        context = mpmath.MPContext()
        context.dps = self.digits + self.guard
        object.__setattr__(self, "mp", context)

    @property
    def working_digits(self):
        return self.digits + self.guard

    @property
    def eps(self):
        """One unit in the last working decimal."""
        return self.mp.mpf(10) ** (-self.working_digits)

    def tolerance(self, slack=8):
        """Check tolerance 10^(slack - digits), relative to max(1, |x|)."""
        return self.mp.mpf(10) ** (slack - self.digits)

    def widened(self, extra):
        """Same guard, ``extra`` more requested digits."""
        if extra < 0:
            raise ValueError(f"extra digits must be non-negative, got {extra}")
        return PrecCtx(self.digits + extra, self.guard)

    def convert(self, x):
        """Re-round ``x`` (any real, string or mpf) into this context."""
        return self.mp.mpf(x)


def conditioning_digits(n):
    """Digits lost to the rho^(n/2) growth along half of an n-trajectory."""
    return math.ceil((n // 2) * LOG10_RHO)


# --- Decimal parsing ---

def _scan_decimal(s):
    """Returns None when ``s`` is a plain signed decimal, else (position, reason)."""
    if not s:
        return 1, "empty string"
    i, size = 0, len(s)
    if s[0] in "+-":
        i = 1
    int_digits = 0
    while i < size and s[i].isdigit() and s[i].isascii():
        i += 1
        int_digits += 1
    frac_digits = 0
    if i < size and s[i] == ".":
        i += 1
        while i < size and s[i].isdigit() and s[i].isascii():
            i += 1
            frac_digits += 1
    if i < size:
        return i + 1, f"unexpected character {s[i]!r}"
    if int_digits + frac_digits == 0:
        return size + 1, "expected a digit"
    return None


def is_decimal(s):
    return isinstance(s, str) and _scan_decimal(s) is None


def real_from_decimal(s, ctx):
    """Parse a signed decimal string into the nearest Real under ``ctx``."""
    if not isinstance(s, str):
        raise TypeError(f"expected a decimal string, got {type(s).__name__}")
    problem = _scan_decimal(s)
    if problem is not None:
        position, reason = problem
        raise ParseError(s, position, reason)
    return ctx.mp.mpf(s)


# --- Decimal output ---

def real_to_decimal(x, places):
    """
    Round-toward-zero decimal expansion of ``x`` with exactly ``places``
    fractional digits.

    Works on the exact binary mantissa/exponent, so the result depends only on
    the stored value, never on platform float formatting.
    """
    if isinstance(places, bool) or not isinstance(places, int) or places < 1:
        raise ValueError(f"places must be a positive int, got {places!r}")
    context = getattr(x, "context", None)
    if context is None:
        raise TypeError(f"expected an mpf value, got {type(x).__name__}")
    if not context.isfinite(x):
        raise PrecisionError(f"cannot serialize non-finite value {x}")
    carried = context.dps
    if places > carried - MIN_GUARD:
        raise PrecisionError(
            f"{places} places requested but the value carries only {carried} digits "
            f"(at most {carried - MIN_GUARD} places)")

    sign = "-" if x < 0 else ""
    man, exp = abs(x).man_exp
    man = int(man)
    exp = int(exp)
    if exp >= 0:
        scaled = (man << exp) * 10 ** places
    else:
        scaled = (man * 10 ** places) >> (-exp)
    if scaled == 0:
        sign = ""
    body = str(scaled).rjust(places + 1, "0")
    return f"{sign}{body[:-places]}.{body[-places:]}"


def real_to_scientific(x, significant=5):
    """
    ``d.ddd...e<exp>`` with ``significant`` digits truncated toward zero, for
    gaps, residuals and bounds whose size matters more than their places.
    Exact on the binary value, like `real_to_decimal`.
    """
    if isinstance(significant, bool) or not isinstance(significant, int) or significant < 1:
        raise ValueError(f"significant must be a positive int, got {significant!r}")
    context = getattr(x, "context", None)
    if context is None:
        raise TypeError(f"expected an mpf value, got {type(x).__name__}")
    if not context.isfinite(x):
        raise PrecisionError(f"cannot serialize non-finite value {x}")
    if x == 0:
        return "0"

    sign = "-" if x < 0 else ""
    man, exp = abs(x).man_exp
    man, exp = int(man), int(exp)
    num, den = (man << exp, 1) if exp >= 0 else (man, 1 << -exp)
    # 10^e <= num/den < 10^(e+1)
    e = len(str(num)) - len(str(den))
    if num * 10 ** max(-e, 0) < den * 10 ** max(e, 0):
        e -= 1
    shift = significant - 1 - e
    if shift >= 0:
        body = str((num * 10 ** shift) // den)
    else:
        body = str(num // (den * 10 ** -shift))
    mantissa = f"{body[0]}.{body[1:]}" if significant > 1 else body
    return f"{sign}{mantissa}e{e:+d}"


# --- Named constants ---

def rho(ctx):
    """Expansion rate 2 + sqrt(3) of the hyperbolic fixed point (1, 1)."""
    return 2 + ctx.mp.sqrt(3)


def phi(ctx):
    """Golden ratio (1 + sqrt(5)) / 2."""
    return (1 + ctx.mp.sqrt(5)) / 2

# === End of GnumericsSL.py ===
