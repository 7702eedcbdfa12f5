"""Exact rational-linear bookkeeping over a fixed family of real constants.

A ``ConstExpr`` is a finite Q-linear combination of named basis constants:
Euler's gamma, log 2, log 3, log pi, pi itself, zeta'(-1), the logarithmic
derivatives L'(0,chi)/L(0,chi) for the quadratic characters mod 4 and mod 3,
two composite zeta ratios, two height constants, log p for primes p >= 5,
log Gamma(p/q) at rationals, and one free symbol LOGZP standing for the
logarithm of a spectral zeta derivative that is never evaluated numerically.

All determinant and constant-term identities in this package are stated and
checked in this module's arithmetic, so "equal" always means equal in Q^n,
never "agrees to working precision".  Numeric output happens only at the
very end through ``const_eval``.

Layered on top:

* ``const_reduce`` rewrites composite ids into the primitive basis using a
  small closed registry (Lerch/Chowla-Selberg style evaluations and the
  reflection identity for log Gamma at thirds).
* ``AsymptoticExpansion`` tracks L = log(1/eps) and LL = loglog(1/eps)
  coefficients with an o(1) flag.
* ``SymLinear`` is a ConstExpr with formal symbols ("a", "log_a",
  "log_eta(w)", "log_r(m)") attached; ``asym_substitute`` maps it to an
  ``AsymptoticExpansion`` using the cutoff calibration rules.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp

from .errors import (
    FreeSymbolError,
    RewriteCycleError,
    UnknownConstantError,
    UnknownSymbolError,
)

__all__ = [
    "ConstExpr",
    "AsymptoticExpansion",
    "SymLinear",
    "const",
    "term",
    "zero",
    "log_int",
    "log_gamma_frac",
    "const_reduce",
    "const_eval",
    "const_eval_mpf",
    "asym_substitute",
    "STATIC_IDS",
]

# Static ids in canonical display order.  LOGP(p) and LOGGAMMA(p/q) families
# sort after the static block (primes ascending, then fractions by (q, p)).
STATIC_IDS = (
    "ONE",
    "PI",
    "GAMMA",
    "LOG2",
    "LOG3",
    "LOGPI",
    "ZP1",
    "LPCHI4",
    "LPCHI3",
    "ZDZ0",
    "ZDZ1",
    "HFI",
    "HFRHO",
    "LOGZP",
)

_STATIC_INDEX = {name: i for i, name in enumerate(STATIC_IDS)}
_LOGP_RE = re.compile(r"^LOGP\((\d+)\)$")
_LOGGAMMA_RE = re.compile(r"^LOGGAMMA\((\d+)/(\d+)\)$")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1 if p == 2 else 2
    return True


def _validate_id(cid: str) -> None:
    if cid in _STATIC_INDEX:
        return
    m = _LOGP_RE.match(cid)
    if m:
        p = int(m.group(1))
        if p < 5 or not _is_prime(p):
            raise UnknownConstantError(
                f"LOGP argument must be a prime >= 5, got {p}"
            )
        return
    m = _LOGGAMMA_RE.match(cid)
    if m:
        p, q = int(m.group(1)), int(m.group(2))
        if q < 2 or p < 1 or p >= q or Fraction(p, q) != Fraction(p, q).limit_denominator():
            raise UnknownConstantError(f"bad LOGGAMMA id {cid!r}")
        fr = Fraction(p, q)
        if fr.numerator != p or fr.denominator != q:
            raise UnknownConstantError(f"LOGGAMMA id {cid!r} is not reduced")
        return
    raise UnknownConstantError(f"unknown constant id {cid!r}")


def _sort_key(cid: str):
    if cid in _STATIC_INDEX:
        return (0, _STATIC_INDEX[cid], 0)
    m = _LOGP_RE.match(cid)
    if m:
        return (1, int(m.group(1)), 0)
    m = _LOGGAMMA_RE.match(cid)
    if m:
        return (2, int(m.group(2)), int(m.group(1)))
    raise UnknownConstantError(f"unknown constant id {cid!r}")


def _as_fraction(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    if isinstance(q, str):
        return Fraction(q)
    raise TypeError(f"coefficients must be exact rationals, got {type(q).__name__}")


class ConstExpr:
    """Immutable Q-linear combination of named constants.

    Zero coefficients are never stored, so equality of the term dicts is
    exactly equality in the free Q-module on the ids.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean: dict[str, Fraction] = {}
        if terms:
            for cid, q in dict(terms).items():
                _validate_id(cid)
                q = _as_fraction(q)
                if q != 0:
                    clean[cid] = q
        object.__setattr__(self, "_terms", clean)

    # -- container views ------------------------------------------------

    def terms(self) -> tuple[tuple[str, Fraction], ...]:
        """Terms as (id, coefficient) pairs in canonical id order."""
        return tuple(sorted(self._terms.items(), key=lambda kv: _sort_key(kv[0])))

    def coeff(self, cid: str) -> Fraction:
        _validate_id(cid)
        return self._terms.get(cid, Fraction(0))

    def ids(self) -> tuple[str, ...]:
        return tuple(cid for cid, _ in self.terms())

    def is_zero(self) -> bool:
        return not self._terms

    # -- Q-module operations ---------------------------------------------

    def __add__(self, other: "ConstExpr") -> "ConstExpr":
        if not isinstance(other, ConstExpr):
            return NotImplemented
        out = dict(self._terms)
        for cid, q in other._terms.items():
            s = out.get(cid, Fraction(0)) + q
            if s:
                out[cid] = s
            else:
                out.pop(cid, None)
        return ConstExpr(out)

    def __sub__(self, other: "ConstExpr") -> "ConstExpr":
        if not isinstance(other, ConstExpr):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "ConstExpr":
        return ConstExpr({cid: -q for cid, q in self._terms.items()})

    def __mul__(self, q) -> "ConstExpr":
        q = _as_fraction(q)
        if q == 0:
            return ConstExpr()
        return ConstExpr({cid: c * q for cid, c in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, q) -> "ConstExpr":
        return self * (Fraction(1) / _as_fraction(q))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConstExpr):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # -- text / JSON forms -------------------------------------------------

    def text(self) -> str:
        """Canonical text form ``q1*ID1 + q2*ID2``; integer q print bare."""
        if not self._terms:
            return "0"
        parts = []
        for i, (cid, q) in enumerate(self.terms()):
            mag = abs(q)
            coeff = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
            if i == 0:
                sign = "-" if q < 0 else ""
                parts.append(f"{sign}{coeff}*{cid}")
            else:
                sign = "-" if q < 0 else "+"
                parts.append(f" {sign} {coeff}*{cid}")
        return "".join(parts)

    __str__ = text

    def __repr__(self) -> str:
        return f"ConstExpr({self.text()})"

    def to_json(self) -> dict:
        return {
            "terms": [
                {"id": cid, "num": q.numerator, "den": q.denominator}
                for cid, q in self.terms()
            ]
        }

    @classmethod
    def from_json(cls, obj) -> "ConstExpr":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls({t["id"]: Fraction(t["num"], t["den"]) for t in obj["terms"]})


def zero() -> ConstExpr:
    return ConstExpr()


def const(q) -> ConstExpr:
    """Rational number q as q*ONE."""
    return ConstExpr({"ONE": _as_fraction(q)})


def term(cid: str, q=1) -> ConstExpr:
    return ConstExpr({cid: _as_fraction(q)})


def log_int(n: int) -> ConstExpr:
    """log n for an integer n >= 1, as an exact combination of LOG2, LOG3
    and LOGP(p).  Prime factorization makes cancellations automatic, e.g.
    log 1728 = 6*LOG2 + 3*LOG3."""
    if not isinstance(n, int) or n < 1:
        raise UnknownConstantError(f"log_int needs an integer >= 1, got {n!r}")
    out: dict[str, Fraction] = {}
    m = n
    for p, cid in ((2, "LOG2"), (3, "LOG3")):
        e = 0
        while m % p == 0:
            e += 1
            m //= p
        if e:
            out[cid] = Fraction(e)
    p = 5
    while p * p <= m:
        e = 0
        while m % p == 0:
            e += 1
            m //= p
        if e:
            out[f"LOGP({p})"] = Fraction(e)
        p += 2
    if m > 1:
        out[f"LOGP({m})"] = out.get(f"LOGP({m})", Fraction(0)) + 1
    return ConstExpr(out)


def log_frac(q) -> ConstExpr:
    """log q for a positive rational q."""
    q = _as_fraction(q)
    if q <= 0:
        raise UnknownConstantError(f"log_frac needs a positive rational, got {q}")
    return log_int(q.numerator) - log_int(q.denominator)


def log_gamma_frac(x) -> ConstExpr:
    """log Gamma(x) at a positive rational x as a ConstExpr.

    For 0 < x < 1 this is the basis element LOGGAMMA(p/q); integer and
    larger-than-one arguments are folded back with Gamma(x) = (x-1)Gamma(x-1).
    """
    x = _as_fraction(x)
    if x <= 0:
        raise UnknownConstantError(f"log_gamma_frac needs x > 0, got {x}")
    acc = zero()
    while x > 1:
        x -= 1
        acc = acc + log_frac(x)
    if x == 1:
        return acc
    return acc + term(f"LOGGAMMA({x.numerator}/{x.denominator})")


# ---------------------------------------------------------------------------
# Reduction registry.
#
# Each entry rewrites a composite id into strictly more primitive ids.  The
# registry is acyclic by construction (LOGGAMMA(2/3) -> LOGGAMMA(1/3) ->
# HFRHO -> {LPCHI3, LOG3, LOG2}); the pass counter is a safety net only.
#
#   ZDZ0   : zeta'(0)/zeta(0) = log 2 + log pi
#   ZDZ1   : zeta'(-1)/zeta(-1) = -12 zeta'(-1)
#   HFI    : height at the square lattice point = -(1/2) L'(0,chi4)/L(0,chi4)
#   HFRHO  : height at the hexagonal point, via the mod-3 character
#   LOGGAMMA(1/2) : (1/2) log pi
#   LOGGAMMA(1/3) : Chowla-Selberg style evaluation through HFRHO
#   LOGGAMMA(2/3) : reflection  log Gamma(1/3) + log Gamma(2/3) = log(2pi/sqrt3)
# ---------------------------------------------------------------------------

def _build_rewrites() -> dict[str, ConstExpr]:
    F = Fraction
    lg13 = (
        term("HFRHO", F(-1, 3))
        + term("ZDZ0", F(1, 2))
        + term("LOG3", F(-1, 6))
        + term("LOG2", F(1, 6))
    )
    return {
        "ZDZ0": term("LOG2") + term("LOGPI"),
        "ZDZ1": term("ZP1", -12),
        "HFI": term("LPCHI4", F(-1, 2)),
        "HFRHO": term("LPCHI3", F(-1, 2)) + term("LOG3", F(-1, 4)) + term("LOG2", F(1, 2)),
        "LOGGAMMA(1/2)": term("LOGPI", F(1, 2)),
        "LOGGAMMA(1/3)": lg13,
        "LOGGAMMA(2/3)": term("ZDZ0") + term("LOG3", F(-1, 2)) - lg13,
    }


_REWRITES = _build_rewrites()
_MAX_REWRITE_PASSES = 64


def const_reduce(x: ConstExpr) -> ConstExpr:
    """Rewrite composite ids into the primitive basis; idempotent."""
    cur = x
    for _ in range(_MAX_REWRITE_PASSES):
        hit = False
        out = zero()
        for cid, q in cur.terms():
            rhs = _REWRITES.get(cid)
            if rhs is None:
                out = out + term(cid, q)
            else:
                out = out + q * rhs
                hit = True
        if not hit:
            return out
        cur = out
    raise RewriteCycleError("rewrite registry did not reach a fixed point")


# ---------------------------------------------------------------------------
# Numeric evaluation.  Only primitive (post-reduction) ids have evaluators;
# LOGZP is a free symbol and must have cancelled before evaluation.
# ---------------------------------------------------------------------------

def _eval_id(cid: str):
    if cid == "ONE":
        return mp.mpf(1)
    if cid == "PI":
        return +mp.pi
    if cid == "GAMMA":
        return +mp.euler
    if cid == "LOG2":
        return mp.log(2)
    if cid == "LOG3":
        return mp.log(3)
    if cid == "LOGPI":
        return mp.log(mp.pi)
    if cid == "ZP1":
        return mp.zeta(-1, 1, 1)
    if cid == "LPCHI4":
        return 2 * (mp.loggamma(mp.mpf(1) / 4) - mp.loggamma(mp.mpf(3) / 4) - mp.log(2))
    if cid == "LPCHI3":
        return 3 * (mp.loggamma(mp.mpf(1) / 3) - mp.loggamma(mp.mpf(2) / 3)) - mp.log(3)
    m = _LOGP_RE.match(cid)
    if m:
        return mp.log(int(m.group(1)))
    m = _LOGGAMMA_RE.match(cid)
    if m:
        return mp.loggamma(mp.mpf(int(m.group(1))) / int(m.group(2)))
    # Composite ids reduce away; reaching here means const_reduce was skipped.
    raise UnknownConstantError(f"no evaluator for id {cid!r}; reduce first")


def const_eval_mpf(x: ConstExpr, dps: int):
    """Value of x as an mpf computed at `dps` working digits."""
    red = const_reduce(x)
    if red.coeff("LOGZP"):
        raise FreeSymbolError("LOGZP has no numeric value")
    with mp.workdps(dps + 10):
        total = mp.fsum(
            mp.mpf(q.numerator) / q.denominator * _eval_id(cid)
            for cid, q in red.terms()
        )
        return +total


def const_eval(x: ConstExpr, digits: int = 10) -> str:
    """Decimal string of x, correctly rounded to `digits` significant digits.

    Deterministic: the working precision is a fixed function of `digits`.
    The exact zero prints as 0.000...0 with `digits` places shown.
    """
    if not isinstance(digits, int) or digits < 1:
        raise UnknownConstantError(f"digits must be a positive integer, got {digits!r}")
    val = const_eval_mpf(x, digits + 15)
    if val == 0:
        return "0." + "0" * (digits - 1)
    with mp.workdps(digits + 15):
        return mp.nstr(val, digits, strip_zeros=False)


# ---------------------------------------------------------------------------
# Cutoff asymptotics:  L = log(1/eps),  LL = loglog(1/eps).
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticExpansion:
    """coeff_L * L + coeff_LL * LL + constant (+ o(1) when flagged)."""

    coeff_L: ConstExpr = field(default_factory=zero)
    coeff_LL: ConstExpr = field(default_factory=zero)
    constant: ConstExpr = field(default_factory=zero)
    has_small_o: bool = False

    def __add__(self, other: "AsymptoticExpansion") -> "AsymptoticExpansion":
        if not isinstance(other, AsymptoticExpansion):
            return NotImplemented
        return AsymptoticExpansion(
            self.coeff_L + other.coeff_L,
            self.coeff_LL + other.coeff_LL,
            self.constant + other.constant,
            self.has_small_o or other.has_small_o,
        )

    def __sub__(self, other: "AsymptoticExpansion") -> "AsymptoticExpansion":
        if not isinstance(other, AsymptoticExpansion):
            return NotImplemented
        return self + (-1) * other

    def __mul__(self, q) -> "AsymptoticExpansion":
        return AsymptoticExpansion(
            self.coeff_L * q, self.coeff_LL * q, self.constant * q, self.has_small_o
        )

    __rmul__ = __mul__

    def text(self) -> str:
        out = f"[{self.coeff_L.text()}]*L + [{self.coeff_LL.text()}]*LL + [{self.constant.text()}]"
        return out + (" + o(1)" if self.has_small_o else "")

    def __str__(self) -> str:
        return self.text()


_SYM_ETA_RE = re.compile(r"^log_eta\((\d+)\)$")
_SYM_R_RE = re.compile(r"^log_r\((\d+)\)$")


@dataclass(frozen=True)
class SymLinear:
    """ConstExpr-linear combination of formal symbols plus a ConstExpr part.

    Used for raw asymptotic statements before the cutoff radii are tied to
    the common parameter eps.  ``terms`` maps symbol -> ConstExpr coefficient.
    """

    terms: tuple = ()
    constant: ConstExpr = field(default_factory=zero)
    has_small_o: bool = False

    @staticmethod
    def make(terms: dict[str, ConstExpr] | None = None,
             constant: ConstExpr | None = None,
             has_small_o: bool = False) -> "SymLinear":
        tt = tuple(sorted(
            (s, c) for s, c in (terms or {}).items() if not c.is_zero()
        ))
        return SymLinear(tt, constant if constant is not None else zero(), has_small_o)

    def as_dict(self) -> dict[str, ConstExpr]:
        return dict(self.terms)

    def coeff(self, symbol: str) -> ConstExpr:
        return self.as_dict().get(symbol, zero())

    def __add__(self, other: "SymLinear") -> "SymLinear":
        if isinstance(other, ConstExpr):
            other = SymLinear.make(constant=other)
        if not isinstance(other, SymLinear):
            return NotImplemented
        d = self.as_dict()
        for s, c in other.terms:
            d[s] = d.get(s, zero()) + c
        return SymLinear.make(d, self.constant + other.constant,
                              self.has_small_o or other.has_small_o)

    def __sub__(self, other: "SymLinear") -> "SymLinear":
        if isinstance(other, ConstExpr):
            other = SymLinear.make(constant=other)
        return self + (-1) * other

    def __mul__(self, q) -> "SymLinear":
        return SymLinear.make(
            {s: c * q for s, c in self.terms}, self.constant * q, self.has_small_o
        )

    __rmul__ = __mul__

    def text(self) -> str:
        parts = [f"[{c.text()}]*{s}" for s, c in self.terms]
        parts.append(f"[{self.constant.text()}]")
        out = " + ".join(parts)
        return out + (" + o(1)" if self.has_small_o else "")

    def __str__(self) -> str:
        return self.text()


def _require_rational(coeff: ConstExpr, symbol: str) -> Fraction:
    q = coeff.coeff("ONE")
    if coeff != const(q):
        raise UnknownSymbolError(
            f"coefficient of {symbol!r} must be rational to substitute, got {coeff.text()}"
        )
    return q


def asym_substitute(x: SymLinear | ConstExpr) -> AsymptoticExpansion:
    """Substitute the common-cutoff calibration into a SymLinear.

    Rules (eps is the common cutoff, L = log(1/eps), LL = loglog(1/eps)):

      a          horocycle height, a = (1/2 pi) log(2/eps).  The coefficient
                 must be an exact rational multiple of PI so the pi clears:
                 q*PI*a  ->  (q/2) L + (q/2) LOG2.
      log_a      -> LL + o(1).
      log_eta(w) cone opening radius eta = 2 (eps/2)^(1/w):
                 -> -(1/w) L + (1 - 1/w) LOG2   (exact, no o(1)).
      log_r(m)   flattened-disk radius for a cone of order m:
                 -> -(1/m) L - log m + o(1).

    Unknown symbols, or coefficients whose exactness the rules cannot
    preserve, raise UNKNOWN_SYMBOL.
    """
    if isinstance(x, ConstExpr):
        x = SymLinear.make(constant=x)
    cL = zero()
    cLL = zero()
    cc = x.constant
    has_o = x.has_small_o
    for symbol, coeff in x.terms:
        if symbol == "a":
            q = coeff.coeff("PI")
            if coeff != term("PI", q):
                raise UnknownSymbolError(
                    "coefficient of 'a' must be a rational multiple of PI "
                    f"(a carries a 1/pi), got {coeff.text()}"
                )
            cL = cL + const(q / 2)
            cc = cc + term("LOG2", q / 2)
        elif symbol == "log_a":
            cLL = cLL + coeff
            has_o = True
        elif m := _SYM_ETA_RE.match(symbol):
            w = int(m.group(1))
            q = _require_rational(coeff, symbol)
            cL = cL + const(-q * Fraction(1, w))
            cc = cc + term("LOG2", q * (1 - Fraction(1, w)))
        elif m := _SYM_R_RE.match(symbol):
            mm = int(m.group(1))
            q = _require_rational(coeff, symbol)
            cL = cL + const(-q * Fraction(1, mm))
            cc = cc - q * log_int(mm)
            has_o = True
        else:
            raise UnknownSymbolError(f"no substitution rule for symbol {symbol!r}")
    return AsymptoticExpansion(cL, cLL, cc, has_o)
