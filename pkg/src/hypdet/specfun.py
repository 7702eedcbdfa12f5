"""Special functions needed by the determinant machinery.

Everything here is hand-rolled on top of mpmath arithmetic: Bessel K of
imaginary and real order through the cosh integral representation, the
uniform large-order expansion with exact rational u_n polynomials, the
exponential integral E1 (series + continued fraction), a Gauss 2F1 series
with a monitored tail, conical Legendre functions through a unified
hypergeometric series, Hurwitz zeta by Euler-Maclaurin, and Dirichlet
L-values for the two quadratic characters that show up in the heights.

mpmath supplies arithmetic, quadrature, log/exp/loggamma and Bernoulli
numbers only; the functions this package's identities depend on are
implemented from their defining representations so they can be tested
against frozen oracle values independently.
"""

from __future__ import annotations

import math

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .errors import (
    DomainError,
    NearZeroError,
    NonConvergedError,
    OutOfRangeError,
    OverflowError_,
    PoleError,
    UnderflowError_,
)

__all__ = [
    "Precision",
    "DEFAULT_PRECISION",
    "bessel_k_imag",
    "bessel_k_real",
    "dlog_bessel_k",
    "exp_integral_e1",
    "exp_integral_e1_scaled",
    "hyp2f1",
    "legendre_p",
    "legendre_p_conical",
    "legendre_p_realdeg",
    "legendre_series_factor",
    "hurwitz_zeta",
    "riemann_zeta_derivatives",
    "DirichletCharacter",
    "CHI4",
    "CHI3",
    "dirichlet_l",
    "dirichlet_l_at_zero",
    "dirichlet_l_deriv_at_zero",
    "bessel_u_poly",
    "bessel_uniform_asym",
    "dlog_bessel_k_uniform",
]


@dataclass(frozen=True)
class Precision:
    """Accuracy request.  rel_tol drives working precision; abs_tol is the
    underflow sentinel threshold for magnitude-losing integrals."""

    rel_tol: float = 1e-13
    abs_tol: float = 1e-280
    max_terms: int = 2_000_000

    @property
    def digits(self) -> int:
        return max(6, int(-mp.log10(self.rel_tol)) + 1)


DEFAULT_PRECISION = Precision()

_LN10 = 2.302585092994046


# ---------------------------------------------------------------------------
# Bessel K via the integral representation K_nu(x) = int_0^inf
# exp(-x cosh u) * {cos(|nu| u) | cosh(nu u)} du.
# ---------------------------------------------------------------------------

def bessel_k_imag(r, x, prec: Precision = DEFAULT_PRECISION):
    """K_{ir}(x) for real r >= 0, x > 0 (real-valued).

    Cancellation: the integrand has scale e^{-x} while the value has scale
    e^{-pi r / 2}, so roughly 0.434*(pi r/2 - x) digits are lost; working
    precision is raised accordingly.  Returns 0 (UNDERFLOW sentinel) when
    the value is certified below prec.abs_tol.
    """
    r = mp.mpf(r)
    x = mp.mpf(x)
    if x <= 0 or r < 0:
        raise DomainError(f"bessel_k_imag needs x > 0, r >= 0, got r={r}, x={x}")
    loss = max(0.0, float(mp.pi * r / 2 - x) / _LN10)
    wp = prec.digits + int(loss) + 8
    with mp.workdps(wp):
        T = mp.log(10) * (wp + 2)
        U = mp.acosh(1 + T / x)
        # one quadrature panel per ~half oscillation of cos(r u), merged with
        # geometric panels resolving the e^{-x u^2/2} layer of width 1/sqrt(x)
        nseg = 1 + int(float(r * U) / 3.0)
        pts = {float(U * i / nseg) for i in range(nseg + 1)}
        pts.update(_layer_points(float(U), float(x)))
        val = mp.quad(lambda u: mp.exp(-x * mp.cosh(u)) * mp.cos(r * u),
                      sorted(pts))
        val = +val
    if abs(val) < mp.mpf(prec.abs_tol):
        return mp.mpf(0)
    return val


def _layer_points(U: float, x: float):
    """Panel edges in (0, U) growing geometrically from the width 1/sqrt(x)
    of the integrand's layer at u = 0, so each panel is smooth on its scale."""
    w = 1.0 / math.sqrt(x + 1.0)
    out = []
    while w < U:
        out.append(w)
        w *= 2.0
    return out


def bessel_k_real(v, x, prec: Precision = DEFAULT_PRECISION):
    """K_v(x) for real v, x > 0.  Positive integrand, no cancellation.

    Substituting w = x (cosh u - 1) flattens the exponential decay of the
    integral representation to a plain e^{-w} with an integrable w^{-1/2}
    endpoint singularity, both of which the quadrature handles natively at
    any x; the naive u-space form has a 1/sqrt(x) boundary layer that
    degrades it badly for x beyond ~40.  K_{-v} = K_v (cosh is even).
    """
    v = abs(mp.mpf(v))
    x = mp.mpf(x)
    if x <= 0:
        raise DomainError(f"bessel_k_real needs x > 0, got x={x}")
    wp = prec.digits + 8
    with mp.workdps(wp):
        def gw(w):
            u = mp.acosh(1 + w / x)
            su = mp.sinh(u)
            if su == 0:
                return mp.mpf(0)
            return mp.exp(-w) * mp.cosh(v * u) / (x * su)

        pts = [0, max(1, float(v)), mp.inf]
        val = mp.exp(-x) * mp.quad(gw, pts)
        return +val


def dlog_bessel_k(t, x, mode: str = "first", prec: Precision = DEFAULT_PRECISION):
    """d/dt log K_t(x) (mode="first") or d^2/dt^2 (mode="second") at real
    order t, via Richardson-extrapolated central differences on log K."""
    if mode not in ("first", "second"):
        raise DomainError(f"mode must be 'first' or 'second', got {mode!r}")
    t = mp.mpf(t)
    x = mp.mpf(x)
    inner = Precision(rel_tol=prec.rel_tol * 1e-10, abs_tol=prec.abs_tol)
    h = mp.mpf(prec.rel_tol) ** Fraction(1, 3) * max(1, abs(t))
    with mp.workdps(prec.digits + 14):
        def lk(s):
            val = bessel_k_real(s, x, inner)
            if abs(val) < mp.mpf(prec.abs_tol):
                raise NearZeroError(f"K_{float(s)}({float(x)}) too small for log")
            return mp.log(val)

        if mode == "first":
            def d(hh):
                return (lk(t + hh) - lk(t - hh)) / (2 * hh)
        else:
            k0 = lk(t)

            def d(hh):
                return (lk(t + hh) - 2 * k0 + lk(t - hh)) / (hh * hh)

        return +((4 * d(h / 2) - d(h)) / 3)


# ---------------------------------------------------------------------------
# Exponential integral E1.
# ---------------------------------------------------------------------------

def _e1_series(x, prec: Precision):
    # E1(x) = -gamma - log x + sum_{n>=1} (-1)^{n+1} x^n / (n n!),  0 < x <= 1
    total = -mp.euler - mp.log(x)
    t = mp.mpf(1)
    for n in range(1, 500):
        t *= -x / n
        piece = -t / n
        total += piece
        if abs(piece) < mp.mpf(prec.rel_tol) * abs(total) / 10:
            return total
    raise NonConvergedError("E1 series did not converge")


def _e1_scaled_cf(x, prec: Precision):
    # e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- 9/(x+7-...)))), modified Lentz
    tiny = mp.mpf(10) ** (-2 * mp.mp.dps)
    b = x + 1
    c = b if b != 0 else tiny
    d = mp.mpf(0)
    f = c
    for n in range(1, prec.max_terms):
        a = mp.mpf(-(n * n))
        b = x + 2 * n + 1
        d = b + a * d
        if d == 0:
            d = tiny
        c = b + a / c
        if c == 0:
            c = tiny
        d = 1 / d
        delta = c * d
        f *= delta
        if abs(delta - 1) < mp.mpf(prec.rel_tol) / 10:
            return 1 / f
    raise NonConvergedError("E1 continued fraction did not converge")


def exp_integral_e1(x, prec: Precision = DEFAULT_PRECISION):
    """E1(x) = int_x^inf e^{-t}/t dt for x > 0."""
    x = mp.mpf(x)
    if x <= 0:
        raise DomainError(f"exp_integral_e1 needs x > 0, got {x}")
    with mp.workdps(prec.digits + 8):
        if x <= 1:
            return +_e1_series(x, prec)
        return +(mp.exp(-x) * _e1_scaled_cf(x, prec))


def exp_integral_e1_scaled(x, prec: Precision = DEFAULT_PRECISION):
    """e^x E1(x); safe for large x where E1 itself underflows.

    Satisfies 1/(x+1) < e^x E1(x) < 1/x for x > 0.
    """
    x = mp.mpf(x)
    if x <= 0:
        raise DomainError(f"exp_integral_e1_scaled needs x > 0, got {x}")
    with mp.workdps(prec.digits + 8):
        if x <= 1:
            return +(mp.exp(x) * _e1_series(x, prec))
        return +_e1_scaled_cf(x, prec)


# ---------------------------------------------------------------------------
# Gauss hypergeometric series.
# ---------------------------------------------------------------------------

def hyp2f1(a, b, c, z, prec: Precision = DEFAULT_PRECISION):
    """2F1(a,b;c;z) by plain series for |z| < 1 with a monitored tail.

    The stop rule uses the observed term ratio: once |term ratio| is below
    rho < 1 and the next term is under rel_tol*(1-rho)*|sum|, the geometric
    tail bound closes the sum.
    """
    a = mp.mpf(a)
    b = mp.mpf(b)
    c = mp.mpf(c)
    z = mp.mpf(z)
    if abs(z) >= 1:
        raise OutOfRangeError(f"hyp2f1 series needs |z| < 1, got z={z}")
    if c <= 0 and c == mp.floor(c):
        raise DomainError(f"hyp2f1 pole at nonpositive integer c={c}")
    with mp.workdps(prec.digits + 8):
        total = mp.mpf(1)
        t = mp.mpf(1)
        n = 0
        nmin = int(abs(a) + abs(b)) + 4
        while n < prec.max_terms:
            ratio = (a + n) * (b + n) / ((c + n) * (n + 1)) * z
            t *= ratio
            total += t
            n += 1
            if t == 0:
                return +total
            if n > nmin:
                rho = min(abs(ratio) * mp.mpf("1.05"), (1 + abs(z)) / 2)
                if rho < 1 and abs(t) * rho / (1 - rho) < mp.mpf(prec.rel_tol) * abs(total) / 4:
                    return +total
        raise NonConvergedError("hyp2f1 series did not converge")


def _hyp_halfpair(lam, c, z, prec: Precision):
    """sum_n prod_{j<n} ((j+1/2)^2 - lam) / ((c)_n n!) * z^n.

    This is 2F1(1/2+t, 1/2-t; c; z) written through lam = t^2, which also
    covers degree -1/2 + i r via lam = -r^2 without complex arithmetic.
    """
    total = mp.mpf(1)
    t = mp.mpf(1)
    n = 0
    nmin = int(mp.sqrt(abs(lam))) + 4
    while n < prec.max_terms:
        num = (n + mp.mpf(1) / 2) ** 2 - lam
        t *= num * z / ((c + n) * (n + 1))
        total += t
        n += 1
        if t == 0:
            return total
        if n > nmin:
            rho = (1 + abs(z)) / 2
            if abs(t) * rho / (1 - rho) < mp.mpf(prec.rel_tol) * abs(total) / 4:
                return total
    raise NonConvergedError("hypergeometric half-pair series did not converge")


# ---------------------------------------------------------------------------
# Conical Legendre functions P^{-mu}_{-1/2+ir}(cosh eta), via
#   P^{-mu}_{-1/2+t}(y) = ((y-1)/(y+1))^{mu/2} / Gamma(mu+1)
#                          * F(lam; mu+1; (1-y)/2),  lam = t^2.
# The series argument xi = (1-cosh eta)/2 needs |xi| < 1, i.e. cosh eta < 3.
# ---------------------------------------------------------------------------

def _legendre_series(lam, mu, y, prec: Precision):
    y = mp.mpf(y)
    mu = mp.mpf(mu)
    if y <= 1:
        raise DomainError(f"argument must satisfy cosh eta > 1, got {y}")
    if y >= 3:
        # series argument (1-y)/2 leaves the unit disk; within the type's
        # stated domain this is a convergence failure, not a domain error
        raise NonConvergedError(
            f"hypergeometric series needs cosh eta < 3, got {y}"
        )
    xi = (1 - y) / 2
    # terms grow to ~exp(2 sqrt(|lam| |xi|)/(1-sqrt(|xi|))) before decaying
    loss = 2 * mp.sqrt(abs(lam)) * mp.atanh(mp.sqrt(abs(xi))) / mp.log(10)
    wp = prec.digits + int(float(loss)) + 10
    with mp.workdps(wp):
        pref = ((y - 1) / (y + 1)) ** (mu / 2) / mp.gamma(mu + 1)
        ser = _hyp_halfpair(mp.mpf(lam), mu + 1, xi, prec)
        return +(pref * ser), +ser


def legendre_p(r, mu, y, prec: Precision = DEFAULT_PRECISION):
    """P^{-mu}_{-1/2 + i r}(y) for real r, mu >= 0, 1 < y < 3 (real-valued).

    The degree parameter enters the series only through the real products
    (1/2+ir)_n (1/2-ir)_n = prod_j ((1/2+j)^2 + r^2), so no complex
    arithmetic is involved.
    """
    r = mp.mpf(r)
    val, _ = _legendre_series(-(r * r), mu, y, prec)
    return val


legendre_p_conical = legendre_p


def legendre_p_realdeg(t, mu, y, prec: Precision = DEFAULT_PRECISION):
    """P^{-mu}_{-1/2 + t}(y) for real t >= 0, the real-degree branch used on
    the contour side."""
    t = mp.mpf(t)
    val, _ = _legendre_series(t * t, mu, y, prec)
    return val


def legendre_series_factor(lam, mu, y, prec: Precision = DEFAULT_PRECISION):
    """The hypergeometric factor F(lam; mu+1; (1-y)/2) alone.  Its zeros in
    lam = -r^2 are exactly the zeros of P^{-mu}_{-1/2+ir}(y) because the
    prefactor is positive."""
    _, ser = _legendre_series(lam, mu, y, prec)
    return ser


# ---------------------------------------------------------------------------
# Hurwitz zeta by Euler-Maclaurin, and zeta derivatives by extrapolated
# differences of it.  mp.bernoulli supplies exact Bernoulli numbers.
# ---------------------------------------------------------------------------

def hurwitz_zeta(s, x, prec: Precision = DEFAULT_PRECISION):
    """zeta_H(s, x) = sum_{n>=0} (n+x)^{-s}, continued to s != 1, x > 0."""
    s = mp.mpf(s)
    x = mp.mpf(x)
    if x <= 0:
        raise DomainError(f"hurwitz_zeta needs x > 0, got {x}")
    if s == 1:
        raise PoleError("hurwitz_zeta has a pole at s = 1")
    wp = prec.digits + 10
    with mp.workdps(wp):
        eps = mp.mpf(10) ** (-(wp - 2))
        N = max(12, int(abs(s)) + 8, wp)
        for _ in range(8):
            head = mp.fsum((n + x) ** (-s) for n in range(N))
            base = N + x
            acc = head + base ** (1 - s) / (s - 1) + base ** (-s) / 2
            # correction terms B_{2j}/(2j)! * (s)_{2j-1} * base^{-s-2j+1}
            rising = s
            powb = base ** (-s - 1)
            prev = mp.inf
            ok = False
            # scale guard: the value itself may be exactly 0 (e.g. s=0, x=1/2)
            scale = abs(acc) + abs(head) + 1
            for j in range(1, 60):
                c = mp.bernoulli(2 * j) / mp.factorial(2 * j) * rising * powb
                acc += c
                if abs(c) < eps * scale:
                    ok = True
                    break
                if abs(c) > prev:
                    break  # asymptotic tail started growing; enlarge N
                prev = abs(c)
                rising *= (s + 2 * j - 1) * (s + 2 * j)
                powb /= base * base
            if ok:
                return +acc
            N *= 2
        raise NonConvergedError("hurwitz_zeta Euler-Maclaurin did not settle")


def riemann_zeta_derivatives(k: int, s, prec: Precision = DEFAULT_PRECISION):
    """zeta(s) (k=0) or zeta'(s) (k=1) at real s != 1."""
    if k == 0:
        return hurwitz_zeta(s, 1, prec)
    if k != 1:
        raise DomainError(f"only k in {{0,1}} supported, got {k}")
    s = mp.mpf(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    hi = Precision(rel_tol=prec.rel_tol * 1e-12)
    with mp.workdps(prec.digits + 16):
        h = mp.mpf(10) ** (-(prec.digits + 16) // 4)

        def d(hh):
            return (hurwitz_zeta(s + hh, 1, hi) - hurwitz_zeta(s - hh, 1, hi)) / (2 * hh)

        return +((4 * d(h / 2) - d(h)) / 3)


# ---------------------------------------------------------------------------
# Dirichlet L-functions for the two quadratic characters in play.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DirichletCharacter:
    modulus: int
    values: tuple  # ((a, chi(a)) for gcd(a, m) = 1), chi(a) in {1, -1}

    def chi(self, a: int) -> int:
        return dict(self.values).get(a % self.modulus, 0)


CHI4 = DirichletCharacter(4, ((1, 1), (3, -1)))
CHI3 = DirichletCharacter(3, ((1, 1), (2, -1)))


def dirichlet_l(chi: DirichletCharacter, s, prec: Precision = DEFAULT_PRECISION):
    """L(s, chi) = m^{-s} sum_a chi(a) zeta_H(s, a/m) at real s != 1."""
    s = mp.mpf(s)
    if s == 1:
        raise PoleError("use direct series at s = 1")
    m = chi.modulus
    with mp.workdps(prec.digits + 8):
        total = mp.fsum(
            v * hurwitz_zeta(s, mp.mpf(a) / m, prec) for a, v in chi.values
        )
        return +(mp.mpf(m) ** (-s) * total)


def dirichlet_l_at_zero(chi: DirichletCharacter) -> Fraction:
    """Exact L(0, chi) from zeta_H(0, x) = 1/2 - x."""
    m = chi.modulus
    return sum((Fraction(1, 2) - Fraction(a, m)) * v for a, v in chi.values)


def dirichlet_l_deriv_at_zero(chi: DirichletCharacter,
                              prec: Precision = DEFAULT_PRECISION):
    """L'(0, chi) = -log(m) L(0, chi) + sum_a chi(a) log Gamma(a/m)."""
    m = chi.modulus
    l0 = dirichlet_l_at_zero(chi)
    with mp.workdps(prec.digits + 8):
        total = mp.fsum(v * mp.loggamma(mp.mpf(a) / m) for a, v in chi.values)
        return +(-mp.log(m) * (mp.mpf(l0.numerator) / l0.denominator) + total)


# ---------------------------------------------------------------------------
# Uniform large-order asymptotics of K_v(v z):
#
#   K_v(v z) ~ sqrt(pi/(2 v)) e^{-v eta} (1+z^2)^{-1/4}
#              sum_n (-1)^n u_n(tau) / v^n,
#   tau = (1+z^2)^{-1/2},  eta = sqrt(1+z^2) + log( z / (1 + sqrt(1+z^2)) ),
#   u_0 = 1,  u_{n+1} = (1/2) tau^2 (1-tau^2) u_n' + (1/8) int_0^tau (1-5x^2) u_n.
#
# The u_n are polynomials of degree exactly 3n with exact rational
# coefficients; they are built once and cached.
# ---------------------------------------------------------------------------

_U_POLYS: list[dict[int, Fraction]] = [{0: Fraction(1)}]


def bessel_u_poly(n: int) -> dict[int, Fraction]:
    """Coefficient dict {degree: Fraction} of u_n(tau)."""
    if n < 0:
        raise DomainError("u_n index must be >= 0")
    while len(_U_POLYS) <= n:
        u = _U_POLYS[-1]
        nxt: dict[int, Fraction] = {}
        # (1/2) tau^2 (1 - tau^2) u'
        for d, c in u.items():
            if d == 0:
                continue
            dc = c * d
            nxt[d + 1] = nxt.get(d + 1, Fraction(0)) + dc / 2
            nxt[d + 3] = nxt.get(d + 3, Fraction(0)) - dc / 2
        # (1/8) int_0^tau (1 - 5 x^2) u(x) dx
        for d, c in u.items():
            nxt[d + 1] = nxt.get(d + 1, Fraction(0)) + c / (8 * (d + 1))
            nxt[d + 3] = nxt.get(d + 3, Fraction(0)) - 5 * c / (8 * (d + 3))
        _U_POLYS.append({d: c for d, c in nxt.items() if c})
    return dict(_U_POLYS[n])


def _poly_eval(poly: dict[int, Fraction], x):
    return mp.fsum(mp.mpf(c.numerator) / c.denominator * x ** d for d, c in poly.items())


def bessel_uniform_asym(v, z, ell: int, prec: Precision = DEFAULT_PRECISION):
    """Truncated uniform expansion of K_v(v z) with ell terms (n < ell)."""
    v = mp.mpf(v)
    z = mp.mpf(z)
    if v <= 0 or z <= 0:
        raise DomainError("bessel_uniform_asym needs v > 0, z > 0")
    with mp.workdps(prec.digits + 8):
        w = mp.sqrt(1 + z * z)
        tau = 1 / w
        eta = w + mp.log(z / (1 + w))
        s = mp.fsum((-1) ** n * _poly_eval(bessel_u_poly(n), tau) / v ** n
                    for n in range(ell))
        return +(mp.sqrt(mp.pi / (2 * v)) * mp.exp(-v * eta) / mp.sqrt(w) * s)


def dlog_bessel_k_uniform(t, x, ell: int = 4, prec: Precision = DEFAULT_PRECISION):
    """d/dt log K_t(x) from the uniform expansion (t plays the order role,
    z = x/t).  Exact t-derivative of the truncated expansion:

        asinh(t/x) - t/(2 w^2) + S'/S,   w = sqrt(t^2 + x^2),
        S  = sum (-1)^n u_n(tau) / t^n,  tau = t/w,
        S' = sum (-1)^n [ u_n'(tau) x^2/w^3 / t^n  -  n u_n(tau) / t^{n+1} ].

    Accurate to O(t^{-ell-1}) uniformly in x; used for integrand tails where
    quadrature of the integral representation would be wasteful.
    """
    t = mp.mpf(t)
    x = mp.mpf(x)
    if t <= 0 or x <= 0:
        raise DomainError("dlog_bessel_k_uniform needs t > 0, x > 0")
    with mp.workdps(prec.digits + 8):
        w = mp.sqrt(t * t + x * x)
        tau = t / w
        dtau = x * x / w ** 3
        s = mp.mpf(0)
        sp = mp.mpf(0)
        for n in range(ell):
            pn = bessel_u_poly(n)
            un = _poly_eval(pn, tau)
            und = _poly_eval({d - 1: c * d for d, c in pn.items() if d}, tau)
            sgn = -1 if n % 2 else 1
            s += sgn * un / t ** n
            sp += sgn * (und * dtau / t ** n - n * un / t ** (n + 1))
        return +(mp.log((t + w) / x) - t / (2 * w * w) + sp / s)
