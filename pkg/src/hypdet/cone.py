"""Spectral zeta of the model hyperbolic cone by direct scan and contour.

The model cone of angle 2 pi / omega (omega a positive integer) with
Dirichlet boundary at geodesic radius eta has eigenvalues lam = 1/4 + r^2
where, for each Fourier mode k >= 0, r runs over the zeros of

    P^{-mu}_{-1/2 + i r}(cosh eta),     mu = k omega.

Mode k = 0 has multiplicity 1, modes k >= 1 multiplicity 2.  Writing the
Legendre function as prefactor * G(t) with

    G(t) = 2F1(1/2 + t, 1/2 - t; mu + 1; xi),   xi = (1 - cosh eta)/2 < 0,

the zeros are those of G at t = i r, and the prefactor never vanishes.

The contour form for 1 < Re s < 2 is

    zeta(s) = (sin(pi s)/pi) sum_k d_k int_{1/2}^inf (t^2-1/4)^{-s} f_k(t) dt,
    f_k(t)  = d/dt log P^{-mu}_{-1/2+t}(cosh eta) - 2 t SV_k,

with d_0 = 1 and d_k = 2 applied explicitly to the integrals.

The subtracted special value SV_k = d/dt log P at t = 1/2 has an exact
hypergeometric form: at t = 1/2 the 2F1 above collapses to 1 (its second
parameter vanishes), and differentiating term by term gives

    SV_k = -xi/(mu+1) * 2F1(1, 1; mu+2; xi),

the prefactor cancelling in the logarithmic derivative.  f_k therefore
vanishes at t = 1/2 and the endpoint singularity of the weight is tamed.

An exact structural fact anchors the desingularization check: the mode-mu
eigencondition depends only on (mu, cosh eta), so the cone (omega, R) at
Fourier index k shares its sector spectrum with the cone (1, R^{1/omega})
at Fourier index k' = k omega once both radii are converted through the
common convention eta = 2 R^{1/omega}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp
import numpy as np

from .constfield import SymLinear, const, log_int, term
from .errors import (
    DomainError,
    GridTooCoarseError,
    IncompleteWindowError,
    MismatchError,
    NearZeroError,
    OutOfRangeError,
)
from .specfun import (
    DEFAULT_PRECISION,
    Precision,
    hurwitz_zeta,
    hyp2f1,
    legendre_p_realdeg,
    legendre_series_factor,
)

__all__ = [
    "ModelCone",
    "ConeEigenvalue",
    "eta_from_r",
    "r_from_eta",
    "scan_cone_eigenvalues",
    "ConeZetaReport",
    "cone_zeta_direct",
    "cone_f_k",
    "cone_special_value",
    "cone_I_k",
    "ConeContourReport",
    "cone_contour_sum",
    "cone_logdet_asymptotic",
    "cone_desingularization_check",
]


def eta_from_r(omega: int, R: float) -> float:
    """Boundary parameter from the rs-coordinate radius: eta = 2 R^{1/omega}
    (the small-radius relation adopted as the exact convention)."""
    if not (isinstance(omega, int) and omega >= 1):
        raise DomainError(f"cone order must be a positive integer, got {omega}")
    if not 0 < R < 1:
        raise OutOfRangeError(f"rs radius must lie in (0, 1), got {R}")
    return 2.0 * R ** (1.0 / omega)


def r_from_eta(omega: int, eta: float) -> float:
    """Inverse of eta_from_r: R = (eta/2)^omega."""
    if not (isinstance(omega, int) and omega >= 1):
        raise DomainError(f"cone order must be a positive integer, got {omega}")
    if not 0 < eta < 2:
        raise OutOfRangeError(
            f"boundary parameter must lie in (0, 2) for an rs radius in (0, 1), got {eta}"
        )
    return (eta / 2.0) ** omega


@dataclass(frozen=True)
class ModelCone:
    """Cone of angle 2 pi / omega; give exactly one of eta (boundary
    parameter) or R (rs-coordinate radius), the other is derived via
    eta = 2 R^{1/omega}."""

    omega: int
    eta: float | None = None
    R: float | None = None

    def __post_init__(self):
        if not (isinstance(self.omega, int) and self.omega >= 1):
            raise DomainError(f"cone order must be a positive integer, got {self.omega}")
        if (self.eta is None) == (self.R is None):
            raise DomainError("give exactly one of eta, R")
        if self.R is not None:
            object.__setattr__(self, "eta", eta_from_r(self.omega, self.R))
        else:
            if not self.eta > 0:
                raise DomainError(f"boundary parameter must be positive, got {self.eta}")
            if self.eta < 2:
                object.__setattr__(self, "R", r_from_eta(self.omega, self.eta))

    @property
    def y(self) -> float:
        return math.cosh(self.eta)

    @property
    def xi(self) -> float:
        return (1 - self.y) / 2

    def mu(self, k: int) -> int:
        return k * self.omega


@dataclass(frozen=True)
class ConeEigenvalue:
    k: int
    n: int          # 1-based index of the zero within its Fourier sector
    r: float
    lam: float
    mult: int


# ---------------------------------------------------------------------------
# Eigenvalue scan.  The eigencondition for mode k is the vanishing of the
# series factor G(ir) = F(-r^2; mu+1; xi), an alternating series in xi < 0.
# ---------------------------------------------------------------------------

def _cone_g(r, cone: ModelCone, k: int, prec):
    return float(legendre_series_factor(-(r * r), cone.mu(k), cone.y, prec))


def _scan_cone_sector(cone: ModelCone, k: int, r_max: float, step_scale,
                      prec, _depth=0):
    """Zeros in r of the series factor for one Fourier mode.  The large-r
    zero spacing is asymptotically pi/eta; the grid step is a fraction of
    it, and near-tangent pairs trigger a finer rescan."""
    if _depth > 3:
        raise GridTooCoarseError(
            f"cone sign scan kept losing roots at omega={cone.omega}, k={k}"
        )
    step = step_scale * math.pi / cone.eta
    roots = []
    r_prev = 1e-4
    g_prev = _cone_g(r_prev, cone, k, prec)
    window = [(r_prev, g_prev)]
    while r_prev < r_max:
        r = min(r_max, r_prev + step)
        g = _cone_g(r, cone, k, prec)
        if (g < 0) != (g_prev < 0):
            from scipy.optimize import brentq
            roots.append(brentq(lambda t: _cone_g(t, cone, k, prec),
                                r_prev, r, xtol=1e-10, rtol=1e-14))
        window.append((r, g))
        if len(window) >= 3:
            (r0, g0), (r1, g1), (r2, g2) = window[-3:]
            same = (g0 < 0) == (g1 < 0) == (g2 < 0)
            if same and abs(g1) < min(abs(g0), abs(g2)) * 0.05:
                sub = _scan_cone_sector(cone, k, r2, step_scale / 8, prec,
                                        _depth + 1)
                for rt in sub:
                    if r0 <= rt <= r2 and not any(abs(rt - q) < 1e-7 for q in roots):
                        roots.append(rt)
        r_prev, g_prev = r, g
    return sorted(roots)


def scan_cone_eigenvalues(cone: ModelCone, k_max: int | None, r_max: float,
                          grid_step: float | None = None,
                          prec: Precision = DEFAULT_PRECISION):
    """Eigenvalues lam = 1/4 + r^2 with r <= r_max for modes 0 <= k <= k_max.

    Only k >= 0 is scanned: the modes +-k share their radial equation, which
    is what the multiplicity-2 tag on k >= 1 encodes.  With k_max=None the
    scan stops automatically once two consecutive sectors are empty (first
    zeros move upward roughly linearly in mu).  Sorted by lam.
    """
    if r_max <= 0:
        raise DomainError("need r_max > 0")
    if k_max is not None and k_max < 0:
        raise DomainError("need k_max >= 0")
    step_scale = grid_step if grid_step is not None else 0.125
    if not 0 < step_scale < 1:
        raise DomainError("grid_step is a fraction of the local zero spacing")
    evs = []
    empty_run = 0
    k = 0
    while True:
        if k_max is not None and k > k_max:
            break
        roots = _scan_cone_sector(cone, k, r_max, step_scale, prec)
        for n, r in enumerate(roots, start=1):
            evs.append(ConeEigenvalue(k, n, r, 0.25 + r * r,
                                      1 if k == 0 else 2))
        empty_run = empty_run + 1 if not roots else 0
        if empty_run >= 2:
            break
        k += 1
    return sorted(evs, key=lambda e: e.lam)


def cone_desingularization_check(omega: int, R: float, r_max: float = 25.0,
                                 k_list=(0, 1, 2), tol: float = 1e-8,
                                 prec: Precision = DEFAULT_PRECISION):
    """Check that every sector-k eigenvalue of the cone (omega, R) appears
    among the sector-(k omega) eigenvalues of the cone (1, R^{1/omega}).

    Both spectra are scanned independently; the report lists the matched
    pairs and the worst relative mismatch.  A missing partner or a pair
    beyond tol raises MISMATCH.
    """
    if not (isinstance(omega, int) and omega >= 2):
        raise DomainError(f"desingularization needs omega >= 2, got {omega}")
    cone_w = ModelCone(omega, R=R)
    cone_1 = ModelCone(1, R=R ** (1.0 / omega))
    pairs = []
    worst = 0.0
    for k in k_list:
        rw = _scan_cone_sector(cone_w, k, r_max, 0.125, prec)
        r1 = _scan_cone_sector(cone_1, k * omega, r_max, 0.125, prec)
        if len(rw) != len(r1):
            raise MismatchError(
                f"k={k}: {len(rw)} zeros on the cone vs {len(r1)} on its cover"
            )
        for n, (a, b) in enumerate(zip(rw, r1), start=1):
            la, lb = 0.25 + a * a, 0.25 + b * b
            rel = abs(la - lb) / lb
            pairs.append({"k": k, "n": n, "lam_cone": la, "lam_cover": lb,
                          "rel_mismatch": rel})
            worst = max(worst, rel)
            if rel > tol:
                raise MismatchError(
                    f"k={k}, n={n}: lam {la!r} vs {lb!r} (rel {rel:.3e})"
                )
    return {"omega": omega, "R": R, "eta": cone_w.eta, "pairs": pairs,
            "worst_rel_mismatch": worst, "tolerance": tol}


# ---------------------------------------------------------------------------
# Direct spectral sum.
# ---------------------------------------------------------------------------

@dataclass
class ConeZetaReport:
    s: float
    value: object
    tail_estimate: float
    tail_uncertainty: float
    lam_max: float
    count: int
    r_max: float

    @property
    def value_total(self):
        return self.value + mp.mpf(self.tail_estimate)


def cone_zeta_direct(cone: ModelCone, s_values, k_max: int | None = None,
                     r_max: float = 60.0,
                     prec: Precision = DEFAULT_PRECISION):
    """Direct sum of d_k lam^{-s} over the scanned window plus a
    Weyl-smoothed tail C lam_max^{1-s}/(s-1) with C fitted on the last
    octave of counting.  Accepts a single s or a list (the scan is
    shared)."""
    single = not isinstance(s_values, (list, tuple))
    ss = [s_values] if single else list(s_values)
    for s in ss:
        if not 1 < float(s) < 2:
            raise DomainError(f"direct sum contract covers 1 < s < 2, got {s}")
    evs = scan_cone_eigenvalues(cone, k_max, r_max, prec=prec)
    if not evs:
        raise IncompleteWindowError(
            f"no eigenvalues below r={r_max}; enlarge the window"
        )
    lam_mult = [(e.lam, e.mult) for e in evs]
    lam_max = lam_mult[-1][0]

    def octave_slope(hi):
        n_hi = sum(m for (l, m) in lam_mult if l <= hi)
        n_mid = sum(m for (l, m) in lam_mult if l <= hi / 2)
        return (n_hi - n_mid) / (hi / 2)

    c_fit = octave_slope(lam_max) if lam_max > 1 else 0.0
    c_prev = octave_slope(lam_max / 2) if lam_max > 2 else c_fit
    count = sum(m for _, m in lam_mult)

    out = []
    for s in ss:
        sm = mp.mpf(s)
        with mp.workdps(prec.digits + 5):
            value = mp.fsum(m * mp.mpf(l) ** (-sm) for (l, m) in lam_mult)
        tail = c_fit * lam_max ** (1 - float(s)) / (float(s) - 1)
        drift = abs(c_fit - c_prev) * lam_max ** (1 - float(s)) / (float(s) - 1)
        out.append(ConeZetaReport(
            s=float(s), value=+value, tail_estimate=tail,
            tail_uncertainty=drift, lam_max=lam_max, count=count, r_max=r_max,
        ))
    return out[0] if single else out


# ---------------------------------------------------------------------------
# Contour side.
# ---------------------------------------------------------------------------

def cone_special_value(k: int, cone: ModelCone,
                       prec: Precision = DEFAULT_PRECISION):
    """SV_k = d/dt log P^{-mu}_{-1/2+t}(cosh eta) at t = 1/2, exactly
    -xi/(mu+1) 2F1(1,1; mu+2; xi)."""
    mu = cone.mu(k)
    with mp.workdps(prec.digits + 5):
        xi = mp.mpf(cone.xi)
        return +(-xi / (mu + 1) * hyp2f1(1, 1, mu + 2, xi, prec))


def _dlog_p_fd(t, mu, y, prec: Precision):
    """d/dt log P^{-mu}_{-1/2+t}(y) by Richardson-extrapolated central
    differences in the degree (the same step policy as dlog_bessel_k)."""
    t = mp.mpf(t)
    inner = Precision(rel_tol=prec.rel_tol * 1e-10, abs_tol=prec.abs_tol)
    h = mp.mpf(prec.rel_tol) ** Fraction(1, 3) * max(1, abs(t))
    with mp.workdps(prec.digits + 14):
        def lp(u):
            val = legendre_p_realdeg(u, mu, y, inner)
            if abs(val) < mp.mpf(prec.abs_tol):
                raise NearZeroError(
                    f"P at degree {float(u)} too small for a log derivative")
            return mp.log(val)

        def d(hh):
            return (lp(t + hh) - lp(t - hh)) / (2 * hh)

        return +((4 * d(h / 2) - d(h)) / 3)


def cone_f_k(t, k: int, cone: ModelCone, prec: Precision = DEFAULT_PRECISION):
    """f_k(t) = d/dt log P^{-mu}_{-1/2+t}(cosh eta) - 2 t SV_k, the
    regularized contour integrand; vanishes at t = 1/2 by construction."""
    if k < 0:
        raise DomainError(f"Fourier index must be >= 0, got {k}")
    sv = cone_special_value(k, cone, prec)
    return _dlog_p_fd(t, cone.mu(k), cone.y, prec) - 2 * mp.mpf(t) * sv


def _cone_fk_series(t, k: int, cone: ModelCone,
                    prec: Precision = DEFAULT_PRECISION):
    """Same integrand by differentiating the series factor in t directly:
    d/dt log G = 2 t G_tau(t^2) / G(t^2) with G_tau the term-by-term
    tau-derivative.  Private cross-check for the finite-difference path and
    workhorse for the bulk sampling (it is one series pass per point)."""
    mu = cone.mu(k)
    y = mp.mpf(cone.y)
    tm = mp.mpf(t)
    # cancellation grows like the largest term of the alternating series
    loss = 2 * abs(tm) * mp.atanh(mp.sqrt(abs(mp.mpf(cone.xi)))) / mp.log(10)
    wp = prec.digits + int(float(loss)) + 10
    with mp.workdps(wp):
        tau = tm * tm
        c = mp.mpf(mu + 1)
        z = (1 - y) / 2
        termv = mp.mpf(1)
        dterm = mp.mpf(0)   # d termv / d tau
        G = mp.mpf(1)
        dG = mp.mpf(0)
        j = 0
        while True:
            fac = (j + mp.mpf(1) / 2) ** 2 - tau
            dterm = (dterm * fac - termv) * z / ((c + j) * (j + 1))
            termv *= fac * z / ((c + j) * (j + 1))
            G += termv
            dG += dterm
            j += 1
            if abs(termv) + abs(dterm) < mp.mpf(10) ** (-wp) * (abs(G) + 1):
                break
            if j > prec.max_terms:
                raise GridTooCoarseError("series factor failed to converge")
        sv = cone_special_value(k, cone, prec)
        return +(2 * tm * dG / G - 2 * tm * sv)


_CONE_CACHE: dict = {}


def _cone_layout(k: int, cone: ModelCone):
    """(panel edges, far cutoff T) for mode k.  The exact-series region runs
    to T; panel edges include the per-mode split point (1 for k = 0, k^delta
    for k >= 1) and refine geometrically toward t = 1/2."""
    mu = cone.mu(k)
    T = max(30.0, 3.0 * mu + 10.0, 6.0 / cone.eta)
    split = 1.0 if k == 0 else float(k) ** 0.1
    levels = 10
    edges = [0.5 + 2.0 ** (-j) for j in range(levels, -1, -1)]
    if edges[0] < split < T:
        edges.append(split)
    for e in (2.5, 5.0, 10.0, 20.0, 40.0, 80.0, 160.0):
        if 1.5 < e < T:
            edges.append(e)
    edges.append(T)
    return sorted(set(edges)), T


def _cone_samples(k: int, cone: ModelCone, prec: Precision):
    """s-independent integrand samples for mode k on the composite GL grid,
    plus the far-model data: exact SV, the two leading far coefficients
    (eta, -(mu+1/2)), and two fitted correction coefficients with their fit
    residual."""
    key = (cone.omega, repr(cone.eta), k, prec.rel_tol)
    hit = _CONE_CACHE.get(key)
    if hit is not None:
        return hit
    edges, T = _cone_layout(k, cone)
    xs, ws = np.polynomial.legendre.leggauss(12)
    samples = []
    for lo, hi in zip(edges, edges[1:]):
        mid, half = (hi + lo) / 2, (hi - lo) / 2
        for xi_, wi in zip(xs, ws):
            t, w = mid + half * xi_, half * wi
            samples.append((t, w, _cone_fk_series(t, k, cone, prec)))
    sv = cone_special_value(k, cone, prec)
    mu = cone.mu(k)
    # fit f + 2 t SV - eta + (mu+1/2)/t ~ c2/t^2 + c3/t^3 on [T, 2T]
    ts = [T * g for g in (1.0, 1.19, 1.41, 1.68, 2.0)]
    resid = []
    for tt in ts:
        fv = _cone_fk_series(tt, k, cone, prec)
        resid.append(float(fv + 2 * mp.mpf(tt) * sv - mp.mpf(cone.eta)
                           + mp.mpf(mu + 0.5) / tt))
    M = np.array([[1.0 / tt ** 2, 1.0 / tt ** 3] for tt in ts])
    (c2, c3), res, *_ = np.linalg.lstsq(M, np.array(resid), rcond=None)
    fit_resid = float(np.max(np.abs(M @ np.array([c2, c3]) - np.array(resid))))
    t_in = min(s[0] for s in samples)
    f_in = next(f for (t, w, f) in samples if t == t_in)
    out = {
        "T": T, "sv": sv, "mu": mu,
        "samples": samples,
        "slope": f_in / (mp.mpf(t_in) - mp.mpf(1) / 2),
        "eps0": mp.mpf(2) ** (-10),
        "c2": float(c2), "c3": float(c3), "fit_resid": fit_resid,
    }
    _CONE_CACHE[key] = out
    return out


def cone_I_k(s, k: int, cone: ModelCone,
             prec: Precision = DEFAULT_PRECISION):
    """k-th contour term (sin(pi s)/pi) int_{1/2}^inf (t^2-1/4)^{-s} f_k,
    with uncertainty, as a dict (multiplicity NOT included; the e-plane
    contour collapsed onto the negative-lambda cut carries sin(pi s)/pi,
    and the -2t SV_k subtraction is exactly the continuation of that
    formula from s < 1 into 1 < s < 2).

    Split: analytic stub on [1/2, 1/2+2^{-10}] (f is linear there to high
    accuracy), cached series samples on the composite grid to T, and beyond
    T the model  f ~ eta - (mu+1/2)/t + c2/t^2 + c3/t^3 - 2 t SV  with the
    weight expanded binomially; c2, c3 are fitted on exact samples in
    [T, 2T] and the SV part integrates in closed form.
    """
    if not 1 < float(s) < 2:
        raise DomainError(f"contour representation holds for 1 < s < 2, got {s}")
    data = _cone_samples(k, cone, prec)
    sm = mp.mpf(s)
    with mp.workdps(prec.digits + 5):
        main = mp.fsum(
            mp.mpf(w) * (mp.mpf(t) ** 2 - mp.mpf(1) / 4) ** (-sm) * f
            for (t, w, f) in data["samples"]
        )
        eps0 = data["eps0"]
        stub = data["slope"] * eps0 ** (2 - sm) / (2 - sm)
        A = mp.mpf(data["T"])
        mu = data["mu"]
        far = mp.mpf(0)
        cj = mp.mpf(1)
        for j in range(8):
            p = 2 * sm + 2 * j
            far += cj * (mp.mpf(cone.eta) * A ** (1 - p) / (p - 1)
                         - (mu + mp.mpf(1) / 2) * A ** (-p) / p
                         + mp.mpf(data["c2"]) * A ** (-p - 1) / (p + 1)
                         + mp.mpf(data["c3"]) * A ** (-p - 2) / (p + 2))
            cj *= (sm + j) / (j + 1) / 4
        far -= data["sv"] * (A * A - mp.mpf(1) / 4) ** (1 - sm) / (sm - 1)
        pref = mp.sin(mp.pi * sm) / mp.pi
        val = pref * (main + stub + far)
        unc = float(abs(pref) * (
            2 * mp.mpf(data["fit_resid"]) * A ** (1 - 2 * sm) / (2 * sm - 1)
            + abs(stub) * mp.mpf("0.05")))
        return {"value": +val, "uncertainty": unc, "k": k}


@dataclass
class ConeContourReport:
    s: float
    value: object
    k_max: int
    k_tail_estimate: float
    k_tail_uncertainty: float
    quad_uncertainty: float
    per_k: list = field(default_factory=list)

    @property
    def value_total(self):
        return self.value + mp.mpf(self.k_tail_estimate)


def cone_contour_sum(s, k_max: int, cone: ModelCone,
                     prec: Precision = DEFAULT_PRECISION) -> ConeContourReport:
    """Weighted contour sum I_0 + 2 sum_{k=1}^{K} I_k plus a fitted
    power-law k-tail (I_k decays like a power of k for the same structural
    reason as in the cusp case; here the exponent is fitted rather than
    derived)."""
    if k_max < 1:
        raise DomainError("need k_max >= 1")
    terms = [cone_I_k(s, k, cone, prec) for k in range(0, k_max + 1)]
    with mp.workdps(prec.digits + 5):
        total = terms[0]["value"] + 2 * mp.fsum(t["value"] for t in terms[1:])
        vals = [float(t["value"]) for t in terms[1:]]
        k_tail = 0.0
        unc = 0.0
        n_fit = min(5, len(vals))
        rs = vals[-n_fit:]
        if len(vals) >= 3 and all(v != 0 for v in rs) \
                and len({v > 0 for v in rs}) == 1:
            ks = np.arange(k_max - n_fit + 1, k_max + 1, dtype=float)
            ys = np.log(np.abs(np.array(rs)))
            slope, intercept = np.polyfit(np.log(ks), ys, 1)
            if slope < -1.2:
                sign = 1.0 if rs[-1] > 0 else -1.0
                k_tail = 2 * sign * float(
                    mp.exp(intercept) * hurwitz_zeta(-slope, k_max + 1, prec))
                fit_err = max(abs(math.exp(intercept + slope * math.log(kk))
                                  - abs(v))
                              for kk, v in zip(ks, rs))
                unc = 0.3 * abs(k_tail) + fit_err * (n_fit + 2)
            else:
                unc = sum(abs(v) for v in rs[-2:]) * k_max
        else:
            unc = sum(abs(v) for v in rs[-2:]) * k_max if vals else 0.0
    return ConeContourReport(
        s=float(s), value=+total, k_max=k_max, k_tail_estimate=k_tail,
        k_tail_uncertainty=float(unc),
        quad_uncertainty=float(terms[0]["uncertainty"]
                               + 2 * sum(t["uncertainty"] for t in terms[1:])),
        per_k=terms,
    )


# ---------------------------------------------------------------------------
# Small-radius determinant expansion.
# ---------------------------------------------------------------------------

def cone_logdet_asymptotic(omega: int, eta: float | None = None) -> SymLinear:
    """log det of the cone Dirichlet Laplacian as the boundary parameter
    eta -> 0:

        -(omega/6 + 1/(6 omega)) log eta
        - omega (-2 zp1 + 1/6 - (1/6) log 2)
        - (1/omega) (5/12 - (1/6) log 2 + gamma/6)
        + (1/2 + omega/6 + 1/(6 omega)) log omega + 1/4 + o(1)

    with zp1 the derivative of the zeta function at -1.  The omega = 1 case
    is a hyperbolic disk and its constant differs from the flat-disk one:
    curvature survives the small-radius limit.  The optional eta argument is
    validated only; the returned expansion is symbolic in log eta.
    """
    if not (isinstance(omega, int) and omega >= 1):
        raise DomainError(f"cone order must be a positive integer, got {omega}")
    if eta is not None and not eta > 0:
        raise DomainError(f"boundary parameter must be positive, got {eta}")
    w = Fraction(omega)
    coeff_log_eta = -(w / 6 + Fraction(1, 6) / w)
    constant = (
        -omega * (term("ZP1", -2) + const(Fraction(1, 6))
                  - Fraction(1, 6) * term("LOG2", 1))
        - Fraction(1, 1) / w * (const(Fraction(5, 12))
                                - Fraction(1, 6) * term("LOG2", 1)
                                + Fraction(1, 6) * term("GAMMA", 1))
        + (Fraction(1, 2) + w / 6 + Fraction(1, 6) / w) * log_int(omega)
        + const(Fraction(1, 4))
    )
    return SymLinear.make(
        {f"log_eta({omega})": const(coeff_log_eta)},
        constant,
        has_small_o=True,
    )
