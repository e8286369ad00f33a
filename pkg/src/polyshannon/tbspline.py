"""TB-splines (exponential B-splines) and Euler-Frobenius polynomials.

For a frequency multiset Lambda = [l_1..l_N] (see :mod:`polyshannon.spectrum`)
the TB-spline Q_N is the inverse Fourier transform of

    Q^(xi) = prod_j (e^{-l_j} - e^{-i xi}) / (i xi - l_j),

equivalently the N-fold convolution of the first-order kernels
``e^{l_j (t-1)} 1_{[0,1)}``: a compactly supported bump on [0, N], positive on
the open interval, piecewise in the null space of prod_j (d/dt - l_j).  All
code in this module works with this *raw* normalization; sampling-kernel code
normalizes downstream as it sees fit.

Evaluation routes (deliberately redundant -- the tests play them against each
other):

* :func:`tb_exact`     -- finite Green's-function sum.  Exact formula, but the
  terms grow like e^{max|l| N} while the result stays bounded, so float64 dies
  by cancellation for stiff spectra; the implementation escalates to mpmath in
  a middle regime and refuses beyond that (:class:`CancellationError`).
* :func:`tb_piecewise` -- the same data reorganized as explicit exponential
  polynomials per unit interval; cheap repeated evaluation and derivatives.
* :func:`tb_tabulate`  -- FFT inversion of the Fourier form with an asymptotic
  correction for the truncated spectral tail.  No cancellation at any
  stiffness, which is exactly why it exists.
* :func:`tb_fourier`   -- the symbol itself.

On top of these sit the exponential Euler spline
``Phi(x; lam) = sum_m lam^m Q_N(x - m)`` (three independent routes again:
direct sum, one-sided resolvent continuation, contour integral) and the
generalized Euler-Frobenius polynomial, whose zero set drives the sampling
theory.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from mpmath import mp

from .spectrum import SpectrumVector

__all__ = [
    "CancellationError",
    "ConditioningError",
    "ContourDomainError",
    "ConvergenceError",
    "EFAccuracyError",
    "EFStructureError",
    "EFPolynomial",
    "PiecewiseExpSpline",
    "TbTable",
    "cancellation_severity",
    "ef_contour",
    "ef_zeros",
    "euler_frobenius",
    "euler_spline",
    "euler_spline_resolvent",
    "green_power_sum",
    "tb_exact",
    "tb_fourier",
    "tb_integer_values",
    "tb_piecewise",
    "tb_tabulate",
]

# stiffness s = max|lambda| * N controls how many digits the Green's-function
# sum cancels away (up to s * log10(e)).  Below FLOAT_MAX the float64 path is
# guaranteed ~10 clean digits even when the cancellation is fully realized;
# up to EXACT_MAX we escalate to mpmath; beyond that the public exact
# evaluator refuses.
SEVERITY_FLOAT_MAX = 12.0
SEVERITY_EXACT_MAX = 80.0

#: distinct frequencies closer than this make the partial-fraction system
#: numerically meaningless (they should have been merged into a multiplicity)
MIN_FREQ_GAP = 1e-8


class ConditioningError(ValueError):
    """Distinct frequencies too close together: merge them or separate them."""


class CancellationError(ArithmeticError):
    """The requested evaluation would lose essentially every digit."""


class EFAccuracyError(ArithmeticError):
    """Euler-Frobenius coefficients failed their independent cross-check."""


class EFStructureError(ArithmeticError):
    """Computed Euler-Frobenius zeros violate the guaranteed structure."""


class ContourDomainError(ValueError):
    """No admissible contour rectangle for these parameters."""


class ConvergenceError(ArithmeticError):
    """An adaptive quadrature failed to settle."""


def cancellation_severity(spectrum: SpectrumVector) -> float:
    """max|lambda_j| * N, the digits-lost scale of the exact evaluator."""
    return spectrum.max_abs() * spectrum.order


# --------------------------------------------------------------------------
# field-generic series algebra
#
# The same partial-fraction / convolution algebra runs in float64 and in
# mpmath, so the helpers below work on plain Python lists of whatever scalar
# type they are handed ("one" supplies the field's multiplicative unit).
# --------------------------------------------------------------------------

def _shift_mul(coeffs: list, d, trunc: int) -> list:
    """Multiply the truncated power series ``coeffs`` (in u) by (u + d)."""
    zero = coeffs[0] * 0
    n = min(len(coeffs) + 1, trunc)
    out = [zero] * n
    for k, c in enumerate(coeffs):
        if k < n:
            out[k] = out[k] + c * d
        if k + 1 < n:
            out[k + 1] = out[k + 1] + c
    return out


def _series_invert(h: list, trunc: int) -> list:
    """Reciprocal of a power series with h[0] != 0, to ``trunc`` terms."""
    inv0 = 1 / h[0]
    out = [inv0]
    for k in range(1, trunc):
        acc = h[0] * 0
        for l in range(1, k + 1):
            if l < len(h):
                acc = acc + h[l] * out[k - l]
        out.append(-inv0 * acc)
    return out


def _green_terms(lams: Sequence, mults: Sequence[int], one) -> list:
    """Partial fractions of 1/prod_j (z - l_j)^{mu_j}.

    Returns ``[(l_i, [a_{i,0}, ..., a_{i,mu_i-1}]), ...]`` with

        1/L(z) = sum_i sum_s a_{i,s} / (z - l_i)^{s+1},

    so the causal Green's function of L(d/dt) is
    ``g(t) = 1_{t>=0} sum_{i,s} (a_{i,s}/s!) t^s e^{l_i t}``.
    """
    terms = []
    for i, (li, mi) in enumerate(zip(lams, mults)):
        h = [one]
        for j, (lj, mj) in enumerate(zip(lams, mults)):
            if j == i:
                continue
            d = li - lj
            for _ in range(mj):
                h = _shift_mul(h, d, mi)
        g = _series_invert(h, mi)
        # Taylor coefficient g[r] of 1/h at l_i pairs with power (z-l_i)^{r-mu_i},
        # i.e. a_{i,s} = g[mu_i - 1 - s]
        avec = [g[mi - 1 - s] for s in range(mi)]
        terms.append((li, avec))
    return terms


def _beta_coeffs(lams: Sequence, mults: Sequence[int], one, exp) -> list:
    """Coefficients of beta(w) = prod_j (e^{-l_j} - w), constant term first."""
    poly = [one]
    for li, mi in zip(lams, mults):
        e = exp(-li)
        for _ in range(mi):
            nxt = [c * e for c in poly] + [poly[0] * 0]
            for k in range(1, len(nxt)):
                nxt[k] = nxt[k] - poly[k - 1]
            poly = nxt
    return poly


def _check_gaps(spectrum: SpectrumVector) -> None:
    vals = [v for v, _ in spectrum.entries]
    for a, b in zip(vals, vals[1:]):
        if b - a < MIN_FREQ_GAP:
            raise ConditioningError(
                f"frequencies {a} and {b} are closer than {MIN_FREQ_GAP}; "
                "merge them into one entry of higher multiplicity"
            )


@lru_cache(maxsize=None)
def _system_float(spectrum: SpectrumVector):
    """(green terms with a/s! pre-divided, beta coefficients) in float64."""
    _check_gaps(spectrum)
    lams = [v for v, _ in spectrum.entries]
    mults = [m for _, m in spectrum.entries]
    terms = _green_terms(lams, mults, 1.0)
    entries = tuple(
        (li, tuple(a / math.factorial(s) for s, a in enumerate(avec)))
        for li, avec in terms
    )
    beta = tuple(_beta_coeffs(lams, mults, 1.0, math.exp))
    return entries, beta


def _hp_dps(severity: float) -> int:
    # cancellation burns severity * log10(e) digits; keep ~25 clean ones
    return 35 + int(0.4343 * severity)


@lru_cache(maxsize=None)
def _system_hp(spectrum: SpectrumVector, dps: int):
    _check_gaps(spectrum)
    with mp.workdps(dps):
        lams = [mp.mpf(v) for v, _ in spectrum.entries]
        mults = [m for _, m in spectrum.entries]
        terms = _green_terms(lams, mults, mp.mpf(1))
        entries = tuple(
            (li, tuple(a / math.factorial(s) for s, a in enumerate(avec)))
            for li, avec in terms
        )
        beta = tuple(_beta_coeffs(lams, mults, mp.mpf(1), mp.exp))
    return entries, beta


# --------------------------------------------------------------------------
# pointwise evaluation
# --------------------------------------------------------------------------

def _qn_float_arr(spectrum: SpectrumVector, t: np.ndarray) -> np.ndarray:
    entries, beta = _system_float(spectrum)
    n = spectrum.order
    out = np.zeros_like(t)
    relevant = (t >= 0.0) & (t < n)
    if not relevant.any():
        return out
    tr = t[relevant]
    acc = np.zeros_like(tr)
    for shift in range(n + 1):
        u = tr - shift
        mask = u >= 0.0
        if not mask.any():
            continue
        um = u[mask]
        g = np.zeros_like(um)
        for li, cvec in entries:
            poly = np.zeros_like(um)
            for c in reversed(cvec):
                poly = poly * um + c
            g += poly * np.exp(li * um)
        bm = beta[shift]
        if bm != 0.0:
            tmp = np.zeros_like(tr)
            tmp[mask] = bm * g
            acc += tmp
    out[relevant] = acc
    return out


def _qn_hp_arr(spectrum: SpectrumVector, t: np.ndarray, dps: int) -> np.ndarray:
    entries, beta = _system_hp(spectrum, dps)
    n = spectrum.order
    out = np.zeros_like(t)
    with mp.workdps(dps):
        for idx, tv in enumerate(t):
            if not (0.0 <= tv < n):
                continue
            tt = mp.mpf(float(tv))
            acc = mp.mpf(0)
            for shift in range(n + 1):
                u = tt - shift
                if u < 0:
                    continue
                g = mp.mpf(0)
                for li, cvec in entries:
                    poly = mp.mpf(0)
                    for c in reversed(cvec):
                        poly = poly * u + c
                    g += poly * mp.exp(li * u)
                acc += beta[shift] * g
            out[idx] = float(acc)
    return out


def _qn_any(spectrum: SpectrumVector, t: np.ndarray) -> np.ndarray:
    """Internal evaluator with no stiffness cap (escalates precision as needed)."""
    sev = cancellation_severity(spectrum)
    if sev <= SEVERITY_FLOAT_MAX:
        return _qn_float_arr(spectrum, t)
    return _qn_hp_arr(spectrum, t, _hp_dps(sev))


def tb_exact(spectrum: SpectrumVector, t):
    """TB-spline values by the exact Green's-function sum.

    Raises :class:`CancellationError` when max|lambda|*N exceeds
    ``SEVERITY_EXACT_MAX``; between ``SEVERITY_FLOAT_MAX`` and that cap the
    sum runs in scaled-up precision, below it in plain float64.  Values
    outside [0, N) are exactly zero (left-closed convention: Q(0) = 0 for
    N >= 2, and the first-order kernel has Q(0) = e^{-lambda}).
    """
    sev = cancellation_severity(spectrum)
    if sev > SEVERITY_EXACT_MAX:
        raise CancellationError(
            f"max|lambda|*N = {sev:.1f} exceeds {SEVERITY_EXACT_MAX}; "
            "use tb_tabulate, which does not cancel"
        )
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    vals = _qn_any(spectrum, np.atleast_1d(t_arr))
    return float(vals[0]) if scalar else vals


@lru_cache(maxsize=None)
def tb_integer_values(spectrum: SpectrumVector) -> tuple[float, ...]:
    """(Q_N(1), ..., Q_N(N-1)): the data behind symbols and Euler-Frobenius.

    Always computed reliably (precision escalates with stiffness, no cap).
    """
    n = spectrum.order
    if n < 2:
        return ()
    return tuple(float(v) for v in _qn_any(spectrum, np.arange(1.0, n)))


@lru_cache(maxsize=None)
def _qn_grid(spectrum: SpectrumVector, per_unit: int) -> np.ndarray:
    """Q_N on the grid l/per_unit, l = 0..N*per_unit, stiffness-uncapped."""
    n = spectrum.order
    t = np.arange(n * per_unit + 1, dtype=float) / per_unit
    vals = _qn_any(spectrum, t)
    vals.flags.writeable = False
    return vals


# --------------------------------------------------------------------------
# Fourier side
# --------------------------------------------------------------------------

def tb_fourier(spectrum: SpectrumVector, xi):
    """The TB symbol Q^(xi) = prod_j (e^{-l_j} - e^{-i xi})/(i xi - l_j).

    Each factor is evaluated as e^{-l} * (1 - e^{-w})/w with w = i*xi - l,
    switching to the Taylor polynomial of (1 - e^{-w})/w for |w| < 1e-6 so
    the removable singularity at xi = -i*l never bites.
    """
    xi_arr = np.asarray(xi, dtype=float)
    scalar = xi_arr.ndim == 0
    xi_arr = np.atleast_1d(xi_arr)
    out = np.ones(xi_arr.shape, dtype=complex)
    for li, mult in spectrum.entries:
        w = 1j * xi_arr - li
        small = np.abs(w) < 1e-6
        w_safe = np.where(small, 1.0, w)
        f = (1.0 - np.exp(-w_safe)) / w_safe
        ws = np.where(small, w, 0.0)
        f = np.where(small, 1.0 - ws / 2 + ws * ws / 6 - ws * ws * ws / 24, f)
        out *= (math.exp(-li) * f) ** mult
    return complex(out[0]) if scalar else out


@dataclass(frozen=True)
class TbTable:
    """TB-spline tabulated on a uniform grid over its support [0, N].

    ``values[l] = Q_N(l / per_unit)``.  ``err_bound`` is the *absolute* bound
    on the tabulation error (spectral truncation + aliasing) that the adaptive
    driver in :func:`tb_tabulate` guaranteed; interpolation between grid nodes
    through :meth:`__call__` adds O((lambda*h)^6) on top of it.
    """

    spectrum: SpectrumVector
    per_unit: int
    values: np.ndarray
    cutoff: float  # spectral truncation radius Xi actually used
    err_bound: float

    @property
    def grid(self) -> np.ndarray:
        return np.arange(len(self.values), dtype=float) / self.per_unit

    def __call__(self, t):
        from .tables import interp6

        return interp6(self.values, 0.0, 1.0 / self.per_unit, t, knot_every=self.per_unit)


def tb_tabulate(
    spectrum: SpectrumVector,
    per_unit: int = 64,
    rtol: float = 1e-8,
) -> TbTable:
    """Tabulate Q_N by FFT of its symbol plus an asymptotic tail correction.

    The Fourier integral over |xi| <= Xi is done by FFT on a grid fine enough
    in xi that time-domain aliasing (period P >= N + 6 units) is negligible;
    the |xi| > Xi remainder is added back analytically from the asymptotic
    expansion of integrals e^{i xi u}/(i xi - l)^{s+1} at large Xi.  Both
    error terms are bounded a priori and the spectral radius is grown until
    they sit below ``rtol`` relative to the mean level of Q_N, which makes
    this route immune to the cancellation that kills :func:`tb_exact` for
    stiff spectra.  Requires N >= 2 (first-order kernels have a closed form
    and a non-integrable symbol tail).
    """
    n = spectrum.order
    if n < 2:
        raise ValueError("tabulation needs N >= 2; Q_1 is e^{lambda (t-1)} on [0,1)")
    entries, beta = _system_float(spectrum)

    p_time = 8
    while p_time < n + 6:
        p_time *= 2

    c_hat = 1.0
    for li, mult in spectrum.entries:
        c_hat *= (1.0 + math.exp(-li)) ** mult
    qhat0 = tb_fourier(spectrum, 0.0).real
    tol_abs = rtol * qhat0 / n

    series_len = 14
    abs_beta = sum(abs(b) for b in beta)
    abs_green = sum(
        abs(a) * float(n) ** s for _, avec in entries for s, a in enumerate(avec)
    )
    for c_exp in range(2, 13):
        cutoff = math.pi * per_unit * (1 << c_exp)
        alias = 8.0 * n * c_hat / ((p_time - n) * cutoff**n)
        rho = 1.0 / (math.pi * (1 << c_exp))
        series_err = abs_beta * abs_green * math.factorial(series_len) * rho ** (
            series_len + 1
        ) / math.pi
        if alias <= tol_abs and series_err <= tol_abs:
            break
    else:
        raise ValueError(f"cannot reach rtol={rtol} for {spectrum} by tabulation")

    # FFT part: trapezoid over [-Xi, Xi].  The left-endpoint rectangle sum
    # differs from the trapezoid only in an imaginary component that the final
    # real-part extraction kills, so no explicit endpoint correction is needed.
    m_fft = p_time * per_unit * (1 << c_exp)
    dxi = 2.0 * cutoff / m_fft
    k = np.arange(-m_fft // 2, m_fft // 2)
    qhat = tb_fourier(spectrum, k * dxi)
    time_vals = np.fft.ifft(np.fft.ifftshift(qhat)) * (m_fft * dxi / (2.0 * math.pi))
    stride = 1 << c_exp
    main = time_vals[: n * per_unit * stride + 1 : stride].real

    tail = _spectral_tail(entries, beta, cutoff, per_unit, n, series_len)
    values = main + tail
    values.flags.writeable = False
    return TbTable(
        spectrum=spectrum,
        per_unit=per_unit,
        values=values,
        cutoff=cutoff,
        err_bound=alias + series_err,
    )


def _spectral_tail(entries, beta, cutoff, per_unit, n, series_len):
    """(1/pi) Re int_{Xi}^{inf} Q^(xi) e^{i xi t} dxi on the t-grid l/per_unit.

    Per partial fraction and integer shift this needs
    I_s(u) = int_Xi^inf e^{i xi u} (i xi - l)^{-(s+1)} dxi, which satisfies

        I_s = e^{i Xi u} (i Xi - l)^{-s} / (s i) + (u/s) I_{s-1},   s >= 1,

    with I_0 evaluated by its large-Xi asymptotic series for u != 0.  At
    u = 0 the s = 0 pieces are individually log-divergent but their residue
    coefficients sum to zero (N >= 2), so they are resummed jointly as
    i * sum_l a_{l,0} log(i Xi - l).
    """
    ts = np.arange(n * per_unit + 1, dtype=float) / per_unit
    tail = np.zeros_like(ts)
    acc = np.zeros(len(ts), dtype=complex)
    for shift in range(n + 1):
        bm = beta[shift]
        if bm == 0.0:
            continue
        u = ts - shift
        at_zero = u == 0.0
        uz = np.where(at_zero, 1.0, u)
        log_cluster = 0.0j
        for li, cvec in entries:
            z = 1j * cutoff - li
            phase = np.exp(1j * cutoff * u)
            # asymptotic series for I_0 away from u = 0
            q = 1.0 / (uz * z)
            series = np.ones_like(acc)
            term = np.ones_like(acc)
            for r in range(1, series_len):
                term = term * (r * q)
                series += term
            i_prev = -phase * series / ((1j * uz) * z)
            i_prev[at_zero] = 0.0
            mult = len(cvec)
            a0 = cvec[0]  # s = 0 coefficient is a_{l,0} itself (0! = 1)
            acc += bm * a0 * i_prev
            log_cluster += a0 * np.log(z)
            for s in range(1, mult):
                i_s = phase * z ** (-s) / (s * 1j) + (u / s) * i_prev
                # the closed form at u = 0 is the boundary term alone
                i_s[at_zero] = z ** (-s) / (s * 1j)
                a_s = cvec[s] * math.factorial(s)
                acc += bm * a_s * i_s
                i_prev = i_s
        if at_zero.any():
            acc[at_zero] += bm * 1j * log_cluster
    tail += acc.real / math.pi
    return tail


# --------------------------------------------------------------------------
# piecewise-exponential form
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PiecewiseExpSpline:
    """A spline written per unit interval as sum_l e^{l u} * poly(u), u = t - m.

    ``pieces[m]`` describes [m + lo, m + 1 + lo): a tuple of (lam, coeffs)
    blocks with ``coeffs[s]`` multiplying u^s e^{lam u}.  Float64 only -- the
    factory refuses spectra stiff enough to shred these coefficients.
    """

    spectrum: SpectrumVector
    lo: int
    pieces: tuple[tuple[tuple[float, tuple[float, ...]], ...], ...]

    @property
    def support(self) -> tuple[float, float]:
        return (float(self.lo), float(self.lo + len(self.pieces)))

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        scalar = t_arr.ndim == 0
        t_arr = np.atleast_1d(t_arr)
        out = np.zeros_like(t_arr)
        for m, blocks in enumerate(self.pieces):
            a = self.lo + m
            mask = (t_arr >= a) & (t_arr < a + 1)
            if not mask.any():
                continue
            u = t_arr[mask] - a
            acc = np.zeros_like(u)
            for li, coeffs in blocks:
                poly = np.zeros_like(u)
                for c in reversed(coeffs):
                    poly = poly * u + c
                acc += poly * np.exp(li * u)
            out[mask] = acc
        return float(out[0]) if scalar else out

    def derivative(self) -> "PiecewiseExpSpline":
        """Piecewise derivative (ignores any distributional part at the knots)."""
        new_pieces = []
        for blocks in self.pieces:
            nb = []
            for li, coeffs in blocks:
                c = list(coeffs) + [0.0]
                nc = tuple((s + 1) * c[s + 1] + li * c[s] for s in range(len(coeffs)))
                nb.append((li, nc))
            new_pieces.append(tuple(nb))
        return PiecewiseExpSpline(self.spectrum, self.lo, tuple(new_pieces))


def tb_piecewise(spectrum: SpectrumVector) -> PiecewiseExpSpline:
    """Assemble Q_N's explicit piecewise-exponential coefficients (float64).

    Raises :class:`CancellationError` beyond ``SEVERITY_FLOAT_MAX``: the local
    coefficients are differences of Green translates and lose digits at the
    same rate as :func:`tb_exact`'s float path.
    """
    sev = cancellation_severity(spectrum)
    if sev > SEVERITY_FLOAT_MAX:
        raise CancellationError(
            f"max|lambda|*N = {sev:.1f} exceeds {SEVERITY_FLOAT_MAX}; "
            "piecewise coefficients would be pure cancellation noise"
        )
    entries, beta = _system_float(spectrum)
    n = spectrum.order
    pieces = []
    for m in range(n):
        blocks = []
        for li, cvec in entries:
            mult = len(cvec)
            coeffs = [0.0] * mult
            for j in range(m + 1):
                delta = float(m - j)
                w = beta[j] * math.exp(li * delta)
                for s in range(mult):
                    cs = cvec[s]
                    if cs == 0.0:
                        continue
                    for r in range(s + 1):
                        coeffs[r] += w * cs * math.comb(s, r) * delta ** (s - r)
            blocks.append((li, tuple(coeffs)))
        pieces.append(tuple(blocks))
    return PiecewiseExpSpline(spectrum, 0, tuple(pieces))


# --------------------------------------------------------------------------
# exponential Euler splines
# --------------------------------------------------------------------------

def euler_spline(spectrum: SpectrumVector, x: float, lam: complex):
    """Phi(x; lam) = sum_m lam^m Q_N(x - m), a finite sum over the support.

    ``lam`` must be nonzero (negative powers appear).  Complex ``lam`` gives a
    complex result; real input stays real.
    """
    if lam == 0:
        raise ValueError("lam must be nonzero")
    n = spectrum.order
    m_lo = math.floor(x - n) + 1
    m_hi = math.floor(x)
    ms = np.arange(m_lo, m_hi + 1)
    if len(ms) == 0:
        return 0.0 if not isinstance(lam, complex) else 0.0j
    qv = tb_exact(spectrum, x - ms)
    acc = sum(lam ** int(m) * q for m, q in zip(ms, qv))
    return acc


@lru_cache(maxsize=None)
def _eulerian_coeffs(r: int) -> tuple[int, ...]:
    """Coefficients of A_r(mu) in G_r(mu) = sum_{j>=0} j^r mu^j = A_r/(1-mu)^{r+1}."""
    a = [1]
    for rr in range(r):
        nxt = [0] * (len(a) + 1)
        for k in range(len(nxt)):
            ak = a[k] if k < len(a) else 0
            akm = a[k - 1] if 0 <= k - 1 < len(a) else 0
            nxt[k] = k * ak + (rr + 2 - k) * akm
        a = nxt
    return tuple(a)


def _geom_moment(r: int, mu):
    """G_r(mu) = sum_{j>=0} j^r mu^j continued to all mu != 1."""
    coeffs = _eulerian_coeffs(r)
    num = 0 * mu
    for c in reversed(coeffs):
        num = num * mu + c
    return num / (1 - mu) ** (r + 1)


def _power_sum_field(entries, x, lam, exp):
    """sum_{j>=0} lam^{-j} g(x+j) continued past |e^l/lam| = 1, generic field."""
    total = 0 * lam
    for li, cvec in entries:
        mu = exp(li) / lam
        if abs(mu - 1) < 1e-12:
            raise ValueError(f"lam = {lam} sits on the pole e^{{lambda_j}}, lambda_j = {li}")
        block = 0 * lam
        for s, cs in enumerate(cvec):
            t_s = 0 * lam
            for r in range(s + 1):
                t_s = t_s + math.comb(s, r) * x ** (s - r) * _geom_moment(r, mu)
            block = block + cs * t_s
        total = total + exp(li * x) * block
    return total


def _pole_proximity_digits(entries, lam) -> float:
    """Decimal digits the rational continuation burns as lam nears a node.

    A frequency of multiplicity m contributes poles of order up to m at
    lam = e^{lambda_i}; at relative distance d the closed form cancels
    roughly m * log10(1/d) digits.
    """
    worst = 0.0
    for li, cvec in entries:
        d = abs(math.exp(li) / lam - 1.0)
        if 0.0 < d < 1.0:
            worst = max(worst, len(cvec) * math.log10(1.0 / d))
    return worst


def green_power_sum(spectrum: SpectrumVector, x: float, lam: complex):
    """Analytic continuation of sum_{j>=0} lam^{-j} g(x + j).

    ``g`` is the causal Green's function of the operator.  The geometric-type
    series converges only for |lam| large, but each pole contributes a
    rational function of e^{lambda_i}/lam, which continues the sum to every
    ``lam`` off the points e^{lambda_i} (and 0).  Precision escalates as
    ``lam`` approaches one of those nodes, where the closed form cancels.
    This is the engine behind the resolvent route to the Euler spline.
    """
    if lam == 0:
        raise ValueError("lam must be nonzero")
    entries, _ = _system_float(spectrum)
    loss = _pole_proximity_digits(entries, lam)
    if loss <= _RESOLVENT_FLOAT_LOSS_MAX:
        return _power_sum_field(entries, float(x), lam, _field_exp_float)
    dps = 30 + int(loss)
    entries_hp, _ = _system_hp(spectrum, dps)
    with mp.workdps(dps):
        val = _power_sum_field(entries_hp, mp.mpf(float(x)), mp.mpmathify(lam), mp.exp)
        return complex(val) if isinstance(val, mp.mpc) else float(val)


#: float64 keeps ~13 clean digits in the resolvent as long as pole
#: proximity burns no more than this many
_RESOLVENT_FLOAT_LOSS_MAX = 3.0


def _field_exp_float(v):
    return cmath.exp(v) if isinstance(v, complex) else math.exp(v)


def euler_spline_resolvent(spectrum: SpectrumVector, x: float, lam: complex):
    """Phi(x; lam) by the one-sided resolvent: B(lam) * green_power_sum.

    For x in [0,1), Phi(x;lam) = [sum_k beta_k lam^{-k}] * sum_{j>=0} lam^{-j} g(x+j);
    general x reduces by the functional equation Phi(x+1) = lam * Phi(x).
    Entirely independent of pointwise TB values, which is the point: it
    cross-examines :func:`euler_spline` and the Euler-Frobenius coefficients.
    Like :func:`green_power_sum` it escalates precision when ``lam`` sits
    close to a pole node e^{lambda_i}.
    """
    if lam == 0:
        raise ValueError("lam must be nonzero")
    k = math.floor(x)
    xr = x - k
    entries, beta = _system_float(spectrum)
    loss = _pole_proximity_digits(entries, lam)
    if loss <= _RESOLVENT_FLOAT_LOSS_MAX:
        b = 0 * lam
        for j, bj in enumerate(beta):
            b = b + bj * lam ** (-j)
        val = b * _power_sum_field(entries, xr, lam, _field_exp_float)
        return lam**k * val
    dps = 30 + int(loss)
    entries_hp, beta_hp = _system_hp(spectrum, dps)
    with mp.workdps(dps):
        lam_mp = mp.mpmathify(lam)
        b = mp.mpf(0)
        for j, bj in enumerate(beta_hp):
            b += bj * lam_mp ** (-j)
        val = lam_mp**k * b * _power_sum_field(entries_hp, mp.mpf(xr), lam_mp, mp.exp)
        return complex(val) if isinstance(val, mp.mpc) else float(val)


# --------------------------------------------------------------------------
# Euler-Frobenius polynomials
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class EFPolynomial:
    """Generalized Euler-Frobenius polynomial of a frequency multiset.

    Degree N-2, coefficients ``(-1)^{N-1} e^{sum lambda} Q_N(m)`` for the
    power lam^{N-1-m}, stored highest power first.  Satisfies
    P(lam) = (-1)^{N-1} e^{sum lambda} lam^{N-1} Phi(0; lam).
    """

    spectrum: SpectrumVector
    coeffs: tuple[float, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, lam):
        return np.polyval(np.asarray(self.coeffs), lam)

    def zeros(self) -> np.ndarray:
        return ef_zeros(self.spectrum)


@lru_cache(maxsize=None)
def euler_frobenius(spectrum: SpectrumVector) -> EFPolynomial:
    """Build the Euler-Frobenius polynomial from integer TB values.

    The coefficients are cross-checked against the independent resolvent
    route at lam = -1; disagreement beyond 1e-8 of the coefficient scale
    raises :class:`EFAccuracyError` rather than returning silent garbage.
    """
    n = spectrum.order
    if n < 2:
        raise ValueError("Euler-Frobenius polynomial needs N >= 2")
    qm = tb_integer_values(spectrum)
    sign = -1.0 if n % 2 == 0 else 1.0
    scale = math.exp(spectrum.freq_sum())
    coeffs = tuple(float(sign * scale * q) for q in qm)
    poly = EFPolynomial(spectrum, coeffs)

    direct = float(np.polyval(np.asarray(coeffs), -1.0))
    reference = _ef_reference_value(spectrum, -1.0)
    tol = 1e-8 * max(1.0, sum(abs(c) for c in coeffs))
    if abs(direct - reference) > tol:
        raise EFAccuracyError(
            f"Euler-Frobenius cross-check failed for {spectrum}: "
            f"direct {direct!r} vs resolvent {reference!r}"
        )
    return poly


def _ef_reference_value(spectrum: SpectrumVector, lam: float) -> float:
    """P(lam) via the resolvent identity, in float or mpmath as stiffness demands."""
    n = spectrum.order
    sev = cancellation_severity(spectrum)
    sign = -1.0 if n % 2 == 0 else 1.0
    if sev <= SEVERITY_FLOAT_MAX:
        phi = euler_spline_resolvent(spectrum, 0.0, lam)
        return sign * math.exp(spectrum.freq_sum()) * lam ** (n - 1) * phi
    dps = _hp_dps(sev)
    entries, beta = _system_hp(spectrum, dps)
    with mp.workdps(dps):
        lam_mp = mp.mpf(lam)
        b = mp.mpf(0)
        for j, bj in enumerate(beta):
            b += bj * lam_mp ** (-j)
        phi = _power_sum_field(entries, mp.mpf(0), lam_mp, mp.exp)
        val = sign * mp.exp(mp.mpf(spectrum.freq_sum())) * lam_mp ** (n - 1) * b * phi
        return float(val)


def ef_zeros(spectrum: SpectrumVector) -> np.ndarray:
    """The N-2 zeros of the Euler-Frobenius polynomial, ascending.

    The theory guarantees simple real negative zeros, reciprocal in pairs
    when the spectrum is symmetric; the computed roots are validated against
    that structure (:class:`EFStructureError` on violation) and, for
    symmetric spectra, re-symmetrized exactly in log space.
    """
    poly = euler_frobenius(spectrum)
    if poly.degree <= 0:
        return np.array([])
    roots = np.roots(np.asarray(poly.coeffs))
    if len(roots) != poly.degree:
        raise EFStructureError(f"degenerate leading coefficient for {spectrum}")
    bad_imag = np.abs(roots.imag) > 1e-7 * (1.0 + np.abs(roots))
    if bad_imag.any():
        raise EFStructureError(f"non-real Euler-Frobenius zeros for {spectrum}: {roots}")
    vals = np.sort(roots.real)
    if (vals >= 0.0).any():
        raise EFStructureError(f"non-negative Euler-Frobenius zero for {spectrum}: {vals}")
    if spectrum.is_symmetric():
        logs = np.log(-vals)
        sym = 0.5 * (logs - logs[::-1])
        vals = -np.exp(sym)
        if len(vals) % 2 == 1:
            vals[len(vals) // 2] = -1.0
    return vals


# --------------------------------------------------------------------------
# contour route
# --------------------------------------------------------------------------

def ef_contour(
    spectrum: SpectrumVector,
    x: float,
    lam: complex,
    rtol: float = 1e-11,
):
    """Phi(x; lam) by a contour integral around the operator spectrum.

    For x in [0, 1),

        Phi(x; lam) = B(lam) * (1/2 pi i) * oint e^{z x} / (L(z) (1 - e^z/lam)) dz

    over a rectangle enclosing every lambda_j and none of the poles of
    1/(1 - e^z/lam) (which sit at log|lam| + i(arg lam + 2 pi m)).  The
    rectangle's half-height is set to half the least pole height; when lam is
    positive real and its logarithm falls inside the frequency window there is
    no admissible rectangle and :class:`ContourDomainError` is raised.
    General x reduces by Phi(x+1) = lam Phi(x).  Gauss-Legendre per edge,
    order-doubled until two consecutive answers agree to ``rtol``.
    """
    if lam == 0:
        raise ValueError("lam must be nonzero")
    lam = complex(lam)
    k = math.floor(x)
    xr = x - k

    vals = [v for v, _ in spectrum.entries]
    re_lo = min(vals) - 1.0
    re_hi = max(vals) + 1.0

    arg = math.atan2(lam.imag, lam.real)
    heights = [arg + 2.0 * math.pi * m for m in range(-3, 4)]
    on_axis = [h for h in heights if abs(h) <= 1e-9]
    if on_axis:
        pole_re = math.log(abs(lam))
        if re_lo - 0.5 <= pole_re <= re_hi + 0.5:
            raise ContourDomainError(
                f"lam = {lam} puts a pole of 1/(1 - e^z/lam) on the real axis "
                "inside the frequency window; no admissible rectangle"
            )
    positive = [abs(h) for h in heights if abs(h) > 1e-9]
    h_c = min(math.pi - 0.05, 0.5 * min(positive))
    if h_c < 1e-3:
        raise ContourDomainError(f"contour half-height {h_c:.2e} too small for lam = {lam}")

    entries_sorted = spectrum.entries

    def integrand(z):
        lz = np.ones_like(z)
        for li, mult in entries_sorted:
            lz = lz * (z - li) ** mult
        return np.exp(z * xr) / (lz * (1.0 - np.exp(z) / lam))

    corners = [
        complex(re_lo, -h_c),
        complex(re_hi, -h_c),
        complex(re_hi, h_c),
        complex(re_lo, h_c),
    ]

    def loop_integral(order: int) -> complex:
        nodes, weights = np.polynomial.legendre.leggauss(order)
        total = 0.0j
        for a, b in zip(corners, corners[1:] + corners[:1]):
            mid = 0.5 * (a + b)
            half = 0.5 * (b - a)
            z = mid + half * nodes.astype(complex)
            total += half * np.sum(weights * integrand(z))
        return total

    prev = loop_integral(32)
    for order in (64, 128, 256, 512, 1024):
        cur = loop_integral(order)
        if abs(cur - prev) <= rtol * max(1.0, abs(cur)):
            prev = cur
            break
        prev = cur
    else:
        raise ConvergenceError("contour quadrature failed to settle")

    _, beta = _system_float(spectrum)
    b = 0.0j
    for j, bj in enumerate(beta):
        b += bj * lam ** (-j)
    result = complex(lam**k * b * prev / (2.0j * math.pi))
    if lam.imag == 0.0 and abs(result.imag) < 1e-8 * (1.0 + abs(result.real)):
        # real lam gives a real Phi; drop the quadrature's imaginary dust
        return result.real
    return result
