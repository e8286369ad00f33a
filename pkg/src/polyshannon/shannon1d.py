"""Shannon-type interpolation kernels for cardinal exponential-spline spaces.

The space V_0 spanned by the integer translates of a TB-spline Q_N admits a
unique interpolating generator S_0 (the Shannon-type kernel of the space):
S_0(j) = delta_j and

    S_0^(xi) = Q^(xi) / phi*(xi),      phi*(xi) = sum_{m=1}^{N-1} Q_N(m) e^{-i xi m},

provided the sampled symbol phi* has no zeros on the circle (true for
symmetric spectra of even order; famously false for odd-order classical
splines).  Reconstruction of f in V_0 from its integer samples is then the
cardinal series sum_j f(j) S_0(. - j).

Kernels are materialized as uniform tables by a *folded* DFT: with grid step
h = 1/per_unit, the DFT of the h-samples of Q equals the exact periodization
of Q^ (Poisson, finite sum -- no truncation error), and phi* is 2 pi periodic
while the fold period is 2 pi per_unit, so dividing bin-by-bin and inverting
gives S_0's h-samples exactly up to time-domain periodization (period `span`,
hundreds of units -- far beyond the kernel's exponential decay).  The same
machinery with the Gram symbol as divisor produces the dual generator, whose
translates biorthogonalize those of Q.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .spectrum import SpectrumVector
from .tables import interp6
from .tbspline import _qn_grid, tb_exact, tb_fourier, tb_integer_values

__all__ = [
    "KernelTable",
    "NotSamplableError",
    "SamplingGrid",
    "autocorrelation",
    "cardinal_series",
    "dual_fourier",
    "gram_symbol",
    "kernel_fourier",
    "sampled_symbol",
    "symbol_margin",
    "synthesize_dual",
    "synthesize_kernel",
    "tb_superposition",
]


class NotSamplableError(ValueError):
    """The sampled symbol (nearly) vanishes: integer samples cannot determine V_0."""


@dataclass(frozen=True)
class SamplingGrid:
    """Synthesis grid: step 1/per_unit in time, periodization after `span` units."""

    per_unit: int = 64
    span: int = 256

    def __post_init__(self) -> None:
        if self.per_unit < 8:
            raise ValueError("per_unit must be at least 8")
        if self.span < 32:
            raise ValueError("span must be at least 32")

    @property
    def size(self) -> int:
        return self.per_unit * self.span


def sampled_symbol(spectrum: SpectrumVector, xi):
    """phi*(xi) = sum_{m=1}^{N-1} Q_N(m) e^{-i xi m} (raw TB normalization)."""
    xi_arr = np.asarray(xi, dtype=float)
    scalar = xi_arr.ndim == 0
    xi_arr = np.atleast_1d(xi_arr)
    qm = tb_integer_values(spectrum)
    out = np.zeros(xi_arr.shape, dtype=complex)
    for m, q in enumerate(qm, start=1):
        out += q * np.exp(-1j * xi_arr * m)
    return complex(out[0]) if scalar else out


@dataclass(frozen=True)
class SymbolMargin:
    min_abs: float
    max_abs: float

    @property
    def relative(self) -> float:
        return self.min_abs / self.max_abs if self.max_abs > 0.0 else 0.0


def symbol_margin(spectrum: SpectrumVector, n_grid: int = 4096) -> SymbolMargin:
    """min/max of |phi*| over a uniform circle grid (the sampling margin m*)."""
    xi = np.linspace(0.0, 2.0 * math.pi, n_grid, endpoint=False)
    vals = np.abs(sampled_symbol(spectrum, xi))
    return SymbolMargin(float(np.min(vals)), float(np.max(vals)))


def kernel_fourier(spectrum: SpectrumVector, xi):
    """S_0^(xi) = Q^(xi) / phi*(xi)."""
    return tb_fourier(spectrum, xi) / sampled_symbol(spectrum, xi)


def gram_symbol(spectrum: SpectrumVector, xi):
    """G(xi) = sum_k |Q^(xi + 2 pi k)|^2, closed up via the doubled spectrum.

    |Q^_Lambda|^2 = e^{i N xi} e^{-sum lambda} Q^_{Lambda u -Lambda}(xi), so the
    fold collapses (Poisson again) to integer samples of the order-2N spline
    of the symmetrized multiset:

        G(xi) = e^{-sum lambda} sum_{m=1}^{2N-1} Q_{2N}(m) e^{i xi (N - m)}.

    Real and bounded away from zero: the Riesz function of the basis.
    """
    xi_arr = np.asarray(xi, dtype=float)
    scalar = xi_arr.ndim == 0
    xi_arr = np.atleast_1d(xi_arr)
    n = spectrum.order
    doubled = spectrum.symmetrized()
    qm = tb_integer_values(doubled)
    pref = math.exp(-spectrum.freq_sum())
    out = np.zeros(xi_arr.shape, dtype=complex)
    for m, q in enumerate(qm, start=1):
        out += q * np.exp(1j * xi_arr * (n - m))
    out *= pref
    vals = out.real
    return float(vals[0]) if scalar else vals


def autocorrelation(spectrum: SpectrumVector, tau: int) -> float:
    """<Q, Q(. - tau)> = e^{-sum lambda} Q_{2N}[sym](tau + N)."""
    n = spectrum.order
    doubled = spectrum.symmetrized()
    if not (-n < tau < n):
        return 0.0
    qm = tb_integer_values(doubled)
    return math.exp(-spectrum.freq_sum()) * qm[tau + n - 1]


def dual_fourier(spectrum: SpectrumVector, xi):
    """Fourier transform of the dual generator: Q^(xi) / G(xi)."""
    return tb_fourier(spectrum, xi) / gram_symbol(spectrum, xi)


# --------------------------------------------------------------------------
# kernel tables
# --------------------------------------------------------------------------

_KERNEL_KINDS = ("interp", "dual")
_MAGIC = b"PSKT"


@dataclass(frozen=True)
class KernelTable:
    """A synthesized kernel on the uniform grid t_min + l/per_unit.

    ``kind`` is "interp" (cardinal Shannon-type kernel) or "dual" (the
    biorthogonal generator).  Evaluation interpolates with a 6-point stencil
    confined between the integer knots; grid nodes reproduce stored values
    bit-exactly, queries beyond the table return 0.
    """

    spectrum: SpectrumVector
    kind: str
    per_unit: int
    t_min: int
    values: np.ndarray

    def __call__(self, t):
        return interp6(
            self.values, float(self.t_min), 1.0 / self.per_unit, t,
            knot_every=self.per_unit,
        )

    @property
    def t_max(self) -> float:
        return self.t_min + (len(self.values) - 1) / self.per_unit

    def save(self, path) -> None:
        """Write the table to ``path`` (documented little-endian layout).

        Header: magic "PSKT", u16 version=1, u8 kind, u8 pad, u16 entry
        count, u16 pad, u32 per_unit, i32 t_min, u64 value count; then per
        frequency entry (f64 value, u32 multiplicity, u32 pad); then the raw
        f64 values.  Floats round-trip bit-exactly.
        """
        head = struct.pack(
            "<4sHBBHHIiQ",
            _MAGIC,
            1,
            _KERNEL_KINDS.index(self.kind),
            0,
            len(self.spectrum.entries),
            0,
            self.per_unit,
            self.t_min,
            len(self.values),
        )
        body = b"".join(
            struct.pack("<dII", v, m, 0) for v, m in self.spectrum.entries
        )
        data = np.ascontiguousarray(self.values, dtype="<f8").tobytes()
        Path(path).write_bytes(head + body + data)

    @classmethod
    def load(cls, path) -> "KernelTable":
        raw = Path(path).read_bytes()
        head_size = struct.calcsize("<4sHBBHHIiQ")
        magic, version, kind_idx, _, n_entries, _, per_unit, t_min, n_values = (
            struct.unpack("<4sHBBHHIiQ", raw[:head_size])
        )
        if magic != _MAGIC or version != 1:
            raise ValueError(f"not a kernel table file: {path}")
        offset = head_size
        entries = []
        for _ in range(n_entries):
            v, m, _pad = struct.unpack("<dII", raw[offset : offset + 16])
            entries.append((v, m))
            offset += 16
        values = np.frombuffer(raw[offset:], dtype="<f8", count=n_values).copy()
        values.flags.writeable = False
        return cls(
            spectrum=SpectrumVector(tuple(entries)),
            kind=_KERNEL_KINDS[kind_idx],
            per_unit=per_unit,
            t_min=t_min,
            values=values,
        )


def _tiled_divisor(coeffs: dict[int, float], grid: SamplingGrid) -> np.ndarray:
    """sum_m c_m e^{-i xi m} at xi_j = 2 pi j / span, tiled to the full grid.

    The divisor is 2 pi periodic and the fold period is 2 pi per_unit, so the
    span-point circle evaluation repeats exactly per_unit times.
    """
    j = np.arange(grid.span)
    base = np.zeros(grid.span, dtype=complex)
    for m, c in coeffs.items():
        base += c * np.exp(-2j * math.pi * j * m / grid.span)
    return np.tile(base, grid.per_unit)


def _synthesize(
    spectrum: SpectrumVector,
    grid: SamplingGrid,
    half_width: int,
    divisor_coeffs: dict[int, float],
    rescale: float,
    kind: str,
) -> KernelTable:
    n = spectrum.order
    if half_width < n:
        raise ValueError(f"half_width must cover the generator support (>= {n})")
    if 2 * half_width >= grid.span:
        raise ValueError("half_width must be below span/2")

    divisor = _tiled_divisor(divisor_coeffs, grid)
    mags = np.abs(divisor)
    if mags.max() == 0.0 or mags.min() < 1e-9 * mags.max():
        raise NotSamplableError(
            f"sampling symbol of {spectrum} vanishes on the circle "
            f"(relative margin {0.0 if mags.max() == 0.0 else mags.min()/mags.max():.2e})"
        )

    qs = _qn_grid(spectrum, grid.per_unit)
    scale = float(np.max(np.abs(qs)))
    padded = np.zeros(grid.size)
    padded[: len(qs)] = qs / scale

    folded = np.fft.fft(padded)
    out = np.fft.ifft(folded / divisor).real

    npts = half_width * grid.per_unit
    values = np.concatenate([out[-npts:], out[: npts + 1]]) * rescale
    values.flags.writeable = False
    return KernelTable(
        spectrum=spectrum,
        kind=kind,
        per_unit=grid.per_unit,
        t_min=-half_width,
        values=values,
    )


def synthesize_kernel(
    spectrum: SpectrumVector,
    grid: SamplingGrid = SamplingGrid(),
    half_width: int = 30,
) -> KernelTable:
    """Materialize the Shannon-type interpolation kernel S_0 as a table.

    Raises :class:`NotSamplableError` when the sampled symbol has circle
    zeros (odd-order classical splines being the canonical offenders).
    """
    n = spectrum.order
    if n < 2:
        raise NotSamplableError("first-order spaces have an empty sampled symbol")
    qm = tb_integer_values(spectrum)
    scale = float(np.max(np.abs(_qn_grid(spectrum, grid.per_unit))))
    coeffs = {m: q / scale for m, q in enumerate(qm, start=1)}
    return _synthesize(spectrum, grid, half_width, coeffs, 1.0, "interp")


def synthesize_dual(
    spectrum: SpectrumVector,
    grid: SamplingGrid = SamplingGrid(),
    half_width: int = 30,
) -> KernelTable:
    """Materialize the dual generator (biorthogonal to the TB translates)."""
    n = spectrum.order
    doubled = spectrum.symmetrized()
    qm2 = tb_integer_values(doubled)
    scale = float(np.max(np.abs(_qn_grid(spectrum, grid.per_unit))))
    pref = math.exp(-spectrum.freq_sum())
    # G(xi) = pref * sum_m q2_m e^{i xi (n - m)}; as a divisor dictionary the
    # e^{-i xi m'} convention means m' = m - n
    coeffs = {m - n: pref * q / scale**2 for m, q in enumerate(qm2, start=1)}
    return _synthesize(spectrum, grid, half_width, coeffs, 1.0 / scale, "dual")


# --------------------------------------------------------------------------
# series evaluation
# --------------------------------------------------------------------------

def cardinal_series(table: KernelTable, j_min: int, coeffs, t):
    """sum_j c_j K(t - j) with j = j_min, j_min+1, ... (table handles decay)."""
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    t_arr = np.atleast_1d(t_arr)
    out = np.zeros_like(t_arr)
    for offset, c in enumerate(np.asarray(coeffs, dtype=float)):
        if c != 0.0:
            out += c * table(t_arr - (j_min + offset))
    return float(out[0]) if scalar else out


def tb_superposition(spectrum: SpectrumVector, j_min: int, coeffs, t):
    """sum_j c_j Q_N(t - j): an exact element of V_0, for ground-truth checks."""
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    t_arr = np.atleast_1d(t_arr)
    out = np.zeros_like(t_arr)
    for offset, c in enumerate(np.asarray(coeffs, dtype=float)):
        if c != 0.0:
            out += c * tb_exact(spectrum, t_arr - (j_min + offset))
    return float(out[0]) if scalar else out
