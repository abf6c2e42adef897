"""Series coefficients c_n computed from the extended initial data.

Two independent integral formulas produce the same table:

    c_n = 1/(4 n pi i) * int_0^{L2}   (slope~ + velocity~) e^{-n pi i (1-v) x / L} dx
        = 1/(4 n pi i) * int_{-L1}^{L} (slope~ - velocity~) e^{+n pi i (1+v) x / L} dx

where slope~/velocity~ are the reflected extensions at t = 0.  Both are
always computed and cross-checked; the residual is the cheapest end-to-end
test of the extension module and guards against sign or normalization
slips.  Quadrature splits at the branch boundaries (x = L for the first
form, x = 0 for the second) plus any data knots mapped through the branch
argument maps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import DerivedConstants, InitialData, StringConfig, derive_constants, initial_data
from .extension import ExtensionField
from .quadrature import Panelization, require_finite

__all__ = [
    "SpectralSolution",
    "ParsevalSums",
    "coefficients_plus",
    "coefficients_minus",
    "solve",
    "parseval_sum",
]


def mode_numbers(n_max: int) -> np.ndarray:
    """Mode index order used everywhere: -n_max..-1 then 1..n_max (no 0)."""
    return np.concatenate([np.arange(-n_max, 0), np.arange(1, n_max + 1)])


def _mapped_knots(data: InitialData, consts: DerivedConstants, side: str) -> list[float]:
    """Preimages of data knots under the branch argument maps (quadrature cuts)."""
    g, L, v = consts.gamma_v, consts.L, consts.v
    cuts = []
    for k in data.knots:
        if side == "plus":
            cuts.append(k)                              # middle branch
            cuts.append(g * (2.0 * L / (1.0 + v) - k))  # right branch preimage
        else:
            cuts.append(k)
            cuts.append(-k / g)                         # left branch preimage
    return cuts


def _table(data: InitialData, consts: DerivedConstants, n_max: int,
           panels_per_unit: int, side: str) -> np.ndarray:
    """Coefficient table for one formula, ordered by mode_numbers(n_max)."""
    if side == "plus":
        a, b, cut = 0.0, consts.L2, consts.L
        sign_vel, omega_unit = +1.0, -math.pi * (1.0 - consts.v) / consts.L
    else:
        a, b, cut = -consts.L1, consts.L, 0.0
        sign_vel, omega_unit = -1.0, +math.pi * (1.0 + consts.v) / consts.L
    slope = ExtensionField("slope", data, consts)
    velocity = ExtensionField("velocity", data, consts)
    cuts = [cut, *_mapped_knots(data, consts, side)]
    p = Panelization(a, b, breakpoints=tuple(cuts), panels_per_unit=panels_per_unit)

    # One field evaluation per segment, reused for every n.
    weighted = []
    for seg in p.segments:
        g = (slope.on_segment(seg.nodes, (seg.lo, seg.hi))
             + sign_vel * velocity.on_segment(seg.nodes, (seg.lo, seg.hi)))
        require_finite(seg.nodes, g)
        weighted.append((seg.nodes, seg.weights * g))
    ns = mode_numbers(n_max)
    out = np.empty(len(ns), dtype=complex)
    for i, n in enumerate(ns):
        omega = omega_unit * n
        re, im = [], []
        for nodes, wg in weighted:
            kernel = np.exp(1j * omega * nodes)
            re.append(math.fsum((wg * kernel.real).tolist()))
            im.append(math.fsum((wg * kernel.imag).tolist()))
        integral = complex(math.fsum(re), math.fsum(im))
        out[i] = integral / (4.0 * n * math.pi * 1j)
    return out


def coefficients_plus(data: InitialData, consts: DerivedConstants, n_max: int,
                      panels_per_unit: int = 256) -> np.ndarray:
    """Table via the right-extended formula over (0, L2), split at x = L."""
    return _table(data, consts, n_max, panels_per_unit, "plus")


def coefficients_minus(data: InitialData, consts: DerivedConstants, n_max: int,
                       panels_per_unit: int = 256) -> np.ndarray:
    """Table via the left-extended formula over (-L1, L), split at x = 0."""
    return _table(data, consts, n_max, panels_per_unit, "minus")


@dataclass(frozen=True, eq=False)
class SpectralSolution:
    """Truncated coefficient table plus everything needed to evaluate it.

    ``c`` is the canonical table (the right-extended formula);
    ``cross_check_residual`` is max_n |c_n(+) - c_n(-)|.
    """

    cfg: StringConfig
    consts: DerivedConstants
    data: InitialData
    n: np.ndarray
    c: np.ndarray
    c_plus: np.ndarray
    c_minus: np.ndarray
    cross_check_residual: float

    @property
    def n_max(self) -> int:
        return int(self.n[-1])

    def coefficient(self, n: int) -> complex:
        idx = n + self.n_max if n < 0 else n + self.n_max - 1
        if n == 0 or not (0 <= idx < len(self.n)):
            raise ValueError(f"mode {n} outside table (|n| in 1..{self.n_max})")
        return complex(self.c[idx])


def solve(cfg: StringConfig) -> SpectralSolution:
    """Build the truncated spectral solution for a configuration."""
    consts = derive_constants(cfg)
    data = initial_data(cfg)
    ppu = cfg.quadrature.panels_per_unit
    cp = coefficients_plus(data, consts, cfg.n_max, ppu)
    cm = coefficients_minus(data, consts, cfg.n_max, ppu)
    return SpectralSolution(
        cfg=cfg,
        consts=consts,
        data=data,
        n=mode_numbers(cfg.n_max),
        c=cp,
        c_plus=cp,
        c_minus=cm,
        cross_check_residual=float(np.max(np.abs(cp - cm))),
    )


@dataclass(frozen=True)
class ParsevalSums:
    """The weighted coefficient sum and its two integral forms.

    ``table_sum`` is Sum |n c_n|^2 over the truncated table; the integral
    forms are computed from the raw extended data and therefore carry the
    full spectrum.  Their difference is the truncation tail, reported, not
    asserted away.
    """

    table_sum: float
    integral_plus: float
    integral_minus: float

    @property
    def truncation_fraction(self) -> float:
        if self.integral_plus == 0.0:
            return 0.0
        return abs(self.integral_plus - self.table_sum) / self.integral_plus


def parseval_sum(sol: SpectralSolution) -> ParsevalSums:
    """Sum |n c_n|^2 from the table and from both extended-data integrals."""
    table = math.fsum((np.abs(sol.n * sol.c) ** 2).tolist())
    consts, data = sol.consts, sol.data
    ppu = sol.cfg.quadrature.panels_per_unit
    slope = ExtensionField("slope", data, consts)
    velocity = ExtensionField("velocity", data, consts)

    def squared(sign_vel, a, b, cut, side):
        p = Panelization(a, b, breakpoints=tuple([cut, *_mapped_knots(data, consts, side)]),
                         panels_per_unit=ppu)
        total = []
        for seg in p.segments:
            g = (slope.on_segment(seg.nodes, (seg.lo, seg.hi))
                 + sign_vel * velocity.on_segment(seg.nodes, (seg.lo, seg.hi)))
            require_finite(seg.nodes, g)
            total.append(math.fsum((seg.weights * g * g).tolist()))
        return math.fsum(total)

    L, v = consts.L, consts.v
    plus = L / (8.0 * math.pi ** 2 * (1.0 - v)) * squared(+1.0, 0.0, consts.L2, L, "plus")
    minus = L / (8.0 * math.pi ** 2 * (1.0 + v)) * squared(-1.0, -consts.L1, L, 0.0, "minus")
    return ParsevalSums(table_sum=table, integral_plus=plus, integral_minus=minus)
