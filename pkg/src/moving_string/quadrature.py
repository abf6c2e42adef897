"""Deterministic composite Simpson quadrature with mandatory breakpoints.

Integrands here are smooth between known breakpoints (extension branch
boundaries, bump knots), so a fixed composite rule beats adaptivity: the
node set is a pure function of the interval, the breakpoints and the panel
density, and results are reproducible bit-for-bit.  Each panel spans two
equal sub-intervals; every segment between breakpoints gets at least one
panel, i.e. an even sub-interval count >= 2.

Sums are accumulated with ``math.fsum`` (exactly rounded, order
independent), which is stronger than any fixed summation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericError

__all__ = ["Panelization", "Segment", "integrate"]


@dataclass(frozen=True, eq=False)
class Segment:
    lo: float
    hi: float
    nodes: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True, eq=False)
class Panelization:
    """Simpson node/weight layout for (a, b) split at interior breakpoints.

    ``min_panels_per_segment`` forces short segments (e.g. around narrow
    bump knots) to still carry enough panels for full-order accuracy.
    """

    a: float
    b: float
    breakpoints: tuple = ()
    panels_per_unit: int = 256
    min_panels_per_segment: int = 1

    def __post_init__(self) -> None:
        if not (self.a < self.b):
            raise ValueError(f"need a < b, got ({self.a}, {self.b})")
        if self.panels_per_unit < 1 or self.min_panels_per_segment < 1:
            raise ValueError("panel densities must be >= 1")
        cuts = sorted({float(c) for c in self.breakpoints if self.a < c < self.b})
        object.__setattr__(self, "breakpoints", tuple(cuts))
        edges = [self.a, *cuts, self.b]
        segments = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            m = 2 * max(self.min_panels_per_segment,
                        math.ceil(self.panels_per_unit * (hi - lo)))
            nodes = lo + (hi - lo) / m * np.arange(m + 1)
            w = np.ones(m + 1)
            w[1:-1:2] = 4.0
            w[2:-1:2] = 2.0
            w *= (hi - lo) / (3.0 * m)
            segments.append(Segment(lo, hi, nodes, w))
        object.__setattr__(self, "segments", tuple(segments))

    @property
    def node_count(self) -> int:
        return sum(len(s.nodes) for s in self.segments)


def require_finite(nodes: np.ndarray, values: np.ndarray) -> None:
    """Raise NumericError naming the first node whose value is non-finite."""
    bad = ~np.isfinite(values)
    if np.any(bad):
        node = np.asarray(nodes)[np.argmax(bad)]
        raise NumericError(f"integrand non-finite at node x = {node!r}")


def _fsum_weighted(weights: np.ndarray, values: np.ndarray):
    if np.iscomplexobj(values):
        return complex(
            math.fsum((weights * values.real).tolist()),
            math.fsum((weights * values.imag).tolist()),
        )
    return math.fsum((weights * values).tolist())


def integrate(f, p: Panelization):
    """Composite Simpson integral of ``f`` over ``p``.

    ``f(x, (lo, hi))`` is called once per smooth segment with the array of
    that segment's nodes; the segment bounds let piecewise integrands
    resolve one-sided limits at shared endpoints.  Raises NumericError if
    any node evaluates non-finite.
    """
    parts = []
    for seg in p.segments:
        vals = np.asarray(f(seg.nodes, (seg.lo, seg.hi)))
        require_finite(seg.nodes, vals)
        parts.append(_fsum_weighted(seg.weights, vals))
    if any(isinstance(v, complex) for v in parts):
        return complex(
            math.fsum(v.real for v in parts), math.fsum(v.imag for v in parts)
        )
    return math.fsum(parts)
