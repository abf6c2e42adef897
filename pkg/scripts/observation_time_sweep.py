#!/usr/bin/env python3
"""Empirical study of the boundary observation constant versus horizon.

For one observed endpoint the energy-recovery identity is available at
whole multiples of T_v = 2L/(1-v^2); below that, how much of the energy a
single sensor captures depends on the horizon.  This sweep prints the
captured fraction (1-v^2)^2/4 * integral / calE(0) for horizons between
the two-endpoint time L/(1-v) and the one-endpoint time T_v, where no
sharp statement is made: a fraction below 1 means the inverse bound with
the T_v constant fails at that horizon.

Usage: python scripts/observation_time_sweep.py [v] [n_horizons]
"""

import math
import sys

import numpy as np

from moving_string import (
    InitialDataSpec,
    StringConfig,
    observe_horizon,
    solve,
    spectral_energy,
)
from moving_string.cli import fmt


def run(v: float = 0.3, count: int = 9) -> None:
    cfg = StringConfig(
        L=math.pi,
        v=v,
        initial=InitialDataSpec.preset("sine_mode", amplitude=0.1, mode=1),
        n_max=40,
    )
    sol = solve(cfg)
    c = sol.consts
    e0 = spectral_energy(sol)
    factor = (1 - v * v) ** 2 / 4
    print(f"v = {v}: T_tilde_v = {fmt(c.T_tilde_v)}, T_v = {fmt(c.T_v)}")
    print("horizon T, captured fraction (>=1 means the T_v-constant bound holds)")
    for T in np.linspace(c.T_tilde_v, c.T_v, count):
        rep = observe_horizon(sol, "left", float(T))
        print(f"  {fmt(T)}  {fmt(factor * rep.integral / e0)}")


if __name__ == "__main__":
    v = float(sys.argv[1]) if len(sys.argv) > 1 else 0.3
    count = int(sys.argv[2]) if len(sys.argv) > 2 else 9
    run(v, count)
