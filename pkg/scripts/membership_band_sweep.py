"""Membership residuals against the band limit s_max.

Shows why the default is 12/pi: wider bands amplify the periodic wrap of
psi(q) (which tends to -1 and +1 at the two ends of the grid) by e^{pi s/2}.
"""

import math

import numpy as np

from modstrip import standardpair as sp
from modstrip.inner import Domain, InnerFunction


def main():
    sym = InnerFunction.blaschke([1j], Domain.STRIP)
    non = InnerFunction.blaschke([1 + 1j], Domain.STRIP)
    base = sp.RapidityGrid()
    samples = sp.projected_samples(base, 16, seed=1)
    for s_max in (2.0, 12 / math.pi, 5.0, 6.0, 8.0):
        grid = sp.RapidityGrid(s_max=s_max)
        m_sym = sp.boundary_multiplier(sym, grid)
        m_non = sp.boundary_multiplier(non, grid)
        r_sym = max(sp.membership_residual(sp.WaveFunction(grid, m_sym * f.values)).residual for f in samples)
        r_non = min(sp.membership_residual(sp.WaveFunction(grid, m_non * f.values)).residual for f in samples)
        q = grid.q
        r_ex = sp.membership_residual(sp.WaveFunction(grid, np.exp(-(q**2) + 1j * math.pi * q))).residual
        print(f"s_max {s_max:5.3f}   e^(-q^2+i pi q) {r_ex:.1e}   symmetric max {r_sym:.1e}   non-symmetric min {r_non:.2f}")


if __name__ == "__main__":
    main()
