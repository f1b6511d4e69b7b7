"""Order-of-magnitude estimate for a pair of beta-decaying nucleons.

The dimensionless negativity of two fermionic detectors is
N = n * lambda^2 Delta^2 / T, where n is the value reported by a sweep in
units of the switching time. The estimate takes the largest n of a gap sweep
at neutrino mass zero and the largest n of a phase-vector sweep at the same
mass, then restores units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..twodetector import scan_peak
from .config import SweepSpec
from .presets import AZ, GAP, _lin, make_spec
from .sweep import run_sweep

GAP_MEV = 0.78              # m_n - m_p - m_e
COUPLING_MEV = 0.82e-5 * 1e-6  # 0.82e-5 GeV^-2 in MeV^-2
DELTA2_MEV3 = 0.511 ** 3    # Delta = m_e^(3/2)


def baseline_spec() -> SweepSpec:
    return make_spec("beta-baseline", "DiracFermion", mass=0.0, sigma=0.2, L=5.0,
                     axes=[(GAP, _lin(0.25, 8.0, 32))])


def enhanced_spec() -> SweepSpec:
    return make_spec("beta-enhanced", "DiracFermion", mass=0.0, sigma=0.5, L=5.0, gap=4.0,
                     axes=[(AZ, _lin(-8.0, 8.0, 65))])


@dataclass(frozen=True)
class BetaDecayReport:
    coupling: float
    delta2: float
    gap: float
    unit: float               # lambda^2 Delta^2 / T with Omega T = 1
    baseline_peak: float      # in units of lambda^2 Delta^2 / T
    baseline_at: float        # gap of the peak, in 1/T
    enhanced_peak: float
    enhanced_at: float        # a_z of the peak, in 1/T
    baseline: float           # dimensionless negativity
    enhanced: float

    @property
    def exponent(self) -> int | None:
        return None if self.baseline <= 0 else math.floor(math.log10(self.baseline))

    @property
    def enhanced_exponent(self) -> int | None:
        return None if self.enhanced <= 0 else math.floor(math.log10(self.enhanced))

    @property
    def ratio(self) -> float:
        return self.enhanced / self.baseline if self.baseline > 0 else float("nan")

    def lines(self) -> list:
        def e(x):
            return "none" if x is None else f"1e{x}"
        return [
            "beta-decay entanglement estimate",
            f"  gap Omega                 = {self.gap:g} MeV  (Omega T = 1, T = {1 / self.gap:.4g} MeV^-1)",
            f"  coupling lambda           = {self.coupling:.4g} MeV^-2",
            f"  Delta^2                   = {self.delta2:.4g} MeV^3",
            f"  lambda^2 Delta^2 / T      = {self.unit:.4g}",
            f"  peak of gap sweep         = {self.baseline_peak:.4g} lambda^2 Delta^2/T at Omega T = {self.baseline_at:g}",
            f"  peak of phase sweep       = {self.enhanced_peak:.4g} lambda^2 Delta^2/T at a_z T = {self.enhanced_at:g}",
            f"  negativity, real smearing = {self.baseline:.3e}  (order {e(self.exponent)})",
            f"  negativity, phase vector  = {self.enhanced:.3e}  (order {e(self.enhanced_exponent)})",
            f"  enhancement ratio         = {self.ratio:.4g}",
        ]


def beta_decay_estimate(coupling: float = COUPLING_MEV, delta2: float = DELTA2_MEV3,
                        gap: float = GAP_MEV, workers: int = 1) -> BetaDecayReport:
    unit = coupling ** 2 * delta2 * gap
    base_spec, enh_spec = baseline_spec(), enhanced_spec()
    base = run_sweep(base_spec, workers)
    enh = run_sweep(enh_spec, workers)
    ib, at_b = scan_peak(base_spec.axes[0].values, [r.negativity for r in base])
    ie, at_e = scan_peak(enh_spec.axes[0].values, [r.negativity for r in enh])
    nb, ne = base[ib].negativity, enh[ie].negativity
    return BetaDecayReport(coupling, delta2, gap, unit, nb, at_b, ne, at_e, nb * unit, ne * unit)
