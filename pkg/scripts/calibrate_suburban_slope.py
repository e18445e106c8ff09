#!/usr/bin/env python3
"""Derive the suburban one-slope coefficients bundled with ghent_suburban.

The suburban propagation model is an empirical one-slope fit whose source
measurement campaign is not available in closed form, so the bundled
coefficients are anchored to published study results instead:

  anchor A: the 802.22b station reaches 7.0 km at its lowest MCS
            (1/2 QPSK, SNR 4.3 dB) under the suburban link budget;
  anchor B: the LTE station reaches 3.2 km (+/-10%) at 1/2 QPSK;
  anchor C: the per-MCS station-count sweep must select 1/2 16-QAM for
            LTE and 2/3 16-QAM for the 802.22 family in this environment.

Anchor A pins pl0 once the exponent n is chosen.  Anchors B and C bound n
from both sides: B gives an upper bound (larger n shrinks the LTE range
below tolerance), C a lower bound (smaller n enlarges mid-tier ranges until
the LTE sweep optimum drifts off 1/2 16-QAM).  The midpoint of the feasible
window is rounded to n = 1.79.

Run this script to reproduce the window and the bundled values.
"""

import math

from tvwsplan.link_budget import (EnvironmentMargins, load_technology,
                                  max_allowable_path_loss_db)
from tvwsplan.propagation import one_slope
from tvwsplan.sizing import sweep_mcs

MARGINS = EnvironmentMargins(shadow_margin_db=7.91, fade_margin_db=7.37)
AREA_KM2 = 68.0
DEMAND_MBPS = 224 * (0.91 * 1.0 + 0.09 * 0.064)
ANCHOR_22B_KM = 7.0
ANCHOR_LTE_KM = 3.2
LTE_TOL = 0.10

p22b = load_technology("802.22b", "suburban")
plte = load_technology("lte", "suburban")
pl_22b_t0 = max_allowable_path_loss_db(p22b, MARGINS, p22b.mcs_table[0])
pl_lte_t0 = max_allowable_path_loss_db(plte, MARGINS, plte.mcs_table[0])


def pl0_for(n: float) -> float:
    return pl_22b_t0 - 10.0 * n * math.log10(ANCHOR_22B_KM)


def feasible(n: float) -> bool:
    model = one_slope(pl0_for(n), 1.0, n)
    lte_range = 10.0 ** ((pl_lte_t0 - model.pl0_db) / (10.0 * n))
    if abs(lte_range - ANCHOR_LTE_KM) > LTE_TOL * ANCHOR_LTE_KM:
        return False
    for tech, want in (("802.22", "2/3 16-QAM"), ("802.22b", "2/3 16-QAM"),
                       ("802.11af", "3/4 16-QAM"), ("lte", "1/2 16-QAM")):
        prof = load_technology(tech, "suburban")
        try:
            rows = sweep_mcs(prof, MARGINS, model, AREA_KM2, DEMAND_MBPS)
        except ValueError:
            return False  # a tier's budget fell below the evaluation floor
        if next(r.mcs_label for r in rows if r.is_optimal) != want:
            return False
    return True


def main():
    lo, hi = None, None
    n = 1.40
    while n <= 2.20:
        if feasible(n):
            lo = n if lo is None else lo
            hi = n
        n = round(n + 0.005, 3)
    if lo is None:
        raise SystemExit("no feasible exponent window")
    mid = round(0.5 * (lo + hi), 2)
    print(f"feasible exponent window: [{lo:.3f}, {hi:.3f}]")
    print(f"chosen exponent n = {mid}")
    print(f"pl0(1 km) = {pl0_for(mid):.6f} dB")
    print("bundled values: exponent 1.79, pl0 114.927123 dB "
          "(calibration id suburban-oneslope-v1)")


if __name__ == "__main__":
    main()
