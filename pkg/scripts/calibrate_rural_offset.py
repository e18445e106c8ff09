#!/usr/bin/env python3
"""Derive the rural path-loss calibration offset bundled with boyeros_rural.

The rural model is the textbook Okumura-Hata open-area formula with the
small/medium-city mobile-antenna correction.  Published maximum coverage
ranges for this environment (17.6 km for the 802.22b station and 12.1 km
for LTE, both at 1/2 QPSK) sit a consistent ~1.78 dB below what the raw
formula plus the catalogued link budgets predict:

    implied_offset(tech) = PL_max(tech, 1/2 QPSK) - Hata(f_tech, anchor_km)

The two technologies operate on different carriers (605 vs 821 MHz), yet
their implied offsets agree to better than 0.01 dB, which identifies the
discrepancy as a frequency-flat environment term rather than a budget
error.  The bundled scenario therefore carries the mean implied offset as
`offset_db`; with it both anchors are reproduced to within 2 m.

Run this script to reproduce the number.
"""

from tvwsplan.link_budget import (EnvironmentMargins, load_technology,
                                  max_allowable_path_loss_db)
from tvwsplan.propagation import invert_range_km, okumura_hata_rural, path_loss_db

MARGINS = EnvironmentMargins(shadow_margin_db=5.5, fade_margin_db=4.0)
ANCHORS = {"802.22b": 17.6, "lte": 12.1}


def main():
    implied = {}
    for tech, anchor_km in ANCHORS.items():
        profile = load_technology(tech, "rural")
        model = okumura_hata_rural(profile.freq_mhz, 30.0, 3.0)
        pl_max = max_allowable_path_loss_db(profile, MARGINS, profile.mcs_table[0])
        implied[tech] = pl_max - path_loss_db(model, anchor_km)
        print(f"{tech:8s}: PL_max(1/2 QPSK) = {pl_max:.4f} dB, "
              f"implied offset = {implied[tech]:.6f} dB")
    spread = max(implied.values()) - min(implied.values())
    offset = sum(implied.values()) / len(implied)
    print(f"spread across carriers: {spread:.4f} dB (frequency-flat)")
    print(f"mean offset = {offset:.6f} dB")

    for tech, anchor_km in ANCHORS.items():
        profile = load_technology(tech, "rural")
        model = okumura_hata_rural(profile.freq_mhz, 30.0, 3.0, offset_db=offset)
        pl_max = max_allowable_path_loss_db(profile, MARGINS, profile.mcs_table[0])
        rng = invert_range_km(model, pl_max)
        print(f"{tech:8s}: range with offset = {rng:.4f} km "
              f"(anchor {anchor_km}, error {abs(rng - anchor_km)*1000:.1f} m)")
    print("bundled value: offset_db 1.784748 (calibration id rural-hata-offset-v1)")


if __name__ == "__main__":
    main()
