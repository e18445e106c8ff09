#!/usr/bin/env python3
"""The coverage/capacity trade-off behind MCS selection.

Sweeps every deployable MCS per technology and environment, printing the
area-driven and load-driven station-count bounds and the selected optimum
(minimum combined bound, ties resolved toward the larger range).
"""

from tvwsplan import bundled_scenario, load_technology, sweep_mcs

for env, scen in (("suburban", "ghent_suburban"), ("rural", "boyeros_rural")):
    sc = bundled_scenario(scen)
    demand = sc.population.expected_demand_mbps
    print(f"\n=== {env}: area {sc.region.area_km2:.0f} km^2, "
          f"expected demand {demand:.1f} Mbps ===")
    for tech in ("802.22", "802.22b", "802.11af", "lte"):
        profile = load_technology(tech, env)
        rows = sweep_mcs(profile, sc.margins, sc.model_for(profile),
                         sc.region.area_km2, demand)
        print(f"\n{tech}")
        print(f"  {'MCS':12s} {'SNR':>5s} {'range':>8s} {'N_area':>6s} "
              f"{'N_load':>6s} {'N_min':>6s}")
        for r in rows:
            mark = "  <= optimum" if r.is_optimal else ""
            print(f"  {r.mcs_label:12s} {r.required_snr_db:5.1f} "
                  f"{r.range_km:7.3f} {r.n_bs_area:6d} {r.n_bs_load:6d} "
                  f"{r.n_bs_min:6d}{mark}")
