"""Greedy power-minimising deployment and the Monte-Carlo campaign runner.

One run processes users in ascending id.  Each user tries the *active*
stations in ascending path-loss order and connects to the first with spare
capacity; failing that, the inactive site with the lowest path loss that can
serve the user is switched on.  Every activation triggers a single
re-balancing pass: already-connected users (ascending id) move to the new
site when their path loss there is strictly lower and capacity allows.
Users with no feasible site are counted uncovered; the run ends when all
users have been evaluated.

A run is strictly sequential (the greedy order is semantic).  Runs within a
campaign are independent, seeded `base_seed + run_index`, and may execute in
parallel; aggregation is order-insensitive.

Every accept/reject decision lands in an event log.  The independent
feasibility checker replays a run from scratch (fresh path-loss matrix,
fresh capacity accounting) and verifies the log, the assignment invariants
and the capacity bounds without sharing any planner state.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .link_budget import (EnvironmentMargins, TechnologyProfile,
                          max_allowable_path_loss_db)
from .power_energy import (BsPowerInput, MacroPowerParams, TvwsPowerParams,
                           macro_bs_power_w, tvws_bs_power_w)
from .propagation import PathLossModel, path_loss_array_db, path_loss_db
from .scenario import (Scenario, UserPopulation,
                       generate_population)
from .sizing import sweep_mcs

__all__ = [
    "PlannerConfig",
    "Deployment",
    "RunOutcome",
    "CampaignResult",
    "plan_single_run",
    "run_campaign",
    "grow_site_set",
    "check_deployment",
    "replay_event_log",
]

DEFAULT_RADIATED_POWER_W = 4.0  # per transmitter, 36 dBm


@dataclass(frozen=True)
class PlannerConfig:
    """Campaign controls.

    mcs_mode "fixed" plans every link at `mcs_label` (empty string selects
    the sizing sweep optimum); "adaptive" serves each user at the best MCS
    its path loss supports, charging airtime instead of bitrate.
    `rebalance_scope` is "new_site" (moves toward the newly activated site
    only) or "all_active" (any active site).
    """

    mcs_mode: str = "fixed"
    mcs_label: str = ""
    coverage_target_fraction: float = 0.95
    runs: int = 40
    base_seed: int = 1000
    mimo: bool = False
    rebalance_scope: str = "new_site"
    shuffle_user_order: bool = False  # robustness experiments only
    workers: int = 0  # 0 -> TVWSPLAN_WORKERS env var, else serial

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.mcs_mode not in ("fixed", "adaptive"):
            raise ValueError("mcs_mode must be 'fixed' or 'adaptive'")
        if self.rebalance_scope not in ("new_site", "all_active"):
            raise ValueError("rebalance_scope must be 'new_site' or 'all_active'")


@dataclass
class Deployment:
    active_sites: set
    assignments: dict            # user_id -> site_id
    per_site_served_mbps: dict   # site_id -> Mbps
    per_site_power_w: dict       # site_id -> W
    uncovered_users: set


@dataclass
class RunOutcome:
    seed: int
    coverage_fraction: float
    deployment: Deployment
    total_power_w: float
    served_mbps_total: float
    event_log: tuple = ()

    # duck-typed RunEnergy interface for network_energy_efficiency
    @property
    def served_mbps(self):
        return tuple(self.deployment.per_site_served_mbps[s]
                     for s in sorted(self.deployment.active_sites))

    @property
    def power_w(self):
        return tuple(self.deployment.per_site_power_w[s]
                     for s in sorted(self.deployment.active_sites))


@dataclass
class CampaignResult:
    outcomes: list
    mean_coverage: float
    std_coverage: float
    mean_power_w: float
    std_power_w: float
    mean_active_sites: float
    progressive_coverage: list  # running mean after each run
    sites: list
    planning_mcs_label: str


def _pl_matrix(pop: UserPopulation, sites, model: PathLossModel) -> np.ndarray:
    sx = np.array([s.x_km for s in sites])
    sy = np.array([s.y_km for s in sites])
    dx = pop.xy_km[:, 0][:, None] - sx[None, :]
    dy = pop.xy_km[:, 1][:, None] - sy[None, :]
    dist = np.maximum(np.hypot(dx, dy), model.min_distance_km)
    return path_loss_array_db(model, dist)


def _bs_power(power_params, n_tx: int) -> float:
    inp = BsPowerInput(n_sectors=1, n_transmitters=n_tx,
                       radiated_power_w=DEFAULT_RADIATED_POWER_W, load_factor=1.0)
    if isinstance(power_params, TvwsPowerParams):
        return tvws_bs_power_w(power_params, inp)
    if isinstance(power_params, MacroPowerParams):
        return macro_bs_power_w(power_params, inp)
    raise TypeError(f"unsupported power parameter type {type(power_params)!r}")


def _planning_mcs(scenario, profile, margins, model, config) -> str:
    if config.mcs_mode == "fixed" and config.mcs_label:
        mcs = profile.mcs(config.mcs_label)
        if not mcs.deployable:
            raise ValueError(f"MCS {mcs.label!r} is not deployable on "
                             f"{profile.name} hardware")
        return mcs.label
    rows = sweep_mcs(profile, margins, model, scenario.region.area_km2,
                     scenario.population.expected_demand_mbps)
    return next(r.mcs_label for r in rows if r.is_optimal)


def plan_single_run(scenario: Scenario, profile: TechnologyProfile,
                    margins: EnvironmentMargins, model: PathLossModel,
                    power_params, config: PlannerConfig, seed: int,
                    sites=None) -> RunOutcome:
    """One greedy deployment for the user population drawn with `seed`."""
    sites = list(sites) if sites is not None else _sites_for(scenario)
    if not sites:
        raise ValueError("candidate site list is empty")
    pop = generate_population(scenario.region, scenario.population, seed)
    mcs_label = _planning_mcs(scenario, profile, margins, model, config)
    return _greedy_plan(pop, sites, profile, margins, model,
                        power_params, config, mcs_label, seed)


def _greedy_plan(pop, sites, profile, margins, model, power_params,
                 config, mcs_label, seed) -> RunOutcome:
    n_users = len(pop)
    n_sites = len(sites)
    site_ids = [s.id for s in sites]
    pl = _pl_matrix(pop, sites, model)

    fixed = config.mcs_mode == "fixed"
    if fixed:
        mcs = profile.mcs(mcs_label)
        pl_max = max_allowable_path_loss_db(profile, margins, mcs)
        capacity = mcs.bitrate_at(profile.bandwidth_mhz)
    else:
        # adaptive: per-link MCS = highest-rate tier whose budget covers the
        # link; capacity is airtime (sum of demand/bitrate <= 1)
        tiers = [(m, max_allowable_path_loss_db(profile, margins, m),
                  m.bitrate_at(profile.bandwidth_mhz))
                 for m in profile.deployable_mcs()]
        pl_max = max(t[1] for t in tiers)
        capacity = 1.0

    def link_cost(u, j):
        """Capacity consumed at site j by user u, or None if out of range."""
        if pl[u, j] > pl_max:
            return None
        if fixed:
            return float(pop.demand_mbps[u])
        best = None
        for m, lim, rate in tiers:
            if pl[u, j] <= lim:
                best = rate  # tiers ascend in SNR, descend in range
        if best is None:
            return None
        return float(pop.demand_mbps[u]) / best

    order = list(range(n_users))
    if config.shuffle_user_order:
        np.random.Generator(np.random.PCG64(seed ^ 0x5EED)).shuffle(order)

    active = []                  # site indices, activation order
    load = np.zeros(n_sites)     # consumed capacity
    assign = {}                  # user index -> site index
    uncovered = []
    log = []

    nearest = np.argsort(pl, axis=1, kind="stable")

    def try_connect(u):
        # active sites in ascending path loss
        for j in sorted(active, key=lambda j: (pl[u, j], j)):
            cost = link_cost(u, j)
            if cost is None:
                continue
            if load[j] + cost <= capacity + 1e-9:
                assign[u] = j
                load[j] += cost
                log.append(("connect", int(pop.ids[u]), site_ids[j]))
                return True
            log.append(("reject_capacity", int(pop.ids[u]), site_ids[j]))
        return False

    def rebalance(new_j):
        # one pass over connected users in ascending id; move toward the new
        # site (or any better active site in 'all_active' scope)
        targets = [new_j] if config.rebalance_scope == "new_site" else list(active)
        for u in sorted(assign):
            cur = assign[u]
            for j in sorted(targets, key=lambda j: (pl[u, j], j)):
                if j == cur or pl[u, j] >= pl[u, cur]:
                    continue
                cost = link_cost(u, j)
                if cost is None:
                    continue
                if load[j] + cost <= capacity + 1e-9:
                    old_cost = link_cost(u, cur)
                    load[cur] -= old_cost
                    load[j] += cost
                    assign[u] = j
                    log.append(("switch", int(pop.ids[u]), site_ids[cur], site_ids[j]))
                    break
                log.append(("switch_reject", int(pop.ids[u]), site_ids[j]))

    for u in order:
        if try_connect(u):
            continue
        # activate the lowest-path-loss inactive site able to serve the user
        chosen = None
        for j in nearest[u]:
            j = int(j)
            if j in active:
                continue
            cost = link_cost(u, j)
            if cost is not None and cost <= capacity + 1e-9:
                chosen = j
                break
        if chosen is None:
            uncovered.append(u)
            log.append(("uncovered", int(pop.ids[u])))
            continue
        active.append(chosen)
        log.append(("activate", site_ids[chosen]))
        assign[u] = chosen
        load[chosen] += link_cost(u, chosen)
        log.append(("connect", int(pop.ids[u]), site_ids[chosen]))
        rebalance(chosen)

    bs_power = _bs_power(power_params, profile.n_transmitters)
    served = {site_ids[j]: 0.0 for j in active}
    for u, j in assign.items():
        served[site_ids[j]] += float(pop.demand_mbps[u])
    deployment = Deployment(
        active_sites={site_ids[j] for j in active},
        assignments={int(pop.ids[u]): site_ids[j] for u, j in assign.items()},
        per_site_served_mbps=served,
        per_site_power_w={site_ids[j]: bs_power for j in active},
        uncovered_users={int(pop.ids[u]) for u in uncovered})
    coverage = 1.0 - len(uncovered) / n_users if n_users else 1.0
    return RunOutcome(seed=seed, coverage_fraction=coverage, deployment=deployment,
                      total_power_w=bs_power * len(active),
                      served_mbps_total=sum(served.values()),
                      event_log=tuple(log))


def _sites_for(scenario: Scenario) -> list:
    policy = scenario.site_policy
    if policy.mode == "explicit":
        return scenario.explicit_sites()
    if policy.mode == "lattice":
        return scenario.lattice_sites(policy.count)
    raise ValueError("auto_grow scenarios need grow_site_set() first")


def _run_one(args):
    scenario, profile, margins, model, power_params, config, seed, sites = args
    return plan_single_run(scenario, profile, margins, model, power_params,
                           config, seed, sites=sites)


def run_campaign(scenario: Scenario, profile: TechnologyProfile,
                 margins: EnvironmentMargins, model: PathLossModel,
                 power_params, config: PlannerConfig, sites=None) -> CampaignResult:
    """`config.runs` independent runs with seeds base_seed + i."""
    sites = list(sites) if sites is not None else _sites_for(scenario)
    mcs_label = _planning_mcs(scenario, profile, margins, model, config)
    seeds = [config.base_seed + i for i in range(config.runs)]
    jobs = [(scenario, profile, margins, model, power_params, config, s, sites)
            for s in seeds]

    workers = config.workers or int(os.environ.get("TVWSPLAN_WORKERS", "1"))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_one, jobs))
    else:
        outcomes = [_run_one(j) for j in jobs]

    cov = np.array([o.coverage_fraction for o in outcomes])
    pow_ = np.array([o.total_power_w for o in outcomes])
    act = np.array([len(o.deployment.active_sites) for o in outcomes])
    progressive = list(np.cumsum(cov) / np.arange(1, len(cov) + 1))
    return CampaignResult(
        outcomes=outcomes,
        mean_coverage=float(cov.mean()),
        std_coverage=float(cov.std(ddof=0)),
        mean_power_w=float(pow_.mean()),
        std_power_w=float(pow_.std(ddof=0)),
        mean_active_sites=float(act.mean()),
        progressive_coverage=[float(x) for x in progressive],
        sites=sites,
        planning_mcs_label=mcs_label)


def grow_site_set(scenario: Scenario, profile: TechnologyProfile,
                  margins: EnvironmentMargins, model: PathLossModel,
                  power_params, config: PlannerConfig,
                  target_coverage: float | None = None):
    """Densify the candidate lattice until pilot coverage beats the target.

    Starts from the sizing lower bound for the planning MCS and densifies
    the jittered lattice in batches of roughly 30% of that bound (at least
    one site), replanning a pilot campaign (`site_policy.pilot_runs` runs)
    at each step.  Returns (sites, history) where history rows are
    (count, mean_coverage).  Raises once the growth cap is hit, reporting
    the best coverage achieved.
    """
    policy = scenario.site_policy
    target = target_coverage if target_coverage is not None else policy.target_coverage
    rows = sweep_mcs(profile, margins, model, scenario.region.area_km2,
                     scenario.population.expected_demand_mbps)
    if config.mcs_mode == "fixed" and config.mcs_label:
        try:
            start = next(r.n_bs_min for r in rows
                         if r.mcs_label == config.mcs_label)
        except StopIteration:
            raise ValueError(f"MCS {config.mcs_label!r} is not a deployable "
                             f"tier of {profile.name}") from None
    else:
        start = next(r.n_bs_min for r in rows if r.is_optimal)

    pilot = PlannerConfig(mcs_mode=config.mcs_mode, mcs_label=config.mcs_label,
                          coverage_target_fraction=target,
                          runs=policy.pilot_runs, base_seed=config.base_seed,
                          mimo=config.mimo, rebalance_scope=config.rebalance_scope,
                          workers=config.workers)
    history = []
    best = (0.0, None)
    count = max(1, start)
    step = max(1, int(0.3 * count + 0.5))
    while count <= policy.max_sites:
        sites = scenario.lattice_sites(count)
        result = run_campaign(scenario, profile, margins, model, power_params,
                              pilot, sites=sites)
        history.append((count, result.mean_coverage))
        if result.mean_coverage > best[0]:
            best = (result.mean_coverage, sites)
        if result.mean_coverage > target:
            return sites, history
        count += step
    raise RuntimeError(
        f"site growth cap {policy.max_sites} reached; best mean coverage "
        f"{best[0]:.4f} < target {target}")


# ---------------------------------------------------------------------------
# independent feasibility checking
# ---------------------------------------------------------------------------

def check_deployment(outcome: RunOutcome, scenario: Scenario,
                     profile: TechnologyProfile, margins: EnvironmentMargins,
                     model: PathLossModel, config: PlannerConfig, sites) -> list:
    """Re-derive every invariant from scratch; returns a list of violations."""
    problems = []
    dep = outcome.deployment
    pop = generate_population(scenario.region, scenario.population, outcome.seed)
    site_by_id = {s.id: s for s in sites}
    demand = {int(i): float(d) for i, d in zip(pop.ids, pop.demand_mbps)}

    if config.mcs_mode == "fixed":
        label = config.mcs_label or None
        mcs = profile.mcs(label) if label else None
        if mcs is None:
            rows = sweep_mcs(profile, margins, model, scenario.region.area_km2,
                             scenario.population.expected_demand_mbps)
            mcs = profile.mcs(next(r.mcs_label for r in rows if r.is_optimal))
        pl_max = max_allowable_path_loss_db(profile, margins, mcs)
        cap = mcs.bitrate_at(profile.bandwidth_mhz)
    else:
        tiers = [(max_allowable_path_loss_db(profile, margins, m),
                  m.bitrate_at(profile.bandwidth_mhz))
                 for m in profile.deployable_mcs()]
        pl_max = max(t[0] for t in tiers)
        cap = None

    def best_rate(pl: float):
        rate = None
        for lim, r in tiers:
            if pl <= lim:
                rate = r
        return rate

    pos = {int(i): (float(x), float(y)) for i, (x, y) in zip(pop.ids, pop.xy_km)}
    link_pl = {}
    for uid, sid in dep.assignments.items():
        if sid not in dep.active_sites:
            problems.append(f"user {uid} assigned to inactive site {sid}")
            continue
        s = site_by_id[sid]
        d = max(np.hypot(pos[uid][0] - s.x_km, pos[uid][1] - s.y_km),
                model.min_distance_km)
        link_pl[uid] = path_loss_db(model, d)
        if link_pl[uid] > pl_max + 1e-6:
            problems.append(f"user {uid} at site {sid} exceeds PL_max")

    served = {sid: 0.0 for sid in dep.active_sites}
    airtime = {sid: 0.0 for sid in dep.active_sites}
    for uid, sid in dep.assignments.items():
        served[sid] = served.get(sid, 0.0) + demand[uid]
        if cap is None and uid in link_pl:
            rate = best_rate(link_pl[uid])
            if rate is not None:
                airtime[sid] = airtime.get(sid, 0.0) + demand[uid] / rate
    for sid, s_mbps in served.items():
        if cap is not None and s_mbps > cap + 1e-6:
            problems.append(f"site {sid} serves {s_mbps:.3f} Mbps > capacity {cap}")
        if cap is None and airtime.get(sid, 0.0) > 1.0 + 1e-6:
            problems.append(f"site {sid} airtime {airtime[sid]:.4f} exceeds 1")
        if abs(s_mbps - dep.per_site_served_mbps.get(sid, -1.0)) > 1e-6:
            problems.append(f"site {sid} served traffic disagrees with record")

    assigned = set(dep.assignments)
    expected_uncovered = {int(i) for i in pop.ids} - assigned
    if expected_uncovered != dep.uncovered_users:
        problems.append("uncovered set does not match assignment complement")
    c = 1.0 - len(dep.uncovered_users) / len(pop) if len(pop) else 1.0
    if abs(c - outcome.coverage_fraction) > 1e-9:
        problems.append("coverage fraction inconsistent with uncovered set")
    return problems


def replay_event_log(outcome: RunOutcome, scenario: Scenario,
                     profile: TechnologyProfile, margins: EnvironmentMargins,
                     model: PathLossModel, power_params,
                     config: PlannerConfig, sites) -> bool:
    """Re-run the greedy plan and require the identical event log."""
    again = plan_single_run(scenario, profile, margins, model, power_params,
                            config, outcome.seed, sites=sites)
    return again.event_log == outcome.event_log
