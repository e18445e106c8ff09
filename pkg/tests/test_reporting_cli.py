import json
import subprocess
import sys
from pathlib import Path

import pytest

from tvwsplan.cli import main as cli_main
from tvwsplan.link_budget import load_technology, max_allowable_path_loss_db
from tvwsplan.planner import PlannerConfig, run_campaign
from tvwsplan.power_energy import load_power_params
from tvwsplan.propagation import okumura_hata_rural, one_slope
from tvwsplan.reporting import (assignment_csv, build_report, coverage_csv,
                                deployment_csv, pathloss_csv, power_csv,
                                raster_csv, report_to_json, runs_csv, svg_map,
                                sweep_csv, verify_report)
from tvwsplan.scenario import bundled_scenario
from tvwsplan.sizing import sweep_mcs

GOLDEN = Path(__file__).resolve().parent / "data" / "golden_micro_report.json"


@pytest.fixture(scope="module")
def micro_report(micro_scenario_mod):
    sc, prof, model, pw, sites = micro_scenario_mod
    cfg = PlannerConfig(runs=3, base_seed=42)
    report, result = build_report(sc, prof, sc.margins, model, pw, cfg,
                                  sites=sites)
    return report, result, sc, prof, model, cfg, sites


@pytest.fixture(scope="module")
def micro_scenario_mod(request):
    # bundle the session-scoped micro fixtures for module-level reuse
    sc = request.getfixturevalue("micro_scenario")
    prof = request.getfixturevalue("micro_profile")
    model = request.getfixturevalue("micro_model")
    sites = request.getfixturevalue("micro_sites")
    pw = request.getfixturevalue("tvws_power")
    return sc, prof, model, pw, sites


class TestReport:
    def test_aggregates_recomputable(self, micro_report):
        report = micro_report[0]
        assert verify_report(report) == []

    def test_round_trip_from_runs_csv(self, micro_report):
        report = micro_report[0]
        text = runs_csv(report)
        rows = [line.split(",") for line in text.splitlines()
                if line and not line.startswith("#") and not line.startswith("seed")]
        cov = [float(r[1]) for r in rows]
        assert sum(cov) / len(cov) == pytest.approx(report.mean_coverage, abs=1e-6)
        power = [float(r[2]) for r in rows]
        assert sum(power) / len(power) == pytest.approx(report.mean_power_w, abs=1e-4)

    def test_tampered_aggregate_detected(self, micro_report):
        report = micro_report[0]
        import copy
        bad = copy.deepcopy(report)
        bad.mean_coverage += 0.01
        assert any("mean_coverage" in p for p in verify_report(bad))

    def test_provenance_block_present(self, micro_report):
        report = micro_report[0]
        for key in ("tool_version", "scenario_digest", "technology", "base_seed",
                    "convention_ee_user_count_factor",
                    "convention_served_bitrate_accounting"):
            assert key in report.provenance
        payload = json.loads(report_to_json(report))
        assert payload["schema_version"] == 1

    def test_report_json_deterministic(self, micro_scenario_mod):
        sc, prof, model, pw, sites = micro_scenario_mod
        cfg = PlannerConfig(runs=2, base_seed=42)
        a = report_to_json(build_report(sc, prof, sc.margins, model, pw, cfg,
                                        sites=sites)[0])
        b = report_to_json(build_report(sc, prof, sc.margins, model, pw, cfg,
                                        sites=sites)[0])
        assert a == b

    def test_golden_micro_report(self, micro_report):
        text = report_to_json(micro_report[0])
        assert GOLDEN.exists(), "golden file missing"
        assert text == GOLDEN.read_text()


class TestCsvEmitters:
    def test_headers_and_line_endings(self, micro_report):
        report, result, sc, prof, model, cfg, sites = micro_report
        first = result.outcomes[0]
        prov = report.provenance
        mcs = prof.mcs(report.planning_mcs)
        pl_max = max_allowable_path_loss_db(prof, sc.margins, mcs)
        emitted = {
            "runs": (runs_csv(report), "seed,coverage,power_w,served_mbps,active_sites"),
            "deployment": (deployment_csv(first, sites, prov),
                           "site_id,x_km,y_km,active,served_mbps,power_w"),
            "assignment": (assignment_csv(first, sc, sites, model, prov),
                           "user_id,site_id,pl_db"),
            "power": (power_csv(first, prof, prov),
                      "bs_id,n_tx,p_r_w,load,p_total_w"),
            "raster": (raster_csv(first, sc, sites, model, pl_max, prov),
                       "x,y,best_pl_db,covered_flag"),
            "pathloss": (pathloss_csv(model, prov), "d_km,pl_db"),
        }
        for name, (text, header) in emitted.items():
            assert "\r" not in text, name
            lines = text.splitlines()
            data_start = next(i for i, l in enumerate(lines)
                              if not l.startswith("#"))
            assert lines[data_start] == header, name
            assert any(l.startswith("# scenario_digest=") for l in lines[:data_start])

    def test_deployment_marks_active_sites(self, micro_report):
        report, result, sc, prof, model, cfg, sites = micro_report
        first = result.outcomes[0]
        text = deployment_csv(first, sites, report.provenance)
        active_rows = [l for l in text.splitlines()
                       if not l.startswith("#") and ",1," in l]
        assert len(active_rows) == len(first.deployment.active_sites)

    def test_raster_covers_resolution_grid(self, micro_report):
        report, result, sc, prof, model, cfg, sites = micro_report
        mcs = prof.mcs(report.planning_mcs)
        pl_max = max_allowable_path_loss_db(prof, sc.margins, mcs)
        text = raster_csv(result.outcomes[0], sc, sites, model, pl_max,
                          report.provenance)
        rows = [l for l in text.splitlines() if not l.startswith(("#", "x,"))]
        # 4 x 3 km at 500 m resolution: 8 x 6 interior cells
        assert len(rows) == 48
        assert all(r.split(",")[3] in ("0", "1") for r in rows)

    def test_pathloss_csv_values(self):
        model = one_slope(100.0, 1.0, 3.0)
        text = pathloss_csv(model, {"x": 1}, d_min_km=1.0, d_max_km=10.0,
                            step_km=1.0)
        rows = [l.split(",") for l in text.splitlines()
                if not l.startswith(("#", "d_km"))]
        assert len(rows) == 10
        assert float(rows[0][1]) == pytest.approx(100.0)
        assert float(rows[-1][1]) == pytest.approx(130.0)

    def test_sweep_csv_optimal_flag(self):
        sc = bundled_scenario("ghent_suburban")
        prof = load_technology("lte", "suburban")
        rows = sweep_mcs(prof, sc.margins, sc.model_for(prof),
                         sc.region.area_km2, sc.population.expected_demand_mbps)
        text = sweep_csv(rows, {"x": 1})
        lines = [l for l in text.splitlines() if not l.startswith(("#", "mcs,"))]
        flagged = [l for l in lines if l.endswith(",1")]
        assert len(flagged) == 1
        assert flagged[0].startswith("1/2 16-QAM,")


class TestSvgMap:
    def test_svg_well_formed_and_complete(self, micro_report):
        report, result, sc, prof, model, cfg, sites = micro_report
        first = result.outcomes[0]
        svg = svg_map(first, sc, sites, title="micro")
        import xml.etree.ElementTree as ET
        root = ET.fromstring(svg)
        assert root.tag.endswith("svg")
        body = svg
        assert "<polygon" in body
        assert body.count("<circle") >= len(sites)
        if first.deployment.uncovered_users:
            assert "<line" in body  # uncovered users drawn as crosses

    def test_svg_deterministic(self, micro_report):
        report, result, sc, prof, model, cfg, sites = micro_report
        first = result.outcomes[0]
        assert svg_map(first, sc, sites) == svg_map(first, sc, sites)

    def test_svg_carries_provenance_comment(self, micro_report):
        report, result, sc, prof, model, cfg, sites = micro_report
        svg = svg_map(result.outcomes[0], sc, sites, prov=report.provenance)
        assert "<!--" in svg and "scenario_digest=" in svg


class TestCli:
    def run_cli(self, *args):
        import io
        from contextlib import redirect_stderr, redirect_stdout
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = cli_main(list(args))
        return code, out.getvalue(), err.getvalue()

    def test_pathloss_subcommand(self, tmp_path):
        code, out, err = self.run_cli("pathloss", "--env", "rural",
                                      "--out", str(tmp_path))
        assert code == 0
        text = (tmp_path / "pathloss.csv").read_text()
        assert "d_km,pl_db" in text

    def test_coverage_rural_22b_anchor_row(self, tmp_path):
        code, out, err = self.run_cli("coverage", "--tech", "802.22b",
                                      "--env", "rural", "--out", str(tmp_path))
        assert code == 0
        rows = [l.split(",") for l in (tmp_path / "coverage.csv").read_text().splitlines()
                if not l.startswith(("#", "mcs,"))]
        qpsk = next(r for r in rows if r[0] == "1/2 QPSK")
        assert float(qpsk[2]) == pytest.approx(17.6, rel=0.05)

    def test_sweep_lte_suburban_marker(self, tmp_path):
        code, out, err = self.run_cli("sweep", "--tech", "lte",
                                      "--env", "suburban", "--out", str(tmp_path))
        assert code == 0
        lines = [l for l in (tmp_path / "sweep.csv").read_text().splitlines()
                 if l.endswith(",1")]
        assert len(lines) == 1 and lines[0].startswith("1/2 16-QAM,")

    def test_plan_micro_deterministic_bytes(self, tmp_path):
        # custom scenario file with explicit sites, one run
        scn = {
            "name": "micro-cli", "schema_version": 1,
            "region": {"outline_km": [[0, 0], [4, 0], [4, 3], [0, 3]],
                       "area_km2": 12.0, "resolution_m": 500.0},
            "population": {"user_count": 12, "data_fraction": 1.0},
            "environment": {"kind": "suburban", "shadow_margin_db": 2.0,
                            "fade_margin_db": 1.0},
            "propagation": {"variant": "one_slope", "pl0_db": 108.0,
                            "d0_km": 1.0, "exponent": 3.5},
            "technology": "802.22b",
            "sites": {"mode": "lattice", "count": 3,
                      "jitter_fraction": 0.1, "seed": 5,
                      "antenna_height_m": 30.0},
            "seeds": {"base_seed": 42},
        }
        import yaml
        path = tmp_path / "micro.yaml"
        path.write_text(yaml.safe_dump(scn))
        outa, outb = tmp_path / "a", tmp_path / "b"
        for out in (outa, outb):
            code, _, err = self.run_cli("plan", "--scenario", str(path),
                                        "--runs", "1", "--out", str(out))
            assert code == 0, err
        for name in ("report.json", "runs.csv", "population.csv",
                     "deployment.csv", "assignments.csv", "power.csv",
                     "coverage_raster.csv", "map.svg"):
            assert (outa / name).read_bytes() == (outb / name).read_bytes(), name
        pop_lines = (outa / "population.csv").read_text().splitlines()
        assert pop_lines[0] == "user_id,x_km,y_km,demand_mbps"
        assert len(pop_lines) == 13  # header + 12 users

    def test_plan_with_fixed_mcs_flag(self, tmp_path):
        code, out, err = self.run_cli("plan", "--env", "rural",
                                      "--tech", "802.22b", "--mcs", "1/2 QPSK",
                                      "--runs", "2", "--out", str(tmp_path))
        assert code == 0, err
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["planning_mcs"] == "1/2 QPSK"

    def test_plan_with_unknown_mcs_label_fails(self, tmp_path):
        code, out, err = self.run_cli("plan", "--env", "rural",
                                      "--tech", "802.22b", "--mcs", "9/9 HEX",
                                      "--runs", "1", "--out", str(tmp_path))
        assert code != 0
        assert "9/9 HEX" in json.loads(err)["error"]["message"]

    def test_missing_scenario_is_machine_readable(self, tmp_path):
        code, out, err = self.run_cli("plan", "--scenario",
                                      str(tmp_path / "ghost.yaml"))
        assert code != 0
        record = json.loads(err)
        assert record["error"]["type"] == "missing_file"
        assert "ghost.yaml" in record["error"]["message"]

    def test_invalid_scenario_lists_field_errors(self, tmp_path):
        bad = tmp_path / "bad.yaml"
        bad.write_text("region: {}\npopulation: {}\n")
        code, out, err = self.run_cli("sweep", "--scenario", str(bad))
        assert code != 0
        record = json.loads(err)
        assert record["error"]["type"] == "invalid_scenario"
        assert isinstance(record["error"]["fields"], list)
        assert record["error"]["fields"]

    def test_unknown_technology_error(self, tmp_path):
        code, out, err = self.run_cli("coverage", "--env", "rural",
                                      "--tech", "wimax", "--out", str(tmp_path))
        assert code != 0
        record = json.loads(err)
        assert record["error"]["type"] == "missing_file"

    def test_mimo_rejected_for_80222(self, tmp_path):
        code, out, err = self.run_cli("coverage", "--env", "rural",
                                      "--tech", "802.22", "--mimo", "4x4",
                                      "--out", str(tmp_path))
        assert code != 0
        record = json.loads(err)
        assert "MIMO" in record["error"]["message"]

    def test_usage_error_without_scenario_or_env(self):
        code, out, err = self.run_cli("pathloss")
        assert code != 0
        assert json.loads(err)["error"]["type"] == "usage"

    def test_console_entry_point(self, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-m", "tvwsplan.cli", "pathloss", "--env",
             "suburban", "--out", str(tmp_path)],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        assert (tmp_path / "pathloss.csv").exists()


class TestWorkerEnvVariable:
    def test_campaign_worker_env(self, micro_scenario_mod, monkeypatch):
        sc, prof, model, pw, sites = micro_scenario_mod
        monkeypatch.setenv("TVWSPLAN_WORKERS", "2")
        cfg = PlannerConfig(runs=4, base_seed=9)  # workers=0 -> env var
        camp = run_campaign(sc, prof, sc.margins, model, pw, cfg, sites=sites)
        monkeypatch.setenv("TVWSPLAN_WORKERS", "1")
        camp1 = run_campaign(sc, prof, sc.margins, model, pw, cfg, sites=sites)
        assert [o.event_log for o in camp.outcomes] == \
            [o.event_log for o in camp1.outcomes]
