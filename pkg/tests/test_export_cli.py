import json
import math

import pytest

from contactsim.cli import main
from contactsim.export import (
    EVENT_COLUMNS,
    SAMPLE_COLUMNS,
    export_plot,
    export_trajectory,
    load_trajectory_json,
)
from contactsim.simulate import SimConfig, Trajectory, run_scenario


@pytest.fixture(scope="module")
def short_run():
    return run_scenario("circle-circle", SimConfig(dt=1e-3, duration=0.8))


@pytest.fixture(scope="module")
def short_run_3d():
    return run_scenario("sphere-cuboid", SimConfig(dt=1e-3, duration=0.3))


class TestCsvExport:
    def test_header_and_row_count(self, short_run, tmp_path):
        out = tmp_path / "t.csv"
        export_trajectory(short_run, "csv", str(out))
        lines = out.read_text().splitlines()
        assert lines[0] == ",".join(SAMPLE_COLUMNS)
        assert lines[0] == "t,body_id,x,y,z,q0,q1,q2,q3,vx,vy,vz,wx,wy,wz"
        assert len(lines) == 1 + len(short_run.samples) * 2

    def test_events_sibling_file(self, short_run, tmp_path):
        out = tmp_path / "t.csv"
        export_trajectory(short_run, "csv", str(out))
        events = (tmp_path / "t.csv.events.csv").read_text().splitlines()
        assert events[0] == ",".join(EVENT_COLUMNS)
        assert events[0] == "t,pair,phi,rho,Fn,Ft,saturated"
        assert len(events) == 1 + len(short_run.events)
        assert all(row.split(",")[1] == "0-1" for row in events[1:])

    def test_empty_trajectory_writes_header_only(self, tmp_path):
        empty = Trajectory((), (), ())
        out = tmp_path / "empty.csv"
        export_trajectory(empty, "csv", str(out))
        assert out.read_text() == ",".join(SAMPLE_COLUMNS) + "\n"

    def test_planar_embedding_columns(self, short_run, tmp_path):
        out = tmp_path / "t.csv"
        export_trajectory(short_run, "csv", str(out))
        first = out.read_text().splitlines()[1].split(",")
        row = dict(zip(SAMPLE_COLUMNS, first))
        assert row["z"] == "0.0" and row["vz"] == "0.0"
        assert float(row["q0"]) == 1.0 and float(row["q3"]) == 0.0

    def test_rejects_unknown_format(self, short_run, tmp_path):
        with pytest.raises(ValueError):
            export_trajectory(short_run, "xml", str(tmp_path / "t.xml"))


class TestJsonExport:
    def test_round_trip_is_bit_exact(self, short_run, tmp_path):
        out = tmp_path / "t.json"
        export_trajectory(short_run, "json", str(out))
        loaded = load_trajectory_json(str(out))
        assert len(loaded["samples"]) == len(short_run.samples) * 2
        index = 0
        for t, states in short_run.samples:
            for body_id, state in enumerate(states):
                row = loaded["samples"][index]
                assert row["t"] == t
                assert row["body_id"] == body_id
                assert row["x"] == state.position[0]
                assert row["y"] == state.position[1]
                assert row["vx"] == state.velocity[0]
                assert row["wz"] == state.angular_velocity
                index += 1
        assert len(loaded["events"]) == len(short_run.events)
        for row, event in zip(loaded["events"], short_run.events):
            assert row["t"] == event.t
            assert row["rho"] == event.rho
            assert row["Fn"] == event.f_normal


class TestSvgExport:
    def test_polyline_per_body_and_outlines(self, short_run, tmp_path):
        out = tmp_path / "t.svg"
        export_plot(short_run, str(out))
        text = out.read_text()
        assert text.startswith("<svg")
        assert text.count("<polyline") == 2
        assert text.count("<circle") > 10

    def test_deterministic_bytes(self, short_run, tmp_path):
        a = tmp_path / "a.svg"
        b = tmp_path / "b.svg"
        export_plot(short_run, str(a))
        export_plot(short_run, str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_three_dimensional_skipped_with_note(self, short_run_3d, tmp_path,
                                                 capsys):
        out = tmp_path / "t3.svg"
        export_plot(short_run_3d, str(out))
        assert "skipped" in capsys.readouterr().out
        assert not out.exists()


class TestCli:
    def test_simulate_happy_path(self, tmp_path):
        out = tmp_path / "run.csv"
        code = main(["simulate", "--scenario", "rect-circle", "--backend", "sat",
                     "--dt", "0.001", "--duration", "0.5",
                     "--out", str(out)])
        assert code == 0
        assert out.exists()
        assert (tmp_path / "run.csv.events.csv").exists()

    def test_unknown_scenario_is_usage_error(self, capsys):
        code = main(["simulate", "--scenario", "bogus", "--backend", "sat"])
        assert code == 1
        assert "invalid choice" in capsys.readouterr().err

    def test_missing_subcommand_is_usage_error(self):
        assert main([]) == 1

    def test_summary_printed_without_out(self, capsys):
        code = main(["simulate", "--scenario", "circle-circle", "--backend",
                     "sat", "--duration", "0.2"])
        assert code == 0
        out = capsys.readouterr().out
        assert "samples" in out and "body 0" in out

    def test_plot_flag_writes_svg(self, tmp_path):
        svg = tmp_path / "run.svg"
        code = main(["simulate", "--scenario", "bouncing-circle", "--backend",
                     "sat", "--duration", "0.3", "--plot", str(svg)])
        assert code == 0
        assert svg.exists()

    def test_plot_skips_for_3d(self, tmp_path, capsys):
        svg = tmp_path / "run3.svg"
        code = main(["simulate", "--scenario", "sphere-cuboid", "--backend",
                     "sat", "--duration", "0.2", "--plot", str(svg)])
        assert code == 0
        assert "skipped" in capsys.readouterr().out

    def test_config_overrides_apply(self, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({
            "dt": 0.002,
            "duration": 0.2,
            "material": {"friction": 0.0},
            "bodies": [None, {"position": [3.0, 0.0]}],
        }))
        out = tmp_path / "run.csv"
        code = main(["simulate", "--scenario", "circle-circle", "--backend",
                     "sat", "--config", str(config), "--out", str(out),
                     "--format", "json"])
        assert code == 0
        loaded = load_trajectory_json(str(out))
        assert loaded["samples"][1]["x"] == 3.0
        ts = sorted({row["t"] for row in loaded["samples"]})
        assert math.isclose(ts[1] - ts[0], 0.002, abs_tol=1e-15)

    def test_runtime_error_exit_code(self, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"solver": {"max_iters": 1}}))
        code = main(["simulate", "--scenario", "circle-circle", "--backend",
                     "co", "--duration", "0.5", "--config", str(config)])
        assert code == 2

    def test_missing_config_file_is_runtime_error(self):
        code = main(["simulate", "--scenario", "circle-circle", "--backend",
                     "sat", "--config", "/nonexistent/config.json"])
        assert code == 2

    def test_bench_structure(self, tmp_path):
        out = tmp_path / "report.json"
        code = main(["bench", "--repeat", "2", "--scenarios", "circle-circle",
                     "--backends", "sat,co", "--micro-calls", "500",
                     "--out", str(out)])
        assert code == 0
        report = json.loads(out.read_text())
        assert report["repeat"] == 2
        assert len(report["rows"]) == 2
        assert {row["backend"] for row in report["rows"]} == {"sat", "co"}
        assert len(report["micro"]) == 8
        assert "environment" in report

    def test_bench_unknown_scenario_is_usage_error(self):
        assert main(["bench", "--scenarios", "nope", "--repeat", "1"]) == 1

    def test_log_env_variable_accepted(self, monkeypatch, capsys):
        monkeypatch.setenv("CONTACTSIM_LOG", "debug")
        code = main(["simulate", "--scenario", "circle-circle", "--backend",
                     "sat", "--duration", "0.1"])
        assert code == 0
        assert "samples" in capsys.readouterr().out
