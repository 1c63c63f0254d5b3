import asyncio
import json

import pytest

from app import commands
from app.database.connection import DatabaseConnection
from app.database.repository import ExperimentRepository
from app.main import main
from app.models.experiment_data import TrialRow

K4_TEXT = "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n"


@pytest.fixture
def workdir(tmp_path):
    (tmp_path / "k4.txt").write_text(K4_TEXT)
    (tmp_path / "square.txt").write_text("0 0\n1 0\n1 1\n0 1\n")
    (tmp_path / "collinear.txt").write_text("0 0\n1 1\n2 2\n0 1\n")
    (tmp_path / "loop.txt").write_text("3 1\n1 1\n")
    return tmp_path


def run(workdir, *argv):
    return main(["--catalog-dir", str(workdir / "catalogs"), *argv])


def test_count_square(workdir, capsys):
    code = run(workdir, "count", "--graph", str(workdir / "k4.txt"), "--points", str(workdir / "square.txt"))
    assert code == 0
    assert json.loads(capsys.readouterr().out) == {"count": "1"}


def test_count_collinear_placement_is_degenerate(workdir):
    code = run(workdir, "count", "--graph", str(workdir / "k4.txt"), "--points", str(workdir / "collinear.txt"))
    assert code == 3


def test_parse_error_exit_code(workdir):
    assert run(workdir, "exact", str(workdir / "loop.txt")) == 2


def test_missing_file(workdir):
    assert run(workdir, "exact", str(workdir / "nope.txt")) == 2


def test_exact_k4(workdir, capsys):
    assert run(workdir, "exact", str(workdir / "k4.txt")) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["value"] == "0"
    assert len(report["drawing"]["points"]) == 4


def test_draw_then_render(workdir, capsys):
    out = workdir / "drawing.json"
    svg = workdir / "drawing.svg"
    code = run(workdir, "draw", str(workdir / "k4.txt"), "--k-max", "4", "-o", str(out), "--svg", str(svg))
    assert code == 0
    report = json.loads(out.read_text())
    assert report["n"] == 4
    assert svg.read_text().count("<circle") == 4

    assert run(workdir, "count", str(out)) == 0
    assert json.loads(capsys.readouterr().out)["count"] == str(report["crossing_count"])
    assert run(workdir, "render", str(out)) == 0
    assert "<svg" in capsys.readouterr().out


def test_partition_text_format(workdir, capsys):
    cert = workdir / "cert.json"
    code = run(workdir, "partition", str(workdir / "k4.txt"), "--epsilon", "1/4", "--k-max", "4",
               "--format", "text", "--certificate", str(cert))
    assert code == 0
    assert capsys.readouterr().out.split() == ["0", "0", "0", "0"]
    assert json.loads(cert.read_text())["K"] == 1


def test_kplanar_budget(workdir):
    k5 = workdir / "k5.txt"
    k5.write_text("5 10\n" + "".join(f"{u} {v}\n" for u in range(5) for v in range(u + 1, 5)))
    assert run(workdir, "kplanar", str(k5), "--colors", "5") == 4


def test_bad_epsilon(workdir):
    assert run(workdir, "draw", str(workdir / "k4.txt"), "--epsilon", "one") == 2


def test_catalog_info_builds(workdir, capsys):
    assert run(workdir, "catalog", "info", "--n", "4") == 0
    info = json.loads(capsys.readouterr().out)
    assert info["entries"] == 2
    assert (workdir / "catalogs" / "order_types_n4.otc").exists()


def test_unknown_command():
    assert main(["frobnicate"]) == 2


def test_catalog_build_on_small_grid_keeps_stored_entries(workdir, capsys):
    assert run(workdir, "catalog", "build", "--n", "4") == 0
    assert json.loads(capsys.readouterr().out)["entries"] == 2
    # the 2x2 grid only holds the convex quadrilateral
    assert run(workdir, "catalog", "build", "--n", "4", "--grid-side", "2") == 0
    report = json.loads(capsys.readouterr().out)
    assert report["built"] == 1
    assert report["entries"] == 2
    assert run(workdir, "catalog", "info", "--n", "4") == 0
    assert json.loads(capsys.readouterr().out)["entries"] == 2


def test_runs_lists_stored_labels(workdir, capsys, monkeypatch):
    db = DatabaseConnection(f"sqlite+aiosqlite:///{workdir / 'experiments.db'}")
    monkeypatch.setattr(commands, "get_db_connection", lambda: db)
    rows = [TrialRow(family="gnp", n=12, p="1/2", trial=i, seed=i, upper_bound=40 + i) for i in range(2)]

    async def seed():
        async for session in db.get_session():
            await ExperimentRepository(session).insert_trials_batch("gnp-a", rows)
        await db.close_db()

    asyncio.run(seed())
    assert run(workdir, "runs") == 0
    assert json.loads(capsys.readouterr().out) == [{"run_label": "gnp-a", "trials": 2}]
