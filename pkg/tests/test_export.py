import io

import numpy as np
import pytest

from layered_defense.convergence import refinement_study
from layered_defense.dp import ValueTable, make_mesh, sweep_expected
from layered_defense.errors import SinkFailure
from layered_defense.export import (
    convergence_csv,
    export_surface,
    fmt,
    read_surface,
    surface_csv,
)
from layered_defense.minimax import sweep_minimax
from layered_defense.network import BudgetPair, build_example_8_1


def test_fmt():
    assert fmt(0.1 + 0.2) == "0.3"
    assert fmt(-0.0) == "0"
    assert fmt(1 / 3) == "0.333333333333"


def test_single_cell_surface():
    m = make_mesh(0.0, 0.5)
    table = ValueTable.from_values(m, m, np.zeros((1, 1)))
    assert surface_csv(table) == "x_budget,y_budget,value\n0,0,0\n"


def test_expected_sweep_export_round_trip(tmp_path):
    table = sweep_expected(build_example_8_1(), BudgetPair(1.0, 1.01), 0.01)
    path = tmp_path / "surface.csv"
    n = export_surface(table, path)
    text = path.read_text()
    assert n == len(text.encode())
    assert len(text.splitlines()) == 10_303
    rows = read_surface(text)
    values = np.array([v for _, _, v in rows]).reshape(table.shape)
    np.testing.assert_allclose(values, table.values, rtol=1e-11, atol=1e-15)
    assert rows[-1][:2] == (1.0, 1.01)


def test_minimax_sweep_line_count():
    table = sweep_minimax(build_example_8_1(), BudgetPair(10.0, 10.0), 0.05)
    buf = io.BytesIO()
    export_surface(table, buf)
    assert buf.getvalue().count(b"\n") == 40_402


def test_text_stream_sink():
    m = make_mesh(0.5, 0.5)
    table = ValueTable.from_values(m, m, np.eye(2))
    buf = io.StringIO()
    export_surface(table, buf)
    assert buf.getvalue().splitlines()[1:] == ["0,0,1", "0,0.5,0", "0.5,0,0", "0.5,0.5,1"]


def test_sink_failure(tmp_path):
    m = make_mesh(0.0, 0.5)
    table = ValueTable.from_values(m, m, np.zeros((1, 1)))
    with pytest.raises(SinkFailure):
        export_surface(table, tmp_path / "missing" / "out.csv")


def test_convergence_csv():
    report = refinement_study(build_example_8_1(), BudgetPair(1.0, 1.0), 0.5, 1)
    lines = convergence_csv(report).splitlines()
    assert lines[0] == "epsilon,value,delta,bound"
    assert len(lines) == 3
    assert lines[1].split(",")[2] == ""
