from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from bilevel_dca.continuation import ContinuationSchedule, SolveReport, solve
from bilevel_dca.dataio import (
    emit_report,
    format_csv,
    format_report,
    load_dataset,
    load_points,
    parse_csv,
    parse_report,
    parse_tsplib,
)
from bilevel_dca.exceptions import ParseError
from bilevel_dca.initialization import random_start
from bilevel_dca.model_one import ModelOne

DATA = Path(__file__).parent / "data"


class TestTsplib:
    def test_three_lines(self):
        A = parse_tsplib("NODE_COORD_SECTION\n1 0 0\n2 1.5 2\n3 -1 4\nEOF\n")
        np.testing.assert_array_equal(A, [[0, 0], [1.5, 2], [-1, 4]])

    def test_golden_files(self):
        np.testing.assert_array_equal(load_points(DATA / "small.tsp"), [[0, 0], [10, 0], [-10, 0], [0, 10], [0, -10]])
        cube = load_points(DATA / "cube.tsp")
        assert cube.shape == (8, 3) and cube.sum() == 12.0

    def test_eil76_shape(self):
        assert load_dataset("eil76").shape == (76, 2)

    def test_pr1002_shape_when_available(self):
        import os

        path = os.environ.get("BILEVEL_DCA_PR1002")
        if not path or not Path(path).exists():
            pytest.skip("PR1002 data not available; set BILEVEL_DCA_PR1002")
        assert load_points(path).shape == (1002, 2)

    @pytest.mark.parametrize(
        "text,line,fragment",
        [
            ("NAME: x\n1 0 0\n", None, "missing NODE_COORD_SECTION"),
            ("NODE_COORD_SECTION\n1 0 0\n2 a 1\n", 3, "non-numeric"),
            ("NODE_COORD_SECTION\n1 0 0\n3 1 1\n", 3, "out of sequence"),
            ("NODE_COORD_SECTION\n1 0\n", 2, "expected"),
            ("DIMENSION: 3\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n", None, "DIMENSION is 3"),
            ("EDGE_WEIGHT_TYPE: GEO\nNODE_COORD_SECTION\n1 0 0\n", None, "GEO"),
            ("NODE_COORD_SECTION\nEOF\n", 1, "empty"),
            ("NODE_COORD_SECTION\n1 0 nan\n", 2, "non-finite"),
        ],
    )
    def test_errors(self, text, line, fragment):
        with pytest.raises(ParseError) as info:
            parse_tsplib(text)
        assert info.value.line == line
        assert fragment in str(info.value)


class TestCsv:
    def test_two_by_two(self):
        np.testing.assert_array_equal(parse_csv("1,2\n3,4\n"), [[1, 2], [3, 4]])

    def test_header_skip(self):
        np.testing.assert_array_equal(load_points(DATA / "header.csv"), [[0.5, 1.5], [-2.25, 3.0], [1e3, -4e-3]])

    def test_blank_lines(self):
        assert load_points(DATA / "plain.csv").shape == (3, 3)

    def test_ragged(self):
        with pytest.raises(ParseError) as info:
            parse_csv("1,2\n3,4,5\n")
        assert info.value.line == 2

    def test_non_numeric_body(self):
        with pytest.raises(ParseError):
            parse_csv("1,2\nx,y\n")

    def test_empty(self):
        with pytest.raises(ParseError):
            parse_csv("a,b\n")

    def test_fuzz_round_trip(self):
        A = np.random.default_rng(0).normal(scale=1e4, size=(1000, 5))
        np.testing.assert_array_equal(parse_csv(format_csv(A)), A)

    @given(arrays(float, st.tuples(st.integers(1, 20), st.integers(1, 6)), elements=st.floats(allow_nan=False, allow_infinity=False)))
    def test_round_trip_property(self, A):
        np.testing.assert_array_equal(parse_csv(format_csv(A, header=[f"c{j}" for j in range(A.shape[1])])), A)


def test_ds18_stand_in():
    A = load_dataset("ds18")
    assert A.shape == (18, 2)
    assert np.all(A[:9, 0] < 5) and np.all(A[9:, 0] > 12)


def test_unknown_dataset():
    with pytest.raises(KeyError):
        load_dataset("berlin52")


def _report():
    A = load_dataset("ds18")
    return solve(ModelOne(A, 2, 0.0, 1.0), ContinuationSchedule(1e-3, 5.7, 9.3, 0.5, 2, 5), random_start(A, 2), seed=1)


class TestReport:
    def test_round_trip(self, tmp_path):
        rep = _report()
        prof = [(0.1, 30.0), (0.2, 25.5)]
        path = emit_report(rep, tmp_path / "run.txt", prof)
        parsed = parse_report(path.read_text())
        assert parsed["snapped_cost"] == rep.snapped_cost
        assert parsed["true_cost"] == rep.true_cost
        assert parsed["cluster_centers"] == rep.snapped_centers
        assert parsed["total_center"] == rep.total_center
        assert parsed["wall_time"] == rep.wall_time
        assert parsed["total_inner_iterations"] == rep.total_inner_iterations
        assert parsed["descent_monotone"] is True
        np.testing.assert_array_equal(parsed["centers"], rep.final_centers)
        assert [t[4] for t in parsed["trace"]] == rep.smoothed_cost_trace
        assert [(t[1], t[2]) for t in parsed["trace"]] == rep.parameter_trace
        assert parsed["profile"] == prof
        flat = (tmp_path / "run.profile.tsv").read_text().splitlines()
        assert flat[0] == "probe\tradius\tsnapped_cost" and len(flat) == 3

    def test_empty_trace(self):
        rep = SolveReport("I", 2, np.zeros((2, 2)), [], [], [], (0, 1), 2, 0.0, 0.0, 0.0)
        parsed = parse_report(format_report(rep))
        assert parsed["trace"] == [] and parsed["outer_iterations"] == 0

    def test_key_order_and_time_omission(self):
        text = format_report(_report(), include_time=False)
        keys = [line.split(":")[0] for line in text.splitlines()[1:13]]
        assert keys[:5] == ["model", "k", "seed", "start_radius", "snapped_cost"]
        assert "wall_time: omitted" in text
        assert parse_report(text)["wall_time"] == "omitted"

    def test_bad_report(self):
        with pytest.raises(ParseError):
            parse_report("hello\n")
        with pytest.raises(ParseError):
            parse_report("# bilevel-dca report v1\n[bogus]\n")

    def test_unwritable_path(self, tmp_path):
        with pytest.raises(OSError) as info:
            emit_report(_report(), tmp_path / "missing" / "r.txt")
        assert "missing" in str(info.value)
