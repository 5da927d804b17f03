# -*- coding: utf-8 -*-

import math

import numpy as np
import pytest

from miniminimax.dataset import (Dataset, load_csv, load_points, save_csv,
                                 synthesize)
from miniminimax.envelope import empirical_lipschitz
from miniminimax.errors import (DimensionMismatch, DomainError,
                                DuplicateError, EmptyError, ParseError,
                                UnsupportedKind)


@pytest.fixture
def write_csv(tmp_path):
    def write(text, name="data.csv"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


class TestLoadCsv:
    def test_last_column_is_value(self, write_csv):
        dataset = load_csv(write_csv("x1,x2,y\n0,0.5,1.5\n1,0.25,-2\n"))
        assert dataset.dim == 2
        assert dataset.n == 2
        assert dataset.labels == ("x1", "x2")
        np.testing.assert_array_equal(dataset.points, [[0.0, 0.5], [1.0, 0.25]])
        np.testing.assert_array_equal(dataset.values, [1.5, -2.0])

    @pytest.mark.parametrize("column", ["y", "0", 0, "-3"])
    def test_value_column(self, write_csv, column):
        dataset = load_csv(write_csv("y,a,b\n7,0.1,0.2\n"), value_column=column)
        assert dataset.values.tolist() == [7.0]
        assert dataset.labels == ("a", "b")

    def test_unknown_value_column(self, write_csv):
        with pytest.raises(ParseError, match="--value-column"):
            load_csv(write_csv("a,y\n0.1,1\n"), value_column="z")

    def test_missing_header(self, write_csv):
        with pytest.raises(ParseError, match="header"):
            load_csv(write_csv(""))

    def test_no_rows(self, write_csv):
        with pytest.raises(EmptyError):
            load_csv(write_csv("a,y\n"))

    def test_not_numeric_names_row(self, write_csv):
        with pytest.raises(ParseError, match="row 3"):
            load_csv(write_csv("a,y\n0.1,1\n0.2,oops\n"))

    def test_missing_cell(self, write_csv):
        with pytest.raises(ParseError, match="row 2"):
            load_csv(write_csv("a,y\n,1\n"))

    def test_ragged_row(self, write_csv):
        with pytest.raises(ParseError, match="expected 2 cells"):
            load_csv(write_csv("a,y\n0.1,1,3\n"))

    def test_outside_cube_names_row_and_column(self, write_csv):
        with pytest.raises(DomainError, match="row 2: a"):
            load_csv(write_csv("a,y\n1.5,1\n"))

    def test_clamps_tiny_excursions(self, write_csv):
        dataset = load_csv(write_csv("a,b,y\n-1e-13,1.0000000000001,1\n"))
        np.testing.assert_array_equal(dataset.points, [[0.0, 1.0]])

    def test_merges_equal_duplicates(self, write_csv, caplog):
        dataset = load_csv(write_csv("a,y\n0.5,1\n0.2,2\n0.5,1\n"))
        assert dataset.n == 2
        assert "duplicate" in caplog.text

    def test_conflicting_duplicates(self, write_csv):
        with pytest.raises(DuplicateError, match="row 4"):
            load_csv(write_csv("a,y\n0.5,1\n0.2,2\n0.5,3\n"))

    def test_blank_lines_skipped(self, write_csv):
        assert load_csv(write_csv("a,y\n0.5,1\n\n0.2,2\n")).n == 2


class TestDataset:
    def test_read_only(self):
        dataset = Dataset.from_arrays([[0.1], [0.2]], [1.0, 2.0])
        with pytest.raises(ValueError):
            dataset.values[0] = 5.0

    def test_mismatch(self):
        with pytest.raises(DimensionMismatch):
            Dataset.from_arrays([[0.1], [0.2]], [1.0])

    def test_empty(self):
        with pytest.raises(EmptyError):
            Dataset.from_arrays(np.zeros((0, 2)), [])

    def test_non_finite(self):
        with pytest.raises(ParseError):
            Dataset.from_arrays([[0.1]], [math.nan])

    def test_negative_zero_duplicates(self):
        assert Dataset.from_arrays([[0.0], [-0.0]], [1.0, 1.0]).n == 1


class TestSaveAndPoints:
    def test_save_then_load(self, tmp_path):
        dataset, _ = synthesize("random-lipschitz", 3, 25, seed=4)
        path = str(tmp_path / "saved.csv")
        save_csv(dataset, path)
        loaded = load_csv(path)
        np.testing.assert_array_equal(loaded.points, dataset.points)
        np.testing.assert_array_equal(loaded.values, dataset.values)

    def test_load_points(self, write_csv):
        points = load_points(write_csv("a,b\n0,1\n0.5,0.25\n", "q.csv"), dim=2)
        np.testing.assert_array_equal(points, [[0.0, 1.0], [0.5, 0.25]])

    def test_load_points_dimension(self, write_csv):
        with pytest.raises(DimensionMismatch):
            load_points(write_csv("a,b\n0,1\n", "q.csv"), dim=3)

    def test_load_points_domain(self, write_csv):
        with pytest.raises(DomainError, match="row 3"):
            load_points(write_csv("a\n0.5\n2\n", "q.csv"))


class TestSynthesize:
    def test_linear(self):
        dataset, known = synthesize("linear", 3, 40, seed=1)
        np.testing.assert_array_equal(dataset.values, dataset.points[:, 0])
        assert known == 1.0
        for metric in ("l2", "linf"):
            assert empirical_lipschitz(dataset, metric) <= known + 1e-12

    def test_constant(self):
        dataset, known = synthesize("constant", 2, 10)
        assert known == 0.0
        assert set(dataset.values.tolist()) == {1.0}

    @pytest.mark.parametrize("metric,factor", [("l2", 1.0), ("linf", math.sqrt(4))])
    def test_product_sine(self, metric, factor):
        dataset, known = synthesize("product-sine", 4, 60, seed=2, metric=metric)
        assert known == pytest.approx(math.pi * factor)
        assert empirical_lipschitz(dataset, metric) <= known + 1e-9

    @pytest.mark.parametrize("metric", ["l2", "linf"])
    def test_random_lipschitz(self, metric):
        dataset, known = synthesize("random-lipschitz", 5, 80, seed=9, metric=metric)
        assert 0.5 <= known <= 5.0
        assert empirical_lipschitz(dataset, metric) <= known * (1 + 1e-12)

    def test_given_points(self):
        points = [[0.25, 0.75], [1.0, 0.0]]
        dataset, _ = synthesize("linear", 2, 2, points=points)
        np.testing.assert_array_equal(dataset.values, [0.25, 1.0])

    def test_deterministic(self):
        first, _ = synthesize("random-lipschitz", 3, 30, seed=5)
        second, _ = synthesize("random-lipschitz", 3, 30, seed=5)
        other, _ = synthesize("random-lipschitz", 3, 30, seed=6)
        np.testing.assert_array_equal(first.points, second.points)
        np.testing.assert_array_equal(first.values, second.values)
        assert not np.array_equal(first.points, other.points)

    def test_unknown_kind(self):
        with pytest.raises(UnsupportedKind):
            synthesize("spiral", 2, 5)
