"""CSV table and key,value readers."""

import numpy as np
import pytest

from figplot.io import Table, TableFormatError, pivot, read_keyvalue, read_table


@pytest.fixture
def sample(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text(
        "# model = bh\n"
        "# fixed_j = 10.0\n"
        "x,y,v,status\n"
        "1,5,0.25,ok\n"
        "1,6,0.5,ok\n"
        "2,5,0.75,ok\n"
        "2,6,1.0,error:RuntimeError\n")
    return str(path)


class TestReadTable:
    def test_metadata_and_rows(self, sample):
        table = read_table(sample)
        assert table.metadata == {"model": "bh", "fixed_j": "10.0"}
        assert table.columns == ("x", "y", "v", "status")
        assert len(table.rows) == 4
        assert table.rows[0] == [1.0, 5.0, 0.25, "ok"]

    def test_column_types(self, sample):
        table = read_table(sample)
        assert table.column("v").dtype == float
        assert table.column("status").dtype == object

    def test_missing_column(self, sample):
        with pytest.raises(TableFormatError, match="no column"):
            read_table(sample).column("nope")

    def test_meta_float(self, sample):
        table = read_table(sample)
        assert table.meta_float("fixed_j") == 10.0
        with pytest.raises(TableFormatError):
            table.meta_float("model")
        with pytest.raises(TableFormatError):
            table.meta_float("absent")

    def test_ragged_row_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n1,2,3\n")
        with pytest.raises(TableFormatError, match="3 cells"):
            read_table(str(path))

    def test_metadata_without_equals_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("# just a comment\na\n1\n")
        with pytest.raises(TableFormatError, match="without '='"):
            read_table(str(path))

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(TableFormatError, match="no header"):
            read_table(str(path))


class TestReadKeyValue:
    def test_mixed_types(self, tmp_path):
        path = tmp_path / "kv.csv"
        path.write_text("alpha,1.5\nsource,located\n")
        assert read_keyvalue(str(path)) == {"alpha": 1.5, "source": "located"}

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "kv.csv"
        path.write_text("justonefield\n")
        with pytest.raises(TableFormatError):
            read_keyvalue(str(path))


class TestPivot:
    def test_full_grid(self, sample):
        xs, ys, grid = pivot(read_table(sample), "x", "y", "v")
        np.testing.assert_array_equal(xs, [1.0, 2.0])
        np.testing.assert_array_equal(ys, [5.0, 6.0])
        np.testing.assert_allclose(grid, [[0.25, 0.75], [0.5, 1.0]])

    def test_incomplete_grid_rejected(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("x,y,v\n1,5,0.1\n2,6,0.2\n")
        with pytest.raises(TableFormatError, match="full"):
            pivot(read_table(str(path)), "x", "y", "v")
