import io

import numpy as np
import pytest

import conceptmine as cm


def roundtrip(ctx, fmt):
    return cm.read_context(io.BytesIO(cm.write_context(ctx, fmt)), fmt)


class TestCxt:
    def test_roundtrip_identity(self, k1):
        assert roundtrip(k1, "cxt") == k1

    def test_layout(self, k1):
        text = cm.write_context(k1, "cxt").decode()
        lines = text.split("\n")
        assert lines[0] == "B"
        assert lines[1] == ""
        assert lines[2] == "3"
        assert lines[3] == "2"
        assert lines[4] == ""
        assert lines[5:8] == ["g1", "g2", "g3"]
        assert lines[8:10] == ["a", "b"]
        assert lines[10:13] == ["X.", "XX", ".X"]

    def test_malformed_header_reports_line(self):
        with pytest.raises(cm.ParseError) as err:
            cm.read_context(io.BytesIO(b"Q\n\n1\n1\n\ng\na\nX\n"), "cxt")
        assert err.value.line == 1

    def test_short_row_reports_line(self, k1):
        text = cm.write_context(k1, "cxt").decode().split("\n")
        text[10] = "X"
        with pytest.raises(cm.ParseError) as err:
            cm.read_context(io.BytesIO("\n".join(text).encode()), "cxt")
        assert err.value.line == 11

    def test_roundtrip_random_contexts(self, rng):
        for _ in range(10):
            ctx = cm.generate_random_context(
                n_objects=int(rng.integers(1, 30)),
                n_attributes=int(rng.integers(1, 20)),
                density=float(rng.uniform(0, 1)),
                seed=int(rng.integers(0, 2**32)),
            )
            assert roundtrip(ctx, "cxt") == ctx
            assert roundtrip(ctx, "csv") == ctx


class TestFimi:
    def test_basic_line(self):
        ctx = cm.read_context(io.BytesIO(b"0 2\n"), "fimi")
        assert ctx.n_objects == 1
        assert ctx.n_attributes == 3
        assert ctx.bools[0].tolist() == [True, False, True]

    def test_roundtrip_preserves_incidence(self, k1):
        back = roundtrip(k1, "fimi")
        assert np.array_equal(back.bools, k1.bools)
        assert back.object_names == ("g0", "g1", "g2")

    def test_bad_token_reports_line(self):
        with pytest.raises(cm.ParseError) as err:
            cm.read_context(io.BytesIO(b"0 1\n0 x\n"), "fimi")
        assert err.value.line == 2


class TestCsv:
    def test_duplicate_attribute_header_rejected(self):
        data = b",a,a\ng1,1,0\n"
        with pytest.raises(cm.ParseError):
            cm.read_context(io.BytesIO(data), "csv")

    def test_bad_cell_rejected(self):
        data = b",a\ng1,2\n"
        with pytest.raises(cm.ParseError) as err:
            cm.read_context(io.BytesIO(data), "csv")
        assert err.value.line == 2

    def test_roundtrip_identity(self, k1):
        assert roundtrip(k1, "csv") == k1


def test_unknown_format_rejected(k1):
    with pytest.raises(ValueError):
        cm.write_context(k1, "xml")
    with pytest.raises(ValueError):
        cm.read_context(io.BytesIO(b""), "xml")
