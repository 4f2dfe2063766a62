"""Command-line interface: exit codes, file outputs, determinism."""

import json

import pytest

import conceptmine as cm
from conceptmine.cli import main, parse_index_list


def run(args):
    return main(args)


@pytest.fixture
def k1_path(k1, tmp_path):
    path = tmp_path / "k1.cxt"
    path.write_bytes(cm.write_context(k1, "cxt"))
    return str(path)


class TestMine:
    def test_k1_concept_count(self, k1_path, tmp_path):
        out = tmp_path / "lat.json"
        assert run(["mine", "--input", k1_path, "--out", str(out), "--quiet"]) == 0
        data = json.loads(out.read_text())
        assert data["n_concepts"] == 4

    def test_fig2_has_eight_concepts(self, tmp_path):
        ctx_path = tmp_path / "fig2.cxt"
        out = tmp_path / "lat.json"
        assert run(["demo", "--which", "fig2", "--out", str(ctx_path), "--quiet"]) == 0
        assert run(["mine", "--input", str(ctx_path), "--out", str(out), "--quiet"]) == 0
        assert json.loads(out.read_text())["n_concepts"] == 8

    def test_malformed_input_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.cxt"
        bad.write_text("Q\nnot a context\n")
        assert run(["mine", "--input", str(bad), "--out", str(tmp_path / "x"), "--quiet"]) == 2
        assert "line 1" in capsys.readouterr().err

    def test_budget_exceeded_exits_3(self, k1_path, tmp_path):
        assert run(
            ["mine", "--input", k1_path, "--out", str(tmp_path / "x"), "--budget", "2", "--quiet"]
        ) == 3

    def test_missing_file_exits_2(self, tmp_path):
        assert run(["mine", "--input", str(tmp_path / "nope.cxt"), "--quiet"]) == 2


class TestIndexCommand:
    def test_columns_and_rows(self, k1_path, tmp_path):
        out = tmp_path / "idx.csv"
        assert run(
            ["index", "--input", k1_path, "--indices", "support,stability", "--out", str(out), "--quiet"]
        ) == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "concept_id,extent_size,intent_size,support,stability"
        assert len(lines) == 5

    def test_parameterized_header(self, k1_path, tmp_path):
        out = tmp_path / "idx.csv"
        assert run(
            ["index", "--input", k1_path, "--indices", "robustness:alpha=0.3", "--out", str(out), "--quiet"]
        ) == 0
        assert "robustness:alpha=0.3" in out.read_text().split("\n")[0]

    def test_unknown_kind_exits_2(self, k1_path, tmp_path, capsys):
        assert run(["index", "--input", k1_path, "--indices", "nosuch", "--quiet"]) == 2
        assert "valid kinds" in capsys.readouterr().err

    def test_agrees_with_library_run(self, k1, k1_path, tmp_path):
        out = tmp_path / "idx.csv"
        run(["index", "--input", k1_path, "--indices", "support,delta_l", "--out", str(out), "--quiet"])
        lat = cm.enumerate_concepts(k1)
        table = cm.compute_index_table(lat, ["support", "delta_l"])
        assert out.read_text() == table.to_csv()

    def test_mine_then_index_ids_align(self, k1, k1_path, tmp_path):
        lat_out = tmp_path / "lat.json"
        idx_out = tmp_path / "idx.csv"
        run(["mine", "--input", k1_path, "--out", str(lat_out), "--quiet"])
        run(["index", "--input", k1_path, "--indices", "support", "--out", str(idx_out), "--quiet"])
        lattice = json.loads(lat_out.read_text())
        rows = idx_out.read_text().strip().split("\n")[1:]
        for concept, row in zip(lattice["concepts"], rows):
            cid, ext_size, int_size, supp = row.split(",")
            assert int(cid) == concept["id"]
            assert int(ext_size) == len(concept["extent"])
            assert int(int_size) == len(concept["intent"])


class TestStudies:
    def test_correlate_smoke(self, tmp_path):
        out = tmp_path / "corr.csv"
        code = run(
            [
                "correlate", "--densities", "0.3", "--contexts", "2",
                "--objects", "8:12", "--attributes", "4:6",
                "--indices", "support,delta_l", "--seed", "5", "--out", str(out), "--quiet",
            ]
        )
        assert code == 0
        assert out.read_text().startswith("density,index_a,index_b,mean_tau,sd_tau")

    def test_approx_smoke(self, tmp_path):
        out = tmp_path / "approx.csv"
        code = run(
            [
                "approx", "--densities", "0.3", "--rates", "0.4,0.6", "--contexts", "2",
                "--objects", "10:14", "--attributes", "5:7", "--seed", "5",
                "--out", str(out), "--quiet",
            ]
        )
        assert code == 0
        assert len(out.read_text().strip().split("\n")) == 3

    def test_noise_smoke(self, k1_path, tmp_path):
        base = tmp_path / "blocks.cxt"
        base.write_bytes(cm.write_context(cm.fixtures.block_context(40, 4, 2), "cxt"))
        out = tmp_path / "noise.csv"
        code = run(
            [
                "noise", "--input", str(base), "--rates", "0.1", "--trials", "3",
                "--indices", "support,robustness:alpha=0.5", "--seed", "5",
                "--out", str(out), "--quiet",
            ]
        )
        assert code == 0
        assert out.read_text().startswith("rate,index,mean_auc,trials_used")

    def test_noise_degenerate_rate_zero(self, tmp_path):
        base = tmp_path / "blocks.cxt"
        base.write_bytes(cm.write_context(cm.fixtures.block_context(20, 4, 2), "cxt"))
        out = tmp_path / "noise.csv"
        assert run(
            ["noise", "--input", str(base), "--rates", "0", "--trials", "2",
             "--indices", "support", "--seed", "1", "--out", str(out), "--quiet"]
        ) == 0
        rows = out.read_text().strip().split("\n")[1:]
        assert all(row.endswith(",0") for row in rows)  # no usable trials


class TestGenAndDemo:
    def test_gen_density_zero_all_dots(self, tmp_path):
        out = tmp_path / "ctx.cxt"
        assert run(
            ["gen", "--objects", "4", "--attributes", "3", "--density", "0",
             "--seed", "1", "--out", str(out), "--quiet"]
        ) == 0
        body = out.read_text().strip().split("\n")[-4:]
        assert body == ["...", "...", "...", "..."]

    def test_gen_invalid_dims_exit_2(self, tmp_path):
        assert run(
            ["gen", "--objects", "0", "--attributes", "3", "--density", "0.5",
             "--seed", "1", "--out", str(tmp_path / "x"), "--quiet"]
        ) == 2

    def test_demo_dimensions(self, tmp_path):
        for which, dims in (("fig2", (7, 11)), ("table1", (20, 19))):
            out = tmp_path / f"{which}.cxt"
            assert run(["demo", "--which", which, "--out", str(out), "--quiet"]) == 0
            ctx = cm.read_context(str(out), "cxt")
            assert ctx.shape == dims


class TestDeterminism:
    def test_rerun_byte_identical(self, k1_path, tmp_path):
        pairs = [
            (["mine", "--input", k1_path], "m.json"),
            (["index", "--input", k1_path, "--indices", "support,stability,robustness:alpha=0.3"], "i.csv"),
            (["gen", "--objects", "12", "--attributes", "6", "--density", "0.4", "--seed", "7"], "g.cxt"),
            (["demo", "--which", "table1"], "d.cxt"),
            (
                ["correlate", "--densities", "0.3", "--contexts", "2", "--objects", "8:12",
                 "--attributes", "4:6", "--indices", "support,delta_l", "--seed", "3"],
                "c.csv",
            ),
        ]
        for args, name in pairs:
            a = tmp_path / ("a_" + name)
            b = tmp_path / ("b_" + name)
            assert run(args + ["--out", str(a), "--quiet"]) == 0
            assert run(args + ["--out", str(b), "--quiet"]) == 0
            assert a.read_bytes() == b.read_bytes(), name


class TestIndexListParsing:
    def test_parameters_attach_to_previous_spec(self):
        specs = parse_index_list("stability:samples=100,seed=7,support")
        assert [s.column_name() for s in specs] == [
            "stability:samples=100,seed=7",
            "support",
        ]

    def test_parameter_named_like_a_kind_stays_a_parameter(self):
        # "similarity=smc" must attach to the spec, not start a new one
        specs = parse_index_list(
            "similarity:neighbor_aggregation=minimum,similarity=smc,support"
        )
        assert [s.kind for s in specs] == ["similarity", "support"]
        assert specs[0].params["similarity"] == "smc"

    def test_default_study_lists_parse(self):
        from conceptmine.cli import DEFAULT_CORRELATION_INDICES, DEFAULT_NOISE_INDICES

        assert len(parse_index_list(",".join(DEFAULT_CORRELATION_INDICES))) == len(
            DEFAULT_CORRELATION_INDICES
        )
        assert len(parse_index_list(",".join(DEFAULT_NOISE_INDICES))) == len(
            DEFAULT_NOISE_INDICES
        )

    def test_unknown_head_rejected(self):
        with pytest.raises(ValueError):
            parse_index_list("support,bogus")

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            parse_index_list(" , ")
