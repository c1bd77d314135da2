"""Harness tests: determinism, CSV schema, metric sanity, CLI plumbing."""

import numpy as np
import pytest
import yaml

from jbmocz.cli import load_config, main
from jbmocz.experiments import (
    ExperimentConfig,
    MetricRow,
    jutted_params,
    run_ber_ofdm,
    run_ber_sequence,
    run_design_curves,
    run_experiment,
    run_loopback,
    run_papr_table,
    run_rotation_mse,
    run_stability_report,
    write_csv,
)


class TestConfig:
    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            ExperimentConfig(kind="mystery")

    def test_empty_sweep_rejected(self):
        with pytest.raises(ValueError):
            ExperimentConfig(kind="ber_sequence", ebn0_db=())

    def test_bad_trials(self):
        with pytest.raises(ValueError):
            ExperimentConfig(kind="papr_table", trials=0)

    def test_scheme_selection(self):
        cfg = ExperimentConfig(kind="ber_sequence", scheme="jutted", num_zeros=32)
        assert cfg.constellation() == jutted_params(32)
        explicit = ExperimentConfig(kind="ber_sequence", num_zeros=8,
                                    radius=1.3, asymmetry=1.2)
        assert explicit.constellation().radius == 1.3

    def test_unpinned_design_rejected(self):
        with pytest.raises(ValueError):
            ExperimentConfig(kind="ber_sequence", scheme="jutted", num_zeros=7).constellation()


class TestDeterminism:
    def test_byte_identical_csv_across_thread_counts(self, tmp_path):
        outs = []
        for threads, name in ((1, "a.csv"), (3, "b.csv")):
            cfg = ExperimentConfig(kind="ber_sequence", scheme="huffman", num_zeros=16,
                                   channel="awgn", ebn0_db=(2.0, 6.0), trials=9000,
                                   seed=11, threads=threads)
            path = tmp_path / name
            write_csv(run_ber_sequence(cfg), path, header_note="note")
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]

    def test_repeat_run_identical(self):
        cfg = ExperimentConfig(kind="rotation_mse", scheme="jutted", num_zeros=31,
                               ebn0_db=(4.0,), trials=500, seed=7,
                               estimator_bins=(64,))
        a = run_rotation_mse(cfg)
        b = run_rotation_mse(cfg)
        assert a == b


class TestBerSequenceRows:
    def test_noiseless_is_error_free(self):
        cfg = ExperimentConfig(kind="ber_sequence", scheme="huffman", num_zeros=16,
                               channel="awgn", ebn0_db=(200.0,), trials=200, seed=0)
        rows = run_ber_sequence(cfg)
        assert all(r.value == 0.0 for r in rows)

    def test_monotone_in_ebn0(self):
        # >= 1e5 bits per point; allow a single inversion
        cfg = ExperimentConfig(kind="ber_sequence", scheme="huffman", num_zeros=32,
                               channel="awgn", ebn0_db=(0.0, 3.0, 6.0, 9.0),
                               trials=4000, seed=1)
        bers = [r.value for r in run_ber_sequence(cfg) if r.metric == "ber"]
        inversions = sum(a < b for a, b in zip(bers, bers[1:]))
        assert inversions <= 1

    def test_values_in_range(self):
        cfg = ExperimentConfig(kind="ber_sequence", scheme="jutted", num_zeros=32,
                               coding="polar", channel="fading", channel_taps=3,
                               rotation="uniform", correct=True,
                               ebn0_db=(5.0,), trials=300, seed=2)
        for row in run_ber_sequence(cfg):
            assert np.isfinite(row.value) and 0.0 <= row.value <= 1.0


class TestOtherRunners:
    def test_design_curves_rows(self):
        cfg = ExperimentConfig(kind="design_curves", num_zeros=8,
                               asymmetry=(1.0, 1.15), seed=0)
        rows = run_design_curves(cfg)
        by = {(r.param_value, r.metric): r.value for r in rows}
        # asymmetry 1.0 anchors the relative stability scale
        assert by[(1.0, "c_min")] / by[(1.0, "c_min")] == 1.0
        assert by[(1.15, "c_min")] <= by[(1.0, "c_min")]
        assert by[(1.15, "papr_db")] >= by[(1.0, "papr_db")]
        assert by[(1.0, "r_star")] > 1.0

    def test_papr_table(self):
        rows = run_papr_table(ExperimentConfig(kind="papr_table"))
        values = {r.experiment: r.value for r in rows}
        assert values["papr-jutted-numeric"] == pytest.approx(7.27, abs=0.1)
        assert all(np.isfinite(v) for v in values.values())

    def test_stability_report(self):
        cfg = ExperimentConfig(kind="stability_report", num_zeros=8,
                               radius=1.176, asymmetry=1.0)
        rows = run_stability_report(cfg)
        by = {r.metric: r.value for r in rows}
        assert by["c_bar"] == pytest.approx(1.149, abs=0.005)
        assert by["c_min"] == pytest.approx(1.048, abs=0.005)

    def test_ofdm_runner_emits_all_schemes(self):
        cfg = ExperimentConfig(kind="ber_ofdm", num_zeros=32, ebn0_db=(12.0,),
                               trials=40, seed=3)
        rows = run_ber_ofdm(cfg)
        names = {r.experiment for r in rows}
        assert names == {"ber-ofdm-fm", "ber-ofdm-fm_chest", "ber-ofdm-tm"}
        assert all(0.0 <= r.value <= 1.0 for r in rows)

    def test_loopback_noiseless(self, tmp_path):
        cfg = ExperimentConfig(kind="loopback", seed=5)
        report = run_loopback(cfg, iq_path=str(tmp_path / "pkt.iq"))
        assert report.header_errors == 0
        assert report.payload_errors == 0
        assert (tmp_path / "pkt.iq").exists()

    def test_dispatch(self):
        rows = run_experiment(ExperimentConfig(kind="papr_table"))
        assert all(isinstance(r, MetricRow) for r in rows)


class TestCsv:
    def test_schema_and_notes(self, tmp_path):
        rows = [MetricRow("exp", "ebn0_db", 4.0, "ber", 0.125, 100, 7)]
        path = tmp_path / "out.csv"
        write_csv(rows, path, header_note="energy convention")
        lines = path.read_text().splitlines()
        assert lines[0] == "# energy convention"
        assert lines[1] == "experiment,param_name,param_value,metric,value,trials,seed"
        assert lines[2] == "exp,ebn0_db,4,ber,0.125,100,7"


class TestCli:
    def test_papr_table_command(self, tmp_path):
        out = tmp_path / "papr.csv"
        assert main(["papr-table", "--out", str(out)]) == 0
        assert out.exists()
        body = out.read_text()
        assert "papr-jutted-numeric" in body

    def test_config_file_and_overrides(self, tmp_path):
        config = tmp_path / "run.yaml"
        config.write_text(yaml.safe_dump({
            "scheme": "huffman", "num_zeros": 16, "channel": "awgn",
            "ebn0_db": [3.0], "trials": 400,
        }))
        out = tmp_path / "seq.csv"
        assert main(["ber-seq", "--config", str(config), "--seed", "9",
                     "--out", str(out)]) == 0
        content = out.read_text()
        assert ",9" in content and "ber-seq-huffman" in content

    def test_unknown_config_key(self, tmp_path):
        config = tmp_path / "bad.yaml"
        config.write_text("warp_factor: 9\n")
        with pytest.raises(ValueError):
            load_config("papr_table", str(config))

    def test_stability_command(self, tmp_path):
        out = tmp_path / "stab.csv"
        assert main(["stability", "--out", str(out)]) == 0
        assert "c_bar" in out.read_text()
