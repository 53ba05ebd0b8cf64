"""Config parsing/validation and the command-line front end."""

import json

import numpy as np
import pytest

from codedcomp import ConfigError, parse_config
from codedcomp.cli import main, read_embedded_config

TABLE_CONFIG = {
    "scheme": "rcs",
    "workers": 40,
    "degrees": [1, 2, 3],
    "q": 0.15,
    "mu": 10,
    "alpha": 0.01,
    "trials": 10000,
}


class TestParseConfig:
    def test_valid_timing_config(self):
        cfg = parse_config(TABLE_CONFIG)
        assert cfg.scheme == "rcs"
        assert cfg.workers == 40
        assert cfg.degrees == (1, 2, 3)
        assert cfg.q == 0.15
        assert cfg.k_total == 40
        assert cfg.mode == "computation"

    def test_degree_criterion_named(self):
        with pytest.raises(ConfigError) as err:
            parse_config({"scheme": "rcs", "workers": 10, "d": [2, 3]})
        assert any("criterion (i)" in v for v in err.value.violations)

    def test_alias_spellings_accepted(self):
        a = parse_config({"scheme": "rcs", "workers": 10, "d": [1, 2]})
        b = parse_config({"scheme": "rcs", "workers": 10, "m": [1, 2]})
        c = parse_config({"scheme": "rcs", "workers": 10, "degrees": [1, 2]})
        assert a.degrees == b.degrees == c.degrees == (1, 2)

    def test_uppercase_key_aliases(self):
        cfg = parse_config({"scheme": "rcs", "K": 40, "d": [1, 2, 3], "q": 0.15})
        assert cfg.workers == 40
        grouped = parse_config(
            {
                "scheme": "rcs-general",
                "K": 4,
                "N": 2,
                "degrees": [1, 1],
                "z": [1, 2],
            }
        )
        assert grouped.groups == 2
        mds = parse_config({"scheme": "mcc", "K": 4, "Kbar": 2})
        assert mds.kbar == 2

    def test_mode_value_aliases(self):
        long_form = parse_config(
            {"scheme": "rcs", "workers": 6, "d": [1, 2], "mode": "coded-communication"}
        )
        assert long_form.mode == "communication"
        assert (
            parse_config(
                {"scheme": "rcs", "workers": 6, "d": [1, 2], "mode": "coded-computation"}
            ).mode
            == "computation"
        )

    def test_train_section_aliases(self):
        cfg = parse_config(
            {
                "scheme": "rcs",
                "workers": 4,
                "d": [1, 1],
                "train": {"d": 400, "n": 2000},
            }
        )
        assert cfg.train.dim == 400
        assert cfg.train.samples == 2000

    def test_empty_config_lists_required_fields(self):
        with pytest.raises(ConfigError) as err:
            parse_config({})
        text = "\n".join(err.value.violations)
        assert "scheme" in text
        assert "workers" in text

    def test_all_violations_collected(self):
        with pytest.raises(ConfigError) as err:
            parse_config(
                {"scheme": "rcs", "workers": 10, "degrees": [2, 1], "q": 1.5, "mu": -2}
            )
        text = "\n".join(err.value.violations)
        assert "criterion (i)" in text
        assert "criterion (ii)" in text
        assert "q:" in text
        assert "mu:" in text

    def test_unknown_field_flagged(self):
        with pytest.raises(ConfigError) as err:
            parse_config({"scheme": "uc-mmc", "workers": 4, "load": 2, "wat": 1})
        assert any(v.startswith("wat:") for v in err.value.violations)

    def test_scheme_requirements(self):
        with pytest.raises(ConfigError, match="kbar"):
            parse_config({"scheme": "mcc", "workers": 4})
        with pytest.raises(ConfigError, match="load"):
            parse_config({"scheme": "uc-mmc", "workers": 4})
        with pytest.raises(ConfigError, match="z"):
            parse_config(
                {"scheme": "rcs-general", "workers": 4, "degrees": [1, 1], "groups": 2}
            )

    def test_gc_mode_fixed(self):
        cfg = parse_config({"scheme": "gc", "workers": 6, "load": 2})
        assert cfg.mode == "communication"
        with pytest.raises(ConfigError, match="mode"):
            parse_config({"scheme": "gc", "workers": 6, "load": 2, "mode": "computation"})

    def test_grouped_config(self):
        cfg = parse_config(
            {
                "scheme": "rcs-general",
                "workers": 40,
                "degrees": [1, 1, 4, 8],
                "groups": 2,
                "z": [1, 2, 1, 1, 2, 2, 1, 1, 1, 1, 2, 2, 2, 2],
            }
        )
        assert cfg.k_total == 80

    def test_z_length_checked(self):
        with pytest.raises(ConfigError, match="z:"):
            parse_config(
                {
                    "scheme": "rcs-general",
                    "workers": 40,
                    "degrees": [1, 1, 4, 8],
                    "groups": 2,
                    "z": [1, 2, 1],
                }
            )

    def test_overrides_take_precedence(self):
        cfg = parse_config(TABLE_CONFIG, {"q": 0.3, "seed": 99})
        assert cfg.q == 0.3
        assert cfg.seed == 99

    def test_round_trip(self):
        cfg = parse_config(TABLE_CONFIG)
        assert parse_config(cfg.to_dict()) == cfg

    def test_round_trip_with_train(self):
        cfg = parse_config(
            {
                **TABLE_CONFIG,
                "train": {"dim": 400, "samples": 2000, "eta": 0.1, "iterations": 50},
            }
        )
        assert parse_config(cfg.to_dict()) == cfg

    def test_train_dimension_checked(self):
        with pytest.raises(ConfigError, match="train.dim"):
            parse_config(
                {**TABLE_CONFIG, "train": {"dim": 401, "samples": 2000}}
            )

    def test_file_input(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(TABLE_CONFIG))
        assert parse_config(path) == parse_config(TABLE_CONFIG)

    def test_string_lists_parsed(self):
        cfg = parse_config({"scheme": "rcs", "workers": 10, "degrees": "1,2,3"})
        assert cfg.degrees == (1, 2, 3)


class TestCli:
    def run(self, *argv):
        return main(list(argv))

    def test_invalid_config_exit_code(self, tmp_path, capsys):
        code = self.run(
            "simulate", "--scheme", "rcs", "--workers", "10",
            "--degrees", "2,3", "--out", str(tmp_path),
        )
        assert code == 2
        err = capsys.readouterr().err
        assert "criterion (i)" in err

    def test_encode_pinned_assignment(self, tmp_path, capsys):
        code = self.run(
            "encode", "--scheme", "rcs", "--workers", "20",
            "--degrees", "1,2,3", "--offsets", "1,4,11,15,6,18",
            "--out", str(tmp_path),
        )
        assert code == 0
        payload = json.loads((tmp_path / "assignment.json").read_text())
        worker1 = payload["assignment"]["per_worker"][0]
        assert [t["blocks"] for t in worker1["tasks"]] == [[1], [4, 11], [15, 6, 18]]
        assert payload["config"]["seed"] == 1729  # fixed default

    def test_enumerate_outputs_expected_rows(self, tmp_path):
        code = self.run(
            "enumerate", "--scheme", "hybrid-example", "--workers", "4",
            "--q", "0", "--out", str(tmp_path),
        )
        assert code == 0
        lines = (tmp_path / "success_counts.csv").read_text().splitlines()
        assert lines[0].startswith("# config: ")
        assert lines[1] == "workers_at_2,workers_at_1,workers_at_0,successful_vectors,total_vectors"
        rows = [line.split(",") for line in lines[2:]]
        assert len(rows) == 9
        assert rows[0] == ["4", "0", "0", "1", "1"]
        assert rows[-1] == ["0", "4", "0", "1", "1"]

    def test_simulate_deterministic_outputs(self, tmp_path, capsys):
        args = [
            "simulate", "--scheme", "uc-mmc", "--workers", "8", "--load", "2",
            "--q", "0.25", "--trials", "50", "--seed", "7",
        ]
        code = self.run(*args, "--out", str(tmp_path / "a"))
        assert code == 0
        code = self.run(*args, "--out", str(tmp_path / "b"))
        assert code == 0
        for name in ("trials.csv", "summary.json"):
            a = (tmp_path / "a" / name).read_bytes()
            b = (tmp_path / "b" / name).read_bytes()
            assert a == b, name

    def test_embedded_config_round_trips(self, tmp_path):
        self.run(
            "simulate", "--scheme", "uc-mmc", "--workers", "8", "--load", "2",
            "--q", "0.25", "--trials", "20", "--seed", "7", "--out", str(tmp_path),
        )
        for name in ("trials.csv", "summary.json"):
            embedded = read_embedded_config(tmp_path / name)
            cfg = parse_config(embedded)
            assert cfg.to_dict() == embedded

    def test_summary_contents(self, tmp_path):
        self.run(
            "simulate", "--scheme", "mcc", "--workers", "8", "--kbar", "4",
            "--trials", "30", "--out", str(tmp_path),
        )
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["results"]["trials"] == 30
        assert summary["results"]["mean_messages"] == 4.0
        assert summary["results"]["completion_rate"] == 1.0

    def test_train_command(self, tmp_path):
        code = self.run(
            "train", "--scheme", "rcs", "--workers", "8", "--degrees", "1,2",
            "--q", "0.25", "--dim", "40", "--samples", "100",
            "--eta", "0.1", "--iterations", "5", "--out", str(tmp_path),
        )
        assert code == 0
        lines = (tmp_path / "training.csv").read_text().splitlines()
        assert lines[1] == "iteration,loss,iteration_time,messages,recovered_fraction"
        assert len(lines) == 2 + 5
        losses = [float(line.split(",")[1]) for line in lines[2:]]
        assert losses[-1] < losses[0]
        embedded = read_embedded_config(tmp_path / "training.csv")
        assert embedded["train"]["dim"] == 40

    def test_train_requires_section(self, tmp_path, capsys):
        code = self.run(
            "train", "--scheme", "rcs", "--workers", "8", "--degrees", "1,2",
            "--out", str(tmp_path),
        )
        assert code == 2

    def test_config_file_with_flag_override(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({**TABLE_CONFIG, "trials": 10}))
        code = self.run(
            "simulate", "--config", str(path), "--trials", "15",
            "--out", str(tmp_path / "out"),
        )
        assert code == 0
        embedded = read_embedded_config(tmp_path / "out" / "summary.json")
        assert embedded["trials"] == 15
        assert embedded["q"] == 0.15  # from the file
