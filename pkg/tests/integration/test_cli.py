"""Integration tests for the command-line interface."""

import json
import logging
import pytest
from pathlib import Path
import sys

import yaml
from click.testing import CliRunner

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from scripts.fc_affine import cli
from src.core.golden import DEFAULT_GOLDEN_FILE


class TestCli:
    """Test the fc-affine commands end to end."""

    @pytest.fixture
    def runner(self):
        return CliRunner()

    @pytest.fixture
    def config_file(self, tmp_path):
        """Quiet configuration: no progress bars, no cache, errors only."""
        path = tmp_path / "config.yaml"
        path.write_text(yaml.safe_dump({
            "logging": {"level": "ERROR"},
            "oracle": {"show_progress": False, "fc_only_above_n": 4, "closure_limit": 100000},
            "cache": {"enabled": False},
            "verify": {"golden_file": str(DEFAULT_GOLDEN_FILE)},
        }))
        return path

    @pytest.fixture(autouse=True)
    def reset_logging(self):
        """Handlers bound to the runner's streams are dropped after each test."""
        yield
        logging.getLogger("fc_affine").handlers = []

    def invoke(self, runner, config_file, *args):
        return runner.invoke(cli, ["--config", str(config_file), *args])

    def test_series_text(self, runner, config_file):
        """Comma-separated coefficients of f_3."""
        result = self.invoke(runner, config_file, "series", "--n", "3", "--qcap", "6")
        assert result.exit_code == 0
        assert result.output.strip() == "1,3,6,6,6,6,6"

    def test_series_json(self, runner, config_file):
        """JSON export carries decimal strings."""
        result = self.invoke(runner, config_file, "series", "--n", "7", "--qcap", "15", "--format", "json")
        assert result.exit_code == 0
        data = json.loads(result.output)
        assert data["n"] == 7
        assert data["coefficients"][-1] == "490"
        assert len(data["coefficients"]) == 16

    def test_series_rank_two(self, runner, config_file):
        """n = 2 is a valid rank."""
        result = self.invoke(runner, config_file, "series", "--n", "2", "--qcap", "4")
        assert result.exit_code == 0
        assert result.output.strip() == "1,2,2,2,2"

    def test_series_invalid_rank(self, runner, config_file):
        """n < 2 is a usage error."""
        result = self.invoke(runner, config_file, "series", "--n", "1")
        assert result.exit_code == 2

    def test_series_cache(self, runner, tmp_path):
        """A second run is served from the cache directory."""
        config = tmp_path / "cached.yaml"
        config.write_text(yaml.safe_dump({
            "logging": {"level": "ERROR"},
            "cache": {"enabled": True, "dir": str(tmp_path / "cache")},
        }))
        first = self.invoke(runner, config, "series", "--n", "4", "--qcap", "6")
        second = self.invoke(runner, config, "series", "--n", "4", "--qcap", "6")
        assert first.output == second.output
        assert second.output.strip() == "1,4,10,16,18,16,18"
        assert (tmp_path / "cache" / "series_cache.json").exists()

    def test_verify_golden(self, runner, config_file):
        """The golden scope passes for one rank."""
        result = self.invoke(runner, config_file, "verify", "--scope", "golden", "--n", "4")
        assert result.exit_code == 0
        assert "[PASS] golden f_4" in result.output

    def test_verify_oracle(self, runner, config_file):
        """BFS agrees with the formula for n = 4 up to length 12."""
        result = self.invoke(runner, config_file, "verify", "--scope", "oracle", "--n", "4", "--maxlen", "12")
        assert result.exit_code == 0
        assert "[PASS] oracle f_4 up to length 12" in result.output

    def test_verify_corrupted_golden(self, runner, config_file, tmp_path):
        """A corrupted table exits 1 naming n, degree, expected and got."""
        data = yaml.safe_load(DEFAULT_GOLDEN_FILE.read_text())
        for entry in data["series"]:
            if entry["n"] == 3:
                entry["coefficients"][2] = 5
        corrupted = tmp_path / "corrupted.yaml"
        corrupted.write_text(yaml.safe_dump(data))
        result = self.invoke(runner, config_file, "verify", "--scope", "golden", "--n", "3",
                             "--golden-file", str(corrupted))
        assert result.exit_code == 1
        assert "f_3 mismatch: n=3, degree=2, expected=5, got=6" in result.output

    def test_abacus_example(self, runner, config_file):
        """Negative entries follow the -- sentinel."""
        result = self.invoke(runner, config_file, "abacus", "--", "-4,-1,1,14")
        assert result.exit_code == 0
        assert "Length: 11" in result.output
        assert "Class: long" in result.output
        assert "Fully commutative: no" in result.output

    def test_abacus_identity(self, runner, config_file):
        """The identity is short with profile (n)(0)(0)."""
        result = self.invoke(runner, config_file, "abacus", "--format", "json", "--", "1,2,3,4")
        data = json.loads(result.output)
        assert data["length"] == 0
        assert data["classification"] == "short"
        assert data["profile"] == "(4)(0)(0)"

    def test_abacus_normalized_positions(self, runner, config_file):
        """Unbalanced lowest-bead positions are balanced first."""
        result = self.invoke(runner, config_file, "abacus", "--format", "json", "--", "1,3,4,6,8,11")
        data = json.loads(result.output)
        assert data["normalized"] == [1, 3, 4, 6, 8, 11]
        assert data["profile"] == "(3)(1)(2)"
        assert data["length"] == 4

    def test_abacus_invalid(self, runner, config_file):
        """Windows with repeated residues exit 1."""
        result = self.invoke(runner, config_file, "abacus", "--", "1,3")
        assert result.exit_code == 1

    def test_abacus_unsorted_window(self, runner, config_file):
        """An unsorted window is a usage error rather than being sorted silently."""
        result = self.invoke(runner, config_file, "abacus", "--", "14,-4,-1,1")
        assert result.exit_code == 2
        assert "not strictly increasing" in result.output
        result = self.invoke(runner, config_file, "abacus", "--", "1,1,2")
        assert result.exit_code == 2

    def test_classify(self, runner, config_file):
        """FC test and decomposition of [-1,-4,14,1]."""
        result = self.invoke(runner, config_file, "classify", "--format", "json", "--", "-1,-4,14,1")
        assert result.exit_code == 0
        data = json.loads(result.output)
        assert data["length"] == 13
        assert data["fully_commutative"] is False
        assert data["coset_representative"] == [-4, -1, 1, 14]
        assert data["finite_factor"] == [2, 1, 4, 3]

    def test_stats(self, runner, config_file):
        """Row counts add up to Catalan numbers."""
        result = self.invoke(runner, config_file, "stats", "--max-size", "4", "--format", "json")
        data = json.loads(result.output)
        assert sum(int(row["count"]) for row in data["rows"]) == 1 + 1 + 2 + 5 + 14

    def test_histogram(self, runner, config_file):
        """Totals and FC counts per length."""
        result = self.invoke(runner, config_file, "histogram", "--n", "3", "--maxlen", "4")
        data = json.loads(result.output)
        assert [row["fc"] for row in data["lengths"]] == ["1", "3", "6", "6", "6"]
        assert [row["total"] for row in data["lengths"]] == ["1", "3", "6", "9", "12"]

    def test_histogram_fc_only(self, runner, config_file):
        """Totals are null when only FC elements were expanded."""
        result = self.invoke(runner, config_file, "histogram", "--n", "3", "--maxlen", "2", "--fc-only")
        data = json.loads(result.output)
        assert all(row["total"] is None for row in data["lengths"])

    def test_periodicity(self, runner, config_file):
        """f_6 has period 6 from q^7."""
        result = self.invoke(runner, config_file, "periodicity", "--n", "6", "--format", "json")
        data = json.loads(result.output)
        assert data["period"] == 6
        assert data["onset"] == 7
        assert data["tail"] == ["150", "156", "152", "156", "150", "158"]

    def test_shortcut(self, runner, config_file):
        """The shortcut series equals f_4."""
        result = self.invoke(runner, config_file, "shortcut", "--n", "4", "--qcap", "8")
        assert result.exit_code == 0
        assert result.output.strip() == "1,4,10,16,18,16,18,16,18"

    def test_output_is_stable(self, runner, config_file):
        """Identical flags give byte-identical output."""
        args = ("series", "--n", "5", "--qcap", "12", "--format", "json")
        assert self.invoke(runner, config_file, *args).output == self.invoke(runner, config_file, *args).output
