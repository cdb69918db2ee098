"""CLI behavior: subcommands, exit codes, file outputs, env seed fallback."""

import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from qdo.cli import main

MODELS = Path(__file__).resolve().parent.parent / "models"


def run_cli(*args) -> int:
    return main(list(args))


class TestSimpson3Command:
    def test_exact_table(self, capsys):
        assert run_cli("simpson3", "--backend", "exact") == 0
        out = capsys.readouterr().out
        assert "Observational, Overall" in out and "Causal, Overall (do)" in out
        assert "-0.061" in out and "+0.231" in out

    def test_exact_json_values(self, tmp_path, capsys):
        path = tmp_path / "report.json"
        assert run_cli("simpson3", "--backend", "exact", "--json", str(path)) == 0
        data = json.loads(path.read_text())
        effects = {g["label"]: g["effect"] for g in data["groups"]}
        assert effects["Observational, G=0"] == pytest.approx(0.166, abs=5e-3)
        assert effects["Observational, G=1"] == pytest.approx(0.296, abs=5e-3)
        assert effects["Observational, Overall"] == pytest.approx(-0.061, abs=5e-3)
        assert effects["Causal, Overall (do)"] == pytest.approx(0.232, abs=5e-3)

    def test_sampled_cis_exclude_zero(self, tmp_path, capsys):
        path = tmp_path / "report.json"
        code = run_cli(
            "simpson3", "--backend", "sampled", "--shots", "15000",
            "--trials", "30", "--seed", "7", "--json", str(path),
        )
        assert code == 0
        data = json.loads(path.read_text())
        signs = []
        for g in data["groups"]:
            lo, hi = g["ci"]
            assert lo > 0 or hi < 0  # all four CIs exclude zero at these settings
            signs.append(g["effect"] > 0)
        assert signs == [True, True, False, True]

    def test_noisy_run_keeps_causal_positive(self, tmp_path, capsys):
        path = tmp_path / "report.json"
        code = run_cli(
            "simpson3", "--backend", "sampled", "--noise", "0.02", "--shots", "1024",
            "--trials", "3", "--seed", "0", "--json", str(path),
        )
        assert code == 0
        data = json.loads(path.read_text())
        effects = {g["label"]: g["effect"] for g in data["groups"]}
        assert effects["Causal, Overall (do)"] > 0


class TestHealthcare10Command:
    def test_exact_bias_column(self, capsys):
        assert run_cli("healthcare10", "--backend", "exact") == 0
        out = capsys.readouterr().out
        assert "Bias" in out
        assert "Causal Intervention (do)" in out
        assert "+0.000" in out  # causal bias is exactly zero

    def test_custom_stratifier_runs(self, tmp_path, capsys):
        path = tmp_path / "report.json"
        code = run_cli(
            "healthcare10", "--backend", "exact", "--stratify", "Insurance", "--json", str(path)
        )
        assert code == 0
        data = json.loads(path.read_text())
        labels = [g["label"] for g in data["groups"]]
        assert "Stratified by Insurance" in labels
        strat = next(g for g in data["groups"] if g["label"] == "Stratified by Insurance")
        assert len(strat["strata"]) == 2


class TestRunCommand:
    def test_fixture_matches_builtin_experiment(self, tmp_path, capsys):
        ours = tmp_path / "run.json"
        builtin = tmp_path / "builtin.json"
        assert run_cli(
            "run", str(MODELS / "simpson3.json"), "--treatment", "T", "--outcome", "O",
            "--stratify", "G", "--effect", "--json", str(ours),
        ) == 0
        assert run_cli("simpson3", "--backend", "exact", "--json", str(builtin)) == 0
        run_effects = {g["label"]: g for g in json.loads(ours.read_text())["groups"]}
        builtin_effects = {g["label"]: g["effect"] for g in json.loads(builtin.read_text())["groups"]}
        strata = {s["value"]: s["effect"] for s in run_effects["Stratified by G"]["strata"]}
        assert strata[0] == pytest.approx(builtin_effects["Observational, G=0"], abs=1e-12)
        assert strata[1] == pytest.approx(builtin_effects["Observational, G=1"], abs=1e-12)
        assert run_effects["Observational, Overall"]["effect"] == pytest.approx(
            builtin_effects["Observational, Overall"], abs=1e-12
        )
        assert run_effects["Causal, Overall (do)"]["effect"] == pytest.approx(
            builtin_effects["Causal, Overall (do)"], abs=1e-12
        )

    def test_do_on_root_equals_conditioning(self, capsys):
        assert run_cli("run", str(MODELS / "simpson3.json"), "--do", "G=1") == 0
        out = capsys.readouterr().out
        line = next(l for l in out.splitlines() if l.startswith("P(T=1)"))
        assert float(line.split("=")[-1]) == pytest.approx(math.sin(0.4) ** 2, abs=1e-6)

    def test_plain_run_prints_observational_marginals(self, tmp_path, capsys):
        payload = tmp_path / "dist.json"
        assert run_cli("run", str(MODELS / "simpson3.json"), "--json", str(payload)) == 0
        out = capsys.readouterr().out
        line = next(l for l in out.splitlines() if l.startswith("P(T=1)"))
        expected_t = (math.sin(1.2) ** 2 + math.sin(0.4) ** 2) / 2
        assert float(line.split("=")[-1]) == pytest.approx(expected_t, abs=1e-6)
        data = json.loads(payload.read_text())
        assert data["interventions"] == []
        assert len(data["probabilities"]) == 8
        assert sum(data["probabilities"]) == pytest.approx(1.0, abs=1e-10)

    def test_malformed_json_exits_2_without_output(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json", encoding="utf-8")
        report = tmp_path / "report.json"
        code = run_cli("run", str(bad), "--effect", "--treatment", "T",
                       "--outcome", "O", "--json", str(report))
        assert code == 2
        assert not report.exists()
        assert "error" in capsys.readouterr().err

    def test_do_bad_syntax_exits_2(self, capsys):
        assert run_cli("run", str(MODELS / "simpson3.json"), "--do", "G=2") == 2

    def test_effect_requires_roles(self, capsys):
        assert run_cli("run", str(MODELS / "simpson3.json"), "--effect") == 2

    def test_zero_mass_conditional_exits_3(self, tmp_path, capsys):
        model = {
            "name": "stuck",
            "variables": [
                {"name": "T", "qubit": 0, "prep": "ground"},
                {"name": "O", "qubit": 1, "prep": {"rotation": 0.4}},
            ],
            "edges": [],
        }
        path = tmp_path / "stuck.json"
        path.write_text(json.dumps(model), encoding="utf-8")
        code = run_cli("run", str(path), "--treatment", "T", "--outcome", "O", "--effect")
        assert code == 3
        assert "zero mass" in capsys.readouterr().err

    def test_noise_with_exact_backend_exits_2(self, capsys):
        assert run_cli("simpson3", "--backend", "exact", "--noise", "0.01") == 2

    def test_print_circuit(self, capsys):
        assert run_cli("run", str(MODELS / "simpson3.json"), "--print-circuit") == 0
        out = capsys.readouterr().out
        assert "qubits 3" in out and "CRY q0=0 q1 2.400000" in out

    def test_print_circuit_expanded(self, capsys):
        assert run_cli("run", str(MODELS / "simpson3.json"), "--print-circuit", "--expanded") == 0
        out = capsys.readouterr().out
        assert "X q0\nCRY q0=1 q1 2.400000\nX q0" in out


class TestValidateCommand:
    @pytest.mark.parametrize("fixture", ["simpson3.json", "healthcare10.json"])
    def test_catalog_fixtures_pass(self, fixture, capsys):
        assert run_cli("validate", str(MODELS / fixture)) == 0
        out = capsys.readouterr().out
        assert "max |P_engine - P_oracle|" in out

    def test_uniform_with_parents_exits_2(self, tmp_path, capsys):
        model = {
            "name": "hplus",
            "variables": [
                {"name": "A", "qubit": 0, "prep": "ground"},
                {"name": "B", "qubit": 1, "prep": "uniform"},
            ],
            "edges": [
                {"parent": "A", "child": "B", "control_value": 1, "angle": 0.5, "sign": 1}
            ],
        }
        path = tmp_path / "hplus.json"
        path.write_text(json.dumps(model), encoding="utf-8")
        assert run_cli("validate", str(path)) == 2
        assert "oracle-unsupported prep" in capsys.readouterr().err

    def test_equivalence_failure_exits_1(self, monkeypatch, capsys):
        import qdo.cli as cli_mod
        from qdo.engine import Distribution

        def broken_oracle(model):
            values = np.zeros(1 << model.n_qubits)
            values[0] = 1.0
            return Distribution(model.n_qubits, values)

        monkeypatch.setattr(cli_mod, "enumerate_joint", broken_oracle)
        assert run_cli("validate", str(MODELS / "simpson3.json")) == 1
        out = capsys.readouterr().out
        assert "FAILED at bitstring" in out


class TestChartCommand:
    def test_chart_from_report(self, tmp_path, capsys):
        report = tmp_path / "report.json"
        svg = tmp_path / "chart.svg"
        assert run_cli("simpson3", "--backend", "exact", "--json", str(report)) == 0
        assert run_cli("chart", str(report), "--svg", str(svg), "--reference", "0.231") == 0
        text = svg.read_text()
        assert text.count("<rect") == 5 and "stroke-dasharray" in text

    def test_missing_report_exits_2(self, tmp_path, capsys):
        assert run_cli("chart", str(tmp_path / "none.json"), "--svg", str(tmp_path / "x.svg")) == 2


class TestSeedHandling:
    def test_env_seed_fallback(self, tmp_path, capsys, monkeypatch):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        monkeypatch.setenv("QDO_SEED", "55")
        assert run_cli("simpson3", "--backend", "sampled", "--shots", "500",
                       "--trials", "2", "--json", str(a)) == 0
        monkeypatch.delenv("QDO_SEED")
        assert run_cli("simpson3", "--backend", "sampled", "--shots", "500",
                       "--trials", "2", "--seed", "55", "--json", str(b)) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_bad_env_seed_exits_2(self, capsys, monkeypatch):
        monkeypatch.setenv("QDO_SEED", "pi")
        assert run_cli("simpson3", "--backend", "sampled", "--shots", "100", "--trials", "2") == 2


def test_module_entrypoint_smoke():
    proc = subprocess.run(
        [sys.executable, "-m", "qdo.cli", "simpson3", "--backend", "exact"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert "Causal, Overall (do)" in proc.stdout
