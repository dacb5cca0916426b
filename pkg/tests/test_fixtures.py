"""The shipped fixture corpus: annotated radii and the CLI exit-code contract."""

import json
from pathlib import Path

import numpy as np
import pytest

from hourglass.cli import EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, main
from hourglass.descriptors import parse_descriptor
from hourglass.linalg import spectral_radius_gelfand, spectral_radius_power
from hourglass.sets import expr_expand
from hourglass.spectral import jsr_lsr_bounds

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def _annotations(name):
    return json.loads((FIXTURES / name).read_text())["annotations"]


def test_nilpotent_pair_annotations():
    want = _annotations("nilpotent_pair.json")
    s = expr_expand(parse_descriptor(FIXTURES / "nilpotent_pair.json"))
    for m in s:
        assert spectral_radius_power(m) == pytest.approx(
            want["rho_each"], abs=1e-9
        )
    mid = s.matrices.mean(axis=0)
    assert spectral_radius_power(mid) == pytest.approx(
        want["rho_midpoint"], abs=1e-9
    )
    summary = jsr_lsr_bounds(s, 2)
    assert summary.rho_hat[1] == pytest.approx(want["rho_hat_2"], abs=1e-9)


def test_diagonal_pair_annotations():
    want = _annotations("diagonal_pair.json")
    s = expr_expand(parse_descriptor(FIXTURES / "diagonal_pair.json"))
    for m in s:
        assert spectral_radius_power(m) == pytest.approx(
            want["rho_each"], abs=1e-9
        )
    mid = s.matrices.mean(axis=0)
    assert spectral_radius_power(mid) == pytest.approx(
        want["rho_midpoint"], abs=1e-9
    )


def test_sign_pair_annotations():
    # Members carry negative entries, so the norm-root route computes their
    # radii; the hull's zero mixture is asserted on the zero matrix itself.
    want = _annotations("sign_pair.json")
    s = expr_expand(parse_descriptor(FIXTURES / "sign_pair.json"))
    for m in s:
        assert spectral_radius_gelfand(m) == pytest.approx(
            want["rho_each"], abs=1e-10
        )
    mixture = s.matrices.mean(axis=0)
    np.testing.assert_array_equal(mixture, np.zeros((2, 2)))
    assert spectral_radius_gelfand(mixture) == want["rho_zero_mixture"]
    summary = jsr_lsr_bounds(s, 3)
    assert all(v == pytest.approx(1.0, abs=1e-12) for v in summary.rho_hat)
    assert all(v == pytest.approx(1.0, abs=1e-12) for v in summary.norm_upper)


class TestExitCodeContract:
    def test_diagonal_pair_commands(self, capsys):
        path = str(FIXTURES / "diagonal_pair.json")
        assert main(["extremal", "--input", path, "--direction", "min",
                     "--format", "json"]) == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert out["results"]["rho"] == pytest.approx(2.0, abs=1e-9)

    def test_nilpotent_pair_finiteness_fails(self, capsys):
        path = str(FIXTURES / "nilpotent_pair.json")
        code = main(["finiteness", "--input", path, "--n-max", "2",
                     "--sandwich-samples", "0", "--format", "json"])
        assert code == EXIT_CHECK_FAILED
        out = json.loads(capsys.readouterr().out)
        words = {tuple(f["word_max"]) for f in out["results"]["failures"]}
        assert words & {(0, 1), (1, 0)}

    def test_sign_pair_jsr_sequences(self, capsys):
        path = str(FIXTURES / "sign_pair.json")
        assert main(["jsr", "--input", path, "--n-max", "3",
                     "--format", "csv"]) == EXIT_OK
        rows = capsys.readouterr().out.strip().splitlines()[1:]
        for row in rows:
            _, rho_hat, rho_check, upper, lower = row.split(",")
            assert float(rho_hat) == pytest.approx(1.0, abs=1e-12)
            assert float(upper) == pytest.approx(1.0, abs=1e-12)

    def test_sign_pair_radius_needs_nonnegative(self, capsys):
        # The certified blockwise iteration is a nonnegative-only kernel.
        path = str(FIXTURES / "sign_pair.json")
        assert main(["radius", "--input", path]) == EXIT_USAGE
