import json
import os
import subprocess

import numpy as np
import pytest

import treeshift


def test_parse_and_classify():
    s = treeshift.parse("root w\nedge w a 1\nedge w b 2\n")
    assert s.size == 3
    assert s.labels == ["w", "a", "b"]
    assert s.norm_sq("w") == "5"
    r = treeshift.classify(s, scope="full")
    assert r["c_opt"] == "inf"
    assert r["abc3"] is False


def test_rational_norms():
    s = treeshift.parse("root w\nedge w a 1/3\nedge w b 2/3\n")
    assert s.norm_sq("w") == "5/9"


def test_parse_error():
    with pytest.raises(ValueError, match="line 1"):
        treeshift.parse("edge w a 1\n")


def test_family_and_oracle():
    s = treeshift.family("fig1", depth=5, c="4")
    assert treeshift.classify(s)["c_opt"] == "4"
    report = treeshift.oracle(s, seed=1, vectors=10)
    assert report["agree"] is True


def test_parameter_error():
    with pytest.raises(ValueError):
        treeshift.family("fig2", c="1")


def test_matrix_is_the_shift():
    s = treeshift.family("eunb", depth=2)
    a = s.matrix()
    assert a.shape == (7, 7)
    col = a[:, 0]
    assert np.allclose(np.sort(np.abs(col)), [0] * 6 + [1])


def test_transported_qpath():
    s = treeshift.family("path", depth=8, q="2")
    r = treeshift.classify(s, phi="id", psi="q:2")
    assert r["generalized_c_opt"] == "1"


def test_izonp():
    assert treeshift.izonp(1.0, 1.0)["holds"] is True
    assert treeshift.izonp(1.0, -1.0)["precondition"] is False


def test_round_trip_spec():
    s = treeshift.family("fig3", depth=3)
    again = treeshift.parse(s.to_spec())
    assert again.to_spec() == s.to_spec()
    assert s.to_dot().startswith("digraph shift {")


@pytest.mark.skipif("TREESHIFT_CLI" not in os.environ, reason="CLI path not given")
def test_cli_matches_module():
    out = subprocess.run(
        [os.environ["TREESHIFT_CLI"], "classify", "--family", "fig2", "--c", "4", "--depth", "5"],
        check=True,
        capture_output=True,
        text=True,
    ).stdout
    cli = json.loads(out)
    mod = treeshift.classify(treeshift.family("fig2", depth=5, c="4"))
    assert cli == mod
