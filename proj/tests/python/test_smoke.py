import json
import math

import pytest

import ldopt


def test_model_basics():
    m = ldopt.Model.parse("logistic")
    assert m.id == "logistic"
    assert m.parity
    assert m.psi(1, 0.0) == pytest.approx(0.25)
    assert m.psi(2, 1.5) == pytest.approx(1.5 * m.psi(1, 1.5))
    assert ldopt.Model.parse("power:m=-1").degenerate
    assert ldopt.Model.parse("michaelis-menten").natural_domain[0] == 0.0


def test_errors_map_to_python_exceptions():
    with pytest.raises(ldopt.DomainError):
        ldopt.Model.parse("gompertz")
    with pytest.raises(ldopt.Error):
        ldopt.Model.parse("michaelis-menten").psi(1, -1.0)
    with pytest.raises(ldopt.UnclassifiableRegion):
        ldopt.optimize("cloglog", (-1.0, 1.0))


def test_classify_and_breakpoints():
    assert ldopt.classify("poisson-loglinear", -3.0, 3.0)["verdict"] == "TypeII"
    bps = ldopt.find_breakpoints("cloglog", -5.0, 5.0)
    assert [round(c, 4) for c, _ in bps] == [0.0491, 0.4660]


def test_reduce_dominates_input():
    support = [(-1.5, 0.2), (-0.3, 0.2), (0.4, 0.2), (1.1, 0.2), (1.9, 0.2)]
    out = ldopt.reduce("logistic", support, (-2.0, 2.0))
    assert len(out["support"]) <= 2
    assert out["valid"]
    before = ldopt.c_matrix("logistic", support, (-2.0, 2.0))
    after = ldopt.c_matrix("logistic", out["support"], (-2.0, 2.0))
    assert ldopt.loewner_compare(after, before) in ("Dominates", "Equal")


def test_merge_pair_keeps_first_two_moments():
    m = ldopt.Model.parse("logistic")
    c, share = ldopt.merge_pair("logistic", 0.0, 0.5, 2.0, 0.5)
    for j in (1, 2):
        target = 0.5 * m.psi(j, 0.5) + 0.5 * m.psi(j, 2.0)
        assert share * m.psi(j, 0.0) + (1 - share) * m.psi(j, c) == pytest.approx(target, abs=1e-12)


def test_optimize_and_verify():
    out = ldopt.optimize("logistic", (-math.inf, math.inf))
    (lo, w_lo), (hi, w_hi) = out["support"]
    assert hi == pytest.approx(-lo)
    assert hi == pytest.approx(1.5434046384182, abs=1e-9)
    assert w_lo == pytest.approx(0.5, abs=1e-8)
    report = ldopt.verify_equivalence_D("logistic", out["support"], out["region"])
    assert report["certified"]


def test_cli_round_trip(tmp_path):
    doc = {"model": "poisson-loglinear", "params": {"alpha": 0, "beta": 1},
           "region": [-5, 1], "support": []}
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(doc))
    code, out, err = ldopt.run_cli(["optimize", str(path)])
    assert code == 0, err
    result = json.loads(out)
    assert [p["point"] for p in result["support"]] == pytest.approx([-1.0, 1.0])

    bad = dict(doc, extra=1)
    path.write_text(json.dumps(bad))
    code, _, err = ldopt.run_cli(["optimize", str(path)])
    assert code == 1
    assert "extra" in err
