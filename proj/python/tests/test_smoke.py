import pytest

import r2sf


def test_field_context():
    info = r2sf.field_info(3, 1, 3)
    assert info["size"] == 27 and info["q"] == 3
    assert info["generator"] == "g"


def test_dA_q3n3_linear_set():
    assert r2sf.weight_spectrum("dA", 3, 1, 3, a="g") == [348, 4, 0]
    assert r2sf.zero_divisor_free("dA", 3, 1, 3, a="g")


def test_nuclei_routes_agree():
    fast = r2sf.nuclei("dA", 3, 1, 3, a="g")
    brute = r2sf.nuclei("dA", 3, 1, 3, method="bruteforce", a="g")
    for key in ("left", "middle", "right", "center"):
        assert fast[key] == brute[key]
    assert (brute["left"], brute["middle"], brute["right"], brute["center"]) == (27, 3, 9, 3)


def test_dB_over_F3_is_rejected():
    with pytest.raises(r2sf.ConstraintViolation, match="for all b when q=3"):
        r2sf.spread("dB", 3, 1, 3, b="g")
    code, report = r2sf.run("build", family="dB", p=3, n=3, b="g")
    assert code == 2 and report["status"] == "error"


def test_distinguish_dB_q5n3():
    out = r2sf.distinguish("dB", 5, 1, 3, b="g")
    assert out["compatible"] == ["GTF"]


def test_report_runner():
    code, report = r2sf.run("verify-paper", suite="q2n5-lst")
    assert code == 0
    assert report["schema_version"] == r2sf.REPORT_SCHEMA_VERSION
    assert all(c["pass"] for c in report["checks"])
    assert "q3n3" in r2sf.suite_names()
