import pytest

import msocard

R1 = "(ex1 x. x in X) & all1 x. all1 y. (y < x & x in X) -> y in X"


def test_decide():
    assert msocard.decide("ex1 x. all1 y. ~(y < x)")
    assert not msocard.decide("all1 x. ex1 y. y < x")
    assert msocard.decide("ex2 X. R(X) & ex1 x. x in X", {"R": "up:0,2,0"})


def test_compile_r1_is_ones():
    a = msocard.compile(R1)
    assert a.labels == ["X"]
    assert a.accepts("111")
    assert not a.accepts("101")
    assert a.shortest() == "1"
    again = msocard.Dfa.from_text(a.to_text())
    assert again.equivalent(a)


def test_analyze():
    assert msocard.analyze_oracle("eqcard")["verdict"] == "not-definable"
    rep = msocard.analyze_formula(msocard.template("EvenCard"))
    assert rep["verdict"] == "definable"
    assert msocard.analyze_formula(R1)["verdict"] == "not-a-cardinality-relation"


def test_strup():
    assert msocard.check_strup("primesx:le3", 4, [1, 1], 200) is None
    assert msocard.check_strup("eqcard", 0, [1, 1], 20) is not None


def test_evaluate_plus():
    plus = msocard.template("PlusDef")
    env = {"EqCard": "eqcard"}
    assert msocard.evaluate(plus, 10, env, {"x": 3, "y": 4, "z": 7})
    assert not msocard.evaluate(plus, 10, env, {"x": 3, "y": 4, "z": 6})
    assert msocard.evaluate("X sub Y", 4, sets={"X": [1], "Y": [1, 2]})


def test_quasieq_report():
    rep = msocard.quasieq("pow:2", 3, 6, 32)
    assert rep["sound"]
    assert rep["stabilized_from"] is not None and rep["stabilized_from"] <= 8
    assert "summary" in rep["text"]


def test_errors_are_value_errors():
    with pytest.raises(msocard.Error):
        msocard.decide("x < y")
    with pytest.raises(ValueError):
        msocard.compile("ex1 x. x <")
    with pytest.raises(ValueError):
        msocard.template("Nope")


def test_cli_round_trip():
    code, out, err = msocard.run_cli(["sat", "-f", "ex1 x. ex1 y. x<y", "--qmax", "4"])
    assert (code, out, err) == (0, "sat q=2\n", "")
    assert "F" in msocard.template_names()
