"""Quick check that the extension imports and agrees with the CLI on a fixture."""

import json
import pathlib

import ordforge as of

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "crates" / "ordforge" / "tests" / "fixtures"


def main():
    w, big = of.Ordinal("w"), of.Ordinal("W")
    assert w < big and of.Ordinal("1") + w == w
    assert str(of.veblen(of.Ordinal("0"), big + of.Ordinal.nat(2))) == "w^(W+2)"
    assert of.psi(of.Ordinal("0")) < big
    assert not of.in_b(of.Ordinal("0"), of.psi(of.Ordinal("0")))
    assert of.h_contains(of.Ordinal("psi(1)"), of.Ordinal("0"), [of.Ordinal("psi(1)")])

    f = of.Formula("ex z. (ex y in z) (all w in y) ~ w = w")
    assert f.is_sigma() and not f.is_delta0()
    assert str(f.rank()) == "W"
    assert of.sat_stage(f, 2) and not of.sat_stage(f, 1)
    assert len(of.stage(4)) == 16
    assert of.eval_bounded(of.Formula("(all x in a) x in b"), [("a", "{{}}"), ("b", "{{},{{}}}")])

    src = (FIXTURES / "pair_cut.proof").read_text()
    assert json.loads(of.check_proof(src))["ok"]
    report = json.loads(of.analyze(src, "ikpp"))
    assert report["bound"]["m"] == 1
    assert str(of.final_bound(src, "ikpp")) == "psi(w^(w^(W+1)))"
    bad = (FIXTURES / "eigen_violation.proof").read_text()
    try:
        of.final_bound(bad)
    except ValueError as e:
        assert "does not check" in str(e)
    else:
        raise AssertionError("unchecked proof was analyzed")
    print("smoke test ok")


if __name__ == "__main__":
    main()
