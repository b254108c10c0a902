import json
import random
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from helpers import PENT_DEN, PENT_NUM, R_INF, R_X, R_Y, up_to_sign
from toricres import Poly, format_polynomial, parse_polynomial as P
from toricres.cli import main, parse_input, run
from toricres.cox import split_torus
from toricres.ratfunc import RationalFunction
from toricres.textio import DuplicateDefinition, PolySyntaxError, UndeclaredSymbol

INPUTS = Path(__file__).resolve().parent.parent / "inputs"


def run_cli(tmp_path, text, *flags, capsys):
    src = tmp_path / "in.txt"
    src.write_text(text)
    code = main([str(src), *flags])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(tmp_path, text, *flags, capsys):
    code, out, _ = run_cli(tmp_path, text, "--json", *flags, capsys=capsys)
    return code, json.loads(out)


def poly_from_terms(terms):
    out = Poly.zero()
    for t in terms:
        out = out + P(t["coefficient"]) * Poly.monomial(t["monomial"], 1)
    return out


# -- parsing --------------------------------------------------------------------------


def test_grammar_example():
    spec = parse_input("vars t1, t2; params a0..a2; f1 = a0*t1^2 + a1*t1*t2 + a2*t2^2; query residue m=(3,3) of (f1, f1);")
    assert tuple(spec.tvars) == ("t1", "t2")
    f1 = spec.definitions["f1"].poly
    assert set(split_torus(f1, ("t1", "t2"))) == {(2, 0), (1, 1), (0, 2)}
    assert spec.query.command == "global-residue"


def test_laurent_parse():
    assert sorted(P("t1^-1 + 1").terms) == [(-1,), (0,)]


def test_missing_star_position():
    with pytest.raises(PolySyntaxError) as err:
        parse_input("vars t1;\nparams a0;\nf = a0 t1;\n")
    assert (err.value.line, err.value.col) == (3, 7)


def test_undeclared_and_duplicate():
    with pytest.raises(UndeclaredSymbol):
        parse_input("vars t1;\nf = b*t1;\n")
    with pytest.raises(DuplicateDefinition):
        parse_input("vars t1;\nparams a0;\nparams a0;\n")


# -- canonical text --------------------------------------------------------------------


def test_format_examples():
    assert format_polynomial(P("a0*b1 - a1*b0")) == "a0*b1 - a1*b0"
    assert format_polynomial(Poly.zero()) == "0"
    assert format_polynomial(P("-x^2 + 3/4*x*y - y")) == "-x^2 + 3/4*x*y - y"


def test_round_trip_1000():
    rng = random.Random(99)
    gens = ("a0", "a1", "t1", "t2")
    for _ in range(1000):
        p = Poly.zero(gens)
        for _ in range(rng.randint(0, 6)):
            e = tuple(rng.randint(-2, 3) for _ in gens)
            c = Fraction(rng.randint(-20, 20), rng.choice([1, 1, 2, 3, 7]))
            p = p + Poly.monomial(e, c, gens)
        assert P(format_polynomial(p)) == p


# -- reports ---------------------------------------------------------------------------------


def test_facet_resultants_command(tmp_path, capsys):
    code, rep = run_json(tmp_path, (INPUTS / "system01.txt").read_text(), capsys=capsys)
    assert code == 0 and rep["status"] == "ok"
    got = [P(f["resultant"]["text"]) for f in rep["results"]["facets"]]
    for target in (R_INF, R_X, R_Y):
        assert any(up_to_sign(g, target) for g in got)


def test_json_reparses_to_structure(tmp_path, capsys):
    code, rep = run_json(tmp_path, (INPUTS / "mixed_pentagon.txt").read_text(), capsys=capsys)
    assert code == 0
    val = rep["results"]["value"]
    num = P(val["numerator"]["text"])
    den = P(val["denominator"]["text"])
    assert num == poly_from_terms(val["numerator"]["terms"])
    assert den == poly_from_terms(val["denominator"]["terms"])
    assert RationalFunction(num, den) == RationalFunction(PENT_NUM, PENT_DEN)
    # the textual value is the canonical text of its parts
    assert val["text"] == f"({val['numerator']['text']}) / ({val['denominator']['text']})"
    fac = rep["results"]["denominator"]
    prod = P(fac["unit"])
    for f in fac["factors"]:
        prod = prod * P(f["factor"]["text"]) ** f["exponent"]
    assert prod == den
    exps = sorted(f["exponent"] for f in fac["factors"])
    assert exps == [1, 1, 3]


def test_same_seed_identical_reports(tmp_path, capsys):
    text = (INPUTS / "mixed_pentagon.txt").read_text()
    _, a, _ = run_cli(tmp_path, text, "--json", "--seed", "5", capsys=capsys)
    _, b, _ = run_cli(tmp_path, text, "--json", "--seed", "5", capsys=capsys)
    assert a == b
    assert json.loads(a)["certificates"]["seed"] == 5


def test_timing_only_on_request(tmp_path, capsys):
    text = (INPUTS / "system01.txt").read_text()
    _, rep = run_json(tmp_path, text, capsys=capsys)
    assert "timing" not in rep
    _, rep = run_json(tmp_path, text, "--timing", capsys=capsys)
    assert rep["timing"]["seconds"] >= 0


def test_phi_matrix_command(tmp_path, capsys):
    code, rep = run_json(tmp_path, (INPUTS / "scroll_phi.txt").read_text(), capsys=capsys)
    assert code == 0
    r = rep["results"]
    assert r["shape"] == [10, 10]
    assert r["presentation"]["brackets"][0] == "[125]"


# -- exit codes --------------------------------------------------------------------------


def test_exit_code_syntax_error(tmp_path, capsys):
    code, out, err = run_cli(tmp_path, "vars t1;\nparams a0;\nf = a0 t1;\n", capsys=capsys)
    assert code == 1
    assert "line 3, column 7" in err


def test_exit_code_degenerate(tmp_path, capsys):
    text = ("vars t1, t2;\nf1 = t1^2 - t2^2 + t1 + t2 + 1;\n"
            "f2 = 2*t1^2 - t1*t2 - t2^2 + 3*t1 - t2 + 5;\nquery global-residue t^(1,1) of (f1, f2);\n")
    code, rep = run_json(tmp_path, text, capsys=capsys)
    assert code == 2
    assert rep["error"]["type"] == "FacetResultantVanishes"
    assert rep["error"]["facet"] == [-1, -1]


def test_exit_code_unsupported(tmp_path, capsys):
    text = "vars t1, t2, t3, t4;\nf1 = 1 + t1 + t2 + t3 + t4;\nquery polytope-info of (f1);\n"
    code, rep = run_json(tmp_path, text, capsys=capsys)
    assert code == 3


def test_missing_file(capsys):
    assert main(["/nonexistent/file.txt"]) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "toricres", str(INPUTS / "system01.txt")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "facet 1" in proc.stdout


def test_run_without_query():
    rep = run(parse_input("vars t1;\n"))
    assert rep.exit_code == 1 and rep.error["type"] == "NoQuery"
