import io
import json
import xml.etree.ElementTree as ET

import jsonschema
import pytest
from flint import fmpq
from hypothesis import given

from plane_germs.bipoly import BiPoly
from plane_germs.cli import main
from plane_germs.newton import newton_diagram
from plane_germs.parser import (ExponentError, ParseError, UnknownVariableError, parse_any,
                                parse_germ, serialize)
from plane_germs.render import render_ascii, render_diagram, render_svg
from plane_germs.schema import RESULTS, payload_schema

from conftest import xy
from strategies import bipolys


# -- parser -----------------------------------------------------------------

def test_parse_cusp_support():
    assert xy("y^2 - x^3").coeffs() == {(0, 2): 1, (3, 0): -1}


def test_parse_rational_coefficient():
    assert xy("(1/2)*x*y + x^4").coeffs() == {(1, 1): fmpq(1, 2), (4, 0): 1}


def test_negative_exponent_rejected():
    with pytest.raises(ExponentError):
        xy("x^(-1)")


def test_fractional_exponent_rejected():
    with pytest.raises(ExponentError):
        xy("x^1/2")


def test_error_position():
    with pytest.raises(ParseError) as e:
        xy("x +\n  y * * 2")
    assert (e.value.line, e.value.column) == (2, 7)


def test_unknown_variable():
    with pytest.raises(UnknownVariableError, match="'z'"):
        xy("x + z")


def test_uv_variables():
    assert parse_germ("v + u^3", ("u", "v")) == xy("y + x^3")
    p, names = parse_any("v^2 - u^3")
    assert names == ("u", "v") and p == xy("y^2 - x^3")


def test_unary_minus_binds_to_whole_factor():
    assert xy("-x^2") == -xy("x^2")
    assert xy("-(x+y)^2") == -(xy("x+y") ** 2)


def test_empty_input():
    with pytest.raises(ParseError, match="empty"):
        xy("   ")


@given(bipolys(max_degree=6, max_terms=5))
def test_serialize_roundtrip(p):
    assert xy(serialize(p)) == p
    assert parse_germ(serialize(p, ("u", "v")), ("u", "v")) == p


# -- rendering --------------------------------------------------------------

def test_ascii_cusp():
    pic = render_ascii(newton_diagram(xy("y^2 - x^3")), support=[(3, 0), (0, 2)])
    rows = pic.splitlines()
    assert rows[-2].startswith("  0 . . . # -")
    assert rows[-4].startswith("  2 # . . .")
    assert "|" in rows[0]


def test_ascii_marks_edge_interior_points():
    pic = render_ascii(newton_diagram(xy("y^2 - x^2")))
    assert "*" in pic


def test_svg_is_well_formed():
    d = newton_diagram(xy("x^2*y + x*y^3"))
    root = ET.fromstring(render_svg(d, title="example"))
    assert root.tag.endswith("svg")
    texts = [t.text for t in root.iter() if t.tag.endswith("text")]
    assert "1/2" in texts


def test_render_formats():
    d = newton_diagram(BiPoly.const(1))
    assert render_diagram(d, "ascii").startswith(b"  1")
    assert render_diagram(d, "svg").startswith(b"<svg")
    with pytest.raises(ValueError):
        render_diagram(d, "png")


# -- CLI --------------------------------------------------------------------

def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run("--json", *argv)
    return code, json.loads(out)


def test_cli_diagram_json():
    code, payload = run_json("diagram", "y^2-x^3+x^4")
    assert code == 0
    assert payload["result"]["vertices"] == [[0, 2], [3, 0]]


def test_cli_discriminant():
    code, payload = run_json("discriminant", "x", "y^2-x^3")
    assert code == 0
    assert "diagram" in payload["result"]
    code, out, _ = run("discriminant", "y", "y^2-x^3")
    assert code == 0 and "u^4" in out


def test_cli_negative_parameter():
    code, out, _ = run("nu-from-milnor", "x", "y*(y-x)", "-w", "1,2", "-t", "-1/4")
    assert code == 0 and "nu = 1" in out


def test_cli_leading_minus_expression():
    code, payload = run_json("diagram", "-x^2+y^3")
    assert code == 0 and payload["result"]["vertices"] == [[0, 3], [2, 0]]


def test_cli_algebraic_number_payload():
    code, payload = run_json("factor-edge", "v^2-2*u^2", "-w", "1,1")
    assert code == 0
    roots = payload["result"]["roots"]
    assert roots[0]["t"]["minpoly"] == ["-2", "0", "1"]


def test_cli_svg_written(tmp_path):
    path = tmp_path / "d.svg"
    code, _, _ = run("--svg", str(path), "diagram", "y^2-x^3")
    assert code == 0
    assert ET.parse(path).getroot().tag.endswith("svg")


def test_cli_parse_error_exit_code():
    code, _, err = run("diagram", "x^(-1)")
    assert code == 2 and "column" in err


def test_cli_non_isolated_exit_code():
    code, _, _ = run("milnor", "x*y^2")
    assert code == 2


def test_cli_capacity_exit_code():
    code, payload = run_json("--max-tower-degree", "1", "puiseux", "y^2-2*x^2")
    assert code == 3
    assert payload["error"]["kind"] == "capacity error"


def test_cli_verify_main():
    code, payload = run_json("verify-main", "x", "y^2-x^3", "--u1", "y", "--u2", "x")
    assert code == 0
    assert payload["result"]["verdict"] == "holds"


def test_cli_atypical():
    code, payload = run_json("atypical", "x", "y*(y-x)", "-w", "1,2")
    assert code == 0
    assert [v["t"] for v in payload["result"]["values"]] == [{"rational": "-1/4"}]


def test_module_entry_point():
    import subprocess
    import sys
    r = subprocess.run([sys.executable, "-m", "plane_germs", "milnor", "y^2-x^3"],
                       capture_output=True, text=True, check=True)
    assert "2" in r.stdout


# -- published JSON schema ----------------------------------------------------

SCHEMA_RUNS = [
    ("diagram", "y^2-x^3"),
    ("initial", "y^2-x^3+x^2*y"),
    ("inw", "-w", "2,3", "y^2-x^3"),
    ("factor-edge", "-w", "1,2", "y^2-x^2*y-2*x^4"),
    ("rescale-equal", "y^2-x^3", "4*y^2-x^3"),
    ("puiseux", "--terms", "4", "y^2-2*x^3"),
    ("semigroup", "y^2-x^3"),
    ("intersect", "y", "x"),
    ("milnor", "y^2-x^3"),
    ("casas-check", "x", "y^2-x^3", "v"),
    ("jacobian", "x", "y^2-x^3"),
    ("direct-image", "y", "x", "y^2-x^3"),
    ("discriminant", "x", "y*(y-x)"),
    ("jacobian-diagram", "x", "y^2-x^3"),
    ("hironaka", "y", "x", "y^2-x^3"),
    ("verify-main", "x", "y^2-x^3", "--u1", "y", "--u2", "x"),
    ("nu-from-milnor", "x", "y^2-x^3", "-w", "1,3", "-t", "1"),
    ("nu-from-intersection", "x", "y^2-x^3", "-w", "1,3", "-t", "1"),
    ("atypical", "x", "y*(y-x)", "-w", "1,2"),
    ("equisingular", "y^2-x^3", "y^2-x^5"),
    ("key-lemma", "x", "y", "--u1", "y", "--u2", "x", "-N", "3"),
    ("tc3-check", "y^2-x^3", "x", "x+y"),
    ("rescaling-check", "x", "y^2-x^3", "--u1", "1+x"),
]


@pytest.mark.parametrize("argv", SCHEMA_RUNS, ids=[a[0] for a in SCHEMA_RUNS])
def test_json_payload_validates(argv):
    code, payload = run_json(*argv)
    assert code == 0
    jsonschema.validate(payload, payload_schema(argv[0]))


def test_every_subcommand_has_a_schema_run():
    assert {a[0] for a in SCHEMA_RUNS} == set(RESULTS)


@pytest.mark.parametrize("argv,code", [
    (("diagram", "y^2-x^3 +"), 2),
    (("milnor", "x*y^2"), 2),
    (("--max-tower-degree", "1", "puiseux", "y^2-2*x^2"), 3),
])
def test_json_error_payload_validates(argv, code):
    got, payload = run_json(*argv)
    assert got == code
    jsonschema.validate(payload, payload_schema())


def test_schema_rejects_bad_verdict():
    _, payload = run_json("verify-main", "x", "y^2-x^3", "--u1", "y", "--u2", "x")
    payload["result"]["verdict"] = "maybe"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(payload, payload_schema("verify-main"))


def test_schema_requires_counterexample_on_failure():
    _, payload = run_json("verify-main", "x", "y^2-x^3", "--u1", "y", "--u2", "x")
    payload["result"]["verdict"] = "fails"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(payload, payload_schema("verify-main"))
