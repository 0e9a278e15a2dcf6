import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhol.config import SessionConfig, config_from_dict, config_to_dict, load_config
from qhol.errors import (
    ConfigError,
    ExprError,
    ExprSyntaxError,
    FormatError,
    ModeMismatch,
    NegativePowerNotAllowed,
    UnknownGenerator,
)
from qhol.expr import Product, Sum, evaluate, lower_ast, parse_expr
from qhol.free_series import FreeSeries
from qhol.qcalculus import QSeries
from qhol.qmatrix import QMatrix
from qhol.serialize import deserialize, serialize

FREE = SessionConfig(2, "free")


def test_parse_two_product_terms():
    ast = parse_expr("f1*f2 - (0+1i)*f2*f1", FREE)
    assert isinstance(ast.root, Sum)
    assert ast.root.signs == (1, -1)
    assert all(isinstance(t, Product) for t in ast.root.terms)
    assert lower_ast(ast, FREE).terms == {(1, 2): 1, (2, 1): -1j}


def test_laurent_and_polydisk_modes():
    q = QMatrix.single(2, 1j)
    laurent = SessionConfig(2, "q_laurent", q)
    assert lower_ast(parse_expr("z1^-2*z2", laurent), laurent).terms == {(-2, 1): 1}
    with pytest.raises(NegativePowerNotAllowed):
        parse_expr("z1^-2", SessionConfig(2, "q_polydisk", q))


def test_lowering_examples():
    assert evaluate("f1*f1", FREE).terms == {(1, 1): 1}
    qv = 0.3 + 0.6j
    cfg = SessionConfig(2, "q_polydisk", QMatrix.single(2, qv))
    assert evaluate("z1*z2", cfg).terms == {(1, 1): 1}
    assert evaluate("z2*z1", cfg).terms == pytest.approx({(1, 1): 1 / qv})
    assert evaluate("2*(f1+f2)^2", FREE).terms == {(1, 1): 2, (1, 2): 2, (2, 1): 2, (2, 2): 2}


def test_grammar_details():
    assert evaluate("-f1^2", FREE).terms == {(1, 1): -1}
    assert evaluate("2i*f1 + i", FREE).terms == {(1,): 2j, (): 1j}
    assert evaluate("(1.5-2i)*f2", FREE).terms == {(2,): 1.5 - 2j}
    assert evaluate("1e-3*f1", FREE).terms == {(1,): 1e-3}
    assert evaluate("f1 - f1", FREE).terms == {}
    assert evaluate("f1^0", FREE).terms == {(): 1}


@pytest.mark.parametrize(
    "text, offset",
    [("f1 f2", 3), ("f1 +", 4), ("(f1", 3), ("f1 # f2", 3), ("f1^f2", 3), ("", 0), ("é*f1", 0)],
)
def test_syntax_errors_carry_byte_offsets(text, offset):
    with pytest.raises(ExprSyntaxError) as info:
        parse_expr(text, FREE)
    assert info.value.offset == offset


def test_unknown_generators():
    with pytest.raises(UnknownGenerator):
        parse_expr("f3", FREE)
    with pytest.raises(UnknownGenerator):
        parse_expr("z1", FREE)
    with pytest.raises(UnknownGenerator):
        parse_expr("f0", FREE)


def test_mode_mismatch_on_lowering():
    ast = parse_expr("z1*z2")  # no config: names unchecked
    with pytest.raises(ModeMismatch):
        lower_ast(ast, FREE)


def test_caps():
    cfg = SessionConfig(2, "free", max_power=8, max_terms=1000)
    with pytest.raises(ExprError):
        evaluate("f1^9", cfg)
    with pytest.raises(ExprError):
        evaluate("(f1+f2)^8*(f1+f2)^8", cfg)
    with pytest.raises(ExprError):
        parse_expr("(" * 300 + "f1" + ")" * 300, cfg)


def test_serialize_examples():
    assert serialize(FreeSeries(2, {(2, 1): -1})) == "-1+0i*f2*f1"
    assert serialize(FreeSeries(2)) == "0"
    assert serialize(QSeries(QMatrix.ones(2))) == "0"
    a = QSeries(QMatrix.single(2, 1j), {(0, 0): 1, (-1, 2): 0.1, (1, 0): -2j}, laurent=True)
    assert serialize(a) == "1+0i + 0.10000000000000001+0i*z1^-1*z2^2 + 0-2i*z1"


def test_deserialize_rejects_non_canonical():
    for bad in ["1*f1", "1+0i*f1^2", "1+0i*f3", "1+0i *f1", "1+0i*f1 + 2+0i*f1", "", "1+0i*f1+2+0i"]:
        with pytest.raises(FormatError):
            deserialize(bad, FREE)
    q = SessionConfig(2, "q_polydisk")
    for bad in ["1+0i*z2*z1", "1+0i*z1^-1", "1+0i*z1^1"]:
        with pytest.raises(FormatError):
            deserialize(bad, q)


coefs = st.complex_numbers(allow_nan=False, allow_infinity=False, max_magnitude=1e200, min_magnitude=1e-6)
words = st.lists(st.integers(1, 3), max_size=6).map(tuple)


@settings(max_examples=300, deadline=None)
@given(st.dictionaries(words, coefs, max_size=6))
def test_free_round_trip_is_bit_exact(terms):
    cfg = SessionConfig(3, "free")
    f = FreeSeries(3, terms)
    back = deserialize(serialize(f), cfg)
    assert back.terms == f.terms
    for k, c in f.terms.items():
        assert math.copysign(1, back.terms[k].imag) == math.copysign(1, c.imag)


@settings(max_examples=300, deadline=None)
@given(st.dictionaries(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), coefs, max_size=6))
def test_laurent_round_trip_is_bit_exact(terms):
    cfg = SessionConfig(2, "q_laurent", QMatrix.single(2, -1))
    a = QSeries(cfg.q, terms, laurent=True)
    text = serialize(a)
    assert deserialize(text, cfg).terms == a.terms
    assert evaluate(text, cfg) == a


@settings(max_examples=500, deadline=None)
@given(st.binary(max_size=40))
def test_parser_never_crashes(data):
    text = data.decode("utf-8", errors="surrogateescape")
    try:
        evaluate(text, SessionConfig(2, "free", max_terms=500, max_power=6))
    except ExprError as exc:
        assert exc.offset is None or 0 <= exc.offset <= len(data)


def test_config_round_trip(tmp_path):
    d = {"n": 2, "mode": "q_polydisk", "q": [[1, [0.5, 0]], [[2, 0], 1]], "R": [1, "+inf"], "r": [0, 0.5],
         "caps": {"permutations": 1000}, "tol": 1e-8}
    cfg = config_from_dict(d)
    assert cfg.R == (1.0, math.inf) and cfg.cap == 1000 and cfg.q[1, 2] == 0.5
    path = tmp_path / "c.json"
    import json

    path.write_text(json.dumps(config_to_dict(cfg)))
    again = load_config(str(path))
    assert again.q == cfg.q and again.R == cfg.R and again.r == cfg.r


@pytest.mark.parametrize(
    "d",
    [
        {"n": 0},
        {"n": 2, "mode": "weird"},
        {"n": 2, "q": [[1, 2], [2, 1]]},
        {"n": 2, "mode": "q_laurent", "q": [[1, 2], [0.5, 1]]},
        {"n": 2, "R": [1, 1], "r": [1, 0.5]},
        {"n": 2, "R": [1, "inf"]},
        {"n": 1, "caps": {"permutations": -1}},
    ],
)
def test_config_errors(d):
    with pytest.raises(ConfigError):
        config_from_dict(d)
