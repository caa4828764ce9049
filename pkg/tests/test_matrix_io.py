import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from riccati_pinv.matrix_io import (
    FORMATS,
    MatrixParseError,
    dumps,
    guess_format,
    loads,
    read_matrix,
    write_matrix,
)

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)
shapes = st.tuples(st.integers(1, 12), st.integers(1, 12))


@st.composite
def matrices(draw, complex_):
    shape = draw(shapes)
    re = draw(arrays(np.float64, shape, elements=finite))
    if not complex_:
        return re
    im = draw(arrays(np.float64, shape, elements=finite))
    return re + 1j * im


@settings(max_examples=334, deadline=None)
@given(st.sampled_from(FORMATS), st.data())
def test_round_trip(fmt, data):
    A = data.draw(matrices(complex_=fmt != "csv-real"))
    B = loads(dumps(A, fmt), fmt)
    assert B.shape == A.shape
    # repr floats round-trip exactly in every format
    assert np.array_equal(B, A)


def test_matrix_market_is_column_major():
    text = dumps([[1, 2], [3, 4]], "matrix-market-array")
    assert text.splitlines()[2:] == ["1.0", "3.0", "2.0", "4.0"]
    assert "real" in text.splitlines()[0]
    assert "complex" in dumps([[1j]], "matrix-market-array").splitlines()[0]


def test_integer_matrix_market():
    A = loads("%%MatrixMarket matrix array integer general\n% comment\n1 2\n5\n-1\n", "matrix-market-array")
    assert np.array_equal(A, [[5, -1]])


def test_csv_rejects_complex():
    with pytest.raises(ValueError):
        dumps([[1j]], "csv-real")


@pytest.mark.parametrize(
    "text, fmt",
    [
        ("1,2\n3\n", "csv-real"),
        ("1,x\n", "csv-real"),
        ("", "csv-real"),
        ('{"rows": 1, "cols": 2, "data": [[{"re": 1, "im": 0}]]}', "json-complex"),
        ('{"rows": 1, "cols": 1, "data": [[{"re": "1", "im": 0}]]}', "json-complex"),
        ("not json", "json-complex"),
        ("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1\n", "matrix-market-array"),
        ("%%MatrixMarket matrix array real general\n2 2\n1\n", "matrix-market-array"),
        ("1,nan\n", "csv-real"),
    ],
)
def test_parse_errors(text, fmt):
    with pytest.raises(MatrixParseError):
        loads(text, fmt)


def test_guess_format(tmp_path):
    assert guess_format("a.mtx") == "matrix-market-array"
    assert guess_format("a.CSV") == "csv-real"
    assert guess_format("a.txt", "json-complex") == "json-complex"
    with pytest.raises(ValueError):
        guess_format("a.txt")
    with pytest.raises(ValueError):
        guess_format("a.json", "yaml")


def test_file_round_trip(tmp_path, rng):
    A = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    for ext in (".json", ".mtx"):
        p = tmp_path / ("A" + ext)
        write_matrix(p, A)
        assert np.array_equal(read_matrix(p), A)
