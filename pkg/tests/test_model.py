from fractions import Fraction

import pytest

from dfa import ModelContext, ModelError
from dfa.errors import DeclarationError


def test_minimal_model():
    m = ModelContext(("f1",), [[1]], ("z1",), [[0.5]])
    assert m.n_functions == 1 and m.n_zeta == 1
    assert m.index("f1") == 0
    assert m.shift((Fraction(2),), 0) == 1.0


@pytest.mark.parametrize(
    "gram, msg",
    [
        ([[0, 1], [1, 0]], "diagonal"),
        ([[1, 0.5j], [0.5j, 1]], "Hermitian"),
        ([[1, 0]], "2x2"),
        ([[1j, 0], [0, 1]], "diagonal"),
    ],
)
def test_bad_gram(gram, msg):
    with pytest.raises(ModelError, match=msg):
        ModelContext(("f1", "f2"), gram)


def test_complex_hermitian_accepted():
    m = ModelContext(("f", "g"), [[1, 0.2 + 0.3j], [0.2 - 0.3j, 1]])
    assert m.inner(0, 1) == (0.2 + 0.3j)


@pytest.mark.parametrize("names", [("f", "f"), ("a",), ("1x",), ("dag",)])
def test_bad_names(names):
    with pytest.raises(ModelError):
        ModelContext(names, [[1] * len(names) for _ in names])


def test_zeta_shape_and_values():
    with pytest.raises(ModelError):
        ModelContext(("f",), [[1]], ("z",), [[0.1, 0.2]])
    with pytest.raises(ModelError):
        ModelContext(("f",), [[1]], ("z",), [[float("inf")]])
    with pytest.raises(ModelError):
        ModelContext(("f",), [[1]], ("f",), [[0.1]])


def test_alpha_must_be_declared():
    with pytest.raises(ModelError):
        ModelContext(("f",), [[1]], alpha={"g": 1})


def test_lookup_errors():
    m = ModelContext(("f",), [[1]], ("z",), [[0.1]])
    with pytest.raises(DeclarationError):
        m.index("g")
    with pytest.raises(DeclarationError):
        m.zeta_index("w")


def test_equality_and_options(exact2):
    again = exact2.with_options()
    assert again == exact2 and hash(again) == hash(exact2)
    assert exact2.with_options(exact=False) != exact2
    assert exact2.zeta_array().shape == (2, 2)
