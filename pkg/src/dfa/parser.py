"""Expression grammar, canonical printing and JSON model files.

Grammar::

    expr    := ['+' | '-'] term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := primary ('^' UINT)*
    primary := scalar | generator | '(' expr ')' | 'dag' '(' expr ')'
    scalar  := NUMBER ['i'] | 'i'
    generator := 'a' '(' NAME ')' | 'ad' '(' NAME ')'
               | 'd' '(' component (';' component)* ')'
    component := ['+' | '-'] NUMBER [',' NAME]

``NUMBER`` is a decimal (``2``, ``0.5``, ``1e-3``) or a rational ``p/q``
written without spaces.  Signed complex scalars need parentheses, as in
``(1-2i)``.  The functional name in a ``d`` component may be omitted when the
model declares exactly one.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .algebra import Polynomial, a, ad, adjoint, d, power
from .coeffs import GaussianRational, to_fraction
from .errors import DeclarationError, ModelError, ParseError
from .model import ModelContext

__all__ = [
    "Sum",
    "Product",
    "Scalar",
    "Power",
    "Dag",
    "Annihilator",
    "Creator",
    "Displacement",
    "parse_expr",
    "elaborate",
    "parse",
    "format_canonical",
    "format_scalar",
    "parse_model",
    "load_model",
    "model_to_json",
]


# -- AST -----------------------------------------------------------------

@dataclass(frozen=True)
class Sum:
    terms: tuple  # of (sign, node)


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class Scalar:
    """``real + imag * i`` with exact (Fraction) parts."""

    real: Fraction
    imag: Fraction


@dataclass(frozen=True)
class Power:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Dag:
    arg: "Node"


@dataclass(frozen=True)
class Annihilator:
    name: str


@dataclass(frozen=True)
class Creator:
    name: str


@dataclass(frozen=True)
class Displacement:
    components: tuple  # of (Fraction, name or None)


Node = Union[Sum, Product, Scalar, Power, Dag, Annihilator, Creator, Displacement]


# -- lexer -------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<number>\d+/\d+|(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*^(),;])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _lex(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        s = m.group()
        if kind == "ws":
            for k, ch in enumerate(s):
                if ch == "\n":
                    line += 1
                    line_start = pos + k + 1
        else:
            # a number glued to "i" is an imaginary literal: 2i, 0.5i, 1/2i
            if kind == "number" and text.startswith("i", m.end()) and not _ident_continues(text, m.end() + 1):
                toks.append(_Tok("imag", s, line, pos - line_start + 1))
                pos = m.end() + 1
                continue
            toks.append(_Tok(kind, s, line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


def _ident_continues(text: str, pos: int) -> bool:
    return pos < len(text) and (text[pos].isalnum() or text[pos] == "_")


def _number(s: str) -> Fraction:
    return Fraction(s)


# -- recursive descent parser ----------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks = _lex(text)
        self.pos = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.pos]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"{msg}, found {found}", tok.line, tok.col)

    def take(self, text: str | None = None, kind: str | None = None) -> _Tok:
        t = self.tok
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind) or t.kind == "eof":
            self.error(f"expected {text or kind}")
        self.pos += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "eof":
            self.error("expected operator or end of input")
        return node

    def expr(self) -> Node:
        terms = []
        sign = 1
        if self.at("+") or self.at("-"):
            sign = -1 if self.take().text == "-" else 1
        terms.append((sign, self.term()))
        while self.at("+") or self.at("-"):
            sign = -1 if self.take().text == "-" else 1
            terms.append((sign, self.term()))
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Sum(tuple(terms))

    def term(self) -> Node:
        factors = [self.factor()]
        while self.at("*"):
            self.take()
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def factor(self) -> Node:
        node = self.primary()
        while self.at("^"):
            self.take()
            t = self.tok
            if t.kind != "number" or not t.text.isdigit():
                self.error("expected non-negative integer exponent")
            self.pos += 1
            node = Power(node, int(t.text))
        return node

    def primary(self) -> Node:
        t = self.tok
        if t.kind == "number":
            self.pos += 1
            return Scalar(_number(t.text), Fraction(0))
        if t.kind == "imag":
            self.pos += 1
            return Scalar(Fraction(0), _number(t.text))
        if t.kind == "op" and t.text == "(":
            self.pos += 1
            node = self.expr()
            self.take(")")
            return node
        if t.kind == "name":
            self.pos += 1
            if t.text == "i":
                return Scalar(Fraction(0), Fraction(1))
            if t.text in ("a", "ad"):
                self.take("(")
                name = self.take(kind="name").text
                self.take(")")
                return Annihilator(name) if t.text == "a" else Creator(name)
            if t.text == "d":
                self.take("(")
                comps = [self.component()]
                while self.at(";"):
                    self.take()
                    comps.append(self.component())
                self.take(")")
                return Displacement(tuple(comps))
            if t.text == "dag":
                self.take("(")
                node = self.expr()
                self.take(")")
                return Dag(node)
            self.error("unknown generator", t)
        self.error("expected scalar, generator or '('")

    def component(self) -> tuple:
        sign = 1
        if self.at("+") or self.at("-"):
            sign = -1 if self.take().text == "-" else 1
        t = self.tok
        if t.kind != "number":
            self.error("expected rational displacement coefficient")
        self.pos += 1
        name = None
        if self.at(","):
            self.take()
            name = self.take(kind="name").text
        return (sign * _number(t.text), name)


def parse_expr(text: str) -> Node:
    """Parse an operator expression into an AST.

    Raises
    ------
    ParseError
        With the line and column of the offending token.
    """
    if not isinstance(text, str):
        raise TypeError("expression must be a string")
    return _Parser(text).parse()


# -- elaboration ---------------------------------------------------------------

def _scalar_value(node: Scalar, model: ModelContext):
    if model.exact:
        return GaussianRational(node.real, node.imag)
    return complex(float(node.real), float(node.imag)) if node.imag else float(node.real)


def elaborate(node: Node, model: ModelContext) -> Polynomial:
    """Turn an AST into a canonical :class:`Polynomial`.

    Raises
    ------
    DeclarationError
        For names that the model does not declare.
    """
    if isinstance(node, Scalar):
        return Polynomial.constant(model, _scalar_value(node, model))
    if isinstance(node, Annihilator):
        return a(model, node.name)
    if isinstance(node, Creator):
        return ad(model, node.name)
    if isinstance(node, Displacement):
        expo = [Fraction(0)] * model.n_zeta
        for r, name in node.components:
            if name is None:
                if model.n_zeta != 1:
                    raise DeclarationError("functional name required when the model declares "
                                           f"{model.n_zeta} functionals")
                m = 0
            else:
                m = model.zeta_index(name)
            expo[m] += r
        return d(model, expo)
    if isinstance(node, Dag):
        return adjoint(elaborate(node.arg, model))
    if isinstance(node, Power):
        return power(elaborate(node.base, model), node.exponent)
    if isinstance(node, Product):
        out = elaborate(node.factors[0], model)
        for f in node.factors[1:]:
            out = out * elaborate(f, model)
        return out
    if isinstance(node, Sum):
        out = Polynomial.zero(model)
        for sign, t in node.terms:
            p = elaborate(t, model)
            out = out + p if sign > 0 else out - p
        return out
    raise TypeError(f"not an expression node: {node!r}")


def parse(text: str, model: ModelContext) -> Polynomial:
    """``elaborate(parse_expr(text), model)``."""
    return elaborate(parse_expr(text), model)


# -- printing -------------------------------------------------------------------

def _real_text(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    x = float(x)
    if x.is_integer() and abs(x) < 2**53:
        return str(int(x))
    return repr(x)


def format_scalar(c) -> tuple[int, str]:
    """Split a coefficient into ``(sign, magnitude_text)`` in the grammar."""
    if isinstance(c, GaussianRational):
        re_, im = c.real, c.imag
    else:
        z = complex(c)
        re_, im = z.real, z.imag
    if not im:
        return (-1 if re_ < 0 else 1), _real_text(abs(re_))
    if not re_:
        mag = _real_text(abs(im))
        return (-1 if im < 0 else 1), ("i" if mag == "1" else mag + "i")
    sep = "-" if im < 0 else "+"
    return 1, f"({_real_text(re_)}{sep}{_real_text(abs(im))}i)"


def _word_text(key, model: ModelContext) -> str:
    cr, k, an = key
    names = model.test_functions
    parts = []

    def run(ops, gen):
        i = 0
        while i < len(ops):
            j = i
            while j < len(ops) and ops[j] == ops[i]:
                j += 1
            n = j - i
            parts.append(f"{gen}({names[ops[i]]})" + (f"^{n}" if n > 1 else ""))
            i = j

    run(cr, "ad")
    comps = [f"{km},{model.zeta_basis[m]}" for m, km in enumerate(k) if km]
    if comps:
        parts.append("d(" + ";".join(comps) + ")")
    run(an, "a")
    return "*".join(parts)


def _print_order(key):
    cr, k, an = key
    return (-(len(cr) + len(an) + sum(abs(x) for x in k)), cr, k, an)


def format_canonical(p: Polynomial) -> str:
    """Deterministic text for a canonical polynomial.

    Terms are ordered by decreasing degree, then by word key.  Parsing the
    result with :func:`parse` reproduces ``p``.
    """
    if p.is_zero:
        return "0"
    out = []
    for key in sorted(p.terms, key=_print_order):
        sign, mag = format_scalar(p.terms[key])
        word = _word_text(key, p.model)
        if not word:
            body = mag
        elif mag == "1":
            body = word
        else:
            body = f"{mag}*{word}"
        if not out:
            out.append(body if sign > 0 else "-" + body)
        else:
            out.append((" + " if sign > 0 else " - ") + body)
    return "".join(out)


# -- model files ---------------------------------------------------------------

def _complex_entry(v, where: str):
    if isinstance(v, bool):
        raise ModelError(f"{where}: boolean is not a number")
    if isinstance(v, (int, float)):
        return v
    if isinstance(v, str):
        return to_fraction(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float, str)) and not isinstance(x, bool) for x in v):
        re_, im = (to_fraction(x) if isinstance(x, str) else x for x in v)
        return GaussianRational(re_, im) if isinstance(re_, Fraction) or isinstance(im, Fraction) else complex(re_, im)
    raise ModelError(f"{where}: expected a number or [re, im], got {v!r}")


def _decimal(x):
    # JSON floats are read as the decimal they were written as, not their binary value
    return Fraction(repr(x)) if isinstance(x, float) else to_fraction(x)


def _exactify(v):
    if isinstance(v, complex):
        return GaussianRational(_decimal(v.real), _decimal(v.imag))
    if isinstance(v, GaussianRational):
        return v
    return _decimal(v)


def parse_model(text: str) -> ModelContext:
    """Build a :class:`ModelContext` from a JSON document.

    Keys: ``test_functions`` (list of names), ``gram`` (N x N entries, each a
    number or ``[re, im]``), optional ``zeta`` (either ``{"names": [...],
    "values": [[...], ...]}`` or a mapping ``name -> values``), optional
    ``alpha`` (name -> number or ``[re, im]``), ``beta`` (name -> number),
    ``exact`` (bool) and ``max_terms`` (int).  Numbers may be given as strings
    such as ``"1/3"`` for exact input.

    Raises
    ------
    ModelError
        Malformed document, non-Hermitian Gram matrix, dimension mismatch or
        duplicate names.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(f"invalid JSON: {e.msg} (line {e.lineno}, column {e.colno})") from None
    if not isinstance(doc, dict):
        raise ModelError("model document must be a JSON object")
    unknown = set(doc) - {"test_functions", "gram", "zeta", "alpha", "beta", "exact", "max_terms", "tol", "description"}
    if unknown:
        raise ModelError(f"unknown model keys: {sorted(unknown)}")
    names = doc.get("test_functions")
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        raise ModelError("test_functions must be a list of names")
    if len(set(names)) != len(names):
        raise ModelError("duplicate test function names")
    exact = bool(doc.get("exact", False))
    gram_raw = doc.get("gram")
    if not isinstance(gram_raw, list) or not all(isinstance(r, list) for r in gram_raw):
        raise ModelError("gram must be an array of arrays")
    if len(names) == 1 and len(gram_raw) == 1 and len(gram_raw[0]) == 2 and \
            all(isinstance(v, (int, float)) for v in gram_raw[0]):
        # [[re, im]] is the only sensible reading of a 1x2 row for one test function
        gram_raw = [[gram_raw[0]]]
    gram = [[_complex_entry(v, f"gram[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(gram_raw)]
    if exact:
        gram = [[_exactify(v) for v in r] for r in gram]

    zeta = doc.get("zeta", {})
    if isinstance(zeta, dict) and set(zeta) <= {"names", "values"} and "names" in zeta:
        znames, zvals = zeta["names"], zeta.get("values", [])
    elif isinstance(zeta, dict):
        znames, zvals = list(zeta), list(zeta.values())
    else:
        raise ModelError("zeta must be an object")
    if not isinstance(znames, list) or not all(isinstance(z, str) for z in znames):
        raise ModelError("zeta names must be a list of strings")
    if len(set(znames)) != len(znames):
        raise ModelError("duplicate functional names")
    rows = []
    for m, row in enumerate(zvals):
        if not isinstance(row, list):
            raise ModelError(f"zeta values for {znames[m] if m < len(znames) else m} must be a list")
        rows.append([_exactify(v) if exact or isinstance(v, str) else v for v in row])

    alpha = {k: _complex_entry(v, f"alpha[{k}]") for k, v in dict(doc.get("alpha", {})).items()}
    if exact:
        alpha = {k: _exactify(v) for k, v in alpha.items()}
    beta = {k: to_fraction(v) for k, v in dict(doc.get("beta", {})).items()}
    kwargs = {}
    if "max_terms" in doc:
        kwargs["max_terms"] = int(doc["max_terms"])
    if "tol" in doc:
        kwargs["tol"] = float(doc["tol"])
    try:
        return ModelContext(tuple(names), gram, tuple(znames), rows, alpha, beta, exact=exact, **kwargs)
    except DeclarationError as e:
        raise ModelError(str(e)) from None


def load_model(path) -> ModelContext:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())


def _json_number(v):
    if isinstance(v, GaussianRational):
        if v.imag:
            return [str(v.real), str(v.imag)]
        return str(v.real)
    if isinstance(v, Fraction):
        return str(v)
    z = complex(v)
    return [z.real, z.imag] if z.imag else z.real


def model_to_json(model: ModelContext) -> str:
    """Serialize a model so that :func:`parse_model` reads it back unchanged."""
    doc = {
        "test_functions": list(model.test_functions),
        "gram": [[_json_number(v) for v in r] for r in model.gram],
        "zeta": {"names": list(model.zeta_basis), "values": [[_json_number(v) for v in r] for r in model.zeta_values]},
        "alpha": {k: _json_number(v) for k, v in model.alpha.items()},
        "beta": {k: str(v) for k, v in model.beta.items()},
        "exact": model.exact,
        "max_terms": model.max_terms,
    }
    return json.dumps(doc, indent=2)
