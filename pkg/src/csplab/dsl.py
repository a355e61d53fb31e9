"""Text format for structures and group words.

Grammar (whitespace-insensitive, ``#`` starts a comment)::

    structure NAME {
        universe: id+ ;
        relation R/k : ( id{k} )* ;
        ...
    }

Identifiers use ``[A-Za-z0-9_]`` plus the punctuation ``. , ' @ +`` so that
labels of derived elements (tree words such as ``D1.D2'``, subsets such as
``s+t``) survive a round trip.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .structures import Structure, StructureError, make_structure

IDENT = r"[A-Za-z0-9_.,'@+]+"

_TOKEN = re.compile(
    rf"(?P<ws>[ \t\r\n]+)|(?P<comment>#[^\n]*)|(?P<ident>{IDENT})"
    r"|(?P<punct>[{}();:/])"
)


class DSLError(ValueError):
    def __init__(self, msg, line=None, col=None):
        self.line, self.col = line, col
        where = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(f"{msg}{where}")


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DSLError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind in ("ident", "punct"):
            toks.append(_Tok(kind, s, line, col))
        nl = s.count("\n")
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += len(s)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def expect(self, text=None, kind=None):
        t = self.tok
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            want = repr(text) if text is not None else kind
            got = repr(t.text) if t.kind != "eof" else "end of input"
            raise DSLError(f"expected {want}, got {got}", t.line, t.col)
        self.i += 1
        return t

    def structure(self):
        self.expect("structure")
        name = self.expect(kind="ident").text
        self.expect("{")
        self.expect("universe")
        self.expect(":")
        universe, seen = [], set()
        while self.tok.kind == "ident":
            t = self.expect(kind="ident")
            if t.text in seen:
                raise DSLError(f"duplicate universe element {t.text!r}", t.line, t.col)
            seen.add(t.text)
            universe.append(t.text)
        self.expect(";")
        signature, relations = [], {}
        while self.tok.text == "relation":
            self.i += 1
            rt = self.expect(kind="ident")
            self.expect("/")
            kt = self.expect(kind="ident")
            if not kt.text.isdigit() or int(kt.text) < 1:
                raise DSLError(f"invalid arity {kt.text!r}", kt.line, kt.col)
            k = int(kt.text)
            if rt.text in relations:
                raise DSLError(f"duplicate relation {rt.text!r}", rt.line, rt.col)
            self.expect(":")
            tuples = []
            while self.tok.text == "(":
                open_ = self.expect("(")
                items = []
                while self.tok.kind == "ident":
                    it = self.expect(kind="ident")
                    if it.text not in seen:
                        raise DSLError(f"unknown element {it.text!r}", it.line, it.col)
                    items.append(it.text)
                self.expect(")")
                if len(items) != k:
                    raise DSLError(
                        f"arity mismatch in {rt.text}: tuple has {len(items)} entries, expected {k}",
                        open_.line, open_.col)
                tuples.append(tuple(items))
            self.expect(";")
            signature.append((rt.text, k))
            relations[rt.text] = tuples
        self.expect("}")
        self.expect(kind="eof")
        try:
            return make_structure(signature, universe, relations, name=name)
        except StructureError as e:
            raise DSLError(str(e)) from None


def parse_structure(text: str) -> Structure:
    return _Parser(text).structure()


def read_structure(path) -> Structure:
    with open(path, encoding="utf-8") as fh:
        return parse_structure(fh.read())


def label(x) -> str:
    """Canonical text label for an element of a (possibly derived) structure."""
    from .btlab import TreeWord  # local: btlab imports this module

    if isinstance(x, str):
        return x
    if isinstance(x, TreeWord):
        return str(x)
    if isinstance(x, frozenset):
        # sorted by label; universe order is not available here
        return "+".join(sorted(label(y) for y in x))
    if isinstance(x, tuple):
        if len(x) == 2 and isinstance(x[0], TreeWord):
            return f"{x[0]}@{label(x[1])}"
        return ",".join(label(y) for y in x)
    return str(x)


def subset_label(s: Structure, subset) -> str:
    """Label a subset of ``s`` with members in universe order."""
    return "+".join(label(y) for y in sorted(subset, key=s.index.__getitem__))


def serialize_structure(s: Structure, labeller=label) -> str:
    """Canonical text: universe in declaration order, tuples in index order."""
    names = {x: labeller(x) for x in s.universe}
    if len(set(names.values())) != len(names):
        raise DSLError("element labels are not unique")
    for n in names.values():
        if not re.fullmatch(IDENT, n):
            raise DSLError(f"label {n!r} is not a valid identifier")
    lines = [f"structure {s.name} {{", "  universe: " + " ".join(names[x] for x in s.universe) + ";"]
    for r, k in s.signature:
        ts = sorted(s.relations[r], key=s.tuple_key)
        body = " ".join("(" + " ".join(names[x] for x in t) + ")" for t in ts)
        lines.append(f"  relation {r}/{k}: {body};" if body else f"  relation {r}/{k}:;")
    lines.append("}")
    return "\n".join(lines) + "\n"


# group words: tuples of (symbol, +1|-1), symbol in Q1, Q2, D1..Db
_WORD_TOKEN = re.compile(r"(Q|D)(\d+)('?)")


def parse_word(text: str, b: int | None = None) -> tuple[tuple[str, int], ...]:
    """Parse ``Q1 D3' ...``; a trailing quote marks an inverse letter."""
    word = []
    for tok in text.split():
        m = _WORD_TOKEN.fullmatch(tok)
        if not m:
            raise DSLError(f"unknown token {tok!r}")
        kind, idx, inv = m.group(1), int(m.group(2)), m.group(3)
        if kind == "Q" and idx not in (1, 2):
            raise DSLError(f"index out of range in {tok!r}: Q-generators are Q1, Q2")
        if kind == "D" and (idx < 1 or (b is not None and idx > b)):
            raise DSLError(f"index out of range in {tok!r}: D-generators are D1..D{b if b is not None else 'b'}")
        word.append((f"{kind}{idx}", -1 if inv else 1))
    return tuple(word)


def format_word(word) -> str:
    return " ".join(sym + ("'" if e < 0 else "") for sym, e in word)
