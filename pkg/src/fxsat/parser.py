"""Readers for the canonical BGP text format and for SPARQL query files.

The canonical format is a strict subset of the SPARQL triples-block syntax:
optional ``PREFIX`` declarations followed by one triple per ``.``.  Query
extraction accepts a wider subset (``;``/``,`` abbreviations, nested groups,
UNION/OPTIONAL/SERVICE/GRAPH/MINUS, skipped FILTER/BIND/VALUES) and returns
one BGP per contiguous block of triples.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .terms import (
    FX_NS,
    RDF_NS,
    RDF_TYPE,
    XSD_NS,
    XYZ_NS,
    Bgp,
    NodeKind,
    PatternNode,
    TriplePattern,
    WellKnownKind,
    bnode,
    classify_well_known,
    iri,
    literal,
    var,
)

BUILTIN_PREFIXES: dict[str, str] = {
    "rdf": RDF_NS,
    "xyz": XYZ_NS,
    "fx": FX_NS,
    "xsd": XSD_NS,
}


class ParseError(ValueError):
    """Base class for all reader errors; carries a 1-based line/column."""

    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        self.message = message
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line else ""
        super().__init__(where + message)


class BgpSyntaxError(ParseError):
    pass


class LiteralSubjectError(ParseError):
    pass


class UnknownPrefixError(ParseError):
    pass


@dataclass
class ParsedDocument:
    bgps: list[Bgp] = field(default_factory=list)
    prefixes: dict[str, str] = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_SPEC = [
    ("WS", r"[ \t\r\n]+"),
    ("COMMENT", r"#[^\n]*"),
    ("IRI", r"<[^<>\"{}|^`\\\s]*>"),
    ("LSTRING", r'"""(?:[^"\\]|\\.|"(?!""))*"""' + r"|'''(?:[^'\\]|\\.|'(?!''))*'''"),
    ("STRING", r'"(?:[^"\\\n]|\\.)*"' + r"|'(?:[^'\\\n]|\\.)*'"),
    ("VAR", r"[?$][A-Za-z0-9_]+"),
    ("BNODE", r"_:[A-Za-z0-9_](?:[\w\-.]*[\w\-])?"),
    ("DTYPE", r"\^\^"),
    ("LANG", r"@[a-zA-Z]+(?:-[a-zA-Z0-9]+)*"),
    ("NUMBER", r"[+-]?(?:\d*\.\d+(?:[eE][+-]?\d+)?|\d+\.?[eE][+-]?\d+|\d+)"),
    (
        "PNAME",
        r"(?:[A-Za-z][\w\-]*(?:\.[\w\-]+)*)?:(?:(?:[\w\-:%]|\\.)+(?:\.(?:[\w\-:%]|\\.)+)*)?",
    ),
    ("WORD", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("OP", r"\|\||&&|!=|<=|>=|[{}()\[\].;,=<>!*/+\-|^?]"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{rx})" for name, rx in _TOKEN_SPEC))


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise BgpSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup or ""
        chunk = m.group()
        if kind not in ("WS", "COMMENT"):
            tokens.append(Token(kind, chunk, line, pos - line_start + 1))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    return tokens


_ESCAPES = {
    "t": "\t",
    "n": "\n",
    "r": "\r",
    "b": "\b",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


def _unescape(body: str, tok: Token) -> str:
    out: list[str] = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(body):
            raise BgpSyntaxError("dangling escape", tok.line, tok.column)
        nxt = body[i + 1]
        if nxt in _ESCAPES:
            out.append(_ESCAPES[nxt])
            i += 2
        elif nxt in "uU":
            width = 4 if nxt == "u" else 8
            digits = body[i + 2 : i + 2 + width]
            if len(digits) != width or not all(c in "0123456789abcdefABCDEF" for c in digits):
                raise BgpSyntaxError("bad unicode escape", tok.line, tok.column)
            out.append(chr(int(digits, 16)))
            i += 2 + width
        else:
            raise BgpSyntaxError(f"unknown escape \\{nxt}", tok.line, tok.column)
    return "".join(out)


_PN_LOCAL_ESC = re.compile(r"\\([_~.\-!$&'()*+,;=/?#@%])")


class _TermReader:
    """Shared term-level parsing over a token list."""

    def __init__(self, tokens: list[Token], prefixes: dict[str, str]) -> None:
        self.tokens = tokens
        self.pos = 0
        self.prefixes = prefixes

    # token helpers -------------------------------------------------------
    def peek(self, offset: int = 0) -> Token | None:
        idx = self.pos + offset
        return self.tokens[idx] if idx < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else Token("EOF", "", 1, 1)
            raise BgpSyntaxError("unexpected end of input", last.line, last.column)
        self.pos += 1
        return tok

    def at_op(self, text: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "OP" and tok.text == text

    def at_word(self, *words: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "WORD" and tok.text.upper() in words

    def expect_op(self, text: str) -> Token:
        tok = self.next()
        if tok.kind != "OP" or tok.text != text:
            raise BgpSyntaxError(f"expected {text!r}, found {tok.text!r}", tok.line, tok.column)
        return tok

    def error(self, message: str, tok: Token | None = None) -> BgpSyntaxError:
        tok = tok or self.peek() or (self.tokens[-1] if self.tokens else None)
        if tok is None:
            return BgpSyntaxError(message)
        return BgpSyntaxError(message, tok.line, tok.column)

    # prefixes ------------------------------------------------------------
    def read_prefix_decl(self) -> None:
        """Reads ``PREFIX p: <iri>`` or ``@prefix p: <iri> .``; keyword consumed."""
        name = self.next()
        if name.kind != "PNAME" or not name.text.endswith(":") or name.text.count(":") != 1:
            raise self.error("expected prefix name", name)
        target = self.next()
        if target.kind != "IRI":
            raise self.error("expected IRI after prefix name", target)
        self.prefixes[name.text[:-1]] = target.text[1:-1]

    # terms ---------------------------------------------------------------
    def expand(self, tok: Token) -> str:
        prefix, _, local = tok.text.partition(":")
        if prefix not in self.prefixes:
            raise UnknownPrefixError(f"unknown prefix {prefix!r}", tok.line, tok.column)
        return self.prefixes[prefix] + _PN_LOCAL_ESC.sub(r"\1", local)

    def read_term(self) -> tuple[PatternNode, Token]:
        tok = self.next()
        kind = tok.kind
        if kind == "VAR":
            return var(tok.text[1:]), tok
        if kind == "IRI":
            return iri(tok.text[1:-1]), tok
        if kind == "PNAME":
            return iri(self.expand(tok)), tok
        if kind == "BNODE":
            return bnode(tok.text[2:]), tok
        if kind == "WORD" and tok.text == "a":
            return iri(RDF_TYPE), tok
        if kind == "WORD" and tok.text in ("true", "false"):
            return literal(tok.text, XSD_NS + "boolean"), tok
        if kind == "NUMBER":
            text = tok.text
            if "e" in text or "E" in text:
                dt = "double"
            elif "." in text:
                dt = "decimal"
            else:
                dt = "integer"
            return literal(text, XSD_NS + dt), tok
        if kind in ("STRING", "LSTRING"):
            quote = 3 if kind == "LSTRING" else 1
            value = _unescape(tok.text[quote:-quote], tok)
            datatype = None
            nxt = self.peek()
            if nxt is not None and nxt.kind == "DTYPE":
                self.next()
                dt_tok = self.next()
                if dt_tok.kind == "IRI":
                    datatype = dt_tok.text[1:-1]
                elif dt_tok.kind == "PNAME":
                    datatype = self.expand(dt_tok)
                else:
                    raise self.error("expected datatype IRI", dt_tok)
            elif nxt is not None and nxt.kind == "LANG":
                # language tags are not modelled; the lexical form is kept
                self.next()
            return literal(value, datatype), tok
        raise self.error(f"unexpected token {tok.text!r}", tok)


def _make_triple(
    s: tuple[PatternNode, Token], p: tuple[PatternNode, Token], o: tuple[PatternNode, Token]
) -> TriplePattern:
    if s[0].is_literal:
        raise LiteralSubjectError(f"literal {s[0]} in subject position", s[1].line, s[1].column)
    if p[0].is_literal:
        raise BgpSyntaxError(f"literal {p[0]} in predicate position", p[1].line, p[1].column)
    return TriplePattern(s[0], p[0], o[0])


# ---------------------------------------------------------------------------
# Canonical BGP text


def parse_bgp_text(text: str, source: str | None = None) -> Bgp:
    """Parses the canonical one-triple-per-dot format into a :class:`Bgp`."""
    tokens = tokenize(text)
    reader = _TermReader(tokens, dict(BUILTIN_PREFIXES))
    triples: list[TriplePattern] = []
    while reader.peek() is not None:
        if reader.at_word("PREFIX"):
            reader.next()
            reader.read_prefix_decl()
            continue
        tok = reader.peek()
        if tok is not None and tok.kind == "LANG" and tok.text.lower() == "@prefix":
            reader.next()
            reader.read_prefix_decl()
            reader.expect_op(".")
            continue
        s = reader.read_term()
        p = reader.read_term()
        o = reader.read_term()
        if p[0].kind is NodeKind.BLANK:
            raise BgpSyntaxError("blank node in predicate position", p[1].line, p[1].column)
        triples.append(_make_triple(s, p, o))
        if reader.peek() is None:
            break
        if reader.at_op(";") or reader.at_op(","):
            raise reader.error("';' and ',' abbreviations are not part of the canonical format")
        reader.expect_op(".")
    return Bgp(triples, source)


def _node_text(node: PatternNode) -> str:
    return str(node)


def serialize_bgp(bgp: Bgp) -> str:
    """Canonical text for a BGP: full IRIs, one triple per line."""
    return "".join(
        f"{_node_text(t.subject)} {_node_text(t.predicate)} {_node_text(t.object)} .\n"
        for t in bgp.triples
    )


# ---------------------------------------------------------------------------
# Configuration triples


def is_config_predicate(node: PatternNode) -> bool:
    return node.is_iri and classify_well_known(node).kind is WellKnownKind.FX_CONFIG


def strip_config_triples(bgp: Bgp) -> Bgp:
    """Drops triples whose predicate lives in the fx: option namespace."""
    kept = [t for t in bgp.triples if not is_config_predicate(t.predicate)]
    return Bgp(kept, bgp.source)


# ---------------------------------------------------------------------------
# Query extraction

_PATH_OPS = {"/", "|", "^", "*", "+", "?", "!"}


class _QueryReader(_TermReader):
    def __init__(self, tokens: list[Token], doc: ParsedDocument, source: str | None) -> None:
        super().__init__(tokens, doc.prefixes)
        self.doc = doc
        self.source = source

    def skip_balanced(self, open_: str, close: str) -> None:
        self.expect_op(open_)
        depth = 1
        while depth:
            tok = self.next()
            if tok.kind == "OP" and tok.text == open_:
                depth += 1
            elif tok.kind == "OP" and tok.text == close:
                depth -= 1

    def parse(self) -> None:
        while self.at_word("PREFIX", "BASE"):
            word = self.next().text.upper()
            if word == "PREFIX":
                self.read_prefix_decl()
            else:
                tok = self.next()
                if tok.kind != "IRI":
                    raise self.error("expected IRI after BASE", tok)
                self.doc.diagnostics.append("BASE declaration ignored; relative IRIs kept verbatim")
        tok = self.peek()
        if tok is None:
            return
        form = tok.text.upper() if tok.kind == "WORD" else ""
        if form == "SELECT":
            self.next()
            self.skip_projection()
        elif form == "ASK":
            self.next()
        elif form == "CONSTRUCT":
            self.next()
            if self.at_op("{"):
                self.skip_balanced("{", "}")
            else:
                # CONSTRUCT WHERE { ... } uses the pattern as template
                pass
        elif form == "DESCRIBE":
            self.next()
            while self.peek() is not None and not self.at_word("WHERE", "FROM") and not self.at_op("{"):
                self.next()
        else:
            raise self.error(f"unsupported query form {tok.text!r}", tok)
        while self.at_word("FROM"):
            self.next()
            if self.at_word("NAMED"):
                self.next()
            self.next()
        if self.at_word("WHERE"):
            self.next()
        if not self.at_op("{"):
            raise self.error("expected '{' opening the WHERE clause")
        self.group()
        self.skip_modifiers()

    def skip_projection(self) -> None:
        if self.at_word("DISTINCT", "REDUCED"):
            self.next()
        while True:
            tok = self.peek()
            if tok is None:
                raise self.error("unexpected end of input in projection")
            if tok.kind == "VAR" or (tok.kind == "OP" and tok.text == "*"):
                self.next()
            elif tok.kind == "OP" and tok.text == "(":
                self.skip_balanced("(", ")")
            else:
                break

    def skip_modifiers(self) -> None:
        while self.peek() is not None:
            tok = self.next()
            if tok.kind == "OP" and tok.text == "{":
                raise self.error("unexpected group after WHERE clause", tok)
            if tok.kind == "WORD" and tok.text.upper() == "VALUES":
                self.skip_values()

    def skip_values(self) -> None:
        if self.at_op("("):
            self.skip_balanced("(", ")")
        else:
            self.next()
        self.skip_balanced("{", "}")

    def group(self) -> None:
        self.expect_op("{")
        if self.at_word("SELECT"):
            raise self.error("subqueries are not supported")
        block: list[TriplePattern] | None = None

        def flush() -> None:
            nonlocal block
            if block is not None:
                self.doc.bgps.append(strip_config_triples(Bgp(block, self.source)))
                block = None

        while True:
            tok = self.peek()
            if tok is None:
                raise self.error("unterminated group")
            if tok.kind == "OP" and tok.text == "}":
                self.next()
                break
            if tok.kind == "OP" and tok.text == ".":
                self.next()
                continue
            word = tok.text.upper() if tok.kind == "WORD" and tok.text != "a" else ""
            if word == "FILTER":
                self.next()
                if self.at_op("("):
                    self.skip_balanced("(", ")")
                else:
                    # FILTER EXISTS { } / FILTER fn(...)
                    if self.at_word("NOT"):
                        self.next()
                    if self.at_word("EXISTS"):
                        self.next()
                        self.skip_balanced("{", "}")
                    else:
                        self.next()
                        self.skip_balanced("(", ")")
                continue
            if word == "BIND":
                flush()
                self.next()
                self.skip_balanced("(", ")")
                continue
            if word == "VALUES":
                flush()
                self.next()
                self.skip_values()
                continue
            if word in ("OPTIONAL", "MINUS"):
                flush()
                self.next()
                self.group()
                continue
            if word in ("SERVICE", "GRAPH"):
                flush()
                self.next()
                if word == "SERVICE" and self.at_word("SILENT"):
                    self.next()
                self.read_term()
                if word == "GRAPH":
                    self.doc.diagnostics.append("GRAPH body treated as a plain group")
                self.group()
                continue
            if tok.kind == "OP" and tok.text == "{":
                flush()
                self.group()
                while self.at_word("UNION"):
                    self.next()
                    self.group()
                continue
            if word:
                raise self.error(f"unsupported construct {tok.text!r}", tok)
            if block is None:
                block = []
            self.triples_same_subject(block)
        flush()

    def read_predicate(self) -> tuple[PatternNode, Token]:
        tok = self.peek()
        if tok is not None and tok.kind == "OP" and tok.text in _PATH_OPS | {"("}:
            raise self.error("property paths are not supported", tok)
        term = self.read_term()
        nxt = self.peek()
        if nxt is not None and nxt.kind == "OP" and nxt.text in _PATH_OPS:
            raise self.error("property paths are not supported", nxt)
        if term[0].is_literal or term[0].kind is NodeKind.BLANK:
            raise self.error(f"invalid predicate {term[1].text!r}", term[1])
        return term

    def triples_same_subject(self, block: list[TriplePattern]) -> None:
        if self.at_op("[") or self.at_op("("):
            raise self.error("blank-node property lists and collections are not supported")
        subject = self.read_term()
        while True:
            pred = self.read_predicate()
            while True:
                if self.at_op("[") or self.at_op("("):
                    raise self.error("blank-node property lists and collections are not supported")
                obj = self.read_term()
                block.append(_make_triple(subject, pred, obj))
                if self.at_op(","):
                    self.next()
                    continue
                break
            if self.at_op(";"):
                self.next()
                while self.at_op(";"):
                    self.next()
                if self.at_op(".") or self.at_op("}"):
                    break
                continue
            break


def extract_bgps_from_query(text: str, source: str | None = None) -> ParsedDocument:
    """Extracts config-stripped BGPs from a SPARQL query in the supported subset."""
    doc = ParsedDocument(prefixes=dict(BUILTIN_PREFIXES))
    reader = _QueryReader(tokenize(text), doc, source)
    reader.parse()
    return doc


def parse_file_text(text: str, name: str) -> list[Bgp]:
    """Dispatches on file extension: ``.rq``/``.sparql`` extract, else canonical."""
    lowered = name.lower()
    if lowered.endswith((".rq", ".sparql")):
        return extract_bgps_from_query(text, source=name).bgps
    return [parse_bgp_text(text, source=name)]

