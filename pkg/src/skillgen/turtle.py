"""Streaming Turtle triple extraction.

Covers the subset used by capability ontology files: prefix declarations
(both `@prefix` and SPARQL-style `PREFIX`), `a`, IRI references, prefixed
names, plain/typed/language-tagged string literals, numeric and boolean
literals, predicate-object lists, object lists, and blank-node property
lists.  Anything outside this subset raises TurtleSyntaxError instead of
being skipped, so constraint triples cannot be lost silently.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import TurtleSyntaxError

RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"


@dataclass(frozen=True)
class Iri:
    value: str

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Literal:
    value: str
    lang: str | None = None
    datatype: str | None = None


@dataclass(frozen=True)
class BlankNode:
    label: str


Term = Iri | Literal | BlankNode
Triple = tuple[Term, Iri, Term]

_PN_LOCAL_EXTRA = "_-.%"
_WS = " \t\r\n"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.prefixes: dict[str, str] = {}
        self.triples: list[Triple] = []
        self._blank_counter = 0

    # -- low-level helpers -------------------------------------------------

    def _position(self, pos: int | None = None) -> tuple[int, int]:
        p = self.pos if pos is None else pos
        line = self.text.count("\n", 0, p) + 1
        col = p - (self.text.rfind("\n", 0, p) + 1) + 1
        return line, col

    def _fail(self, message: str, pos: int | None = None) -> TurtleSyntaxError:
        line, col = self._position(pos)
        raise TurtleSyntaxError(message, line, col)

    def _skip_ws(self) -> None:
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c in _WS:
                self.pos += 1
            elif c == "#":
                nl = self.text.find("\n", self.pos)
                self.pos = len(self.text) if nl < 0 else nl + 1
            else:
                return

    def _peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expect(self, token: str) -> None:
        if not self.text.startswith(token, self.pos):
            self._fail(f"expected {token!r}")
        self.pos += len(token)

    # -- terminals ---------------------------------------------------------

    def _read_iriref(self) -> Iri:
        start = self.pos
        self._expect("<")
        end = self.text.find(">", self.pos)
        if end < 0:
            self._fail("unterminated IRI reference", start)
        raw = self.text[self.pos:end]
        if any(c in raw for c in " \t\n\"{}|^`"):
            self._fail("invalid character inside IRI reference", start)
        self.pos = end + 1
        return Iri(raw)

    def _read_pname_or_keyword(self) -> str:
        start = self.pos
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c.isalnum() or c in _PN_LOCAL_EXTRA or c == ":":
                self.pos += 1
            else:
                break
        if self.pos == start:
            self._fail("expected a prefixed name")
        # a PN_LOCAL may contain dots but not end with one; trailing dots
        # belong to the statement terminator
        token = self.text[start:self.pos]
        while token.endswith("."):
            token = token[:-1]
            self.pos -= 1
        if not token:
            self._fail("expected a prefixed name", start)
        return token

    def _resolve_pname(self, pname: str, at: int) -> Iri:
        if ":" not in pname:
            self._fail(f"{pname!r} is not a prefixed name", at)
        prefix, local = pname.split(":", 1)
        if prefix not in self.prefixes:
            self._fail(f"undeclared prefix {prefix!r}", at)
        return Iri(self.prefixes[prefix] + local)

    def _read_string_body(self) -> str:
        if self.text.startswith('"""', self.pos):
            quote, long_form = '"""', True
        elif self.text.startswith("'''", self.pos):
            quote, long_form = "'''", True
        elif self._peek() in "\"'":
            quote, long_form = self._peek(), False
        else:
            self._fail("expected a string literal")
        start = self.pos
        self.pos += len(quote)
        out: list[str] = []
        while True:
            if self.pos >= len(self.text):
                self._fail("unterminated string literal", start)
            if self.text.startswith(quote, self.pos):
                self.pos += len(quote)
                return "".join(out)
            c = self.text[self.pos]
            if c == "\\":
                self.pos += 1
                esc = self._peek()
                simple = {"t": "\t", "n": "\n", "r": "\r", "b": "\b", "f": "\f",
                          '"': '"', "'": "'", "\\": "\\"}
                if esc in simple:
                    out.append(simple[esc])
                    self.pos += 1
                elif esc in "uU":
                    width = 4 if esc == "u" else 8
                    hexpart = self.text[self.pos + 1:self.pos + 1 + width]
                    if len(hexpart) != width:
                        self._fail("truncated unicode escape")
                    try:
                        out.append(chr(int(hexpart, 16)))
                    except ValueError:
                        self._fail("invalid unicode escape")
                    self.pos += 1 + width
                else:
                    self._fail(f"unsupported escape \\{esc}")
            elif c == "\n" and not long_form:
                self._fail("newline in single-line string literal", start)
            else:
                out.append(c)
                self.pos += 1

    def _read_literal(self) -> Literal:
        value = self._read_string_body()
        if self._peek() == "@":
            self.pos += 1
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                                 or self.text[self.pos] == "-"):
                self.pos += 1
            if self.pos == start:
                self._fail("empty language tag")
            return Literal(value, lang=self.text[start:self.pos])
        if self.text.startswith("^^", self.pos):
            self.pos += 2
            dtype = self._read_iri_term()
            return Literal(value, datatype=dtype.value)
        return Literal(value)

    def _read_numeric_or_boolean(self) -> Literal:
        start = self.pos
        rest = self.text[self.pos:]
        for word, dtype in (("true", "boolean"), ("false", "boolean")):
            if rest.startswith(word) and not (len(rest) > len(word)
                                              and (rest[len(word)].isalnum() or rest[len(word)] == "_")):
                self.pos += len(word)
                return Literal(word, datatype="http://www.w3.org/2001/XMLSchema#boolean")
        while self.pos < len(self.text) and self.text[self.pos] in "+-0123456789.eE":
            self.pos += 1
        token = self.text[start:self.pos]
        if not token or token in "+-.":
            self._fail("expected a literal", start)
        xsd = "http://www.w3.org/2001/XMLSchema#"
        if "e" in token.lower():
            dtype = xsd + "double"
        elif "." in token:
            dtype = xsd + "decimal"
        else:
            dtype = xsd + "integer"
        try:
            float(token)
        except ValueError:
            self._fail(f"malformed numeric literal {token!r}", start)
        return Literal(token, datatype=dtype)

    def _read_iri_term(self) -> Iri:
        if self._peek() == "<":
            return self._read_iriref()
        at = self.pos
        return self._resolve_pname(self._read_pname_or_keyword(), at)

    def _fresh_blank(self) -> BlankNode:
        node = BlankNode(f"b{self._blank_counter}")
        self._blank_counter += 1
        return node

    # -- grammar -----------------------------------------------------------

    def parse(self) -> list[Triple]:
        while True:
            self._skip_ws()
            if self.pos >= len(self.text):
                return self.triples
            if self.text.startswith("@prefix", self.pos):
                self.pos += len("@prefix")
                self._directive(sparql_form=False)
            elif self.text.startswith("@base", self.pos) or self.text[self.pos:self.pos + 4].upper() == "BASE":
                self._fail("base declarations are not supported")
            elif self.text[self.pos:self.pos + 6].upper() == "PREFIX" and \
                    self.text[self.pos + 6:self.pos + 7] in _WS:
                self.pos += len("PREFIX")
                self._directive(sparql_form=True)
            elif self._peek() == "@":
                self._fail("unsupported directive")
            else:
                self._triples_statement()

    def _directive(self, sparql_form: bool) -> None:
        self._skip_ws()
        at = self.pos
        pname = self._read_pname_or_keyword()
        if not pname.endswith(":"):
            self._fail("prefix declaration must end with ':'", at)
        prefix = pname[:-1]
        self._skip_ws()
        iri = self._read_iriref()
        if not sparql_form:
            self._skip_ws()
            self._expect(".")
        self.prefixes[prefix] = iri.value

    def _triples_statement(self) -> None:
        subject = self._subject()
        self._skip_ws()
        self._predicate_object_list(subject)
        self._skip_ws()
        self._expect(".")

    def _subject(self) -> Term:
        c = self._peek()
        if c == "<":
            return self._read_iriref()
        if c == "[":
            return self._blank_node_property_list()
        if c == "(":
            self._fail("RDF collections are not supported")
        if self.text.startswith("_:", self.pos):
            return self._blank_node_label()
        at = self.pos
        return self._resolve_pname(self._read_pname_or_keyword(), at)

    def _blank_node_label(self) -> BlankNode:
        self.pos += 2
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                             or self.text[self.pos] in "_-"):
            self.pos += 1
        if self.pos == start:
            self._fail("empty blank node label")
        return BlankNode("u" + self.text[start:self.pos])

    def _verb(self) -> Iri:
        if self.text.startswith("a", self.pos) and \
                self.text[self.pos + 1:self.pos + 2] in _WS + "<[":
            self.pos += 1
            return Iri(RDF_TYPE)
        return self._read_iri_term()

    def _predicate_object_list(self, subject: Term) -> None:
        while True:
            self._skip_ws()
            predicate = self._verb()
            self._skip_ws()
            self._object_list(subject, predicate)
            self._skip_ws()
            if self._peek() == ";":
                self.pos += 1
                self._skip_ws()
                # trailing semicolon before '.' or ']' is legal
                if self._peek() in ".]":
                    return
                continue
            return

    def _object_list(self, subject: Term, predicate: Iri) -> None:
        while True:
            obj = self._object()
            self.triples.append((subject, predicate, obj))
            self._skip_ws()
            if self._peek() == ",":
                self.pos += 1
                self._skip_ws()
                continue
            return

    def _object(self) -> Term:
        c = self._peek()
        if c == "":
            self._fail("unexpected end of input, expected an object")
        if c == "<":
            return self._read_iriref()
        if c == "[":
            return self._blank_node_property_list()
        if c == "(":
            self._fail("RDF collections are not supported")
        if c in "\"'":
            return self._read_literal()
        if c in "+-0123456789" or self.text.startswith(("true", "false"), self.pos):
            return self._read_numeric_or_boolean()
        if self.text.startswith("_:", self.pos):
            return self._blank_node_label()
        at = self.pos
        return self._resolve_pname(self._read_pname_or_keyword(), at)

    def _blank_node_property_list(self) -> BlankNode:
        self._expect("[")
        node = self._fresh_blank()
        self._skip_ws()
        if self._peek() == "]":
            self.pos += 1
            return node
        self._predicate_object_list(node)
        self._skip_ws()
        self._expect("]")
        return node


def parse_turtle(text: str) -> list[Triple]:
    """Parse a Turtle document into triples, in document order."""
    return _Parser(text).parse()


def local_name(iri: str) -> str:
    """Short name of an IRI: the part after '#', else after the last '/'."""
    if "#" in iri:
        return iri.rsplit("#", 1)[1]
    return iri.rstrip("/").rsplit("/", 1)[-1]
