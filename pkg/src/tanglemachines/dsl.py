"""Line-oriented text format (``.tmd``) for machines.

    rack dihedral 3
    process closed P: a b c
    interaction agent c { a -> b sign + ; b -> c sign - }
    colour a 0
    colour b ?

``edge a b`` asserts that ``a -> b`` is an edge of some process.  Signs
default to ``+``.  ``#`` starts a comment.  Every error carries the line and
column of the offending token.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .machine import Interaction, Machine, MachineError, Patient, Process
from .racks import RackError, RackTable, build_rack


class TmdError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col

    def to_dict(self) -> dict:
        return {"error": type(self).__name__, "message": self.message, "line": self.line, "col": self.col}


class TmdSyntaxError(TmdError):
    pass


class UnknownRegister(TmdError):
    pass


class DuplicateName(TmdError):
    pass


class ColourOutOfRange(TmdError):
    pass


class InvalidEdge(TmdError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # NAME INT ARROW SIGN PUNCT NL EOF
    text: str
    line: int
    col: int


_TOKEN = re.compile(
    r"(?P<WS>[ \t\r]+)|(?P<COMMENT>#[^\n]*)|(?P<NL>\n)"
    r"|(?P<ARROW>->)|(?P<INT>-?\d+(?![\w']))|(?P<NAME>[A-Za-z_](?:[\w'.]|-(?!>))*)"
    r"|(?P<SIGN>[+-])|(?P<PUNCT>[{};:|?])"
)


def tokenize(text: str) -> list[Token]:
    out = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if mt is None:
            end = pos
            while end < len(text) and not text[end].isspace():
                end += 1
            raise TmdSyntaxError(f"unexpected text {text[pos:end]!r}", line, col)
        kind = mt.lastgroup
        if kind == "NL":
            out.append(Token("NL", "\n", line, col))
            line += 1
            line_start = mt.end()
        elif kind not in ("WS", "COMMENT"):
            out.append(Token(kind, mt.group(), line, col))
        pos = mt.end()
    out.append(Token("EOF", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.rack: RackTable | None = None
        self.processes: list[Process] = []
        self.reg_pos: dict[str, Token] = {}
        self.proc_names: set[str] = set()
        self.succ: dict[str, str] = {}
        self.interactions: list[tuple[Token, Interaction]] = []
        self.colours: dict[str, int | None] = {}
        self.colour_tok: dict[str, Token] = {}
        self.provenance: list[str] = []

    # token helpers
    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, text: str | None = None) -> Token:
        t = self.next()
        if t.kind != kind or (text is not None and t.text != text):
            want = text if text is not None else kind.lower()
            got = t.text if t.kind not in ("NL", "EOF") else ("end of line" if t.kind == "NL" else "end of input")
            raise TmdSyntaxError(f"expected {want}, got {got!r}", t.line, t.col)
        return t

    def end_statement(self):
        t = self.peek()
        if t.kind not in ("NL", "EOF"):
            raise TmdSyntaxError(f"unexpected {t.text!r}", t.line, t.col)
        if t.kind == "NL":
            self.i += 1

    def skip_nl(self):
        while self.peek().kind == "NL":
            self.i += 1

    def register(self) -> Token:
        t = self.expect("NAME")
        if t.text not in self.reg_pos:
            raise UnknownRegister(f"undeclared register {t.text!r}", t.line, t.col)
        return t

    # statements
    def parse(self) -> Machine:
        while True:
            self.skip_nl()
            t = self.peek()
            if t.kind == "EOF":
                break
            if t.kind != "NAME":
                raise TmdSyntaxError(f"expected a statement, got {t.text!r}", t.line, t.col)
            handler = getattr(self, "stmt_" + t.text, None)
            if handler is None:
                raise TmdSyntaxError(f"unknown statement {t.text!r}", t.line, t.col)
            if t.text != "rack" and self.rack is None:
                raise TmdSyntaxError("the rack must be declared first", t.line, t.col)
            self.i += 1
            handler(t)
        if self.rack is None:
            t = self.peek()
            raise TmdSyntaxError("missing rack declaration", t.line, t.col)
        for r, tok in self.colour_tok.items():
            c = self.colours[r]
            if c is not None and not (0 <= c < self.rack.size):
                raise ColourOutOfRange(f"colour {c} outside rack of size {self.rack.size}", tok.line, tok.col)
        try:
            return Machine(
                self.rack, tuple(self.processes), tuple(it for _, it in self.interactions),
                dict(self.colours), tuple(self.provenance),
            )
        except MachineError as exc:
            t = self.interactions[-1][0] if self.interactions else self.toks[0]
            raise TmdSyntaxError(str(exc), t.line, t.col) from exc

    def stmt_rack(self, head: Token):
        if self.rack is not None:
            raise DuplicateName("rack declared twice", head.line, head.col)
        kind = self.expect("NAME")
        params: list = []
        rows: list[list[int]] = [[]]
        label = label_tok = None
        while self.peek().kind not in ("NL", "EOF"):
            t = self.next()
            if t.kind == "INT":
                rows[-1].append(int(t.text))
            elif t.kind == "PUNCT" and t.text == "|":
                rows.append([])
            elif t.kind == "NAME" and label is None and not any(rows[0]) and len(rows) == 1:
                label, label_tok = t.text, t
            else:
                raise TmdSyntaxError(f"bad rack parameter {t.text!r}", t.line, t.col)
        if label_tok is not None and kind.text != "conjugation":
            raise TmdSyntaxError(f"rack {kind.text} takes integer parameters", label_tok.line, label_tok.col)
        try:
            if kind.text == "explicit":
                self.rack = build_rack("explicit", rows)
            elif kind.text == "conjugation":
                if label is not None and label != "table":
                    self.rack = build_rack("conjugation", label)
                else:
                    self.rack = build_rack("conjugation", rows)
            else:
                if len(rows) != 1:
                    raise RackError(f"rack {kind.text} takes integer parameters")
                params = rows[0]
                self.rack = build_rack(kind.text, *params)
        except (RackError, ValueError, IndexError) as exc:
            raise TmdSyntaxError(f"bad rack: {exc}", kind.line, kind.col) from exc
        self.end_statement()

    def stmt_process(self, head: Token):
        kind = self.expect("NAME")
        if kind.text not in ("open", "closed"):
            raise TmdSyntaxError("process kind must be open or closed", kind.line, kind.col)
        name = self.expect("NAME")
        if name.text in self.proc_names:
            raise DuplicateName(f"process {name.text!r} declared twice", name.line, name.col)
        self.proc_names.add(name.text)
        self.expect("PUNCT", ":")
        regs = []
        while self.peek().kind not in ("NL", "EOF"):
            t = self.expect("NAME")
            if t.text in self.reg_pos:
                raise DuplicateName(f"register {t.text!r} declared twice", t.line, t.col)
            self.reg_pos[t.text] = t
            regs.append(t.text)
        if not regs:
            t = self.peek()
            raise TmdSyntaxError("process without registers", t.line, t.col)
        proc = Process(name.text, kind.text, tuple(regs))
        for v, w in proc.edges():
            self.succ[v] = w
        self.processes.append(proc)
        for r in regs:
            self.colours[r] = None
        self.end_statement()

    def _edge(self) -> tuple[Token, Token]:
        a = self.register()
        if self.peek().kind == "ARROW":
            self.i += 1
        b = self.register()
        if self.succ.get(a.text) != b.text:
            raise InvalidEdge(f"{a.text} -> {b.text} is not an edge of any process", b.line, b.col)
        return a, b

    def stmt_edge(self, head: Token):
        self._edge()
        self.end_statement()

    def stmt_interaction(self, head: Token):
        self.expect("NAME", "agent")
        agent = self.register()
        self.skip_nl()
        self.expect("PUNCT", "{")
        patients = []
        seen = set()
        while True:
            self.skip_nl()
            if self.peek().kind == "PUNCT" and self.peek().text == "}":
                break
            a = self.register()
            self.expect("ARROW")
            b = self.register()
            if self.succ.get(a.text) != b.text:
                raise InvalidEdge(f"{a.text} -> {b.text} is not an edge of any process", b.line, b.col)
            if a.text in seen:
                raise DuplicateName(f"edge {a.text} -> {b.text} listed twice", a.line, a.col)
            seen.add(a.text)
            sign = 1
            if self.peek().kind == "NAME" and self.peek().text == "sign":
                self.i += 1
                s = self.expect("SIGN")
                sign = 1 if s.text == "+" else -1
            patients.append(Patient(a.text, sign))
            self.skip_nl()
            t = self.peek()
            if t.kind == "PUNCT" and t.text == ";":
                self.i += 1
            elif not (t.kind == "PUNCT" and t.text == "}"):
                raise TmdSyntaxError(f"expected ';' or '}}', got {t.text!r}", t.line, t.col)
        close = self.expect("PUNCT", "}")
        if not patients:
            raise TmdSyntaxError("interaction without patients", close.line, close.col)
        self.interactions.append((head, Interaction(agent.text, tuple(patients))))
        self.end_statement()

    def stmt_colour(self, head: Token):
        r = self.register()
        if r.text in self.colour_tok:
            raise DuplicateName(f"colour of {r.text!r} given twice", r.line, r.col)
        t = self.next()
        if t.kind == "PUNCT" and t.text == "?":
            self.colours[r.text] = None
        elif t.kind == "INT":
            self.colours[r.text] = int(t.text)
        else:
            raise TmdSyntaxError(f"expected a colour, got {t.text!r}", t.line, t.col)
        self.colour_tok[r.text] = t
        self.end_statement()

    def stmt_provenance(self, head: Token):
        t = self.expect("NAME")
        self.provenance.append(t.text)
        self.end_statement()


def parse(text: str) -> Machine:
    return _Parser(text).parse()


def load(path) -> Machine:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def serialize(m: Machine) -> str:
    lines = ["rack " + m.rack.describe()]
    for p in m.processes:
        lines.append(f"process {p.kind} {p.name}: " + " ".join(p.registers))
    for it in m.interactions:
        body = " ; ".join(f"{p.source} -> {m.succ[p.source]} sign {'+' if p.sign > 0 else '-'}" for p in it.patients)
        lines.append(f"interaction agent {it.agent} {{ {body} }}")
    for r in m.registers:
        c = m.colours[r]
        lines.append(f"colour {r} {'?' if c is None else c}")
    for tag in m.provenance:
        lines.append(f"provenance {tag}")
    return "\n".join(lines) + "\n"


def to_dict(m: Machine) -> dict:
    return {
        "rack": {"kind": m.rack.kind, "params": list(m.rack.params), "size": m.rack.size,
                 "table": [list(row) for row in m.rack.op]},
        "processes": [{"name": p.name, "kind": p.kind, "registers": list(p.registers)} for p in m.processes],
        "interactions": [
            {"agent": it.agent,
             "patients": [{"from": p.source, "to": m.succ[p.source], "sign": p.sign} for p in it.patients]}
            for it in m.interactions
        ],
        "colours": {r: m.colours[r] for r in m.registers},
    }


def to_json(m: Machine) -> str:
    return json.dumps(to_dict(m), indent=2)
