"""Line-oriented job files.

    ring <name> [ungraded] vars <v:deg, ...> [mod <poly; poly; ...>]
    elem <name> in <ring> = <poly>
    quotient <name> = <ring> / <elem>
    complex <name> over <ring> { module <i> twists [t1,...]; map d<i> = [[p,...],[...]]; }
    check ezd <ring> <elem> <elem>
    ann <elem> in <ring>
    resolve <ring> / <elem-or-matrix> --hmax N --dmax N [as <name>]
    operators build <complex> pair <x>,<y> z <list> [--lift canonical|randomized] [--seed N]
    homotopy check <map> --window a:b [--convention hom|plus]
    reproduce-example [--dmax N] [--f <poly>]

``#`` starts a comment.  A statement ends at a newline outside brackets
and braces.  Polynomials are stored in normalized printed form so that
``parse_jobfile(job.to_text()) == job``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .poly import PolyParseError, PolyRing

__all__ = [
    "JobError",
    "JobFile",
    "RingDecl",
    "ElemDecl",
    "QuotientDecl",
    "ComplexDecl",
    "Command",
    "parse_jobfile",
]

NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class JobError(ValueError):
    def __init__(self, msg, line=None, col=None):
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + msg)
        self.msg, self.line, self.col = msg, line, col


@dataclass(frozen=True)
class RingDecl:
    name: str
    vars: tuple  # ((name, degree), ...)
    relations: tuple
    graded: bool = True
    line: int = field(default=0, compare=False)

    def to_text(self):
        out = f"ring {self.name}{'' if self.graded else ' ungraded'} vars "
        out += ", ".join(f"{v}:{d}" for v, d in self.vars)
        if self.relations:
            out += " mod " + "; ".join(self.relations)
        return out


@dataclass(frozen=True)
class ElemDecl:
    name: str
    ring: str
    poly: str
    line: int = field(default=0, compare=False)

    def to_text(self):
        return f"elem {self.name} in {self.ring} = {self.poly}"


@dataclass(frozen=True)
class QuotientDecl:
    name: str
    ring: str
    elem: str
    line: int = field(default=0, compare=False)

    def to_text(self):
        return f"quotient {self.name} = {self.ring} / {self.elem}"


@dataclass(frozen=True)
class ComplexDecl:
    name: str
    ring: str
    modules: tuple  # ((i, (twists...)), ...)
    maps: tuple  # ((i, ((entry, ...), ...)), ...)
    line: int = field(default=0, compare=False)

    def to_text(self):
        lines = [f"complex {self.name} over {self.ring} {{"]
        for i, tw in self.modules:
            lines.append(f"  module {i} twists [{', '.join(str(t) for t in tw)}];")
        for i, rows in self.maps:
            mat = ", ".join("[" + ", ".join(r) + "]" for r in rows)
            lines.append(f"  map d{i} = [{mat}];")
        lines.append("}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Command:
    kind: str
    args: tuple
    options: tuple = ()  # sorted ((key, value), ...)
    line: int = field(default=0, compare=False)

    def option(self, key, default=None):
        return dict(self.options).get(key, default)

    def to_text(self):
        parts = [self.kind]
        a = self.args
        if self.kind == "check ezd":
            parts += list(a)
        elif self.kind == "ann":
            parts += [a[0], "in", a[1]]
        elif self.kind == "resolve":
            parts += [a[0], "/", a[1]]
        elif self.kind == "operators build":
            parts += [a[0], "pair", f"{a[1]},{a[2]}"]
            if a[3]:
                parts += ["z", ",".join(a[3])]
        elif self.kind == "homotopy check":
            parts += [a[0]]
        for k, v in self.options:
            if k == "as":
                continue
            parts += [f"--{k}", str(v)]
        if self.option("as"):
            parts += ["as", self.option("as")]
        return " ".join(parts)


@dataclass
class JobFile:
    statements: tuple = ()

    def __eq__(self, other):
        return isinstance(other, JobFile) and tuple(self.statements) == tuple(other.statements)

    def to_text(self):
        return "\n".join(s.to_text() for s in self.statements) + ("\n" if self.statements else "")

    def declarations(self):
        return [s for s in self.statements if not isinstance(s, Command)]

    def commands(self):
        return [s for s in self.statements if isinstance(s, Command)]


# -- splitting -------------------------------------------------------------


def _split_statements(text):
    """Yield ``(statement_text, start_offset)`` pairs; comments blanked out."""
    clean = re.sub(r"#[^\n]*", lambda m: " " * len(m.group()), text)
    depth = 0
    start = 0
    out = []
    for k, ch in enumerate(clean):
        if ch in "[{(":
            depth += 1
        elif ch in "]})":
            depth -= 1
            if depth < 0:
                raise _located("unbalanced closing bracket", text, k)
        elif ch == "\n" and depth == 0:
            out.append((clean[start:k], start))
            start = k + 1
    if depth != 0:
        raise _located("unclosed bracket or brace", text, len(text) - 1)
    out.append((clean[start:], start))
    return [(s, o) for s, o in out if s.strip()]


def _line_col(text, offset):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _located(msg, text, offset):
    line, col = _line_col(text, max(0, offset))
    return JobError(msg, line, col)


# -- parsing ---------------------------------------------------------------


class _Ctx:
    def __init__(self, text):
        self.text = text
        self.rings = {}  # name -> (PolyRing, graded)
        self.elems = {}  # name -> ring name
        self.complexes = {}  # name -> ring name
        self.maps = set()
        self.covers = {}  # quotient ring -> ring it was cut out of

    def err(self, msg, offset):
        return _located(msg, self.text, offset)


class _Stmt:
    """Cursor over one statement."""

    def __init__(self, ctx, s, base):
        self.ctx, self.s, self.base, self.pos = ctx, s, base, 0

    def skip(self):
        while self.pos < len(self.s) and self.s[self.pos].isspace():
            self.pos += 1

    def at_end(self):
        self.skip()
        return self.pos >= len(self.s)

    def error(self, msg, pos=None):
        return self.ctx.err(msg, self.base + (self.pos if pos is None else pos))

    def name(self, what="name"):
        self.skip()
        m = NAME.match(self.s, self.pos)
        if not m:
            raise self.error(f"expected {what}")
        self.pos = m.end()
        return m.group()

    def expect(self, word):
        self.skip()
        if not self.s.startswith(word, self.pos):
            raise self.error(f"expected '{word}'")
        self.pos += len(word)

    def peek(self, word):
        self.skip()
        return self.s.startswith(word, self.pos)

    def until(self, stops):
        """Raw text up to the first of ``stops`` at bracket depth 0."""
        self.skip()
        depth = 0
        k = self.pos
        while k < len(self.s):
            ch = self.s[k]
            if ch in "[(":
                depth += 1
            elif ch in "])":
                depth -= 1
            elif depth == 0 and any(self.s.startswith(t, k) for t in stops):
                break
            k += 1
        start = self.pos
        self.pos = k
        return self.s[start:k], start

    def int(self):
        self.skip()
        m = re.compile(r"-?\d+").match(self.s, self.pos)
        if not m:
            raise self.error("expected an integer")
        self.pos = m.end()
        return int(m.group())


def _poly(st, ring_name, raw, start):
    P, graded = st.ctx.rings[ring_name]
    try:
        p = P.parse(raw)
    except PolyParseError as e:
        off = start + len(raw) - len(raw.lstrip()) + (e.pos or 0)
        raise st.error(e.msg, off) from None
    return p


def _norm_poly(st, ring_name, raw, start):
    return str(_poly(st, ring_name, raw, start))


def _ring_ref(st):
    pos = st.pos
    name = st.name("ring name")
    if name not in st.ctx.rings:
        raise st.error(f"undefined ring '{name}'", pos + (len(st.s[pos:]) - len(st.s[pos:].lstrip())))
    return name


def _elem_or_poly(st, ring_name, raw, start):
    """An element reference: a bound name or a polynomial literal."""
    raw_s = raw.strip()
    if raw_s in st.ctx.elems:
        return raw_s
    if not raw_s:
        raise st.error("expected an element", start)
    P, _ = st.ctx.rings[ring_name]
    if NAME.fullmatch(raw_s) and raw_s not in P.names:
        raise st.error(f"undefined element '{raw_s}'", start + len(raw) - len(raw.lstrip()))
    return _norm_poly(st, ring_name, raw, start)


def _options(st, allowed):
    opts = {}
    while not st.at_end():
        if st.peek("as "):
            st.expect("as")
            opts["as"] = st.name("name")
            continue
        if not st.peek("--"):
            raise st.error("unexpected text")
        st.expect("--")
        pos = st.pos
        key = st.name("option")
        if key not in allowed:
            raise st.error(f"unknown option --{key}", pos)
        st.skip()
        raw, start = st.until([" --", " as "])
        opts[key] = allowed[key](st, raw.strip(), start)
    return opts


def _opt_int(st, raw, start):
    if not re.fullmatch(r"-?\d+", raw):
        raise st.error("expected an integer", start)
    return int(raw)


def _opt_word(choices):
    def f(st, raw, start):
        if raw not in choices:
            raise st.error(f"expected one of {', '.join(choices)}", start)
        return raw

    return f


def _opt_window(st, raw, start):
    m = re.fullmatch(r"(-?\d+):(-?\d+)", raw)
    if not m:
        raise st.error("window must look like a:b", start)
    a, b = int(m.group(1)), int(m.group(2))
    if a > b:
        raise st.error("empty window", start)
    return f"{a}:{b}"


def _opt_text(st, raw, start):
    if not raw:
        raise st.error("expected a value", start)
    return raw


def _sorted_opts(opts):
    return tuple(sorted(opts.items()))


def _parse_ring(st):
    name = st.name("ring name")
    graded = True
    if st.peek("ungraded"):
        st.expect("ungraded")
        graded = False
    elif st.peek("graded "):
        st.expect("graded")
    st.expect("vars")
    raw, start = st.until([" mod "])
    vars_ = []
    seen = set()
    off = start
    for piece in raw.split(","):
        lead = len(piece) - len(piece.lstrip())
        m = re.fullmatch(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?::\s*(-?\d+))?\s*", piece)
        if not m:
            raise st.error("bad variable declaration", off + lead)
        v, d = m.group(1), int(m.group(2) or 1)
        if v in seen:
            raise st.error(f"repeated variable '{v}'", off + lead)
        if d <= 0:
            raise st.error("variable degrees must be positive", off + lead)
        seen.add(v)
        vars_.append((v, d))
        off += len(piece) + 1
    P = PolyRing([v for v, _ in vars_], [d for _, d in vars_])
    st.ctx.rings[name] = (P, graded)
    rels = []
    if not st.at_end():
        st.expect("mod")
        raw, start = st.until([])
        off = start
        for piece in raw.split(";"):
            if piece.strip():
                p = _poly(st, name, piece, off)
                if graded and not p.is_homogeneous():
                    raise st.error(f"relation {p} is not homogeneous", off + len(piece) - len(piece.lstrip()))
                if p:
                    rels.append(str(p))
            off += len(piece) + 1
    return RingDecl(name, tuple(vars_), tuple(rels), graded)


def _parse_elem(st):
    name = st.name("element name")
    st.expect("in")
    ring = _ring_ref(st)
    st.expect("=")
    raw, start = st.until([])
    st.ctx.elems[name] = ring
    return ElemDecl(name, ring, _norm_poly(st, ring, raw, start))


def _parse_quotient(st):
    name = st.name("ring name")
    st.expect("=")
    ring = _ring_ref(st)
    st.expect("/")
    raw, start = st.until([])
    elem = _elem_or_poly(st, ring, raw, start)
    st.ctx.rings[name] = st.ctx.rings[ring]
    return QuotientDecl(name, ring, elem)


def _parse_matrix(st, ring, raw, start):
    raw = raw.strip()
    if not (raw.startswith("[") and raw.endswith("]")):
        raise st.error("expected a matrix [[...], ...]", start)
    inner = raw[1:-1]
    rows = []
    k = 0
    base = start + 1
    while k < len(inner):
        ch = inner[k]
        if ch.isspace() or ch == ",":
            k += 1
            continue
        if ch != "[":
            raise st.error("expected '[' starting a matrix row", base + k)
        end = inner.find("]", k)
        row_text = inner[k + 1 : end]
        entries = []
        off = base + k + 1
        for piece in row_text.split(","):
            if not piece.strip():
                raise st.error("empty matrix entry", off)
            entries.append(_norm_poly(st, ring, piece, off))
            off += len(piece) + 1
        rows.append(tuple(entries))
        k = end + 1
    if len({len(r) for r in rows}) > 1:
        raise st.error("ragged matrix", start)
    return tuple(rows)


def _split_depth0(text, seps):
    parts, depth, start = [], 0, 0
    for k, ch in enumerate(text):
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        elif ch in seps and depth == 0:
            parts.append(text[start:k])
            start = k + 1
    parts.append(text[start:])
    return parts


def _parse_complex(st):
    name = st.name("complex name")
    st.expect("over")
    ring = _ring_ref(st)
    st.expect("{")
    body_start = st.pos
    end = st.s.rfind("}")
    if end < body_start:
        raise st.error("missing '}'")
    body = st.s[body_start:end]
    modules, maps = {}, {}
    off = body_start
    for part in _split_depth0(body, ";\n"):
        lead = len(part) - len(part.lstrip())
        text = part.strip()
        if text:
            m = re.fullmatch(r"module\s+(-?\d+)\s+twists\s*\[([^\]]*)\]", text)
            if m:
                i = int(m.group(1))
                tw = tuple(int(t) for t in m.group(2).split(",") if t.strip())
                if i in modules:
                    raise st.error(f"module {i} declared twice", off + lead)
                modules[i] = tw
            else:
                m = re.match(r"map\s+d(-?\d+)\s*=", text)
                if not m:
                    raise st.error("expected 'module' or 'map'", off + lead)
                i = int(m.group(1))
                rows = _parse_matrix(st, ring, text[m.end():], off + lead + m.end())
                maps[i] = rows
        off += len(part) + 1
    for i, rows in maps.items():
        if i not in modules or i - 1 not in modules:
            raise st.error(f"d{i} needs modules {i - 1} and {i}", body_start)
        if len(rows) != len(modules[i - 1]) or any(len(r) != len(modules[i]) for r in rows):
            raise st.error(f"d{i} has the wrong shape", body_start)
    st.pos = end + 1
    if not st.at_end():
        raise st.error("unexpected text after '}'")
    st.ctx.complexes[name] = ring
    return ComplexDecl(name, ring, tuple(sorted(modules.items())), tuple(sorted(maps.items())))


def _parse_command(st, head):
    ctx = st.ctx
    if head == "check":
        st.expect("ezd")
        ring = _ring_ref(st)
        args = []
        for _ in range(2):
            raw, start = st.until([" "])
            args.append(_elem_or_poly(st, ring, raw, start))
        if not st.at_end():
            raise st.error("unexpected text")
        return Command("check ezd", (ring, *args))
    if head == "ann":
        raw, start = st.until([" in "])
        st.expect("in")
        ring = _ring_ref(st)
        if not st.at_end():
            raise st.error("unexpected text")
        return Command("ann", (_elem_or_poly(st, ring, raw, start), ring))
    if head == "resolve":
        ring = _ring_ref(st)
        st.expect("/")
        raw, start = st.until([" --", " as "])
        raw = raw.strip()
        if raw.startswith("["):
            mod = "[" + ", ".join("[" + ", ".join(r) + "]" for r in _parse_matrix(st, ring, raw, start)) + "]"
        else:
            mod = _elem_or_poly(st, ring, raw, start)
        opts = _options(st, {"hmax": _opt_int, "dmax": _opt_int})
        for k in ("hmax", "dmax"):
            if k not in opts:
                raise st.error(f"resolve needs --{k}")
        if "as" in opts:
            ctx.complexes[opts["as"]] = ring
        return Command("resolve", (ring, mod), _sorted_opts(opts))
    if head == "operators":
        st.expect("build")
        pos = st.pos
        cx = st.name("complex name")
        if cx not in ctx.complexes:
            raise st.error(f"undefined complex '{cx}'", pos + 1)
        st.expect("pair")
        raw, start = st.until([" z ", " --"])
        if raw.count(",") != 1:
            raise st.error("pair must be written x,y", start)
        xr, yr = raw.split(",")
        ring = ctx.complexes[cx]
        cover = _cover_name(ctx, ring)
        x = _elem_or_poly(st, cover, xr, start)
        y = _elem_or_poly(st, cover, yr, start + len(xr) + 1)
        zs = []
        if st.peek("z "):
            st.expect("z")
            raw, start = st.until([" --"])
            off = start
            for piece in raw.split(","):
                zs.append(_elem_or_poly(st, ring, piece, off))
                off += len(piece) + 1
        opts = _options(st, {"lift": _opt_word(("canonical", "randomized")), "seed": _opt_int})
        for z in zs:
            ctx.maps.add(f"psi_{z}")
            ctx.maps.add(f"{cx}.psi_{z}")
        ctx.maps.update({"phi", f"{cx}.phi"})
        return Command("operators build", (cx, x, y, tuple(zs)), _sorted_opts(opts))
    if head == "homotopy":
        st.expect("check")
        pos = st.pos
        raw, start = st.until([" --"])
        name = raw.strip()
        if name not in ctx.maps:
            raise st.error(f"undefined map '{name}'", start)
        opts = _options(st, {"window": _opt_window, "convention": _opt_word(("hom", "plus"))})
        if "window" not in opts:
            raise st.error("homotopy check needs --window a:b", pos)
        return Command("homotopy check", (name,), _sorted_opts(opts))
    if head == "reproduce-example":
        opts = _options(st, {"dmax": _opt_int, "f": _opt_text})
        return Command("reproduce-example", (), _sorted_opts(opts))
    raise st.error(f"unknown statement '{head}'", 0)


def _cover_name(ctx, ring):
    return ctx.covers.get(ring, ring)


def parse_jobfile(text):
    """Parse job text into a :class:`JobFile`; raises :class:`JobError`."""
    ctx = _Ctx(text)
    out = []
    for s, base in _split_statements(text):
        st = _Stmt(ctx, s, base)
        st.skip()
        m = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*").match(s, st.pos)
        if not m:
            raise st.error("expected a statement")
        head = m.group()
        st.pos = m.end()
        line = _line_col(text, base + m.start())[0]
        if head == "ring":
            stmt = _parse_ring(st)
            if not st.at_end():
                raise st.error("unexpected text")
        elif head == "elem":
            stmt = _parse_elem(st)
        elif head == "quotient":
            stmt = _parse_quotient(st)
            ctx.covers[stmt.name] = stmt.ring
        elif head == "complex":
            stmt = _parse_complex(st)
        else:
            stmt = _parse_command(st, head)
        out.append(_with_line(stmt, line))
    return JobFile(tuple(out))


def _with_line(stmt, line):
    object.__setattr__(stmt, "line", line)
    return stmt
