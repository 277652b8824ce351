"""Symbolic tropical expressions, the generator set they range over, and S-expression I/O."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .errors import ExprSyntaxError, UnboundSymbol
from .extended import INF, Q, Value, fmt, to_value
from .functions import (RationalFunction, cf, from_canonical, restrict, trop_add, trop_inv,
                        trop_mul, trop_pow)
from .graph import (CanonicalModel, Contraction, TropicalCurve, canonical_model,
                    contract_infinite_edges)


# expression nodes --------------------------------------------------------------
# Nodes compare by identity: synthesized trees share subtrees and evaluation
# memoizes on id().

@dataclass(eq=False)
class Const:
    value: Value


@dataclass(eq=False)
class Gen:
    symbol: str


@dataclass(eq=False)
class Max:
    children: tuple
    tag: Optional[str] = None


@dataclass(eq=False)
class Plus:
    children: tuple
    tag: Optional[str] = None


@dataclass(eq=False)
class Neg:
    child: object
    tag: Optional[str] = None


@dataclass(eq=False)
class Scale:
    child: object
    k: int
    tag: Optional[str] = None


def const(c) -> Const:
    return Const(to_value(c))


def tmax(*xs, tag=None):
    xs = tuple(xs)
    return xs[0] if len(xs) == 1 and tag is None else Max(xs, tag)


def tplus(*xs, tag=None):
    xs = tuple(xs)
    return xs[0] if len(xs) == 1 and tag is None else Plus(xs, tag)


def tagged(node, tag: str):
    """Attach a provenance tag to a compound node; leaves and tagged nodes are left alone."""
    if not isinstance(node, (Const, Gen)) and node.tag is None:
        node.tag = tag
    return node


def children(node) -> tuple:
    if isinstance(node, (Max, Plus)):
        return node.children
    if isinstance(node, (Neg, Scale)):
        return (node.child,)
    return ()


def walk(node):
    """Distinct nodes of the DAG, each once."""
    seen, stack = set(), [node]
    while stack:
        n = stack.pop()
        if id(n) in seen:
            continue
        seen.add(id(n))
        yield n
        stack.extend(children(n))


def symbols(node) -> set:
    return {n.symbol for n in walk(node) if isinstance(n, Gen)}


def tree_size(node) -> int:
    """Number of nodes when shared subtrees are counted once."""
    return sum(1 for _ in walk(node))


def structurally_equal(a, b) -> bool:
    return print_expr(a) == print_expr(b)


# generator set ---------------------------------------------------------------------

@dataclass
class GeneratorSet:
    """The finite generating set over the canonical model.

    Bindings live on the canonical curve; :meth:`on_curve` transports a
    canonical function back to the user's model.
    """

    curve: TropicalCurve
    canon: CanonicalModel
    contraction: Contraction
    bindings: dict
    legs: list = field(default_factory=list)   # canonical ∞ edge id for linf@i, 1-based
    memo: dict = field(default_factory=dict, repr=False)

    @property
    def ccurve(self) -> TropicalCurve:
        return self.canon.curve

    @property
    def work(self) -> TropicalCurve:
        """The metric graph Γ' the synthesis runs on."""
        return self.contraction.curve

    def symbols(self) -> list:
        return list(self.bindings)

    def counted_size(self) -> int:
        """Size after merging each (g@e, h@e) pair into one element g@e ⊙ h@e^-1."""
        n_v = sum(1 for s in self.bindings if s.startswith("vinf@"))
        n_l = sum(1 for s in self.bindings if s.startswith("linf@"))
        n_e = sum(1 for s in self.bindings if s.startswith("f@"))
        return n_v + n_l + 2 * n_e

    def bound_size(self) -> int:
        c = self.ccurve
        n_inf = sum(1 for e in c.edges.values() if e.infinite)
        return len(c.vertices) + 2 * (len(c.edges) - n_inf)

    def on_curve(self, f: RationalFunction) -> RationalFunction:
        return from_canonical(f, self.canon)

    def leg_symbol(self, eid: str) -> str:
        return f"linf@{self.legs.index(eid) + 1}"


def generators(curve: TropicalCurve) -> GeneratorSet:
    if "gens" in curve._cache:
        return curve._cache["gens"]
    cm = canonical_model(curve)
    c = cm.curve
    con = contract_infinite_edges(c)
    b: dict = {}
    for eid in sorted(c.edges):
        e = c.edges[eid]
        if e.infinite:
            continue
        L = e.length
        b[f"f@{eid}"] = cf(c, c.point_subgraph(c.point(eid, L / 2)), L / 2)
        b[f"g@{eid}"] = cf(c, c.point_subgraph(c.point(eid, L / 4)), L / 4)
        b[f"h@{eid}"] = cf(c, c.point_subgraph(c.point(eid, 3 * L / 4)), L / 4)
    for v in c.finite_vertices:
        if c.incidence[v]:
            b[f"vinf@{v}"] = cf(c, c.subgraph((), [v]), INF)
        else:
            b[f"vinf@{v}"] = RationalFunction.constant(c, 0)
    legs = sorted(eid for eid, e in c.edges.items() if e.infinite)
    for i, eid in enumerate(legs, 1):
        e = c.edges[eid]
        rest = [(x, 0, y.length) for x, y in c.edges.items() if x != eid]
        b[f"linf@{i}"] = cf(c, c.subgraph(rest, [e.u]), INF)
    gs = GeneratorSet(curve, cm, con, b, legs)
    curve._cache["gens"] = gs
    return gs


# evaluation ----------------------------------------------------------------------

_MEMO_LIMIT = 500_000


def eval_canonical(expr, gens: GeneratorSet) -> RationalFunction:
    """Evaluate on the canonical curve, memoizing shared subtrees.

    Nodes are value-numbered: two subtrees with the same shape over the same
    children are evaluated once, even when they are distinct objects. The
    memo lives on the generator set and keeps each node alive, so ids stay
    unique while cached.
    """
    c = gens.ccurve
    if len(gens.memo) > _MEMO_LIMIT:
        gens.memo.clear()
    memo = gens.memo
    table = memo.setdefault("shapes", {})
    stack = [(expr, False)]
    while stack:
        n, done = stack.pop()
        if id(n) in memo:
            continue
        if done:
            key = _shape(n, memo)
            hit = table.get(key)
            if hit is None:
                hit = (_eval_node(n, memo, gens, c), len(table))
                table[key] = hit
            memo[id(n)] = (n,) + hit
            continue
        stack.append((n, True))
        for ch in children(n):
            if id(ch) not in memo:
                stack.append((ch, False))
    return memo[id(expr)][1]


def _shape(n, memo) -> tuple:
    if isinstance(n, Const):
        return ("const", n.value)
    if isinstance(n, Gen):
        return ("gen", n.symbol)
    if isinstance(n, Scale):
        return ("scale", n.k, memo[id(n.child)][2])
    return (type(n).__name__,) + tuple(memo[id(ch)][2] for ch in children(n))


def _eval_node(n, memo, gens, c):
    val = lambda ch: memo[id(ch)][1]  # noqa: E731
    if isinstance(n, Const):
        return RationalFunction.constant(c, n.value)
    if isinstance(n, Gen):
        if n.symbol not in gens.bindings:
            raise UnboundSymbol(n.symbol)
        return gens.bindings[n.symbol]
    if isinstance(n, Max):
        out = val(n.children[0])
        for ch in n.children[1:]:
            out = trop_add(out, val(ch))
        return out
    if isinstance(n, Plus):
        out = val(n.children[0])
        for ch in n.children[1:]:
            out = trop_mul(out, val(ch))
        return out
    if isinstance(n, Neg):
        return trop_inv(val(n.child))
    if isinstance(n, Scale):
        return trop_pow(val(n.child), n.k)
    raise TypeError(f"not an expression node: {n!r}")


def eval_expr(expr, gens: GeneratorSet) -> RationalFunction:
    """Evaluate to a function on the curve the generator set was built for."""
    return gens.on_curve(eval_canonical(expr, gens))


def eval_work(expr, gens: GeneratorSet) -> RationalFunction:
    """Evaluate and restrict to Γ' (the curve with ∞ edges contracted)."""
    return restrict(eval_canonical(expr, gens), gens.contraction)


# S-expression text -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(;[^\n]*)|(\()|(\))|([^\s();]+))")
_SYMBOL = re.compile(r"^(f|g|h|vinf|linf)@[^\s();]+$")


def _tokens(text: str):
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                return
            raise ExprSyntaxError("unexpected character", pos)
        start = m.start(m.lastindex) if m.lastindex else pos
        if m.group(1):
            yield "comment", m.group(1)[1:].strip(), start
        elif m.group(2):
            yield "(", "(", start
        elif m.group(3):
            yield ")", ")", start
        elif m.group(4):
            yield "atom", m.group(4), start
        pos = m.end()


class _Parser:
    def __init__(self, text: str):
        self.toks = list(_tokens(text))
        self.i = 0
        self.end = len(text)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", None, self.end)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def skip_comments(self):
        while self.peek()[0] == "comment":
            self.i += 1

    def expr(self):
        self.skip_comments()
        kind, val, pos = self.take()
        if kind == "atom":
            if not _SYMBOL.match(val):
                raise ExprSyntaxError(f"unknown symbol {val!r}", pos)
            return Gen(val)
        if kind != "(":
            raise ExprSyntaxError("expected an expression", pos)
        kind, op, pos = self.take()
        if kind != "atom":
            raise ExprSyntaxError("expected an operator", pos)
        tag = None
        if self.peek()[0] == "comment":
            tag = self.take()[1]
        if op == "const":
            self.skip_comments()
            kind, val, vpos = self.take()
            if kind != "atom":
                raise ExprSyntaxError("expected a constant", vpos)
            try:
                node = Const(to_value(val))
            except (ValueError, ZeroDivisionError, TypeError):
                raise ExprSyntaxError(f"bad constant {val!r}", vpos) from None
        elif op == "scale":
            self.skip_comments()
            kind, val, vpos = self.take()
            if kind != "atom" or not re.fullmatch(r"[+-]?\d+", val):
                raise ExprSyntaxError("expected an integer exponent", vpos)
            node = Scale(self.expr(), int(val), tag)
        elif op == "neg":
            node = Neg(self.expr(), tag)
        elif op in ("max", "plus"):
            kids = []
            while True:
                self.skip_comments()
                if self.peek()[0] in (")", "eof"):
                    break
                kids.append(self.expr())
            if len(kids) < 2:
                raise ExprSyntaxError(f"{op} needs at least two operands", pos)
            node = (Max if op == "max" else Plus)(tuple(kids), tag)
        else:
            raise ExprSyntaxError(f"unknown operator {op!r}", pos)
        self.skip_comments()
        kind, _, cpos = self.take()
        if kind != ")":
            raise ExprSyntaxError("expected ')'", cpos)
        return node


def parse_expr(text: str):
    p = _Parser(text)
    node = p.expr()
    p.skip_comments()
    kind, _, pos = p.peek()
    if kind != "eof":
        raise ExprSyntaxError("trailing input", pos)
    return node


def parse_batch(text: str) -> list:
    """Parse newline-separated expressions; blank and comment-only lines are skipped."""
    out = []
    p = _Parser(text)
    while True:
        p.skip_comments()
        if p.peek()[0] == "eof":
            return out
        out.append(p.expr())


def print_expr(node, annotate: bool = False) -> str:
    """Canonical one-line form, or an indented form with ``; tag`` comments."""
    if not annotate:
        parts: list = []
        _flat(node, parts)
        return "".join(parts)
    lines: list = []
    _pretty(node, 0, lines)
    return "\n".join(lines)


_OPS = {Max: "max", Plus: "plus"}


def _flat(n, out):
    # iterative to survive deep extension chains
    stack = [n]
    while stack:
        n = stack.pop()
        if isinstance(n, str):
            out.append(n)
        elif isinstance(n, Const):
            out.append(f"(const {fmt(n.value)})")
        elif isinstance(n, Gen):
            out.append(n.symbol)
        elif isinstance(n, (Max, Plus)):
            out.append(f"({_OPS[type(n)]}")
            stack.append(")")
            for ch in reversed(n.children):
                stack.append(ch)
                stack.append(" ")
        elif isinstance(n, Neg):
            out.append("(neg ")
            stack.extend([")", n.child])
        elif isinstance(n, Scale):
            out.append(f"(scale {n.k} ")
            stack.extend([")", n.child])


def _pretty(n, depth, lines):
    pad = "  " * depth
    if isinstance(n, Const):
        lines.append(pad + f"(const {fmt(n.value)})")
        return
    if isinstance(n, Gen):
        lines.append(pad + n.symbol)
        return
    if isinstance(n, (Max, Plus)):
        head = f"({_OPS[type(n)]}"
    elif isinstance(n, Neg):
        head = "(neg"
    else:
        head = f"(scale {n.k}" if not n.tag else "(scale"
    if n.tag:
        lines.append(pad + head + " ; " + n.tag)
        if isinstance(n, Scale):
            lines.append(pad + f"  {n.k}")
    else:
        lines.append(pad + head)
    for ch in children(n):
        _pretty(ch, depth + 1, lines)
    lines[-1] += ")"


# property helpers ------------------------------------------------------------------------

def expand_scale(node):
    """Rewrite one Scale node as repeated Plus (and Neg) for the scaling property."""
    if not isinstance(node, Scale):
        return node
    k = node.k
    if k == 0:
        return Const(Q(0))
    base = node.child if k > 0 else Neg(node.child)
    return base if abs(k) == 1 else Plus(tuple([base] * abs(k)))


def one_point_symbols_only(node) -> bool:
    """True when every generator referenced is a one-point chip-firing move or an ∞-leg move."""
    return all(s.split("@", 1)[0] in ("f", "g", "h", "vinf", "linf") for s in symbols(node))
