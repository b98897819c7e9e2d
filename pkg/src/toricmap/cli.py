"""Script front end: declare varieties, maps, and ideals, then query them.

A script is a sequence of declarations and queries:

    variety X { rays = [[1, 0], [0, 1]]; cones = [[0, 1]]; }
    variety P { weights = [[1, 1, 2]]; irrelevant = [[x1], [x2], [x3]]; }
    map f : X -> P { x1 = root(x1, 2); x2 = 0; x3 = x2; }
    ideal I on P { gens = [x1^2*x3 - x2^4]; }

    check f;
    complete f;
    eval f at [1, 4];
    compose f g as h;
    image f of I;
    preimage f of I saturate;
    pullback f of x3;
    same_map f g;

Fan varieties list primitive rays and maximal cones (ray indices, from 0);
fanless varieties list grading rows, the last rows marked as torsion by the
orders in the torsion entry, plus the supports of the irrelevant monomials.
Variables are named x1..xn in declaration order unless a names entry renames
them; map blocks assign every target variable an expression in the source
variables, built from +, -, *, /, ^, rationals, and root(f, r).

parse() builds a Script and positions every error, including unknown names
and malformed expressions, at a character offset of the source.  run()
executes the queries in order and never aborts on a query failure; each
query yields one OutputRecord.  render_text() and render_json() print the
records; the JSON form is byte-stable for a fixed script (sorted keys, no
timing).  Exit codes: 0 clean, 2 script error, 3 some query failed.
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from .groebner import Ideal, set_deadline
from .lattice import Fan
from .maps import (
    Description,
    MapError,
    check_homogeneity,
    check_relevance,
    complete,
    compose,
    same_map,
)
from .poly import (
    ExprError,
    ast_to_section,
    default_names,
    parse_embedded_expression,
    poly_to_str,
    section_to_str,
    tokenize,
)
from .radical import ast_to_formal, radical_to_str
from .schemes import image_of_subscheme, map_point, preimage_ideal, pullback_divisor
from .variety import CoxDataError, ToricVariety

_VERBS = (
    "check",
    "complete",
    "eval",
    "compose",
    "image",
    "preimage",
    "pullback",
    "same_map",
)

_VARIETY_KEYS = ("names", "rays", "cones", "weights", "torsion", "irrelevant")


class ScriptError(ValueError):
    """Script error with a character offset into the source."""

    def __init__(self, message, pos):
        super().__init__(message)
        self.message = message
        self.pos = pos


def _line_col(text, pos):
    line = text.count("\n", 0, pos) + 1
    col = pos - text.rfind("\n", 0, pos)
    return line, col


# -- the syntax tree --------------------------------------------------------------


@dataclass(frozen=True)
class Expr:
    """An expression as written, with its parse tree along for the ride.

    Two expressions are equal when their source text is; the printer emits
    the text verbatim, so printing and reparsing is the identity."""

    text: str
    node: object = field(compare=False, repr=False)


@dataclass(frozen=True)
class VarietyDecl:
    name: str
    entries: tuple  # (key, value) pairs in source order


@dataclass(frozen=True)
class MapDecl:
    name: str
    source: str
    target: str
    assignments: tuple  # (target variable, Expr) pairs in source order


@dataclass(frozen=True)
class IdealDecl:
    name: str
    variety: str
    gens: tuple  # Expr


@dataclass(frozen=True)
class Command:
    verb: str
    args: tuple


@dataclass(frozen=True)
class Script:
    statements: tuple


@dataclass(frozen=True)
class OutputRecord:
    """One executed query: its canonical echo, verdict payload, and timing.

    seconds is wall-clock and never printed, so rendered output is stable."""

    command: str
    status: str  # "ok" or "error"
    payload: dict
    seconds: float


# -- printing ----------------------------------------------------------------------


def _print_int_list(v):
    return "[%s]" % ", ".join(str(a) for a in v)


def _print_matrix(m):
    return "[%s]" % ", ".join(_print_int_list(r) for r in m)


def _print_names(v):
    return "[%s]" % ", ".join(v)


def _print_name_matrix(m):
    return "[%s]" % ", ".join(_print_names(g) for g in m)


def _print_command(cmd):
    v = cmd.verb
    a = cmd.args
    if v in ("check", "complete"):
        return "%s %s" % (v, a[0])
    if v == "eval":
        return "eval %s at [%s]" % (a[0], ", ".join(e.text for e in a[1]))
    if v == "compose":
        return "compose %s %s as %s" % a
    if v == "image":
        return "image %s of %s" % a
    if v == "preimage":
        body = "preimage %s of %s" % (a[0], a[1])
        return body + " saturate" if a[2] else body
    if v == "pullback":
        return "pullback %s of %s" % (a[0], a[1].text)
    return "same_map %s %s" % a


def _print_statement(st):
    if isinstance(st, VarietyDecl):
        lines = ["variety %s {" % st.name]
        for key, val in st.entries:
            if key == "names":
                body = _print_names(val)
            elif key in ("rays", "cones", "weights"):
                body = _print_matrix(val)
            elif key == "torsion":
                body = _print_int_list(val)
            else:
                body = _print_name_matrix(val)
            lines.append("  %s = %s;" % (key, body))
        lines.append("}")
        return "\n".join(lines)
    if isinstance(st, MapDecl):
        lines = ["map %s : %s -> %s {" % (st.name, st.source, st.target)]
        for var, expr in st.assignments:
            lines.append("  %s = %s;" % (var, expr.text))
        lines.append("}")
        return "\n".join(lines)
    if isinstance(st, IdealDecl):
        return "ideal %s on %s {\n  gens = [%s];\n}" % (
            st.name,
            st.variety,
            ", ".join(g.text for g in st.gens),
        )
    return _print_command(st) + ";"


def print_script(script):
    """Canonical text of a script; parse(print_script(s)) rebuilds s exactly."""
    out = "\n".join(_print_statement(st) for st in script.statements)
    return out + "\n" if out else ""


# -- building declarations ---------------------------------------------------------


def _build_variety(decl):
    e = dict(decl.entries)
    names = list(e["names"]) if "names" in e else None
    fanlike = "rays" in e or "cones" in e
    coxlike = "weights" in e or "torsion" in e or "irrelevant" in e
    if fanlike and coxlike:
        raise CoxDataError("a variety block mixes fan entries with grading entries")
    if fanlike:
        if "rays" not in e or "cones" not in e:
            raise CoxDataError("a fan variety needs both rays and cones")
        rays = e["rays"]
        if not rays:
            raise CoxDataError("need at least one ray")
        fan = Fan(len(rays[0]), rays, e["cones"])
        return ToricVariety.from_fan(fan, names=names)
    if "weights" not in e:
        raise CoxDataError("a variety block needs rays and cones, or weights")
    weights = [list(row) for row in e["weights"]]
    orders = list(e.get("torsion", ()))
    if len(orders) > len(weights):
        raise CoxDataError("more torsion orders than grading rows")
    cut = len(weights) - len(orders)
    free = weights[:cut]
    torsion = [(o, weights[cut + j]) for j, o in enumerate(orders)]
    if names is None and weights:
        names = default_names(len(weights[0]))
    supports = None
    if "irrelevant" in e:
        index = {n: i for i, n in enumerate(names or ())}
        supports = []
        for group in e["irrelevant"]:
            for n in group:
                if n not in index:
                    raise CoxDataError("unknown variable %r in irrelevant entry" % n)
            supports.append([index[n] for n in group])
    return ToricVariety.from_cox_data(free, torsion, supports, names=names)


def _build_map(decl, env):
    X = env["variety"].get(decl.source)
    Y = env["variety"].get(decl.target)
    if X is None or Y is None:
        raise MapError("map %r references a variety that is not available" % decl.name)
    table = dict(decl.assignments)
    unknown = [v for v in table if v not in Y.names]
    if unknown:
        raise MapError(
            "map %r assigns %s, not variables of %s"
            % (decl.name, ", ".join(sorted(unknown)), decl.target)
        )
    missing = [n for n in Y.names if n not in table]
    if missing:
        raise MapError("map %r does not assign %s" % (decl.name, ", ".join(missing)))
    comps = [ast_to_formal(table[n].node, X.names) for n in Y.names]
    return Description(X, Y, comps)


def _build_ideal(decl, env):
    V = env["variety"].get(decl.variety)
    if V is None:
        raise MapError("ideal %r references a variety that is not available" % decl.name)
    gens = []
    for ex in decl.gens:
        s = ast_to_section(ex.node, V.names)
        if not s.is_polynomial():
            raise MapError("ideal generators must be polynomial")
        gens.append(s.as_polynomial())
    return V, Ideal(V.nvars, gens)


# -- parsing -----------------------------------------------------------------------


class _Parser:
    """Recursive descent over the shared token stream.

    Declarations are constructed as they are parsed, so unknown names, bad
    rays, inhomogeneous gradings, and malformed expressions all surface as
    positioned ScriptErrors before anything runs."""

    def __init__(self, text):
        self.text = text
        try:
            self.tokens = tokenize(text)
        except ExprError as e:
            raise ScriptError(e.message, e.pos)
        self.i = 0
        self.kinds = {}
        self.varieties = {}
        self.map_sig = {}  # map name -> (source variety, target variety)
        self.ideal_on = {}  # ideal name -> variety object

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at_op(self, op):
        kind, val, _ = self.peek()
        return kind == "op" and val == op

    def expect_op(self, op):
        kind, val, pos = self.next()
        if kind != "op" or val != op:
            raise ScriptError("expected '%s'" % op, pos)

    def expect_name(self, what="a name"):
        kind, val, pos = self.next()
        if kind != "name":
            raise ScriptError("expected %s" % what, pos)
        return val, pos

    def expect_keyword(self, word):
        kind, val, pos = self.next()
        if kind != "name" or val != word:
            raise ScriptError("expected '%s'" % word, pos)

    def expect_arrow(self):
        kind, val, pos = self.next()
        k2, v2, _ = self.peek()
        if kind == "op" and val == "-" and k2 == "op" and v2 == ">":
            self.next()
            return
        raise ScriptError("expected '->'", pos)

    def signed_int(self):
        kind, val, pos = self.next()
        neg = False
        if kind == "op" and val == "-":
            neg = True
            kind, val, pos = self.next()
        if kind != "num":
            raise ScriptError("expected an integer", pos)
        return -val if neg else val

    def int_list(self):
        self.expect_op("[")
        out = []
        if not self.at_op("]"):
            while True:
                out.append(self.signed_int())
                if self.at_op(","):
                    self.next()
                    continue
                break
        self.expect_op("]")
        return tuple(out)

    def int_matrix(self):
        self.expect_op("[")
        rows = []
        if not self.at_op("]"):
            while True:
                rows.append(self.int_list())
                if self.at_op(","):
                    self.next()
                    continue
                break
        self.expect_op("]")
        return tuple(rows)

    def name_list(self):
        self.expect_op("[")
        out = []
        if not self.at_op("]"):
            while True:
                out.append(self.expect_name("a variable name")[0])
                if self.at_op(","):
                    self.next()
                    continue
                break
        self.expect_op("]")
        return tuple(out)

    def name_matrix(self):
        self.expect_op("[")
        groups = []
        if not self.at_op("]"):
            while True:
                groups.append(self.name_list())
                if self.at_op(","):
                    self.next()
                    continue
                break
        self.expect_op("]")
        return tuple(groups)

    def expression(self):
        start = self.peek()[2]
        try:
            node, stop = parse_embedded_expression(self.tokens, self.i)
        except ExprError as e:
            raise ScriptError(e.message, e.pos)
        self.i = stop
        end = self.tokens[stop][2]
        return Expr(self.text[start:end].rstrip(), node)

    def expr_list(self):
        self.expect_op("[")
        out = []
        if not self.at_op("]"):
            while True:
                out.append(self.expression())
                if self.at_op(","):
                    self.next()
                    continue
                break
        self.expect_op("]")
        return tuple(out)

    # -- symbol table ---------------------------------------------------------

    def declare(self, name, kind, pos):
        if name in self.kinds:
            raise ScriptError("the name %r is already declared" % name, pos)
        self.kinds[name] = kind

    def ref(self, name, kind, pos):
        have = self.kinds.get(name)
        if have is None:
            raise ScriptError("unknown %s %r" % (kind, name), pos)
        if have != kind:
            raise ScriptError("%r names a %s, not a %s" % (name, have, kind), pos)
        return name

    def build(self, builder, decl, pos):
        try:
            return builder(decl, {"variety": self.varieties})
        except ScriptError:
            raise
        except ExprError as e:
            raise ScriptError(e.message, e.pos or pos)
        except (ValueError, RuntimeError) as e:
            raise ScriptError(str(e), pos)

    # -- statements -------------------------------------------------------------

    def script(self):
        stmts = []
        while True:
            kind, val, pos = self.peek()
            if kind == "end":
                break
            if kind != "name":
                raise ScriptError("expected a declaration or a command", pos)
            if val == "variety":
                stmts.append(self.variety_decl())
            elif val == "map":
                stmts.append(self.map_decl())
            elif val == "ideal":
                stmts.append(self.ideal_decl())
            elif val in _VERBS:
                stmts.append(self.command())
            else:
                raise ScriptError("unknown statement %r" % val, pos)
        return Script(tuple(stmts))

    def variety_decl(self):
        _, _, kw_pos = self.next()
        name, npos = self.expect_name("a variety name")
        self.declare(name, "variety", npos)
        self.expect_op("{")
        entries = []
        seen = set()
        while not self.at_op("}"):
            key, kpos = self.expect_name("an entry")
            if key not in _VARIETY_KEYS:
                raise ScriptError("unknown entry %r in a variety block" % key, kpos)
            if key in seen:
                raise ScriptError("duplicate entry %r" % key, kpos)
            seen.add(key)
            self.expect_op("=")
            if key == "names":
                val = self.name_list()
            elif key in ("rays", "cones", "weights"):
                val = self.int_matrix()
            elif key == "torsion":
                val = self.int_list()
            else:
                val = self.name_matrix()
            self.expect_op(";")
            entries.append((key, val))
        self.expect_op("}")
        decl = VarietyDecl(name, tuple(entries))
        self.varieties[name] = self.build(lambda d, env: _build_variety(d), decl, kw_pos)
        return decl

    def map_decl(self):
        _, _, kw_pos = self.next()
        name, npos = self.expect_name("a map name")
        self.declare(name, "map", npos)
        self.expect_op(":")
        src, spos = self.expect_name("a source variety")
        self.ref(src, "variety", spos)
        self.expect_arrow()
        tgt, tpos = self.expect_name("a target variety")
        self.ref(tgt, "variety", tpos)
        self.expect_op("{")
        target_names = self.varieties[tgt].names
        assignments = []
        seen = set()
        while not self.at_op("}"):
            var, vpos = self.expect_name("a target variable")
            if var not in target_names:
                raise ScriptError("%r is not a variable of %s" % (var, tgt), vpos)
            if var in seen:
                raise ScriptError("variable %r is assigned twice" % var, vpos)
            seen.add(var)
            self.expect_op("=")
            expr = self.expression()
            self.expect_op(";")
            assignments.append((var, expr))
        _, _, close_pos = self.peek()
        self.expect_op("}")
        missing = [n for n in target_names if n not in seen]
        if missing:
            raise ScriptError("the map block does not assign %s" % ", ".join(missing), close_pos)
        decl = MapDecl(name, src, tgt, tuple(assignments))
        phi = self.build(_build_map, decl, kw_pos)
        self.map_sig[name] = (phi.source, phi.target)
        return decl

    def ideal_decl(self):
        _, _, kw_pos = self.next()
        name, npos = self.expect_name("an ideal name")
        self.declare(name, "ideal", npos)
        self.expect_keyword("on")
        var, vpos = self.expect_name("a variety name")
        self.ref(var, "variety", vpos)
        self.expect_op("{")
        self.expect_keyword("gens")
        self.expect_op("=")
        gens = self.expr_list()
        self.expect_op(";")
        self.expect_op("}")
        decl = IdealDecl(name, var, gens)
        self.ideal_on[name] = self.build(_build_ideal, decl, kw_pos)[0]
        return decl

    def command(self):
        verb, vpos = self.expect_name()
        if verb in ("check", "complete"):
            args = (self.map_arg(),)
        elif verb == "eval":
            m = self.map_arg()
            self.expect_keyword("at")
            _, _, bracket = self.peek()
            point = self.expr_list()
            nvars = self.map_sig[m][0].nvars
            if len(point) != nvars:
                raise ScriptError(
                    "%s takes %d coordinates, got %d" % (m, nvars, len(point)), bracket
                )
            for entry in point:
                self.convert(entry, ())
            args = (m, point)
        elif verb == "compose":
            f, fpos = self.expect_name("a map name")
            self.ref(f, "map", fpos)
            g, gpos = self.expect_name("a map name")
            self.ref(g, "map", gpos)
            if self.map_sig[g][1] is not self.map_sig[f][0]:
                raise ScriptError(
                    "%s lands in a different variety than %s starts from" % (g, f), gpos
                )
            self.expect_keyword("as")
            h, hpos = self.expect_name("a new map name")
            self.declare(h, "map", hpos)
            self.map_sig[h] = (self.map_sig[g][0], self.map_sig[f][1])
            args = (f, g, h)
        elif verb in ("image", "preimage"):
            m = self.map_arg()
            self.expect_keyword("of")
            i, ipos = self.expect_name("an ideal name")
            self.ref(i, "ideal", ipos)
            side = 0 if verb == "image" else 1
            if self.ideal_on[i] is not self.map_sig[m][side]:
                raise ScriptError(
                    "%s lives on the wrong variety for the %s of %s" % (i, verb, m),
                    ipos,
                )
            if verb == "image":
                args = (m, i)
            else:
                flag = False
                kind, val, _ = self.peek()
                if kind == "name" and val == "saturate":
                    self.next()
                    flag = True
                args = (m, i, flag)
        elif verb == "pullback":
            m = self.map_arg()
            self.expect_keyword("of")
            expr = self.expression()
            self.convert(expr, self.map_sig[m][1].names)
            args = (m, expr)
        elif verb == "same_map":
            f, fpos = self.expect_name("a map name")
            self.ref(f, "map", fpos)
            g, gpos = self.expect_name("a map name")
            self.ref(g, "map", gpos)
            if self.map_sig[f] != self.map_sig[g]:
                raise ScriptError(
                    "%s and %s do not share a source and a target" % (f, g), gpos
                )
            args = (f, g)
        else:
            raise ScriptError("unknown command %r" % verb, vpos)
        self.expect_op(";")
        return Command(verb, args)

    def map_arg(self):
        name, pos = self.expect_name("a map name")
        self.ref(name, "map", pos)
        return name

    def convert(self, expr, names):
        try:
            return ast_to_section(expr.node, names)
        except ExprError as e:
            raise ScriptError(e.message, e.pos)


def parse(text):
    """Parse and statically check a script; ScriptError carries the offset."""
    return _Parser(text).script()


# -- running -----------------------------------------------------------------------


def _need(env, kind, name):
    obj = env[kind].get(name)
    if obj is None:
        raise MapError("%s %r is not available" % (kind, name))
    return obj


def _components_payload(phi):
    names = phi.source.names
    return [radical_to_str(c, names) for c in phi.components]


def _cmd_check(args, env):
    phi = _need(env, "map", args[0])
    homogeneous, witness = check_homogeneity(phi)
    relevant, sigma = check_relevance(phi)
    payload = {
        "homogeneous": homogeneous,
        "relevant": relevant,
        "verdict": "PASS" if homogeneous and relevant else "FAIL",
    }
    if witness is not None:
        payload["witness"] = section_to_str(witness, phi.target.names)
    if sigma is not None:
        payload["stratum"] = list(sigma.rays)
    return payload


def _cmd_complete(args, env):
    phi = _need(env, "map", args[0])
    done = complete(phi)
    names = phi.source.names
    steps = []
    for step in done.completion_steps:
        steps.append(
            {
                "candidate": poly_to_str(step.candidate, names),
                "orders": [str(o) for o in step.orders],
                "corrected": [str(o) for o in step.corrected],
            }
        )
    return {"components": _components_payload(done), "steps": steps}


def _cmd_eval(args, env):
    phi = _need(env, "map", args[0])
    point = [ast_to_section(e.node, ()).evaluate(()) for e in args[1]]
    if len(point) != phi.source.nvars:
        raise MapError(
            "expected %d coordinates, got %d" % (phi.source.nvars, len(point))
        )
    res = map_point(phi, point)
    payload = {"defined": res.defined}
    if res.defined:
        payload["values"] = [str(v) for v in res.values]
        payload["branches"] = len(res.branches)
    else:
        payload["reason"] = res.reason
    if res.notes:
        payload["notes"] = list(res.notes)
    return payload


def _cmd_compose(args, env):
    f = _need(env, "map", args[0])
    g = _need(env, "map", args[1])
    h = compose(f, g)
    env["map"][args[2]] = h
    return {"name": args[2], "components": _components_payload(h)}


def _cmd_image(args, env):
    phi = _need(env, "map", args[0])
    variety, I = _need(env, "ideal", args[1])
    if variety is not phi.source:
        raise MapError("the ideal does not live on the source of the map")
    _, report = image_of_subscheme(phi, I)
    names = phi.target.names
    return {
        "generators": [poly_to_str(g, names) for g in report.ideal.generators],
        "validity": report.validity_region,
        "notes": list(report.notes),
    }


def _cmd_preimage(args, env):
    phi = _need(env, "map", args[0])
    variety, I = _need(env, "ideal", args[1])
    if variety is not phi.target:
        raise MapError("the ideal does not live on the target of the map")
    _, report = preimage_ideal(phi, I, saturate_output=args[2])
    names = phi.source.names
    return {
        "generators": [poly_to_str(g, names) for g in report.ideal.generators],
        "validity": report.validity_region,
        "notes": list(report.notes),
    }


def _cmd_pullback(args, env):
    phi = _need(env, "map", args[0])
    section = ast_to_section(args[1].node, phi.target.names)
    ceil, residual, report = pullback_divisor(phi, section)
    names = phi.source.names
    return {
        "ceiling": section_to_str(ceil, names),
        "residual": radical_to_str(residual, names),
        "validity": report.validity_region,
        "notes": list(report.notes),
    }


def _cmd_same_map(args, env):
    f = _need(env, "map", args[0])
    g = _need(env, "map", args[1])
    return {"equal": same_map(f, g)}


_EXECUTORS = {
    "check": _cmd_check,
    "complete": _cmd_complete,
    "eval": _cmd_eval,
    "compose": _cmd_compose,
    "image": _cmd_image,
    "preimage": _cmd_preimage,
    "pullback": _cmd_pullback,
    "same_map": _cmd_same_map,
}


def _decl_echo(st):
    if isinstance(st, VarietyDecl):
        return "variety %s" % st.name
    if isinstance(st, MapDecl):
        return "map %s" % st.name
    return "ideal %s" % st.name


def run(script, deadline=None):
    """Execute a script; one OutputRecord per query, queries never abort.

    Declarations are silent when they succeed.  The deadline, if any, is a
    per-query budget in seconds."""
    records = []
    env = {"variety": {}, "map": {}, "ideal": {}}
    for st in script.statements:
        echo = _print_command(st) if isinstance(st, Command) else _decl_echo(st)
        if deadline is not None:
            set_deadline(deadline)
        start = time.perf_counter()
        try:
            if isinstance(st, VarietyDecl):
                env["variety"][st.name] = _build_variety(st)
            elif isinstance(st, MapDecl):
                env["map"][st.name] = _build_map(st, env)
            elif isinstance(st, IdealDecl):
                env["ideal"][st.name] = _build_ideal(st, env)
            else:
                payload = _EXECUTORS[st.verb](st.args, env)
                records.append(
                    OutputRecord(echo, "ok", payload, time.perf_counter() - start)
                )
        except (ValueError, RuntimeError, ZeroDivisionError) as e:
            message = str(e) or e.__class__.__name__
            records.append(
                OutputRecord(
                    echo, "error", {"error": message}, time.perf_counter() - start
                )
            )
        finally:
            if deadline is not None:
                set_deadline(None)
    return records


# -- rendering ---------------------------------------------------------------------


def _summary(record):
    p = record.payload
    if record.status == "error":
        return "error: %s" % p["error"]
    verb = record.command.split(None, 1)[0]
    if verb == "check":
        if p["verdict"] == "PASS":
            return "PASS"
        if not p["homogeneous"] and "witness" in p:
            return "FAIL (the pullback of %s is not of degree 0)" % p["witness"]
        if not p["homogeneous"]:
            return "FAIL (not homogeneous)"
        return "FAIL (the zero locus does not cut a fan stratum)"
    if verb in ("complete", "compose"):
        return "(%s)" % ", ".join(p["components"])
    if verb == "eval":
        if p["defined"]:
            return "[%s]" % ", ".join(p["values"])
        return "undefined here (%s)" % p["reason"]
    if verb in ("image", "preimage"):
        return "[%s] (valid: %s)" % (", ".join(p["generators"]), p["validity"])
    if verb == "pullback":
        return "ceiling %s, residual %s (valid: %s)" % (
            p["ceiling"],
            p["residual"],
            p["validity"],
        )
    return "yes" if p["equal"] else "no"


def render_text(records):
    lines = []
    for r in records:
        lines.append("%s: %s" % (r.command, _summary(r)))
        for note in r.payload.get("notes", ()):
            lines.append("  note: %s" % note)
    return "\n".join(lines) + "\n" if lines else ""


def render_json(records):
    """Byte-stable JSON: sorted keys, canonical rationals, no timing."""
    rows = [
        {"command": r.command, "status": r.status, "payload": r.payload}
        for r in records
    ]
    return json.dumps({"records": rows}, sort_keys=True, indent=2) + "\n"


# -- entry point -------------------------------------------------------------------


def main(argv=None):
    ap = argparse.ArgumentParser(prog="toricmap", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="subcommand", required=True)
    runp = sub.add_parser("run", help="execute a script of declarations and queries")
    runp.add_argument("file", help="script path, or - for stdin")
    runp.add_argument("--json", action="store_true", help="emit stable JSON")
    runp.add_argument(
        "--deadline", type=float, metavar="SECONDS", help="per-query time budget"
    )
    args = ap.parse_args(argv)
    if args.file == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            print("error: %s" % e, file=sys.stderr)
            return 2
    try:
        script = parse(text)
    except ScriptError as e:
        line, col = _line_col(text, e.pos)
        print("error: line %d, column %d: %s" % (line, col, e.message), file=sys.stderr)
        return 2
    records = run(script, deadline=args.deadline)
    sys.stdout.write(render_json(records) if args.json else render_text(records))
    return 3 if any(r.status == "error" for r in records) else 0


if __name__ == "__main__":
    sys.exit(main())
