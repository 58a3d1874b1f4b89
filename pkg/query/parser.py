# 2026-10-19 | v0.3.0 | Datalog-like surface syntax
"""
parser.py

Grammar:

    Head(X, ...) :- R(X, Y), !T(X, Z), X != Y, NAE(X, Y, Z), dom(Y, R.1).

- `!` negates a stored relation (never a subformula)
- `X != Y` is sugar for NAE(X, Y)
- `dom(X, R.col)` declares Dom(X) = π_col R (col 1-based or a column name)
- `%` starts a comment that runs to the end of the line
"""

from __future__ import annotations

from dataclasses import dataclass

from pyparsing import (
    DelimitedList,
    Group,
    Keyword,
    Literal,
    Opt,
    ParseBaseException,
    Regex,
    StringEnd,
    Suppress,
    Word,
    alphanums,
    alphas,
    col,
    lineno,
    nums,
)

from core.errors import QuerySyntaxError, UnsafeHead
from query.ir import Atom, DomainDecl, QueryIR


@dataclass(frozen=True)
class _Item:
    kind: str
    payload: object


def _nae(text, loc, toks):
    variables = tuple(toks[0])
    if len(set(variables)) < 2:
        raise QuerySyntaxError("NAE needs at least two distinct variables", lineno(loc, text), col(loc, text))
    return _Item("nae", variables)


def _neq(text, loc, toks):
    left, right = toks[0], toks[1]
    if left == right:
        raise QuerySyntaxError(f"{left} != {left} can never hold", lineno(loc, text), col(loc, text))
    return _Item("nae", (left, right))


def _build_grammar():
    ident = Word(alphas + "_", alphanums + "_")
    lpar, rpar, comma, dot = map(Suppress, "(),.")
    var_list = Group(Opt(DelimitedList(ident)))

    atom = (ident + lpar + var_list + rpar).set_parse_action(
        lambda t: _Item("pos", Atom(t[0], tuple(t[1]))))
    negated = (Suppress("!") + ident + lpar + var_list + rpar).set_parse_action(
        lambda t: _Item("neg", Atom(t[0], tuple(t[1]))))
    nae = (Suppress(Keyword("NAE")) + lpar + Group(DelimitedList(ident)) + rpar).set_parse_action(_nae)
    neq = (ident + Suppress(Literal("!=")) + ident).set_parse_action(_neq)
    dom = (Suppress(Keyword("dom")) + lpar + ident + comma + ident + dot + (Word(nums) | ident) + rpar
           ).set_parse_action(lambda t: _Item("dom", (t[0], DomainDecl(t[1], t[2]))))

    body_item = nae | dom | neq | negated | atom
    head = Group(ident + lpar + var_list + rpar)
    rule = head + Suppress(":-") + Group(DelimitedList(body_item)) + dot + StringEnd()
    rule.ignore(Regex(r"%[^\n]*"))
    return rule


_GRAMMAR = _build_grammar()


def parse_query(text: str) -> QueryIR:
    try:
        parsed = _GRAMMAR.parse_string(text, parse_all=True)
    except ParseBaseException as exc:
        raise QuerySyntaxError(exc.msg, exc.lineno, exc.col) from None

    head, body = parsed[0], parsed[1]
    name, free_vars = head[0], tuple(head[1])
    if len(set(free_vars)) != len(free_vars):
        raise QuerySyntaxError(f"repeated head variable in {name}", 1, 1)

    positive, negated, nae, decls = [], [], [], []
    for item in body:
        if item.kind == "pos":
            positive.append(item.payload)
        elif item.kind == "neg":
            negated.append(item.payload)
        elif item.kind == "nae":
            nae.append(item.payload)
        else:
            decls.append(item.payload)

    ir = QueryIR(
        name=name,
        free_vars=free_vars,
        positive_atoms=tuple(positive),
        negated_atoms=tuple(negated),
        nae_atoms=tuple(nae),
        domain_decls=tuple(decls),
    )
    body_vars = set(_body_variables(ir))
    for var in free_vars:
        if var not in body_vars:
            raise UnsafeHead(var)
    return ir


def _body_variables(ir: QueryIR):
    for atom in ir.positive_atoms + ir.negated_atoms:
        yield from atom.variables
    for nae in ir.nae_atoms:
        yield from nae
    for var, _ in ir.domain_decls:
        yield var


def print_query(ir: QueryIR) -> str:
    items = [str(a) for a in ir.positive_atoms]
    items += [f"!{a}" for a in ir.negated_atoms]
    for nae in ir.nae_atoms:
        items.append(f"{nae[0]} != {nae[1]}" if len(nae) == 2 else f"NAE({', '.join(nae)})")
    items += [f"dom({var}, {decl})" for var, decl in ir.domain_decls]
    return f"{ir.name}({', '.join(ir.free_vars)}) :- {', '.join(items)}."
