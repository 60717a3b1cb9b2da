"""Automatic presentations and compilation of first-order queries to automata.

A Structure is a regular domain plus relations given by synchronous
multi-tape automata.  Formulas (with the "there exist infinitely many"
quantifier) compile to automata whose tapes carry the free variables in
alphabetical order; sentences reduce to an emptiness test.  Quantifiers
relativize to the domain automatically, and negation complements relative
to the domain cube, so pad-words and out-of-domain words never leak into
answers.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

from . import automata as au
from .automata import Automaton
from .errors import (
    ArityMismatch,
    LoadError,
    NotASentence,
    NotUnary,
    UnknownRelation,
    WobError,
)

DEFAULT_STATE_BUDGET = 10 ** 6

LLEX = "llex"


# -- formulas --------------------------------------------------------------


@dataclass(frozen=True)
class Formula:
    def free_vars(self) -> frozenset:
        raise NotImplementedError


@dataclass(frozen=True)
class Rel(Formula):
    name: str
    vars: tuple

    def free_vars(self):
        return frozenset(self.vars)


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str

    def free_vars(self):
        return frozenset((self.left, self.right))


@dataclass(frozen=True)
class Llex(Formula):
    left: str
    right: str

    def free_vars(self):
        return frozenset((self.left, self.right))


@dataclass(frozen=True)
class Not(Formula):
    body: Formula

    def free_vars(self):
        return self.body.free_vars()


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula

    def free_vars(self):
        return self.body.free_vars() - {self.var}


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula

    def free_vars(self):
        return self.body.free_vars() - {self.var}


@dataclass(frozen=True)
class ExistsInf(Formula):
    var: str
    body: Formula

    def free_vars(self):
        return self.body.free_vars() - {self.var}


def implies(a: Formula, b: Formula) -> Formula:
    return Or(Not(a), b)


def conj(*fs: Formula) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


# -- s-expression surface syntax -------------------------------------------


def _tokenize(text: str):
    return text.replace("(", " ( ").replace(")", " ) ").split()


def _read(tokens, pos):
    if pos >= len(tokens):
        raise LoadError("unexpected end of formula")
    tok = tokens[pos]
    if tok == "(":
        items = []
        pos += 1
        while pos < len(tokens) and tokens[pos] != ")":
            item, pos = _read(tokens, pos)
            items.append(item)
        if pos >= len(tokens):
            raise LoadError("missing closing parenthesis")
        return items, pos + 1
    if tok == ")":
        raise LoadError("unexpected closing parenthesis")
    return tok, pos + 1


def _to_formula(sexp) -> Formula:
    if isinstance(sexp, str):
        raise LoadError(f"bare atom {sexp!r} is not a formula")
    if not sexp:
        raise LoadError("empty form")
    head = sexp[0]
    if not isinstance(head, str):
        raise LoadError(f"operator must be a symbol, got {head!r}")
    head = head.lower()
    if head == "rel":
        if len(sexp) < 3:
            raise LoadError("(rel NAME VAR...) needs a name and at least one variable")
        name, *vars_ = sexp[1:]
        if not all(isinstance(v, str) for v in [name, *vars_]):
            raise LoadError("rel arguments must be symbols")
        return Rel(name, tuple(vars_))
    if head in ("eq", "="):
        _expect_args(sexp, 2)
        return Eq(sexp[1], sexp[2])
    if head == "llex":
        _expect_args(sexp, 2)
        return Llex(sexp[1], sexp[2])
    if head == "not":
        _expect_args(sexp, 1)
        return Not(_to_formula(sexp[1]))
    if head in ("and", "or"):
        if len(sexp) < 3:
            raise LoadError(f"({head} ...) needs at least two arguments")
        out = _to_formula(sexp[1])
        for sub in sexp[2:]:
            out = (And if head == "and" else Or)(out, _to_formula(sub))
        return out
    if head in ("implies", "->"):
        _expect_args(sexp, 2)
        return implies(_to_formula(sexp[1]), _to_formula(sexp[2]))
    if head in ("exists", "forall", "existsinf"):
        _expect_args(sexp, 2)
        var = sexp[1]
        if not isinstance(var, str):
            raise LoadError(f"quantified variable must be a symbol, got {var!r}")
        body = _to_formula(sexp[2])
        cls = {"exists": Exists, "forall": Forall, "existsinf": ExistsInf}[head]
        return cls(var, body)
    raise LoadError(f"unknown operator {head!r}")


def _expect_args(sexp, n):
    if len(sexp) != n + 1:
        raise LoadError(f"({sexp[0]} ...) expects {n} arguments, got {len(sexp) - 1}")


def parse_formula(text: str) -> Formula:
    tokens = _tokenize(text)
    sexp, pos = _read(tokens, 0)
    if pos != len(tokens):
        raise LoadError("trailing input after formula")
    return rename_apart(_to_formula(sexp))


def rename_apart(f: Formula) -> Formula:
    """Rename bound variables so no variable is quantified twice on a branch
    and no bound variable shadows a free one."""
    free = f.free_vars()
    counter = [0]

    def fresh(name):
        counter[0] += 1
        return f"{name}~{counter[0]}"

    def walk(g, env, bound):
        if isinstance(g, Rel):
            return Rel(g.name, tuple(env.get(v, v) for v in g.vars))
        if isinstance(g, Eq):
            return Eq(env.get(g.left, g.left), env.get(g.right, g.right))
        if isinstance(g, Llex):
            return Llex(env.get(g.left, g.left), env.get(g.right, g.right))
        if isinstance(g, Not):
            return Not(walk(g.body, env, bound))
        if isinstance(g, (And, Or)):
            return type(g)(walk(g.left, env, bound), walk(g.right, env, bound))
        if isinstance(g, (Exists, Forall, ExistsInf)):
            v = g.var
            if v in free or v in bound:
                v2 = fresh(v)
                while v2 in free or v2 in bound:
                    v2 = fresh(v)
            else:
                v2 = v
            env2 = dict(env)
            env2[g.var] = v2
            return type(g)(v2, walk(g.body, env2, bound | {v2}))
        raise TypeError(f"not a formula: {g!r}")

    return walk(f, {}, set())


# -- structures -------------------------------------------------------------


@dataclass(frozen=True)
class Structure:
    """An automatic presentation: a named regular domain plus relations."""

    name: str
    domain: Automaton
    relations: dict = field(default_factory=dict)  # name -> (arity, Automaton)

    def __post_init__(self):
        if self.domain.arity != 1:
            raise ArityMismatch("domain automaton must have arity 1")
        if au.is_empty(self.domain):
            raise WobError(f"structure {self.name!r} has an empty domain")
        if LLEX in self.relations:
            raise WobError(f"relation name {LLEX!r} is reserved")
        for rel_name, (arity, aut) in self.relations.items():
            if aut.arity != arity:
                raise ArityMismatch(
                    f"relation {rel_name!r} declared arity {arity}, automaton has {aut.arity}"
                )
            if aut.alphabet != self.domain.alphabet:
                raise ArityMismatch(f"relation {rel_name!r} alphabet differs from domain")
            if not au.is_subset_of_cube(aut, self.domain):
                raise WobError(
                    f"relation {rel_name!r} accepts tuples outside the domain"
                )

    @cached_property
    def _cubes(self):
        return {}

    def domain_cube(self, arity: int) -> Automaton:
        """Automaton for domain^arity."""
        cached = self._cubes.get(arity)
        if cached is not None:
            return cached
        if arity == 1:
            cube = self.domain
        else:
            cube = self.domain
            for _ in range(arity - 1):
                cube = au.insert_tape(cube, cube.arity, track=self.domain)
        self._cubes[arity] = cube
        return cube

    @cached_property
    def llex(self) -> Automaton:
        base = au.llex_automaton(self.domain.alphabet)
        return au.minimize(au.intersect(base, self.domain_cube(2)))

    def relation(self, name: str) -> tuple[int, Automaton]:
        if name == LLEX:
            return 2, self.llex
        if name not in self.relations:
            raise UnknownRelation(f"structure {self.name!r} has no relation {name!r}")
        return self.relations[name]


# -- compilation -------------------------------------------------------------


@dataclass
class _Result:
    """Compiled subformula: automaton over sorted free vars, or a sentence truth."""

    vars: tuple
    aut: Optional[Automaton]
    truth: Optional[bool] = None


class Compiler:
    def __init__(self, structure: Structure, state_budget: int = DEFAULT_STATE_BUDGET):
        self.s = structure
        self.budget = state_budget

    def _guard(self, aut: Automaton) -> Automaton:
        if aut.n_states > self.budget:
            raise au.StateBudgetExceeded(aut.n_states, self.budget)
        return aut

    def compile(self, f: Formula) -> _Result:
        res = self._compile(rename_apart(f))
        return res

    def _compile(self, f: Formula) -> _Result:
        if isinstance(f, Rel):
            arity, aut = self.s.relation(f.name)
            if len(f.vars) != arity:
                raise ArityMismatch(
                    f"relation {f.name!r} has arity {arity}, got {len(f.vars)} variables"
                )
            return self._atom(aut, list(f.vars))
        if isinstance(f, Eq):
            eq = au.intersect(au.diagonal(self.s.domain.alphabet), self.s.domain_cube(2))
            return self._atom(eq, [f.left, f.right])
        if isinstance(f, Llex):
            return self._atom(self.s.llex, [f.left, f.right])
        if isinstance(f, Not):
            r = self._compile(f.body)
            if r.aut is None:
                return _Result((), None, not r.truth)
            cube = self.s.domain_cube(len(r.vars))
            return _Result(r.vars, self._guard(au.minimize(au.difference(cube, r.aut))))
        if isinstance(f, (And, Or)):
            a = self._compile(f.left)
            b = self._compile(f.right)
            return self._boolean(a, b, isinstance(f, And))
        if isinstance(f, Forall):
            return self._compile(Not(Exists(f.var, Not(f.body))))
        if isinstance(f, Exists):
            r = self._with_var(self._compile(f.body), f.var)
            return self._project_var(r, f.var)
        if isinstance(f, ExistsInf):
            r = self._with_var(self._compile(f.body), f.var)
            return self._project_inf(r, f.var)
        raise TypeError(f"not a formula: {f!r}")

    # -- helpers --

    def _atom(self, aut: Automaton, var_list: list) -> _Result:
        # collapse repeated variables by intersecting with tape equality
        while True:
            dup = None
            seen = {}
            for i, v in enumerate(var_list):
                if v in seen:
                    dup = (seen[v], i)
                    break
                seen[v] = i
            if dup is None:
                break
            i, j = dup
            eq = au.eq_tapes(aut.alphabet, aut.arity, i, j)
            aut = au.intersect(aut, eq)
            aut = au.project(aut, j)
            var_list = var_list[:j] + var_list[j + 1 :]
        if len(var_list) == 1:
            # arity-1 atom; still relativize to the domain
            aut = au.intersect(aut, self.s.domain)
            return _Result(tuple(var_list), self._guard(aut))
        # new tape t carries the old tape holding the t-th smallest variable
        order = sorted(range(len(var_list)), key=lambda i: var_list[i])
        aut = au.permute_tapes(aut, order)
        return _Result(tuple(sorted(var_list)), self._guard(aut))

    def _align(self, r: _Result, target_vars: tuple) -> Automaton:
        aut = r.aut
        vars_ = list(r.vars)
        for v in target_vars:
            if v in vars_:
                continue
            pos = 0
            while pos < len(vars_) and vars_[pos] < v:
                pos += 1
            if aut is None:
                raise AssertionError("cannot align a sentence")
            if aut.arity == 0:
                raise AssertionError("unexpected zero-arity automaton")
            aut = au.insert_tape(aut, pos, track=self.s.domain)
            vars_.insert(pos, v)
        assert tuple(vars_) == target_vars, (vars_, target_vars)
        return aut

    def _boolean(self, a: _Result, b: _Result, is_and: bool) -> _Result:
        if a.aut is None and b.aut is None:
            t = (a.truth and b.truth) if is_and else (a.truth or b.truth)
            return _Result((), None, t)
        if a.aut is None or b.aut is None:
            sent, other = (a, b) if a.aut is None else (b, a)
            if is_and:
                if sent.truth:
                    return other
                return _Result(other.vars, au.empty(self.s.domain.alphabet, len(other.vars)))
            if sent.truth:
                return _Result(other.vars, self.s.domain_cube(len(other.vars)))
            return other
        target = tuple(sorted(set(a.vars) | set(b.vars)))
        aa = self._align(a, target)
        bb = self._align(b, target)
        op = au.intersect if is_and else au.union
        return _Result(target, self._guard(op(aa, bb, max_states=self.budget)))

    def _with_var(self, r: _Result, var: str) -> _Result:
        """Ensure `var` appears among r's tapes (insert a domain tape if not)."""
        if r.aut is None:
            # sentence body: x does not occur; give it a domain tape
            if r.truth:
                return _Result((var,), self.s.domain)
            return _Result((var,), au.empty(self.s.domain.alphabet, 1))
        if var in r.vars:
            return r
        target = tuple(sorted(set(r.vars) | {var}))
        return _Result(target, self._align(r, target))

    def _project_var(self, r: _Result, var: str) -> _Result:
        t = r.vars.index(var)
        if len(r.vars) == 1:
            return _Result((), None, not au.is_empty(r.aut))
        rest = r.vars[:t] + r.vars[t + 1 :]
        return _Result(rest, self._guard(au.project(r.aut, t)))

    def _project_inf(self, r: _Result, var: str) -> _Result:
        t = r.vars.index(var)
        if len(r.vars) == 1:
            return _Result((), None, au.is_infinite(r.aut))
        # Pumping bound: if some witness for `var` is longer than every other
        # tape by more than the state count, the section is infinite.
        aut = au.minimize(r.aut, max_states=self.budget)
        m = aut.n_states
        longer = self._long_tail(len(r.vars), t, m)
        pumped = au.intersect(aut, longer, max_states=self.budget)
        rest = r.vars[:t] + r.vars[t + 1 :]
        return _Result(rest, self._guard(au.project(pumped, t)))

    def _long_tail(self, arity: int, tape: int, m: int) -> Automaton:
        """Convolutions whose final run of tape-only letters exceeds m."""
        alphabet = self.s.domain.alphabet

        def is_solo(letter):
            return letter[tape] != au.PAD and all(
                s == au.PAD for i, s in enumerate(letter) if i != tape
            )

        def step(count, letter):
            return min(count + 1, m + 1) if is_solo(letter) else 0

        return au.letter_dfa(alphabet, arity, 0, step, lambda c: c > m)


def compile_formula(s: Structure, f: Formula, state_budget: int = DEFAULT_STATE_BUDGET) -> Automaton:
    """Compile to an automaton over the free variables in alphabetical order.

    Sentences compile to an arity-1 automaton over a dummy tape whose
    emptiness decides truth.
    """
    res = Compiler(s, state_budget).compile(f)
    if res.aut is not None:
        return res.aut
    return s.domain if res.truth else au.empty(s.domain.alphabet, 1)


def eval_sentence(s: Structure, f: Formula, state_budget: int = DEFAULT_STATE_BUDGET) -> bool:
    if f.free_vars():
        raise NotASentence(f"free variables: {sorted(f.free_vars())}")
    res = Compiler(s, state_budget).compile(f)
    if res.aut is None:
        return bool(res.truth)
    return not au.is_empty(res.aut)


def define_set(s: Structure, f: Formula, var: str, state_budget: int = DEFAULT_STATE_BUDGET) -> Automaton:
    fv = f.free_vars()
    if fv != {var}:
        raise NotUnary(f"expected exactly one free variable {var!r}, got {sorted(fv)}")
    res = Compiler(s, state_budget).compile(f)
    assert res.aut is not None and res.vars == (var,)
    return au.minimize(res.aut)


# -- manifest format ---------------------------------------------------------


def parse_manifest(text: str, automaton_lookup) -> Structure:
    """Parse `structure NAME / domain AUT / relation NAME ARITY AUT` lines.

    automaton_lookup(name) must return the Automaton for a referenced name.
    """
    name = None
    domain = None
    relations = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        parts = line.split()
        kind = parts[0]
        try:
            if kind == "structure":
                name = parts[1]
            elif kind == "domain":
                domain = automaton_lookup(parts[1])
            elif kind == "relation":
                rel_name, arity, aut_name = parts[1], int(parts[2]), parts[3]
                relations[rel_name] = (arity, automaton_lookup(aut_name))
            else:
                raise LoadError(f"unknown directive {kind!r}", lineno)
        except LoadError:
            raise
        except (IndexError, ValueError) as exc:
            raise LoadError(f"cannot parse {line!r}: {exc}", lineno) from exc
    if name is None or domain is None:
        raise LoadError("manifest must declare a structure name and a domain")
    return Structure(name=name, domain=domain, relations=relations)


def load_structure(path) -> Structure:
    path = os.fspath(path)
    base = os.path.dirname(path)

    def lookup(aut_name):
        aut_path = os.path.join(base, aut_name + ".aut")
        if not os.path.exists(aut_path):
            raise LoadError(f"referenced automaton file not found: {aut_path}")
        _, aut = au.load_automaton(aut_path, expect_name=aut_name)
        return aut

    with open(path, "r", encoding="utf-8") as fh:
        return parse_manifest(fh.read(), lookup)


def save_structure(s: Structure, directory, manifest_name: Optional[str] = None) -> str:
    """Write NAME.manifest plus one .aut file per automaton; returns manifest path."""
    os.makedirs(directory, exist_ok=True)
    manifest_name = manifest_name or s.name
    lines = [f"structure {s.name}", f"domain {s.name}_domain"]
    files = {f"{s.name}_domain": s.domain}
    for rel_name, (arity, aut) in sorted(s.relations.items()):
        aut_name = f"{s.name}_{rel_name}"
        safe = aut_name.replace("<", "lt").replace(">", "gt")
        lines.append(f"relation {rel_name} {arity} {safe}")
        files[safe] = aut
    for aut_name, aut in files.items():
        with open(os.path.join(directory, aut_name + ".aut"), "w", encoding="utf-8") as fh:
            fh.write(au.save_automaton(aut, aut_name))
    manifest_path = os.path.join(directory, manifest_name + ".manifest")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return manifest_path
