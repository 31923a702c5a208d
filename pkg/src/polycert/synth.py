"""Bounded search for a certifiable polynomial interpretation.

Every symbol gets a family of template polynomials: a constant, linear
terms over a fixed set of generators, and pairwise products of those
generators.  Base parameters generate themselves; function parameters
generate atoms applied to the sum of all base parameters or to a small
constant.  Candidates are tried in increasing total coefficient weight,
interleaved across symbols, with the certifier as the only oracle, so a
returned interpretation is certified by construction.
"""

import heapq
import time
from dataclasses import dataclass
from typing import Iterator, Optional

from .checker import CheckLimits, certify
from .core import AFS, Arrow, BaseType, SimpleType, domains
from .interp import (
    Const,
    FromBase,
    FromPoly,
    Interpretation,
    Mult,
    PApp,
    Plus,
    PVar,
    BasePolyExpr,
    PolyExpr,
    plam_chain,
)


@dataclass(frozen=True)
class SearchBounds:
    """Knobs for the template space and the search itself.

    max_coeff bounds every coefficient; the three shape flags switch
    template families on and off; timeout_ms caps one system's search.
    """
    max_coeff: int = 3
    linear: bool = True
    products: bool = True
    atom_const_args: bool = True
    timeout_ms: int = 120000

    def __post_init__(self) -> None:
        if self.max_coeff < 0:
            raise ValueError("max_coeff must be a natural")


@dataclass(frozen=True)
class SynthResult:
    interpretation: Optional[Interpretation]
    timed_out: bool
    tried: int


# --------------------------------------------------------------- templates

def _generators(doms: tuple[SimpleType, ...],
                bounds: SearchBounds) -> list[BasePolyExpr]:
    """Monomial generators for a symbol with the given parameter types.

    Position j of n binds PVar(n - 1 - j); innermost binder is index 0.
    Function parameters whose arguments are not all base-typed get no
    generator: templates simply ignore them, which is always sound here
    because application adds its argument on its own.
    """
    n = len(doms)
    base_vars = [FromPoly(PVar(n - 1 - j)) for j, d in enumerate(doms)
                 if isinstance(d, BaseType)]
    arg_sum: BasePolyExpr = Const(0)
    for v in base_vars:
        arg_sum = v if arg_sum == Const(0) else Plus(arg_sum, v)

    gens: list[BasePolyExpr] = list(base_vars)
    for j, d in enumerate(doms):
        if not isinstance(d, Arrow):
            continue
        arg_tys = domains(d)
        if not all(isinstance(a, BaseType) for a in arg_tys):
            continue
        arg_choices: list[BasePolyExpr] = [arg_sum]
        if bounds.atom_const_args:
            # The empty sum is already the constant 0; do not offer it twice.
            if base_vars:
                arg_choices.append(Const(0))
            arg_choices.append(Const(1))
        for arg in arg_choices:
            atom: PolyExpr = PVar(n - 1 - j)
            for _ in arg_tys:
                atom = PApp(atom, FromBase(arg))
            gens.append(FromPoly(atom))
    return gens


def _slot_terms(gens: list[BasePolyExpr],
                bounds: SearchBounds) -> list[tuple[BasePolyExpr, ...]]:
    """Generator factors per coefficient slot; () is the constant slot."""
    slots: list[tuple[BasePolyExpr, ...]] = [()]
    if bounds.linear:
        slots.extend((g,) for g in gens)
    if bounds.products:
        for i in range(len(gens)):
            for j in range(i, len(gens)):
                slots.append((gens[i], gens[j]))
    return slots


def _body(slots: list[tuple[BasePolyExpr, ...]],
          vector: tuple[int, ...]) -> BasePolyExpr:
    body: Optional[BasePolyExpr] = None
    for coeff, factors in zip(vector, slots):
        if coeff == 0:
            continue
        # Left-folded so the result prints and reparses without parens.
        parts = list(factors) if coeff == 1 and factors else \
            [Const(coeff), *factors]
        piece = parts[0]
        for f in parts[1:]:
            piece = Mult(piece, f)
        body = piece if body is None else Plus(body, piece)
    return Const(0) if body is None else body


def _vectors(n: int, weight: int, cap: int) -> Iterator[tuple[int, ...]]:
    # All coefficient vectors of the given total, largest first slot first.
    if n == 0:
        if weight == 0:
            yield ()
        return
    for v in range(min(weight, cap), -1, -1):
        for rest in _vectors(n - 1, weight - v, cap):
            yield (v,) + rest


class _TemplateSpace:
    """Lazily materialized, weight-ordered template list for one type."""

    def __init__(self, ty: SimpleType, bounds: SearchBounds):
        self._doms = domains(ty)
        self._bounds = bounds
        self._slots = _slot_terms(_generators(self._doms, bounds), bounds)
        self._buf: list[tuple[int, PolyExpr]] = []
        self._strata = self._stream()

    def _stream(self) -> Iterator[tuple[int, PolyExpr]]:
        cap = self._bounds.max_coeff
        for weight in range(cap * len(self._slots) + 1):
            for vec in _vectors(len(self._slots), weight, cap):
                body = _body(self._slots, vec)
                yield weight, plam_chain(self._doms, FromBase(body))

    def get(self, i: int) -> Optional[tuple[int, PolyExpr]]:
        while len(self._buf) <= i:
            nxt = next(self._strata, None)
            if nxt is None:
                return None
            self._buf.append(nxt)
        return self._buf[i]


def template_space(ty: SimpleType, bounds: SearchBounds) -> Iterator[PolyExpr]:
    """All templates for one symbol type, cheapest total coefficient first."""
    space = _TemplateSpace(ty, bounds)
    i = 0
    while (entry := space.get(i)) is not None:
        yield entry[1]
        i += 1


# ------------------------------------------------------------------ search

# The oracle never needs counterexamples, so falsification is off.
_ORACLE = CheckLimits(samples=0)


def synthesize(afs: AFS, bounds: SearchBounds = SearchBounds()) -> SynthResult:
    """First certifiable interpretation in the weight order, if any.

    The frontier is a heap over per-symbol candidate indices keyed by
    summed weight, so candidates across symbols are interleaved fairly
    and the result is deterministic in (afs, bounds).
    """
    start = time.monotonic()
    names = [name for name, _ in afs.signature.symbols]
    spaces = [_TemplateSpace(ty, bounds) for _, ty in afs.signature.symbols]

    first = tuple(0 for _ in spaces)
    frontier: list[tuple[int, tuple[int, ...]]] = [(0, first)]
    seen = {first}
    tried = 0
    while frontier:
        if (time.monotonic() - start) * 1000 > bounds.timeout_ms:
            return SynthResult(None, True, tried)
        weight, idx = heapq.heappop(frontier)
        entries = [spaces[k].get(i) for k, i in enumerate(idx)]
        candidate = Interpretation(tuple(
            (name, entry[1]) for name, entry in zip(names, entries)))
        tried += 1
        if certify(afs, candidate, _ORACLE).certified:
            return SynthResult(candidate, False, tried)
        for k, i in enumerate(idx):
            succ = idx[:k] + (i + 1,) + idx[k + 1:]
            if succ in seen:
                continue
            nxt = spaces[k].get(i + 1)
            if nxt is None:
                continue
            seen.add(succ)
            heapq.heappush(
                frontier, (weight - entries[k][0] + nxt[0], succ))
    return SynthResult(None, False, tried)


def search(afs: AFS, bounds: SearchBounds = SearchBounds()) -> Optional[Interpretation]:
    return synthesize(afs, bounds).interpretation
