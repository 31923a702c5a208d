"""Certification of rewrite rules against a polynomial interpretation.

Each rule yields one base-typed constraint lhs > rhs over the rule's
variable context (function-typed rules are applied to fresh variables
until base type, since the function order is pointwise).  Constraints are
checked by a sound, deliberately incomplete pipeline:

    cancel_common -> monotonicity_merge -> poly_gt

Subtraction removes monomials shared by both sides; merging rewrites the
arguments of right-hand atoms up to arguments occurring on the left
(sound by weak monotonicity of the variable); the final test is
coefficient dominance plus a strictly larger constant.  A failed check
returns Unknown, never a refutation; falsify_sample may attach a concrete
counterexample when one exists.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .core import (
    AFS,
    Context,
    TypeInferenceError,
    domains,
)
from .interp import (
    Assignment,
    Atom,
    InterpError,
    Interpretation,
    Monomial,
    NormalPoly,
    VarNamer,
    ZERO,
    apply_value,
    base_of,
    eval_normal,
    interpret_term,
    make_poly,
    render_poly,
    sample_assignment,
    var_value,
)


@dataclass(frozen=True)
class CheckLimits:
    """Effort bounds for a certification run."""
    samples: int = 500
    backtrack: int = 64
    seed: int = 0


@dataclass(frozen=True)
class Constraint:
    """lhs > rhs over ctx, derived from rule `rule`."""
    ctx: Context
    lhs: NormalPoly
    rhs: NormalPoly
    rule: int

    def render(self) -> str:
        namer = VarNamer(self.ctx)
        return f"{render_poly(self.lhs, namer)} > {render_poly(self.rhs, namer)}"


def derive_constraints(afs: AFS, interp: Interpretation) -> tuple[Constraint, ...]:
    """One constraint per rule, in rule order.

    Function-typed rule sides are compared pointwise: both sides are
    applied to fresh variables (appended to the context) until base type.
    """
    out = []
    for i, rule in enumerate(afs.rules):
        n = len(rule.vars)
        fresh = domains(rule.target)
        lv = interpret_term(afs.signature, interp, rule.vars, rule.lhs)
        rv = interpret_term(afs.signature, interp, rule.vars, rule.rhs)
        for j, ty in enumerate(fresh):
            x = var_value(n + j, ty)
            lv = apply_value(lv, x)
            rv = apply_value(rv, x)
        out.append(Constraint(rule.vars + fresh, base_of(lv), base_of(rv), i))
    return tuple(out)


# ----------------------------------------------------------- dominance

def poly_ge(p: NormalPoly, q: NormalPoly) -> bool:
    """Sufficient test for p >= q under every natural assignment.

    Every monomial of q must be assigned to a host monomial of p with
    identical variable powers and a one-to-one atom correspondence (same
    head, arguments dominating pointwise).  Hosts have budgets: the
    coefficients routed to one host may not exceed its own.  False means
    "not established", not a refutation.
    """
    budgets = [m.coeff for m in p.monomials]
    candidates: list[list[int]] = []
    for qm in q.monomials:
        cs = [i for i, pm in enumerate(p.monomials) if _mono_dominates(pm, qm)]
        if not cs:
            return False
        candidates.append(cs)

    def assign(k: int) -> bool:
        if k == len(q.monomials):
            return True
        need = q.monomials[k].coeff
        for i in candidates[k]:
            if budgets[i] >= need:
                budgets[i] -= need
                if assign(k + 1):
                    return True
                budgets[i] += need
        return False

    return assign(0)


def poly_gt(p: NormalPoly, q: NormalPoly) -> bool:
    """p > q for every natural assignment, sufficiently: dominance on the
    non-constant parts and a strictly greater constant (variables may all
    be zero, so only the constant can supply strictness)."""
    return (p.constant_part() > q.constant_part()
            and poly_ge(p.non_constant(), q.non_constant()))


def _mono_dominates(pm: Monomial, qm: Monomial) -> bool:
    return pm.powers == qm.powers and _atoms_dominate(pm.atoms, qm.atoms)


def _atoms_dominate(p_atoms: tuple[Atom, ...], q_atoms: tuple[Atom, ...]) -> bool:
    if len(p_atoms) != len(q_atoms):
        return False
    if not q_atoms:
        return True
    qa = q_atoms[0]
    for i, pa in enumerate(p_atoms):
        if _atom_dominates(pa, qa) and _atoms_dominate(
                p_atoms[:i] + p_atoms[i + 1:], q_atoms[1:]):
            return True
    return False


def _atom_dominates(pa: Atom, qa: Atom) -> bool:
    return (pa.head == qa.head and len(pa.args) == len(qa.args)
            and all(poly_ge(b, a) for b, a in zip(pa.args, qa.args)))


# ---------------------------------------------------------- cancellation

def common_part(p: NormalPoly, q: NormalPoly) -> NormalPoly:
    """Sum of min-coefficient monomials occurring (same shape) on both sides."""
    q_by_shape = {m.shape(): m.coeff for m in q.monomials}
    out = []
    for m in p.monomials:
        c = q_by_shape.get(m.shape())
        if c is not None:
            out.append(Monomial(min(m.coeff, c), m.powers, m.atoms))
    return make_poly(out)


def subtract_poly(p: NormalPoly, sub: NormalPoly) -> NormalPoly:
    """p - sub, defined only when sub is shape- and coefficient-wise below p."""
    sub_by_shape = {m.shape(): m.coeff for m in sub.monomials}
    return make_poly(
        Monomial(m.coeff - sub_by_shape.get(m.shape(), 0), m.powers, m.atoms)
        for m in p.monomials)


def cancel_common(c: Constraint) -> Constraint:
    """Subtract the shared part from both sides (preserves the > judgment)."""
    common = common_part(c.lhs, c.rhs)
    return Constraint(c.ctx, subtract_poly(c.lhs, common),
                      subtract_poly(c.rhs, common), c.rule)


# ---------------------------------------------------------------- merging

Hosting = tuple[tuple[Atom, Atom], ...]


def _distinct_atoms(p: NormalPoly) -> list[Atom]:
    seen: dict[tuple, Atom] = {}
    for m in p.monomials:
        for a in m.atoms:
            seen.setdefault(a.key(), a)
    return [seen[k] for k in sorted(seen)]


def enumerate_hostings(lhs: NormalPoly, rhs: NormalPoly, limit: int) -> Iterator[Hosting]:
    """Complete assignments of every distinct rhs atom to a dominating lhs
    atom (same head, argument-wise poly_ge), at most `limit` of them.

    Candidates are ordered structurally largest argument first, so the
    first hosting is the greedy one; later ones backtrack.
    """
    rhs_atoms = _distinct_atoms(rhs)
    if not rhs_atoms:
        yield ()
        return
    lhs_atoms = _distinct_atoms(lhs)
    candidate_lists = []
    for qa in rhs_atoms:
        cs = [pa for pa in lhs_atoms if _atom_dominates(pa, qa)]
        if not cs:
            return
        cs.sort(key=Atom.key, reverse=True)
        candidate_lists.append(cs)
    for combo in itertools.islice(itertools.product(*candidate_lists), limit):
        yield tuple(zip(rhs_atoms, combo))


def apply_hosting(p: NormalPoly, hosting: Hosting) -> NormalPoly:
    mapping = {qa.key(): host for qa, host in hosting}
    return make_poly(
        Monomial(m.coeff, m.powers,
                 tuple(sorted((mapping.get(a.key(), a) for a in m.atoms), key=Atom.key)))
        for m in p.monomials)


def monotonicity_merge(c: Constraint, backtrack_limit: int = 64) -> Union[Constraint, "Unknown"]:
    """Rewrite rhs atom arguments up to hosting lhs atoms (weak monotonicity
    of the head variable makes this an over-approximation of the rhs), then
    re-canonicalize so dominance can match shapes.  Unknown(MergeFailed)
    when no complete hosting exists within the limit."""
    for hosting in enumerate_hostings(c.lhs, c.rhs, backtrack_limit):
        return Constraint(c.ctx, c.lhs, apply_hosting(c.rhs, hosting), c.rule)
    return Unknown(MERGE_FAILED, _merge_failure_detail(c))


def _merge_failure_detail(c: Constraint) -> str:
    namer = VarNamer(c.ctx)
    lhs_atoms = _distinct_atoms(c.lhs)
    for qa in _distinct_atoms(c.rhs):
        if not any(_atom_dominates(pa, qa) for pa in lhs_atoms):
            rendered = render_poly(make_poly([Monomial(1, (), (qa,))]), namer)
            return f"no lhs atom dominates {rendered}"
    return "no consistent atom hosting within the backtrack limit"


# ------------------------------------------------------------- verdicts

MERGE_FAILED = "MergeFailed"
DOMINANCE_FAILED = "DominanceFailed"
STRICTNESS_FAILED = "StrictnessFailed"


@dataclass(frozen=True)
class GroupComparison:
    """Coefficient polynomials facing each other over one atom multiset."""
    atoms: tuple[Atom, ...]
    lhs_coeff: NormalPoly
    rhs_coeff: NormalPoly


@dataclass(frozen=True)
class ProofTrace:
    """The recorded pipeline steps justifying a Proven verdict."""
    cancelled: NormalPoly
    lhs_residue: NormalPoly
    rhs_residue: NormalPoly
    hosting: Hosting
    merged_rhs: NormalPoly
    comparisons: tuple[GroupComparison, ...]


@dataclass(frozen=True)
class Proven:
    trace: ProofTrace


@dataclass(frozen=True)
class Unknown:
    """The pipeline could not establish the constraint; never a refutation."""
    reason: str
    detail: str
    counterexample: Optional[Assignment] = None


Verdict = Union[Proven, Unknown]


def dominance_groups(lhs: NormalPoly, rhs: NormalPoly) -> tuple[GroupComparison, ...]:
    """Per atom-multiset view of the final comparison: for each atom group
    present on the rhs (plus the atom-free group), the coefficient
    polynomials on both sides."""
    def grouped(p: NormalPoly) -> dict[tuple, tuple[tuple[Atom, ...], NormalPoly]]:
        acc: dict[tuple, tuple[tuple[Atom, ...], list[Monomial]]] = {}
        for m in p.monomials:
            k = tuple(a.key() for a in m.atoms)
            acc.setdefault(k, (m.atoms, []))[1].append(Monomial(m.coeff, m.powers, ()))
        return {k: (atoms, make_poly(ms)) for k, (atoms, ms) in acc.items()}

    lhs_groups = grouped(lhs)
    rhs_groups = grouped(rhs)
    keys = sorted(set(rhs_groups) | {()})
    out = []
    for k in keys:
        atoms, rhs_coeff = rhs_groups.get(k, ((), ZERO))
        l_atoms, lhs_coeff = lhs_groups.get(k, (atoms, ZERO))
        out.append(GroupComparison(atoms or l_atoms, lhs_coeff, rhs_coeff))
    return tuple(out)


def falsify_sample(c: Constraint, samples: int,
                   rng: Optional[random.Random] = None) -> Optional[Assignment]:
    """Random search for an assignment with lhs <= rhs.  A hit refutes the
    constraint; exhausting the budget proves nothing."""
    if rng is None:
        rng = random.Random(f"0:{c.rule}")
    for _ in range(samples):
        a = sample_assignment(c.ctx, rng)
        if eval_normal(c.lhs, a) <= eval_normal(c.rhs, a):
            return a
    return None


def check_constraint(c: Constraint, limits: CheckLimits = CheckLimits()) -> Verdict:
    """Run the pipeline; Proven carries the recorded steps, Unknown carries
    the failure reason and possibly a falsifying assignment."""
    common = common_part(c.lhs, c.rhs)
    lhs = subtract_poly(c.lhs, common)
    rhs = subtract_poly(c.rhs, common)

    first: Optional[NormalPoly] = None
    for hosting in enumerate_hostings(lhs, rhs, limits.backtrack):
        merged = apply_hosting(rhs, hosting)
        if first is None:
            first = merged
        if poly_gt(lhs, merged):
            return Proven(ProofTrace(
                cancelled=common,
                lhs_residue=lhs,
                rhs_residue=rhs,
                hosting=hosting,
                merged_rhs=merged,
                comparisons=dominance_groups(lhs, merged)))

    rng = random.Random(f"{limits.seed}:{c.rule}")
    cex = falsify_sample(c, limits.samples, rng)
    namer = VarNamer(c.ctx)
    if first is None:
        return Unknown(MERGE_FAILED, _merge_failure_detail(
            Constraint(c.ctx, lhs, rhs, c.rule)), cex)
    if poly_ge(lhs.non_constant(), first.non_constant()):
        detail = (f"constant {lhs.constant_part()} is not above "
                  f"{first.constant_part()}")
        return Unknown(STRICTNESS_FAILED, detail, cex)
    detail = (f"{render_poly(lhs, namer)} does not dominate "
              f"{render_poly(first, namer)}")
    return Unknown(DOMINANCE_FAILED, detail, cex)


# ---------------------------------------------------------- certification

# Side conditions of the underlying soundness theorem that hold by
# construction of this algebra and need no per-run checking.
OBLIGATIONS: tuple[str, ...] = (
    "base order well-founded: carriers are the naturals (discharged by construction)",
    "application strictly monotone and above plain application: every use adds "
    "the floor of its argument (discharged by construction)",
    "interpretations weakly monotone: all polynomial coefficients are naturals "
    "(discharged by construction)",
    "beta steps weakly decreasing: substitution commutes with interpretation "
    "(discharged by construction)",
)


@dataclass(frozen=True)
class RuleReport:
    rule: int
    constraint: Constraint
    verdict: Verdict


@dataclass(frozen=True)
class CertResult:
    """Certified iff every rule's constraint was Proven.

    `error` marks inputs rejected before constraint checking (type or
    shape faults), a different failure mode than an Unknown verdict.
    """
    status: str
    rule_reports: tuple[RuleReport, ...]
    obligations: tuple[str, ...] = OBLIGATIONS
    error: Optional[str] = None

    @property
    def certified(self) -> bool:
        return self.status == "Certified"


def certify(afs: AFS, interp: Interpretation,
            limits: CheckLimits = CheckLimits()) -> CertResult:
    """Check every rule of afs against interp.  Pure in (afs, interp, limits)."""
    try:
        interp.validate(afs.signature)
        afs.check()
        constraints = derive_constraints(afs, interp)
    except (InterpError, TypeInferenceError) as e:
        return CertResult("NotCertified", (), error=f"{type(e).__name__}: {e}")
    reports = tuple(RuleReport(c.rule, c, check_constraint(c, limits))
                    for c in constraints)
    ok = all(isinstance(r.verdict, Proven) for r in reports)
    return CertResult("Certified" if ok else "NotCertified", reports)
