"""Exact task semantics: expression evaluation, applicability, successors,
goal tests, and plan replay.

All operations are pure functions of (task pieces, state, policy).  The only
tolerance anywhere is the one applied to equality conditions; inequalities
and state identity are always exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import (
    Add,
    Cmp,
    Const,
    Div,
    GroundAction,
    Mul,
    NumCondition,
    NumericTask,
    NumExpr,
    Plan,
    State,
    Sub,
    Var,
)


class EvaluationError(Exception):
    """Expression evaluation failed on this state."""


class DivisionByZeroError(EvaluationError):
    pass


class NonFiniteError(EvaluationError):
    """An arithmetic step produced an overflow, infinity, or NaN."""


@dataclass(frozen=True, slots=True)
class EvalPolicy:
    """Comparison policy.  eq_tolerance applies to EQ conditions only, never
    to state identity; set it to 0 for exact equality."""

    eq_tolerance: float = 1e-6

    def __post_init__(self) -> None:
        if not self.eq_tolerance >= 0:
            raise ValueError("eq_tolerance must be non-negative")


DEFAULT_POLICY = EvalPolicy()


def eval_expr(expr: NumExpr, state: State) -> float:
    """Evaluate an expression in a state.

    Every arithmetic node must produce a finite value; division by zero and
    overflow raise rather than propagating poison values into states.
    """
    if isinstance(expr, Var):
        return state.nums[expr.index]
    if isinstance(expr, Const):
        return expr.value
    lhs = eval_expr(expr.lhs, state)
    rhs = eval_expr(expr.rhs, state)
    if isinstance(expr, Add):
        out = lhs + rhs
    elif isinstance(expr, Sub):
        out = lhs - rhs
    elif isinstance(expr, Mul):
        out = lhs * rhs
    elif isinstance(expr, Div):
        if rhs == 0.0:
            raise DivisionByZeroError(f"division by zero: {lhs!r} / 0")
        out = lhs / rhs
    else:
        raise TypeError(f"not an expression node: {expr!r}")
    if not math.isfinite(out):
        raise NonFiniteError(f"non-finite intermediate value {out!r}")
    return out


def holds(cond: NumCondition, state: State, policy: EvalPolicy = DEFAULT_POLICY) -> bool:
    value = eval_expr(cond.expr, state)
    if cond.cmp is Cmp.GE:
        return value >= 0.0
    if cond.cmp is Cmp.GT:
        return value > 0.0
    return abs(value) <= policy.eq_tolerance


def applicable(action: GroundAction, state: State, policy: EvalPolicy = DEFAULT_POLICY) -> bool:
    for idx in action.pre_prop:
        if not (state.bits >> idx) & 1:
            return False
    for cond in action.pre_num:
        if not holds(cond, state, policy):
            return False
    return True


def apply_action(
    action: GroundAction, state: State, policy: EvalPolicy = DEFAULT_POLICY
) -> State | None:
    """Return the successor state, or None when the action is inapplicable.

    All numeric effect expressions are evaluated against the original state
    before any assignment is written, so effects are simultaneous.
    """
    if not applicable(action, state, policy):
        return None
    updates = [(idx, eval_expr(expr, state)) for idx, expr in action.eff_num]
    bits = state.bits
    for idx, value in action.eff_bool:
        if value:
            bits |= 1 << idx
        else:
            bits &= ~(1 << idx)
    nums = list(state.nums)
    for idx, value in updates:
        nums[idx] = value
    return State(bits, nums)


def satisfies_goal(state: State, task: NumericTask, policy: EvalPolicy = DEFAULT_POLICY) -> bool:
    for idx in task.goal.prop_literals:
        if not (state.bits >> idx) & 1:
            return False
    for cond in task.goal.num_conditions:
        if not holds(cond, state, policy):
            return False
    return True


@dataclass(frozen=True, slots=True)
class ValidationReport:
    """Outcome of replaying a plan from the initial state.

    failed_step is 1-based; None for a valid plan or a goal failure after the
    last action.
    """

    valid: bool
    length: int
    failed_step: int | None
    reason: str | None
    final_state: State | None

    def __bool__(self) -> bool:
        return self.valid


def validate_plan(
    task: NumericTask, plan: Plan, policy: EvalPolicy = DEFAULT_POLICY
) -> ValidationReport:
    """Replay a plan and check the final state against the goal.

    Failures are report contents, never exceptions: an inapplicable or
    crashing action invalidates the plan at that step.
    """
    state = task.initial
    for step, action in enumerate(plan, start=1):
        try:
            successor = apply_action(action, state, policy)
        except EvaluationError as exc:
            return ValidationReport(False, len(plan), step, f"evaluation error: {exc}", None)
        if successor is None:
            return ValidationReport(False, len(plan), step, "inapplicable action", None)
        state = successor
    try:
        if not satisfies_goal(state, task, policy):
            return ValidationReport(False, len(plan), None, "goal unsatisfied", state)
    except EvaluationError as exc:
        return ValidationReport(False, len(plan), None, f"evaluation error: {exc}", state)
    return ValidationReport(True, len(plan), None, None, state)
