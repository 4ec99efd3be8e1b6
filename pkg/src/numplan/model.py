"""Grounded numeric planning task model.

A task couples an ordered vocabulary of Boolean and numeric state variables
with ground actions, an initial state, and a goal.  Variables are addressed
by position: Boolean variables occupy indices ``0 .. n_bools-1`` of a state's
bit vector, numeric variables indices ``0 .. n_nums-1`` of its value vector.
Everything here is immutable once built; mutation happens only by creating
successor states.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class TaskError(Exception):
    """Invalid task structure detected at construction time."""


class IndexOutOfRangeError(TaskError):
    """An action or goal references a variable index outside the task."""


class DuplicateEffectError(TaskError):
    """One action assigns the same variable more than once."""


class NonTotalInitialStateError(TaskError):
    """The initial state does not assign exactly the declared variables."""


class State:
    """A total assignment: packed Boolean bits plus a tuple of floats.

    Numeric values are canonicalized on construction: negative zero becomes
    positive zero and non-finite values are rejected, so equality and hashing
    coincide with bit-identity of the stored vectors.
    """

    __slots__ = ("bits", "nums", "_hash")

    def __init__(self, bits: int, nums: Iterable[float]):
        canon = []
        for v in nums:
            v = float(v)
            if not math.isfinite(v):
                raise ValueError(f"non-finite state value: {v!r}")
            canon.append(0.0 if v == 0.0 else v)
        self.bits = bits
        self.nums = tuple(canon)
        self._hash = hash((bits, self.nums))

    @classmethod
    def from_values(cls, bools: Sequence[bool], nums: Iterable[float]) -> "State":
        bits = 0
        for i, b in enumerate(bools):
            if b:
                bits |= 1 << i
        return cls(bits, nums)

    def bool_value(self, index: int) -> bool:
        return bool((self.bits >> index) & 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, State):
            return NotImplemented
        return self.bits == other.bits and self.nums == other.nums

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"State(bits={bin(self.bits)}, nums={self.nums})"


class NumExpr:
    """Arithmetic expression tree over numeric state variables."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Const(NumExpr):
    value: float


@dataclass(frozen=True, slots=True)
class Var(NumExpr):
    index: int


@dataclass(frozen=True, slots=True)
class Add(NumExpr):
    lhs: NumExpr
    rhs: NumExpr


@dataclass(frozen=True, slots=True)
class Sub(NumExpr):
    lhs: NumExpr
    rhs: NumExpr


@dataclass(frozen=True, slots=True)
class Mul(NumExpr):
    lhs: NumExpr
    rhs: NumExpr


@dataclass(frozen=True, slots=True)
class Div(NumExpr):
    lhs: NumExpr
    rhs: NumExpr


class Cmp(enum.Enum):
    """Comparison of an expression against zero."""

    GE = ">="
    GT = ">"
    EQ = "="


@dataclass(frozen=True, slots=True)
class NumCondition:
    """Normalized numeric condition ``expr <cmp> 0``."""

    expr: NumExpr
    cmp: Cmp


@dataclass(frozen=True, slots=True)
class GroundAction:
    name: str
    pre_prop: frozenset[int]
    pre_num: tuple[NumCondition, ...]
    eff_bool: tuple[tuple[int, bool], ...]
    eff_num: tuple[tuple[int, NumExpr], ...]


@dataclass(frozen=True, slots=True)
class GoalCondition:
    prop_literals: frozenset[int]
    num_conditions: tuple[NumCondition, ...]


@dataclass(frozen=True, slots=True)
class NumericTask:
    bool_vars: tuple[str, ...]
    num_vars: tuple[str, ...]
    actions: tuple[GroundAction, ...]
    initial: State
    goal: GoalCondition

    @property
    def n_bools(self) -> int:
        return len(self.bool_vars)

    @property
    def n_nums(self) -> int:
        return len(self.num_vars)

    @property
    def n_vars(self) -> int:
        return len(self.bool_vars) + len(self.num_vars)


Plan = tuple[GroundAction, ...]


def expr_var_indices(expr: NumExpr) -> Iterator[int]:
    """Yield every numeric variable index referenced by an expression."""
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            yield node.index
        elif isinstance(node, (Add, Sub, Mul, Div)):
            stack.append(node.lhs)
            stack.append(node.rhs)


def _check_num_indices(exprs: Iterable[NumExpr], n_nums: int, where: str) -> None:
    for expr in exprs:
        for idx in expr_var_indices(expr):
            if not 0 <= idx < n_nums:
                raise IndexOutOfRangeError(
                    f"{where} references numeric variable {idx}, task has {n_nums}"
                )


def build_task(
    bool_vars: Sequence[str],
    num_vars: Sequence[str],
    actions: Iterable[GroundAction],
    initial: State,
    goal: GoalCondition,
) -> NumericTask:
    """Validate and freeze a grounded task.

    Raises IndexOutOfRangeError, DuplicateEffectError, or
    NonTotalInitialStateError when the pieces do not fit together.
    """
    bool_vars = tuple(bool_vars)
    num_vars = tuple(num_vars)
    actions = tuple(actions)
    n_bools, n_nums = len(bool_vars), len(num_vars)

    if len(initial.nums) != n_nums:
        raise NonTotalInitialStateError(
            f"initial state assigns {len(initial.nums)} numeric variables, task has {n_nums}"
        )
    if initial.bits >> n_bools:
        raise NonTotalInitialStateError(
            f"initial state sets bits beyond the {n_bools} declared Boolean variables"
        )

    for action in actions:
        for idx in action.pre_prop:
            if not 0 <= idx < n_bools:
                raise IndexOutOfRangeError(
                    f"action {action.name!r} precondition references Boolean variable {idx}"
                )
        _check_num_indices(
            (c.expr for c in action.pre_num), n_nums, f"action {action.name!r} precondition"
        )
        seen_bool: set[int] = set()
        for idx, _val in action.eff_bool:
            if not 0 <= idx < n_bools:
                raise IndexOutOfRangeError(
                    f"action {action.name!r} effect references Boolean variable {idx}"
                )
            if idx in seen_bool:
                raise DuplicateEffectError(
                    f"action {action.name!r} assigns Boolean variable {idx} twice"
                )
            seen_bool.add(idx)
        seen_num: set[int] = set()
        for idx, expr in action.eff_num:
            if not 0 <= idx < n_nums:
                raise IndexOutOfRangeError(
                    f"action {action.name!r} effect references numeric variable {idx}"
                )
            if idx in seen_num:
                raise DuplicateEffectError(
                    f"action {action.name!r} assigns numeric variable {idx} twice"
                )
            seen_num.add(idx)
            _check_num_indices((expr,), n_nums, f"action {action.name!r} effect")

    for idx in goal.prop_literals:
        if not 0 <= idx < n_bools:
            raise IndexOutOfRangeError(f"goal references Boolean variable {idx}")
    _check_num_indices((c.expr for c in goal.num_conditions), n_nums, "goal")

    return NumericTask(bool_vars, num_vars, actions, initial, goal)
