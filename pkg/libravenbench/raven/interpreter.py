# -*- coding: utf-8 -*-
# Copyright 2026 The ravenbench authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Tree-walking evaluator for Raven introspection functions."""

import copy
import dataclasses
from typing import Callable, Dict, List, NoReturn, Optional, Tuple, Union

from libravenbench import errors
from libravenbench import logging_utils
from libravenbench.raven import nodes
from libravenbench.raven import parser
from libravenbench.raven import values

logging_utils.SetUpLogger(__name__)
logger = logging_utils.GetLogger(__name__)

DEFAULT_STEP_BUDGET = 1000000
MAX_CALL_DEPTH = 64
VALID_READ_SIZES = (1, 2, 4, 8)

Slot = Union[values.Value, List[values.Value]]
# (kind, bug_id) with kind 'reached' or 'triggered'.
Report = Tuple[str, str]


@dataclasses.dataclass
class IntrinsicBinding:
  """Callbacks the introspection intrinsics are routed to.

  Attributes:
    reg_state (Callable[[int], Value]): Reads a register by ID.
    mem_read (Callable[[int, int], Value]): Reads size bytes at an address.
    report_reached (Callable[[str], None]): Receives Reached reports.
    report_detected_triggered (Callable[[str], None]): Receives trigger
        reports.
  """
  reg_state: Callable[[int], values.Value]
  mem_read: Callable[[int, int], values.Value]
  report_reached: Callable[[str], None]
  report_detected_triggered: Callable[[str], None]


class GlobalsState:
  """Values of a program's global variables.

  Attributes:
    slots (Dict[str, Slot]): Scalars map to a Value, arrays to a list of
        Values.
  """

  def __init__(self, slots: Optional[Dict[str, Slot]] = None) -> None:
    self.slots = slots if slots is not None else {}  # type: Dict[str, Slot]

  @classmethod
  def ForProgram(cls, program: nodes.RavenProgram) -> 'GlobalsState':
    """Builds the initial globals of a program.

    Uninitialised globals and unlisted array elements are zero.

    Args:
      program (RavenProgram): The program.

    Returns:
      GlobalsState: A fresh state.
    """
    slots = {}  # type: Dict[str, Slot]
    evaluator = _Evaluator(program, None, cls(), DEFAULT_STEP_BUDGET)
    for decl in program.globals:
      int_type = decl.int_type
      inits = [evaluator.Evaluate(expr).Cast(int_type) for expr in decl.init]
      if decl.size is None:
        slots[decl.name] = inits[0] if inits else values.Value(0, int_type)
      else:
        slots[decl.name] = inits + [
            values.Value(0, int_type) for _ in range(decl.size - len(inits))]
    return cls(slots)

  def Copy(self) -> 'GlobalsState':
    """Returns an independent copy of the state."""
    return GlobalsState(copy.deepcopy(self.slots))

  def Get(self, name: str) -> values.Value:
    """Returns the value of a scalar global."""
    slot = self.slots[name]
    if isinstance(slot, list):
      raise KeyError(name)
    return slot

  def __eq__(self, other: object) -> bool:
    return isinstance(other, GlobalsState) and self.slots == other.slots


@dataclasses.dataclass
class HookResult:
  """Outcome of one introspection function call.

  Attributes:
    reports (List[Report]): (kind, bug_id) pairs in emission order,
        kind being 'reached' or 'triggered'.
    steps (int): AST steps consumed.
    globals_state (GlobalsState): The state after the call.
  """
  reports: List[Report]
  steps: int
  globals_state: GlobalsState


class _BreakSignal(Exception):
  pass


class _ContinueSignal(Exception):
  pass


class _ReturnSignal(Exception):

  def __init__(self, value: values.Value) -> None:
    super().__init__()
    self.value = value


class _Evaluator:
  """Evaluates one hook invocation."""

  def __init__(self, program: nodes.RavenProgram,
               intrinsics: Optional[IntrinsicBinding],
               globals_state: GlobalsState, step_budget: int) -> None:
    self.program = program
    self.functions = program.function_map
    self.intrinsics = intrinsics
    self.globals = globals_state.slots
    self.step_budget = step_budget
    self.steps = 0
    self.depth = 0
    self.reports = []  # type: List[Report]
    self.frames = [[{}]]  # type: List[List[Dict[str, values.Value]]]

  def _Fail(self, message: str, node: object,
            kind: str = 'runtime') -> NoReturn:
    raise errors.RavenRuntimeError(
        '{0:s}:{1:d}:{2:d}: {3:s}'.format(self.program.origin,
                                          getattr(node, 'line', 0),
                                          getattr(node, 'column', 0), message),
        __name__, kind=kind)

  def _Step(self, node: object) -> None:
    self.steps += 1
    if self.steps > self.step_budget:
      self._Fail('step budget exceeded ({0:d} steps)'.format(
          self.step_budget), node, kind='step_budget')

  # Variables

  @property
  def _scopes(self) -> List[Dict[str, values.Value]]:
    return self.frames[-1]

  def _FindLocal(self, name: str) -> Optional[Dict[str, values.Value]]:
    for scope in reversed(self._scopes):
      if name in scope:
        return scope
    return None

  def _Load(self, target: Union[nodes.Name, nodes.Index]) -> values.Value:
    if isinstance(target, nodes.Name):
      scope = self._FindLocal(target.name)
      if scope is not None:
        return scope[target.name]
      slot = self.globals[target.name]
      assert not isinstance(slot, list)
      return slot
    if target.name == parser.REG_STATE:
      return self._RegState(self.Evaluate(target.index), target)
    array, position = self._Element(target)
    return array[position]

  def _Element(self, target: nodes.Index) -> Tuple[List[values.Value], int]:
    array = self.globals[target.name]
    assert isinstance(array, list)
    position = self.Evaluate(target.index).value
    if not 0 <= position < len(array):
      self._Fail('index {0:d} out of range for {1:s}[{2:d}]'.format(
          position, target.name, len(array)), target, kind='index')
    return array, position

  def _Store(self, target: Union[nodes.Name, nodes.Index],
             value: values.Value) -> values.Value:
    if isinstance(target, nodes.Name):
      scope = self._FindLocal(target.name)
      if scope is not None:
        stored = value.Cast(scope[target.name].type)
        scope[target.name] = stored
        return stored
      current = self.globals[target.name]
      assert not isinstance(current, list)
      stored = value.Cast(current.type)
      self.globals[target.name] = stored
      return stored
    array, position = self._Element(target)
    stored = value.Cast(array[position].type)
    array[position] = stored
    return stored

  # Intrinsics

  def _RegState(self, reg_id: values.Value, node: object) -> values.Value:
    assert self.intrinsics is not None
    try:
      result = self.intrinsics.reg_state(reg_id.bits)
    except errors.InvalidAccessError as exception:
      self._Fail('{0:s}: {1:s}'.format(parser.REG_STATE, exception.message),
                 node, kind='invalid_access')
    return values.Value.Of(result.bits, values.UINT64)

  def _CallIntrinsic(self, call: nodes.Call) -> values.Value:
    if self.intrinsics is None:
      self._Fail('{0:s} is not allowed here'.format(call.name), call)
    if call.name in parser.REPORT_INTRINSICS:
      bug_id = call.args[0]
      assert isinstance(bug_id, nodes.StringLiteral)
      if call.name == parser.REPORT_REACHED:
        self.reports.append(('reached', bug_id.value))
        self.intrinsics.report_reached(bug_id.value)
      else:
        self.reports.append(('triggered', bug_id.value))
        self.intrinsics.report_detected_triggered(bug_id.value)
      return values.Value(0, values.INT32)
    if call.name == parser.REG_STATE:
      return self._RegState(self.Evaluate(call.args[0]), call)
    address = self.Evaluate(call.args[0])
    size = self.Evaluate(call.args[1])
    if size.value not in VALID_READ_SIZES:
      self._Fail('{0:s}: invalid width {1:d}'.format(parser.MEM_READ,
                                                     size.value),
                 call, kind='invalid_access')
    try:
      result = self.intrinsics.mem_read(address.bits, size.value)
    except errors.InvalidAccessError as exception:
      self._Fail('{0:s}: {1:s}'.format(parser.MEM_READ, exception.message),
                 call, kind='invalid_access')
    return values.Value.Of(result.bits, values.UINT64)

  def CallFunction(self, name: str, node: object) -> values.Value:
    """Runs a user function and returns its value (int32 0 for void)."""
    function = self.functions[name]
    if self.depth >= MAX_CALL_DEPTH:
      self._Fail('call depth limit {0:d} exceeded'.format(MAX_CALL_DEPTH),
                 node, kind='call_depth')
    self.depth += 1
    self.frames.append([{}])
    result = values.Value(0, values.INT32)
    try:
      self.Execute(function.body, new_scope=False)
    except _ReturnSignal as signal:
      result = signal.value
      if function.return_type != 'void':
        result = result.Cast(values.TYPE_NAMES[function.return_type])
    finally:
      self.frames.pop()
      self.depth -= 1
    return result

  # Expressions

  def Evaluate(self, expr: nodes.Expression) -> values.Value:
    """Evaluates an expression."""
    self._Step(expr)
    if isinstance(expr, nodes.IntLiteral):
      return values.Value(expr.value, expr.type)
    if isinstance(expr, (nodes.Name, nodes.Index)):
      return self._Load(expr)
    if isinstance(expr, nodes.Call):
      if expr.name in parser.INTRINSIC_ARITY:
        return self._CallIntrinsic(expr)
      return self.CallFunction(expr.name, expr)
    if isinstance(expr, nodes.Unary):
      return self._Unary(expr)
    if isinstance(expr, nodes.Binary):
      return self._Binary(expr)
    if isinstance(expr, nodes.Conditional):
      if self.Evaluate(expr.condition).IsTrue():
        return self.Evaluate(expr.then)
      return self.Evaluate(expr.otherwise)
    if isinstance(expr, nodes.Cast):
      return self.Evaluate(expr.operand).Cast(
          values.TYPE_NAMES[expr.type_name])
    if isinstance(expr, nodes.Assign):
      if expr.op == '=':
        value = self.Evaluate(expr.value)
      else:
        value = self._Arithmetic(expr.op[:-1], self._Load(expr.target),
                                 self.Evaluate(expr.value), expr)
      return self._Store(expr.target, value)
    if isinstance(expr, nodes.IncDec):
      old = self._Load(expr.target)
      delta = 1 if expr.op == '++' else -1
      new = self._Store(expr.target,
                        values.Value.Of(old.value + delta, old.type))
      return new if expr.prefix else old
    self._Fail('cannot evaluate {0:s}'.format(type(expr).__name__), expr)

  def _Unary(self, expr: nodes.Unary) -> values.Value:
    return values.Unary(expr.op, self.Evaluate(expr.operand))

  def _Binary(self, expr: nodes.Binary) -> values.Value:
    if expr.op == '&&':
      result = (self.Evaluate(expr.left).IsTrue() and
                self.Evaluate(expr.right).IsTrue())
      return values.Value(int(result), values.INT32)
    if expr.op == '||':
      result = (self.Evaluate(expr.left).IsTrue() or
                self.Evaluate(expr.right).IsTrue())
      return values.Value(int(result), values.INT32)
    left = self.Evaluate(expr.left)
    right = self.Evaluate(expr.right)
    if expr.op in values.COMPARISON_OPS:
      return values.Compare(expr.op, left, right)
    return self._Arithmetic(expr.op, left, right, expr)

  def _Arithmetic(self, op: str, left: values.Value, right: values.Value,
                  node: object) -> values.Value:
    try:
      return values.Arithmetic(op, left, right)
    except ZeroDivisionError:
      self._Fail('division by zero', node, kind='division_by_zero')
    except ValueError as exception:
      self._Fail(str(exception), node)

  # Statements

  def Execute(self, statement: nodes.Statement, new_scope: bool = True) -> None:
    """Executes a statement."""
    self._Step(statement)
    if isinstance(statement, nodes.Block):
      if new_scope:
        self._scopes.append({})
      try:
        for inner in statement.statements:
          self.Execute(inner)
      finally:
        if new_scope:
          self._scopes.pop()
    elif isinstance(statement, nodes.ExprStmt):
      self.Evaluate(statement.expr)
    elif isinstance(statement, nodes.LocalDecl):
      self._Declare(statement)
    elif isinstance(statement, nodes.If):
      if self.Evaluate(statement.condition).IsTrue():
        self._ExecuteScoped(statement.then)
      elif statement.otherwise is not None:
        self._ExecuteScoped(statement.otherwise)
    elif isinstance(statement, nodes.While):
      while self.Evaluate(statement.condition).IsTrue():
        try:
          self._ExecuteScoped(statement.body)
        except _BreakSignal:
          break
        except _ContinueSignal:
          continue
    elif isinstance(statement, nodes.For):
      self._ExecuteFor(statement)
    elif isinstance(statement, nodes.Break):
      raise _BreakSignal()
    elif isinstance(statement, nodes.Continue):
      raise _ContinueSignal()
    elif isinstance(statement, nodes.Return):
      value = values.Value(0, values.INT32)
      if statement.value is not None:
        value = self.Evaluate(statement.value)
      raise _ReturnSignal(value)

  def _ExecuteScoped(self, statement: nodes.Statement) -> None:
    self._scopes.append({})
    try:
      self.Execute(statement)
    finally:
      self._scopes.pop()

  def _Declare(self, local: nodes.LocalDecl) -> None:
    int_type = values.TYPE_NAMES[local.type_name]
    value = values.Value(0, int_type)
    if local.init is not None:
      value = self.Evaluate(local.init).Cast(int_type)
    self._scopes[-1][local.name] = value

  def _ExecuteFor(self, statement: nodes.For) -> None:
    self._scopes.append({})
    try:
      if isinstance(statement.init, nodes.LocalDecl):
        self._Declare(statement.init)
      elif statement.init is not None:
        self.Evaluate(statement.init.expr)
      while (statement.condition is None or
             self.Evaluate(statement.condition).IsTrue()):
        try:
          self._ExecuteScoped(statement.body)
        except _BreakSignal:
          break
        except _ContinueSignal:
          pass
        if statement.step is not None:
          self.Evaluate(statement.step)
        else:
          self._Step(statement)
    finally:
      self._scopes.pop()


def EvalHook(program: nodes.RavenProgram,
             function_name: str,
             intrinsics: IntrinsicBinding,
             globals_state: GlobalsState,
             step_budget: int = DEFAULT_STEP_BUDGET) -> HookResult:
  """Runs one introspection function at a reflection point.

  report_* calls are forwarded to the intrinsics as they happen. Global
  mutations are committed to globals_state only when the function completes;
  on a runtime error the reports already forwarded stand and globals_state
  is left untouched.

  Args:
    program (RavenProgram): The parsed Raven.
    function_name (str): The function to run.
    intrinsics (IntrinsicBinding): Callbacks into the paused emulator.
    globals_state (GlobalsState): The program's globals for the current
        input. Updated in place on success.
    step_budget (int): Optional. Maximum AST steps for this call.

  Returns:
    HookResult: The reports emitted and the updated globals.

  Raises:
    RavenRuntimeError: If the function exceeds its step budget, divides by
        zero, indexes out of range, or an intrinsic read is invalid.
  """
  if program.GetFunction(function_name) is None:
    raise errors.RavenRuntimeError(
        'unknown function {0:s} in {1:s}'.format(function_name,
                                                program.origin), __name__)
  working = globals_state.Copy()
  evaluator = _Evaluator(program, intrinsics, working, step_budget)
  evaluator.CallFunction(function_name, program.GetFunction(function_name))
  globals_state.slots = working.slots
  logger.debug('{0:s}:{1:s} finished in {2:d} steps, {3:d} report(s)'.format(
      program.origin, function_name, evaluator.steps, len(evaluator.reports)))
  return HookResult(evaluator.reports, evaluator.steps, globals_state)
