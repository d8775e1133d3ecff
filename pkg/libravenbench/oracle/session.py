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
"""Bug oracle: binds Ravens to a backend session and tracks bug states."""

import dataclasses
import enum
from typing import Any, Dict, FrozenSet, Hashable, Iterable, List, Optional, \
  Tuple

from libravenbench import errors
from libravenbench import logging_utils
from libravenbench.emulation import api
from libravenbench.oracle import metadata as metadata_lib
from libravenbench.oracle import states
from libravenbench.raven import interpreter
from libravenbench.raven import nodes

logging_utils.SetUpLogger(__name__)
logger = logging_utils.GetLogger(__name__)

LABEL_CRASH = 'crash'
LABEL_QUEUE = 'queue'


class Mode(enum.Enum):
  """Oracle operating modes."""
  # Observe only; execution is never altered.
  REPLAY = 'replay'
  # Active bugs end the run with OracleAbort as soon as they trigger.
  LIVE = 'live'


@dataclasses.dataclass
class FinalizedInput:
  """Per-input oracle verdict.

  Attributes:
    observations (List[BugObservation]): One per known bug, in bug order.
    first_triggered (Optional[str]): The first bug that reached Triggered
        in execution order.
    flags (Dict[str, Any]): multi_bug, label_mismatch and raven_errors.
  """
  observations: List[states.BugObservation]
  first_triggered: Optional[str]
  flags: Dict[str, Any]

  def State(self, bug_id: str) -> states.BugState:
    """Returns the final state of a bug, NotReached if unknown."""
    for observation in self.observations:
      if observation.bug_id == bug_id:
        return observation.state
    return states.BugState.NOT_REACHED


class OracleSession:
  """Ravens registered on one backend session.

  Attributes:
    programs (List[RavenProgram]): The loaded Ravens.
    backend (BackendSession): The emulator session hooks are bound to.
    mode (Mode): Replay or Live.
    metadata (Dict[str, BugMetadata]): Sidecar entries by bug ID.
    active (FrozenSet[str]): Bugs that abort the run in Live mode.
    bug_ids (List[str]): Bugs declared by the Ravens, in load order.
    raven_errors (List[str]): Runtime diagnostics of the current input.
  """

  def __init__(self,
               programs: List[nodes.RavenProgram],
               backend: api.BackendSession,
               mode: Mode = Mode.REPLAY,
               metadata: Optional[Dict[str, metadata_lib.BugMetadata]] = None,
               active: Optional[Iterable[str]] = None,
               step_budget: int = interpreter.DEFAULT_STEP_BUDGET) -> None:
    """Initializes the session. Use LoadRavens to also register hooks.

    Args:
      programs (List[RavenProgram]): The Ravens.
      backend (BackendSession): The emulator session.
      mode (Mode): Optional. Defaults to Replay.
      metadata (Dict[str, BugMetadata]): Optional. Sidecar entries.
      active (Iterable[str]): Optional. Active bugs. Defaults to the bugs
          flagged active in metadata.
      step_budget (int): Optional. AST step budget per hook call.
    """
    self.programs = list(programs)
    self.backend = backend
    self.mode = mode
    self.metadata = dict(metadata or {})
    if active is None:
      active = [bug_id for bug_id, entry in self.metadata.items()
                if entry.active]
    self.active = frozenset(active)  # type: FrozenSet[str]
    self.step_budget = step_budget
    self.bug_ids = []  # type: List[str]
    for program in self.programs:
      for bug_id in program.bug_ids:
        if bug_id not in self.bug_ids:
          self.bug_ids.append(bug_id)
    for bug_id in sorted(self.active - set(self.bug_ids)):
      logger.warning('Active bug {0:s} is not declared by any Raven'.format(
          bug_id))
    self.raven_errors = []  # type: List[str]
    self._globals = []  # type: List[interpreter.GlobalsState]
    self._states = {}  # type: Dict[str, states.BugState]
    self._trigger_order = []  # type: List[str]
    self._abort = None  # type: Optional[str]
    self.BeginInput()

  def BeginInput(self) -> None:
    """Resets globals and bug states before a new input."""
    self._globals = [interpreter.GlobalsState.ForProgram(program)
                     for program in self.programs]
    self._states = {bug_id: states.BugState.NOT_REACHED
                    for bug_id in self.bug_ids}
    self._trigger_order = []
    self._abort = None
    self.raven_errors = []

  def LiveGuard(self, bug_id: str) -> bool:
    """Returns True if a trigger of bug_id ends the run."""
    return self.mode == Mode.LIVE and bug_id in self.active

  def CurrentState(self, bug_id: str) -> states.BugState:
    """Returns the state of a bug for the input being run."""
    return self._states.get(bug_id, states.BugState.NOT_REACHED)

  def _Raise(self, bug_id: str, state: states.BugState) -> None:
    current = self._states.get(bug_id, states.BugState.NOT_REACHED)
    if state > current:
      self._states[bug_id] = state

  def _OnReached(self, bug_id: str) -> None:
    self._Raise(bug_id, states.BugState.REACHED)

  def _OnTriggered(self, bug_id: str) -> None:
    self._Raise(bug_id, states.BugState.TRIGGERED)
    if bug_id not in self._trigger_order:
      self._trigger_order.append(bug_id)
    if self._abort is None and self.LiveGuard(bug_id):
      self._abort = bug_id

  def HandleHook(self, hook_id: Hashable) -> Optional[str]:
    """Runs the introspection function of a firing reflection point.

    Args:
      hook_id (Hashable): (program index, hook entry index).

    Returns:
      Optional[str]: The bug ID to abort the run with, in Live mode.
    """
    program_index, entry_index = hook_id  # type: ignore
    program = self.programs[program_index]
    entry = program.hooks[entry_index]
    binding = interpreter.IntrinsicBinding(
        reg_state=self.backend.ReadRegister,
        mem_read=self.backend.ReadMemory,
        report_reached=self._OnReached,
        report_detected_triggered=self._OnTriggered)
    try:
      interpreter.EvalHook(program, entry.function_name, binding,
                           self._globals[program_index], self.step_budget)
    except errors.RavenRuntimeError as exception:
      self.raven_errors.append(exception.message)
      logger.warning('Raven {0:s} hook 0x{1:x} failed: {2:s}'.format(
          program.origin, entry.address, exception.message))
    return self._abort

  def FinalizeInput(self,
                    result: api.ExecutionResult,
                    input_id: str = '',
                    label: Optional[str] = None) -> FinalizedInput:
    """Derives the final bug states of the input just run.

    Triggered bugs become Detected when the run crashed, or when a Live
    abort names them.

    Args:
      result (ExecutionResult): The backend result.
      input_id (str): Optional. ID stored in the observations.
      label (str): Optional. Corpus label, 'crash' or 'queue'.

    Returns:
      FinalizedInput: Observations, first triggered bug and flags.
    """
    termination = result.termination
    final = {}  # type: Dict[str, states.BugState]
    for bug_id in self.bug_ids:
      state = self._states[bug_id]
      if state >= states.BugState.TRIGGERED and (
          termination.is_crash or
          (termination.kind == api.TerminationKind.ORACLE_ABORT and
           termination.bug_id == bug_id)):
        state = states.BugState.DETECTED
      final[bug_id] = state
    observations = [states.BugObservation(input_id, bug_id, final[bug_id])
                    for bug_id in self.bug_ids]
    label_mismatch = False
    if label is not None and (termination.kind !=
                              api.TerminationKind.ORACLE_ABORT):
      label_mismatch = (label == LABEL_CRASH) != termination.is_crash
    flags = {
        'multi_bug': len(self._trigger_order) >= 2,
        'label_mismatch': label_mismatch,
        'raven_errors': len(self.raven_errors),
    }  # type: Dict[str, Any]
    first = self._trigger_order[0] if self._trigger_order else None
    return FinalizedInput(observations, first, flags)

  def RunInput(self,
               input_bytes: bytes,
               limits: Optional[api.ExecutionLimits] = None,
               input_id: str = '',
               label: Optional[str] = None
              ) -> Tuple[api.ExecutionResult, FinalizedInput]:
    """Runs one input through the backend with the oracle attached.

    Args:
      input_bytes (bytes): The input.
      limits (ExecutionLimits): Optional. Run bounds.
      input_id (str): Optional. ID stored in the observations.
      label (str): Optional. Corpus label.

    Returns:
      Tuple[ExecutionResult, FinalizedInput]: The run and its verdict.
    """
    self.BeginInput()
    result = self.backend.Run(input_bytes, limits)
    return result, self.FinalizeInput(result, input_id, label)


def LoadRavens(programs: List[nodes.RavenProgram],
               backend: api.BackendSession,
               mode: Mode = Mode.REPLAY,
               metadata: Optional[Dict[str, metadata_lib.BugMetadata]] = None,
               active: Optional[Iterable[str]] = None,
               step_budget: int = interpreter.DEFAULT_STEP_BUDGET
              ) -> OracleSession:
  """Registers every reflection point of the Ravens on a backend session.

  Args:
    programs (List[RavenProgram]): The Ravens.
    backend (BackendSession): The emulator session.
    mode (Mode): Optional. Defaults to Replay.
    metadata (Dict[str, BugMetadata]): Optional. Sidecar entries.
    active (Iterable[str]): Optional. Active bugs for Live mode.
    step_budget (int): Optional. AST step budget per hook call.

  Returns:
    OracleSession: The session, installed as the backend's hook handler.

  Raises:
    RavenLoadError: If a reflection point cannot be registered.
  """
  oracle = OracleSession(programs, backend, mode, metadata, active,
                         step_budget)
  for program_index, program in enumerate(oracle.programs):
    for entry_index, entry in enumerate(program.hooks):
      try:
        backend.RegisterHook(entry.address, (program_index, entry_index))
      except errors.HookRegistrationError as exception:
        raise errors.RavenLoadError(
            '{0:s}: reflection point 0x{1:x} ({2:s}): {3:s}'.format(
                program.origin, entry.address, entry.function_name,
                exception.message), __name__) from exception
  backend.SetHookHandler(oracle.HandleHook)
  logger.debug('Registered {0:d} reflection point(s) for {1:d} bug(s)'.format(
      sum(len(program.hooks) for program in oracle.programs),
      len(oracle.bug_ids)))
  return oracle
