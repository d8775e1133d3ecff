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
"""Backend-neutral emulator contract used by the bug interpreter.

An adapter for another emulator implements BackendSession. The contract,
version API_VERSION:

  * Hooks fire before the instruction at the hooked address executes. Several
    hooks at one address fire in registration order.
  * While a hook handler runs, ReadRegister and ReadMemory observe the paused
    state and never modify it. The program counter equals the hooked address.
  * A handler returning a bug ID ends the run with an OracleAbort termination
    carrying that ID. Returning None resumes execution.
  * Run() starts from the freshly loaded target state every time, so results
    are a pure function of (target, input bytes, limits).
  * Every run terminates: the instruction limit is mandatory.
"""

import abc
import dataclasses
import enum
from typing import Any, Callable, Dict, FrozenSet, Hashable, List, Optional, \
  Tuple

from libravenbench import errors
from libravenbench.raven import values

API_VERSION = '1.0'
DEFAULT_MAX_INSTRUCTIONS = 10000000
VALID_READ_SIZES = (1, 2, 4, 8)


class TerminationKind(enum.Enum):
  """How a run ended."""
  HALTED_NORMALLY = 'HaltedNormally'
  INPUT_EXHAUSTED = 'InputExhausted'
  CRASH = 'Crash'
  STEP_LIMIT = 'StepLimit'
  ORACLE_ABORT = 'OracleAbort'


class CrashReason(enum.Enum):
  """Why a Crash termination happened."""
  UNMAPPED_READ = 'UnmappedRead'
  UNMAPPED_WRITE = 'UnmappedWrite'
  EXEC_OUTSIDE_ROM = 'ExecOutsideRom'
  INVALID_OPCODE = 'InvalidOpcode'
  STACK_UNDERFLOW = 'StackUnderflow'


@dataclasses.dataclass(frozen=True)
class Termination:
  """The final state of a run.

  Attributes:
    kind (TerminationKind): How the run ended.
    reason (Optional[CrashReason]): Set for Crash terminations.
    pc (Optional[int]): Program counter at the fault or abort point.
    lr (Optional[int]): Link register at the fault or abort point.
    shadow_stack (Tuple[int, ...]): Return addresses, outermost first, at
        the fault point. Empty for non-crash terminations.
    bug_id (Optional[str]): Set for OracleAbort terminations.
  """
  kind: TerminationKind
  reason: Optional[CrashReason] = None
  pc: Optional[int] = None
  lr: Optional[int] = None
  shadow_stack: Tuple[int, ...] = ()
  bug_id: Optional[str] = None

  @property
  def is_crash(self) -> bool:
    return self.kind == TerminationKind.CRASH

  def AsDict(self) -> Dict[str, object]:
    """Returns a JSON-serializable view of the termination."""
    return {
        'kind': self.kind.value,
        'reason': self.reason.value if self.reason else None,
        'pc': self.pc,
        'lr': self.lr,
        'shadow_stack': list(self.shadow_stack),
        'bug_id': self.bug_id,
    }

  @classmethod
  def FromDict(cls, data: Dict[str, Any]) -> 'Termination':
    """Inverse of AsDict.

    Raises:
      KeyError: If a field is missing.
      ValueError: If the kind or reason is unknown.
    """
    reason = data.get('reason')
    return cls(
        kind=TerminationKind(data['kind']),
        reason=CrashReason(reason) if reason else None,
        pc=data.get('pc'),
        lr=data.get('lr'),
        shadow_stack=tuple(data.get('shadow_stack') or ()),
        bug_id=data.get('bug_id'))


@dataclasses.dataclass(frozen=True)
class ExecutionResult:
  """Result of one run.

  Attributes:
    termination (Termination): How the run ended.
    instructions_executed (int): Instructions fully executed; a faulting
        instruction is not counted.
    covered_blocks (FrozenSet[int]): Block-start addresses executed.
  """
  termination: Termination
  instructions_executed: int
  covered_blocks: FrozenSet[int]


@dataclasses.dataclass(frozen=True)
class Capabilities:
  """Optional features a backend provides."""
  has_shadow_stack: bool = False
  has_interrupts: bool = False


@dataclasses.dataclass(frozen=True)
class ExecutionLimits:
  """Bounds on a run.

  Attributes:
    max_instructions (int): Runs end with StepLimit once this many
        instructions executed.
  """
  max_instructions: int = DEFAULT_MAX_INSTRUCTIONS


# Receives the hook_id of a firing hook. Returns a bug ID to abort the run.
HookHandler = Callable[[Hashable], Optional[str]]


class BackendSession(metaclass=abc.ABCMeta):
  """One loaded target on an emulator backend.

  Subclasses implement execution and introspection; hook bookkeeping is
  shared.
  """

  def __init__(self) -> None:
    """Initializes the hook registry."""
    self._hooks = {}  # type: Dict[int, List[Hashable]]
    self._handler = None  # type: Optional[HookHandler]
    self._running = False

  @property
  @abc.abstractmethod
  def capabilities(self) -> Capabilities:
    """The backend's optional features."""

  @abc.abstractmethod
  def IsExecutable(self, address: int) -> bool:
    """Returns True if code can be fetched from address."""

  @property
  def hook_addresses(self) -> List[int]:
    """Addresses with at least one registered hook, sorted."""
    return sorted(self._hooks)

  def RegisterHook(self, address: int, hook_id: Hashable) -> None:
    """Registers a reflection point.

    Args:
      address (int): Code address to pause at.
      hook_id (Hashable): Identifier passed to the hook handler.

    Raises:
      HookRegistrationError: If the session is running or the address is not
          executable.
    """
    if self._running:
      raise errors.HookRegistrationError(
          'Cannot register hook at 0x{0:x} while running'.format(address),
          __name__)
    if not self.IsExecutable(address):
      raise errors.HookRegistrationError(
          'Hook address 0x{0:x} is outside the executable region'.format(
              address), __name__)
    self._hooks.setdefault(address, []).append(hook_id)

  def SetHookHandler(self, handler: Optional[HookHandler]) -> None:
    """Sets the callback invoked for every firing hook."""
    self._handler = handler

  def _FireHooks(self, address: int) -> Optional[str]:
    """Invokes the handler for each hook at address, in order.

    Returns:
      Optional[str]: The bug ID of the first handler requesting an abort.
    """
    if self._handler is None:
      return None
    for hook_id in self._hooks.get(address, ()):
      abort = self._handler(hook_id)
      if abort is not None:
        return abort
    return None

  @abc.abstractmethod
  def ReadRegister(self, reg_id: int) -> values.Value:
    """Reads a register at the current pause point.

    Args:
      reg_id (int): Backend-defined register ID.

    Returns:
      Value: The register value as uint64.

    Raises:
      InvalidAccessError: If the register ID is unknown.
    """

  @abc.abstractmethod
  def ReadMemory(self, address: int, size: int) -> values.Value:
    """Reads guest memory without side effects.

    Args:
      address (int): Guest address.
      size (int): One of 1, 2, 4 or 8 bytes.

    Returns:
      Value: The little-endian value, zero-extended to uint64.

    Raises:
      InvalidAccessError: If the size is invalid or the range is unmapped.
    """

  @abc.abstractmethod
  def Run(self,
          input_bytes: bytes,
          limits: Optional[ExecutionLimits] = None) -> ExecutionResult:
    """Executes the target on one input from its initial state.

    Args:
      input_bytes (bytes): The fuzz input.
      limits (ExecutionLimits): Optional. Defaults to ExecutionLimits().

    Returns:
      ExecutionResult: How the run ended. Never raises for guest faults.
    """

  @abc.abstractmethod
  def BlockCoverage(self) -> FrozenSet[int]:
    """Returns the block starts executed by the last run."""

  @abc.abstractmethod
  def StateDigest(self) -> str:
    """Returns a digest of all guest-visible state.

    Used to check that introspection does not modify the guest.
    """
