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
"""Deterministic reference emulator implementing the backend contract."""

import hashlib
import logging
from typing import Callable, Dict, FrozenSet, List, Optional, Set, Tuple

from libravenbench import errors
from libravenbench import logging_utils
from libravenbench.emulation import api
from libravenbench.emulation.minivm import image as image_lib
from libravenbench.emulation.minivm import isa
from libravenbench.raven import values

logging_utils.SetUpLogger(__name__)
logger = logging_utils.GetLogger(__name__)

# Register operand fields read or written, per operand shape.
_REGISTER_FIELDS = {
    'R': 1,
    'RR': 2,
    'RRR': 3,
    'RI': 1,
    'RRI': 2,
    'RM': 2,
    'REL': 0,
    'ABS': 0,
    '': 0,
}


class _Fault(Exception):
  """Guest fault raised while executing one instruction."""

  def __init__(self, reason: api.CrashReason) -> None:
    super().__init__(reason.value)
    self.reason = reason


class _InputExhausted(Exception):
  """An MMIO load found too few input bytes left."""


class _Halt(Exception):
  """The guest executed HALT."""


class MiniVMSession(api.BackendSession):
  """A TargetImage loaded on minivm.

  Attributes:
    image (TargetImage): The loaded target.
  """

  CAPABILITIES = api.Capabilities(has_shadow_stack=True, has_interrupts=True)

  def __init__(self, target: image_lib.TargetImage) -> None:
    """Loads a target.

    Args:
      target (TargetImage): The image to load.

    Raises:
      InvalidImageError: If the image violates its invariants.
    """
    super().__init__()
    target.Validate()
    self.image = target
    self._rom = target.rom
    self._handlers = {
        isa.Opcode.MOVI: self._Movi,
        isa.Opcode.MOV: self._Mov,
        isa.Opcode.LDB: self._Load,
        isa.Opcode.LDH: self._Load,
        isa.Opcode.LDW: self._Load,
        isa.Opcode.STB: self._Store,
        isa.Opcode.STH: self._Store,
        isa.Opcode.STW: self._Store,
        isa.Opcode.ADD: self._Alu,
        isa.Opcode.SUB: self._Alu,
        isa.Opcode.MUL: self._Alu,
        isa.Opcode.AND: self._Alu,
        isa.Opcode.OR: self._Alu,
        isa.Opcode.XOR: self._Alu,
        isa.Opcode.SHL: self._Alu,
        isa.Opcode.SHR: self._Alu,
        isa.Opcode.ADDI: self._Addi,
        isa.Opcode.CMP: self._Cmp,
        isa.Opcode.BEQ: self._Branch,
        isa.Opcode.BNE: self._Branch,
        isa.Opcode.BLT: self._Branch,
        isa.Opcode.BGE: self._Branch,
        isa.Opcode.JMP: self._Jmp,
        isa.Opcode.CALL: self._Call,
        isa.Opcode.CALLR: self._Call,
        isa.Opcode.RET: self._Ret,
        isa.Opcode.JMPR: self._Jmpr,
        isa.Opcode.HALT: self._HaltOp,
    }  # type: Dict[int, Callable[[isa.Instruction], Optional[int]]]
    self._Reset(b'')

  @property
  def capabilities(self) -> api.Capabilities:
    return self.CAPABILITIES

  # State

  def _Reset(self, input_bytes: bytes) -> None:
    """Restores the power-on state for a new input."""
    self._regs = [0] * isa.NUM_REGISTERS
    self._regs[isa.SP] = (isa.RAM_BASE + self.image.ram_size) & isa.WORD_MASK
    self._pc = self.image.entry
    self._zero = False
    self._less = False
    self._ram = bytearray(self.image.ram_size)
    self._shadow = []  # type: List[int]
    self._input = bytes(input_bytes)
    self._cursor = 0
    self._mmio_last = {}  # type: Dict[int, int]
    self._in_handler = False
    self._saved = (0, 0, False, False)  # type: Tuple[int, int, bool, bool]
    self._coverage = set()  # type: Set[int]
    self._block_pending = True
    self._count = 0

  def IsExecutable(self, address: int) -> bool:
    offset = image_lib.RomOffset(address, len(self._rom))
    return offset is not None and offset + isa.INSTRUCTION_SIZE <= len(
        self._rom)

  def _Reg(self, index: int) -> int:
    if index == isa.PC:
      return self._pc
    return self._regs[index]

  def StateDigest(self) -> str:
    digest = hashlib.sha256()
    digest.update(repr((self._regs, self._pc, self._zero, self._less,
                        self._shadow, self._cursor,
                        sorted(self._mmio_last.items()), self._in_handler,
                        self._saved, self._count)).encode('utf-8'))
    digest.update(bytes(self._ram))
    return digest.hexdigest()

  # Memory

  def _RamOffset(self, address: int, size: int) -> Optional[int]:
    offset = address - isa.RAM_BASE
    if 0 <= offset and offset + size <= self.image.ram_size:
      return offset
    return None

  @staticmethod
  def _InMmio(address: int, size: int) -> bool:
    return (isa.MMIO_BASE <= address and
            address + size <= isa.MMIO_BASE + isa.MMIO_SIZE)

  def _RomBytes(self, address: int, size: int) -> Optional[bytes]:
    offset = image_lib.RomOffset(address, len(self._rom))
    if offset is None or offset + size > len(self._rom):
      return None
    return self._rom[offset:offset + size]

  def _GuestRead(self, address: int, size: int) -> int:
    if self._InMmio(address, size):
      if self._cursor + size > len(self._input):
        raise _InputExhausted()
      chunk = self._input[self._cursor:self._cursor + size]
      self._cursor += size
      for index, byte in enumerate(chunk):
        self._mmio_last[address + index] = byte
      return int.from_bytes(chunk, 'little')
    offset = self._RamOffset(address, size)
    if offset is not None:
      return int.from_bytes(self._ram[offset:offset + size], 'little')
    rom = self._RomBytes(address, size)
    if rom is not None:
      return int.from_bytes(rom, 'little')
    raise _Fault(api.CrashReason.UNMAPPED_READ)

  def _GuestWrite(self, address: int, size: int, value: int) -> None:
    if self._InMmio(address, size):
      return
    offset = self._RamOffset(address, size)
    if offset is None:
      raise _Fault(api.CrashReason.UNMAPPED_WRITE)
    mask = (1 << (8 * size)) - 1
    self._ram[offset:offset + size] = (value & mask).to_bytes(size, 'little')

  # Introspection

  def ReadRegister(self, reg_id: int) -> values.Value:
    if not 0 <= reg_id < isa.NUM_REGISTERS:
      raise errors.InvalidAccessError(
          'unknown register {0:d}'.format(reg_id), __name__)
    return values.Value(self._Reg(reg_id), values.UINT64)

  def ReadMemory(self, address: int, size: int) -> values.Value:
    if size not in api.VALID_READ_SIZES:
      raise errors.InvalidAccessError(
          'invalid width {0:d}'.format(size), __name__)
    if self._InMmio(address, size):
      raw = bytes(self._mmio_last.get(address + index, 0)
                  for index in range(size))
    else:
      offset = self._RamOffset(address, size)
      if offset is not None:
        raw = bytes(self._ram[offset:offset + size])
      else:
        rom = self._RomBytes(address, size)
        if rom is None:
          raise errors.InvalidAccessError(
              'unmapped address 0x{0:x}'.format(address), __name__)
        raw = rom
    return values.Value(int.from_bytes(raw, 'little'), values.UINT64)

  def BlockCoverage(self) -> FrozenSet[int]:
    return frozenset(self._coverage)

  # Execution

  def Run(self,
          input_bytes: bytes,
          limits: Optional[api.ExecutionLimits] = None) -> api.ExecutionResult:
    limits = limits or api.ExecutionLimits()
    self._Reset(input_bytes)
    self._running = True
    try:
      termination = self._Loop(limits.max_instructions)
    finally:
      self._running = False
    logger.debug('Run ended with {0:s} after {1:d} instructions'.format(
        termination.kind.value, self._count))
    return api.ExecutionResult(termination, self._count,
                               frozenset(self._coverage))

  def _Loop(self, max_instructions: int) -> api.Termination:
    period = self.image.period
    trace = logger.isEnabledFor(logging.DEBUG)
    while True:
      if self._count >= max_instructions:
        return api.Termination(api.TerminationKind.STEP_LIMIT, pc=self._pc,
                               lr=self._regs[isa.LR])
      if (period and self._count and self._count % period == 0 and
          not self._in_handler):
        self._EnterInterrupt()

      pc = self._pc
      if self._block_pending:
        if self.IsExecutable(pc):
          self._coverage.add(pc)
        self._block_pending = False

      if pc in self._hooks:
        abort = self._FireHooks(pc)
        if abort is not None:
          return api.Termination(api.TerminationKind.ORACLE_ABORT, pc=pc,
                                 lr=self._regs[isa.LR], bug_id=abort)

      raw = self._RomBytes(pc, isa.INSTRUCTION_SIZE)
      if raw is None:
        return self._Crash(api.CrashReason.EXEC_OUTSIDE_ROM)
      instruction = isa.Decode(raw)
      if trace:
        logger.debug('0x{0:08x}: {1:s}'.format(
            pc, isa.Disassemble(instruction, pc)))
      try:
        handler = self._handlers.get(instruction.opcode)
        if handler is None:
          raise _Fault(api.CrashReason.INVALID_OPCODE)
        self._CheckOperands(instruction)
        next_pc = handler(instruction)
      except _Fault as fault:
        return self._Crash(fault.reason)
      except _InputExhausted:
        return api.Termination(api.TerminationKind.INPUT_EXHAUSTED, pc=pc,
                               lr=self._regs[isa.LR])
      except _Halt:
        self._count += 1
        return api.Termination(api.TerminationKind.HALTED_NORMALLY, pc=pc,
                               lr=self._regs[isa.LR])
      self._count += 1
      if next_pc is None:
        self._pc = (pc + isa.INSTRUCTION_SIZE) & isa.WORD_MASK
      else:
        self._pc = next_pc & isa.WORD_MASK
        self._block_pending = True

  def _Crash(self, reason: api.CrashReason) -> api.Termination:
    return api.Termination(
        api.TerminationKind.CRASH,
        reason=reason,
        pc=self._pc,
        lr=self._regs[isa.LR],
        shadow_stack=tuple(self._shadow))

  def _EnterInterrupt(self) -> None:
    assert self.image.handler is not None
    self._shadow.append(self._pc)
    self._saved = (self._pc, self._regs[isa.LR], self._zero, self._less)
    self._regs[isa.LR] = isa.EXC_RETURN
    self._pc = self.image.handler
    self._in_handler = True
    self._block_pending = True

  @staticmethod
  def _CheckOperands(instruction: isa.Instruction) -> None:
    shape = isa.OPERAND_SHAPES[isa.Opcode(instruction.opcode)]
    fields = (instruction.ra, instruction.rb, instruction.rc)
    used = fields[:_REGISTER_FIELDS[shape]]
    if any(register >= isa.NUM_REGISTERS for register in used):
      raise _Fault(api.CrashReason.INVALID_OPCODE)
    if instruction.opcode in isa.WRITES_RA and instruction.ra == isa.PC:
      raise _Fault(api.CrashReason.INVALID_OPCODE)

  # Instruction handlers. Each returns the next pc when control transfers,
  # None to fall through.

  def _Movi(self, instruction: isa.Instruction) -> Optional[int]:
    self._regs[instruction.ra] = instruction.imm
    return None

  def _Mov(self, instruction: isa.Instruction) -> Optional[int]:
    self._regs[instruction.ra] = self._Reg(instruction.rb)
    return None

  def _Load(self, instruction: isa.Instruction) -> Optional[int]:
    width = isa.ACCESS_WIDTHS[isa.Opcode(instruction.opcode)]
    address = (self._Reg(instruction.rb) + instruction.imm) & isa.WORD_MASK
    self._regs[instruction.ra] = self._GuestRead(address, width)
    return None

  def _Store(self, instruction: isa.Instruction) -> Optional[int]:
    width = isa.ACCESS_WIDTHS[isa.Opcode(instruction.opcode)]
    address = (self._Reg(instruction.rb) + instruction.imm) & isa.WORD_MASK
    self._GuestWrite(address, width, self._Reg(instruction.ra))
    return None

  def _Alu(self, instruction: isa.Instruction) -> Optional[int]:
    left = self._Reg(instruction.rb)
    right = self._Reg(instruction.rc)
    opcode = instruction.opcode
    if opcode == isa.Opcode.ADD:
      result = left + right
    elif opcode == isa.Opcode.SUB:
      result = left - right
    elif opcode == isa.Opcode.MUL:
      result = left * right
    elif opcode == isa.Opcode.AND:
      result = left & right
    elif opcode == isa.Opcode.OR:
      result = left | right
    elif opcode == isa.Opcode.XOR:
      result = left ^ right
    elif opcode == isa.Opcode.SHL:
      result = left << right if right < 32 else 0
    else:
      result = left >> right if right < 32 else 0
    self._regs[instruction.ra] = result & isa.WORD_MASK
    return None

  def _Addi(self, instruction: isa.Instruction) -> Optional[int]:
    self._regs[instruction.ra] = (self._Reg(instruction.rb) +
                                  instruction.imm) & isa.WORD_MASK
    return None

  def _Cmp(self, instruction: isa.Instruction) -> Optional[int]:
    left = self._Reg(instruction.ra)
    right = self._Reg(instruction.rb)
    self._zero = left == right
    self._less = values.INT32.Normalize(left) < values.INT32.Normalize(right)
    return None

  def _Branch(self, instruction: isa.Instruction) -> Optional[int]:
    opcode = instruction.opcode
    if opcode == isa.Opcode.BEQ:
      taken = self._zero
    elif opcode == isa.Opcode.BNE:
      taken = not self._zero
    elif opcode == isa.Opcode.BLT:
      taken = self._less
    else:
      taken = not self._less
    if taken:
      return self._pc + instruction.imm
    return None

  def _Jmp(self, instruction: isa.Instruction) -> Optional[int]:
    return instruction.imm

  def _Call(self, instruction: isa.Instruction) -> Optional[int]:
    if instruction.opcode == isa.Opcode.CALL:
      target = instruction.imm
    else:
      target = self._Reg(instruction.ra)
    return_address = (self._pc + isa.INSTRUCTION_SIZE) & isa.WORD_MASK
    self._regs[isa.LR] = return_address
    self._shadow.append(return_address)
    return target

  def _Ret(self, instruction: isa.Instruction) -> Optional[int]:
    del instruction  # Unused.
    if not self._shadow:
      raise _Fault(api.CrashReason.STACK_UNDERFLOW)
    if self._in_handler and self._regs[isa.LR] == isa.EXC_RETURN:
      self._shadow.pop()
      resume, self._regs[isa.LR], self._zero, self._less = self._saved
      self._in_handler = False
      return resume
    self._shadow.pop()
    return self._regs[isa.LR]

  def _Jmpr(self, instruction: isa.Instruction) -> Optional[int]:
    return self._Reg(instruction.ra)

  def _HaltOp(self, instruction: isa.Instruction) -> Optional[int]:
    del instruction  # Unused.
    raise _Halt()


def LoadTarget(target: image_lib.TargetImage) -> MiniVMSession:
  """Loads a target image into a fresh minivm session.

  Args:
    target (TargetImage): The image.

  Returns:
    MiniVMSession: A session with power-on state: registers zero except pc
        at the entry and sp at the top of RAM.

  Raises:
    InvalidImageError: If the image is malformed.
  """
  return MiniVMSession(target)
