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
"""minivm instruction set, memory map and instruction codec.

Every instruction is 8 bytes: opcode, three register operand bytes (ra, rb,
rc) and a little-endian 32-bit immediate.
"""

import dataclasses
import enum
import struct
from typing import Dict

INSTRUCTION_SIZE = 8
_INSTRUCTION = struct.Struct('<BBBBI')

WORD_MASK = 0xFFFFFFFF

NUM_REGISTERS = 16
SP = 13
LR = 14
PC = 15
REGISTER_ALIASES = {'sp': SP, 'lr': LR, 'pc': PC}

# Memory map.
ROM_BASE = 0x00000000
ROM_MIRROR_BASE = 0x08000000
RAM_BASE = 0x20000000
MAX_RAM_SIZE = 0x10000000
MMIO_BASE = 0x40000000
MMIO_SIZE = 0x1000

# lr value marking a return from the interrupt handler.
EXC_RETURN = 0xFFFFFFF0
NO_HANDLER = 0xFFFFFFFF


class Opcode(enum.IntEnum):
  """minivm opcodes."""
  MOVI = 0x01
  MOV = 0x02
  LDB = 0x03
  LDH = 0x04
  LDW = 0x05
  STB = 0x06
  STH = 0x07
  STW = 0x08
  ADD = 0x09
  SUB = 0x0A
  MUL = 0x0B
  AND = 0x0C
  OR = 0x0D
  XOR = 0x0E
  SHL = 0x0F
  SHR = 0x10
  CMP = 0x11
  BEQ = 0x12
  BNE = 0x13
  BLT = 0x14
  BGE = 0x15
  JMP = 0x16
  CALL = 0x17
  CALLR = 0x18
  RET = 0x19
  JMPR = 0x1A
  HALT = 0x1B
  ADDI = 0x1C


# Operand shapes, used by the assembler and disassembler:
#   R   one register (ra)            RR   ra, rb
#   RRR ra, rb, rc                   RI   ra, imm
#   RRI ra, rb, imm                  RM   ra, [rb+imm]
#   REL pc-relative target (imm)     ABS  absolute target (imm)
#   ''  no operands
OPERAND_SHAPES = {
    Opcode.MOVI: 'RI',
    Opcode.MOV: 'RR',
    Opcode.LDB: 'RM',
    Opcode.LDH: 'RM',
    Opcode.LDW: 'RM',
    Opcode.STB: 'RM',
    Opcode.STH: 'RM',
    Opcode.STW: 'RM',
    Opcode.ADD: 'RRR',
    Opcode.SUB: 'RRR',
    Opcode.MUL: 'RRR',
    Opcode.AND: 'RRR',
    Opcode.OR: 'RRR',
    Opcode.XOR: 'RRR',
    Opcode.SHL: 'RRR',
    Opcode.SHR: 'RRR',
    Opcode.CMP: 'RR',
    Opcode.BEQ: 'REL',
    Opcode.BNE: 'REL',
    Opcode.BLT: 'REL',
    Opcode.BGE: 'REL',
    Opcode.JMP: 'ABS',
    Opcode.CALL: 'ABS',
    Opcode.CALLR: 'R',
    Opcode.RET: '',
    Opcode.JMPR: 'R',
    Opcode.HALT: '',
    Opcode.ADDI: 'RRI',
}  # type: Dict[Opcode, str]

# Opcodes whose ra operand is written.
WRITES_RA = frozenset([
    Opcode.MOVI, Opcode.MOV, Opcode.LDB, Opcode.LDH, Opcode.LDW, Opcode.ADD,
    Opcode.SUB, Opcode.MUL, Opcode.AND, Opcode.OR, Opcode.XOR, Opcode.SHL,
    Opcode.SHR, Opcode.ADDI
])

ACCESS_WIDTHS = {
    Opcode.LDB: 1,
    Opcode.LDH: 2,
    Opcode.LDW: 4,
    Opcode.STB: 1,
    Opcode.STH: 2,
    Opcode.STW: 4,
}


@dataclasses.dataclass(frozen=True)
class Instruction:
  """A decoded instruction.

  Attributes:
    opcode (int): Raw opcode byte.
    ra (int): First register operand byte.
    rb (int): Second register operand byte.
    rc (int): Third register operand byte.
    imm (int): Immediate, unsigned 32-bit.
  """
  opcode: int
  ra: int = 0
  rb: int = 0
  rc: int = 0
  imm: int = 0

  @property
  def signed_imm(self) -> int:
    """The immediate read as a two's complement 32-bit value."""
    return self.imm - (1 << 32) if self.imm & 0x80000000 else self.imm

  def Encode(self) -> bytes:
    """Returns the 8-byte encoding."""
    return _INSTRUCTION.pack(self.opcode, self.ra, self.rb, self.rc,
                             self.imm & WORD_MASK)


def Decode(raw: bytes) -> Instruction:
  """Decodes 8 bytes into an Instruction.

  Args:
    raw (bytes): Exactly INSTRUCTION_SIZE bytes.

  Returns:
    Instruction: The decoded fields. The opcode is not validated.
  """
  return Instruction(*_INSTRUCTION.unpack(raw))


def RegisterName(index: int) -> str:
  """Returns the assembler spelling of a register index."""
  for alias, number in REGISTER_ALIASES.items():
    if number == index:
      return alias
  return 'r{0:d}'.format(index)


def _Offset(value: int) -> str:
  if value < 0:
    return '-0x{0:x}'.format(-value)
  return '+0x{0:x}'.format(value)


def Disassemble(instruction: Instruction, address: int) -> str:
  """Renders an instruction as assembler text.

  Args:
    instruction (Instruction): The decoded instruction.
    address (int): Address of the instruction, for branch targets.

  Returns:
    str: e.g. 'LDW r1, [r10+0x0]', or '.invalid 0x..' for unknown opcodes.
  """
  try:
    opcode = Opcode(instruction.opcode)
  except ValueError:
    return '.invalid 0x{0:02x}'.format(instruction.opcode)
  shape = OPERAND_SHAPES[opcode]
  ra = RegisterName(instruction.ra)
  rb = RegisterName(instruction.rb)
  rc = RegisterName(instruction.rc)
  operands = ''
  if shape == 'R':
    operands = ra
  elif shape == 'RR':
    operands = '{0:s}, {1:s}'.format(ra, rb)
  elif shape == 'RRR':
    operands = '{0:s}, {1:s}, {2:s}'.format(ra, rb, rc)
  elif shape == 'RI':
    operands = '{0:s}, 0x{1:x}'.format(ra, instruction.imm)
  elif shape == 'RRI':
    operands = '{0:s}, {1:s}, {2:d}'.format(ra, rb, instruction.signed_imm)
  elif shape == 'RM':
    operands = '{0:s}, [{1:s}{2:s}]'.format(ra, rb,
                                           _Offset(instruction.signed_imm))
  elif shape == 'REL':
    operands = '0x{0:x}'.format((address + instruction.imm) & WORD_MASK)
  elif shape == 'ABS':
    operands = '0x{0:x}'.format(instruction.imm)
  if not operands:
    return opcode.name
  return '{0:s} {1:s}'.format(opcode.name, operands)
