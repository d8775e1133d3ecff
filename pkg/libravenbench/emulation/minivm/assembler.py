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
"""Two-pass assembler for minivm.

One statement per line, ``;`` starts a comment. A line may start with
``label:``. Operands are registers (r0-r15, sp, lr, pc), immediates written
as ``symbol +/- constant`` expressions, and memory operands ``[rX]``,
``[rX+imm]`` or ``[rX-imm]``. Directives:

  .entry EXPR      entry address (default 0)
  .handler EXPR    timer interrupt handler
  .period N        instructions between timer interrupts
  .ramsize N       RAM size in bytes
  .org N           continue at ROM offset N, zero padding the gap
  .word EXPR, ...  little-endian 32-bit words
  .equ NAME, EXPR  define a constant
"""

import dataclasses
import re
from typing import Dict, List, Optional, Tuple

from libravenbench import errors
from libravenbench import logging_utils
from libravenbench.emulation.minivm import image as image_lib
from libravenbench.emulation.minivm import isa

logging_utils.SetUpLogger(__name__)
logger = logging_utils.GetLogger(__name__)

_LABEL_RE = re.compile(r'^([A-Za-z_.][\w.]*)\s*:\s*')
_SYMBOL_RE = re.compile(r'^[A-Za-z_.][\w.]*$')
_TERM_RE = re.compile(r'\s*([+-]?)\s*([^+\-\s]+)\s*')
_MEMORY_RE = re.compile(r'^\[\s*(\w+)\s*(?:([+-])\s*(.+?))?\s*\]$')
_OPERAND_SPLIT_RE = re.compile(r',(?![^\[]*\])')


@dataclasses.dataclass(frozen=True)
class ListingLine:
  """One line of an assembly listing.

  Attributes:
    address (int): ROM offset of the emitted bytes.
    data (bytes): The emitted bytes.
    text (str): Disassembly, or the directive for data.
  """
  address: int
  data: bytes
  text: str

  def Format(self) -> str:
    return '{0:08x}  {1:s}  {2:s}'.format(self.address, self.data.hex(),
                                          self.text)


@dataclasses.dataclass(frozen=True)
class AssembledProgram:
  """Assembler output.

  Attributes:
    image (TargetImage): The built image.
    symbols (Dict[str, int]): Labels and constants.
    listing (List[ListingLine]): Emitted bytes in address order.
  """
  image: image_lib.TargetImage
  symbols: Dict[str, int]
  listing: List[ListingLine]


@dataclasses.dataclass
class _Statement:
  line: int
  address: int
  mnemonic: str
  operands: List[str]


class Assembler:
  """Assembles one minivm source."""

  def __init__(self, source: str) -> None:
    self.source = source
    self.symbols = {}  # type: Dict[str, int]
    self._statements = []  # type: List[_Statement]
    self._settings = {}  # type: Dict[str, Tuple[int, str]]

  # Expressions

  def _Evaluate(self, text: str, line: int) -> int:
    """Evaluates 'term (+|- term)*' where a term is a number or symbol."""
    text = text.strip()
    if not text:
      raise errors.AssemblerError('missing expression', __name__, line)
    total = 0
    position = 0
    first = True
    while position < len(text):
      match = _TERM_RE.match(text, position)
      if not match or (not first and not match.group(1)):
        raise errors.AssemblerError(
            'malformed expression {0:s}'.format(text), __name__, line)
      sign = -1 if match.group(1) == '-' else 1
      total += sign * self._Term(match.group(2), line)
      position = match.end()
      first = False
    return total

  def _Term(self, term: str, line: int) -> int:
    try:
      return int(term, 0)
    except ValueError:
      pass
    if term in self.symbols:
      return self.symbols[term]
    raise errors.AssemblerError(
        'undefined symbol {0:s}'.format(term), __name__, line)

  @staticmethod
  def _Register(text: str, line: int) -> int:
    name = text.strip().lower()
    if name in isa.REGISTER_ALIASES:
      return isa.REGISTER_ALIASES[name]
    match = re.match(r'^r(\d+)$', name)
    if match and int(match.group(1)) < isa.NUM_REGISTERS:
      return int(match.group(1))
    raise errors.AssemblerError(
        'invalid register {0:s}'.format(text.strip()), __name__, line)

  @staticmethod
  def _Immediate(value: int, line: int) -> int:
    if not -(1 << 31) <= value <= isa.WORD_MASK:
      raise errors.AssemblerError(
          'immediate 0x{0:x} does not fit in 32 bits'.format(value), __name__,
          line)
    return value & isa.WORD_MASK

  # Passes

  def _FirstPass(self) -> None:
    """Assigns addresses to labels and records statements."""
    location = 0
    for number, raw_line in enumerate(self.source.splitlines(), start=1):
      text = raw_line.split(';', 1)[0].strip()
      match = _LABEL_RE.match(text)
      while match:
        label = match.group(1)
        if label in self.symbols:
          raise errors.AssemblerError(
              'duplicate symbol {0:s}'.format(label), __name__, number)
        self.symbols[label] = location
        text = text[match.end():]
        match = _LABEL_RE.match(text)
      if not text:
        continue
      parts = text.split(None, 1)
      mnemonic = parts[0].lower()
      operands = []  # type: List[str]
      if len(parts) > 1:
        operands = [op.strip() for op in _OPERAND_SPLIT_RE.split(parts[1])]
      if mnemonic == '.equ':
        if len(operands) != 2 or not _SYMBOL_RE.match(operands[0]):
          raise errors.AssemblerError('.equ expects NAME, EXPR', __name__,
                                      number)
        if operands[0] in self.symbols:
          raise errors.AssemblerError(
              'duplicate symbol {0:s}'.format(operands[0]), __name__, number)
        self.symbols[operands[0]] = self._Evaluate(operands[1], number)
        continue
      if mnemonic == '.org':
        target = self._Evaluate(' '.join(operands), number)
        if target < location:
          raise errors.AssemblerError(
              '.org 0x{0:x} moves backwards from 0x{1:x}'.format(
                  target, location), __name__, number)
        location = target
        continue
      if mnemonic in ('.entry', '.handler', '.period', '.ramsize'):
        if mnemonic in self._settings:
          raise errors.AssemblerError(
              'duplicate {0:s}'.format(mnemonic), __name__, number)
        self._settings[mnemonic] = (number, ' '.join(operands))
        continue
      self._statements.append(_Statement(number, location, mnemonic,
                                         operands))
      if mnemonic == '.word':
        location += 4 * len(operands)
      else:
        location += isa.INSTRUCTION_SIZE

  def _Encode(self, statement: _Statement) -> isa.Instruction:
    line = statement.line
    try:
      opcode = isa.Opcode[statement.mnemonic.upper()]
    except KeyError:
      raise errors.AssemblerError(
          'unknown mnemonic {0:s}'.format(statement.mnemonic), __name__,
          line) from None
    shape = isa.OPERAND_SHAPES[opcode]
    operands = statement.operands
    expected = {'': 0, 'R': 1, 'RR': 2, 'RRR': 3, 'RI': 2, 'RRI': 3, 'RM': 2,
                'REL': 1, 'ABS': 1}[shape]
    if len(operands) != expected:
      raise errors.AssemblerError(
          '{0:s} expects {1:d} operand(s), got {2:d}'.format(
              opcode.name, expected, len(operands)), __name__, line)
    if shape in ('', 'R', 'RR', 'RRR'):
      registers = [self._Register(op, line) for op in operands]
      registers += [0] * (3 - len(registers))
      return isa.Instruction(opcode, *registers)
    if shape == 'RI':
      return isa.Instruction(
          opcode, self._Register(operands[0], line),
          imm=self._Immediate(self._Evaluate(operands[1], line), line))
    if shape == 'RRI':
      return isa.Instruction(
          opcode, self._Register(operands[0], line),
          self._Register(operands[1], line),
          imm=self._Immediate(self._Evaluate(operands[2], line), line))
    if shape == 'RM':
      match = _MEMORY_RE.match(operands[1])
      if not match:
        raise errors.AssemblerError(
            'invalid memory operand {0:s}'.format(operands[1]), __name__, line)
      offset = 0
      if match.group(3):
        offset = self._Evaluate(match.group(3), line)
        if match.group(2) == '-':
          offset = -offset
      return isa.Instruction(
          opcode, self._Register(operands[0], line),
          self._Register(match.group(1), line),
          imm=self._Immediate(offset, line))
    target = self._Evaluate(operands[0], line)
    if shape == 'REL':
      return isa.Instruction(
          opcode, imm=(target - statement.address) & isa.WORD_MASK)
    return isa.Instruction(opcode, imm=self._Immediate(target, line))

  def _Setting(self, name: str) -> Optional[int]:
    if name not in self._settings:
      return None
    line, text = self._settings[name]
    return self._Evaluate(text, line)

  def Assemble(self) -> AssembledProgram:
    """Runs both passes.

    Returns:
      AssembledProgram: The image, symbols and listing.

    Raises:
      AssemblerError: On any source error, with its line number.
      InvalidImageError: If the resulting image is invalid.
    """
    self._FirstPass()
    rom = bytearray()
    listing = []  # type: List[ListingLine]
    for statement in self._statements:
      if len(rom) < statement.address:
        rom.extend(bytes(statement.address - len(rom)))
      if statement.mnemonic == '.word':
        data = b''.join(
            self._Immediate(self._Evaluate(op, statement.line),
                            statement.line).to_bytes(4, 'little')
            for op in statement.operands)
        text = '.word ' + ', '.join(statement.operands)
      else:
        instruction = self._Encode(statement)
        data = instruction.Encode()
        text = isa.Disassemble(instruction, statement.address)
      rom.extend(data)
      listing.append(ListingLine(statement.address, data, text))

    entry = self._Setting('.entry')
    ram_size = self._Setting('.ramsize')
    target = image_lib.TargetImage(
        rom=bytes(rom),
        entry=isa.ROM_BASE if entry is None else entry,
        handler=self._Setting('.handler'),
        period=self._Setting('.period'),
        ram_size=image_lib.DEFAULT_RAM_SIZE if ram_size is None else ram_size)
    target.Validate()
    logger.debug('Assembled {0:d} bytes, {1:d} symbols'.format(
        len(rom), len(self.symbols)))
    return AssembledProgram(target, dict(self.symbols), listing)


def Assemble(source: str) -> AssembledProgram:
  """Assembles minivm source text.

  Args:
    source (str): The assembly source.

  Returns:
    AssembledProgram: The image, symbols and listing.

  Raises:
    AssemblerError: On any source error.
  """
  return Assembler(source).Assemble()


def AssembleFile(path: str) -> AssembledProgram:
  """Assembles a source file."""
  with open(path, 'r', encoding='utf-8') as source_file:
    return Assemble(source_file.read())
