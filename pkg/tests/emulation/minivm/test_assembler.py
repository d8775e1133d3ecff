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
"""Tests for the minivm module - isa.py and assembler.py"""

import os
import tempfile
import typing
import unittest

from libravenbench import errors
from libravenbench.emulation.minivm import assembler
from libravenbench.emulation.minivm import isa


class IsaTest(unittest.TestCase):
  """Test instruction encoding and disassembly."""

  @typing.no_type_check
  def testEncodeDecode(self):
    """Test the 8-byte instruction layout."""
    instruction = isa.Instruction(isa.Opcode.LDW, 1, 10, 0, 0xFFFFFFFC)
    raw = instruction.Encode()
    self.assertEqual(bytes.fromhex('05010a00fcffffff'), raw)
    self.assertEqual(instruction, isa.Decode(raw))
    self.assertEqual(-4, isa.Decode(raw).signed_imm)

  @typing.no_type_check
  def testDisassemble(self):
    """Test the assembler spelling of each operand shape."""
    cases = [
        (isa.Instruction(isa.Opcode.LDW, 1, 10), 'LDW r1, [r10+0x0]'),
        (isa.Instruction(isa.Opcode.STB, 2, isa.SP, imm=0xFFFFFFFC),
         'STB r2, [sp-0x4]'),
        (isa.Instruction(isa.Opcode.MOVI, 3, imm=0x41), 'MOVI r3, 0x41'),
        (isa.Instruction(isa.Opcode.ADDI, 1, 1, imm=0xFFFFFFFF),
         'ADDI r1, r1, -1'),
        (isa.Instruction(isa.Opcode.ADD, 1, 2, 3), 'ADD r1, r2, r3'),
        (isa.Instruction(isa.Opcode.CMP, 1, 2), 'CMP r1, r2'),
        (isa.Instruction(isa.Opcode.CALLR, isa.LR), 'CALLR lr'),
        (isa.Instruction(isa.Opcode.CALL, imm=0x40), 'CALL 0x40'),
        (isa.Instruction(isa.Opcode.RET), 'RET'),
        (isa.Instruction(0xEE), '.invalid 0xee'),
    ]
    for instruction, text in cases:
      self.assertEqual(text, isa.Disassemble(instruction, 0))

  @typing.no_type_check
  def testDisassembleRelative(self):
    """Test that branch targets are resolved from the address."""
    backwards = isa.Instruction(isa.Opcode.BNE, imm=0xFFFFFFF8)
    self.assertEqual('BNE 0x0', isa.Disassemble(backwards, 8))
    forwards = isa.Instruction(isa.Opcode.BEQ, imm=0x10)
    self.assertEqual('BEQ 0x28', isa.Disassemble(forwards, 0x18))


class AssemblerTest(unittest.TestCase):
  """Test the two-pass assembler."""

  @typing.no_type_check
  def testAssembleListing(self):
    """Test emitted bytes, label resolution and listing lines."""
    program = assembler.Assemble(
        'start: movi r1, 0x41   ; first\n'
        '  cmp r1, r1\n'
        '  beq done\n'
        '  halt\n'
        'done:\n'
        '  bne start\n')
    self.assertEqual({'start': 0, 'done': 0x20}, program.symbols)
    self.assertEqual(0x28, len(program.image.rom))
    self.assertEqual(
        ['00000000  0101000041000000  MOVI r1, 0x41',
         '00000008  1101010000000000  CMP r1, r1',
         '00000010  1200000010000000  BEQ 0x20',
         '00000018  1b00000000000000  HALT',
         '00000020  13000000e0ffffff  BNE 0x0'],
        [line.Format() for line in program.listing])

  @typing.no_type_check
  def testDirectives(self):
    """Test .equ, .org, .word and the image settings."""
    program = assembler.Assemble(
        '.equ BASE, 0x20000000\n'
        '.equ SLOT, BASE + 4\n'
        '.entry main\n'
        '.handler isr\n'
        '.period 100\n'
        '.ramsize 0x100\n'
        'table: .word 1, SLOT - 1\n'
        '.org 0x20\n'
        'main: movi r1, SLOT\n'
        '  halt\n'
        'isr: ret\n')
    image = program.image
    self.assertEqual(0x20000004, program.symbols['SLOT'])
    self.assertEqual(0x20, image.entry)
    self.assertEqual(0x30, image.handler)
    self.assertEqual(100, image.period)
    self.assertEqual(0x100, image.ram_size)
    self.assertEqual(b'\x01\x00\x00\x00\x03\x00\x00\x20', image.rom[:8])
    self.assertEqual(bytes(0x18), image.rom[8:0x20])
    self.assertEqual('.word 1, SLOT - 1', program.listing[0].text)
    self.assertEqual(0x38, len(image.rom))

  @typing.no_type_check
  def testMemoryOperands(self):
    """Test register aliases and signed offsets."""
    program = assembler.Assemble(
        '.equ OFF, 8\n'
        'ldw r1, [sp-4]\n'
        'stb r2, [r3 + OFF]\n'
        'ldh lr, [r4]\n'
        'halt\n')
    self.assertEqual(['LDW r1, [sp-0x4]', 'STB r2, [r3+0x8]',
                      'LDH lr, [r4+0x0]', 'HALT'],
                     [line.text for line in program.listing])

  @typing.no_type_check
  def testErrors(self):
    """Test diagnostics and their line numbers."""
    cases = [
        ('nop', 1, 'unknown mnemonic nop'),
        ('halt\nmovi r1, missing', 2, 'undefined symbol missing'),
        ('a:\na: halt', 2, 'duplicate symbol a'),
        ('mov r16, r1', 1, 'invalid register r16'),
        ('add r1, r2', 1, 'ADD expects 3 operand(s), got 2'),
        ('.org 0x10\nhalt\n.org 0x8', 3, 'moves backwards'),
        ('movi r1, 0x100000000', 1, 'does not fit in 32 bits'),
        ('ldw r1, r2', 1, 'invalid memory operand r2'),
        ('.entry 0\n.entry 0\nhalt', 2, 'duplicate .entry'),
        ('.equ 1x, 2', 1, '.equ expects NAME, EXPR'),
        ('movi r1, 1 +', 1, 'malformed expression'),
    ]
    for source, line, message in cases:
      with self.assertRaises(errors.AssemblerError) as context:
        assembler.Assemble(source)
      self.assertEqual(line, context.exception.line, source)
      self.assertIn(message, context.exception.message)

  @typing.no_type_check
  def testInvalidImage(self):
    """Test that sources producing invalid images are rejected."""
    for source in ('', '; nothing\n', '.entry 0x100\nhalt',
                   '.period 10\nhalt'):
      with self.assertRaises(errors.InvalidImageError):
        assembler.Assemble(source)

  @typing.no_type_check
  def testAssembleFile(self):
    """Test assembling a source file."""
    with tempfile.TemporaryDirectory() as tmp_dir:
      path = os.path.join(tmp_dir, 'halt.asm')
      with open(path, 'w', encoding='utf-8') as source_file:
        source_file.write('halt\n')
      program = assembler.AssembleFile(path)
    self.assertEqual(isa.Instruction(isa.Opcode.HALT).Encode(),
                     program.image.rom)


if __name__ == '__main__':
  unittest.main()
