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
"""Tests for the raven module - interpreter.py and values.py"""

import random
import typing
import unittest

from libravenbench import errors
from libravenbench.raven import interpreter
from libravenbench.raven import values
from tests import bench_mocks


def _Run(body, globals_text='', machine=None, step_budget=None):
  """Parses a one-hook Raven and runs its hook once."""
  program = bench_mocks.Parse(bench_mocks.HookBody(body, globals_text))
  machine = machine or bench_mocks.FakeMachine()
  state = interpreter.GlobalsState.ForProgram(program)
  kwargs = {}
  if step_budget is not None:
    kwargs['step_budget'] = step_budget
  result = interpreter.EvalHook(program, 'hook', machine.Binding(), state,
                                **kwargs)
  return result, state, machine


class ValuesTest(unittest.TestCase):
  """Test the integer value model."""

  @typing.no_type_check
  def testNormalize(self):
    """Test wrapping into signed and unsigned ranges."""
    self.assertEqual(-1, values.INT8.Normalize(0xFF))
    self.assertEqual(0xFF, values.UINT8.Normalize(-1))
    self.assertEqual(0, values.UINT32.Normalize(1 << 32))
    self.assertEqual(0xFFFFFFFFFFFFFFFF, values.Value.Of(-1, values.INT64).bits)

  @typing.no_type_check
  def testCommonType(self):
    """Test the usual arithmetic conversions."""
    self.assertEqual(values.INT32, values.CommonType(values.UINT8,
                                                     values.INT16))
    self.assertEqual(values.UINT32, values.CommonType(values.INT32,
                                                      values.UINT32))
    self.assertEqual(values.INT64, values.CommonType(values.UINT32,
                                                     values.INT64))
    self.assertEqual(values.UINT64, values.CommonType(values.INT64,
                                                      values.UINT64))


class InterpreterTest(unittest.TestCase):
  """Test evaluation of introspection functions."""

  @typing.no_type_check
  def testMF04Reached(self):
    """Test the type confusion Raven on a well-typed device."""
    program = bench_mocks.Parse(bench_mocks.MF04_SOURCE)
    machine = bench_mocks.FakeMachine({0: 0x20000100},
                                      {0x20000104: 0x0800f7e4})
    result = interpreter.EvalHook(
        program, 'BUG_MF04', machine.Binding(),
        interpreter.GlobalsState.ForProgram(program))
    self.assertEqual([('reached', 'MF04')], result.reports)
    self.assertEqual([('reached', 'MF04')], machine.reports)

  @typing.no_type_check
  def testMF04Triggered(self):
    """Test the type confusion Raven on a confused device."""
    program = bench_mocks.Parse(bench_mocks.MF04_SOURCE)
    machine = bench_mocks.FakeMachine({0: 0x20000100},
                                      {0x20000104: 0xDEADBEEF})
    result = interpreter.EvalHook(
        program, 'BUG_MF04', machine.Binding(),
        interpreter.GlobalsState.ForProgram(program))
    self.assertEqual([('reached', 'MF04'), ('triggered', 'MF04')],
                     result.reports)
    self.assertEqual(result.reports, machine.reports)

  @typing.no_type_check
  def testStepBudget(self):
    """Test that a runaway hook keeps its reports and fails."""
    program = bench_mocks.Parse(bench_mocks.RUNAWAY_SOURCE)
    machine = bench_mocks.FakeMachine()
    with self.assertRaises(errors.RavenRuntimeError) as context:
      interpreter.EvalHook(program, 'runaway', machine.Binding(),
                           interpreter.GlobalsState.ForProgram(program),
                           step_budget=10000)
    self.assertEqual('step_budget', context.exception.kind)
    self.assertIn('step budget exceeded', context.exception.message)
    self.assertEqual([('reached', 'X')], machine.reports)

  @typing.no_type_check
  def testRuntimeErrorDiscardsGlobals(self):
    """Test that a failing hook leaves the globals untouched."""
    program = bench_mocks.Parse(bench_mocks.HookBody(
        'n = 5; report_reached("D"); n = n / zero;',
        'uint32_t n = 1;\nuint32_t zero;'))
    state = interpreter.GlobalsState.ForProgram(program)
    machine = bench_mocks.FakeMachine()
    with self.assertRaises(errors.RavenRuntimeError) as context:
      interpreter.EvalHook(program, 'hook', machine.Binding(), state)
    self.assertEqual('division_by_zero', context.exception.kind)
    self.assertEqual(1, state.Get('n').value)
    self.assertEqual([('reached', 'D')], machine.reports)

  @typing.no_type_check
  def testInvalidReads(self):
    """Test unmapped reads, bad widths and unknown registers."""
    for body in ('frb_mem_read(0x1000, 4);', 'frb_mem_read(0, 3);',
                 'frb_reg_state(99);'):
      with self.assertRaises(errors.RavenRuntimeError) as context:
        _Run(body)
      self.assertEqual('invalid_access', context.exception.kind)

  @typing.no_type_check
  def testGlobalsPersistAcrossHooks(self):
    """Test that globals carry over between calls on one state."""
    program = bench_mocks.Parse(bench_mocks.HookBody(
        'uses++;', 'static uint32_t uses = 0;'))
    state = interpreter.GlobalsState.ForProgram(program)
    machine = bench_mocks.FakeMachine()
    for _ in range(3):
      interpreter.EvalHook(program, 'hook', machine.Binding(), state)
    self.assertEqual(3, state.Get('uses').value)
    self.assertEqual(0, interpreter.GlobalsState.ForProgram(program).Get(
        'uses').value)

  @typing.no_type_check
  def testCSemantics(self):
    """Test division, shifts, promotion and comparisons."""
    cases = [
        ('int32_t', 'r = -7 / 2;', -3),
        ('int32_t', 'r = -7 % 2;', -1),
        ('uint32_t', 'uint32_t x = 1; r = x << 32;', 0),
        ('int32_t', 'int32_t x = -8; r = x >> 40;', -1),
        ('int32_t', 'uint8_t a = 200; uint8_t b = 100; r = a + b;', 300),
        ('int32_t', 'r = 0xFFFFFFFF > -1;', 0),
        ('int32_t', 'r = (int64_t)0xFFFFFFFF > -1;', 1),
        ('uint8_t', 'r = 0x1FF;', 0xFF),
        ('int8_t', 'r = 0x80;', -128),
        ('int32_t', 'r = 3 > 2 ? 10 : 20;', 10),
        ('int32_t', 'r = !5 + (2 && 0) + (0 || 7);', 1),
        ('uint16_t', 'r = ~0;', 0xFFFF),
        ('int32_t', 'int32_t i; for (i = 0; i < 10; i++) { if (i == 2) '
                    'continue; if (i == 5) break; r += i; }', 8),
        ('int32_t', 'r = helper() + 1;', 8),
    ]
    for type_name, body, expected in cases:
      globals_text = '{0:s} r;\nint32_t helper() {{ return 7; }}'.format(
          type_name)
      _, state, _ = _Run(body, globals_text)
      self.assertEqual(expected, state.Get('r').value, body)

  @typing.no_type_check
  def testArrayIndexOutOfRange(self):
    """Test that array indexes are bounds checked."""
    _, state, _ = _Run('r = t[0] + t[1] + t[2];',
                       'uint8_t t[3] = {4, 5};\nint32_t r;')
    self.assertEqual(9, state.Get('r').value)
    with self.assertRaises(errors.RavenRuntimeError) as context:
      _Run('t[3] = 1;', 'uint8_t t[3];')
    self.assertEqual('index', context.exception.kind)

  @typing.no_type_check
  def testCallDepth(self):
    """Test that unbounded recursion is stopped."""
    with self.assertRaises(errors.RavenRuntimeError) as context:
      _Run('f();', 'void f() { f(); }')
    self.assertEqual('call_depth', context.exception.kind)

  @typing.no_type_check
  def testTriggeredWithoutReached(self):
    """Test that a trigger report needs no prior reached report."""
    result, _, _ = _Run('report_detected_triggered("T");')
    self.assertEqual([('triggered', 'T')], result.reports)

  @typing.no_type_check
  def testWrappingArithmetic(self):
    """Test +, - and * against big-integer arithmetic for every type."""
    rng = random.Random(1234)
    for int_type in (values.UINT8, values.UINT16, values.UINT32,
                     values.UINT64, values.INT8, values.INT16, values.INT32,
                     values.INT64):
      for op, oracle in (('+', lambda a, b: a + b),
                         ('-', lambda a, b: a - b),
                         ('*', lambda a, b: a * b)):
        for _ in range(25):
          a = int_type.Normalize(rng.getrandbits(int_type.width))
          b = int_type.Normalize(rng.getrandbits(int_type.width))
          globals_text = (
              '{0:s} a = 0x{1:x};\n{0:s} b = 0x{2:x};\n{0:s} r;').format(
                  int_type.name, a & int_type.mask, b & int_type.mask)
          _, state, _ = _Run('r = a {0:s} b;'.format(op), globals_text)
          self.assertEqual(int_type.Normalize(oracle(a, b)),
                           state.Get('r').value,
                           '{0:s} {1:d} {2:s} {3:d}'.format(
                               int_type.name, a, op, b))

  @typing.no_type_check
  def testDeterminism(self):
    """Test that identical inputs give identical reports and globals."""
    body = ('seen += frb_mem_read(0x20000000, 1); report_reached("A");'
            'if (seen > 3) report_detected_triggered("A");')
    runs = []
    for _ in range(2):
      machine = bench_mocks.FakeMachine(words={0x20000000: 2})
      program = bench_mocks.Parse(bench_mocks.HookBody(
          body, 'uint32_t seen;'))
      state = interpreter.GlobalsState.ForProgram(program)
      reports = []
      for _ in range(3):
        reports.extend(interpreter.EvalHook(program, 'hook',
                                            machine.Binding(),
                                            state).reports)
      runs.append((reports, state))
    self.assertEqual(runs[0], runs[1])
    self.assertEqual(6, runs[0][1].Get('seen').value)
    self.assertEqual(('triggered', 'A'), runs[0][0][-1])


if __name__ == '__main__':
  unittest.main()
