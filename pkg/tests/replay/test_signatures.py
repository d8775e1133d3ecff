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
"""Tests for the replay module - signatures.py"""

import typing
import unittest

from libravenbench.emulation import api
from libravenbench.replay import signatures


def _Fnv1a(data):
  digest = 0xcbf29ce484222325
  for byte in data:
    digest = ((digest ^ byte) * 0x100000001b3) % (1 << 64)
  return digest


class SignaturesTest(unittest.TestCase):
  """Test the fuzzer-style crash signatures."""

  @typing.no_type_check
  def testStackHash(self):
    """Test FNV-1a over little-endian frames."""
    self.assertEqual(0xcbf29ce484222325, signatures.StackHash([]))
    self.assertEqual(_Fnv1a(bytes([0xa8, 0, 0, 0, 0, 0, 0, 0])),
                     signatures.StackHash([0xa8]))
    self.assertEqual(
        _Fnv1a((0x88).to_bytes(8, 'little') + (0xe0).to_bytes(8, 'little')),
        signatures.StackHash((0x88, 0xe0)))

  @typing.no_type_check
  def testStackHashOrder(self):
    """Test that frames and their order matter."""
    a, b, c = 0x0800_0100, 0x0800_0200, 0x0800_0300
    self.assertEqual(signatures.StackHash([a, b]), signatures.StackHash([a, b]))
    self.assertNotEqual(signatures.StackHash([a, b]),
                        signatures.StackHash([a, c, b]))
    self.assertNotEqual(signatures.StackHash([a, b]),
                        signatures.StackHash([b, a]))

  @typing.no_type_check
  def testSignaturesOnlyForCrashes(self):
    """Test that signatures exist iff the run crashed."""
    crash = api.Termination(api.TerminationKind.CRASH,
                            api.CrashReason.UNMAPPED_READ, pc=0xb8, lr=0xa8,
                            shadow_stack=(0xa8,))
    self.assertEqual((0xb8, 0xa8), signatures.PcLrSignature(crash))
    self.assertEqual(signatures.StackHash([0xa8]),
                     signatures.StackSignature(crash))
    for kind in (api.TerminationKind.HALTED_NORMALLY,
                 api.TerminationKind.INPUT_EXHAUSTED,
                 api.TerminationKind.STEP_LIMIT,
                 api.TerminationKind.ORACLE_ABORT):
      termination = api.Termination(kind, pc=0x10, lr=0x20)
      self.assertIsNone(signatures.PcLrSignature(termination))
      self.assertIsNone(signatures.StackSignature(termination))


if __name__ == '__main__':
  unittest.main()
