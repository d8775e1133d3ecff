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
"""Tests for the errors module - errors.py"""

import typing
import unittest

from libravenbench import errors

LOGGER_NAME = 'libravenbench.test_errors'


class RBErrorTest(unittest.TestCase):
  """Test the error hierarchy."""

  @typing.no_type_check
  def testLoggedAtError(self):
    """Test that data and load errors log at ERROR on construction."""
    with self.assertLogs(LOGGER_NAME, level='DEBUG') as logs:
      error = errors.CorpusError('no queue directory', LOGGER_NAME)
    self.assertEqual(['ERROR:{0:s}:no queue directory'.format(LOGGER_NAME)],
                     logs.output)
    self.assertEqual(('no queue directory', LOGGER_NAME),
                     (error.message, error.name))

  @typing.no_type_check
  def testPerInputErrorsLoggedAtWarning(self):
    """Test that per-input replay errors log at WARNING."""
    with self.assertLogs(LOGGER_NAME, level='DEBUG') as logs:
      runtime = errors.RavenRuntimeError('x.raven:3:7: division by zero',
                                         LOGGER_NAME, 'division_by_zero')
      errors.InvalidAccessError('unmapped read at 0x0', LOGGER_NAME)
    self.assertEqual(
        ['WARNING:{0:s}:x.raven:3:7: division by zero'.format(LOGGER_NAME),
         'WARNING:{0:s}:unmapped read at 0x0'.format(LOGGER_NAME)],
        logs.output)
    self.assertEqual('division_by_zero', runtime.kind)

  @typing.no_type_check
  def testDiagnosticErrors(self):
    """Test that syntax errors carry their located diagnostic."""
    diagnostic = errors.Diagnostic('unexpected token', 'a.raven', 4, 2)
    with self.assertLogs(LOGGER_NAME, level='ERROR'):
      error = errors.RavenSyntaxError(diagnostic, LOGGER_NAME)
    self.assertIs(diagnostic, error.diagnostic)
    self.assertEqual(str(diagnostic), error.message)


if __name__ == '__main__':
  unittest.main()
