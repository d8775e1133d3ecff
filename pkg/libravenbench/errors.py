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
"""Generic error wrapper"""

import logging
from typing import Optional

from libravenbench import logging_utils


class Diagnostic:
  """A located message about a Raven source.

  Attributes:
    message (str): Human readable description of the problem.
    origin (str): The file path or label of the Raven source.
    line (int): 1-based line number, 0 if unknown.
    column (int): 1-based column number, 0 if unknown.
  """

  def __init__(self,
               message: str,
               origin: str = '<raven>',
               line: int = 0,
               column: int = 0) -> None:
    """Initializes a Diagnostic.

    Args:
      message (str): Human readable description of the problem.
      origin (str): Optional. The file path or label of the Raven source.
      line (int): Optional. 1-based line number.
      column (int): Optional. 1-based column number.
    """
    self.message = message
    self.origin = origin
    self.line = line
    self.column = column

  def __str__(self) -> str:
    if self.line:
      return '{0:s}:{1:d}:{2:d}: {3:s}'.format(
          self.origin, self.line, self.column, self.message)
    return '{0:s}: {1:s}'.format(self.origin, self.message)


class RBError(Exception):
  """Class to represent a ravenbench error.

  Attributes:
    message (str): The error message.
    name (str): Name of the module that generated the error.
    log_level (int): Level the message is logged at on construction.
  """

  log_level = logging.ERROR

  def __init__(self,
               message: str,
               name: str) -> None:
    """Initializes the RBError with provided message.

    Args:
      message (str): The error message.
      name (str): The name of the module that generated the error.
    """
    super().__init__(message)
    self.message = message
    self.name = name
    logging_utils.SetUpLogger(self.name)
    logger = logging_utils.GetLogger(self.name)
    logger.log(self.log_level, self.message)


class _DiagnosticError(RBError):
  """Error carrying a located Raven diagnostic."""

  def __init__(self, diagnostic: Diagnostic, name: str) -> None:
    """Initializes the error from a diagnostic.

    Args:
      diagnostic (Diagnostic): The located problem.
      name (str): The name of the module that generated the error.
    """
    self.diagnostic = diagnostic
    super().__init__(str(diagnostic), name)


class RavenSyntaxError(_DiagnosticError):
  """Error when a Raven source cannot be tokenized or parsed."""


class RavenSemanticError(_DiagnosticError):
  """Error when a parsed Raven refers to unknown names or unsupported C."""


class RavenRuntimeError(RBError):
  """Error when an introspection function fails during evaluation.

  Attributes:
    kind (str): Short machine-readable failure kind, e.g. 'step_budget'.
  """

  log_level = logging.WARNING

  def __init__(self, message: str, name: str, kind: str = 'runtime') -> None:
    """Initializes the error.

    Args:
      message (str): The error message.
      name (str): The name of the module that generated the error.
      kind (str): Optional. Machine-readable failure kind.
    """
    self.kind = kind
    super().__init__(message, name)


class InvalidAccessError(RBError):
  """Error when a register or memory introspection read is invalid."""

  log_level = logging.WARNING


class HookRegistrationError(RBError):
  """Error when a backend refuses a reflection point."""


class InvalidImageError(RBError):
  """Error when a target image is malformed."""


class AssemblerError(RBError):
  """Error when a minivm assembly source cannot be assembled.

  Attributes:
    line (int): 1-based source line of the problem, if known.
  """

  def __init__(self, message: str, name: str,
               line: Optional[int] = None) -> None:
    """Initializes the error.

    Args:
      message (str): The error message.
      name (str): The name of the module that generated the error.
      line (int): Optional. 1-based source line of the problem.
    """
    self.line = line
    if line is not None:
      message = 'line {0:d}: {1:s}'.format(line, message)
    super().__init__(message, name)


class RavenLoadError(RBError):
  """Error when Ravens cannot be loaded into an oracle session."""


class CorpusError(RBError):
  """Error when a fuzzing corpus or its log cannot be read."""


class ReportFormatError(RBError):
  """Error when a machine-readable report or outcome file is malformed."""


class InconsistentCampaignError(RBError):
  """Error when trials being aggregated do not share one target."""
