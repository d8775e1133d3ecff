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
"""Raven directories and their metadata sidecar.

A Raven directory holds ``*.raven`` files and an optional ``metadata.json``
listing ``{"bug_id", "cwe", "false_positive", "active"}`` objects.
"""

import dataclasses
import glob
import json
import os
from typing import Any, Dict, List, Optional

from libravenbench import errors
from libravenbench import logging_utils
from libravenbench.raven import nodes
from libravenbench.raven import parser

logging_utils.SetUpLogger(__name__)
logger = logging_utils.GetLogger(__name__)

METADATA_FILE = 'metadata.json'
RAVEN_EXTENSION = '.raven'
FALSE_POSITIVE_PREFIX = 'FP_'


@dataclasses.dataclass(frozen=True)
class BugMetadata:
  """Sidecar facts about one bug.

  Attributes:
    bug_id (str): The bug ID used in report_* calls.
    cwe (Optional[str]): Weakness class, e.g. 'CWE-121'.
    false_positive (bool): True if the crash cannot happen on hardware.
    active (bool): True if Live-Mode aborts when the bug triggers.
  """
  bug_id: str
  cwe: Optional[str] = None
  false_positive: bool = False
  active: bool = False

  def AsDict(self) -> Dict[str, Any]:
    return dataclasses.asdict(self)


def IsFalsePositive(bug_id: str,
                    metadata: Optional[Dict[str, BugMetadata]] = None) -> bool:
  """Returns True if a bug is marked false positive.

  A bug is a false positive if its ID starts with FP_ or its metadata says
  so.

  Args:
    bug_id (str): The bug ID.
    metadata (Dict[str, BugMetadata]): Optional. Sidecar entries by ID.

  Returns:
    bool: The false-positive marker.
  """
  if bug_id.startswith(FALSE_POSITIVE_PREFIX):
    return True
  entry = (metadata or {}).get(bug_id)
  return bool(entry and entry.false_positive)


def ParseMetadata(document: Any, origin: str = METADATA_FILE
                 ) -> Dict[str, BugMetadata]:
  """Validates a decoded metadata document.

  Args:
    document (Any): A JSON list of bug objects, or {"bugs": [...]}.
    origin (str): Optional. Label for error messages.

  Returns:
    Dict[str, BugMetadata]: Entries keyed by bug ID.

  Raises:
    RavenLoadError: If the document is malformed.
  """
  if isinstance(document, dict) and 'bugs' in document:
    document = document['bugs']
  if not isinstance(document, list):
    raise errors.RavenLoadError(
        '{0:s}: expected a list of bug objects'.format(origin), __name__)
  entries = {}  # type: Dict[str, BugMetadata]
  for item in document:
    if not isinstance(item, dict) or not isinstance(item.get('bug_id'), str):
      raise errors.RavenLoadError(
          '{0:s}: every entry needs a string bug_id'.format(origin), __name__)
    unknown = set(item) - {'bug_id', 'cwe', 'false_positive', 'active'}
    if unknown:
      raise errors.RavenLoadError(
          '{0:s}: unknown field(s) {1:s}'.format(origin,
                                                  ', '.join(sorted(unknown))),
          __name__)
    entries[item['bug_id']] = BugMetadata(
        bug_id=item['bug_id'],
        cwe=item.get('cwe'),
        false_positive=bool(item.get('false_positive', False)),
        active=bool(item.get('active', False)))
  return entries


def LoadMetadata(path: str) -> Dict[str, BugMetadata]:
  """Reads a metadata.json file.

  Raises:
    RavenLoadError: If the file is not valid JSON or malformed.
  """
  try:
    with open(path, 'r', encoding='utf-8') as metadata_file:
      document = json.load(metadata_file)
  except (OSError, ValueError) as exception:
    raise errors.RavenLoadError(
        'Cannot read {0:s}: {1!s}'.format(path, exception),
        __name__) from exception
  return ParseMetadata(document, path)


@dataclasses.dataclass
class RavenSet:
  """The Ravens and metadata of one target.

  Attributes:
    programs (List[RavenProgram]): Parsed Ravens, sorted by origin.
    metadata (Dict[str, BugMetadata]): Sidecar entries by bug ID.
  """
  programs: List[nodes.RavenProgram]
  metadata: Dict[str, BugMetadata] = dataclasses.field(default_factory=dict)

  @property
  def bug_ids(self) -> List[str]:
    """Bug IDs declared by the Ravens, in program then source order."""
    seen = []  # type: List[str]
    for program in self.programs:
      for bug_id in program.bug_ids:
        if bug_id not in seen:
          seen.append(bug_id)
    return seen

  def ActiveBugs(self) -> List[str]:
    """Bug IDs flagged active in the metadata."""
    return sorted(bug_id for bug_id, entry in self.metadata.items()
                  if entry.active)


def LoadRavenDirectory(path: str) -> RavenSet:
  """Parses every Raven in a directory.

  Args:
    path (str): Directory with .raven files and optional metadata.json.

  Returns:
    RavenSet: Programs sorted by file name plus metadata.

  Raises:
    RavenLoadError: If the directory does not exist.
    RavenSyntaxError: If a Raven does not parse.
    RavenSemanticError: If a Raven does not resolve.
  """
  if not os.path.isdir(path):
    raise errors.RavenLoadError(
        'Raven directory {0:s} does not exist'.format(path), __name__)
  files = sorted(glob.glob(os.path.join(path, '*' + RAVEN_EXTENSION)))
  programs = [parser.ParseRavenFile(raven_file) for raven_file in files]
  metadata = {}  # type: Dict[str, BugMetadata]
  metadata_path = os.path.join(path, METADATA_FILE)
  if os.path.exists(metadata_path):
    metadata = LoadMetadata(metadata_path)
  ravens = RavenSet(programs, metadata)
  for bug_id in sorted(set(metadata) - set(ravens.bug_ids)):
    logger.debug('Metadata entry {0:s} has no Raven'.format(bug_id))
  logger.info('Loaded {0:d} Raven(s) declaring {1:d} bug(s) from {2:s}'.format(
      len(programs), len(ravens.bug_ids), path))
  return ravens
