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
"""Toy targets, Ravens and corpora shipped with the package.

Each bundle lives in data/<name>/ as reviewable sources:

  target.asm          minivm source of the firmware
  ravens/             *.raven files and metadata.json
  extra_ravens/       optional Ravens kept out of the complete set
  seeds.json          corpus manifest: file, kind, t and hex bytes per seed
  expected.json       hand-traced outcomes with a provenance note

Images, corpus directories and fuzzing logs are built from these sources.
"""

import dataclasses
import json
import os
import random
import shutil
import zlib
from typing import Any, Dict, List, Optional, Sequence

from libravenbench import errors
from libravenbench import logging_utils
from libravenbench.emulation import api
from libravenbench.emulation.minivm import assembler
from libravenbench.emulation.minivm import image as image_lib
from libravenbench.oracle import metadata as metadata_lib
from libravenbench.raven import nodes
from libravenbench.raven import parser
from libravenbench.replay import corpus

logging_utils.SetUpLogger(__name__)
logger = logging_utils.GetLogger(__name__)

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data')

SOURCE_FILE = 'target.asm'
IMAGE_FILE = 'target.mvm'
LISTING_FILE = 'target.lst'
RAVEN_DIR = 'ravens'
EXTRA_RAVEN_DIR = 'extra_ravens'
SEEDS_FILE = 'seeds.json'
EXPECTED_FILE = 'expected.json'
CORPUS_DIR = 'corpus'

BUNDLE_NAMES = ('delay', 'exploit', 'exploit_patched', 'gateway',
                'irq_timing', 'magic', 'multibug', 'type_confusion')

MUTATION_SEED = 0x46524221
DEFAULT_MUTATIONS = 32
MAX_MUTANT_LENGTH = 64
# Byte values the fixtures branch on.
_INTERESTING_BYTES = (0x00, 0x01, 0x02, 0x10, 0x11, 0x20, 0x21, 0x22, 0x41,
                      0x50, 0xa0, 0xee, 0xff)


@dataclasses.dataclass(frozen=True)
class Seed:
  """One corpus entry of a bundle.

  Attributes:
    input_id (str): Path relative to the corpus, e.g. 'queue/id_000001'.
    kind (str): 'queue' or 'crash'.
    timestamp_s (float): Campaign time the fuzzer saved the seed.
    data (bytes): The MMIO byte stream.
  """
  input_id: str
  kind: str
  timestamp_s: float
  data: bytes


@dataclasses.dataclass
class FixtureBundle:
  """A target with its Ravens, corpus and expected outcomes.

  Attributes:
    name (str): Bundle name.
    directory (str): Source directory of the bundle.
    program (AssembledProgram): The assembled target.
    ravens (RavenSet): The complete Raven set with metadata.
    extra_ravens (List[RavenProgram]): Ravens outside the complete set.
    seeds (List[Seed]): The corpus, in manifest order.
    expected (Dict[str, Any]): Contents of expected.json.
  """
  name: str
  directory: str
  program: assembler.AssembledProgram
  ravens: metadata_lib.RavenSet
  extra_ravens: List[nodes.RavenProgram]
  seeds: List[Seed]
  expected: Dict[str, Any]

  @property
  def image(self) -> image_lib.TargetImage:
    return self.program.image

  @property
  def limits(self) -> api.ExecutionLimits:
    return api.ExecutionLimits(
        self.expected.get('max_instructions', api.DEFAULT_MAX_INSTRUCTIONS))

  def Records(self,
              fuzzer: str = '',
              trial: int = 0,
              time_offset: float = 0.0,
              seeds: Optional[Sequence[Seed]] = None
             ) -> List[corpus.InputRecord]:
    """The corpus as replay records, without touching the disk.

    Args:
      fuzzer (str): Optional. Fuzzer name for the records.
      trial (int): Optional. Trial index for the records.
      time_offset (float): Optional. Seconds added to every timestamp.
      seeds (Sequence[Seed]): Optional. Subset of the bundle's seeds.

    Returns:
      List[InputRecord]: Sorted by (timestamp, input_id).
    """
    label = {'queue': corpus.LABEL_QUEUE, 'crash': corpus.LABEL_CRASH}
    records = [
        corpus.InputRecord(seed.input_id, seed.data,
                           seed.timestamp_s + time_offset, label[seed.kind],
                           fuzzer, trial)
        for seed in (self.seeds if seeds is None else seeds)]
    records.sort(key=lambda record: (record.timestamp_s, record.input_id))
    return records

  def Mutations(self,
                count: int = DEFAULT_MUTATIONS,
                seed: int = MUTATION_SEED) -> List[corpus.InputRecord]:
    """Deterministic havoc-style mutants of the bundle's seeds.

    Args:
      count (int): Optional. Number of mutants.
      seed (int): Optional. PRNG seed, combined with the bundle name.

    Returns:
      List[InputRecord]: Mutants with IDs 'mutant/NNNN'.
    """
    rng = random.Random(seed ^ zlib.crc32(self.name.encode('utf-8')))
    mutants = []
    for index in range(count):
      base = bytearray(rng.choice(self.seeds).data)
      for _ in range(rng.randint(1, 4)):
        _Mutate(rng, base)
      data = bytes(base[:MAX_MUTANT_LENGTH])
      mutants.append(corpus.InputRecord(
          'mutant/{0:04d}'.format(index), data, float(index),
          corpus.LABEL_QUEUE))
    return mutants

  def WriteCorpus(self,
                  out_dir: str,
                  time_offset: float = 0.0,
                  seeds: Optional[Sequence[Seed]] = None,
                  write_log: bool = True) -> str:
    """Writes the corpus in the queue/ crashes/ fuzz_log.jsonl layout.

    Args:
      out_dir (str): Trial directory to create.
      time_offset (float): Optional. Seconds added to every logged time.
      seeds (Sequence[Seed]): Optional. Subset of the bundle's seeds.
      write_log (bool): Optional. False to leave out fuzz_log.jsonl.

    Returns:
      str: out_dir.
    """
    seeds = self.seeds if seeds is None else seeds
    for directory in (corpus.QUEUE_DIR, corpus.CRASH_DIR):
      os.makedirs(os.path.join(out_dir, directory), exist_ok=True)
    lines = []
    for seed in seeds:
      with open(os.path.join(out_dir, seed.input_id), 'wb') as seed_file:
        seed_file.write(seed.data)
      lines.append(json.dumps({'file': seed.input_id,
                               't': seed.timestamp_s + time_offset,
                               'kind': seed.kind}))
    if write_log:
      with open(os.path.join(out_dir, corpus.LOG_FILE), 'w',
                encoding='utf-8') as log_file:
        log_file.write(''.join(line + '\n' for line in lines))
    return out_dir

  def Materialize(self, out_dir: str) -> List[str]:
    """Writes the built bundle: image, listing, Ravens, corpus, expected.

    Args:
      out_dir (str): Directory to create for the bundle.

    Returns:
      List[str]: Files written, sorted.
    """
    os.makedirs(out_dir, exist_ok=True)
    image_lib.SaveImage(self.image, os.path.join(out_dir, IMAGE_FILE))
    with open(os.path.join(out_dir, LISTING_FILE), 'w',
              encoding='utf-8') as listing_file:
      listing_file.write(''.join(line.Format() + '\n'
                                 for line in self.program.listing))
    for name in (SOURCE_FILE, EXPECTED_FILE):
      shutil.copyfile(os.path.join(self.directory, name),
                      os.path.join(out_dir, name))
    for directory in (RAVEN_DIR, EXTRA_RAVEN_DIR):
      source = os.path.join(self.directory, directory)
      if os.path.isdir(source):
        shutil.copytree(source, os.path.join(out_dir, directory),
                        dirs_exist_ok=True)
    self.WriteCorpus(os.path.join(out_dir, CORPUS_DIR))
    written = []
    for root, _, files in os.walk(out_dir):
      written.extend(os.path.join(root, name) for name in files)
    return sorted(written)


def _Mutate(rng: random.Random, data: bytearray) -> None:
  """Applies one random edit in place."""
  choice = rng.randrange(5)
  if not data or choice == 0:
    data.insert(rng.randint(0, len(data)), rng.choice(_INTERESTING_BYTES))
  elif choice == 1:
    data[rng.randrange(len(data))] ^= 1 << rng.randrange(8)
  elif choice == 2:
    data[rng.randrange(len(data))] = rng.choice(_INTERESTING_BYTES)
  elif choice == 3:
    del data[rng.randrange(len(data))]
  else:
    start = rng.randrange(len(data))
    chunk = data[start:start + rng.randint(1, 4)]
    data[start:start] = chunk


@dataclasses.dataclass
class FixtureSuite:
  """All fixture bundles by name."""
  bundles: Dict[str, FixtureBundle]

  def __getitem__(self, name: str) -> FixtureBundle:
    return self.bundles[name]

  @property
  def names(self) -> List[str]:
    return sorted(self.bundles)

  def Materialize(self, out_dir: str) -> List[str]:
    """Writes every bundle under out_dir/<name>/."""
    written = []  # type: List[str]
    for name in self.names:
      written.extend(self.bundles[name].Materialize(
          os.path.join(out_dir, name)))
    logger.info('Materialized {0:d} bundle(s), {1:d} file(s) in {2:s}'.format(
        len(self.bundles), len(written), out_dir))
    return written


def _LoadSeeds(path: str) -> List[Seed]:
  with open(path, 'r', encoding='utf-8') as seeds_file:
    document = json.load(seeds_file)
  seeds = []
  for entry in document['seeds']:
    seeds.append(Seed(entry['file'], entry['kind'], float(entry['t']),
                      bytes.fromhex(entry['hex'])))
  return seeds


def LoadBundle(name: str, data_dir: str = DATA_DIR) -> FixtureBundle:
  """Assembles and parses one bundle from its sources.

  Args:
    name (str): Bundle name, one of BUNDLE_NAMES.
    data_dir (str): Optional. Root of the bundle sources.

  Returns:
    FixtureBundle: The built bundle.

  Raises:
    CorpusError: If the bundle sources are missing or malformed.
  """
  directory = os.path.join(data_dir, name)
  if not os.path.isdir(directory):
    raise errors.CorpusError(
        'No fixture bundle named {0:s}'.format(name), __name__)
  try:
    program = assembler.AssembleFile(os.path.join(directory, SOURCE_FILE))
    seeds = _LoadSeeds(os.path.join(directory, SEEDS_FILE))
    with open(os.path.join(directory, EXPECTED_FILE), 'r',
              encoding='utf-8') as expected_file:
      expected = json.load(expected_file)
  except (OSError, ValueError, KeyError) as exception:
    raise errors.CorpusError(
        'Fixture bundle {0:s} is malformed: {1!s}'.format(name, exception),
        __name__) from exception
  ravens = metadata_lib.LoadRavenDirectory(os.path.join(directory, RAVEN_DIR))
  extra = []  # type: List[nodes.RavenProgram]
  extra_dir = os.path.join(directory, EXTRA_RAVEN_DIR)
  if os.path.isdir(extra_dir):
    extra = [parser.ParseRavenFile(os.path.join(extra_dir, raven_file))
             for raven_file in sorted(os.listdir(extra_dir))
             if raven_file.endswith(metadata_lib.RAVEN_EXTENSION)]
  return FixtureBundle(name, directory, program, ravens, extra, seeds,
                       expected)


def BuildFixtures(data_dir: str = DATA_DIR) -> FixtureSuite:
  """Builds every bundle.

  Args:
    data_dir (str): Optional. Root of the bundle sources.

  Returns:
    FixtureSuite: All bundles in BUNDLE_NAMES.
  """
  return FixtureSuite({name: LoadBundle(name, data_dir)
                       for name in BUNDLE_NAMES})
