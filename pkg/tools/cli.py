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
"""CLI tools for ravenbench."""

import argparse
import logging
import sys

from typing import Tuple, List, Optional, Any, Dict, NoReturn
from libravenbench import errors
from libravenbench import logging_utils
from libravenbench.analysis import summary as summary_lib
from libravenbench.analysis import survival
from libravenbench.emulation import api
from tools import bench_cli

COMMAND_TO_FUNC = {
    'analyze': bench_cli.Analyze,
    'assemble': bench_cli.Assemble,
    'chart': bench_cli.Chart,
    'fixtures': bench_cli.Fixtures,
    'replay': bench_cli.Replay,
    'validate': bench_cli.Validate,
}

# Default value marking a flag the command cannot run without.
REQUIRED = object()


class _ArgumentParser(argparse.ArgumentParser):
  """Argument parser exiting with the usage error code."""

  def error(self, message: str) -> NoReturn:
    self.print_usage(sys.stderr)
    self.exit(bench_cli.EXIT_USAGE,
              '{0:s}: error: {1:s}\n'.format(self.prog, message))


def AddParser(
    # pylint: disable=protected-access
    command_parser: argparse._SubParsersAction,
    # pylint: enable=protected-access
    func: str,
    func_helper: str,
    args: Optional[List[Tuple[str, str, Optional[Any]]]] = None) -> None:
  """Create a new parser object for a command.

  Args:
    command_parser (_SubParsersAction): The subparser object from
        argparse.ArgumentParser.
    func (str): The name of the command to add parsing options for.
    func_helper (str): A helper text describing what the command does.
    args (List[Tuple]): Optional. A list of arguments to add
        to the parser. Each argument is a tuple containing the action (str) to
        add to the parser, a helper text (str), and a default value (Any or
        None). A bool default makes a switch, an int or float default sets
        the argument type, a list default makes a repeatable flag and
        REQUIRED makes the flag mandatory.

  Raises:
    NotImplementedError: If the requested command is not implemented.
  """
  if func not in COMMAND_TO_FUNC:
    raise NotImplementedError(
        'Requested command {0:s} is not implemented'.format(func))
  func_parser = command_parser.add_parser(func, help=func_helper)
  if args:
    for argument, helper_text, default_value in args:
      kwargs = {'help': helper_text}  # type: Dict[str, Any]
      if default_value is REQUIRED:
        kwargs['required'] = True
      elif isinstance(default_value, bool):
        kwargs['action'] = 'store_true'
      elif isinstance(default_value, list):
        kwargs['action'] = 'append'
      else:
        kwargs['default'] = default_value
        if isinstance(default_value, (int, float)):
          kwargs['type'] = type(default_value)
      func_parser.add_argument(argument, **kwargs)  # type: ignore
  func_parser.set_defaults(func=COMMAND_TO_FUNC[func])


def BuildParser() -> argparse.ArgumentParser:
  """Builds the ravenbench argument parser."""
  parser = _ArgumentParser(
      description='Benchmark firmware fuzzers against Raven bug oracles.')
  parser.add_argument('--verbose', action='store_true',
                      help='Log debug messages.')
  subparsers = parser.add_subparsers()

  limits = ('--max_instructions', 'Instructions after which a replay ends '
                                  'with StepLimit.',
            api.DEFAULT_MAX_INSTRUCTIONS)
  jobs = ('--jobs', 'Worker processes replaying inputs.', 1)

  AddParser(subparsers, 'replay',
            'Replay a trial corpus through the Ravens and write '
            'outcomes.jsonl and replay_meta.json.',
            args=[
                ('--target', 'The firmware image (.mvm) or its source (.asm).',
                 REQUIRED),
                ('--ravens', 'Directory of .raven files and metadata.json.',
                 REQUIRED),
                ('--corpus', 'The trial directory holding queue/ and '
                             'crashes/.', REQUIRED),
                ('--log', 'The fuzzing log. Defaults to '
                          '<corpus>/fuzz_log.jsonl when present.', None),
                ('--fuzzer', 'The fuzzer that produced the corpus.',
                 'unknown'),
                ('--trial', 'The trial index.', 0),
                ('--out', 'Output directory. Defaults to --corpus.', None),
                ('--live', 'Replay in Live mode: abort on the first '
                           'triggered active bug.', False),
                ('--active', 'Comma separated active bug IDs for Live '
                             'mode. Defaults to the metadata flags.', None),
                jobs,
                limits,
            ])
  AddParser(subparsers, 'analyze',
            'Aggregate replayed trials into report.json, bugs.csv, '
            'survival curves and medians.md.',
            args=[
                ('--outcomes', 'Glob matching trial directories or their '
                               'outcomes.jsonl files.', REQUIRED),
                ('--ravens', 'Directory holding metadata.json.', None),
                ('--horizon', 'Campaign length in seconds.',
                 summary_lib.DEFAULT_HORIZON_S),
                ('--confidence', 'Confidence level of the survival bands.',
                 survival.DEFAULT_CONFIDENCE),
                ('--out', 'Output directory.', REQUIRED),
            ])
  AddParser(subparsers, 'chart', 'Render SVG charts from a report.json.',
            args=[
                ('--report', 'The report.json file.', REQUIRED),
                ('--out', 'Output directory.', REQUIRED),
            ])
  AddParser(subparsers, 'validate',
            'Replay crashing seeds and check every crash is detected by '
            'exactly one Raven.',
            args=[
                ('--target', 'The firmware image (.mvm) or its source (.asm).',
                 REQUIRED),
                ('--ravens', 'Directory of .raven files and metadata.json.',
                 REQUIRED),
                ('--crashes', 'Directory of crashing seeds, or a trial '
                              'directory with a crashes/ subdirectory.',
                 REQUIRED),
                ('--add_raven', 'An extra .raven file to validate with. '
                                'Can be repeated.', []),
                ('--previous', 'outcomes.jsonl of an earlier replay, used '
                               'as the previous attribution.', None),
                jobs,
                limits,
            ])
  AddParser(subparsers, 'assemble', 'Assemble a minivm source file.',
            args=[
                ('source', 'The .asm source file.', None),
                ('--output', 'Output image. Defaults to the source with an '
                             '.mvm extension.', None),
                ('--listing', 'Write an address listing to this file.', None),
            ])
  AddParser(subparsers, 'fixtures',
            'Write the fixture bundles: images, listings, Ravens and '
            'corpora.',
            args=[
                ('--out', 'Output directory.', REQUIRED),
                ('--bundle', 'Only write this bundle.', None),
            ])
  return parser


def Main(argv: Optional[List[str]] = None) -> int:
  """Main function for ravenbench CLI.

  Args:
    argv (List[str]): Optional. Command line arguments, defaults to
        sys.argv[1:].

  Returns:
    int: The exit code.
  """
  parser = BuildParser()
  if argv is None:
    argv = sys.argv[1:]
  if not argv:
    parser.print_help()
    return bench_cli.EXIT_USAGE

  parsed_args = parser.parse_args(argv)
  if parsed_args.verbose:
    logging_utils.SetLogLevel(logging.DEBUG)
  if not hasattr(parsed_args, 'func'):
    parser.print_help()
    return bench_cli.EXIT_USAGE
  try:
    return parsed_args.func(parsed_args)
  except errors.RBError as exception:
    return bench_cli.ErrorExitCode(exception)


if __name__ == '__main__':
  sys.exit(Main())
