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
"""Tokenizer for Raven sources."""

import dataclasses
import re
from typing import List, NoReturn, Tuple

from libravenbench import errors

IDENT = 'ident'
NUMBER = 'number'
STRING = 'string'
PUNCT = 'punct'
EOF = 'eof'

# Longest operators first.
_PUNCTUATORS = (
    '<<=', '>>=', '...',
    '->', '++', '--', '<<', '>>', '<=', '>=', '==', '!=', '&&', '||',
    '+=', '-=', '*=', '/=', '%=', '&=', '|=', '^=',
    '+', '-', '*', '/', '%', '&', '|', '^', '~', '!', '<', '>', '=', '?',
    ':', ';', ',', '(', ')', '{', '}', '[', ']', '.',
)

_IDENT_RE = re.compile(r'[A-Za-z_][A-Za-z0-9_]*')
_NUMBER_RE = re.compile(
    r'(?P<body>0[xX][0-9A-Fa-f]+|[0-9]+)(?P<suffix>[uUlL]*)(?P<tail>[.\w]*)')
_STRING_ESCAPES = {'n': '\n', 't': '\t', '\\': '\\', '"': '"', '0': '\0'}


@dataclasses.dataclass(frozen=True)
class Token:
  """A lexical token.

  Attributes:
    kind (str): One of IDENT, NUMBER, STRING, PUNCT or EOF.
    text (str): The token's source text (decoded contents for strings).
    line (int): 1-based line of the first character.
    column (int): 1-based column of the first character.
  """
  kind: str
  text: str
  line: int
  column: int


class Lexer:
  """Splits a Raven source into tokens.

  Attributes:
    text (str): The source text.
    origin (str): Source label used in diagnostics.
  """

  def __init__(self, text: str, origin: str = '<raven>') -> None:
    """Initializes the lexer.

    Args:
      text (str): The source text.
      origin (str): Optional. Source label used in diagnostics.
    """
    self.text = text
    self.origin = origin
    self._pos = 0
    self._line = 1
    self._line_start = 0

  def _Fail(self, message: str, line: int, column: int) -> NoReturn:
    """Raises a syntax error at the given position."""
    raise errors.RavenSyntaxError(
        errors.Diagnostic(message, self.origin, line, column), __name__)

  def _Advance(self, count: int) -> None:
    """Moves forward, keeping line bookkeeping current."""
    for _ in range(count):
      if self.text[self._pos] == '\n':
        self._line += 1
        self._line_start = self._pos + 1
      self._pos += 1

  def _Column(self) -> int:
    return self._pos - self._line_start + 1

  def _SkipSpaceAndComments(self) -> None:
    """Skips whitespace, // comments and /* */ comments."""
    text = self.text
    while self._pos < len(text):
      char = text[self._pos]
      if char.isspace():
        self._Advance(1)
      elif text.startswith('//', self._pos):
        end = text.find('\n', self._pos)
        self._Advance((len(text) if end < 0 else end) - self._pos)
      elif text.startswith('/*', self._pos):
        line, column = self._line, self._Column()
        end = text.find('*/', self._pos + 2)
        if end < 0:
          self._Fail('unterminated comment', line, column)
        self._Advance(end + 2 - self._pos)
      else:
        return

  def _LexString(self, line: int, column: int) -> Token:
    """Lexes a double-quoted string literal."""
    chars = []
    self._Advance(1)
    while True:
      if self._pos >= len(self.text) or self.text[self._pos] == '\n':
        self._Fail('unterminated string literal', line, column)
      char = self.text[self._pos]
      if char == '"':
        self._Advance(1)
        return Token(STRING, ''.join(chars), line, column)
      if char == '\\':
        if self._pos + 1 >= len(self.text):
          self._Fail('unterminated string literal', line, column)
        escape = self.text[self._pos + 1]
        if escape not in _STRING_ESCAPES:
          self._Fail('unsupported escape \\{0:s}'.format(escape), line, column)
        chars.append(_STRING_ESCAPES[escape])
        self._Advance(2)
      else:
        chars.append(char)
        self._Advance(1)

  def Tokenize(self) -> List[Token]:
    """Tokenizes the whole source.

    Returns:
      List[Token]: The tokens, terminated by an EOF token.

    Raises:
      RavenSyntaxError: If the source contains characters or literals that
          are not part of the Raven language.
    """
    tokens = []  # type: List[Token]
    text = self.text
    while True:
      self._SkipSpaceAndComments()
      line, column = self._line, self._Column()
      if self._pos >= len(text):
        tokens.append(Token(EOF, '', line, column))
        return tokens
      char = text[self._pos]
      if char == '#':
        self._Fail('preprocessor not supported', line, column)
      if char == '\'':
        self._Fail('character literals not supported', line, column)
      if char == '"':
        tokens.append(self._LexString(line, column))
        continue
      match = _IDENT_RE.match(text, self._pos)
      if match:
        tokens.append(Token(IDENT, match.group(0), line, column))
        self._Advance(match.end() - self._pos)
        continue
      match = _NUMBER_RE.match(text, self._pos)
      if match:
        if match.group('tail'):
          if '.' in match.group('tail'):
            self._Fail('floating point not supported', line, column)
          self._Fail('invalid integer literal {0:s}'.format(match.group(0)),
                     line, column)
        body = match.group('body')
        if (len(body) > 1 and body[0] == '0' and body[1] not in 'xX' and
            re.search('[89]', body)):
          self._Fail('invalid octal literal {0:s}'.format(body), line, column)
        suffix = match.group('suffix').lower()
        if suffix not in ('', 'u', 'l', 'ul', 'lu', 'll', 'ull', 'llu'):
          self._Fail('invalid integer suffix {0:s}'.format(suffix), line,
                     column)
        tokens.append(Token(NUMBER, match.group(0), line, column))
        self._Advance(match.end() - self._pos)
        continue
      for punct in _PUNCTUATORS:
        if text.startswith(punct, self._pos):
          tokens.append(Token(PUNCT, punct, line, column))
          self._Advance(len(punct))
          break
      else:
        self._Fail('unexpected character {0!r}'.format(char), line, column)


def ParseIntegerLiteral(text: str) -> Tuple[int, bool, bool, bool]:
  """Splits an integer literal into its value and suffix flags.

  Args:
    text (str): A NUMBER token text, e.g. '0x10u'.

  Returns:
    Tuple[int, bool, bool, bool]: (value, is_decimal, unsigned_suffix,
        long_suffix).
  """
  body = text.rstrip('uUlL')
  suffix = text[len(body):].lower()
  if body[:2] in ('0x', '0X'):
    value, is_decimal = int(body, 16), False
  elif len(body) > 1 and body[0] == '0':
    value, is_decimal = int(body, 8), False
  else:
    value, is_decimal = int(body, 10), True
  return value, is_decimal, 'u' in suffix, 'l' in suffix
