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
"""Fixed-width integer values with C semantics."""

import dataclasses
from typing import Dict, List

VALID_WIDTHS = (8, 16, 32, 64)


@dataclasses.dataclass(frozen=True)
class IntType:
  """A fixed-width C integer type.

  Attributes:
    width (int): Bit width, one of 8, 16, 32 or 64.
    signed (bool): True for two's complement signed types.
  """
  width: int
  signed: bool

  @property
  def mask(self) -> int:
    """The bit mask covering the type's width."""
    return (1 << self.width) - 1

  @property
  def name(self) -> str:
    """The canonical stdint spelling of the type."""
    return '{0:s}int{1:d}_t'.format('' if self.signed else 'u', self.width)

  def Normalize(self, raw: int) -> int:
    """Wraps an arbitrary Python integer into this type's value range.

    Args:
      raw (int): Any integer.

    Returns:
      int: The mathematical value the type holds after wrapping modulo
          2^width.
    """
    bits = raw & self.mask
    if self.signed and bits >> (self.width - 1):
      return bits - (1 << self.width)
    return bits

  def Promoted(self) -> 'IntType':
    """Returns the type after C integer promotion."""
    if self.width < 32:
      return INT32
    return self


UINT8 = IntType(8, False)
UINT16 = IntType(16, False)
UINT32 = IntType(32, False)
UINT64 = IntType(64, False)
INT8 = IntType(8, True)
INT16 = IntType(16, True)
INT32 = IntType(32, True)
INT64 = IntType(64, True)

# Spellings accepted in declarations and casts. Multi-word spellings are
# joined with a single space by the parser.
TYPE_NAMES = {
    'uint8_t': UINT8,
    'uint16_t': UINT16,
    'uint32_t': UINT32,
    'uint64_t': UINT64,
    'int8_t': INT8,
    'int16_t': INT16,
    'int32_t': INT32,
    'int64_t': INT64,
    'bool': UINT8,
    'char': INT8,
    'unsigned char': UINT8,
    'short': INT16,
    'unsigned short': UINT16,
    'int': INT32,
    'unsigned': UINT32,
    'unsigned int': UINT32,
    'long': INT64,
    'unsigned long': UINT64,
    'signed': INT32,
    'signed char': INT8,
    'signed short': INT16,
    'signed int': INT32,
    'signed long': INT64,
    'short int': INT16,
    'unsigned short int': UINT16,
    'long int': INT64,
    'unsigned long int': UINT64,
    'long long': INT64,
    'unsigned long long': UINT64,
}  # type: Dict[str, IntType]


@dataclasses.dataclass(frozen=True)
class Value:
  """A typed integer value.

  The payload is stored as the mathematical value the C type holds: signed
  values are negative when the sign bit is set, unsigned values are in
  [0, 2^width).

  Attributes:
    value (int): The value held.
    type (IntType): The value's C type.
  """
  value: int
  type: IntType

  @classmethod
  def Of(cls, raw: int, int_type: IntType) -> 'Value':
    """Builds a value, wrapping raw into the type's range.

    Args:
      raw (int): Any integer.
      int_type (IntType): The target type.

    Returns:
      Value: The wrapped value.
    """
    return cls(int_type.Normalize(raw), int_type)

  @property
  def bits(self) -> int:
    """The two's complement payload zero-extended to 64 bits."""
    return self.value & UINT64.mask

  @property
  def width(self) -> int:
    """The value's bit width."""
    return self.type.width

  @property
  def signed(self) -> bool:
    """Whether the value's type is signed."""
    return self.type.signed

  def Cast(self, int_type: IntType) -> 'Value':
    """Converts the value to another integer type (C conversion rules).

    Args:
      int_type (IntType): The target type.

    Returns:
      Value: The converted value.
    """
    return Value.Of(self.value, int_type)

  def IsTrue(self) -> bool:
    """Returns the value's truthiness in a C condition."""
    return self.value != 0


def CommonType(left: IntType, right: IntType) -> IntType:
  """Applies the usual arithmetic conversions to two operand types.

  Args:
    left (IntType): Type of the left operand.
    right (IntType): Type of the right operand.

  Returns:
    IntType: The type both operands are converted to.
  """
  left = left.Promoted()
  right = right.Promoted()
  if left.width != right.width:
    return left if left.width > right.width else right
  return IntType(left.width, left.signed and right.signed)


def LiteralType(value: int, is_decimal: bool, unsigned_suffix: bool,
                long_suffix: bool) -> IntType:
  """Picks the type of an integer literal following C's literal rules.

  Args:
    value (int): The literal's value (non-negative).
    is_decimal (bool): False for hexadecimal or octal literals.
    unsigned_suffix (bool): True if the literal carries a u/U suffix.
    long_suffix (bool): True if the literal carries an l/L suffix.

  Returns:
    IntType: The literal's type. Values that fit no candidate type get
        uint64_t and wrap.
  """
  candidates = []  # type: List[IntType]
  if unsigned_suffix:
    candidates = [UINT64] if long_suffix else [UINT32, UINT64]
  elif is_decimal:
    candidates = [INT64] if long_suffix else [INT32, INT64]
  else:
    candidates = [INT64, UINT64] if long_suffix else [
        INT32, UINT32, INT64, UINT64]
  for candidate in candidates:
    if candidate.signed:
      if value < (1 << (candidate.width - 1)):
        return candidate
    elif value <= candidate.mask:
      return candidate
  return UINT64


_COMPARISONS = {
    '==': lambda a, b: a == b,
    '!=': lambda a, b: a != b,
    '<': lambda a, b: a < b,
    '>': lambda a, b: a > b,
    '<=': lambda a, b: a <= b,
    '>=': lambda a, b: a >= b,
}

COMPARISON_OPS = frozenset(_COMPARISONS)


def _TruncatedDivide(left: int, right: int) -> int:
  quotient = abs(left) // abs(right)
  return quotient if (left < 0) == (right < 0) else -quotient


def Unary(op: str, operand: Value) -> Value:
  """Applies '!', '-', '~' or '+' to a value."""
  if op == '!':
    return Value(0 if operand.IsTrue() else 1, INT32)
  promoted = operand.Cast(operand.type.Promoted())
  if op == '-':
    return Value.Of(-promoted.value, promoted.type)
  if op == '~':
    return Value.Of(~promoted.value, promoted.type)
  return promoted


def Compare(op: str, left: Value, right: Value) -> Value:
  """Compares two values after the usual arithmetic conversions."""
  common = CommonType(left.type, right.type)
  outcome = _COMPARISONS[op](left.Cast(common).value,
                             right.Cast(common).value)
  return Value(int(outcome), INT32)


def Arithmetic(op: str, left: Value, right: Value) -> Value:
  """Applies a binary arithmetic, bitwise or shift operator.

  Shifts by a negative count or by the promoted width or more yield 0, or -1
  for an arithmetic right shift of a negative value.

  Args:
    op (str): The operator, e.g. '+' or '<<'.
    left (Value): Left operand.
    right (Value): Right operand.

  Returns:
    Value: The wrapped result.

  Raises:
    ZeroDivisionError: If op is '/' or '%' and right converts to zero.
    ValueError: If op is not a binary arithmetic operator.
  """
  if op in ('<<', '>>'):
    result_type = left.type.Promoted()
    operand = left.Cast(result_type).value
    count = right.value
    if count < 0 or count >= result_type.width:
      fill = -1 if (op == '>>' and operand < 0) else 0
      return Value.Of(fill, result_type)
    if op == '<<':
      return Value.Of(operand << count, result_type)
    return Value.Of(operand >> count, result_type)

  common = CommonType(left.type, right.type)
  a = left.Cast(common).value
  b = right.Cast(common).value
  if op in ('/', '%'):
    if b == 0:
      raise ZeroDivisionError('division by zero')
    quotient = _TruncatedDivide(a, b)
    raw = quotient if op == '/' else a - b * quotient
  elif op == '+':
    raw = a + b
  elif op == '-':
    raw = a - b
  elif op == '*':
    raw = a * b
  elif op == '&':
    raw = a & b
  elif op == '|':
    raw = a | b
  elif op == '^':
    raw = a ^ b
  else:
    raise ValueError('unknown operator {0:s}'.format(op))
  return Value.Of(raw, common)
