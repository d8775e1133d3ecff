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
"""Parser for the Raven bug oracle language.

A Raven is a small C-syntax file made of a reflection table
(``context_struct hook_addresses[] = {{address, function}, ...};``), global
variables and parameterless introspection functions. Parsing is followed by
a resolution pass that rejects unknown identifiers, undefined hook functions
and misused intrinsics.
"""

import dataclasses
import io
from typing import Dict, List, NoReturn, Optional, Set, Tuple, Union

from libravenbench import errors
from libravenbench import logging_utils
from libravenbench.raven import lexer
from libravenbench.raven import nodes
from libravenbench.raven import values

logging_utils.SetUpLogger(__name__)
logger = logging_utils.GetLogger(__name__)

HOOK_TABLE_KEYWORD = 'context_struct'

REG_STATE = 'frb_reg_state'
MEM_READ = 'frb_mem_read'
REPORT_REACHED = 'report_reached'
REPORT_TRIGGERED = 'report_detected_triggered'
REPORT_INTRINSICS = (REPORT_REACHED, REPORT_TRIGGERED)
INTRINSIC_ARITY = {
    REG_STATE: 1,
    MEM_READ: 2,
    REPORT_REACHED: 1,
    REPORT_TRIGGERED: 1,
}

_TYPE_WORDS = {'unsigned', 'signed', 'char', 'short', 'int', 'long'}
_NAMED_TYPES = {
    name for name in values.TYPE_NAMES if ' ' not in name
} - _TYPE_WORDS

_UNSUPPORTED_KEYWORDS = {
    'struct', 'union', 'enum', 'typedef', 'switch', 'case', 'default', 'goto',
    'do', 'float', 'double', 'sizeof', 'extern', 'const', 'volatile',
    'register', 'auto', 'inline', 'asm',
}

_ASSIGN_OPS = ('=', '+=', '-=', '*=', '/=', '%=', '&=', '|=', '^=', '<<=',
               '>>=')

# Binary operator precedence, loosest first.
_BINARY_LEVELS = (
    ('||',),
    ('&&',),
    ('|',),
    ('^',),
    ('&',),
    ('==', '!='),
    ('<', '>', '<=', '>='),
    ('<<', '>>'),
    ('+', '-'),
    ('*', '/', '%'),
)

MAX_ADDRESS = (1 << 64) - 1


@dataclasses.dataclass(frozen=True)
class RavenSource:
  """The text of a Raven and where it came from.

  Attributes:
    text (str): UTF-8 decoded source text.
    origin (str): File path or label used in diagnostics.
  """
  text: str
  origin: str = '<raven>'


class _Parser:
  """Recursive descent parser producing an unresolved RavenProgram."""

  def __init__(self, source: RavenSource) -> None:
    self.origin = source.origin
    self.tokens = lexer.Lexer(source.text, source.origin).Tokenize()
    self.pos = 0

  # Token helpers

  @property
  def current(self) -> lexer.Token:
    return self.tokens[self.pos]

  def _Peek(self, offset: int = 1) -> lexer.Token:
    return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

  def _Fail(self,
            message: str,
            token: Optional[lexer.Token] = None) -> NoReturn:
    token = token or self.current
    raise errors.RavenSyntaxError(
        errors.Diagnostic(message, self.origin, token.line, token.column),
        __name__)

  def _Unsupported(self, construct: str, token: lexer.Token) -> NoReturn:
    raise errors.RavenSemanticError(
        errors.Diagnostic('unsupported construct {0:s}'.format(construct),
                          self.origin, token.line, token.column), __name__)

  def _IsPunct(self, text: str, token: Optional[lexer.Token] = None) -> bool:
    token = token or self.current
    return token.kind == lexer.PUNCT and token.text == text

  def _IsIdent(self, text: str, token: Optional[lexer.Token] = None) -> bool:
    token = token or self.current
    return token.kind == lexer.IDENT and token.text == text

  def _Next(self) -> lexer.Token:
    token = self.current
    if token.kind != lexer.EOF:
      self.pos += 1
    return token

  def _Accept(self, text: str) -> bool:
    if self._IsPunct(text):
      self._Next()
      return True
    return False

  def _Expect(self, text: str) -> lexer.Token:
    if not self._IsPunct(text):
      found = self.current.text or 'end of input'
      self._Fail("expected '{0:s}' but found '{1:s}'".format(text, found))
    return self._Next()

  def _ExpectIdent(self) -> lexer.Token:
    token = self.current
    if token.kind != lexer.IDENT:
      self._Fail("expected identifier but found '{0:s}'".format(
          token.text or 'end of input'))
    self._CheckKeyword(token)
    return self._Next()

  def _CheckKeyword(self, token: lexer.Token) -> None:
    if token.kind == lexer.IDENT and token.text in _UNSUPPORTED_KEYWORDS:
      self._Unsupported(token.text, token)

  def _StartsType(self, token: Optional[lexer.Token] = None) -> bool:
    token = token or self.current
    return token.kind == lexer.IDENT and (
        token.text in _TYPE_WORDS or token.text in _NAMED_TYPES or
        token.text == 'void')

  # Types

  def _ParseTypeName(self, allow_void: bool = False) -> str:
    """Parses a type spelling such as 'uint32_t' or 'unsigned int'."""
    first = self.current
    if self._IsIdent('void'):
      if not allow_void:
        self._Fail("'void' is only allowed as a function return type")
      self._Next()
      return 'void'
    if first.text in _NAMED_TYPES:
      self._Next()
      return first.text
    words = []
    while (self.current.kind == lexer.IDENT and
           self.current.text in _TYPE_WORDS):
      words.append(self._Next().text)
    spelling = ' '.join(words)
    if spelling not in values.TYPE_NAMES:
      self._Fail("unknown type '{0:s}'".format(spelling or first.text), first)
    return spelling

  # Top level

  def ParseProgram(self) -> Tuple[Optional[str], List[nodes.HookEntry], List[
      nodes.Function], List[nodes.GlobalDecl], Optional[lexer.Token]]:
    """Parses all top-level items.

    Returns:
      tuple: (table name, hook entries, functions, globals, table token).
    """
    table_name = None  # type: Optional[str]
    table_token = None  # type: Optional[lexer.Token]
    hooks = []  # type: List[nodes.HookEntry]
    functions = []  # type: List[nodes.Function]
    global_decls = []  # type: List[nodes.GlobalDecl]
    while self.current.kind != lexer.EOF:
      token = self.current
      self._CheckKeyword(token)
      if self._IsIdent(HOOK_TABLE_KEYWORD):
        if table_name is not None:
          self._Fail('duplicate hook table', token)
        table_token = token
        table_name, hooks = self._ParseHookTable()
        continue
      if self._IsIdent('static'):
        self._Next()
        continue
      if not self._StartsType():
        self._Fail("expected declaration but found '{0:s}'".format(
            token.text))
      type_name = self._ParseTypeName(allow_void=True)
      name = self._ExpectIdent()
      if self._IsPunct('('):
        functions.append(self._ParseFunction(type_name, name))
      else:
        if type_name == 'void':
          self._Fail("variable '{0:s}' declared void".format(name.text), name)
        global_decls.append(self._ParseGlobal(type_name, name))
    return table_name, hooks, functions, global_decls, table_token

  def _ParseHookTable(self) -> Tuple[str, List[nodes.HookEntry]]:
    """Parses 'context_struct NAME[] = { {addr, fn}, ... } [;]'."""
    self._Next()
    name = self._ExpectIdent().text
    self._Expect('[')
    self._Expect(']')
    self._Expect('=')
    self._Expect('{')
    entries = []  # type: List[nodes.HookEntry]
    while not self._IsPunct('}'):
      start = self._Expect('{')
      address_token = self.current
      if address_token.kind != lexer.NUMBER:
        self._Fail('hook address must be an integer literal', address_token)
      self._Next()
      address = lexer.ParseIntegerLiteral(address_token.text)[0]
      if address > MAX_ADDRESS:
        self._Fail('hook address does not fit in 64 bits', address_token)
      self._Expect(',')
      function_name = self._ExpectIdent().text
      self._Expect('}')
      entries.append(
          nodes.HookEntry(address, function_name, start.line, start.column))
      if not self._Accept(','):
        break
    self._Expect('}')
    self._Accept(';')
    return name, entries

  def _ParseFunction(self, return_type: str,
                     name: lexer.Token) -> nodes.Function:
    self._Expect('(')
    if self._IsIdent('void') and self._IsPunct(')', self._Peek()):
      self._Next()
    if not self._IsPunct(')'):
      raise errors.RavenSemanticError(
          errors.Diagnostic(
              "function parameters not supported in '{0:s}'".format(
                  name.text), self.origin, self.current.line,
              self.current.column), __name__)
    self._Next()
    if not self._IsPunct('{'):
      self._Fail("expected function body for '{0:s}'".format(name.text))
    body = self._ParseBlock()
    return nodes.Function(return_type, name.text, body, name.line,
                          name.column)

  def _ParseGlobal(self, type_name: str,
                   name: lexer.Token) -> nodes.GlobalDecl:
    size = None  # type: Optional[int]
    is_array = False
    if self._Accept('['):
      is_array = True
      if self.current.kind == lexer.NUMBER:
        size = lexer.ParseIntegerLiteral(self._Next().text)[0]
        if size <= 0:
          self._Fail('array size must be positive', name)
      self._Expect(']')
    init = ()  # type: Tuple[nodes.Expression, ...]
    if self._Accept('='):
      if is_array:
        self._Expect('{')
        items = []  # type: List[nodes.Expression]
        while not self._IsPunct('}'):
          items.append(self._ParseConditional())
          if not self._Accept(','):
            break
        self._Expect('}')
        init = tuple(items)
      else:
        init = (self._ParseConditional(),)
    if is_array and size is None:
      if not init:
        self._Fail("array '{0:s}' needs a size or an initialiser".format(
            name.text), name)
      size = len(init)
    if self._IsPunct(','):
      self._Fail('one declaration per statement')
    self._Expect(';')
    return nodes.GlobalDecl(type_name, name.text, size, init, name.line,
                            name.column)

  # Statements

  def _ParseBlock(self) -> nodes.Block:
    start = self._Expect('{')
    statements = []  # type: List[nodes.Statement]
    while not self._IsPunct('}'):
      if self.current.kind == lexer.EOF:
        self._Fail("expected '}' before end of input")
      statements.append(self._ParseStatement())
    self._Next()
    return nodes.Block(tuple(statements), start.line, start.column)

  def _ParseLocal(self) -> nodes.LocalDecl:
    start = self.current
    type_name = self._ParseTypeName()
    name = self._ExpectIdent()
    if self._IsPunct('['):
      self._Unsupported('local array', self.current)
    init = None  # type: Optional[nodes.Expression]
    if self._Accept('='):
      init = self._ParseExpression()
    if self._IsPunct(','):
      self._Fail('one declaration per statement')
    return nodes.LocalDecl(type_name, name.text, init, start.line,
                           start.column)

  def _ParseStatement(self) -> nodes.Statement:
    token = self.current
    self._CheckKeyword(token)
    if self._IsPunct('{'):
      return self._ParseBlock()
    if self._IsPunct(';'):
      self._Next()
      return nodes.Empty(token.line, token.column)
    if token.kind == lexer.IDENT:
      keyword = token.text
      if keyword == 'if':
        self._Next()
        self._Expect('(')
        condition = self._ParseExpression()
        self._Expect(')')
        then = self._ParseStatement()
        otherwise = None  # type: Optional[nodes.Statement]
        if self._IsIdent('else'):
          self._Next()
          otherwise = self._ParseStatement()
        return nodes.If(condition, then, otherwise, token.line, token.column)
      if keyword == 'while':
        self._Next()
        self._Expect('(')
        condition = self._ParseExpression()
        self._Expect(')')
        return nodes.While(condition, self._ParseStatement(), token.line,
                           token.column)
      if keyword == 'for':
        return self._ParseFor()
      if keyword in ('break', 'continue'):
        self._Next()
        self._Expect(';')
        if keyword == 'break':
          return nodes.Break(token.line, token.column)
        return nodes.Continue(token.line, token.column)
      if keyword == 'return':
        self._Next()
        value = None  # type: Optional[nodes.Expression]
        if not self._IsPunct(';'):
          value = self._ParseExpression()
        self._Expect(';')
        return nodes.Return(value, token.line, token.column)
      if keyword == 'static':
        self._Unsupported('static local', token)
      if self._StartsType():
        local = self._ParseLocal()
        self._Expect(';')
        return local
    expr = self._ParseExpression()
    self._Expect(';')
    return nodes.ExprStmt(expr, token.line, token.column)

  def _ParseFor(self) -> nodes.For:
    token = self._Next()
    self._Expect('(')
    init = None  # type: Optional[Union[nodes.ExprStmt, nodes.LocalDecl]]
    if not self._IsPunct(';'):
      if self._StartsType():
        init = self._ParseLocal()
      else:
        start = self.current
        init = nodes.ExprStmt(self._ParseExpression(), start.line,
                              start.column)
    self._Expect(';')
    condition = None  # type: Optional[nodes.Expression]
    if not self._IsPunct(';'):
      condition = self._ParseExpression()
    self._Expect(';')
    step = None  # type: Optional[nodes.Expression]
    if not self._IsPunct(')'):
      step = self._ParseExpression()
    self._Expect(')')
    body = self._ParseStatement()
    return nodes.For(init, condition, step, body, token.line, token.column)

  # Expressions

  def _ParseExpression(self) -> nodes.Expression:
    expr = self._ParseAssignment()
    if self._IsPunct(','):
      self._Unsupported('comma operator', self.current)
    return expr

  def _ParseAssignment(self) -> nodes.Expression:
    start = self.current
    target = self._ParseConditional()
    if self.current.kind == lexer.PUNCT and self.current.text in _ASSIGN_OPS:
      op = self._Next()
      if not isinstance(target, (nodes.Name, nodes.Index)):
        self._Fail('invalid assignment target', op)
      value = self._ParseAssignment()
      return nodes.Assign(op.text, target, value, start.line, start.column)
    return target

  def _ParseConditional(self) -> nodes.Expression:
    start = self.current
    condition = self._ParseBinary(0)
    if self._Accept('?'):
      then = self._ParseExpression()
      self._Expect(':')
      otherwise = self._ParseConditional()
      return nodes.Conditional(condition, then, otherwise, start.line,
                               start.column)
    return condition

  def _ParseBinary(self, level: int) -> nodes.Expression:
    if level == len(_BINARY_LEVELS):
      return self._ParseUnary()
    left = self._ParseBinary(level + 1)
    while (self.current.kind == lexer.PUNCT and
           self.current.text in _BINARY_LEVELS[level]):
      op = self._Next()
      right = self._ParseBinary(level + 1)
      left = nodes.Binary(op.text, left, right, op.line, op.column)
    return left

  def _ParseUnary(self) -> nodes.Expression:
    token = self.current
    if token.kind == lexer.PUNCT:
      if token.text in ('*', '&'):
        raise errors.RavenSemanticError(
            errors.Diagnostic('pointers not supported', self.origin,
                              token.line, token.column), __name__)
      if token.text in ('-', '+', '!', '~'):
        self._Next()
        return nodes.Unary(token.text, self._ParseUnary(), token.line,
                           token.column)
      if token.text in ('++', '--'):
        self._Next()
        target = self._ParseUnary()
        if not isinstance(target, (nodes.Name, nodes.Index)):
          self._Fail('invalid increment target', token)
        return nodes.IncDec(token.text, True, target, token.line,
                            token.column)
      if token.text == '(' and self._StartsType(self._Peek()):
        self._Next()
        type_name = self._ParseTypeName()
        if self._IsPunct('*'):
          raise errors.RavenSemanticError(
              errors.Diagnostic('pointers not supported', self.origin,
                                self.current.line, self.current.column),
              __name__)
        self._Expect(')')
        return nodes.Cast(type_name, self._ParseUnary(), token.line,
                          token.column)
    return self._ParsePostfix()

  def _ParsePostfix(self) -> nodes.Expression:
    expr = self._ParsePrimary()
    while True:
      token = self.current
      if self._IsPunct('[') or self._IsPunct('('):
        if not isinstance(expr, nodes.Name):
          self._Fail('only named arrays and functions can be subscripted or '
                     'called', token)
        if self._Accept('['):
          index = self._ParseExpression()
          self._Expect(']')
          expr = nodes.Index(expr.name, index, expr.line, expr.column)
        else:
          self._Next()
          args = []  # type: List[nodes.Expression]
          while not self._IsPunct(')'):
            args.append(self._ParseAssignment())
            if not self._Accept(','):
              break
          self._Expect(')')
          expr = nodes.Call(expr.name, tuple(args), expr.line, expr.column)
      elif self._IsPunct('++') or self._IsPunct('--'):
        if not isinstance(expr, (nodes.Name, nodes.Index)):
          self._Fail('invalid increment target', token)
        self._Next()
        expr = nodes.IncDec(token.text, False, expr, token.line, token.column)
      elif self._IsPunct('.') or self._IsPunct('->'):
        self._Unsupported('member access', token)
      else:
        return expr

  def _ParsePrimary(self) -> nodes.Expression:
    token = self.current
    if token.kind == lexer.NUMBER:
      self._Next()
      value, is_decimal, unsigned, long_ = lexer.ParseIntegerLiteral(
          token.text)
      int_type = values.LiteralType(value, is_decimal, unsigned, long_)
      return nodes.IntLiteral(token.text, int_type.Normalize(value), int_type,
                              token.line, token.column)
    if token.kind == lexer.STRING:
      self._Next()
      return nodes.StringLiteral(token.text, token.line, token.column)
    if token.kind == lexer.IDENT:
      self._CheckKeyword(token)
      if self._StartsType():
        self._Fail("unexpected type name '{0:s}'".format(token.text))
      self._Next()
      return nodes.Name(token.text, token.line, token.column)
    if self._Accept('('):
      expr = self._ParseExpression()
      self._Expect(')')
      return expr
    self._Fail("unexpected '{0:s}'".format(token.text or 'end of input'))


class _Resolver:
  """Checks names and intrinsic usage of a parsed program.

  Attributes:
    bug_ids (List[str]): Bug IDs found in report_* calls, first-seen order.
  """

  def __init__(self, origin: str, functions: List[nodes.Function],
               global_decls: List[nodes.GlobalDecl]) -> None:
    self.origin = origin
    self.bug_ids = []  # type: List[str]
    self.functions = {}  # type: Dict[str, nodes.Function]
    self.globals = {}  # type: Dict[str, nodes.GlobalDecl]
    for function in functions:
      self._Declare(function.name, function)
      self.functions[function.name] = function
    for decl in global_decls:
      self._Declare(decl.name, decl)
      self.globals[decl.name] = decl
    self._scopes = []  # type: List[Set[str]]
    self._loop_depth = 0

  def _Fail(self, message: str, node: object) -> NoReturn:
    raise errors.RavenSemanticError(
        errors.Diagnostic(message, self.origin, getattr(node, 'line', 0),
                          getattr(node, 'column', 0)), __name__)

  def _Declare(self, name: str, node: object) -> None:
    if name in INTRINSIC_ARITY:
      self._Fail("'{0:s}' is a reserved intrinsic name".format(name), node)
    if name in self.functions or name in self.globals:
      self._Fail("duplicate definition of '{0:s}'".format(name), node)

  def _IsLocal(self, name: str) -> bool:
    return any(name in scope for scope in self._scopes)

  def CheckGlobal(self, decl: nodes.GlobalDecl) -> None:
    if decl.size is not None and len(decl.init) > decl.size:
      self._Fail("too many initialisers for '{0:s}'".format(decl.name), decl)
    for expr in decl.init:
      self._CheckConstant(expr)
      self._Fold(expr)

  def _Fold(self, expr: nodes.Expression) -> values.Value:
    """Evaluates a constant expression the way the interpreter does."""
    if isinstance(expr, nodes.IntLiteral):
      return values.Value(expr.value, expr.type)
    if isinstance(expr, nodes.Cast):
      return self._Fold(expr.operand).Cast(values.TYPE_NAMES[expr.type_name])
    if isinstance(expr, nodes.Unary):
      return values.Unary(expr.op, self._Fold(expr.operand))
    if isinstance(expr, nodes.Conditional):
      if self._Fold(expr.condition).IsTrue():
        return self._Fold(expr.then)
      return self._Fold(expr.otherwise)
    if not isinstance(expr, nodes.Binary):
      self._Fail('global initialiser must be a constant expression', expr)
    left = self._Fold(expr.left)
    if expr.op in ('&&', '||'):
      if left.IsTrue() == (expr.op == '||'):
        return values.Value(int(left.IsTrue()), values.INT32)
      return values.Value(int(self._Fold(expr.right).IsTrue()), values.INT32)
    right = self._Fold(expr.right)
    if expr.op in values.COMPARISON_OPS:
      return values.Compare(expr.op, left, right)
    try:
      return values.Arithmetic(expr.op, left, right)
    except ZeroDivisionError:
      self._Fail('division by zero in global initialiser', expr)
    except ValueError as exception:
      self._Fail(str(exception), expr)

  def _CheckConstant(self, expr: nodes.Expression) -> None:
    if isinstance(expr, nodes.IntLiteral):
      return
    if isinstance(expr, (nodes.Unary, nodes.Cast)):
      self._CheckConstant(expr.operand)
    elif isinstance(expr, nodes.Binary):
      self._CheckConstant(expr.left)
      self._CheckConstant(expr.right)
    elif isinstance(expr, nodes.Conditional):
      self._CheckConstant(expr.condition)
      self._CheckConstant(expr.then)
      self._CheckConstant(expr.otherwise)
    else:
      self._Fail('global initialiser must be a constant expression', expr)

  def CheckFunction(self, function: nodes.Function) -> None:
    self._scopes = [set()]
    self._loop_depth = 0
    self._CheckBlock(function.body, new_scope=False)

  def _CheckBlock(self, block: nodes.Block, new_scope: bool = True) -> None:
    if new_scope:
      self._scopes.append(set())
    for statement in block.statements:
      self._CheckStatement(statement)
    if new_scope:
      self._scopes.pop()

  def _CheckLocal(self, local: nodes.LocalDecl) -> None:
    if local.init is not None:
      self._CheckExpression(local.init)
    if local.name in self._scopes[-1]:
      self._Fail("duplicate local '{0:s}'".format(local.name), local)
    if local.name in INTRINSIC_ARITY or local.name in self.functions:
      self._Fail("local '{0:s}' shadows a function".format(local.name), local)
    self._scopes[-1].add(local.name)

  def _CheckStatement(self, statement: nodes.Statement) -> None:
    if isinstance(statement, nodes.Block):
      self._CheckBlock(statement)
    elif isinstance(statement, nodes.ExprStmt):
      self._CheckExpression(statement.expr)
    elif isinstance(statement, nodes.LocalDecl):
      self._CheckLocal(statement)
    elif isinstance(statement, nodes.If):
      self._CheckExpression(statement.condition)
      self._CheckScoped(statement.then)
      if statement.otherwise is not None:
        self._CheckScoped(statement.otherwise)
    elif isinstance(statement, nodes.While):
      self._CheckExpression(statement.condition)
      self._loop_depth += 1
      self._CheckScoped(statement.body)
      self._loop_depth -= 1
    elif isinstance(statement, nodes.For):
      self._scopes.append(set())
      if isinstance(statement.init, nodes.LocalDecl):
        self._CheckLocal(statement.init)
      elif statement.init is not None:
        self._CheckExpression(statement.init.expr)
      for expr in (statement.condition, statement.step):
        if expr is not None:
          self._CheckExpression(expr)
      self._loop_depth += 1
      self._CheckScoped(statement.body)
      self._loop_depth -= 1
      self._scopes.pop()
    elif isinstance(statement, (nodes.Break, nodes.Continue)):
      if not self._loop_depth:
        self._Fail('{0:s} outside of a loop'.format(
            'break' if isinstance(statement, nodes.Break) else 'continue'),
                   statement)
    elif isinstance(statement, nodes.Return):
      if statement.value is not None:
        self._CheckExpression(statement.value)

  def _CheckScoped(self, statement: nodes.Statement) -> None:
    self._scopes.append(set())
    self._CheckStatement(statement)
    self._scopes.pop()

  def _CheckTarget(self, target: Union[nodes.Name, nodes.Index]) -> None:
    if isinstance(target, nodes.Index) and target.name == REG_STATE:
      self._Fail('cannot assign to {0:s}'.format(REG_STATE), target)
    self._CheckExpression(target)

  def _CheckExpression(self, expr: nodes.Expression) -> None:
    if isinstance(expr, nodes.IntLiteral):
      return
    if isinstance(expr, nodes.StringLiteral):
      self._Fail('string literals are only allowed as report_* bug IDs', expr)
    if isinstance(expr, nodes.Name):
      if self._IsLocal(expr.name):
        return
      if expr.name in self.globals:
        if self.globals[expr.name].size is not None:
          self._Fail("array '{0:s}' used without index".format(expr.name),
                     expr)
        return
      if expr.name in self.functions or expr.name in INTRINSIC_ARITY:
        self._Fail("function '{0:s}' used as a value".format(expr.name), expr)
      self._Fail("unknown identifier '{0:s}'".format(expr.name), expr)
    elif isinstance(expr, nodes.Index):
      if expr.name != REG_STATE:
        if self._IsLocal(expr.name) or (
            expr.name in self.globals and
            self.globals[expr.name].size is None):
          self._Fail("'{0:s}' is not an array".format(expr.name), expr)
        if expr.name not in self.globals:
          self._Fail("unknown identifier '{0:s}'".format(expr.name), expr)
      self._CheckExpression(expr.index)
    elif isinstance(expr, nodes.Call):
      self._CheckCall(expr)
    elif isinstance(expr, (nodes.Unary, nodes.Cast)):
      self._CheckExpression(expr.operand)
    elif isinstance(expr, nodes.Binary):
      self._CheckExpression(expr.left)
      self._CheckExpression(expr.right)
    elif isinstance(expr, nodes.Conditional):
      self._CheckExpression(expr.condition)
      self._CheckExpression(expr.then)
      self._CheckExpression(expr.otherwise)
    elif isinstance(expr, nodes.Assign):
      self._CheckTarget(expr.target)
      self._CheckExpression(expr.value)
    elif isinstance(expr, nodes.IncDec):
      self._CheckTarget(expr.target)

  def _CheckCall(self, call: nodes.Call) -> None:
    if call.name in INTRINSIC_ARITY:
      if len(call.args) != INTRINSIC_ARITY[call.name]:
        self._Fail('{0:s} takes {1:d} argument(s), got {2:d}'.format(
            call.name, INTRINSIC_ARITY[call.name], len(call.args)), call)
      if call.name in REPORT_INTRINSICS:
        bug_id = call.args[0]
        if not isinstance(bug_id, nodes.StringLiteral) or not bug_id.value:
          self._Fail('{0:s} expects a bug ID string literal'.format(
              call.name), call)
        if bug_id.value not in self.bug_ids:
          self.bug_ids.append(bug_id.value)
        return
      for arg in call.args:
        self._CheckExpression(arg)
      return
    if call.name not in self.functions:
      if self._IsLocal(call.name) or call.name in self.globals:
        self._Fail("'{0:s}' is not a function".format(call.name), call)
      self._Fail("unknown function '{0:s}'".format(call.name), call)
    if call.args:
      self._Fail('function arguments not supported', call)


def ParseRaven(source: RavenSource) -> nodes.RavenProgram:
  """Parses and resolves a Raven source.

  Args:
    source (RavenSource): The Raven text and its origin.

  Returns:
    RavenProgram: The parsed program.

  Raises:
    RavenSyntaxError: If the text is not valid Raven syntax.
    RavenSemanticError: If the program uses unknown names, references an
        undefined hook function, or uses an unsupported C construct.
  """
  if not source.text.strip():
    raise errors.RavenSyntaxError(
        errors.Diagnostic('empty Raven source', source.origin, 1, 1),
        __name__)
  parser = _Parser(source)
  table_name, hooks, functions, global_decls, table_token = (
      parser.ParseProgram())
  if table_name is None:
    raise errors.RavenSemanticError(
        errors.Diagnostic(
            'missing {0:s} hook table'.format(HOOK_TABLE_KEYWORD),
            source.origin, 1, 1), __name__)

  resolver = _Resolver(source.origin, functions, global_decls)
  for decl in global_decls:
    resolver.CheckGlobal(decl)
  for hook in hooks:
    if hook.function_name not in resolver.functions:
      raise errors.RavenSemanticError(
          errors.Diagnostic(
              "hook entry references undefined function '{0:s}'".format(
                  hook.function_name), source.origin, hook.line, hook.column),
          __name__)
  for function in functions:
    resolver.CheckFunction(function)

  warnings = []  # type: List[str]
  if not hooks:
    line = table_token.line if table_token else 0
    warnings.append(str(errors.Diagnostic('no reflection points',
                                          source.origin, line, 1)))
  for warning in warnings:
    logger.warning(warning)
  return nodes.RavenProgram(
      table_name=table_name,
      hooks=tuple(hooks),
      functions=tuple(functions),
      globals=tuple(global_decls),
      bug_ids=tuple(resolver.bug_ids),
      origin=source.origin,
      warnings=tuple(warnings))


def ParseRavenFile(path: str) -> nodes.RavenProgram:
  """Reads and parses a .raven file.

  Args:
    path (str): Path of the file.

  Returns:
    RavenProgram: The parsed program, with the path as its origin.

  Raises:
    RavenSyntaxError: If the file is not valid UTF-8 or not valid Raven.
  """
  try:
    with io.open(path, 'r', encoding='utf-8') as source_file:
      text = source_file.read()
  except UnicodeDecodeError as exception:
    raise errors.RavenSyntaxError(
        errors.Diagnostic('not UTF-8: {0!s}'.format(exception), path),
        __name__) from exception
  return ParseRaven(RavenSource(text, path))
