"""
Scalar expressions in the parameter t: parser, printer, evaluator and
symbolic differentiation.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := base ('^' integer)?
    base   := number | 't' | ident '(' expr ')' | '(' expr ')' | '-' base
    ident  := sin | cos | exp | log | sqrt

The Unicode minus sign (U+2212) is accepted wherever '-' is.
"""
import math
import re
from dataclasses import dataclass
from functools import singledispatch

import numpy as np

FUNCTIONS = ('sin', 'cos', 'exp', 'log', 'sqrt')
VARIABLE = 't'


class ExpressionError(ValueError):
    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = '{} (at byte offset {})'.format(message, offset)
        super(ExpressionError, self).__init__(message)


class ExpressionSyntaxError(ExpressionError):
    pass


class UnknownIdentifierError(ExpressionError):
    def __init__(self, identifier, offset):
        self.identifier = identifier
        super(UnknownIdentifierError, self).__init__('Unknown identifier {!r}'.format(identifier), offset)


class NonIntegerExponentError(ExpressionError):
    pass


class DomainError(ArithmeticError):
    """
    Raised when an expression is evaluated outside of its domain: log of a
    non-positive number, sqrt of a negative one, division by zero or overflow.
    """
    def __init__(self, reason, subexpression, t):
        self.reason = reason
        self.subexpression = subexpression
        self.t = t
        super(DomainError, self).__init__('{} in {} at t={!r}'.format(reason, to_source(subexpression), t))


@dataclass(frozen=True)
class Expr(object):
    precedence = 4


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    name: str = VARIABLE


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    left: Expr
    right: Expr
    symbol = '?'


@dataclass(frozen=True)
class Add(BinOp):
    precedence = 1
    symbol = '+'


@dataclass(frozen=True)
class Sub(BinOp):
    precedence = 1
    symbol = '-'


@dataclass(frozen=True)
class Mul(BinOp):
    precedence = 2
    symbol = '*'


@dataclass(frozen=True)
class Div(BinOp):
    precedence = 2
    symbol = '/'


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int
    precedence = 3


@dataclass(frozen=True)
class Call(Expr):
    func: str
    arg: Expr


ZERO = Num(0.0)
ONE = Num(1.0)


# parsing

TOKEN_RE = re.compile(r'''
    (?P<space>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()−])
''', re.VERBOSE)


@dataclass(frozen=True)
class Token(object):
    kind: str
    text: str
    offset: int


def tokenize(src):
    tokens = []
    position = 0
    byte_offset = 0
    while position < len(src):
        match = TOKEN_RE.match(src, position)
        if match is None:
            raise ExpressionSyntaxError('Unexpected character {!r}'.format(src[position]), byte_offset)
        text = match.group()
        kind = match.lastgroup
        if kind != 'space':
            if kind == 'op' and text == '−':
                text = '-'
            tokens.append(Token(kind, text, byte_offset))
        byte_offset += len(match.group().encode('utf-8'))
        position = match.end()
    tokens.append(Token('end', '', byte_offset))
    return tokens


class Parser(object):
    def __init__(self, src):
        self.tokens = tokenize(src)
        self.index = 0

    @property
    def current(self):
        return self.tokens[self.index]

    def advance(self):
        token = self.current
        self.index += 1
        return token

    def accept(self, *texts):
        if self.current.kind == 'op' and self.current.text in texts:
            return self.advance()
        return None

    def expect(self, text):
        token = self.accept(text)
        if token is None:
            raise self.unexpected('expected {!r}'.format(text))
        return token

    def unexpected(self, hint):
        token = self.current
        if token.kind == 'end':
            return ExpressionSyntaxError('Unexpected end of input, {}'.format(hint), token.offset)
        return ExpressionSyntaxError('Unexpected {!r}, {}'.format(token.text, hint), token.offset)

    def parse(self):
        expr = self.expr()
        if self.current.kind != 'end':
            raise self.unexpected('expected an operator or end of input')
        return expr

    def expr(self):
        node = self.term()
        while True:
            token = self.accept('+', '-')
            if token is None:
                return node
            node = (Add if token.text == '+' else Sub)(node, self.term())

    def term(self):
        node = self.factor()
        while True:
            token = self.accept('*', '/')
            if token is None:
                return node
            node = (Mul if token.text == '*' else Div)(node, self.factor())

    def factor(self):
        node = self.base()
        if self.accept('^') is None:
            return node
        return Pow(node, self.integer())

    def integer(self):
        offset = self.current.offset
        sign = 1
        token = self.accept('-', '+')
        if token is not None and token.text == '-':
            sign = -1
        token = self.current
        if token.kind != 'number' or not token.text.isdigit():
            if token.kind == 'end':
                raise ExpressionSyntaxError('Unexpected end of input, expected an integer exponent', token.offset)
            raise NonIntegerExponentError('Exponent must be an integer literal', offset)
        self.advance()
        return sign * int(token.text)

    def base(self):
        token = self.current
        if token.kind == 'number':
            self.advance()
            return Num(float(token.text))
        if token.kind == 'ident':
            self.advance()
            if token.text == VARIABLE:
                return Var()
            if token.text not in FUNCTIONS:
                raise UnknownIdentifierError(token.text, token.offset)
            self.expect('(')
            arg = self.expr()
            self.expect(')')
            return Call(token.text, arg)
        if self.accept('('):
            node = self.expr()
            self.expect(')')
            return node
        if self.accept('-'):
            return Neg(self.base())
        raise self.unexpected('expected a number, t, a function call or (')


def parse_expr(src):
    if not src or not src.strip():
        raise ExpressionSyntaxError('Empty expression', 0)
    return Parser(src).parse()


# printing

def format_number(value):
    if value < 0:
        return '(-{!r})'.format(-float(value))
    return repr(float(value))


def atom(expr):
    if isinstance(expr, (Num, Var, Call, Neg)):
        return to_source(expr)
    return '({})'.format(to_source(expr))


def to_source(expr):
    """
    Prints an expression back to the grammar. Parsing the result gives the
    same tree for every tree produced by the parser.
    """
    if isinstance(expr, Num):
        return format_number(expr.value)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Neg):
        return '-' + atom(expr.arg)
    if isinstance(expr, Call):
        return '{}({})'.format(expr.func, to_source(expr.arg))
    if isinstance(expr, Pow):
        return '{}^{}'.format(atom(expr.base) if not isinstance(expr.base, Neg) else to_source(expr.base),
                              expr.exponent)
    left = to_source(expr.left)
    if expr.left.precedence < expr.precedence:
        left = '({})'.format(left)
    right = to_source(expr.right)
    if expr.right.precedence <= expr.precedence:
        right = '({})'.format(right)
    return '{} {} {}'.format(left, expr.symbol, right)


# constant folding constructors

def is_number(expr, value=None):
    return isinstance(expr, Num) and (value is None or expr.value == value)


def add(left, right):
    if is_number(left) and is_number(right):
        return Num(left.value + right.value)
    if is_number(left, 0):
        return right
    if is_number(right, 0):
        return left
    return Add(left, right)


def sub(left, right):
    if is_number(left) and is_number(right):
        return Num(left.value - right.value)
    if is_number(right, 0):
        return left
    if is_number(left, 0):
        return neg(right)
    return Sub(left, right)


def mul(left, right):
    if is_number(left) and is_number(right):
        return Num(left.value * right.value)
    if is_number(left, 0) or is_number(right, 0):
        return ZERO
    if is_number(left, 1):
        return right
    if is_number(right, 1):
        return left
    return Mul(left, right)


def div(left, right):
    if is_number(left) and is_number(right) and right.value != 0:
        return Num(left.value / right.value)
    if is_number(right, 1):
        return left
    return Div(left, right)


def neg(arg):
    if is_number(arg):
        return Num(-arg.value)
    if isinstance(arg, Neg):
        return arg.arg
    return Neg(arg)


def power(base, exponent):
    if exponent == 0:
        return ONE
    if exponent == 1:
        return base
    if is_number(base) and (base.value != 0 or exponent > 0):
        return Num(base.value ** exponent)
    return Pow(base, exponent)


# differentiation

@singledispatch
def diff_expr(expr):
    """
    Exact derivative with respect to t. Total on valid trees; singularities
    (sqrt or log at the domain boundary) are left for evaluation to report.
    """
    raise TypeError('Cannot differentiate {!r}'.format(expr))


@diff_expr.register(Num)
def _(expr):
    return ZERO


@diff_expr.register(Var)
def _(expr):
    return ONE


@diff_expr.register(Neg)
def _(expr):
    return neg(diff_expr(expr.arg))


@diff_expr.register(Add)
def _(expr):
    return add(diff_expr(expr.left), diff_expr(expr.right))


@diff_expr.register(Sub)
def _(expr):
    return sub(diff_expr(expr.left), diff_expr(expr.right))


@diff_expr.register(Mul)
def _(expr):
    left, right = expr.left, expr.right
    return add(mul(diff_expr(left), right), mul(left, diff_expr(right)))


@diff_expr.register(Div)
def _(expr):
    numerator, denominator = expr.left, expr.right
    top = sub(mul(diff_expr(numerator), denominator), mul(numerator, diff_expr(denominator)))
    if is_number(top, 0):
        return ZERO
    return div(top, power(denominator, 2))


@diff_expr.register(Pow)
def _(expr):
    n = expr.exponent
    return mul(mul(Num(float(n)), power(expr.base, n - 1)), diff_expr(expr.base))


@diff_expr.register(Call)
def _(expr):
    u = expr.arg
    du = diff_expr(u)
    if is_number(du, 0):
        return ZERO
    if expr.func == 'sin':
        outer = Call('cos', u)
    elif expr.func == 'cos':
        outer = neg(Call('sin', u))
    elif expr.func == 'exp':
        outer = Call('exp', u)
    elif expr.func == 'log':
        return div(du, u)
    else:
        return div(du, mul(Num(2.0), Call('sqrt', u)))
    return mul(outer, du)


# evaluation

def domain_error(reason, expr, t, bad):
    index = int(np.flatnonzero(bad)[0])
    return DomainError(reason, expr, float(t[index]))


def checked(expr, t, values):
    bad = ~np.isfinite(values)
    if bad.any():
        raise domain_error('overflow', expr, t, bad)
    return values


@singledispatch
def _evaluate(expr, t):
    raise TypeError('Cannot evaluate {!r}'.format(expr))


@_evaluate.register(Num)
def _(expr, t):
    return np.full(t.shape, expr.value, dtype=float)


@_evaluate.register(Var)
def _(expr, t):
    return t.astype(float, copy=True)


@_evaluate.register(Neg)
def _(expr, t):
    return -_evaluate(expr.arg, t)


@_evaluate.register(Add)
def _(expr, t):
    return checked(expr, t, _evaluate(expr.left, t) + _evaluate(expr.right, t))


@_evaluate.register(Sub)
def _(expr, t):
    return checked(expr, t, _evaluate(expr.left, t) - _evaluate(expr.right, t))


@_evaluate.register(Mul)
def _(expr, t):
    return checked(expr, t, _evaluate(expr.left, t) * _evaluate(expr.right, t))


@_evaluate.register(Div)
def _(expr, t):
    numerator = _evaluate(expr.left, t)
    denominator = _evaluate(expr.right, t)
    zero = denominator == 0
    if zero.any():
        raise domain_error('division by zero', expr, t, zero)
    return checked(expr, t, numerator / denominator)


@_evaluate.register(Pow)
def _(expr, t):
    base = _evaluate(expr.base, t)
    if expr.exponent < 0:
        zero = base == 0
        if zero.any():
            raise domain_error('division by zero', expr, t, zero)
    with np.errstate(over='ignore'):
        return checked(expr, t, base ** float(expr.exponent))


@_evaluate.register(Call)
def _(expr, t):
    arg = _evaluate(expr.arg, t)
    if expr.func == 'log':
        bad = arg <= 0
        if bad.any():
            raise domain_error('log of a non-positive number', expr, t, bad)
        return np.log(arg)
    if expr.func == 'sqrt':
        bad = arg < 0
        if bad.any():
            raise domain_error('sqrt of a negative number', expr, t, bad)
        return np.sqrt(arg)
    if expr.func == 'exp':
        with np.errstate(over='ignore'):
            return checked(expr, t, np.exp(arg))
    return getattr(np, expr.func)(arg)


def evaluate(expr, t, strict=True):
    """
    Evaluates an expression on an array of parameter values.

    With strict=True the first domain violation raises DomainError. With
    strict=False a masked array is returned together with the list of
    DomainError values, one per offending sample.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    try:
        values = _evaluate(expr, t)
    except DomainError:
        if strict:
            raise
    else:
        return values if strict else (np.ma.masked_array(values, mask=np.zeros(t.shape, dtype=bool)), [])
    values = np.zeros(t.shape)
    mask = np.zeros(t.shape, dtype=bool)
    errors = []
    for index, value in enumerate(t):
        try:
            values[index] = _evaluate(expr, np.array([value]))[0]
        except DomainError as e:
            mask[index] = True
            errors.append(e)
    return np.ma.masked_array(values, mask=mask), errors


def eval_expr(expr, t):
    if not math.isfinite(t):
        raise ValueError('t must be finite, got {!r}'.format(t))
    return float(evaluate(expr, t)[0])

