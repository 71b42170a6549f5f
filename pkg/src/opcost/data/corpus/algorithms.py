"""Small reference algorithms used by the parser corpus."""

import math

SCALE = 2 ** 10


def gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def mean_sq(xs):
    total = 0.0
    for x in xs:
        total += x * x
    return total / len(xs)


def evens(xs):
    return [x for x in xs if x % 2 == 0]


class Stack:
    def __init__(self):
        self.items = []

    def push(self, v):
        self.items.append(v)
        if len(self.items) > 100 and not v:
            raise OverflowError("stack full")
