"""
Words, shuffles and iterated integrals
======================================

Word series coefficients of a time-dependent problem are iterated integrals.
They satisfy the shuffle relations, and composing two word series
convolves their coefficients.
"""
from fractions import Fraction

import numpy as np

from bseries.polynomials import Poly, PolyMap
from bseries.vectorfields import dsw_eval, wordseries_eval
from bseries.words import (
    LambdaSpec,
    WMap,
    antipode_inverse,
    convolution,
    is_group_element,
    iterated_integral_coeffs,
    lie_bracket,
    shuffle,
    unit_wmap,
)

print("ab ш a =", dict(shuffle(("a", "b"), ("a",))))

# Constant letters: alpha_w(t) = t^n / n!, shuffle relations exact
alpha = iterated_integral_coeffs(LambdaSpec.constant(("a", "b")), Fraction(2), 3)
print("alpha_aba(2) =", alpha[("a", "b", "a")], "  group element:", bool(is_group_element(alpha, tol=0)))

# Oscillatory letters e^{+-it}: shuffle relations hold to rounding
osc = iterated_integral_coeffs(LambdaSpec.oscillatory([(-1,), (1,)], (1.0,)), 2.5, 4)
print("oscillatory group element:", bool(is_group_element(osc, tol=1e-12)))
print("alpha_(1)(-1)(2.5) =", np.round(osc[((1,), (-1,))], 12))

# The antipode inverts group elements under convolution
one = unit_wmap(("a", "b"), 3)
print("alpha * S(alpha) = 1:", convolution(alpha, antipode_inverse(alpha)) == one)

# A Lie element evaluated two ways: as a word series and by nested commutators
x, y = Poly.variable(2, 0), Poly.variable(2, 1)
fields = {"a": PolyMap([y * y, x * Fraction(1, 2)], 2), "b": PolyMap([x * y - 1, y], 2)}
a = WMap(("a", "b"), 3, {("a",): 1})
b = WMap(("a", "b"), 3, {("b",): 1})
br = lie_bracket(a, lie_bracket(a, b))
pt = [Fraction(1, 3), Fraction(-2, 5)]
show = lambda v: "(" + ", ".join(map(str, v)) + ")"  # noqa: E731
print("[a,[a,b]] by commutators:", show(dsw_eval(br, fields, pt)), " as a word series:", show(wordseries_eval(br, fields, pt)))
