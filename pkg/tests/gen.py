"""Random inputs built from package primitives (letters, brackets, products)."""
from fractions import Fraction as F

from bseries.words import WMap, convolution, lie_bracket, unit_wmap, zero_wmap


def rat(rng, num=4, den=3):
    return F(int(rng.integers(-num, num + 1)), int(rng.integers(1, den + 1)))


def letter_element(alphabet, cap, a, c=1):
    return WMap(alphabet, cap, {(a,): F(c) if not isinstance(c, complex) else c})


def random_lie_element(rng, alphabet, cap, brackets=4, max_len=None):
    """Random combination of nested brackets of single letters (words up to ``max_len``)."""
    max_len = cap if max_len is None else max_len
    gens = [letter_element(alphabet, cap, a) for a in alphabet]
    pool = [(g, 1) for g in gens]
    for _ in range(brackets):
        x, n = pool[int(rng.integers(len(pool)))]
        if n + 1 > max_len:
            continue
        pool.append((lie_bracket(x, gens[int(rng.integers(len(gens)))]), n + 1))
    acc = zero_wmap(alphabet, cap)
    for el, _ in pool:
        acc = acc + el * rat(rng)
    return acc


def letter_exponential(alphabet, cap, a, c):
    """``exp(c a)``: coefficient ``c^n/n!`` on ``a^n``."""
    coeffs = {(): F(1)}
    term = F(1)
    for n in range(1, cap + 1):
        term = term * c / n
        coeffs[(a,) * n] = term
    return WMap(alphabet, cap, coeffs)


def random_group_element(rng, alphabet, cap, factors=4):
    """Convolution product of letter exponentials: always a group element."""
    acc = unit_wmap(alphabet, cap)
    for _ in range(factors):
        a = alphabet[int(rng.integers(len(alphabet)))]
        acc = convolution(acc, letter_exponential(alphabet, cap, a, rat(rng)))
    return acc


def random_wmap(rng, alphabet, cap, complex_values=False):
    from bseries.words import words_up_to

    if complex_values:
        return WMap(alphabet, cap, {w: complex(rng.normal(), rng.normal()) for w in words_up_to(alphabet, cap)})
    return WMap(alphabet, cap, {w: rat(rng) for w in words_up_to(alphabet, cap)})
