"""Vacuum moments of ladder-operator words, and moments of heralded states.

This is the package's second, simulation-free route to expectation values of
the heralded amplifier output.  States of the form

    (1 + (kappa/N) a'b')^N  exp[rho (a'l' - a l)] |0>

are handled by commuting the pair-creation operator to the right with the
Bogoliubov rules and normal-ordering the leftover polynomial word by word.
Everything is exact rational-coefficient algebra on tiny words, so it shares
no code path (and no truncation) with the Fock-tensor simulation.
"""

from __future__ import annotations

import math
from functools import lru_cache
from math import comb

__all__ = ["vacuum_expectation", "heralded_moment", "eps_via_moments"]

# A word is a tuple of (mode, is_dagger) applied left to right as written,
# e.g. ((A, True), (A, False)) is a'a.  A polynomial is a list of
# (coefficient, word) pairs.

Word = tuple[tuple[str, bool], ...]


@lru_cache(maxsize=200_000)
def vacuum_expectation(word: Word) -> float:
    """<0| w1 w2 ... wk |0> via [m, m'] = 1, recursively."""
    if not word:
        return 1.0
    # a leading creator kills the bra; a trailing annihilator kills the ket
    if word[0][1] or not word[-1][1]:
        return 0.0
    # find an (annihilator, creator) adjacent pair and commute
    for i in range(len(word) - 1):
        (m1, d1), (m2, d2) = word[i], word[i + 1]
        if not d1 and d2:
            swapped = word[:i] + (word[i + 1], word[i]) + word[i + 2:]
            val = vacuum_expectation(swapped)
            if m1 == m2:
                val += vacuum_expectation(word[:i] + word[i + 2:])
            return val
    return 0.0


def _substitute(poly, rules):
    """Expand each word under mode-wise linear substitution rules.

    ``rules`` maps (mode, dag) to a list of (coef, (mode, dag)) replacements;
    symbols missing from the map pass through unchanged.
    """
    out = []
    for coef, word in poly:
        terms = [(coef, ())]
        for sym in word:
            repl = rules.get(sym, [(1.0, sym)])
            terms = [(c * rc, w + (rsym,)) for c, w in terms for rc, rsym in repl]
        out.extend(terms)
    return out


def _poly_vacuum(poly) -> float:
    return sum(c * vacuum_expectation(w) for c, w in poly)


def _bogoliubov_rules(rho: float, a: str = "A", l: str = "L"):
    # m sigma = cosh sigma m + sinh sigma n'  for the pair-creation operator
    # exp[rho (a'l' - a l)]; conjugating a word by sigma substitutes mode A
    # and L symbols while leaving mode B untouched.
    ch, sh = math.cosh(rho), math.sinh(rho)
    return {
        (a, False): [(ch, (a, False)), (sh, (l, True))],
        (a, True): [(ch, (a, True)), (sh, (l, False))],
        (l, False): [(ch, (l, False)), (sh, (a, True))],
        (l, True): [(ch, (l, True)), (sh, (a, False))],
    }


def heralded_moment(n_stages: int, kappa: float, rho: float, middle) -> complex:
    """<Psi| M |Psi> for |Psi> = (1 + (kappa/N) a'b')^N sigma_AL^rho |0>.

    ``middle`` is a polynomial (list of (coef, word)) in modes "A" and "B".
    The state is unnormalized; pass ``[(1.0, ())]`` to get the squared norm.
    """
    if n_stages < 1:
        raise ValueError("n_stages must be >= 1")
    k = kappa / n_stages
    rules = _bogoliubov_rules(rho)
    total = 0j
    for i in range(n_stages + 1):
        left = tuple([("B", False)] * i + [("A", False)] * i)
        cl = comb(n_stages, i) * k**i
        for j in range(n_stages + 1):
            right = tuple([("A", True)] * j + [("B", True)] * j)
            cr = comb(n_stages, j) * k**j
            poly = [(cl * cr * c, left + w + right) for c, w in middle]
            total += _poly_vacuum(_substitute(poly, rules))
    return total


def _x_poly(mode: str, sign: str):
    if sign == "+":
        return [(1.0, ((mode, False),)), (1.0, ((mode, True),))]
    # X- = (m - m')/i; products of two X- stay real through the -1 = (1/i)^2
    return [(-1j, ((mode, False),)), (1j, ((mode, True),))]


def _poly_mul(p1, p2):
    return [(c1 * c2, w1 + w2) for c1, w1 in p1 for c2, w2 in p2]


def eps_via_moments(n_stages: int, kappa: float, rho: float) -> float:
    """eps_B|A of the heralded state, from ladder algebra alone."""
    z = heralded_moment(n_stages, kappa, rho, [(1.0, ())]).real
    prod = 1.0
    for sign in ("+", "-"):
        xa, xb = _x_poly("A", sign), _x_poly("B", sign)
        mb = heralded_moment(n_stages, kappa, rho, _poly_mul(xb, xb)).real / z
        ma = heralded_moment(n_stages, kappa, rho, _poly_mul(xa, xa)).real / z
        mab = heralded_moment(n_stages, kappa, rho, _poly_mul(xb, xa)).real / z
        fb = heralded_moment(n_stages, kappa, rho, xb).real / z
        fa = heralded_moment(n_stages, kappa, rho, xa).real / z
        var_b = mb - fb * fb
        var_a = ma - fa * fa
        cov = mab - fa * fb
        prod *= var_b - cov * cov / var_a
    return prod
