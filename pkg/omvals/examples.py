"""
Generators for the benchmark families.

- ex1(p, n): (x + p + p^2 + ... + p^20)^n + p^(20n + 1), one totally
  ramified factor of degree n.
- ex2(p, m): prod_k g0(x + 2k) + 2 p^(110m) with g0 = x^10 + 2 p^11, m
  factors of degree 10 (p > 5, m < p/2).
- ex3(p, j): the ladder E_1, ..., E_8, irreducible of Okutsu depth j (p > 3).
- ex4(p, m): the pair (ex1(p, 10m), ex2(p, m)).
- ex5(p, i, j): the pair (E_i, E_j).
"""

import logging
from functools import reduce
from typing import Dict, List, Optional, Tuple, Union

from omvals import config
from omvals.exceptions import ParamOutOfRange
from omvals.polyz import Coeffs, PIntPoly, add, mul, power, require_prime, scale, shift, vp_int

logger = logging.getLogger(__name__)

X: Coeffs = (0, 1)

# Published valuations for the families without a closed form
TABULATED_VALUES: Dict[Tuple, int] = {
    (config.Suite.EX3, 5): 4671,
    (config.Suite.EX3, 6): 18899,
    (config.Suite.EX3, 7): 171383,
    (config.Suite.EX3, 8): 686825,
    (config.Suite.EX5, 5, 6): 9557,
    (config.Suite.EX5, 5, 7): 28671,
    (config.Suite.EX5, 5, 8): 57342,
    (config.Suite.EX5, 6, 7): 57343,
    (config.Suite.EX5, 6, 8): 114686,
    (config.Suite.EX5, 7, 8): 344059,
}


def ex1(p: int, n: int) -> PIntPoly:
    require_prime(p)
    if n < 1:
        raise ParamOutOfRange(f"ex1 needs n >= 1, got {n}")
    c = sum(p**k for k in range(1, 21))
    return PIntPoly(add(power((c, 1), n), (p ** (20 * n + 1),)))


def ex2(p: int, m: int) -> PIntPoly:
    require_prime(p)
    if p <= 5 or not 1 <= m or 2 * m >= p:
        raise ParamOutOfRange(f"ex2 needs p > 5 and 1 <= m < p/2, got p={p}, m={m}")
    g0 = add(power(X, 10), (2 * p**11,))
    product = reduce(mul, (shift(g0, 2 * k) for k in range(m)), (1,))
    return PIntPoly(add(product, (2 * p ** (110 * m),)))


def ladder(p: int, depth: int = 8) -> List[Coeffs]:
    """E_1, ..., E_depth."""
    require_prime(p)
    if p <= 3:
        raise ParamOutOfRange(f"ex3 needs p > 3, got p={p}")
    if not 1 <= depth <= 8:
        raise ParamOutOfRange(f"ex3 ladder has 8 steps, got {depth}")
    q = p - 1
    e: List[Coeffs] = [()]
    e.append(add(power(X, 2), (p,)))
    steps = [
        lambda: add(power(e[1], 2), scale(X, q * p**3)),
        lambda: add(power(e[2], 3), (p**11,)),
        lambda: add(power(e[3], 3), scale(mul(X, e[2]), p**29)),
        lambda: add(power(e[4], 2), scale(mul(mul(X, e[1]), power(e[3], 2)), q * p**42)),
        lambda: add(power(e[5], 2), scale(mul(mul(X, e[3]), e[4]), p**88)),
        lambda: add(power(e[6], 3), scale(mul(mul(e[2], e[4]), e[5]), p**295)),
        lambda: add(
            power(e[7], 2),
            scale(
                reduce(mul, (X, e[1], power(e[2], 2), power(e[3], 2), e[6])),
                q * p**632,
            ),
        ),
    ]
    for step in steps[: depth - 1]:
        e.append(step())
    return e[1:]


def ex3(p: int, j: int) -> PIntPoly:
    return PIntPoly(ladder(p, j)[j - 1])


def ex4(p: int, m: int) -> Tuple[PIntPoly, PIntPoly]:
    return ex1(p, 10 * m), ex2(p, m)


def ex5(p: int, i: int, j: int) -> Tuple[PIntPoly, PIntPoly]:
    if not 1 <= i <= 8 or not 1 <= j <= 8:
        raise ParamOutOfRange(f"ex5 indices must lie in 1..8, got {i}, {j}")
    chain = ladder(p, max(i, j))
    return PIntPoly(chain[i - 1]), PIntPoly(chain[j - 1])


_GENERATORS = {
    config.Suite.EX1: (ex1, ("p", "n")),
    config.Suite.EX2: (ex2, ("p", "m")),
    config.Suite.EX3: (ex3, ("p", "j")),
    config.Suite.EX4: (ex4, ("p", "m")),
    config.Suite.EX5: (ex5, ("p", "i", "j")),
}


def generate_example(
    example: str, **params: int
) -> Union[PIntPoly, Tuple[PIntPoly, PIntPoly]]:
    """
    Build a family member by identifier.

    Returns:
        A polynomial for ex1-ex3, a pair for the resultant families ex4 and ex5

    Raises:
        ParamOutOfRange: unknown identifier, missing parameter or invalid range
    """
    if example not in _GENERATORS:
        raise ParamOutOfRange(f"unknown example {example!r}; expected one of {config.Suite.ALL}")
    generator, names = _GENERATORS[example]
    missing = [name for name in names if params.get(name) is None]
    if missing:
        raise ParamOutOfRange(f"{example} needs parameters {', '.join(missing)}")
    return generator(*(params[name] for name in names))


def is_pair(example: str) -> bool:
    return example in (config.Suite.EX4, config.Suite.EX5)


def expected_value(example: str, **params: int) -> Optional[int]:
    """The known valuation for a family member, when there is one."""
    p = params.get("p")
    if example == config.Suite.EX1:
        n = params["n"]
        return (20 * n + 1) * (n - 1) + n * vp_int(p, n)
    if example == config.Suite.EX2:
        return 99 * params["m"]
    if example == config.Suite.EX4:
        return 100 * params["m"]
    if example == config.Suite.EX3:
        return TABULATED_VALUES.get((example, params["j"]))
    if example == config.Suite.EX5:
        i, j = sorted((params["i"], params["j"]))
        return TABULATED_VALUES.get((example, i, j))
    return None
