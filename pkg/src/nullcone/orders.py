"""Monomial orders on exponent vectors.

An order supplies a sort key on exponent tuples; larger key means larger
monomial.  All three orders refine divisibility and are multiplicative.
"""


class MonomialOrder:
    name = "abstract"

    def key(self, exps):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return self.name


def _grevlex_key(exps):
    return (sum(exps), tuple(-e for e in reversed(exps)))


class GrevlexOrder(MonomialOrder):
    """Degree reverse lexicographic order."""

    name = "grevlex"

    def key(self, exps):
        return _grevlex_key(exps)


class LexOrder(MonomialOrder):
    """Pure lexicographic order."""

    name = "lex"

    def key(self, exps):
        return exps


class BlockOrder(MonomialOrder):
    """Elimination order: grevlex on the front block, ties by grevlex behind.

    Any monomial containing a front-block variable beats every monomial
    without one, so a Groebner basis under this order eliminates exactly the
    front block.
    """

    def __init__(self, front_size: int):
        if front_size <= 0:
            raise ValueError("front block must be nonempty")
        self.front_size = front_size
        self.name = f"block-elimination({front_size})"

    def key(self, exps):
        k = self.front_size
        return (_grevlex_key(exps[:k]), _grevlex_key(exps[k:]))


GREVLEX = GrevlexOrder()
LEX = LexOrder()


def order_from_name(name: str) -> MonomialOrder:
    if name == "grevlex":
        return GREVLEX
    if name == "lex":
        return LEX
    if name.startswith("block-elimination(") and name.endswith(")"):
        return BlockOrder(int(name[len("block-elimination("):-1]))
    raise ValueError(f"unknown monomial order {name!r}")
