"""Pure-Python conjunctive triple matcher.

Fallback for the compiled kernel in ``_matchcore``; both implement exactly
the same backtracking join over interned integer triples and must stay
behaviourally identical.

Term encoding within a template position:
  value >= 0  constant label id
  value == -1 wildcard
  value <= -2 variable index ``-2 - value``
"""

from __future__ import annotations

from collections.abc import Sequence

WILDCARD = -1


def _var_index(term: int) -> int:
    return -2 - term


def _match_rule(triples: Sequence[int], n_triples: int, terms: Sequence[int],
                first: int, last: int, n_vars: int) -> bool:
    """True when templates [first, last) admit one consistent assignment."""
    bound = [-1] * n_vars

    def satisfy(template: int) -> bool:
        if template == last:
            return True
        base = template * 3
        for t in range(n_triples):
            newly = []
            ok = True
            for pos in range(3):
                term = terms[base + pos]
                value = triples[t * 3 + pos]
                if term >= 0:
                    if term != value:
                        ok = False
                        break
                elif term != WILDCARD:
                    var = _var_index(term)
                    if bound[var] == -1:
                        bound[var] = value
                        newly.append(var)
                    elif bound[var] != value:
                        ok = False
                        break
            if ok and satisfy(template + 1):
                return True
            for var in newly:
                bound[var] = -1
        return False

    return satisfy(first)


def match_rules(triples: Sequence[int], n_triples: int, terms: Sequence[int],
                offsets: Sequence[int], nvars: Sequence[int]) -> list[bool]:
    """Evaluate every rule against the triple store.

    ``triples`` is a flat array of interned (subject, predicate, object)
    ids; ``offsets`` holds the first template index of each rule plus a
    trailing sentinel; ``nvars`` the per-rule variable count.
    """
    results = []
    for rule in range(len(nvars)):
        results.append(
            _match_rule(triples, n_triples, terms,
                        offsets[rule], offsets[rule + 1], nvars[rule])
        )
    return results
