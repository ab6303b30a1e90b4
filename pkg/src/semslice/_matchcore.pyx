# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled conjunctive triple matcher.

Hot kernel of task extraction: one call per stream per tick.  Mirrors
``_match_py`` exactly; see that module for the term encoding.
"""

cdef int WILDCARD = -1
cdef int MAX_VARS = 64


cdef bint _satisfy(const int[::1] triples, int n_triples, const int[::1] terms,
                   int template, int last, int* bound) noexcept:
    cdef int t, pos, term, value, var, k
    cdef int newly[3]
    cdef int n_newly
    cdef bint ok
    if template == last:
        return True
    cdef int base = template * 3
    for t in range(n_triples):
        n_newly = 0
        ok = True
        for pos in range(3):
            term = terms[base + pos]
            value = triples[t * 3 + pos]
            if term >= 0:
                if term != value:
                    ok = False
                    break
            elif term != WILDCARD:
                var = -2 - term
                if bound[var] == -1:
                    bound[var] = value
                    newly[n_newly] = var
                    n_newly += 1
                elif bound[var] != value:
                    ok = False
                    break
        if ok and _satisfy(triples, n_triples, terms, template + 1, last, bound):
            return True
        for k in range(n_newly):
            bound[newly[k]] = -1
    return False


def match_rules(const int[::1] triples, int n_triples, const int[::1] terms,
                const int[::1] offsets, const int[::1] nvars):
    """Evaluate every rule; returns one bool per rule."""
    cdef int bound[64]
    cdef int rule, v, n_vars
    cdef list results = []
    for rule in range(nvars.shape[0]):
        n_vars = nvars[rule]
        if n_vars > MAX_VARS:
            raise ValueError("rule exceeds variable limit")
        for v in range(n_vars):
            bound[v] = -1
        results.append(
            _satisfy(triples, n_triples, terms, offsets[rule],
                     offsets[rule + 1], bound) != 0
        )
    return results
