"""Permutations and exact permutation-group certification.

Convention used everywhere: ``compose(a, b)`` applies ``b`` first, then ``a``,
i.e. ``compose(a, b)[i] == a[b[i]]``.  If a strand starting at point ``i``
ends at ``perm[i]``, then running loop L and afterwards loop M gives
``compose(perm_M, perm_L)``.
"""

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

__all__ = [
    "Permutation",
    "compose",
    "inverse",
    "identity",
    "cycle_type",
    "PermGroup",
    "group_order",
    "is_transitive",
    "is_2_transitive",
    "is_symmetric",
    "orbits",
    "brute_force_order",
    "restrict",
    "LemmaActVerdict",
    "lemma_act_check",
]


@dataclass(frozen=True)
class Permutation:
    images: tuple

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError("images do not form a bijection of 0..n-1")
        object.__setattr__(self, "images", imgs)

    @property
    def degree(self):
        return len(self.images)

    def __len__(self):
        return len(self.images)

    def __getitem__(self, i):
        return self.images[i]

    def __call__(self, i):
        return self.images[i]

    def __mul__(self, other):
        return compose(self, other)

    def __pow__(self, k):
        result = identity(self.degree)
        base = self if k >= 0 else inverse(self)
        for _ in range(abs(k)):
            result = compose(base, result)
        return result

    def is_identity(self):
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self):
        """Non-trivial cycles, each starting at its smallest point."""
        seen = [False] * self.degree
        out = []
        for i in range(self.degree):
            if seen[i]:
                continue
            cyc = [i]
            seen[i] = True
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def order(self):
        return math.lcm(*cycle_type(self)) if self.degree else 1

    @classmethod
    def from_cycles(cls, n, cycles):
        img = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
        return cls(img)

    def to_json(self):
        return list(self.images)

    @classmethod
    def from_json(cls, data):
        return cls(data)

    def __repr__(self):
        cyc = "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles())
        return f"Permutation({cyc or '()'}, n={self.degree})"


def _check(a, b):
    if a.degree != b.degree:
        raise ValueError(f"degree mismatch: {a.degree} vs {b.degree}")


def compose(a, b):
    """Apply b, then a."""
    _check(a, b)
    ai = a.images
    return Permutation(tuple(ai[j] for j in b.images))


def inverse(a):
    inv = [0] * a.degree
    for i, j in enumerate(a.images):
        inv[j] = i
    return Permutation(inv)


def identity(n):
    return Permutation(range(n))


def cycle_type(a):
    """Cycle lengths including fixed points, in decreasing order."""
    seen = [False] * a.degree
    lengths = []
    for i in range(a.degree):
        if not seen[i]:
            n = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = a.images[j]
                n += 1
            lengths.append(n)
    return tuple(sorted(lengths, reverse=True))


def _degree_of(gens, n):
    if n is not None:
        return n
    if not gens:
        raise ValueError("degree needed for an empty generating set")
    return gens[0].degree


# -- orbits ---------------------------------------------------------------------

def _orbit(point, gens):
    seen = {point}
    queue = deque([point])
    while queue:
        p = queue.popleft()
        for g in gens:
            q = g.images[p]
            if q not in seen:
                seen.add(q)
                queue.append(q)
    return seen


def orbits(gens, n=None):
    n = _degree_of(gens, n)
    left = set(range(n))
    out = []
    for p in range(n):
        if p in left:
            orb = _orbit(p, gens)
            out.append(sorted(orb))
            left -= orb
    return out


def is_transitive(gens, n=None):
    n = _degree_of(gens, n)
    return n <= 1 or len(_orbit(0, gens)) == n


def is_2_transitive(gens, n=None):
    """Transitive on ordered pairs of distinct points."""
    n = _degree_of(gens, n)
    if n <= 2:
        return is_transitive(gens, n) if n < 2 else any(not g.is_identity() for g in gens)
    start = (0, 1)
    seen = {start}
    queue = deque([start])
    while queue:
        a, b = queue.popleft()
        for g in gens:
            q = (g.images[a], g.images[b])
            if q not in seen:
                seen.add(q)
                queue.append(q)
    return len(seen) == n * (n - 1)


# -- Schreier-Sims -------------------------------------------------------------

def _inv(a):
    out = np.empty_like(a)
    out[a] = np.arange(len(a))
    return out


class PermGroup:
    """Group generated by ``gens``; base and strong generators built lazily.

    Deterministic Schreier-Sims: the first base point starts the largest
    orbit, later ones are taken from the longest cycle of the element that
    forced a new level.  Transversals only ever grow, so Schreier generators
    already sifted to the identity never need re-testing.
    """

    def __init__(self, gens, n=None):
        self.gens = list(gens)
        self.degree = _degree_of(self.gens, n)
        for g in self.gens:
            if g.degree != self.degree:
                raise ValueError("generators of different degrees")
        self._built = False

    def _build(self):
        n = self.degree
        self._base, self._strong = [], []
        self._trans, self._orbit, self._lgens, self._tested = [], [], [], []
        gens = [np.array(g.images) for g in self.gens if not g.is_identity()]
        self._built = True
        if not gens:
            return
        orbs = orbits([g for g in self.gens if not g.is_identity()], n)
        self._new_level(max(orbs, key=len)[0])
        for g in gens:
            self._add_strong(g)
        i = len(self._base) - 1
        while i >= 0:
            j = self._check_level(i)
            i = i - 1 if j is None else j

    def _new_level(self, point):
        n = self.degree
        e = np.arange(n)
        self._base.append(point)
        self._trans.append({point: (e, e)})
        self._orbit.append([point])
        self._lgens.append([])
        self._tested.append(set())

    def _pick_base(self, g):
        used = set(self._base)
        best = None
        for cyc in Permutation(g).cycles():
            pt = next((p for p in cyc if p not in used), None)
            if pt is not None and (best is None or len(cyc) > best[0]):
                best = (len(cyc), pt)
        return best[1]

    def _add_strong(self, g):
        """Register g in every level whose earlier base points it fixes."""
        k = 0
        while k < len(self._base) and g[self._base[k]] == self._base[k]:
            k += 1
        if k == len(self._base):
            self._new_level(self._pick_base(g))
        idx = len(self._strong)
        self._strong.append(g)
        for level in range(k + 1):
            self._lgens[level].append(idx)
            self._extend(level)
        return k

    def _extend(self, level):
        trans, orbit = self._trans[level], self._orbit[level]
        i = 0
        while i < len(orbit):
            u = trans[orbit[i]][0]
            for idx in self._lgens[level]:
                g = self._strong[idx]
                q = int(g[orbit[i]])
                if q not in trans:
                    w = g[u]
                    trans[q] = (w, _inv(w))
                    orbit.append(q)
            i += 1

    def _sift(self, g, start=0):
        for k in range(start, len(self._base)):
            b = int(g[self._base[k]])
            rep = self._trans[k].get(b)
            if rep is None:
                return g, k
            g = rep[1][g]
        return g, len(self._base)

    def _check_level(self, i):
        """Sift untested Schreier generators of level i; return the level to revisit."""
        trans, tested = self._trans[i], self._tested[i]
        for beta in list(self._orbit[i]):
            u = trans[beta][0]
            for idx in list(self._lgens[i]):
                if (beta, idx) in tested:
                    continue
                tested.add((beta, idx))
                x = self._strong[idx]
                h = trans[int(x[beta])][1][x[u]]
                r, j = self._sift(h, i + 1)
                if not np.array_equal(r, np.arange(self.degree)):
                    self._add_strong(r)
                    return min(j, len(self._base) - 1)
        return None

    # public ------------------------------------------------------------------
    def _ensure(self):
        if not self._built:
            self._build()

    def base(self):
        self._ensure()
        return list(self._base)

    def strong_generators(self):
        self._ensure()
        return [Permutation(g) for g in self._strong]

    def transversal_sizes(self):
        self._ensure()
        return [len(t) for t in self._trans]

    def order(self):
        out = 1
        for size in self.transversal_sizes():
            out *= size
        return out

    def contains(self, g):
        if g.degree != self.degree:
            return False
        self._ensure()
        r, _ = self._sift(np.array(g.images))
        return bool(np.array_equal(r, np.arange(self.degree)))

    def is_symmetric(self):
        return self.order() == math.factorial(self.degree)


def group_order(gens, n=None):
    """Exact order (Python int) of the group generated by ``gens``."""
    if not gens:
        return 1
    return PermGroup(gens, n).order()


def is_symmetric(gens, n=None):
    n = _degree_of(gens, n)
    return group_order(gens, n) == math.factorial(n)


def brute_force_order(gens, n=None, limit=10_000):
    """Closure by breadth-first multiplication; only meant for tiny groups."""
    n = _degree_of(gens, n)
    if n > 7:
        raise ValueError("brute-force closure is limited to n <= 7")
    e = identity(n)
    seen = {e.images}
    queue = deque([e])
    while queue:
        a = queue.popleft()
        for g in gens:
            b = compose(g, a)
            if b.images not in seen:
                seen.add(b.images)
                queue.append(b)
                if len(seen) > limit:
                    raise RuntimeError("closure exceeded limit")
    return len(seen)


def restrict(g, subset):
    """Action of g on an invariant subset, relabelled 0..len(subset)-1."""
    subset = list(subset)
    pos = {p: i for i, p in enumerate(subset)}
    try:
        return Permutation([pos[g.images[p]] for p in subset])
    except KeyError:
        raise ValueError("subset is not invariant under the permutation") from None


# -- the transposition criterion ----------------------------------------------

@dataclass
class LemmaActVerdict:
    m: int
    m1: int
    transitive: bool
    g1_preserves_m1: bool
    size_condition: bool
    g1_two_transitive_on_m1: bool
    g1_in_g: bool
    witness_is_transposition: bool
    witness_recorded: bool
    order: int
    order_is_factorial: bool
    notes: list = field(default_factory=list)

    @property
    def hypotheses_hold(self):
        return (self.transitive and self.g1_preserves_m1 and self.size_condition
                and self.g1_two_transitive_on_m1 and self.g1_in_g
                and self.witness_is_transposition and self.witness_recorded)

    @property
    def conclusion(self):
        """G = S_m when the hypotheses hold, otherwise undecided (None)."""
        return True if self.hypotheses_hold else None

    @property
    def consistent(self):
        """The order computation never contradicts a drawn conclusion."""
        return self.conclusion is None or self.order_is_factorial

    def to_json(self):
        d = dict(self.__dict__)
        d["order"] = str(self.order)
        d["hypotheses_hold"] = self.hypotheses_hold
        d["conclusion"] = self.conclusion
        return d


def lemma_act_check(g_gens, g1_gens, m1_set, witness: Optional[Permutation] = None,
                    recorded=None, n=None):
    """Check the hypotheses of the transposition criterion for G = <g_gens>.

    A transitive G on m points that contains a subgroup G1 (generated by
    ``g1_gens``) preserving a set M1 of size m1 with 2*m1 >= m+2 and acting
    2-transitively on it, and which also contains a transposition, is the full
    symmetric group.  The witness transposition must appear among ``recorded``
    (monodromy outputs); when ``recorded`` is None the generators are used.
    The verdict also carries the exact order as an independent cross-check.
    """
    m = _degree_of(list(g_gens) or list(g1_gens), n)
    M1 = sorted(set(m1_set))
    if any(not 0 <= p < m for p in M1):
        raise ValueError("M1 must be a subset of 0..m-1")
    G = PermGroup(list(g_gens), m)
    notes = []
    preserves = all(all(g.images[p] in set(M1) for p in M1) for g in g1_gens)
    if preserves and M1:
        restricted = [restrict(g, M1) for g in g1_gens]
        two_trans = is_2_transitive(restricted, len(M1))
    else:
        two_trans = False
        if not preserves:
            notes.append("a G1 generator moves M1 off itself")
    in_g = all(G.contains(g) for g in g1_gens)
    is_tr = witness is not None and sorted(cycle_type(witness)) == [1] * (m - 2) + [2]
    pool = list(g_gens) if recorded is None else list(recorded)
    rec = witness is not None and any(witness == r for r in pool)
    order = G.order()
    return LemmaActVerdict(
        m=m,
        m1=len(M1),
        transitive=is_transitive(list(g_gens), m),
        g1_preserves_m1=preserves,
        size_condition=2 * len(M1) >= m + 2,
        g1_two_transitive_on_m1=two_trans,
        g1_in_g=in_g,
        witness_is_transposition=is_tr,
        witness_recorded=rec,
        order=order,
        order_is_factorial=order == math.factorial(m),
        notes=notes,
    )
