"""Meridian presentations of the curve-piece complement and the
finite-quotient knottedness certificate.

The presentation assigns n generators per region of the disc minus the
coincidence graph.  Crossing an interior edge with label i positively
from region U to region U' imposes the Wirtinger-type relations

    a_k(U)   = a_k(U')                    k not in {i, i+1}
    a_{i+1}(U) = a_i(U')
    a_i(U)   = a_{i+1}(U) a_{i+1}(U') a_{i+1}(U)^-1

and a branch terminal with label i inside region U imposes the
vanishing-cycle relation a_i(U) = a_{i+1}(U).

Homomorphism counting into small symmetric groups is an exhaustive
backtracking search with relator propagation; a surjection onto a
nonabelian target certifies that the group is not cyclic.
"""

import itertools
import json
import math
from dataclasses import dataclass, field

from .config import DEFAULT, Tolerances
from .errors import BudgetExceeded, InputError, NonSimpleTerminal
from .snf import smith_normal_form


def _free_reduce(word):
    out = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return out


def _substitute(word, gen, repl):
    """Replace gen by the word repl (and its inverse accordingly)."""
    inv = [(g, -e) for g, e in reversed(repl)]
    out = []
    for g, e in word:
        if g == gen:
            out.extend(repl if e > 0 else inv)
        else:
            out.append((g, e))
    return _free_reduce(out)


@dataclass
class Presentation:
    """generators: list of opaque labels; relators: words over generator
    indices, each word a list of (index, +-1) meaning the word equals 1."""

    generators: list
    relators: list
    # words expressing the original generators in terms of the current
    # ones; filled by tietze_simplify so certificates can be pulled back
    origin_words: dict = field(default_factory=dict)

    def gen_index(self, label):
        return self.generators.index(label)

    def to_json(self):
        return json.dumps(
            {
                "generators": [str(g) for g in self.generators],
                "relators": [
                    [[i, e] for i, e in r] for r in self.relators
                ],
            },
            sort_keys=True,
        )

    def pretty(self, names=None):
        names = names or [str(g) for g in self.generators]

        def w(word):
            if not word:
                return "1"
            parts = []
            for g, e in word:
                parts.append(names[g] + ("" if e == 1 else f"^{e}"))
            return "*".join(parts)

        lines = ["generators: " + ", ".join(names)]
        for r in self.relators:
            lines.append("relator: " + w(r))
        return "\n".join(lines)


def meridian_label(strand, region):
    """Generator id a_strand(U_region); region is 0-based internally."""
    return (strand, region)


def build_presentation(rmap, n: int) -> Presentation:
    """Meridian presentation of the complement from a region decomposition."""
    gens = [meridian_label(i, j) for j in range(len(rmap.regions))
            for i in range(1, n + 1)]
    gi = {g: k for k, g in enumerate(gens)}
    relators = []

    def eq(a, b):
        relators.append(_free_reduce([(gi[a], 1), (gi[b], -1)]))

    for e in rmap.edges:
        if getattr(e, "terminal", False):
            continue  # stubs contribute the vanishing-cycle relation below
        i = e.label
        if not (1 <= i <= n - 1):
            raise InputError(f"edge label {i} out of range for {n} strands")
        u, v = e.from_region, e.to_region
        for k in range(1, n + 1):
            if k not in (i, i + 1):
                eq(meridian_label(k, u), meridian_label(k, v))
        eq(meridian_label(i + 1, u), meridian_label(i, v))
        a = gi[meridian_label(i, u)]
        b = gi[meridian_label(i + 1, u)]
        c = gi[meridian_label(i + 1, v)]
        relators.append(_free_reduce([(a, 1), (b, 1), (c, -1), (b, -1)]))
    for (_, reg, lab) in rmap.branch_terminals:
        if not (1 <= lab <= n - 1):
            raise NonSimpleTerminal(f"terminal label {lab} out of range")
        eq(meridian_label(lab, reg), meridian_label(lab + 1, reg))
    return Presentation(gens, relators)


def free_presentation(n):
    return Presentation(list(range(n)), [])


def tietze_simplify(p: Presentation) -> Presentation:
    """Eliminate generators defined by a relator containing them once.

    Preserves the group up to isomorphism and records, for every original
    generator, a word in the surviving generators (origin_words).
    """
    gens = list(p.generators)
    relators = [_free_reduce(list(r)) for r in p.relators]
    origin = {g: [(k, 1)] for k, g in enumerate(gens)}

    def occurrences(word, g):
        return sum(1 for x, _ in word if x == g)

    changed = True
    while changed:
        changed = False
        relators = [r for r in relators if r]
        # pick the elimination producing the shortest substitution word
        best = None
        for ri, r in enumerate(relators):
            for pos, (g, e) in enumerate(r):
                if occurrences(r, g) == 1:
                    rot = r[pos + 1:] + r[:pos]
                    # r ~ g^e * rot = 1  =>  g^e = rot^-1
                    repl = [(x, -f) for x, f in reversed(rot)]
                    if e < 0:
                        repl = [(x, -f) for x, f in reversed(repl)]
                    if best is None or len(repl) < len(best[2]):
                        best = (ri, g, repl)
            if best is not None and len(best[2]) <= 1:
                break
        if best is None:
            break
        ri, g, repl = best
        del relators[ri]
        relators = [_substitute(r, g, repl) for r in relators]
        for k in origin:
            origin[k] = _substitute(origin[k], g, repl)
        changed = True
        # drop the generator, reindexing words
        live = [k for k in range(len(gens)) if k != g]
        remap = {old: new for new, old in enumerate(live)}
        gens = [gens[k] for k in live]
        relators = [[(remap[x], f) for x, f in r] for r in relators]
        origin = {k: [(remap[x], f) for x, f in w] for k, w in origin.items()}
    relators = sorted(
        (r for r in relators if r), key=lambda r: (len(r), r)
    )
    out = Presentation(gens, relators)
    out.origin_words = origin
    return out


def abelianization(p: Presentation):
    """(free_rank, torsion invariant factors > 1) of the abelianized group."""
    ngen = len(p.generators)
    if not p.relators:
        return ngen, []
    rows = []
    for r in p.relators:
        row = [0] * ngen
        for g, e in r:
            row[g] += e
        rows.append(row)
    diag = smith_normal_form(rows)
    rank = sum(1 for d in diag if d != 0)
    torsion = [d for d in diag if d > 1]
    return ngen - rank, torsion


# --- symmetric group helpers --------------------------------------------


def sym_elements(m):
    """All permutations of {0..m-1} as tuples, in lexicographic order."""
    return list(itertools.permutations(range(m)))


def _compose(a, b):
    """a then b (left-to-right composition)."""
    return tuple(b[x] for x in a)


def _inverse(a):
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def _eval_word(word, images, identity):
    acc = identity
    for g, e in word:
        acc = _compose(acc, images[g] if e > 0 else _inverse(images[g]))
    return acc


def _generates_all(images, m):
    order = math.factorial(m)
    identity = tuple(range(m))
    seen = {identity}
    frontier = [identity]
    gens = [g for g in images if g != identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
        if len(seen) == order:
            return True
    return len(seen) == order


def count_homs(p: Presentation, m: int, budget: int = None,
               cfg: Tolerances = DEFAULT):
    """Exhaustive count of homomorphisms into the symmetric group S_m.

    Returns (total, surjective, witness) where witness is a tuple of
    generator images (permutations of {0..m-1}) of the first surjection
    found in search order, or None.
    """
    budget = budget or cfg.hom_budget
    elements = sym_elements(m)
    identity = tuple(range(m))
    ngen = len(p.generators)
    # relators checkable once all their generators are assigned
    by_last = [[] for _ in range(ngen + 1)]
    for r in p.relators:
        if not r:
            continue
        last = max(g for g, _ in r)
        by_last[last + 1].append(r)
    total = 0
    surjective = 0
    witness = None
    nodes = 0
    images = [identity] * ngen

    def rec(k):
        nonlocal total, surjective, witness, nodes
        if k == ngen:
            total += 1
            if _generates_all(images, m):
                surjective += 1
                if witness is None:
                    witness = tuple(images)
            return
        for el in elements:
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(
                    f"hom search exceeded budget of {budget} nodes"
                )
            images[k] = el
            ok = all(
                _eval_word(r, images, identity) == identity
                for r in by_last[k + 1]
            )
            if ok:
                rec(k + 1)
        images[k] = identity

    rec(0)
    return total, surjective, witness


@dataclass
class Certificate:
    certified: bool
    target: int = None            # symmetric group degree of the witness
    witness: tuple = None         # images of the simplified generators
    surjective_count: int = 0
    total_count: int = 0


def is_noncyclic_certificate(p: Presentation, targets=(3,),
                             cfg: Tolerances = DEFAULT) -> Certificate:
    """Search for a surjection onto a nonabelian symmetric group.

    A surjection onto S_m (m >= 3) is impossible for a cyclic group, so a
    witness certifies non-cyclicity.  Absence of a witness across all
    targets is inconclusive, not a proof of cyclicity.
    """
    simp = tietze_simplify(p)
    for m in targets:
        if m < 3:
            raise InputError("targets must be symmetric groups S_m, m >= 3")
        total, surj, witness = count_homs(simp, m, cfg=cfg)
        if surj > 0:
            return Certificate(True, m, witness, surj, total)
    return Certificate(False)
