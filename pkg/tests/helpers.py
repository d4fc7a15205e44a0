"""Semantic ground truth shared by the module tests and the acceptance suite."""

from matroid_mso import setsystem as ss

PREDICATES = ("Basis", "Circuit", "Cocircuit", "Flat", "Hyperplane", "Spanning", "Separator",
              "Component", "Coloop", "Free", "CircHyp", "ParallelClass")


def predicate_oracle(name, m):
    """Subsets of E satisfying the named predicate, from direct matroid computations."""
    if name == "Basis":
        return set(m.bases)
    if name == "Circuit":
        return set(m.circuits)
    if name == "Cocircuit":
        return set(ss.cocircuits(m))
    if name == "Flat":
        return set(ss.flats(m))
    if name == "Hyperplane":
        return set(ss.hyperplanes(m))
    if name == "Spanning":
        return set(ss.spanning_sets(m))
    if name == "Separator":
        return set(ss.separators(m))
    if name == "Component":
        return set(ss.components(m))
    if name == "Coloop":
        return {1 << e for e in ss.coloops(m)}
    if name == "Free":
        return {1 << e for e in ss.free_elements(m)}
    if name == "CircHyp":
        return set(m.circuits) & set(ss.hyperplanes(m))
    if name == "ParallelClass":
        # maximal parallel sets of non-loops; on the empty ground set only ∅ qualifies
        return set(ss.parallel_classes(m)) if m.n else {0}
    raise KeyError(name)


def all_subsets(x):
    s = x
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & x


def expected_outputs(name, m):
    """The setsystem-module construction matching each library transduction."""
    if name == "dual":
        return [ss.dual(m)]
    if name == "simplification":
        return [ss.simplify(m)[0]]
    if name == "components":
        return [ss.restriction(m, c) for c in ss.components(m)]
    if name == "restrictions":
        return [ss.restriction(m, k) for k in range(1 << m.n)]
    if name == "minors":
        return [ss.minor(m, c, k) for c in m.indep for k in all_subsets(m.full & ~c)]
    if name == "relaxation":
        return [ss.relax(m, h) for h in ss.hyperplanes(m) if h in m.circuits]
    raise KeyError(name)


def btt_rhs(t, outputs, phi, theta, lifted_zvars):
    """Right-hand side of the translation theorem, computed through apply().

    ``outputs`` is apply(t, m); theta interprets the lifted Domain variables
    and the free variables of phi.  True iff rho = theta|Z satisfies Domain and
    some Y_X with union theta(X) makes phi true in M_rho.
    """
    from itertools import product

    from matroid_mso.logic import Evaluator

    rho = {z: theta[zl] for z, zl in zip(t.zvars, lifted_zvars)}
    match = [d for d in outputs if d.rho == rho]
    if not match:
        return False
    d = match[0]
    k = len(d.new_elements)
    xs = sorted(phi.free)
    choices = []
    for x in xs:
        c = [i for i in range(1 << k) if d.inverse_image(i) == theta[x]]
        if not c:
            return False
        choices.append(c)
    ev = Evaluator(d.system)
    return any(ev.satisfies(phi, dict(zip(xs, combo))) for combo in product(*choices))
