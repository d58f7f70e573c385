"""Independent brute-force oracles the tests check the library against.

Everything here is deliberately naive and shares no code with the
package: plain sorts over (id, size, score, actual) tuples, literal
pair/sign/subset enumerations, and hand trapezoid sums.
"""

from fractions import Fraction
from itertools import combinations, product

# Entities are (id, size, score, actual) tuples throughout.


def _key(entity, mode):
    _, size, score, actual = entity
    if mode == "score":
        return Fraction(score)
    if mode == "score_density":
        return Fraction(score) / size
    if mode == "actual_density":
        return Fraction(int(actual), size)
    raise ValueError(mode)


def sort_entities(entities, mode):
    return sorted(entities, key=lambda e: (-_key(e, mode), e[0]))


def inspect(entities, x, mode):
    """Walk the ranking, keeping whole entities while LOC fits the budget."""
    total = sum(e[1] for e in entities)
    budget = x * total / 100.0 + 1e-9 * total
    kept = []
    used = 0
    for entity in sort_entities(entities, mode):
        if used + entity[1] <= budget:
            used += entity[1]
            kept.append(entity)
        else:
            break
    return kept

def pofb(entities, x, mode="score"):
    defectives = sum(1 for e in entities if e[3])
    found = sum(1 for e in inspect(entities, x, mode) if e[3])
    return found / defectives


def ifa(entities):
    count = 0
    for entity in sort_entities(entities, "score"):
        if entity[3]:
            return count
        count += 1
    raise AssertionError("no defective entity")


def proportion_inspected(entities, x):
    return len(inspect(entities, x, "score")) / len(entities)


def curve_points(entities, mode):
    total_loc = sum(e[1] for e in entities)
    defectives = sum(1 for e in entities if e[3])
    points = [(0.0, 0.0)]
    loc = 0
    found = 0
    for entity in sort_entities(entities, mode):
        loc += entity[1]
        found += int(entity[3])
        points.append((loc / total_loc, found / defectives))
    return points


def trapezoid(points, x_max=1.0):
    area = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        if x0 >= x_max:
            break
        if x1 <= x_max:
            area += (x1 - x0) * (y0 + y1) / 2.0
        else:
            y_cut = y0 + (y1 - y0) * (x_max - x0) / (x1 - x0)
            area += (x_max - x0) * (y0 + y_cut) / 2.0
            break
    return area


def popt(entities):
    optimal = trapezoid(curve_points(entities, "actual_density"))
    predicted = trapezoid(curve_points(entities, "score_density"))
    return 1.0 - (optimal - predicted)


def auc_pairs(positive_scores, negative_scores):
    """Mann-Whitney by literal pair enumeration, ties counting one half."""
    wins = 0.0
    for p in positive_scores:
        for n in negative_scores:
            if p > n:
                wins += 1.0
            elif p == n:
                wins += 0.5
    return wins / (len(positive_scores) * len(negative_scores))


def auc_roc_sweep(scores, labels):
    """Trapezoid area under the empirical ROC built over distinct scores."""
    n_pos = sum(labels)
    n_neg = len(labels) - n_pos
    thresholds = sorted(set(scores), reverse=True)
    points = [(0.0, 0.0)]
    for t in thresholds:
        tp = sum(1 for s, y in zip(scores, labels) if s >= t and y)
        fp = sum(1 for s, y in zip(scores, labels) if s >= t and not y)
        points.append((fp / n_neg, tp / n_pos))
    points.append((1.0, 1.0))
    area = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        area += (x1 - x0) * (y0 + y1) / 2.0
    return area


def average_ranks(values):
    """Average ranks (1-based) with ties sharing the mean rank."""
    ordered = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(ordered):
        j = i
        while j + 1 < len(ordered) and values[ordered[j + 1]] == values[ordered[i]]:
            j += 1
        mean_rank = (i + j + 2) / 2.0
        for k in range(i, j + 1):
            ranks[ordered[k]] = mean_rank
        i = j + 1
    return ranks


def wilcoxon_enumeration(diffs):
    """Two-sided exact p over all 2^n sign assignments of the ranks."""
    ranks = average_ranks([abs(d) for d in diffs])
    observed = sum(r for r, d in zip(ranks, diffs) if d > 0)
    center = sum(ranks) / 2.0
    observed_dev = abs(observed - center)
    extreme = 0
    n = len(diffs)
    for signs in product((0, 1), repeat=n):
        w_plus = sum(r for r, s in zip(ranks, signs) if s)
        if abs(w_plus - center) >= observed_dev - 1e-12:
            extreme += 1
    return extreme / 2**n


def coverage_enumeration(sets, k):
    """Max distinct elements over every k-subset, by literal enumeration."""
    best = 0
    for combo in combinations(sets, k):
        union = set()
        for s in combo:
            union |= set(s)
        best = max(best, len(union))
    return best
