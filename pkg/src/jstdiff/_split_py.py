"""Pure-Python split-search kernel (fallback when the compiled one is absent).

Each scan walks one feature column, pre-sorted ascending, and evaluates every
boundary where the value changes: the candidate threshold is the value on the
right of the boundary, rows strictly below go left. The minimum observed value
is therefore never a candidate (its left side would be empty).

Floating-point contract shared with the compiled kernel, bit for bit:
  entropy  = sum over class ids ascending of  -(k / total) * log2(k / total)
  objective = (nL / n) * entL + (nR / n) * entR
  joint     = objective(labels1) + objective(labels2)
Ties are resolved by keeping the first strictly smaller objective, so the
lowest threshold wins within a feature.
"""

from math import log2


def _objective(left, total, n_left, n, n_classes):
    n_right = n - n_left
    ent_left = 0.0
    for c in range(n_classes):
        k = left[c]
        if k:
            p = k / n_left
            ent_left -= p * log2(p)
    ent_right = 0.0
    for c in range(n_classes):
        k = total[c] - left[c]
        if k:
            p = k / n_right
            ent_right -= p * log2(p)
    return (n_left / n) * ent_left + (n_right / n) * ent_right


def scan_single(values, labels, n_classes):
    """Best (threshold, objective) for one sorted column, or None."""
    n = values.shape[0]
    if n < 2 or values[0] == values[n - 1]:
        return None
    vals = values.tolist()
    labs = labels.tolist()
    total = [0] * n_classes
    for lab in labs:
        total[lab] += 1
    left = [0] * n_classes
    left[labs[0]] += 1
    prev = vals[0]
    best_t = 0.0
    best_obj = 0.0
    found = False
    for i in range(1, n):
        v = vals[i]
        if v != prev:
            obj = _objective(left, total, i, n, n_classes)
            if not found or obj < best_obj:
                found = True
                best_t = v
                best_obj = obj
            prev = v
        left[labs[i]] += 1
    return (best_t, best_obj) if found else None


def scan_dual(values, labels1, c1, labels2, c2):
    """Independent argmins for two label vectors over one sorted column.

    Returns a pair of (threshold, objective) or None entries, each exactly
    what scan_single would return for that label vector.
    """
    n = values.shape[0]
    if n < 2 or values[0] == values[n - 1]:
        return None, None
    vals = values.tolist()
    labs1 = labels1.tolist()
    labs2 = labels2.tolist()
    total1 = [0] * c1
    total2 = [0] * c2
    for lab in labs1:
        total1[lab] += 1
    for lab in labs2:
        total2[lab] += 1
    left1 = [0] * c1
    left2 = [0] * c2
    left1[labs1[0]] += 1
    left2[labs2[0]] += 1
    prev = vals[0]
    best_t1 = best_t2 = 0.0
    best_o1 = best_o2 = 0.0
    found = False
    for i in range(1, n):
        v = vals[i]
        if v != prev:
            o1 = _objective(left1, total1, i, n, c1)
            o2 = _objective(left2, total2, i, n, c2)
            if not found:
                found = True
                best_t1 = best_t2 = v
                best_o1, best_o2 = o1, o2
            else:
                if o1 < best_o1:
                    best_o1 = o1
                    best_t1 = v
                if o2 < best_o2:
                    best_o2 = o2
                    best_t2 = v
            prev = v
        left1[labs1[i]] += 1
        left2[labs2[i]] += 1
    if not found:
        return None, None
    return (best_t1, best_o1), (best_t2, best_o2)


def scan_joint(values, labels1, c1, labels2, c2):
    """Argmin of the summed objective over one sorted column, or None."""
    n = values.shape[0]
    if n < 2 or values[0] == values[n - 1]:
        return None
    vals = values.tolist()
    labs1 = labels1.tolist()
    labs2 = labels2.tolist()
    total1 = [0] * c1
    total2 = [0] * c2
    for lab in labs1:
        total1[lab] += 1
    for lab in labs2:
        total2[lab] += 1
    left1 = [0] * c1
    left2 = [0] * c2
    left1[labs1[0]] += 1
    left2[labs2[0]] += 1
    prev = vals[0]
    best_t = 0.0
    best_obj = 0.0
    found = False
    for i in range(1, n):
        v = vals[i]
        if v != prev:
            obj = _objective(left1, total1, i, n, c1) + _objective(
                left2, total2, i, n, c2
            )
            if not found or obj < best_obj:
                found = True
                best_t = v
                best_obj = obj
            prev = v
        left1[labs1[i]] += 1
        left2[labs2[i]] += 1
    return (best_t, best_obj) if found else None
