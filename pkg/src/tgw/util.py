import re

_DIGITS = re.compile(r"(\d+)")


def natural_key(s: str):
    """Sort key treating digit runs numerically, so ``v2 < v10``.

    Agrees with plain lexicographic order whenever no two ids differ only in
    the length of an embedded number.
    """
    return tuple((0, int(tok)) if tok.isdigit() else (1, tok) for tok in _DIGITS.split(s) if tok != "") or ((1, ""),)


def sorted_ids(ids):
    return sorted(ids, key=natural_key)


# Sparse integer vectors (elements of ZV / ZE) are plain dicts id -> int with no
# zero entries.  These helpers keep them canonical.

def vec_add(a: dict, b: dict, scale: int = 1) -> dict:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, 0) + scale * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vec_clean(a: dict) -> dict:
    return {k: v for k, v in a.items() if v}


def vec_key(a: dict) -> tuple:
    """Hashable canonical form of a sparse vector."""
    return tuple(sorted(((k, v) for k, v in a.items() if v), key=lambda kv: natural_key(kv[0])))
